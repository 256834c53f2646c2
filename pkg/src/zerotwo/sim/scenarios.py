"""The shipped scenario catalog: one happy path and the adversarial runs.

Each scenario is an ordered script with an expected outcome per step; the
runner flags the first divergence. All of them are deterministic under a
fixed randomness tape.
"""

from __future__ import annotations

import json
import threading

from ..authenticator import ServerRejected, TamperDetected
from ..authenticator.passphrase import PassphraseSpec, generate_passphrase
from ..core import MasterSecret, compute_verifier, derive_effective_secret
from ..core.errors import ZeroTwoError
from ..server.service import GoneError
from .attack import dictionary_attack
from .harness import Scenario, ScenarioContext
from .transport import Interceptor

WEAK_SECRET = "password123"


def _device_secret(ctx: ScenarioContext, value: str | None = None) -> MasterSecret:
    """Put a master secret into the device store and track its bytes."""
    if value is None:
        secret = generate_passphrase(PassphraseSpec(), ctx.rng)
    else:
        secret = MasterSecret.from_text(value)
    ctx.store.add_secret(secret)
    ctx.track_secret(f"secret.{len(ctx.secrets)}", secret.as_bytes())
    return secret


def _signup_and_enroll(ctx: ScenarioContext, user: str, secret: MasterSecret) -> None:
    response = ctx.transport.post("/signup", json={"iu": user})
    assert response.status_code == 200, response.status_code
    ctx.authenticator.handle_enroll_payload(response.json()["qr_payload"])


def _browser_login(ctx: ScenarioContext, user: str) -> dict:
    response = ctx.transport.post("/login/init", json={"iu": user})
    assert response.status_code == 200
    return response.json()


def _approve_from_poll(
    ctx: ScenarioContext, user: str, duration: int = 3600
) -> tuple[str, str]:
    pending = ctx.authenticator.poll_pending(user)
    challenge = pending["logins"][-1]
    session_id = ctx.authenticator.approve_login(
        challenge, ctx.confirmer, duration=duration
    )
    return challenge["login_id"], session_id


def happy_path(ctx: ScenarioContext) -> None:
    secret = _device_secret(ctx)
    response = ctx.transport.post("/signup", json={"iu": "alice"})
    ctx.step("signup", "ok" if response.status_code == 200 else "error")
    label = ctx.authenticator.handle_enroll_payload(response.json()["qr_payload"])
    ctx.step("enroll", "enrolled" if label else "error")

    challenge = _browser_login(ctx, "alice")
    ctx.step("login-init", "challenge-issued")
    device_view = ctx.authenticator.poll_pending("alice")["logins"][-1]
    ctx.step(
        "fingerprints-match",
        "match" if device_view["fingerprint"] == challenge["fingerprint"] else "tamper",
    )
    session_id = ctx.authenticator.approve_login(device_view, ctx.confirmer)
    ctx.track_login_secrets("alice", challenge["login_id"], secret)
    ctx.step("approve", "session-established")

    status = ctx.transport.get(f"/login/status/{challenge['login_id']}").json()
    ctx.step("browser-status", status["state"])

    authz = ctx.transport.post(
        "/authz/request", json={"session_id": session_id, "o": "delete account"}
    )
    ctx.step("authz-request", "pending" if authz.status_code == 200 else "error")
    prompt = ctx.authenticator.poll_pending("alice")["authorizations"][-1]
    sent = ctx.authenticator.confirm_authorization(prompt, ctx.confirmer)
    ctx.step("authz-confirm", "confirmed" if sent else "declined")
    verdict = ctx.transport.get(f"/authz/status/{prompt['auth_id']}").json()
    ctx.step("authz-status", verdict["state"])

    ctx.authenticator.remote_logout(session_id)
    ctx.step("remote-logout", "revoked")


HAPPY_EXPECTED = [
    ("signup", "ok"),
    ("enroll", "enrolled"),
    ("login-init", "challenge-issued"),
    ("fingerprints-match", "match"),
    ("approve", "session-established"),
    ("browser-status", "ok"),
    ("authz-request", "pending"),
    ("authz-confirm", "confirmed"),
    ("authz-status", "confirmed"),
    ("remote-logout", "revoked"),
]


def wrong_secret(ctx: ScenarioContext) -> None:
    # alice enrolled with the right secret via the wire, but this device
    # holds a different one
    right = MasterSecret.from_text("the genuine master secret")
    ctx.track_secret("right.p", right.as_bytes())
    signup = ctx.transport.post("/signup", json={"iu": "alice"})
    payload = json.loads(signup.json()["qr_payload"])
    from ..core import IdentityPair

    identity = IdentityPair(payload["iu"], payload["is"])
    verifier = compute_verifier(derive_effective_secret(identity, right), ctx.group)
    enroll = ctx.transport.post(
        "/enroll", json={"iu": "alice", "v": f"{verifier:x}"}
    )
    ctx.step("enroll", "ok" if enroll.status_code == 204 else "error")

    wrong = _device_secret(ctx, "an impostor guess")
    ctx.store.add_account("alice-wrong", identity, ctx.store.secret_ids()[-1])
    ctx.store.mark_enrolled("alice-wrong")

    challenge = _browser_login(ctx, "alice")
    ctx.step("login-init", "challenge-issued")
    device_view = ctx.authenticator.poll_pending("alice")["logins"][-1]
    try:
        ctx.authenticator.approve_login(device_view, ctx.confirmer)
        ctx.step("approve", "accepted")
    except ServerRejected as exc:
        ctx.step("approve", f"rejected-{exc.status_code}")
    status = ctx.transport.get(f"/login/status/{challenge['login_id']}").json()
    ctx.step("browser-status", status["state"])


WRONG_SECRET_EXPECTED = [
    ("enroll", "ok"),
    ("login-init", "challenge-issued"),
    ("approve", "rejected-401"),
    ("browser-status", "failed"),
]


def tampered_challenge(ctx: ScenarioContext) -> None:
    secret = _device_secret(ctx)
    _signup_and_enroll(ctx, "alice", secret)
    ctx.step("enroll", "enrolled")

    def flip_server_key(body):
        for item in body.get("logins", []):
            item["B"] = f"{int(item['B'], 16) ^ 1:x}"
        return body

    ctx.transport.add_interceptor(
        Interceptor(
            name="substitute-B",
            direction="response",
            matches=lambda method, path: path.startswith("/device/pending/"),
            mutate=flip_server_key,
        )
    )
    _browser_login(ctx, "alice")
    ctx.step("login-init", "challenge-issued")
    device_view = ctx.authenticator.poll_pending("alice")["logins"][-1]
    try:
        ctx.authenticator.approve_login(device_view, ctx.confirmer)
        ctx.step("approve", "accepted")
    except TamperDetected:
        ctx.step("approve", "tamper-abort")
    completions = ctx.transport.transcript.find_requests("/login/complete")
    ctx.step("secret-dependent-traffic", "none" if not completions else "leaked")


TAMPERED_EXPECTED = [
    ("enroll", "enrolled"),
    ("login-init", "challenge-issued"),
    ("approve", "tamper-abort"),
    ("secret-dependent-traffic", "none"),
]


def replayed_completion(ctx: ScenarioContext) -> None:
    secret = _device_secret(ctx)
    _signup_and_enroll(ctx, "alice", secret)
    challenge = _browser_login(ctx, "alice")
    login_id, _ = _approve_from_poll(ctx, "alice")
    ctx.track_login_secrets("alice", login_id, secret)
    ctx.step("approve", "session-established")

    captured = ctx.transport.transcript.find_requests("/login/complete")[-1]
    replay = ctx.transport.post("/login/complete", json=json.loads(captured.body))
    ctx.step("replay-completion", str(replay.status_code))
    status = ctx.transport.get(f"/login/status/{challenge['login_id']}").json()
    ctx.step("original-session-intact", status["state"])


REPLAYED_COMPLETION_EXPECTED = [
    ("approve", "session-established"),
    ("replay-completion", "410"),
    ("original-session-intact", "ok"),
]


def replayed_authorization(ctx: ScenarioContext) -> None:
    secret = _device_secret(ctx)
    _signup_and_enroll(ctx, "alice", secret)
    _browser_login(ctx, "alice")
    login_id, session_id = _approve_from_poll(ctx, "alice")
    ctx.track_login_secrets("alice", login_id, secret)

    ctx.transport.post(
        "/authz/request", json={"session_id": session_id, "o": "transfer 100"}
    )
    prompt = ctx.authenticator.poll_pending("alice")["authorizations"][-1]
    sent = ctx.authenticator.confirm_authorization(prompt, ctx.confirmer)
    ctx.step("authz-confirm", "confirmed" if sent else "declined")

    captured = ctx.transport.transcript.find_requests("/authz/confirm")[-1]
    replay = ctx.transport.post("/authz/confirm", json=json.loads(captured.body))
    ctx.step("replay-confirm", str(replay.status_code))


REPLAYED_AUTHZ_EXPECTED = [
    ("authz-confirm", "confirmed"),
    ("replay-confirm", "410"),
]


def expired_session(ctx: ScenarioContext) -> None:
    secret = _device_secret(ctx)
    _signup_and_enroll(ctx, "alice", secret)
    _browser_login(ctx, "alice")
    login_id, session_id = _approve_from_poll(ctx, "alice", duration=60)
    ctx.track_login_secrets("alice", login_id, secret)

    ctx.clock.advance(59)  # strictly inside the window
    inside = ctx.transport.post(
        "/authz/request", json={"session_id": session_id, "o": "op before expiry"}
    )
    ctx.step("authz-inside-window", str(inside.status_code))
    ctx.clock.advance(1)  # exactly at expiry: must reject
    at_boundary = ctx.transport.post(
        "/authz/request", json={"session_id": session_id, "o": "op at expiry"}
    )
    ctx.step("authz-at-expiry", str(at_boundary.status_code))
    swept = ctx.service.sweep_expired()
    ctx.step("sweep", "swept" if swept >= 1 else "nothing")


EXPIRED_SESSION_EXPECTED = [
    ("authz-inside-window", "200"),
    ("authz-at-expiry", "440"),
    ("sweep", "swept"),
]


def remote_logout(ctx: ScenarioContext) -> None:
    secret = _device_secret(ctx)
    _signup_and_enroll(ctx, "alice", secret)
    _browser_login(ctx, "alice")
    login_id, session_id = _approve_from_poll(ctx, "alice")
    ctx.track_login_secrets("alice", login_id, secret)
    browser_token = ctx.transport.get(f"/login/status/{login_id}").json()[
        "browser_token"
    ]

    ctx.authenticator.remote_logout(session_id)
    ctx.step("logout", "revoked")
    ctx.step(
        "local-key-erased",
        "erased" if not ctx.store.sessions() else "retained",
    )
    captured = ctx.transport.transcript.find_requests("/logout")[-1]
    replay = ctx.transport.post("/logout", json=json.loads(captured.body))
    ctx.step("logout-replay", str(replay.status_code))
    token_check = ctx.transport.get(f"/session/by-token/{browser_token}")
    ctx.step("browser-token", "dead" if token_check.status_code == 404 else "alive")
    dead_authz = ctx.transport.post(
        "/authz/request", json={"session_id": session_id, "o": "anything"}
    )
    ctx.step("authz-after-logout", str(dead_authz.status_code))


REMOTE_LOGOUT_EXPECTED = [
    ("logout", "revoked"),
    ("local-key-erased", "erased"),
    ("logout-replay", "204"),
    ("browser-token", "dead"),
    ("authz-after-logout", "440"),
]


def weak_candidate_list(target: str, size: int = 10_000, position: int = 7_321) -> list[str]:
    """A deterministic breach wordlist with the target planted inside."""
    candidates = [f"candidate-{i:05d}" for i in range(size)]
    candidates[position] = target
    return candidates


def dictionary_weak_secret(ctx: ScenarioContext) -> None:
    from ..core import IdentityPair

    weak = MasterSecret.from_text(WEAK_SECRET)
    signup = ctx.transport.post("/signup", json={"iu": "victim"})
    payload = json.loads(signup.json()["qr_payload"])
    identity = IdentityPair(payload["iu"], payload["is"])
    verifier = compute_verifier(derive_effective_secret(identity, weak), ctx.group)
    ctx.transport.post("/enroll", json={"iu": "victim", "v": f"{verifier:x}"})
    ctx.step("enroll-weak", "ok")

    # database breach: the attacker now holds (v, iu, is)
    recovered = dictionary_attack(
        verifier, identity, weak_candidate_list(WEAK_SECRET), ctx.group
    )
    ctx.step("weak-recovery", "recovered" if recovered == WEAK_SECRET else "missed")

    strong = generate_passphrase(PassphraseSpec(), ctx.rng)
    ctx.track_secret("strong.p", strong.as_bytes())
    strong_verifier = compute_verifier(
        derive_effective_secret(identity, strong), ctx.group
    )
    sampled = dictionary_attack(
        strong_verifier,
        identity,
        (f"candidate-{i:05d}" for i in range(2_000)),
        ctx.group,
    )
    ctx.step("strong-recovery", "recovered" if sampled else "not-recovered")


DICTIONARY_EXPECTED = [
    ("enroll-weak", "ok"),
    ("weak-recovery", "recovered"),
    ("strong-recovery", "not-recovered"),
]


def duplicate_completion_race(ctx: ScenarioContext) -> None:
    """Two concurrent completions of one challenge: exactly one consumer."""
    from ..core import IdentityPair, client_respond

    secret = _device_secret(ctx)
    _signup_and_enroll(ctx, "alice", secret)
    challenge = _browser_login(ctx, "alice")
    identity = IdentityPair(challenge["iu"], challenge["is"])
    response = client_respond(
        identity, secret, int(challenge["B"], 16), 3600, ctx.group, ctx.rng
    )
    results: list[str] = []
    lock = threading.Lock()

    def complete() -> None:
        try:
            ctx.service.login_complete(
                challenge["login_id"],
                "alice",
                response.client_public,
                response.proof,
                3600,
            )
            verdict = "accepted"
        except GoneError:
            verdict = "gone"
        except ZeroTwoError as exc:
            verdict = type(exc).__name__
        with lock:
            results.append(verdict)

    threads = [threading.Thread(target=complete) for _ in range(2)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    ctx.step("exactly-one-consumer", "-".join(sorted(results)))


RACE_EXPECTED = [("exactly-one-consumer", "accepted-gone")]


SCENARIOS: dict[str, Scenario] = {
    s.name: s
    for s in [
        Scenario(
            "happy-path",
            "enrollment, login, explicit authorization, remote logout",
            HAPPY_EXPECTED,
            happy_path,
        ),
        Scenario(
            "wrong-secret",
            "device holds a different master secret; server must reject",
            WRONG_SECRET_EXPECTED,
            wrong_secret,
        ),
        Scenario(
            "tampered-challenge",
            "man-in-the-middle substitutes B; fingerprint check aborts",
            TAMPERED_EXPECTED,
            tampered_challenge,
        ),
        Scenario(
            "replayed-completion",
            "captured login completion replayed against the same challenge",
            REPLAYED_COMPLETION_EXPECTED,
            replayed_completion,
        ),
        Scenario(
            "replayed-authorization",
            "captured authorization confirmation replayed (nonce reuse)",
            REPLAYED_AUTHZ_EXPECTED,
            replayed_authorization,
        ),
        Scenario(
            "expired-session",
            "MACs accepted strictly before expiry, rejected at it",
            EXPIRED_SESSION_EXPECTED,
            expired_session,
        ),
        Scenario(
            "remote-logout",
            "authenticated logout, idempotent replay, dead browser token",
            REMOTE_LOGOUT_EXPECTED,
            remote_logout,
        ),
        Scenario(
            "dictionary-weak-secret",
            "breached verifier: weak secret recovered, passphrase not",
            DICTIONARY_EXPECTED,
            dictionary_weak_secret,
        ),
        Scenario(
            "duplicate-completion-race",
            "concurrent duplicate completions race to one consumer",
            RACE_EXPECTED,
            duplicate_completion_race,
        ),
    ]
}


def get_scenario(name: str) -> Scenario:
    try:
        return SCENARIOS[name]
    except KeyError:
        raise ZeroTwoError(
            f"unknown scenario {name!r}; available: {', '.join(sorted(SCENARIOS))}"
        ) from None

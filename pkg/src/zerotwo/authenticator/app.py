"""Smartphone-role authenticator: enrollment, login approval with
fingerprint comparison, explicit-authorization confirmation, remote logout.

The consent gate is strict: nothing derived from the master secret goes on
the wire unless the server-supplied fingerprint matches the locally
recomputed one AND the confirmer said yes.
"""

from __future__ import annotations

import json
from typing import Mapping, Protocol
from urllib.parse import urlsplit

from ..core import (
    Clock,
    GroupProfile,
    IdentityPair,
    RandomSource,
    SystemClock,
    SystemRandomSource,
    client_respond,
    compute_verifier,
    derive_effective_secret,
    fingerprint,
    mac_authorize,
    mac_logout,
    production_group,
)
from ..core.errors import ZeroTwoError
from .secretstore import SecretStore, StoredSession

DEFAULT_SESSION_SECONDS = 8 * 3600


class AuthenticatorError(ZeroTwoError):
    pass


class PayloadError(AuthenticatorError):
    pass


class TamperDetected(AuthenticatorError):
    """Server-supplied fingerprint disagrees with the local recomputation."""


class ConsentDeclined(AuthenticatorError):
    pass


class AccountMissing(AuthenticatorError):
    pass


class ServerRejected(AuthenticatorError):
    def __init__(self, status_code: int, detail: str) -> None:
        super().__init__(f"server rejected the request ({status_code}): {detail}")
        self.status_code = status_code
        self.detail = detail


class Confirmer(Protocol):
    def confirm(self, prompt: str, details: Mapping[str, str]) -> bool: ...


class ScriptedConfirmer:
    """Test double: answers from a queue, then a constant default."""

    def __init__(self, answers: list[bool] | None = None, default: bool = True) -> None:
        self._answers = list(answers or [])
        self._default = default
        self.prompts: list[tuple[str, dict[str, str]]] = []

    def confirm(self, prompt: str, details: Mapping[str, str]) -> bool:
        self.prompts.append((prompt, dict(details)))
        if self._answers:
            return self._answers.pop(0)
        return self._default


class InteractiveConfirmer:
    def confirm(self, prompt: str, details: Mapping[str, str]) -> bool:
        print(prompt)
        for name, value in details.items():
            print(f"  {name}: {value}")
        answer = input("approve? [y/N] ").strip().lower()
        return answer in ("y", "yes")


def parse_payload(text: str, expected_kind: str) -> dict:
    """Decode an out-of-band payload (the QR content, as text)."""
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise PayloadError(f"payload is not valid JSON: {exc}") from None
    if not isinstance(payload, dict) or payload.get("v") != 1:
        raise PayloadError("unsupported payload version")
    if payload.get("t") != expected_kind:
        raise PayloadError(
            f"expected a {expected_kind!r} payload, got {payload.get('t')!r}"
        )
    return payload


class Authenticator:
    def __init__(
        self,
        store: SecretStore,
        transport,
        *,
        group: GroupProfile | None = None,
        rng: RandomSource | None = None,
        clock: Clock | None = None,
    ) -> None:
        self.store = store
        self.transport = transport
        self.group = group or production_group()
        self.rng = rng or SystemRandomSource()
        self.clock = clock or SystemClock()

    # -- enrollment ------------------------------------------------------------

    def handle_enroll_payload(
        self, payload_text: str, label: str | None = None, secret_id: int | None = None
    ) -> str:
        """Derive the verifier and submit it to the payload's enroll URL.

        The effective secret exists only inside this call; the store keeps
        the master secret, never x or v. Returns the account label.
        """
        payload = parse_payload(payload_text, "enroll")
        try:
            identity = IdentityPair(payload["iu"], payload["is"])
            enroll_url = payload["enroll_url"]
        except (KeyError, ValueError) as exc:
            raise PayloadError(f"malformed enroll payload: {exc}") from None

        account = self._account_for(identity, label, secret_id)
        secret = self.store.get_secret(account.secret_id)
        x = derive_effective_secret(identity, secret)
        verifier = compute_verifier(x, self.group)
        del x

        response = self.transport.post(
            urlsplit(enroll_url).path or "/enroll",
            json={"iu": identity.user, "v": f"{verifier:x}"},
        )
        if response.status_code != 204:
            raise ServerRejected(response.status_code, _detail(response))
        self.store.mark_enrolled(account.label)
        return account.label

    def _account_for(self, identity, label, secret_id):
        if label is not None:
            try:
                account = self.store.find_account(label)
            except ZeroTwoError:
                account = None
            if account is not None:
                if (account.user, account.domain) != (identity.user, identity.domain):
                    raise PayloadError(
                        "payload identity does not match the labelled account"
                    )
                return account
        for account in self.store.accounts():
            if (account.user, account.domain) == (identity.user, identity.domain):
                return account
        if secret_id is None:
            ids = self.store.secret_ids()
            if not ids:
                raise AccountMissing(
                    "no master secret in the store; generate a passphrase first"
                )
            secret_id = ids[-1]
        return self.store.add_account(
            label or f"{identity.user}@{identity.domain}", identity, secret_id
        )

    # -- login approval -----------------------------------------------------------

    def approve_login(
        self,
        challenge: Mapping[str, str],
        confirmer: Confirmer,
        duration: int = DEFAULT_SESSION_SECONDS,
    ) -> str:
        """Fingerprint comparison, explicit consent, then the response.

        Ordering is load-bearing: the fingerprint check and the consent
        prompt happen before any secret-dependent computation, and a
        declined prompt sends nothing at all.
        """
        try:
            login_id = challenge["login_id"]
            identity = IdentityPair(challenge["iu"], challenge["is"])
            server_public = int(challenge["B"], 16)
            presented = challenge["fingerprint"]
        except (KeyError, ValueError) as exc:
            raise PayloadError(f"malformed login challenge: {exc}") from None

        local = fingerprint(identity, server_public)
        if presented != local:
            raise TamperDetected(
                f"fingerprint mismatch: server shows {presented}, device computed {local}"
            )
        approved = confirmer.confirm(
            f"login request for {identity.user} at {identity.domain}",
            {
                "fingerprint (server)": presented,
                "fingerprint (device)": local,
                "session duration": f"{duration}s",
            },
        )
        if not approved:
            raise ConsentDeclined("login approval declined; nothing was sent")

        account = self._enrolled_account(identity)
        secret = self.store.get_secret(account.secret_id)
        response = client_respond(
            identity, secret, server_public, duration, self.group, self.rng
        )
        http = self.transport.post(
            "/login/complete",
            json={
                "login_id": login_id,
                "iu": identity.user,
                "A": f"{response.client_public:x}",
                "M": response.proof.hex(),
                "d": duration,
            },
        )
        if http.status_code != 200:
            raise ServerRejected(http.status_code, _detail(http))
        body = http.json()
        session_id = body["session_id"]
        self.store.put_session(
            StoredSession(
                session_id=session_id,
                user=identity.user,
                domain=identity.domain,
                key=response.session_key,
                established_at=self.clock.now(),
                duration=duration,
            )
        )
        return session_id

    def _enrolled_account(self, identity: IdentityPair):
        for account in self.store.accounts():
            if (account.user, account.domain) == (identity.user, identity.domain):
                if not account.enrolled:
                    raise AccountMissing(
                        f"account {account.label!r} is not enrolled yet"
                    )
                return account
        raise AccountMissing(
            f"no account for {identity.user} at {identity.domain} in this store"
        )

    # -- explicit authorization -----------------------------------------------------

    def confirm_authorization(
        self, pending: Mapping[str, str], confirmer: Confirmer
    ) -> bool:
        """Show the operation text verbatim; on yes, send HMAC_K(o, c)."""
        try:
            auth_id = pending["auth_id"]
            session_id = pending["session_id"]
            operation = pending["o"]
            nonce = bytes.fromhex(pending["c"])
        except (KeyError, ValueError) as exc:
            raise PayloadError(f"malformed authorization prompt: {exc}") from None

        session = self.store.get_session(session_id)
        approved = confirmer.confirm(
            f"authorize operation on {session.domain}?", {"operation": operation}
        )
        if not approved:
            return False
        proof = mac_authorize(
            session.session_key(), operation, nonce, self.clock.now()
        )
        http = self.transport.post(
            "/authz/confirm", json={"auth_id": auth_id, "M": proof.hex()}
        )
        if http.status_code != 204:
            raise ServerRejected(http.status_code, _detail(http))
        return True

    # -- session lifecycle ---------------------------------------------------------

    def remote_logout(self, session_id: str) -> None:
        """Send HMAC_K("logout"); the local key is erased only on ack."""
        session = self.store.get_session(session_id)
        proof = mac_logout(session.session_key(), self.clock.now())
        http = self.transport.post(
            "/logout", json={"session_id": session_id, "M": proof.hex()}
        )
        if http.status_code != 204:
            raise ServerRejected(http.status_code, _detail(http))
        self.store.drop_session(session_id)

    # -- polling (the simulated push channel) ----------------------------------------

    def poll_pending(self, user: str) -> dict:
        http = self.transport.get(f"/device/pending/{user}")
        if http.status_code != 200:
            raise ServerRejected(http.status_code, _detail(http))
        return http.json()

    def pending_for_all_accounts(self) -> dict:
        merged = {"logins": [], "authorizations": []}
        for user in sorted({a.user for a in self.store.accounts()}):
            batch = self.poll_pending(user)
            merged["logins"].extend(batch["logins"])
            merged["authorizations"].extend(batch["authorizations"])
        return merged


def _detail(response) -> str:
    try:
        return str(response.json().get("detail", ""))
    except Exception:
        return response.text[:200]

"""Acceptance suite: one test per criterion, each printing a verdict line.

Run with `pytest tests/test_acceptance.py -v -s` to see the verdicts
stream; every tolerance is pinned here, nothing is calibrated later.
"""

import random
import time
from contextlib import contextmanager

import pytest

from zerotwo.authenticator import FAST_KDF, PasswordUnlock, SecretStore, StoreAuthError
from zerotwo.authenticator.passphrase import PassphraseSpec, generate_passphrase
from zerotwo.core import (
    AuthenticationFailed,
    GroupProfile,
    IdentityPair,
    ManualClock,
    MasterSecret,
    SeededRandomSource,
    ServerEphemeral,
    SessionKey,
    attack_demo_group,
    client_respond,
    compute_verifier,
    derive_effective_secret,
    derive_group_constants,
    encode_int,
    fingerprint,
    hash_digest,
    hmac_digest,
    mac_authorize,
    mac_logout,
    production_group,
    render_fingerprint,
    server_begin_login,
    server_complete_login,
)
from zerotwo.server import AuthService, ServerConfig, SessionExpiredError
from zerotwo.sim import SCENARIOS, dictionary_attack, find_secret_leaks, run_scenario
from zerotwo.sim.scenarios import weak_candidate_list
from conftest import TEST_L, slow_pow


@pytest.fixture
def criterion(capfd):
    """One verdict line per criterion, emitted outside pytest's capture."""

    @contextmanager
    def _criterion(name: str):
        try:
            yield
        except BaseException:
            with capfd.disabled():
                print(f"ACCEPTANCE {name}: FAIL", flush=True)
            raise
        with capfd.disabled():
            print(f"ACCEPTANCE {name}: PASS", flush=True)

    return _criterion


@pytest.fixture(scope="module")
def scenario_results():
    """Every shipped scenario, run once in the production group."""
    return {
        name: run_scenario(scenario) for name, scenario in SCENARIOS.items()
    }


def _service(clock=None, group=None, rate_limit=10**6):
    group = group or attack_demo_group()
    config = ServerConfig(
        domain="example.org",
        demo=True,
        group_name=group.name,
        rate_limit_count=rate_limit,
    )
    return AuthService(
        config,
        group=group,
        rng=SeededRandomSource(b"acceptance"),
        clock=clock or ManualClock(),
    )


def test_small_group_oracle_equivalence(criterion, golden):
    """n=23, g=5, k=3, u=7, x=6, a=5, b=3: S=11 on both sides, < 1 s."""
    with criterion("small-group-oracle-equivalence"):
        started = time.perf_counter()
        group = GroupProfile.injected_profile("test-23", 23, 5, k=3, l=TEST_L)
        identity = IdentityPair("alice", "example.org")
        ephemeral = ServerEphemeral(private=3, public=11)
        assert ephemeral.public == (3 * 8 + slow_pow(5, 3, 23)) % 23

        from zerotwo.core import FixedRandomSource

        response = client_respond(
            identity,
            MasterSecret.from_text("ignored: x injected"),
            ephemeral.public,
            3600,
            group,
            FixedRandomSource(ints=[5]),
            effective_secret=6,
            scrambling=7,
        )
        session = server_complete_login(
            identity, 8, ephemeral, response.client_public, response.proof,
            3600, group, now=0.0, scrambling=7,
        )
        expected_shared = slow_pow(5, (5 + 7 * 6) * 3 % 22, 23)
        assert expected_shared == 11
        assert response.client_public == 20
        assert session.key == response.session_key
        assert session.key == hash_digest([encode_int(11)])
        assert session.key.hex() == golden["small_K"]
        assert response.proof.hex() == golden["small_M"]
        assert time.perf_counter() - started < 1.0


def test_production_group_agreement(criterion):
    """100 random end-to-end agreements in the 2048-bit group: K equal
    byte-exact, 0 failures, < 60 s."""
    with criterion("production-group-agreement"):
        started = time.perf_counter()
        group = production_group()
        rng = SeededRandomSource(b"production-agreement")
        identity = IdentityPair("alice", "example.org")
        failures = 0
        for i in range(100):
            secret = MasterSecret.from_text(f"agreement secret {i}")
            verifier = compute_verifier(
                derive_effective_secret(identity, secret), group
            )
            ephemeral = server_begin_login(verifier, group, rng)
            response = client_respond(
                identity, secret, ephemeral.public, 3600, group, rng
            )
            session = server_complete_login(
                identity, verifier, ephemeral, response.client_public,
                response.proof, 3600, group, now=0.0,
            )
            if session.key != response.session_key:
                failures += 1
        elapsed = time.perf_counter() - started
        assert failures == 0
        assert elapsed < 60.0, f"took {elapsed:.1f}s"


def test_soundness_single_field_perturbations(criterion):
    """>= 64 random perturbations of each of p, iu, is, A, B, d all make
    loginComplete fail: 0 false accepts."""
    with criterion("soundness-suite"):
        group = attack_demo_group()
        clock = ManualClock()
        service = _service(clock, group)
        secret = MasterSecret.from_text("the enrolled master secret")
        identity = IdentityPair("alice", "example.org")
        service.signup_init("alice")
        service.enroll(
            "alice", compute_verifier(derive_effective_secret(identity, secret), group)
        )
        rnd = random.Random(0xACCE97)
        rng = SeededRandomSource(b"soundness")
        false_accepts = 0
        trials_per_field = 64

        def completion_fails(login_id, user, client_public, proof, duration) -> bool:
            try:
                service.login_complete(login_id, user, client_public, proof, duration)
                return False
            except AuthenticationFailed:
                return True

        for field in ("p", "iu", "is", "A", "B", "d"):
            for _ in range(trials_per_field):
                challenge = service.login_init("alice")
                server_public = int(challenge["B"], 16)
                use_identity = identity
                use_secret = secret
                use_b = server_public
                duration = 3600
                if field == "p":
                    use_secret = MasterSecret.from_text(
                        f"perturbed {rnd.getrandbits(64):x}"
                    )
                elif field == "is":
                    use_identity = IdentityPair(
                        "alice", f"d{rnd.getrandbits(32):x}.example"
                    )
                elif field == "B":
                    while True:
                        use_b = rnd.randrange(2, group.n - 1)
                        if use_b != server_public:
                            break
                response = client_respond(
                    use_identity, use_secret, use_b, duration, group, rng
                )
                submit_user = "alice"
                submit_a = response.client_public
                submit_d = duration
                if field == "iu":
                    submit_user = f"alice{rnd.getrandbits(32):x}"
                elif field == "A":
                    while True:
                        submit_a = rnd.randrange(1, group.n)
                        if submit_a != response.client_public:
                            break
                elif field == "d":
                    while True:
                        submit_d = rnd.randrange(0, service.config.session_cap_seconds)
                        if submit_d != duration:
                            break
                if not completion_fails(
                    challenge["login_id"], submit_user, submit_a,
                    response.proof, submit_d,
                ):
                    false_accepts += 1
        assert false_accepts == 0


def test_replay_suite(criterion, scenario_results):
    """Re-submitted completion 410; re-submitted confirm 410; logout
    replay idempotent ack. Exact statuses from the wire."""
    with criterion("replay-suite"):
        completion = scenario_results["replayed-completion"]
        assert completion.ok
        assert ("replay-completion", "410") in completion.outcomes
        authz = scenario_results["replayed-authorization"]
        assert authz.ok
        assert ("replay-confirm", "410") in authz.outcomes
        logout = scenario_results["remote-logout"]
        assert logout.ok
        assert ("logout-replay", "204") in logout.outcomes


def test_zero_knowledge_transcripts(criterion, scenario_results):
    """No captured wire message contains p, enc(x), enc(S), or K, raw or
    hex-encoded: 0 occurrences across every shipped scenario."""
    with criterion("zero-knowledge-transcripts"):
        total_messages = 0
        for name, result in scenario_results.items():
            assert result.ok, f"scenario {name} diverged"
            leaks = find_secret_leaks(result.transcript, result.secrets)
            assert leaks == [], f"{name}: {leaks}"
            total_messages += len(result.transcript.messages)
        assert total_messages > 100  # the check is not vacuous


def test_expiry_boundaries(criterion):
    """d in {1, 60, 3600}: MACs accepted strictly before expiry,
    rejected at and after it. Exact boundary."""
    with criterion("expiry-boundaries"):
        group = attack_demo_group()
        secret = MasterSecret.from_text("expiry secret")
        identity = IdentityPair("alice", "example.org")
        for duration in (1, 60, 3600):
            clock = ManualClock()
            service = _service(clock, group)
            service.signup_init("alice")
            service.enroll(
                "alice",
                compute_verifier(derive_effective_secret(identity, secret), group),
            )
            challenge = service.login_init("alice")
            response = client_respond(
                identity, secret, int(challenge["B"], 16), duration, group,
                SeededRandomSource(f"expiry-{duration}".encode()),
            )
            established = clock.now()
            session_info = service.login_complete(
                challenge["login_id"], "alice", response.client_public,
                response.proof, duration,
            )
            key = SessionKey(response.session_key, established, duration)

            clock.advance(duration - 1)  # strictly inside
            prompt = service.request_authorization(session_info["session_id"], "op")
            proof = mac_authorize(
                key, "op", bytes.fromhex(prompt["c"]), clock.now()
            )
            service.confirm_authorization(prompt["auth_id"], proof)

            clock.advance(1)  # exactly at the boundary
            assert clock.now() == established + duration
            with pytest.raises(SessionExpiredError):
                service.request_authorization(session_info["session_id"], "op")
            with pytest.raises(Exception):
                mac_authorize(key, "op", bytes(16), clock.now())

            clock.advance(1)  # strictly after
            with pytest.raises(SessionExpiredError):
                service.request_authorization(session_info["session_id"], "op")
            with pytest.raises(AuthenticationFailed):
                service.logout(session_info["session_id"], mac_logout(key, established))


def test_dictionary_demonstration(criterion):
    """Weak secret recovered from 10^4 candidates with only (v, iu, is),
    < 30 s, in the production group; a generated 6-word passphrase
    survives 10^6 trials."""
    with criterion("dictionary-demonstration"):
        identity = IdentityPair("victim", "example.org")

        # breach model: attacker holds the verifier from the 2048-bit group
        production = production_group()
        weak = MasterSecret.from_text("password123")
        weak_verifier = compute_verifier(
            derive_effective_secret(identity, weak), production
        )
        started = time.perf_counter()
        recovered = dictionary_attack(
            weak_verifier, identity, weak_candidate_list("password123"), production
        )
        elapsed = time.perf_counter() - started
        assert recovered == "password123"
        assert elapsed < 30.0, f"recovery took {elapsed:.1f}s"

        # high-entropy passphrase: 10^6 trials cannot cover 7776^6 space.
        # The demo group keeps x -> g^x injective (order > 2^256), so a
        # miss here is a true miss, just ~25x cheaper per trial.
        demo = attack_demo_group()
        passphrase = generate_passphrase(
            PassphraseSpec(), SeededRandomSource(b"dictionary-acceptance")
        )
        strong_verifier = compute_verifier(
            derive_effective_secret(identity, passphrase), demo
        )
        trials = (f"trial-{i}" for i in range(1_000_000))
        missed = dictionary_attack(
            strong_verifier, identity, trials, demo, processes=None
        )
        assert missed is None


def test_store_security(criterion, tmp_path):
    """Wrong unlock password and 256 single-bit ciphertext flips: every
    unlock attempt fails, 0 false unlocks."""
    with criterion("store-security"):
        path = tmp_path / "acceptance.zt"
        store = SecretStore.create(path, PasswordUnlock("right password"), kdf=FAST_KDF)
        store.add_secret(MasterSecret.from_text("protect me from flips"))
        blob = path.read_bytes()
        header_size = 37
        ciphertext_bits = (len(blob) - header_size) * 8
        assert ciphertext_bits >= 256

        false_unlocks = 0
        try:
            SecretStore.open(path, PasswordUnlock("wrong password"))
            false_unlocks += 1
        except StoreAuthError:
            pass

        stride = ciphertext_bits // 256
        for i in range(256):
            bit = header_size * 8 + i * stride
            flipped = bytearray(blob)
            flipped[bit // 8] ^= 1 << (bit % 8)
            path.write_bytes(bytes(flipped))
            try:
                SecretStore.open(path, PasswordUnlock("right password"))
                false_unlocks += 1
            except StoreAuthError:
                pass
        assert false_unlocks == 0
        path.write_bytes(blob)
        SecretStore.open(path, PasswordUnlock("right password"))  # intact again


def test_golden_vectors_match_implementation(criterion, golden):
    """Every vector from the independent oracle run matches the
    implementation byte-exact."""
    with criterion("golden-vectors"):
        assert hash_digest([]).hex() == golden["digest_no_parts"]
        assert hash_digest([b""]).hex() == golden["digest_one_empty_part"]
        assert (
            hash_digest([encode_int(23), encode_int(5)]).hex()
            == golden["digest_enc23_enc5"]
        )

        production = production_group()
        assert f"{production.k:x}" == golden["k_prod_2048"]
        assert production.l.hex() == golden["l_prod_2048"]
        k_swapped, _ = derive_group_constants(production.g, production.n)
        assert f"{k_swapped:x}" == golden["k_prod_2048_swapped"]

        identity = IdentityPair("alice", "example.org")
        secret = MasterSecret.from_text("correct horse battery staple")
        assert f"{derive_effective_secret(identity, secret):x}" == golden["x_alice"]
        other = IdentityPair("alice", "b.example")
        assert (
            f"{derive_effective_secret(other, secret):x}"
            == golden["x_alice_other_domain"]
        )

        key = SessionKey(b"\x0b" * 32, 0.0, 3600)
        assert (
            mac_authorize(key, "transfer 100", b"\x01" * 16, 0.0).hex()
            == golden["mac_authorize_fixed"]
        )
        assert mac_logout(key, 0.0).hex() == golden["mac_logout_fixed"]

        assert f"{compute_verifier(6, GroupProfile.injected_profile('t', 23, 5, k=3, l=TEST_L)):x}" == golden["small_v"]
        assert hmac_digest(
            bytes.fromhex(golden["small_K"]),
            [
                TEST_L,
                b"alice",
                b"example.org",
                encode_int(int(golden["small_A"], 16)),
                encode_int(int(golden["small_B"], 16)),
                (3600).to_bytes(8, "big"),
            ],
        ).hex() == golden["small_M"]

        digest8 = bytes.fromhex(golden["small_fingerprint_digest8"])
        assert fingerprint(identity, int(golden["small_B"], 16)) == render_fingerprint(
            digest8
        )

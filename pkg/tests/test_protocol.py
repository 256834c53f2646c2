"""Key agreement against the small-group brute-force oracle, plus the
range checks and soundness properties on both sides of the exchange."""

import random

import pytest

from zerotwo.core import (
    AuthenticationFailed,
    DurationRejected,
    EncodingError,
    FixedRandomSource,
    GroupError,
    IdentityPair,
    InvalidSecretError,
    MasterSecret,
    ProtocolViolation,
    SeededRandomSource,
    ServerEphemeral,
    SystemRandomSource,
    client_respond,
    compute_verifier,
    derive_effective_secret,
    duration_bytes,
    login_proof,
    production_group,
    scrambling_parameter,
    server_begin_login,
    server_complete_login,
)
from conftest import slow_pow


class TestEffectiveSecret:
    def test_deterministic(self, alice, alice_secret):
        assert derive_effective_secret(alice, alice_secret) == derive_effective_secret(
            alice, alice_secret
        )

    def test_golden_vector(self, alice, alice_secret, golden):
        assert f"{derive_effective_secret(alice, alice_secret):x}" == golden["x_alice"]

    def test_domain_separation(self, alice_secret, golden):
        a = derive_effective_secret(IdentityPair("alice", "a.example"), alice_secret)
        b = derive_effective_secret(IdentityPair("alice", "b.example"), alice_secret)
        assert a != b
        assert f"{b:x}" == golden["x_alice_other_domain"]

    def test_user_separation(self, alice_secret):
        a = derive_effective_secret(IdentityPair("alice", "example.org"), alice_secret)
        b = derive_effective_secret(IdentityPair("bob", "example.org"), alice_secret)
        assert a != b


class TestIdentityPair:
    def test_rejects_empty_fields(self):
        with pytest.raises(ValueError):
            IdentityPair("", "example.org")
        with pytest.raises(ValueError):
            IdentityPair("alice", "")

    def test_rejects_control_characters(self):
        with pytest.raises(ValueError):
            IdentityPair("ali\x00ce", "example.org")

    def test_rejects_uppercase_domain(self):
        with pytest.raises(ValueError):
            IdentityPair("alice", "Example.org")


class TestMasterSecret:
    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            MasterSecret(b"")

    def test_text_round_trip(self):
        assert MasterSecret.from_text("pw").as_bytes() == b"pw"


class TestVerifier:
    def test_small_group_oracle(self, small_group, golden):
        # brute-force repeated multiplication agrees with square-and-multiply
        assert slow_pow(5, 6, 23) == 8
        assert compute_verifier(6, small_group) == 8
        assert compute_verifier(6, small_group) == int(golden["small_v"], 16)

    def test_exponent_one_gives_generator(self, small_group):
        assert compute_verifier(1, small_group) == small_group.g

    def test_order_exponent_rejected(self, small_group, golden):
        # 5 is a primitive root mod 23, so 5^22 = 1: confirmed by brute force
        assert slow_pow(5, 22, 23) == 1
        assert int(golden["small_v_order_exponent"], 16) == 1
        with pytest.raises(InvalidSecretError):
            compute_verifier(22, small_group)

    def test_nonpositive_exponent_rejected(self, small_group):
        with pytest.raises(InvalidSecretError):
            compute_verifier(0, small_group)


class TestServerBeginLogin:
    def test_small_group_pinned_b(self, small_group, golden):
        eph = server_begin_login(8, small_group, FixedRandomSource(ints=[3]))
        assert eph.private == 3
        assert eph.public == (3 * 8 + slow_pow(5, 3, 23)) % 23 == 11
        assert eph.public == int(golden["small_B"], 16)

    def test_zero_multiplier_degenerates_to_plain_key(self):
        group_k0 = __import__("zerotwo.core", fromlist=["GroupProfile"]).GroupProfile
        group = group_k0.injected_profile("k0", 23, 5, k=0, l=bytes(32))
        eph = server_begin_login(8, group, FixedRandomSource(ints=[3]))
        assert eph.public == slow_pow(5, 3, 23) == 10

    def test_fresh_draws_differ(self):
        group = production_group()
        rng = SystemRandomSource()
        publics = {server_begin_login(5, group, rng).private for _ in range(100)}
        assert len(publics) == 100

    def test_verifier_range_checked(self, small_group):
        with pytest.raises(ProtocolViolation):
            server_begin_login(0, small_group, FixedRandomSource(ints=[3]))
        with pytest.raises(ProtocolViolation):
            server_begin_login(23, small_group, FixedRandomSource(ints=[3]))


class TestClientRespond:
    def test_small_group_oracle(self, small_group, alice, alice_secret, golden):
        resp = client_respond(
            alice,
            alice_secret,
            11,
            3600,
            small_group,
            FixedRandomSource(ints=[5]),
            effective_secret=6,
            scrambling=7,
        )
        assert resp.client_public == slow_pow(5, 5, 23) == 20
        assert resp.client_public == int(golden["small_A"], 16)
        # S = (B - k*g^x)^(a + u*x) = 10^47, brute-forced independently,
        # and cross-checked against g^((a + u*x)*b mod (n-1)) = 5^9
        assert slow_pow(10, 47, 23) == 11
        assert slow_pow(5, (5 + 7 * 6) * 3 % 22, 23) == 11
        assert resp.session_key.hex() == golden["small_K"]
        assert resp.proof.hex() == golden["small_M"]

    def test_zero_server_public_rejected(self, small_group, alice, alice_secret):
        with pytest.raises(ProtocolViolation):
            client_respond(
                alice, alice_secret, 0, 3600, small_group, FixedRandomSource(ints=[5])
            )

    def test_out_of_range_server_public_rejected(self, small_group, alice, alice_secret):
        with pytest.raises(ProtocolViolation):
            client_respond(
                alice, alice_secret, 23, 3600, small_group, FixedRandomSource(ints=[5])
            )

    def test_degenerate_subtraction_base_rejected(self, small_group, alice, alice_secret):
        # B = k*g^x mod n makes (B - k*g^x) = 0, which would force S = 0
        trap_b = 3 * slow_pow(5, 6, 23) % 23
        with pytest.raises(ProtocolViolation):
            client_respond(
                alice,
                alice_secret,
                trap_b,
                3600,
                small_group,
                FixedRandomSource(ints=[5]),
                effective_secret=6,
            )

    def test_zero_scrambling_rejected(self, small_group, alice, alice_secret):
        with pytest.raises(ProtocolViolation):
            client_respond(
                alice,
                alice_secret,
                11,
                3600,
                small_group,
                FixedRandomSource(ints=[5]),
                scrambling=0,
            )

    def test_proof_recomputable_from_returned_values(
        self, small_group, alice, alice_secret
    ):
        # B=9: x = H(alice, example.org, p) has x = 15 (mod 22), for which
        # B=11 happens to be the degenerate trap value in this tiny group
        resp = client_respond(
            alice, alice_secret, 9, 3600, small_group, FixedRandomSource(ints=[5])
        )
        again = login_proof(
            small_group, alice, resp.client_public, 9, resp.duration, resp.session_key
        )
        assert again == resp.proof

    def test_overrides_refused_outside_injected_profiles(self, alice, alice_secret):
        group = production_group()
        with pytest.raises(GroupError):
            client_respond(
                alice,
                alice_secret,
                2,
                3600,
                group,
                SystemRandomSource(),
                scrambling=7,
            )


class TestServerCompleteLogin:
    def _run_small_group(self, small_group, alice, alice_secret, **kwargs):
        eph = ServerEphemeral(private=3, public=11)
        resp = client_respond(
            alice,
            alice_secret,
            eph.public,
            3600,
            small_group,
            FixedRandomSource(ints=[5]),
            effective_secret=6,
            scrambling=7,
        )
        return eph, resp

    def test_small_group_oracle(self, small_group, alice, alice_secret, golden):
        eph, resp = self._run_small_group(small_group, alice, alice_secret)
        # S = (A*v^u)^b = (20 * 8^7)^3 = 10^3 = 11 by repeated multiplication
        assert slow_pow(20 * slow_pow(8, 7, 23) % 23, 3, 23) == 11
        session = server_complete_login(
            alice, 8, eph, resp.client_public, resp.proof, 3600, small_group,
            now=0.0, scrambling=7,
        )
        assert session.key == resp.session_key
        assert session.key.hex() == golden["small_K"]

    def test_zero_client_public_rejected(self, small_group, alice):
        eph = ServerEphemeral(private=3, public=11)
        with pytest.raises(ProtocolViolation):
            server_complete_login(
                alice, 8, eph, 0, bytes(32), 3600, small_group, now=0.0
            )

    def test_flipped_proof_bits_all_fail(self, small_group, alice, alice_secret):
        eph, resp = self._run_small_group(small_group, alice, alice_secret)
        for bit in range(256):
            bad = bytearray(resp.proof)
            bad[bit // 8] ^= 1 << (bit % 8)
            with pytest.raises(AuthenticationFailed):
                server_complete_login(
                    alice, 8, eph, resp.client_public, bytes(bad), 3600,
                    small_group, now=0.0, scrambling=7,
                )

    def test_duration_cap_enforced(self, small_group, alice, alice_secret):
        eph, resp = self._run_small_group(small_group, alice, alice_secret)
        with pytest.raises(DurationRejected):
            server_complete_login(
                alice, 8, eph, resp.client_public, resp.proof, 3600,
                small_group, now=0.0, max_duration=60, scrambling=7,
            )

    def test_wrong_secret_fails(self, small_group, alice, alice_secret):
        eph, _ = self._run_small_group(small_group, alice, alice_secret)
        resp = client_respond(
            alice,
            MasterSecret.from_text("wrong horse"),
            eph.public,
            3600,
            small_group,
            FixedRandomSource(ints=[5]),
        )
        with pytest.raises(AuthenticationFailed):
            server_complete_login(
                alice, 8, eph, resp.client_public, resp.proof, 3600,
                small_group, now=0.0,
            )


class TestDurationEncoding:
    def test_eight_byte_big_endian(self):
        assert duration_bytes(0) == bytes(8)
        assert duration_bytes(3600) == (3600).to_bytes(8, "big")

    def test_range(self):
        with pytest.raises(EncodingError):
            duration_bytes(-1)
        with pytest.raises(EncodingError):
            duration_bytes(1 << 64)
        assert duration_bytes((1 << 64) - 1)


def _agreement_once(group, identity, x, a, b, u):
    """Both protocol sides plus the closed-form g^((a+u*x)*b) route."""
    n, g = group.n, group.g
    v = pow(g, x, n)
    big_b = (group.k * v + pow(g, b, n)) % n
    eph = ServerEphemeral(private=b, public=big_b)
    resp = client_respond(
        IdentityPair(identity.user, identity.domain),
        MasterSecret.from_text("unused"),
        big_b,
        60,
        group,
        FixedRandomSource(ints=[a]),
        effective_secret=x,
        scrambling=u,
    )
    session = server_complete_login(
        identity, v, eph, resp.client_public, resp.proof, 60, group,
        now=0.0, scrambling=u,
    )
    closed_form = pow(g, (a + u * x) * b % (n - 1), n)
    shared_client = pow((big_b - group.k * pow(g, x, n)) % n, a + u * x, n)
    assert shared_client == closed_form
    assert session.key == resp.session_key
    return session.key


def test_key_agreement_grid_small_group(alice):
    """500 sampled (x, a, b, k, u) tuples in the n=23 group all agree."""
    from zerotwo.core import GroupProfile

    rnd = random.Random(2023)
    count = 0
    while count < 500:
        x = rnd.randrange(1, 22)
        a = rnd.randrange(1, 22)
        b = rnd.randrange(1, 22)
        k = rnd.randrange(0, 23)
        u = rnd.randrange(1, 1 << 16)
        group = GroupProfile.injected_profile("grid", 23, 5, k=k, l=bytes(32))
        v = pow(5, x, 23)
        if v in (0, 1):
            continue
        big_b = (k * v + pow(5, b, 23)) % 23
        if big_b == 0 or (big_b - k * pow(5, x, 23)) % 23 == 0:
            continue  # degenerate draws are rejected by design, skip them
        _agreement_once(group, alice, x, a, b, u)
        count += 1


def test_key_agreement_production_group_sample(alice, alice_secret):
    """A handful of full-size agreements; the acceptance suite runs 100."""
    group = production_group()
    rng = SeededRandomSource(b"agreement-sample")
    for i in range(5):
        secret = MasterSecret.from_text(f"sample secret {i}")
        x = derive_effective_secret(alice, secret)
        v = compute_verifier(x, group)
        eph = server_begin_login(v, group, rng)
        resp = client_respond(alice, secret, eph.public, 3600, group, rng)
        session = server_complete_login(
            alice, v, eph, resp.client_public, resp.proof, 3600, group, now=0.0
        )
        assert session.key == resp.session_key


class TestProofSoundness:
    """Any single-field perturbation must change the proof MAC."""

    def _baseline(self, small_group, alice, alice_secret):
        resp = client_respond(
            alice, alice_secret, 11, 3600, small_group,
            FixedRandomSource(ints=[5]), effective_secret=6, scrambling=7,
        )
        return resp

    @pytest.mark.parametrize("field", ["p", "user", "domain", "A", "B", "d"])
    def test_perturbations_change_proof(self, field, small_group, alice, alice_secret):
        base = self._baseline(small_group, alice, alice_secret)
        rnd = random.Random(f"soundness-{field}")
        for trial in range(64):
            user, domain = alice.user, alice.domain
            a_pub, b_pub, dur, key = base.client_public, 11, 3600, base.session_key
            if field == "p":
                continue  # covered by test_secret_perturbations below
            if field == "user":
                user = f"alice{rnd.randrange(1 << 30)}"
            elif field == "domain":
                domain = f"d{rnd.randrange(1 << 30)}.example"
            elif field == "A":
                a_pub = base.client_public + 1 + rnd.randrange(1 << 20)
            elif field == "B":
                b_pub = 11 + 1 + rnd.randrange(1 << 20)
            elif field == "d":
                dur = rnd.randrange(1 << 32)
                if dur == 3600:
                    dur += 1
            perturbed = login_proof(
                small_group, IdentityPair(user, domain), a_pub, b_pub, dur, key
            )
            assert perturbed != base.proof

    def test_secret_perturbations_change_proof(self, alice):
        """Secret changes flow through K, which needs a group whose order
        exceeds the digest range; the n=23 group collapses secrets mod 22."""
        from zerotwo.core import attack_demo_group, server_begin_login

        group = attack_demo_group()
        rng = SeededRandomSource(b"p-soundness")
        secret = MasterSecret.from_text("the real secret")
        v = compute_verifier(derive_effective_secret(alice, secret), group)
        eph = server_begin_login(v, group, rng)
        base = client_respond(alice, secret, eph.public, 3600, group, rng)
        seen = {base.proof}
        for trial in range(64):
            other = client_respond(
                alice,
                MasterSecret.from_text(f"the real secret {trial}"),
                eph.public, 3600, group, rng,
            )
            assert other.proof not in seen
            seen.add(other.proof)


def test_scrambling_parameter_depends_on_both_keys():
    assert scrambling_parameter(20, 11) != scrambling_parameter(11, 20)
    assert scrambling_parameter(20, 11) != scrambling_parameter(20, 12)

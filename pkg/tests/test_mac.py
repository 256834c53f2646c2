"""Per-action authorization MACs, logout MACs, and fingerprints."""

import random

import pytest

from zerotwo.core import (
    IdentityPair,
    ProtocolViolation,
    SessionExpired,
    SessionKey,
    fingerprint,
    mac_authorize,
    mac_logout,
    render_fingerprint,
)

KEY = b"\x0b" * 32
NONCE = b"\x01" * 16


@pytest.fixture
def session():
    return SessionKey(key=KEY, established_at=1000.0, duration=3600)


class TestAuthorize:
    def test_golden_vector(self, session, golden):
        mac = mac_authorize(session, "transfer 100", NONCE, now=1000.0)
        assert mac.hex() == golden["mac_authorize_fixed"]

    def test_deterministic(self, session):
        assert mac_authorize(session, "op", NONCE, 1000.0) == mac_authorize(
            session, "op", NONCE, 1000.0
        )

    def test_distinct_nonces_distinct_macs(self, session):
        other_nonce = b"\x02" * 16
        assert mac_authorize(session, "op", NONCE, 1000.0) != mac_authorize(
            session, "op", other_nonce, 1000.0
        )

    def test_expired_session_refused(self, session):
        with pytest.raises(SessionExpired):
            mac_authorize(session, "op", NONCE, now=1000.0 + 3600)

    def test_nonce_length_enforced(self, session):
        with pytest.raises(ProtocolViolation):
            mac_authorize(session, "op", b"\x01" * 15, 1000.0)


class TestLogout:
    def test_golden_vector(self, session, golden):
        assert mac_logout(session, 1000.0).hex() == golden["mac_logout_fixed"]

    def test_distinct_keys_distinct_macs(self, session):
        other = SessionKey(key=b"\x0c" * 32, established_at=1000.0, duration=3600)
        assert mac_logout(session, 1000.0) != mac_logout(other, 1000.0)

    def test_never_collides_with_authorize(self, session):
        # logout frames one field, authorize frames two; even the
        # operation "logout" with some nonce cannot produce the same MAC
        logout = mac_logout(session, 1000.0)
        for nonce in (bytes(16), NONCE, b"\xff" * 16):
            assert mac_authorize(session, "logout", nonce, 1000.0) != logout

    def test_expired_session_refused(self, session):
        with pytest.raises(SessionExpired):
            mac_logout(session, now=1000.0 + 3601)


class TestSessionValidity:
    @pytest.mark.parametrize("duration", [1, 60, 3600])
    def test_strict_expiry_boundary(self, duration):
        session = SessionKey(key=KEY, established_at=0.0, duration=duration)
        assert session.is_valid(duration - 0.001)
        assert not session.is_valid(float(duration))
        assert not session.is_valid(duration + 1.0)


class TestFingerprint:
    def test_rendering_rule(self):
        assert render_fingerprint(bytes([1, 2, 3, 4, 5, 6, 7, 8])) == (
            "0102-0304-0506-0708"
        )

    def test_golden_digest(self, alice, golden):
        text = fingerprint(alice, 11)
        digest_hex = golden["small_fingerprint_digest8"]
        assert text == "-".join(
            digest_hex[i : i + 4] for i in range(0, 16, 4)
        )

    def test_deterministic(self, alice):
        assert fingerprint(alice, 11) == fingerprint(alice, 11)

    def test_adjacent_keys_differ(self, alice):
        rnd = random.Random(99)
        for _ in range(100):
            b = rnd.randrange(1, 1 << 128)
            assert fingerprint(alice, b) != fingerprint(alice, b + 1)

    def test_identity_matters(self, alice):
        assert fingerprint(alice, 11) != fingerprint(
            IdentityPair("bob", "example.org"), 11
        )

    def test_format(self, alice):
        text = fingerprint(alice, 2**100)
        parts = text.split("-")
        assert len(parts) == 4
        assert all(len(p) == 4 and p == p.lower() for p in parts)
        assert all(c in "0123456789abcdef-" for c in text)

    def test_nonpositive_rejected(self, alice):
        with pytest.raises(ProtocolViolation):
            fingerprint(alice, 0)

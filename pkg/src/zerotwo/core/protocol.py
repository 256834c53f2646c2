"""Both sides of the key agreement, proof MACs, and fingerprints.

Salt-free augmented-PAKE derivation chain, with identities baked into the
effective secret so one master secret domain-separates across servers:

    x = H(user, domain, p)          (effective secret, never stored)
    v = g^x mod n                   (verifier, the only server-side credential)
    B = (k*v + g^b) mod n           (server ephemeral public key)
    A = g^a mod n                   (client ephemeral public key)
    u = H(A, B)
    S = (B - k*g^x)^(a + u*x)       = (A*v^u)^b = g^((a + u*x)*b)
    K = H(S)                        (session key)
    M = HMAC_K(l, user, domain, A, B, d)

Everything here is a pure function of its arguments plus the injected
randomness source. Exponent overrides exist for small-group oracle tests
and are refused unless the group profile is an injected test profile.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

from .encoding import encode_int
from .errors import (
    AuthenticationFailed,
    DurationRejected,
    EncodingError,
    GroupError,
    InvalidSecretError,
    ProtocolViolation,
    RandomnessExhausted,
    SessionExpired,
)
from .group import GroupProfile
from .hashing import constant_time_equals, hash_digest, hmac_digest, int_from_digest
from .rng import RandomSource

_RESAMPLE_LIMIT = 128
_DURATION_LIMIT = 1 << 64
LOGOUT_OPERATION = "logout"


@dataclass(frozen=True)
class IdentityPair:
    """User identifier (username or email) plus server domain name."""

    user: str
    domain: str

    def __post_init__(self) -> None:
        if not self.user or not self.domain:
            raise ValueError("identity fields must be non-empty")
        if any(ord(ch) < 0x20 or ch == "\x7f" for ch in self.user):
            raise ValueError("user identifier contains control characters")
        if self.domain != self.domain.lower():
            raise ValueError("domain must be lowercase")

    def user_bytes(self) -> bytes:
        return self.user.encode()

    def domain_bytes(self) -> bytes:
        return self.domain.encode()


SecretOrigin = Literal["generated-passphrase", "imported"]


@dataclass(frozen=True)
class MasterSecret:
    """The long-lived secret; a passphrase or arbitrary bytes."""

    value: bytes
    origin: SecretOrigin = "imported"

    def __post_init__(self) -> None:
        if not self.value:
            raise ValueError("master secret must be non-empty")

    @classmethod
    def from_text(cls, text: str, origin: SecretOrigin = "imported") -> "MasterSecret":
        return cls(text.encode(), origin)

    def as_bytes(self) -> bytes:
        return self.value


@dataclass(frozen=True)
class ServerEphemeral:
    """One login attempt's server keypair; `private` never leaves the server."""

    private: int
    public: int


@dataclass(frozen=True)
class ClientResponse:
    """The authenticator's answer: A, proof M, and the local session key.

    `session_key` stays on the device; only client_public, proof, and
    duration ever go on the wire.
    """

    client_public: int
    proof: bytes
    duration: int
    session_key: bytes


@dataclass(frozen=True)
class SessionKey:
    key: bytes
    established_at: float
    duration: int

    @property
    def expires_at(self) -> float:
        return self.established_at + self.duration

    def is_valid(self, now: float) -> bool:
        return now < self.expires_at


def duration_bytes(duration: int) -> bytes:
    """Session duration as 8 big-endian bytes (unsigned 64-bit seconds)."""
    if not 0 <= duration < _DURATION_LIMIT:
        raise EncodingError("duration must fit in an unsigned 64-bit integer")
    return duration.to_bytes(8, "big")


def derive_effective_secret(identity: IdentityPair, secret: MasterSecret) -> int:
    """x = H(user, domain, p) as a full 256-bit integer.

    The identities act as a built-in salt, so none is stored. The
    all-zero digest is rejected outright (probability 2^-256); the caller
    retries with a different secret rather than silently remapping.
    """
    x = int_from_digest(
        hash_digest([identity.user_bytes(), identity.domain_bytes(), secret.as_bytes()])
    )
    if x == 0:
        raise InvalidSecretError("degenerate effective secret; pick another secret")
    return x


def compute_verifier(effective_secret: int, group: GroupProfile) -> int:
    """v = g^x mod n; the only credential the server ever stores."""
    if effective_secret <= 0:
        raise InvalidSecretError("effective secret must be positive")
    v = pow(group.g, effective_secret, group.n)
    if v in (0, 1):
        raise InvalidSecretError("verifier fell on a degenerate value")
    return v


def server_begin_login(
    verifier: int, group: GroupProfile, rng: RandomSource
) -> ServerEphemeral:
    """Sample b and compute B = (k*v + g^b) mod n, resampling while B = 0."""
    if not 0 < verifier < group.n:
        raise ProtocolViolation("verifier out of range")
    for _ in range(_RESAMPLE_LIMIT):
        b = rng.randint(1, group.n - 2)
        public = (group.k * verifier + pow(group.g, b, group.n)) % group.n
        if public % group.n != 0:
            return ServerEphemeral(private=b, public=public)
    raise RandomnessExhausted("could not sample a non-degenerate server key")


def scrambling_parameter(client_public: int, server_public: int) -> int:
    """u = H(A, B), binding the session key to both ephemerals."""
    return int_from_digest(
        hash_digest([encode_int(client_public), encode_int(server_public)])
    )


def login_proof(
    group: GroupProfile,
    identity: IdentityPair,
    client_public: int,
    server_public: int,
    duration: int,
    session_key: bytes,
) -> bytes:
    """M = HMAC_K(l, user, domain, A, B, d): evidence that K is known."""
    return hmac_digest(
        session_key,
        [
            group.l,
            identity.user_bytes(),
            identity.domain_bytes(),
            encode_int(client_public),
            encode_int(server_public),
            duration_bytes(duration),
        ],
    )


def _check_override(group: GroupProfile, value: int | None, what: str) -> None:
    if value is not None and not group.injected:
        raise GroupError(f"{what} override requires an injected test profile")


def client_respond(
    identity: IdentityPair,
    secret: MasterSecret,
    server_public: int,
    duration: int,
    group: GroupProfile,
    rng: RandomSource,
    *,
    effective_secret: int | None = None,
    scrambling: int | None = None,
) -> ClientResponse:
    """Authenticator side of the exchange.

    Recomputes x from the master secret, samples a, and produces (A, M, K).
    x and a exist only inside this call frame. Rejects B outside (0, n),
    a zero scrambling parameter, and a subtraction base of zero (which
    would force the degenerate key S = 0).
    """
    _check_override(group, effective_secret, "effective secret")
    _check_override(group, scrambling, "scrambling parameter")
    n, g = group.n, group.g
    if not 0 < server_public < n:
        raise ProtocolViolation("server public key out of range")
    duration_bytes(duration)  # range check before any secret-dependent work

    x = effective_secret if effective_secret is not None else derive_effective_secret(
        identity, secret
    )
    a = rng.randint(1, n - 2)
    client_public = pow(g, a, n)

    u = scrambling if scrambling is not None else scrambling_parameter(
        client_public, server_public
    )
    if u == 0:
        raise ProtocolViolation("zero scrambling parameter; abort this attempt")

    base = (server_public - group.k * pow(g, x, n)) % n
    if base == 0:
        raise ProtocolViolation("degenerate server public key")

    shared = pow(base, a + u * x, n)
    session_key = hash_digest([encode_int(shared)])
    proof = login_proof(
        group, identity, client_public, server_public, duration, session_key
    )
    return ClientResponse(
        client_public=client_public,
        proof=proof,
        duration=duration,
        session_key=session_key,
    )


def server_complete_login(
    identity: IdentityPair,
    verifier: int,
    ephemeral: ServerEphemeral,
    client_public: int,
    proof: bytes,
    duration: int,
    group: GroupProfile,
    now: float,
    *,
    max_duration: int | None = None,
    scrambling: int | None = None,
) -> SessionKey:
    """Server side of the verification: recompute K and compare proofs.

    The comparison is constant-time and the failure mode is a single
    indistinguishable error for a wrong secret and a tampered transcript.
    The caller owns single-use enforcement of the ephemeral.
    """
    _check_override(group, scrambling, "scrambling parameter")
    n = group.n
    if not 0 < client_public < n:
        raise ProtocolViolation("client public key out of range")
    duration_bytes(duration)
    if max_duration is not None and duration > max_duration:
        raise DurationRejected(f"session duration above the cap of {max_duration}s")

    u = scrambling if scrambling is not None else scrambling_parameter(
        client_public, ephemeral.public
    )
    if u == 0:
        raise ProtocolViolation("zero scrambling parameter; abort this attempt")

    shared = pow(
        client_public * pow(verifier, u, n) % n, ephemeral.private, n
    )
    session_key = hash_digest([encode_int(shared)])
    expected = login_proof(
        group, identity, client_public, ephemeral.public, duration, session_key
    )
    if not constant_time_equals(proof, expected):
        raise AuthenticationFailed()
    return SessionKey(key=session_key, established_at=now, duration=duration)


def mac_authorize(session: SessionKey, operation: str, nonce: bytes, now: float) -> bytes:
    """Per-action proof M = HMAC_K(o, c) for explicit authorization."""
    if not session.is_valid(now):
        raise SessionExpired("session key is past its validity window")
    if len(nonce) != 16:
        raise ProtocolViolation("authorization nonce must be 16 bytes")
    return hmac_digest(session.key, [operation.encode(), nonce])


def mac_logout(session: SessionKey, now: float) -> bytes:
    """Authenticated logout message M = HMAC_K("logout").

    Single framed field, so it can never collide with any mac_authorize
    output (those always carry two framed fields).
    """
    if not session.is_valid(now):
        raise SessionExpired("session key is past its validity window")
    return hmac_digest(session.key, [LOGOUT_OPERATION.encode()])


def fingerprint(identity: IdentityPair, server_public: int) -> str:
    """Short human-comparable rendering of the login challenge.

    First 8 bytes of H(user, domain, B) as 16 lowercase hex characters in
    4 dash-separated groups; displayed on both the browser and the
    authenticator so the user can detect a tampered channel.
    """
    if server_public <= 0:
        raise ProtocolViolation("server public key out of range")
    digest8 = hash_digest(
        [identity.user_bytes(), identity.domain_bytes(), encode_int(server_public)]
    )[:8]
    return render_fingerprint(digest8)


def render_fingerprint(digest8: bytes) -> str:
    if len(digest8) != 8:
        raise ValueError("fingerprint digest must be 8 bytes")
    text = digest8.hex()
    return "-".join(text[i : i + 4] for i in range(0, 16, 4))

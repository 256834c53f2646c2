"""Pure, deterministic protocol core: encodings, hashing, key agreement, MACs."""

from .clock import Clock, ManualClock, SystemClock
from .encoding import decode_int, encode_int, frame, frame_all
from .errors import (
    AuthenticationFailed,
    DurationRejected,
    EncodingError,
    GroupError,
    InvalidSecretError,
    ProtocolViolation,
    RandomnessExhausted,
    SessionExpired,
    ZeroTwoError,
)
from .group import (
    GroupProfile,
    attack_demo_group,
    derive_group_constants,
    group_by_name,
    is_primitive_root,
    is_safe_prime,
    production_group,
    validate_group,
)
from .hashing import (
    constant_time_equals,
    hash_digest,
    hmac_digest,
    int_from_digest,
    xor_bytes,
)
from .protocol import (
    ClientResponse,
    IdentityPair,
    MasterSecret,
    ServerEphemeral,
    SessionKey,
    client_respond,
    compute_verifier,
    derive_effective_secret,
    duration_bytes,
    fingerprint,
    login_proof,
    mac_authorize,
    mac_logout,
    render_fingerprint,
    scrambling_parameter,
    server_begin_login,
    server_complete_login,
)
from .rng import (
    FixedRandomSource,
    RandomSource,
    RecordingRandomSource,
    ReplayRandomSource,
    SeededRandomSource,
    SystemRandomSource,
    Tape,
)

__all__ = [
    "AuthenticationFailed",
    "ClientResponse",
    "Clock",
    "DurationRejected",
    "EncodingError",
    "FixedRandomSource",
    "GroupError",
    "GroupProfile",
    "IdentityPair",
    "InvalidSecretError",
    "ManualClock",
    "MasterSecret",
    "ProtocolViolation",
    "RandomSource",
    "RandomnessExhausted",
    "RecordingRandomSource",
    "ReplayRandomSource",
    "SeededRandomSource",
    "ServerEphemeral",
    "SessionExpired",
    "SessionKey",
    "SystemClock",
    "SystemRandomSource",
    "Tape",
    "ZeroTwoError",
    "attack_demo_group",
    "client_respond",
    "compute_verifier",
    "constant_time_equals",
    "decode_int",
    "derive_effective_secret",
    "derive_group_constants",
    "duration_bytes",
    "encode_int",
    "fingerprint",
    "frame",
    "frame_all",
    "group_by_name",
    "hash_digest",
    "hmac_digest",
    "int_from_digest",
    "is_primitive_root",
    "is_safe_prime",
    "login_proof",
    "mac_authorize",
    "mac_logout",
    "production_group",
    "render_fingerprint",
    "scrambling_parameter",
    "server_begin_login",
    "server_complete_login",
    "validate_group",
    "xor_bytes",
]

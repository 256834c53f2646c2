"""Hash and MAC primitives over length-framed inputs.

SHA-256 and HMAC-SHA-256 throughout. Every multi-part input goes through
the framing rule from :mod:`zerotwo.core.encoding`, so `hash_digest([])`,
`hash_digest([b""])`, and `hash_digest([b"", b""])` are all distinct.
"""

import hashlib
import hmac
from collections.abc import Sequence

from .encoding import frame_all

DIGEST_SIZE = 32


def hash_digest(parts: Sequence[bytes]) -> bytes:
    """SHA-256 over the framed concatenation of the parts."""
    return hashlib.sha256(frame_all(tuple(parts))).digest()


def hmac_digest(key: bytes, parts: Sequence[bytes]) -> bytes:
    """HMAC-SHA-256 with the given key over the framed concatenation."""
    return hmac.new(key, frame_all(tuple(parts)), hashlib.sha256).digest()


def int_from_digest(digest: bytes) -> int:
    """Full digest as a big-endian integer, not reduced modulo anything."""
    return int.from_bytes(digest, "big")


def xor_bytes(a: bytes, b: bytes) -> bytes:
    if len(a) != len(b):
        raise ValueError("xor operands must have equal length")
    return bytes(x ^ y for x, y in zip(a, b))


def constant_time_equals(a: bytes, b: bytes) -> bool:
    """Compare byte strings without data-dependent early exit.

    Single pass accumulating XOR differences; the length check is the
    only shortcut and lengths are public here (MACs are fixed-size).
    """
    if len(a) != len(b):
        return False
    acc = 0
    for x, y in zip(a, b):
        acc |= x ^ y
    return acc == 0

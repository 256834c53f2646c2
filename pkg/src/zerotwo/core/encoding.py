"""Canonical byte encodings shared by every hash and MAC computation.

One integer encoding and one framing rule are used everywhere so that
hash inputs are unambiguous: concatenations of frames are prefix-free,
hence injective in their parts.
"""

from .errors import EncodingError

_FRAME_LIMIT = 1 << 32


def encode_int(value: int) -> bytes:
    """Minimal big-endian encoding; zero encodes as a single 0x00 byte."""
    if value < 0:
        raise EncodingError("cannot encode a negative integer")
    if value == 0:
        return b"\x00"
    return value.to_bytes((value.bit_length() + 7) // 8, "big")


def decode_int(data: bytes) -> int:
    return int.from_bytes(data, "big")


def frame(payload: bytes) -> bytes:
    """Prefix the payload with its length as 4 big-endian bytes."""
    if len(payload) >= _FRAME_LIMIT:
        raise EncodingError("frame payload exceeds 2^32 - 1 bytes")
    return len(payload).to_bytes(4, "big") + payload


def frame_all(parts: list[bytes] | tuple[bytes, ...]) -> bytes:
    return b"".join(frame(part) for part in parts)

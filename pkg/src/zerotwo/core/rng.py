"""Injectable randomness sources, including a record/replay tape.

All random draws in the protocol, server, and authenticator route through
a RandomSource so that transcripts can be reproduced byte-for-byte by
replaying a recorded tape.
"""

from __future__ import annotations

import hashlib
import json
import secrets
from dataclasses import dataclass, field
from typing import Protocol, runtime_checkable


@runtime_checkable
class RandomSource(Protocol):
    def randint(self, lower: int, upper: int) -> int:
        """Uniform integer in [lower, upper], both ends inclusive."""
        ...

    def token(self, size: int) -> bytes:
        """`size` uniformly random bytes."""
        ...


class SystemRandomSource:
    """OS entropy via the secrets module; safe to share between threads."""

    def randint(self, lower: int, upper: int) -> int:
        if upper < lower:
            raise ValueError("empty range")
        return lower + secrets.randbelow(upper - lower + 1)

    def token(self, size: int) -> bytes:
        return secrets.token_bytes(size)


class SeededRandomSource:
    """Deterministic SHA-256 counter stream, for reproducible test runs.

    Integers are drawn by rejection sampling over the bit stream, so the
    distribution is exactly uniform (no modulo bias).
    """

    def __init__(self, seed: bytes | str) -> None:
        if isinstance(seed, str):
            seed = seed.encode()
        self._key = hashlib.sha256(b"seeded-random-source" + seed).digest()
        self._counter = 0
        self._buffer = b""

    def _refill(self) -> None:
        block = hashlib.sha256(
            self._key + self._counter.to_bytes(8, "big")
        ).digest()
        self._counter += 1
        self._buffer += block

    def _take(self, size: int) -> bytes:
        while len(self._buffer) < size:
            self._refill()
        out, self._buffer = self._buffer[:size], self._buffer[size:]
        return out

    def randint(self, lower: int, upper: int) -> int:
        if upper < lower:
            raise ValueError("empty range")
        span = upper - lower + 1
        nbits = (span - 1).bit_length() or 1
        nbytes = (nbits + 7) // 8
        mask = (1 << nbits) - 1
        while True:
            candidate = int.from_bytes(self._take(nbytes), "big") & mask
            if candidate < span:
                return lower + candidate

    def token(self, size: int) -> bytes:
        return self._take(size)


@dataclass
class TapeEntry:
    kind: str  # "int" | "bytes"
    lower: int
    upper: int
    value_hex: str


@dataclass
class Tape:
    """A recorded sequence of draws, replayable and JSON-serializable."""

    tape_id: str = ""
    entries: list[TapeEntry] = field(default_factory=list)

    def to_json(self) -> str:
        return json.dumps(
            {
                "tape_id": self.tape_id,
                "entries": [
                    [e.kind, e.lower, e.upper, e.value_hex] for e in self.entries
                ],
            }
        )

    @classmethod
    def from_json(cls, text: str) -> "Tape":
        raw = json.loads(text)
        return cls(
            tape_id=raw.get("tape_id", ""),
            entries=[TapeEntry(k, lo, hi, v) for k, lo, hi, v in raw["entries"]],
        )


class RecordingRandomSource:
    """Wraps another source and records every draw onto a tape."""

    def __init__(self, inner: RandomSource, tape_id: str = "") -> None:
        self._inner = inner
        self.tape = Tape(tape_id=tape_id)

    def randint(self, lower: int, upper: int) -> int:
        value = self._inner.randint(lower, upper)
        self.tape.entries.append(TapeEntry("int", lower, upper, f"{value:x}"))
        return value

    def token(self, size: int) -> bytes:
        value = self._inner.token(size)
        self.tape.entries.append(TapeEntry("bytes", size, size, value.hex()))
        return value


class ReplayRandomSource:
    """Replays a tape; refuses draws that do not match the recording."""

    def __init__(self, tape: Tape) -> None:
        self._tape = tape
        self._cursor = 0

    def _next(self, kind: str, lower: int, upper: int) -> TapeEntry:
        if self._cursor >= len(self._tape.entries):
            raise LookupError("randomness tape exhausted")
        entry = self._tape.entries[self._cursor]
        self._cursor += 1
        if (entry.kind, entry.lower, entry.upper) != (kind, lower, upper):
            raise LookupError(
                f"tape divergence at draw {self._cursor - 1}: "
                f"recorded {entry.kind}[{entry.lower},{entry.upper}], "
                f"requested {kind}[{lower},{upper}]"
            )
        return entry

    def randint(self, lower: int, upper: int) -> int:
        return int(self._next("int", lower, upper).value_hex, 16)

    def token(self, size: int) -> bytes:
        return bytes.fromhex(self._next("bytes", size, size).value_hex)


class FixedRandomSource:
    """Hands out pre-queued values; for oracle tests with pinned a, b."""

    def __init__(
        self, ints: list[int] | None = None, tokens: list[bytes] | None = None
    ) -> None:
        self._ints = list(ints or [])
        self._tokens = list(tokens or [])

    def randint(self, lower: int, upper: int) -> int:
        if not self._ints:
            raise LookupError("no queued integers left")
        value = self._ints.pop(0)
        if not lower <= value <= upper:
            raise ValueError(f"queued value {value} outside [{lower}, {upper}]")
        return value

    def token(self, size: int) -> bytes:
        if not self._tokens:
            raise LookupError("no queued tokens left")
        value = self._tokens.pop(0)
        if len(value) != size:
            raise ValueError("queued token has wrong size")
        return value

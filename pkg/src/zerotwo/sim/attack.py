"""Verifier-grinding dictionary attack: the breach model the passphrase
policy is designed to defeat.

Given a leaked (verifier, user, domain) triple, test candidate secrets by
recomputing g^H(user, domain, candidate) and comparing with the verifier.
Exponentiations share a fixed base, so an 8-bit-window precomputed table
replaces square-and-multiply; with it a trial costs one table walk
(~25 us in the 272-bit demo group, ~0.4 ms in the 2048-bit group).
"""

from __future__ import annotations

import os
from collections import deque
from concurrent.futures import ProcessPoolExecutor
from itertools import islice
from typing import Iterable

from ..core import (
    GroupProfile,
    IdentityPair,
    InvalidSecretError,
    MasterSecret,
    derive_effective_secret,
)


class FixedBaseComb:
    """Precomputed fixed-base exponentiation, 8-bit windows.

    Handles exponents up to 2^(window_bits * windows); anything larger
    falls back to builtin pow. Table memory: windows * 2^window_bits
    residues.
    """

    def __init__(
        self,
        base: int,
        modulus: int,
        *,
        window_bits: int = 8,
        exponent_bits: int = 256,
    ) -> None:
        self.base = base
        self.modulus = modulus
        self.window_bits = window_bits
        self.windows = (exponent_bits + window_bits - 1) // window_bits
        self.exponent_limit = 1 << (window_bits * self.windows)
        table = []
        step = base % modulus
        for _ in range(self.windows):
            row = [1] * (1 << window_bits)
            for j in range(1, 1 << window_bits):
                row[j] = row[j - 1] * step % modulus
            table.append(row)
            step = row[-1] * step % modulus  # base^(2^(w*window_bits)) for next row
        self._table = table

    def pow(self, exponent: int) -> int:
        if not 0 <= exponent < self.exponent_limit:
            return pow(self.base, exponent, self.modulus)
        acc = 1
        mask = (1 << self.window_bits) - 1
        modulus = self.modulus
        for window, row in enumerate(self._table):
            index = (exponent >> (window * self.window_bits)) & mask
            if index:
                acc = acc * row[index] % modulus
        return acc


def _candidate_matches(
    candidate: str,
    verifier: int,
    identity: IdentityPair,
    comb: FixedBaseComb,
) -> bool:
    try:
        x = derive_effective_secret(identity, MasterSecret.from_text(candidate))
    except (InvalidSecretError, ValueError):
        return False
    return comb.pow(x) == verifier


# worker-process state, installed by the pool initializer
_worker_state: dict = {}


def _init_worker(n: int, g: int, user: str, domain: str, verifier: int) -> None:
    _worker_state["comb"] = FixedBaseComb(g, n)
    _worker_state["identity"] = IdentityPair(user, domain)
    _worker_state["verifier"] = verifier


def _scan_chunk(chunk: list[str]) -> str | None:
    comb = _worker_state["comb"]
    identity = _worker_state["identity"]
    verifier = _worker_state["verifier"]
    for candidate in chunk:
        if _candidate_matches(candidate, verifier, identity, comb):
            return candidate
    return None


def dictionary_attack(
    verifier: int,
    identity: IdentityPair,
    candidates: Iterable[str],
    group: GroupProfile,
    *,
    processes: int | None = 1,
    chunk_size: int = 4096,
) -> str | None:
    """Return the first candidate whose verifier matches, or None.

    `processes=1` scans inline; `processes=None` uses every core. Workers
    stop early once a match surfaces.
    """
    if processes is None or processes < 1:
        processes = os.cpu_count() or 1
    if processes == 1:
        comb = FixedBaseComb(group.g, group.n)
        for candidate in candidates:
            if _candidate_matches(candidate, verifier, identity, comb):
                return candidate
        return None

    iterator = iter(candidates)
    with ProcessPoolExecutor(
        max_workers=processes,
        initializer=_init_worker,
        initargs=(group.n, group.g, identity.user, identity.domain, verifier),
    ) as pool:
        in_flight: deque = deque()

        def submit_next() -> bool:
            chunk = list(islice(iterator, chunk_size))
            if not chunk:
                return False
            in_flight.append(pool.submit(_scan_chunk, chunk))
            return True

        for _ in range(processes * 2):
            if not submit_next():
                break
        while in_flight:
            hit = in_flight.popleft().result()
            if hit is not None:
                for future in in_flight:
                    future.cancel()
                return hit
            submit_next()
    return None

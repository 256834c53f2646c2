"""Group profiles: the public algebraic setting (n, g) and derived constants.

The production profile is a pinned, published 2048-bit safe-prime group
(RFC 5054 appendix, generator 2), stored here as hex and trusted. Small
test profiles are validated outright: n must be a safe prime and g a
primitive root, both checkable deterministically at desk scale.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache

from .encoding import encode_int
from .errors import GroupError
from .hashing import hash_digest, int_from_digest, xor_bytes

# Deterministic Miller-Rabin witness set for n < 3_317_044_064_679_887_385_961_981.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_DETERMINISTIC_BOUND = 3_317_044_064_679_887_385_961_981

_SMALL_PRIMES = (
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67,
    71, 73, 79, 83, 89, 97,
)

PRODUCTION_GROUP_NAME = "main-2048"
PRODUCTION_N_HEX = (
    "ac6bdb41324a9a9bf166de5e1389582faf72b6651987ee07fc3192943db56050"
    "a37329cbb4a099ed8193e0757767a13dd52312ab4b03310dcd7f48a9da04fd50"
    "e8083969edb767b0cf6095179a163ab3661a05fbd5faaae82918a9962f0b93b8"
    "55f97993ec975eeaa80d740adbf4ff747359d041d5c33ea71d281e446b14773b"
    "ca97b43a23fb801676bd207a436c6481f1d2b9078717461a5b9d32e688f87748"
    "544523b524b0d57d5ea77a2775d2ecfa032cfbdbf52fb3786160279004e57ae6"
    "af874e7303ce53299ccc041c7bc308d82a5698f3a8d0c38271ae35f8e9dbfbb6"
    "94b5c803d89f7ae435de236d525f54759b65e372fcd68ef20fa7111f9e4aff73"
)
PRODUCTION_G = 2

# 272-bit safe prime pinned for the dictionary-attack demonstration: the
# group order 2q exceeds 2^256, so x -> g^x stays injective for full
# 256-bit digests while one exponentiation is ~25x cheaper than in the
# production group. Never used for real credentials.
ATTACK_DEMO_GROUP_NAME = "attack-demo-272"
ATTACK_DEMO_N_HEX = (
    "f5d3b317df080628f986a05e66ca02add380fa51a2d4bee47bfeb70372aeb6dd9bcf"
)
ATTACK_DEMO_G = 7


def is_prime(n: int) -> bool:
    """Miller-Rabin: deterministic below the 12-witness bound, 64 rounds
    with seeded witnesses above it (error probability < 4^-64)."""
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    if n < _DETERMINISTIC_BOUND:
        witnesses = _MR_WITNESSES
    else:
        rnd = random.Random(n)  # derived from n: reproducible verdicts
        witnesses = tuple(rnd.randrange(2, n - 1) for _ in range(64))
    for a in witnesses:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def is_safe_prime(n: int) -> bool:
    return is_prime(n) and is_prime((n - 1) // 2)


def is_primitive_root(g: int, n: int) -> bool:
    """Exact for safe primes: the only proper divisors of n-1 are 2 and q."""
    if not 1 < g < n:
        return False
    q = (n - 1) // 2
    return pow(g, 2, n) != 1 and pow(g, q, n) != 1


def derive_group_constants(n: int, g: int) -> tuple[int, bytes]:
    """Multiplier k = intFromDigest(H(enc(n), enc(g))) and l = H(enc(n)) xor H(enc(g)))."""
    k = int_from_digest(hash_digest([encode_int(n), encode_int(g)]))
    l = xor_bytes(hash_digest([encode_int(n)]), hash_digest([encode_int(g)]))
    return k, l


@dataclass(frozen=True)
class GroupProfile:
    """The agreed-upon setting: modulus n, generator g, and constants k, l.

    `injected` marks test profiles whose k and l were supplied externally
    instead of derived; protocol overrides (pinned exponents) are only
    honored for injected profiles.
    """

    name: str
    n: int
    g: int
    k: int
    l: bytes
    injected: bool = False

    def __post_init__(self) -> None:
        if len(self.l) != 32:
            raise GroupError("l must be exactly 32 bytes")
        if not 1 < self.g < self.n:
            raise GroupError("generator out of range")

    @classmethod
    def derive(cls, name: str, n: int, g: int, *, trusted: bool = False) -> "GroupProfile":
        """Build a profile with derived k and l, validating unless trusted.

        Trusted is reserved for pinned published constants too large for
        a desk-scale deterministic primality check.
        """
        if not trusted:
            validate_group(n, g)
        k, l = derive_group_constants(n, g)
        return cls(name=name, n=n, g=g, k=k, l=l, injected=False)

    @classmethod
    def injected_profile(
        cls, name: str, n: int, g: int, *, k: int, l: bytes
    ) -> "GroupProfile":
        """Test profile with externally supplied constants."""
        validate_group(n, g)
        return cls(name=name, n=n, g=g, k=k, l=l, injected=True)


def validate_group(n: int, g: int) -> None:
    if n < 11:
        raise GroupError("modulus too small to form a usable group")
    if not is_safe_prime(n):
        raise GroupError("modulus is not a safe prime")
    if not is_primitive_root(g, n):
        raise GroupError("generator is not a primitive root")


@lru_cache(maxsize=None)
def production_group() -> GroupProfile:
    """The pinned 2048-bit profile; safety verified once before pinning."""
    return GroupProfile.derive(
        PRODUCTION_GROUP_NAME, int(PRODUCTION_N_HEX, 16), PRODUCTION_G, trusted=True
    )


@lru_cache(maxsize=None)
def attack_demo_group() -> GroupProfile:
    return GroupProfile.derive(
        ATTACK_DEMO_GROUP_NAME, int(ATTACK_DEMO_N_HEX, 16), ATTACK_DEMO_G, trusted=True
    )


_NAMED = {
    PRODUCTION_GROUP_NAME: production_group,
    ATTACK_DEMO_GROUP_NAME: attack_demo_group,
}


def group_by_name(name: str) -> GroupProfile:
    try:
        return _NAMED[name]()
    except KeyError:
        raise GroupError(f"unknown group profile: {name}") from None

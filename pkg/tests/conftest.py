"""Shared fixtures: the injected small test group and frozen golden vectors."""

from __future__ import annotations

from pathlib import Path

import pytest

from zerotwo.core import GroupProfile, IdentityPair, MasterSecret

DATA_DIR = Path(__file__).parent / "data"

# Injected constants for the n=23 oracle profile. l is an arbitrary fixed
# 32-byte value; the oracle run used the same one.
TEST_L = bytes(range(32))


def slow_pow(base: int, exponent: int, modulus: int) -> int:
    """Brute-force repeated multiplication; the independent oracle route."""
    acc = 1
    for _ in range(exponent):
        acc = acc * base % modulus
    return acc


def load_golden_vectors() -> dict[str, str]:
    vectors: dict[str, str] = {}
    for line in (DATA_DIR / "golden_vectors.txt").read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        name, _, value = line.partition(" = ")
        vectors[name] = value.strip()
    return vectors


@pytest.fixture(scope="session")
def golden() -> dict[str, str]:
    return load_golden_vectors()


@pytest.fixture
def small_group() -> GroupProfile:
    return GroupProfile.injected_profile("test-23", 23, 5, k=3, l=TEST_L)


@pytest.fixture
def alice() -> IdentityPair:
    return IdentityPair("alice", "example.org")


@pytest.fixture
def alice_secret() -> MasterSecret:
    return MasterSecret.from_text("correct horse battery staple")

#!/usr/bin/env python3
"""Independent oracle producing the golden-vector file consumed by tests.

Deliberately self-contained: restates the integer encoding, hash framing,
and the small-group arithmetic from first principles using only the
standard library, without importing the zerotwo package. Exponentiation in
the small group uses plain repeated multiplication so the square-and-multiply
path in the implementation is checked against an independent route.

Usage: python tools/gen_golden_vectors.py > tests/data/golden_vectors.txt
"""

import hashlib
import hmac

# Published 2048-bit safe-prime group (RFC 5054 appendix), generator 2.
N_2048 = int(
    "ac6bdb41324a9a9bf166de5e1389582faf72b6651987ee07fc3192943db56050"
    "a37329cbb4a099ed8193e0757767a13dd52312ab4b03310dcd7f48a9da04fd50"
    "e8083969edb767b0cf6095179a163ab3661a05fbd5faaae82918a9962f0b93b8"
    "55f97993ec975eeaa80d740adbf4ff747359d041d5c33ea71d281e446b14773b"
    "ca97b43a23fb801676bd207a436c6481f1d2b9078717461a5b9d32e688f87748"
    "544523b524b0d57d5ea77a2775d2ecfa032cfbdbf52fb3786160279004e57ae6"
    "af874e7303ce53299ccc041c7bc308d82a5698f3a8d0c38271ae35f8e9dbfbb6"
    "94b5c803d89f7ae435de236d525f54759b65e372fcd68ef20fa7111f9e4aff73",
    16,
)
G_2048 = 2


def enc(x: int) -> bytes:
    """Minimal big-endian integer encoding; zero is a single 0x00 byte."""
    if x < 0:
        raise ValueError("negative")
    if x == 0:
        return b"\x00"
    out = []
    while x:
        out.append(x & 0xFF)
        x >>= 8
    return bytes(reversed(out))


def frame(payload: bytes) -> bytes:
    """4-byte big-endian length prefix followed by the payload."""
    if len(payload) >= 1 << 32:
        raise ValueError("oversize")
    return len(payload).to_bytes(4, "big") + payload


def digest(parts: list[bytes]) -> bytes:
    return hashlib.sha256(b"".join(frame(p) for p in parts)).digest()


def mac(key: bytes, parts: list[bytes]) -> bytes:
    return hmac.new(key, b"".join(frame(p) for p in parts), hashlib.sha256).digest()


def int_from_digest(d: bytes) -> int:
    return int.from_bytes(d, "big")


def xor32(a: bytes, b: bytes) -> bytes:
    return bytes(x ^ y for x, y in zip(a, b))


def slow_pow(base: int, exponent: int, modulus: int) -> int:
    """Repeated multiplication, no squaring shortcuts. Small exponents only."""
    acc = 1
    for _ in range(exponent):
        acc = acc * base % modulus
    return acc


def emit(name: str, value) -> None:
    if isinstance(value, int):
        value = f"{value:x}"
    elif isinstance(value, bytes):
        value = value.hex()
    print(f"{name} = {value}")


def main() -> None:
    print("# golden vectors produced by tools/gen_golden_vectors.py; do not edit")

    # hash framing vectors
    emit("digest_no_parts", digest([]))
    emit("digest_one_empty_part", digest([b""]))
    emit("digest_enc23_enc5", digest([enc(23), enc(5)]))

    # derived constants for the production group
    emit("k_prod_2048", int_from_digest(digest([enc(N_2048), enc(G_2048)])))
    emit("l_prod_2048", xor32(digest([enc(N_2048)]), digest([enc(G_2048)])))
    # order sensitivity: swapping (n, g) must give a different multiplier
    emit("k_prod_2048_swapped", int_from_digest(digest([enc(G_2048), enc(N_2048)])))

    # effective secret for the documented identity/passphrase example
    emit(
        "x_alice",
        int_from_digest(
            digest([b"alice", b"example.org", b"correct horse battery staple"])
        ),
    )
    emit(
        "x_alice_other_domain",
        int_from_digest(
            digest([b"alice", b"b.example", b"correct horse battery staple"])
        ),
    )

    # per-action MAC vectors
    k_fixed = b"\x0b" * 32
    emit("mac_authorize_fixed", mac(k_fixed, [b"transfer 100", b"\x01" * 16]))
    emit("mac_logout_fixed", mac(k_fixed, [b"logout"]))

    # small-group login transcript: n=23, g=5, injected k=3, l=00..1f,
    # x=6, a=5, b=3, u=7, d=3600s; exponentiation by repeated multiplication.
    n, g = 23, 5
    k_inj, u_inj = 3, 7
    l_inj = bytes(range(32))
    x, a, b = 6, 5, 3
    d = 3600
    v = slow_pow(g, x, n)
    emit("small_v", v)  # expected 8
    big_b = (k_inj * v + slow_pow(g, b, n)) % n
    emit("small_B", big_b)  # expected 11 = (24 + 10) mod 23
    big_a = slow_pow(g, a, n)
    emit("small_A", big_a)  # expected 20
    base = (big_b - k_inj * slow_pow(g, x, n)) % n
    s_client = slow_pow(base, a + u_inj * x, n)
    s_server = slow_pow(big_a * slow_pow(v, u_inj, n) % n, b, n)
    s_fermat = slow_pow(g, (a + u_inj * x) * b % (n - 1), n)
    assert s_client == s_server == s_fermat, (s_client, s_server, s_fermat)
    emit("small_S", s_client)  # expected 11
    key = digest([enc(s_client)])
    emit("small_K", key)
    emit(
        "small_M",
        mac(
            key,
            [
                l_inj,
                b"alice",
                b"example.org",
                enc(big_a),
                enc(big_b),
                d.to_bytes(8, "big"),
            ],
        ),
    )

    # fingerprint digest for the same challenge (first 8 bytes rendered)
    fp = digest([b"alice", b"example.org", enc(big_b)])[:8]
    emit("small_fingerprint_digest8", fp)

    # x = 22 drives v = g^(n-1) = 1 in the small group (order of a
    # primitive root is n-1): pinned so the rejection test can assert it.
    emit("small_v_order_exponent", slow_pow(g, 22, n))  # expected 1


if __name__ == "__main__":
    main()

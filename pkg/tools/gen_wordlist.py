#!/usr/bin/env python3
"""Generate the bundled passphrase wordlist (id "cv5-v1").

Emits all 6^5 = 7776 five-letter consonant/vowel words in lexicographic
order, one per line. Deterministic; re-running reproduces the same file.

Usage: python tools/gen_wordlist.py > src/zerotwo/authenticator/data/wordlist.txt
"""

CONSONANTS = "bdkmst"
VOWELS = "aeiouy"


def main() -> None:
    for c1 in CONSONANTS:
        for v1 in VOWELS:
            for c2 in CONSONANTS:
                for v2 in VOWELS:
                    for c3 in CONSONANTS:
                        print(f"{c1}{v1}{c2}{v2}{c3}")


if __name__ == "__main__":
    main()

"""The bundled passphrase wordlist (id "cv5-v1", 7776 entries)."""

from functools import lru_cache
from importlib import resources

from ..core.errors import ZeroTwoError

WORDLIST_ID = "cv5-v1"
WORDLIST_SIZE = 7776  # 6^5: one word per five-symbol draw


class ConfigurationError(ZeroTwoError):
    pass


@lru_cache(maxsize=1)
def load_wordlist() -> tuple[str, ...]:
    text = (
        resources.files("zerotwo.authenticator").joinpath("data/wordlist.txt")
    ).read_text()
    words = tuple(line.strip() for line in text.splitlines() if line.strip())
    if len(words) != WORDLIST_SIZE:
        raise ConfigurationError(
            f"wordlist must hold exactly {WORDLIST_SIZE} words, found {len(words)}"
        )
    if len(set(words)) != WORDLIST_SIZE:
        raise ConfigurationError("wordlist contains duplicates")
    return words

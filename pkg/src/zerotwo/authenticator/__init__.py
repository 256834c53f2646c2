"""Smartphone-role authenticator: secret storage, enrollment, approvals."""

from .app import (
    AccountMissing,
    Authenticator,
    AuthenticatorError,
    Confirmer,
    ConsentDeclined,
    InteractiveConfirmer,
    PayloadError,
    ScriptedConfirmer,
    ServerRejected,
    TamperDetected,
    parse_payload,
)
from .passphrase import PassphraseSpec, generate_passphrase
from .secretstore import (
    FAST_KDF,
    HARDENED_KDF,
    BiometricStubUnlock,
    KdfParams,
    PasswordUnlock,
    SecretStore,
    StoreAuthError,
    StoredAccount,
    StoredSession,
    StoreError,
    StoreNotFoundError,
    UnlockDenied,
)
from .wordlist import WORDLIST_ID, WORDLIST_SIZE, ConfigurationError, load_wordlist

__all__ = [
    "AccountMissing",
    "Authenticator",
    "AuthenticatorError",
    "BiometricStubUnlock",
    "Confirmer",
    "ConfigurationError",
    "ConsentDeclined",
    "FAST_KDF",
    "HARDENED_KDF",
    "InteractiveConfirmer",
    "KdfParams",
    "PasswordUnlock",
    "PassphraseSpec",
    "PayloadError",
    "ScriptedConfirmer",
    "SecretStore",
    "ServerRejected",
    "StoreAuthError",
    "StoreError",
    "StoreNotFoundError",
    "StoredAccount",
    "StoredSession",
    "TamperDetected",
    "UnlockDenied",
    "WORDLIST_ID",
    "WORDLIST_SIZE",
    "generate_passphrase",
    "load_wordlist",
    "parse_payload",
]

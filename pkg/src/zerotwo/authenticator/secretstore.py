"""Encrypted on-device container for master secrets, accounts, sessions.

Layout: a fixed header (magic "ZT01", format version, unlock kind, scrypt
parameters, salt, nonce) followed by an AES-256-GCM ciphertext over the
JSON payload, with the header as associated data. Wrong credentials and
corrupted bytes are indistinguishable: both fail tag verification.
Plaintext secrets exist only in memory; every write re-encrypts under a
fresh nonce.
"""

from __future__ import annotations

import hashlib
import json
import os
import secrets
import tempfile
from dataclasses import dataclass
from pathlib import Path
from typing import Protocol

from cryptography.exceptions import InvalidTag
from cryptography.hazmat.primitives.ciphers.aead import AESGCM

from ..core import IdentityPair, MasterSecret, SessionKey
from ..core.errors import ZeroTwoError

MAGIC = b"ZT01"
FORMAT_VERSION = 1
_SALT_SIZE = 16
_NONCE_SIZE = 12
_HEADER_SIZE = 4 + 1 + 1 + 3 + _SALT_SIZE + _NONCE_SIZE

UNLOCK_PASSWORD = 0
UNLOCK_BIOMETRIC_STUB = 1


class StoreError(ZeroTwoError):
    pass


class StoreNotFoundError(StoreError):
    pass


class StoreAuthError(StoreError):
    """Unlock failed; wrong credential and corruption look identical."""

    def __init__(self) -> None:
        super().__init__("store unlock failed")


class UnlockDenied(StoreError):
    pass


@dataclass(frozen=True)
class KdfParams:
    log2_n: int
    r: int
    p: int

    def derive(self, credential: bytes, salt: bytes) -> bytes:
        return hashlib.scrypt(
            credential,
            salt=salt,
            n=1 << self.log2_n,
            r=self.r,
            p=self.p,
            maxmem=512 * 1024 * 1024,
            dklen=32,
        )


HARDENED_KDF = KdfParams(log2_n=17, r=8, p=1)
FAST_KDF = KdfParams(log2_n=12, r=8, p=1)  # CI and demos only


class UnlockProvider(Protocol):
    kind: int

    def credential(self) -> bytes: ...


class PasswordUnlock:
    kind = UNLOCK_PASSWORD

    def __init__(self, password: str) -> None:
        if not password:
            raise StoreError("empty unlock password")
        self._password = password.encode()

    def credential(self) -> bytes:
        return self._password


class BiometricStubUnlock:
    """Stand-in for a hardware sensor: a device-key file plays the role of
    the enclave-held secret, and `allow` configures match/no-match."""

    kind = UNLOCK_BIOMETRIC_STUB

    def __init__(self, device_key_path: str | os.PathLike, allow: bool = True) -> None:
        self._path = Path(device_key_path)
        self.allow = allow

    def ensure_device_key(self) -> None:
        if not self._path.exists():
            self._path.parent.mkdir(parents=True, exist_ok=True)
            self._path.write_bytes(secrets.token_bytes(32).hex().encode())
            self._path.chmod(0o600)

    def credential(self) -> bytes:
        if not self.allow:
            raise UnlockDenied("biometric match rejected by configuration")
        if not self._path.exists():
            raise StoreNotFoundError(f"device key missing: {self._path}")
        return bytes.fromhex(self._path.read_text().strip())


@dataclass
class StoredAccount:
    label: str
    user: str
    domain: str
    secret_id: int
    enrolled: bool = False

    def identity(self) -> IdentityPair:
        return IdentityPair(self.user, self.domain)


@dataclass
class StoredSession:
    session_id: str
    user: str
    domain: str
    key: bytes
    established_at: float
    duration: int

    def session_key(self) -> SessionKey:
        return SessionKey(
            key=self.key, established_at=self.established_at, duration=self.duration
        )


class SecretStore:
    def __init__(
        self,
        path: str | os.PathLike,
        *,
        key: bytes,
        kdf: KdfParams,
        salt: bytes,
        unlock_kind: int,
        payload: dict,
    ) -> None:
        self.path = Path(path)
        self._key = key
        self._kdf = kdf
        self._salt = salt
        self._unlock_kind = unlock_kind
        self._secrets: dict[int, MasterSecret] = {
            int(s["id"]): MasterSecret(bytes.fromhex(s["value"]), s["origin"])
            for s in payload.get("secrets", [])
        }
        self._accounts: list[StoredAccount] = [
            StoredAccount(**a) for a in payload.get("accounts", [])
        ]
        self._sessions: dict[str, StoredSession] = {
            s["session_id"]: StoredSession(
                session_id=s["session_id"],
                user=s["user"],
                domain=s["domain"],
                key=bytes.fromhex(s["key"]),
                established_at=s["established_at"],
                duration=s["duration"],
            )
            for s in payload.get("sessions", [])
        }

    # -- lifecycle -----------------------------------------------------------

    @classmethod
    def create(
        cls,
        path: str | os.PathLike,
        provider: UnlockProvider,
        kdf: KdfParams = HARDENED_KDF,
    ) -> "SecretStore":
        if Path(path).exists():
            raise StoreError(f"refusing to overwrite existing store at {path}")
        if isinstance(provider, BiometricStubUnlock):
            provider.ensure_device_key()
        salt = secrets.token_bytes(_SALT_SIZE)
        key = kdf.derive(provider.credential(), salt)
        store = cls(
            path,
            key=key,
            kdf=kdf,
            salt=salt,
            unlock_kind=provider.kind,
            payload={},
        )
        store.save()
        return store

    @classmethod
    def open(cls, path: str | os.PathLike, provider: UnlockProvider) -> "SecretStore":
        blob = cls._read(path)
        header, ciphertext = blob[:_HEADER_SIZE], blob[_HEADER_SIZE:]
        kdf, salt, nonce, unlock_kind = cls._parse_header(header)
        key = kdf.derive(provider.credential(), salt)
        try:
            plaintext = AESGCM(key).decrypt(nonce, ciphertext, header)
        except InvalidTag:
            raise StoreAuthError() from None
        return cls(
            path,
            key=key,
            kdf=kdf,
            salt=salt,
            unlock_kind=unlock_kind,
            payload=json.loads(plaintext),
        )

    def save(self) -> None:
        payload = json.dumps(self._payload(), separators=(",", ":")).encode()
        nonce = secrets.token_bytes(_NONCE_SIZE)
        header = (
            MAGIC
            + bytes([FORMAT_VERSION, self._unlock_kind])
            + bytes([self._kdf.log2_n, self._kdf.r, self._kdf.p])
            + self._salt
            + nonce
        )
        ciphertext = AESGCM(self._key).encrypt(nonce, payload, header)
        self._write_atomic(header + ciphertext)

    # -- secrets ---------------------------------------------------------------

    def add_secret(self, secret: MasterSecret) -> int:
        secret_id = max(self._secrets, default=0) + 1
        self._secrets[secret_id] = secret
        self.save()
        return secret_id

    def get_secret(self, secret_id: int) -> MasterSecret:
        try:
            return self._secrets[secret_id]
        except KeyError:
            raise StoreError(f"no secret with id {secret_id}") from None

    def secret_ids(self) -> list[int]:
        return sorted(self._secrets)

    # -- accounts ----------------------------------------------------------------

    def add_account(self, label: str, identity: IdentityPair, secret_id: int) -> StoredAccount:
        self.get_secret(secret_id)
        if any(
            a.user == identity.user and a.domain == identity.domain
            for a in self._accounts
        ):
            raise StoreError(f"account for {identity.user}@{identity.domain} exists")
        if any(a.label == label for a in self._accounts):
            raise StoreError(f"account label {label!r} exists")
        account = StoredAccount(
            label=label,
            user=identity.user,
            domain=identity.domain,
            secret_id=secret_id,
        )
        self._accounts.append(account)
        self.save()
        return account

    def accounts(self) -> list[StoredAccount]:
        return list(self._accounts)

    def find_account(self, label: str) -> StoredAccount:
        for account in self._accounts:
            if account.label == label:
                return account
        raise StoreError(f"no account labelled {label!r}")

    def mark_enrolled(self, label: str) -> None:
        self.find_account(label).enrolled = True
        self.save()

    # -- sessions -----------------------------------------------------------------

    def put_session(self, session: StoredSession) -> None:
        self._sessions[session.session_id] = session
        self.save()

    def sessions(self) -> list[StoredSession]:
        return list(self._sessions.values())

    def get_session(self, session_id: str) -> StoredSession:
        try:
            return self._sessions[session_id]
        except KeyError:
            raise StoreError(f"no session {session_id}") from None

    def drop_session(self, session_id: str) -> None:
        self._sessions.pop(session_id, None)
        self.save()

    # -- plumbing --------------------------------------------------------------------

    def _payload(self) -> dict:
        return {
            "secrets": [
                {"id": sid, "value": s.as_bytes().hex(), "origin": s.origin}
                for sid, s in sorted(self._secrets.items())
            ],
            "accounts": [
                {
                    "label": a.label,
                    "user": a.user,
                    "domain": a.domain,
                    "secret_id": a.secret_id,
                    "enrolled": a.enrolled,
                }
                for a in self._accounts
            ],
            "sessions": [
                {
                    "session_id": s.session_id,
                    "user": s.user,
                    "domain": s.domain,
                    "key": s.key.hex(),
                    "established_at": s.established_at,
                    "duration": s.duration,
                }
                for s in self._sessions.values()
            ],
        }

    @staticmethod
    def _read(path: str | os.PathLike) -> bytes:
        p = Path(path)
        if not p.exists():
            raise StoreNotFoundError(f"no store at {p}")
        blob = p.read_bytes()
        if len(blob) < _HEADER_SIZE or not blob.startswith(MAGIC):
            raise StoreAuthError()
        return blob

    @staticmethod
    def _parse_header(header: bytes) -> tuple[KdfParams, bytes, bytes, int]:
        version, unlock_kind = header[4], header[5]
        if version != FORMAT_VERSION:
            raise StoreError(f"unsupported store format version {version}")
        kdf = KdfParams(log2_n=header[6], r=header[7], p=header[8])
        salt = header[9 : 9 + _SALT_SIZE]
        nonce = header[9 + _SALT_SIZE : _HEADER_SIZE]
        return kdf, salt, nonce, unlock_kind

    def _write_atomic(self, blob: bytes) -> None:
        self.path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp_name = tempfile.mkstemp(dir=self.path.parent, prefix=self.path.name)
        try:
            with os.fdopen(fd, "wb") as handle:
                handle.write(blob)
                handle.flush()
                os.fsync(handle.fileno())
            os.replace(tmp_name, self.path)
            self.path.chmod(0o600)
        except BaseException:
            try:
                os.unlink(tmp_name)
            except FileNotFoundError:
                pass
            raise

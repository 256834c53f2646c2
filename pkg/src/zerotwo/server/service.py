"""Reference authentication service: enrollment, login orchestration,
explicit authorization, session lifecycle, and persistence.

All state transitions happen under one lock, so check-and-consume
operations (pending logins, authorization nonces) are atomic: concurrent
duplicate completions race to exactly one verification attempt.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass

from ..core import (
    AuthenticationFailed,
    Clock,
    GroupProfile,
    IdentityPair,
    RandomSource,
    ServerEphemeral,
    SessionKey,
    SystemClock,
    SystemRandomSource,
    ZeroTwoError,
    fingerprint,
    group_by_name,
    mac_authorize,
    mac_logout,
    constant_time_equals,
    server_begin_login,
    server_complete_login,
)
from .config import ServerConfig
from .store import load_document, save_document


class ConflictError(ZeroTwoError):
    """Identifier already enrolled, or re-enrollment without authorization."""


class NotFoundError(ZeroTwoError):
    pass


class GoneError(ZeroTwoError):
    """Single-use record already consumed or past its window."""


class ThrottledError(ZeroTwoError):
    pass


class BadRequestError(ZeroTwoError):
    pass


class SessionExpiredError(ZeroTwoError):
    """Maps to the 440 wire status."""


AWAITING = "awaiting-authenticator"
COMPLETED = "completed"
FAILED = "failed"
EXPIRED = "expired"
PENDING = "pending"
CONFIRMED = "confirmed"
DENIED = "denied"


@dataclass
class UserRecord:
    user: str
    verifier: int
    created_at: float
    email_verified: bool


@dataclass
class PendingLogin:
    login_id: str
    user: str
    ephemeral: ServerEphemeral  # private half never serialized anywhere
    created_at: float
    state: str = AWAITING
    decoy: bool = False
    verifier: int = 0
    session_id: str | None = None
    browser_token: str | None = None


@dataclass
class SessionRecord:
    session_id: str
    user: str
    key: bytes
    established_at: float
    duration: int
    browser_token: str
    revoked: bool = False
    expired: bool = False

    def is_valid(self, now: float) -> bool:
        return (
            not self.revoked
            and not self.expired
            and now < self.established_at + self.duration
        )

    def session_key(self) -> SessionKey:
        return SessionKey(
            key=self.key, established_at=self.established_at, duration=self.duration
        )


@dataclass
class PendingAuthorization:
    auth_id: str
    session_id: str
    operation: str
    nonce: bytes
    created_at: float
    state: str = PENDING


@dataclass
class _RateWindow:
    started_at: float = 0.0
    count: int = 0


def qr_payload(kind: str, fields: dict) -> str:
    """Compact out-of-band payload; rendered as a QR code by the browser
    and ingested as text by the authenticator."""
    return json.dumps({"v": 1, "t": kind, **fields}, separators=(",", ":"))


class AuthService:
    def __init__(
        self,
        config: ServerConfig | None = None,
        *,
        group: GroupProfile | None = None,
        rng: RandomSource | None = None,
        clock: Clock | None = None,
    ) -> None:
        self.config = config or ServerConfig()
        self.group = group or group_by_name(self.config.group_name)
        self.rng = rng or SystemRandomSource()
        self.clock = clock or SystemClock()
        self._lock = threading.RLock()
        self._users: dict[str, UserRecord] = {}
        self._pending_signups: dict[str, dict] = {}
        self._pending_logins: dict[str, PendingLogin] = {}
        self._sessions: dict[str, SessionRecord] = {}
        self._pending_authz: dict[str, PendingAuthorization] = {}
        self._rate: dict[str, _RateWindow] = {}
        if self.config.store_path:
            self._load()

    # -- enrollment ---------------------------------------------------------

    def signup_init(self, user: str) -> dict:
        """Hand out the out-of-band enrollment payload; idempotent until
        the enrollment completes."""
        _check_identifier(user)
        with self._lock:
            if user in self._users:
                raise ConflictError("identifier already enrolled")
            payload = self._pending_signups.get(user)
            if payload is None:
                fields = {
                    "iu": user,
                    "is": self.config.domain,
                    "enroll_url": f"{self.config.base_url}/enroll",
                }
                payload = {**fields, "qr_payload": qr_payload("enroll", fields)}
                self._pending_signups[user] = payload
            return dict(payload)

    def enroll(self, user: str, verifier: int) -> None:
        _check_identifier(user)
        if not 1 < verifier < self.group.n:
            raise BadRequestError("verifier out of range")
        now = self.clock.now()
        with self._lock:
            if user in self._users:
                raise ConflictError("verifier is immutable once enrolled")
            if user not in self._pending_signups:
                raise NotFoundError("no signup in progress for this identifier")
            verified = self.config.demo or "@" not in user
            self._users[user] = UserRecord(
                user=user,
                verifier=verifier,
                created_at=now,
                email_verified=verified,
            )
            del self._pending_signups[user]
            self._save()

    # -- login --------------------------------------------------------------

    def login_init(self, user: str) -> dict:
        """Create a fresh challenge, or an indistinguishable decoy for an
        unknown identifier so the endpoint cannot enumerate accounts."""
        _check_identifier(user)
        now = self.clock.now()
        with self._lock:
            self._check_rate_limit(user, now)
            record = self._users.get(user)
            if record is not None:
                verifier, decoy = record.verifier, False
            else:
                # random verifier: same shape, same cost class, can never verify
                exponent = self.rng.randint(1, self.group.n - 2)
                verifier, decoy = pow(self.group.g, exponent, self.group.n), True
            ephemeral = server_begin_login(verifier, self.group, self.rng)
            login_id = self.rng.token(16).hex()
            self._pending_logins[login_id] = PendingLogin(
                login_id=login_id,
                user=user,
                ephemeral=ephemeral,
                created_at=now,
                decoy=decoy,
                verifier=verifier,
            )
            identity = IdentityPair(user, self.config.domain)
            return {
                "login_id": login_id,
                "iu": user,
                "is": self.config.domain,
                "B": f"{ephemeral.public:x}",
                "fingerprint": fingerprint(identity, ephemeral.public),
            }

    def login_complete(
        self, login_id: str, user: str, client_public: int, proof: bytes, duration: int
    ) -> dict:
        """One verification attempt per challenge: the pending record is
        consumed whatever the outcome, so a captured response cannot be
        retried against the same B."""
        now = self.clock.now()
        with self._lock:
            pending = self._pending_logins.get(login_id)
            if pending is None or pending.state != AWAITING:
                raise GoneError("login challenge consumed or unknown")
            if now >= pending.created_at + self.config.pending_window_seconds:
                pending.state = EXPIRED
                raise GoneError("login challenge expired")
            pending.state = FAILED  # flipped to completed only on success
            if user != pending.user:
                raise AuthenticationFailed()
            identity = IdentityPair(pending.user, self.config.domain)
            session_key = server_complete_login(
                identity,
                pending.verifier,
                pending.ephemeral,
                client_public,
                proof,
                duration,
                self.group,
                now,
                max_duration=self.config.session_cap_seconds,
            )
            if pending.decoy:  # unreachable without the decoy exponent
                raise AuthenticationFailed()
            session_id = self.rng.token(16).hex()
            browser_token = self.rng.token(32).hex()
            self._sessions[session_id] = SessionRecord(
                session_id=session_id,
                user=pending.user,
                key=session_key.key,
                established_at=session_key.established_at,
                duration=duration,
                browser_token=browser_token,
            )
            pending.state = COMPLETED
            pending.session_id = session_id
            pending.browser_token = browser_token
            self._save()
            return {"session_id": session_id, "browser_token": browser_token}

    def login_status(self, login_id: str) -> dict:
        now = self.clock.now()
        with self._lock:
            pending = self._pending_logins.get(login_id)
            if pending is None:
                raise NotFoundError("unknown login id")
            state = pending.state
            if state == AWAITING:
                if now >= pending.created_at + self.config.pending_window_seconds:
                    state = EXPIRED
                else:
                    return {"state": "pending"}
            if state == COMPLETED:
                session = self._sessions[pending.session_id]
                return {
                    "state": "ok",
                    "browser_token": pending.browser_token,
                    "redirect_url": "/app/account.html",
                    "session_expires_at": session.established_at + session.duration,
                }
            return {"state": "failed"}

    # -- explicit authorization ----------------------------------------------

    def request_authorization(self, session_id: str, operation: str) -> dict:
        now = self.clock.now()
        with self._lock:
            session = self._sessions.get(session_id)
            if session is None or not session.is_valid(now):
                raise SessionExpiredError("no valid session for this request")
            auth_id = self.rng.token(16).hex()
            nonce = self.rng.token(16)
            self._pending_authz[auth_id] = PendingAuthorization(
                auth_id=auth_id,
                session_id=session_id,
                operation=operation,
                nonce=nonce,
                created_at=now,
            )
            return {"auth_id": auth_id, "o": operation, "c": nonce.hex()}

    def authorization_status(self, auth_id: str) -> dict:
        with self._lock:
            pending = self._pending_authz.get(auth_id)
            if pending is None:
                raise NotFoundError("unknown authorization id")
            state = pending.state
            now = self.clock.now()
            if state == PENDING and (
                now >= pending.created_at + self.config.pending_window_seconds
            ):
                state = EXPIRED
            return {"auth_id": auth_id, "state": state, "o": pending.operation}

    def confirm_authorization(self, auth_id: str, proof: bytes) -> None:
        """Constant-time check of HMAC_K(o, c); the nonce is single-use,
        so any second confirmation attempt gets `gone`."""
        now = self.clock.now()
        with self._lock:
            pending = self._pending_authz.get(auth_id)
            if pending is None or pending.state not in (PENDING,):
                raise GoneError("authorization consumed or unknown")
            if now >= pending.created_at + self.config.pending_window_seconds:
                pending.state = EXPIRED
                raise GoneError("authorization expired")
            pending.state = DENIED  # single use: flipped exactly once
            session = self._sessions.get(pending.session_id)
            if session is None or not session.is_valid(now):
                raise AuthenticationFailed()
            expected = mac_authorize(
                session.session_key(), pending.operation, pending.nonce, now
            )
            if not constant_time_equals(proof, expected):
                raise AuthenticationFailed()
            pending.state = CONFIRMED

    # -- session lifecycle ----------------------------------------------------

    def logout(self, session_id: str, proof: bytes) -> None:
        """Verify HMAC_K("logout"), revoke, and kill the browser token.
        Idempotent once revoked: the logout message is replayable but the
        session is already dead."""
        now = self.clock.now()
        with self._lock:
            session = self._sessions.get(session_id)
            if session is None:
                raise NotFoundError("unknown session")
            if session.revoked:
                return  # idempotent
            if not session.is_valid(now):
                raise AuthenticationFailed()
            expected = mac_logout(session.session_key(), now)
            if not constant_time_equals(proof, expected):
                raise AuthenticationFailed()
            session.revoked = True
            session.browser_token = ""
            self._save()

    def browser_session(self, browser_token: str) -> dict:
        """Resolve a browser token to session metadata for page access."""
        now = self.clock.now()
        with self._lock:
            for session in self._sessions.values():
                if (
                    session.browser_token
                    and session.browser_token == browser_token
                    and session.is_valid(now)
                ):
                    return {
                        "iu": session.user,
                        "session_id": session.session_id,
                        "expires_at": session.established_at + session.duration,
                    }
        raise NotFoundError("unknown or expired browser token")

    def sweep_expired(self, now: float | None = None) -> int:
        """Mark everything past its window; returns how many flipped."""
        if now is None:
            now = self.clock.now()
        swept = 0
        with self._lock:
            window = self.config.pending_window_seconds
            for pending in self._pending_logins.values():
                if pending.state == AWAITING and now >= pending.created_at + window:
                    pending.state = EXPIRED
                    swept += 1
            for authz in self._pending_authz.values():
                if authz.state == PENDING and now >= authz.created_at + window:
                    authz.state = EXPIRED
                    swept += 1
            dirty = False
            for session in self._sessions.values():
                if (
                    not session.revoked
                    and not session.expired
                    and now >= session.established_at + session.duration
                ):
                    session.expired = True
                    session.browser_token = ""
                    swept += 1
                    dirty = True
            if dirty:
                self._save()
        return swept

    # -- authenticator polling channel ---------------------------------------

    def pending_for_device(self, user: str) -> dict:
        """The simulated push channel: everything awaiting this user's
        authenticator, in creation order."""
        _check_identifier(user)
        now = self.clock.now()
        window = self.config.pending_window_seconds
        with self._lock:
            identity = IdentityPair(user, self.config.domain)
            logins = [
                {
                    "login_id": p.login_id,
                    "iu": p.user,
                    "is": self.config.domain,
                    "B": f"{p.ephemeral.public:x}",
                    "fingerprint": fingerprint(identity, p.ephemeral.public),
                }
                for p in self._pending_logins.values()
                if p.user == user
                and p.state == AWAITING
                and now < p.created_at + window
            ]
            session_ids = {
                s.session_id for s in self._sessions.values() if s.user == user
            }
            authorizations = [
                {
                    "auth_id": a.auth_id,
                    "session_id": a.session_id,
                    "o": a.operation,
                    "c": a.nonce.hex(),
                }
                for a in self._pending_authz.values()
                if a.session_id in session_ids
                and a.state == PENDING
                and now < a.created_at + window
            ]
        return {"logins": logins, "authorizations": authorizations}

    # -- internals -------------------------------------------------------------

    def _check_rate_limit(self, user: str, now: float) -> None:
        window = self._rate.setdefault(user, _RateWindow(started_at=now))
        if now - window.started_at >= self.config.rate_limit_window_seconds:
            window.started_at = now
            window.count = 0
        if window.count >= self.config.rate_limit_count:
            raise ThrottledError("too many login attempts; slow down")
        window.count += 1

    def _save(self) -> None:
        if not self.config.store_path:
            return
        document = {
            "users": {
                u.user: {
                    "v": f"{u.verifier:x}",
                    "created_at": u.created_at,
                    "email_verified": u.email_verified,
                }
                for u in self._users.values()
            },
            "sessions": {
                s.session_id: {
                    "iu": s.user,
                    "key": s.key.hex(),
                    "established_at": s.established_at,
                    "duration": s.duration,
                    "browser_token": s.browser_token,
                    "revoked": s.revoked,
                    "expired": s.expired,
                }
                for s in self._sessions.values()
            },
        }
        save_document(self.config.store_path, document)

    def _load(self) -> None:
        document = load_document(self.config.store_path)
        for user, raw in document["users"].items():
            self._users[user] = UserRecord(
                user=user,
                verifier=int(raw["v"], 16),
                created_at=raw["created_at"],
                email_verified=raw["email_verified"],
            )
        for session_id, raw in document["sessions"].items():
            self._sessions[session_id] = SessionRecord(
                session_id=session_id,
                user=raw["iu"],
                key=bytes.fromhex(raw["key"]),
                established_at=raw["established_at"],
                duration=raw["duration"],
                browser_token=raw["browser_token"],
                revoked=raw["revoked"],
                expired=raw["expired"],
            )


def _check_identifier(user: str) -> None:
    if not user or len(user) > 255:
        raise BadRequestError("identifier must be 1-255 characters")
    if any(ord(ch) < 0x20 or ch == "\x7f" for ch in user):
        raise BadRequestError("identifier contains control characters")

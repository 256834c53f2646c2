"""HTTP+JSON surface over the auth service.

The API only ever accepts identifiers, verifiers, public keys, proofs,
durations, and confirmations; no endpoint has a password-typed field,
which a schema test asserts against the generated OpenAPI document.
"""

from __future__ import annotations

from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse, RedirectResponse, Response
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, ConfigDict, Field

from ..core import AuthenticationFailed, DurationRejected, ProtocolViolation
from .service import (
    AuthService,
    BadRequestError,
    ConflictError,
    GoneError,
    NotFoundError,
    SessionExpiredError,
    ThrottledError,
)

HEX = r"^[0-9a-f]+$"
SESSION_EXPIRED_STATUS = 440


class SignupRequest(BaseModel):
    iu: str = Field(min_length=1, max_length=255)


class SignupResponse(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    iu: str
    is_: str = Field(alias="is")
    enroll_url: str
    qr_payload: str


class EnrollRequest(BaseModel):
    iu: str = Field(min_length=1, max_length=255)
    v: str = Field(min_length=1)  # range/charset checked for a 400, not a 422


class LoginInitRequest(BaseModel):
    iu: str = Field(min_length=1, max_length=255)


class LoginChallengeResponse(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    login_id: str
    iu: str
    is_: str = Field(alias="is")
    B: str
    fingerprint: str


class LoginCompleteRequest(BaseModel):
    login_id: str
    iu: str
    A: str = Field(pattern=HEX)
    M: str = Field(pattern=HEX, min_length=64, max_length=64)
    d: int = Field(ge=0, lt=1 << 64)


class LoginCompleteResponse(BaseModel):
    session_id: str
    browser_token: str


class LoginStatusResponse(BaseModel):
    state: str
    browser_token: str | None = None
    redirect_url: str | None = None
    session_expires_at: float | None = None


class AuthzRequest(BaseModel):
    session_id: str
    o: str = Field(min_length=1, max_length=1024)


class AuthzChallengeResponse(BaseModel):
    auth_id: str
    o: str
    c: str


class AuthzConfirmRequest(BaseModel):
    auth_id: str
    M: str = Field(pattern=HEX, min_length=64, max_length=64)


class LogoutRequest(BaseModel):
    session_id: str
    M: str = Field(pattern=HEX, min_length=64, max_length=64)


class PendingLoginItem(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    login_id: str
    iu: str
    is_: str = Field(alias="is")
    B: str
    fingerprint: str


class PendingAuthzItem(BaseModel):
    auth_id: str
    session_id: str
    o: str
    c: str


class DevicePendingResponse(BaseModel):
    logins: list[PendingLoginItem]
    authorizations: list[PendingAuthzItem]


_ERROR_STATUS = {
    BadRequestError: 400,
    AuthenticationFailed: 401,
    NotFoundError: 404,
    ConflictError: 409,
    GoneError: 410,
    DurationRejected: 422,
    ProtocolViolation: 422,
    ThrottledError: 429,
    SessionExpiredError: SESSION_EXPIRED_STATUS,
}


def create_app(service: AuthService) -> FastAPI:
    app = FastAPI(title="zerotwo reference server", version="0.1.0")
    app.state.service = service

    for exc_type, status in _ERROR_STATUS.items():
        def handler(request: Request, exc: Exception, status=status):
            detail = (
                "authentication failed"
                if isinstance(exc, AuthenticationFailed)
                else str(exc)
            )
            return JSONResponse(status_code=status, content={"detail": detail})

        app.add_exception_handler(exc_type, handler)

    @app.post("/signup", response_model=SignupResponse)
    def signup(request: SignupRequest):
        return service.signup_init(request.iu)

    @app.post("/enroll", status_code=204)
    def enroll(request: EnrollRequest):
        if not _is_lower_hex(request.v):
            raise BadRequestError("verifier must be lowercase hex")
        service.enroll(request.iu, int(request.v, 16))
        return Response(status_code=204)

    @app.post("/login/init", response_model=LoginChallengeResponse)
    def login_init(request: LoginInitRequest):
        return service.login_init(request.iu)

    @app.post("/login/complete", response_model=LoginCompleteResponse)
    def login_complete(request: LoginCompleteRequest):
        return service.login_complete(
            request.login_id,
            request.iu,
            int(request.A, 16),
            bytes.fromhex(request.M),
            request.d,
        )

    @app.get("/login/status/{login_id}", response_model=LoginStatusResponse)
    def login_status(login_id: str):
        return service.login_status(login_id)

    @app.post("/authz/request", response_model=AuthzChallengeResponse)
    def authz_request(request: AuthzRequest):
        return service.request_authorization(request.session_id, request.o)

    @app.get("/authz/status/{auth_id}")
    def authz_status(auth_id: str):
        return service.authorization_status(auth_id)

    @app.post("/authz/confirm", status_code=204)
    def authz_confirm(request: AuthzConfirmRequest):
        service.confirm_authorization(request.auth_id, bytes.fromhex(request.M))
        return Response(status_code=204)

    @app.post("/logout", status_code=204)
    def logout(request: LogoutRequest):
        service.logout(request.session_id, bytes.fromhex(request.M))
        return Response(status_code=204)

    @app.get("/device/pending/{iu}", response_model=DevicePendingResponse)
    def device_pending(iu: str):
        return service.pending_for_device(iu)

    @app.get("/session/by-token/{browser_token}")
    def session_by_token(browser_token: str):
        return service.browser_session(browser_token)

    frontend_dir = service.config.frontend_dir
    if frontend_dir and Path(frontend_dir).is_dir():
        app.mount("/app", StaticFiles(directory=frontend_dir, html=True), name="app")

        @app.get("/", include_in_schema=False)
        def index():
            return RedirectResponse("/app/")

    return app


def _is_lower_hex(text: str) -> bool:
    return bool(text) and all(c in "0123456789abcdef" for c in text)

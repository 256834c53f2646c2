"""Reference authentication service: HTTP API, state machine, persistence."""

from .api import create_app
from .config import ServerConfig
from .service import (
    AuthService,
    BadRequestError,
    ConflictError,
    GoneError,
    NotFoundError,
    SessionExpiredError,
    ThrottledError,
)

__all__ = [
    "AuthService",
    "BadRequestError",
    "ConflictError",
    "GoneError",
    "NotFoundError",
    "ServerConfig",
    "SessionExpiredError",
    "ThrottledError",
    "create_app",
]

"""Server configuration: flags, env overrides (ZEROTWO_ prefix), defaults."""

from __future__ import annotations

import os
from dataclasses import dataclass, replace

DEFAULT_SESSION_CAP = 30 * 86400  # 30 days
DEFAULT_PENDING_WINDOW = 120.0  # seconds, logins and authorizations
DEFAULT_RATE_LIMIT_COUNT = 10  # login inits per user per window
DEFAULT_RATE_LIMIT_WINDOW = 60.0


@dataclass(frozen=True)
class ServerConfig:
    domain: str = "demo.example"
    listen: str = "127.0.0.1:9000"
    store_path: str | None = None
    session_cap_seconds: int = DEFAULT_SESSION_CAP
    demo: bool = False
    pending_window_seconds: float = DEFAULT_PENDING_WINDOW
    rate_limit_count: int = DEFAULT_RATE_LIMIT_COUNT
    rate_limit_window_seconds: float = DEFAULT_RATE_LIMIT_WINDOW
    group_name: str = "main-2048"
    public_base_url: str | None = None
    frontend_dir: str | None = None

    @property
    def base_url(self) -> str:
        return self.public_base_url or f"http://{self.domain}"

    def with_env_overrides(self) -> "ServerConfig":
        """Apply ZEROTWO_* environment variables on top of this config."""
        updates: dict = {}
        mapping = {
            "ZEROTWO_DOMAIN": ("domain", str),
            "ZEROTWO_LISTEN": ("listen", str),
            "ZEROTWO_STORE_PATH": ("store_path", str),
            "ZEROTWO_SESSION_CAP_SECONDS": ("session_cap_seconds", int),
            "ZEROTWO_DEMO": ("demo", _parse_bool),
            "ZEROTWO_GROUP": ("group_name", str),
            "ZEROTWO_PUBLIC_BASE_URL": ("public_base_url", str),
            "ZEROTWO_FRONTEND_DIR": ("frontend_dir", str),
        }
        for env_name, (field_name, cast) in mapping.items():
            raw = os.environ.get(env_name)
            if raw is not None:
                updates[field_name] = cast(raw)
        return replace(self, **updates) if updates else self


def _parse_bool(raw: str) -> bool:
    return raw.strip().lower() in ("1", "true", "yes", "on")

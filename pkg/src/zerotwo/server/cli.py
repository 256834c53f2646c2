"""`zerotwo-server`: run the reference server."""

from __future__ import annotations

import argparse

from .api import create_app
from .config import ServerConfig
from .service import AuthService


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="zerotwo-server",
        description="Reference zero-knowledge authentication server",
    )
    parser.add_argument("--listen", default=None, help="host:port to bind")
    parser.add_argument("--domain", default=None, help="server identifier (domain)")
    parser.add_argument("--store-path", default=None, help="JSON persistence file")
    parser.add_argument(
        "--session-cap-seconds", type=int, default=None,
        help="maximum accepted session duration",
    )
    parser.add_argument(
        "--demo", action="store_true",
        help="demo mode: email ownership verification auto-passes",
    )
    parser.add_argument(
        "--group", default=None, dest="group_name",
        help="group profile name (default main-2048)",
    )
    parser.add_argument(
        "--frontend-dir", default=None,
        help="serve this directory of static assets under /app",
    )
    return parser


def config_from_args(args: argparse.Namespace) -> ServerConfig:
    base = ServerConfig().with_env_overrides()
    overrides = {
        name: value
        for name, value in (
            ("listen", args.listen),
            ("domain", args.domain),
            ("store_path", args.store_path),
            ("session_cap_seconds", args.session_cap_seconds),
            ("group_name", args.group_name),
            ("frontend_dir", args.frontend_dir),
        )
        if value is not None
    }
    if args.demo:
        overrides["demo"] = True
    if overrides:
        from dataclasses import replace

        base = replace(base, **overrides)
    return base


def main(argv: list[str] | None = None) -> int:
    import uvicorn

    args = build_parser().parse_args(argv)
    config = config_from_args(args)
    app = create_app(AuthService(config))
    host, _, port = config.listen.rpartition(":")
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port))
    return 0


if __name__ == "__main__":
    raise SystemExit(main())

"""Configuration plumbing: flags, env overrides, CLI parsers."""

from zerotwo.authenticator.cli import build_parser as auth_parser
from zerotwo.server.cli import build_parser as server_parser, config_from_args
from zerotwo.server.config import ServerConfig
from zerotwo.sim.cli import build_parser as sim_parser


def test_env_overrides(monkeypatch):
    monkeypatch.setenv("ZEROTWO_DOMAIN", "env.example")
    monkeypatch.setenv("ZEROTWO_SESSION_CAP_SECONDS", "3600")
    monkeypatch.setenv("ZEROTWO_DEMO", "true")
    config = ServerConfig().with_env_overrides()
    assert config.domain == "env.example"
    assert config.session_cap_seconds == 3600
    assert config.demo is True


def test_no_env_keeps_defaults():
    config = ServerConfig().with_env_overrides()
    assert config.domain == "demo.example"
    assert config.session_cap_seconds == 30 * 86400
    assert config.demo is False
    assert config.base_url == "http://demo.example"


def test_server_flags_beat_env(monkeypatch):
    monkeypatch.setenv("ZEROTWO_DOMAIN", "env.example")
    args = server_parser().parse_args(
        ["--domain", "flag.example", "--session-cap-seconds", "60", "--demo"]
    )
    config = config_from_args(args)
    assert config.domain == "flag.example"
    assert config.session_cap_seconds == 60
    assert config.demo is True


def test_server_flag_surface():
    args = server_parser().parse_args(
        [
            "--listen", "0.0.0.0:9100",
            "--domain", "x.example",
            "--store-path", "/tmp/x.json",
            "--session-cap-seconds", "86400",
            "--demo",
        ]
    )
    config = config_from_args(args)
    assert config.listen == "0.0.0.0:9100"
    assert config.store_path == "/tmp/x.json"


def test_auth_cli_surface():
    parser = auth_parser()
    for argv in (
        ["init"],
        ["passphrase", "--words", "7"],
        ["accounts", "add", "--label", "l", "--iu", "u", "--is", "d.example"],
        ["accounts", "list"],
        ["enroll", "--payload", "-"],
        ["approve", "--login", "abc"],
        ["authz", "list"],
        ["authz", "confirm", "deadbeef"],
        ["logout", "cafebabe"],
        ["sessions"],
    ):
        parser.parse_args(argv)


def test_sim_cli_surface():
    parser = sim_parser()
    args = parser.parse_args(["run", "--scenario", "happy-path", "--list"])
    assert args.scenario == "happy-path"

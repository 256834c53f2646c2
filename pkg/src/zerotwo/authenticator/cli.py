"""`zerotwo-auth`: the smartphone-role authenticator as a CLI."""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from ..core import IdentityPair, group_by_name
from ..core.errors import ZeroTwoError
from .app import (
    Authenticator,
    InteractiveConfirmer,
    ScriptedConfirmer,
    parse_payload,
)
from .passphrase import PassphraseSpec, generate_passphrase
from .secretstore import (
    FAST_KDF,
    HARDENED_KDF,
    BiometricStubUnlock,
    PasswordUnlock,
    SecretStore,
)

DEFAULT_STORE = "~/.zerotwo/store.zt"
DEFAULT_SERVER = "http://127.0.0.1:9000"
DEFAULT_PASSWORD_ENV = "ZEROTWO_UNLOCK_PASSWORD"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="zerotwo-auth", description="ZeroTwo authenticator (smartphone role)"
    )
    parser.add_argument("--store", default=DEFAULT_STORE, help="store file path")
    parser.add_argument("--server", default=DEFAULT_SERVER, help="server base URL")
    parser.add_argument(
        "--unlock-password-env",
        default=DEFAULT_PASSWORD_ENV,
        metavar="VAR",
        help="environment variable holding the store unlock password",
    )
    parser.add_argument(
        "--unlock",
        choices=("password", "biometric"),
        default="password",
        help="unlock provider (biometric is a configurable stub)",
    )
    parser.add_argument(
        "--device-key",
        default=None,
        help="device key file for the biometric stub (default <store>.devicekey)",
    )
    parser.add_argument(
        "--biometric-match",
        choices=("yes", "no"),
        default="yes",
        help="stub sensor verdict",
    )
    parser.add_argument(
        "--yes", action="store_true", help="scripted consent: approve every prompt"
    )
    parser.add_argument(
        "--duration-seconds", type=int, default=8 * 3600,
        help="session duration requested on approval",
    )
    parser.add_argument(
        "--group", default="main-2048", help="group profile name"
    )

    sub = parser.add_subparsers(dest="command", required=True)

    init = sub.add_parser("init", help="create a new encrypted store")
    init.add_argument(
        "--kdf-profile", choices=("hardened", "fast"), default="hardened",
        help="fast is for CI and demos only",
    )

    passphrase = sub.add_parser(
        "passphrase", help="generate a random passphrase (display-once by default)"
    )
    passphrase.add_argument("--words", type=int, default=6)
    passphrase.add_argument(
        "--save", action="store_true",
        help="store the passphrase as a master secret instead of only printing it",
    )

    accounts = sub.add_parser("accounts", help="manage accounts")
    accounts_sub = accounts.add_subparsers(dest="accounts_command", required=True)
    add = accounts_sub.add_parser("add")
    add.add_argument("--label", required=True)
    add.add_argument("--iu", required=True, help="user identifier")
    add.add_argument("--is", required=True, dest="domain", help="server domain")
    add.add_argument(
        "--secret-id", type=int, default=None,
        help="master secret to back this account (default: newest)",
    )
    accounts_sub.add_parser("list")

    enroll = sub.add_parser("enroll", help="enroll from an out-of-band payload")
    enroll.add_argument(
        "--payload", required=True, metavar="FILE|-", help="payload text, - for stdin"
    )
    enroll.add_argument("--label", default=None)

    approve = sub.add_parser("approve", help="approve a pending login")
    approve_src = approve.add_mutually_exclusive_group(required=True)
    approve_src.add_argument("--login", metavar="LOGIN_ID", default=None)
    approve_src.add_argument(
        "--payload", metavar="FILE|-", default=None,
        help="login challenge payload (offline path)",
    )

    authz = sub.add_parser("authz", help="explicit authorizations")
    authz_sub = authz.add_subparsers(dest="authz_command", required=True)
    authz_sub.add_parser("list")
    confirm = authz_sub.add_parser("confirm")
    confirm.add_argument("auth_id")
    confirm.add_argument("--deny", action="store_true")

    logout = sub.add_parser("logout", help="remote logout")
    logout.add_argument("session_id")

    sub.add_parser("sessions", help="list locally held sessions")

    return parser


def _unlock_provider(args):
    if args.unlock == "biometric":
        device_key = args.device_key or f"{os.path.expanduser(args.store)}.devicekey"
        return BiometricStubUnlock(device_key, allow=args.biometric_match == "yes")
    password = os.environ.get(args.unlock_password_env)
    if not password:
        raise ZeroTwoError(
            f"set {args.unlock_password_env} to the store unlock password"
        )
    return PasswordUnlock(password)


def _open_store(args) -> SecretStore:
    return SecretStore.open(os.path.expanduser(args.store), _unlock_provider(args))


def _read_payload(source: str) -> str:
    if source == "-":
        return sys.stdin.read()
    return Path(source).read_text()


def main(argv: list[str] | None = None, transport=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _dispatch(args, transport)
    except ZeroTwoError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def _dispatch(args, transport) -> int:
    if args.command == "init":
        kdf = HARDENED_KDF if args.kdf_profile == "hardened" else FAST_KDF
        path = os.path.expanduser(args.store)
        SecretStore.create(path, _unlock_provider(args), kdf=kdf)
        print(f"created store at {path}")
        return 0

    if args.command == "passphrase":
        secret = generate_passphrase(PassphraseSpec(word_count=args.words))
        text = secret.as_bytes().decode()
        if args.save:
            store = _open_store(args)
            secret_id = store.add_secret(secret)
            print(f"stored master secret #{secret_id}")
            print(text)
        else:
            # display-once mode: printed, never persisted
            print(text)
        return 0

    store = _open_store(args)

    if args.command == "accounts":
        if args.accounts_command == "add":
            secret_id = args.secret_id
            if secret_id is None:
                ids = store.secret_ids()
                if not ids:
                    raise ZeroTwoError(
                        "no master secret in the store; run `passphrase --save` first"
                    )
                secret_id = ids[-1]
            account = store.add_account(
                args.label, IdentityPair(args.iu, args.domain), secret_id
            )
            print(f"added account {account.label!r} ({args.iu} at {args.domain})")
        else:
            for account in store.accounts():
                state = "enrolled" if account.enrolled else "not enrolled"
                print(
                    f"{account.label}: {account.user} at {account.domain} "
                    f"(secret #{account.secret_id}, {state})"
                )
        return 0

    if transport is None:
        import httpx

        transport = httpx.Client(base_url=args.server, timeout=10.0)

    group = group_by_name(args.group)
    auth = Authenticator(store, transport, group=group)
    confirmer = ScriptedConfirmer() if args.yes else InteractiveConfirmer()

    if args.command == "enroll":
        label = auth.handle_enroll_payload(_read_payload(args.payload), args.label)
        print(f"enrolled account {label!r}")
        return 0

    if args.command == "approve":
        if args.payload is not None:
            challenge = parse_payload(_read_payload(args.payload), "login")
        else:
            challenge = _find_challenge(auth, args.login)
        session_id = auth.approve_login(
            challenge, confirmer, duration=args.duration_seconds
        )
        print(f"session established: {session_id}")
        return 0

    if args.command == "authz":
        if args.authz_command == "list":
            pending = auth.pending_for_all_accounts()["authorizations"]
            if not pending:
                print("no pending authorizations")
            for item in pending:
                print(f"{item['auth_id']}: {item['o']} (session {item['session_id']})")
            return 0
        pending = _find_authorization(auth, args.auth_id)
        if args.deny:
            print("denied locally; nothing sent")
            return 0
        sent = auth.confirm_authorization(pending, confirmer)
        print("confirmed" if sent else "declined; nothing sent")
        return 0

    if args.command == "logout":
        auth.remote_logout(args.session_id)
        print("session revoked; local key erased")
        return 0

    if args.command == "sessions":
        for session in store.sessions():
            print(
                f"{session.session_id}: {session.user} at {session.domain}, "
                f"expires {session.established_at + session.duration:.0f}"
            )
        return 0

    raise ZeroTwoError(f"unhandled command {args.command}")


def _find_challenge(auth: Authenticator, login_id: str) -> dict:
    for item in auth.pending_for_all_accounts()["logins"]:
        if item["login_id"] == login_id:
            return item
    raise ZeroTwoError(f"no pending login {login_id} for any account in this store")


def _find_authorization(auth: Authenticator, auth_id: str) -> dict:
    for item in auth.pending_for_all_accounts()["authorizations"]:
        if item["auth_id"] == auth_id:
            return item
    raise ZeroTwoError(f"no pending authorization {auth_id}")


if __name__ == "__main__":
    raise SystemExit(main())

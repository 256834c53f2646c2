"""Scenario runner: wires an in-process server and authenticator through
the capturing transport, executes scripted steps, and checks outcomes."""

from __future__ import annotations

import tempfile
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

from fastapi.testclient import TestClient

from ..authenticator import (
    FAST_KDF,
    Authenticator,
    PasswordUnlock,
    ScriptedConfirmer,
    SecretStore,
)
from ..core import (
    GroupProfile,
    IdentityPair,
    ManualClock,
    MasterSecret,
    RecordingRandomSource,
    ReplayRandomSource,
    SeededRandomSource,
    Tape,
    derive_effective_secret,
    encode_int,
    hash_digest,
    production_group,
    scrambling_parameter,
)
from ..core.errors import ZeroTwoError
from ..server import AuthService, ServerConfig, create_app
from .transport import CapturingTransport, Transcript


class ScenarioFailure(ZeroTwoError):
    def __init__(self, scenario: str, step: str, expected: str, actual: str) -> None:
        super().__init__(
            f"scenario {scenario!r} diverged at step {step!r}: "
            f"expected {expected!r}, got {actual!r}"
        )
        self.step = step


@dataclass
class Scenario:
    name: str
    description: str
    expected_outcomes: list[tuple[str, str]]
    run: Callable[["ScenarioContext"], None]


@dataclass
class ScenarioContext:
    scenario: Scenario
    service: AuthService
    transport: CapturingTransport
    clock: ManualClock
    rng: object
    group: GroupProfile
    store: SecretStore
    authenticator: Authenticator
    confirmer: ScriptedConfirmer
    outcomes: list[tuple[str, str]] = field(default_factory=list)
    secrets: dict[str, bytes] = field(default_factory=dict)

    def step(self, name: str, outcome: str) -> None:
        self.outcomes.append((name, outcome))

    # -- secret bookkeeping for the negative-knowledge check ------------------

    def track_secret(self, name: str, blob: bytes) -> None:
        self.secrets[name] = blob

    def track_int(self, name: str, value: int) -> None:
        self.secrets[name] = encode_int(value)

    def track_login_secrets(self, label: str, login_id: str, secret: MasterSecret) -> None:
        self.secrets.update(
            collect_login_secrets(
                self.service, self.transport.transcript, label, login_id, secret
            )
        )


def collect_login_secrets(
    service: AuthService,
    transcript: Transcript,
    label: str,
    login_id: str,
    secret: MasterSecret,
) -> dict[str, bytes]:
    """Recompute every secret quantity of a login attempt so the captured
    wire bytes can be scanned for them. White-box by design: the harness
    owns both endpoints."""
    import json as _json

    pending = service._pending_logins[login_id]
    identity = IdentityPair(pending.user, service.config.domain)
    secrets: dict[str, bytes] = {f"{label}.p": secret.as_bytes()}
    x = derive_effective_secret(identity, secret)
    secrets[f"{label}.x"] = encode_int(x)
    secrets[f"{label}.b"] = encode_int(pending.ephemeral.private)
    requests = [
        m
        for m in transcript.find_requests("/login/complete")
        if b'"login_id"' in m.body and login_id.encode() in m.body
    ]
    user_record = service._users.get(pending.user)
    if requests and user_record is not None:
        body = _json.loads(requests[-1].body)
        client_public = int(body["A"], 16)
        n = service.group.n
        u = scrambling_parameter(client_public, pending.ephemeral.public)
        shared = pow(
            client_public * pow(user_record.verifier, u, n) % n,
            pending.ephemeral.private,
            n,
        )
        secrets[f"{label}.S"] = encode_int(shared)
        secrets[f"{label}.K"] = hash_digest([encode_int(shared)])
    return secrets


@dataclass
class ScenarioResult:
    scenario: str
    ok: bool
    outcomes: list[tuple[str, str]]
    expected: list[tuple[str, str]]
    transcript: Transcript
    tape: Tape | None
    secrets: dict[str, bytes]
    first_divergence: str | None = None


def find_secret_leaks(
    transcript: Transcript, secrets: dict[str, bytes]
) -> list[tuple[str, int]]:
    """Scan captured wire bytes for secret material, raw and hex-encoded."""
    leaks = []
    for message in transcript.messages:
        for name, blob in secrets.items():
            if not blob:
                continue
            for needle in (blob, blob.hex().encode()):
                if needle in message.body:
                    leaks.append((name, message.seq))
                    break
    return leaks


def run_scenario(
    scenario: Scenario,
    tape: Tape | None = None,
    *,
    group: GroupProfile | None = None,
    check: bool = False,
) -> ScenarioResult:
    """Execute a scenario against a fresh in-process server.

    Without a tape, draws come from a per-scenario seeded source and are
    recorded; with one, every draw replays from it, reproducing the
    transcript byte-for-byte.
    """
    group = group or production_group()
    clock = ManualClock()
    if tape is None:
        rng = RecordingRandomSource(
            SeededRandomSource(f"scenario:{scenario.name}"),
            tape_id=scenario.name,
        )
        out_tape = rng.tape
    else:
        rng = ReplayRandomSource(tape)
        out_tape = tape

    config = ServerConfig(domain="demo.example", demo=True, group_name=group.name)
    service = AuthService(config, group=group, rng=rng, clock=clock)
    app = create_app(service)

    with tempfile.TemporaryDirectory() as tmp:
        store = SecretStore.create(
            Path(tmp) / "device.zt", PasswordUnlock("scenario-store"), kdf=FAST_KDF
        )
        with TestClient(app) as client:
            transport = CapturingTransport(client)
            authenticator = Authenticator(
                store, transport, group=group, rng=rng, clock=clock
            )
            context = ScenarioContext(
                scenario=scenario,
                service=service,
                transport=transport,
                clock=clock,
                rng=rng,
                group=group,
                store=store,
                authenticator=authenticator,
                confirmer=ScriptedConfirmer(),
            )
            scenario.run(context)

    first_divergence = None
    ok = True
    for position, expected_pair in enumerate(scenario.expected_outcomes):
        actual_pair = (
            context.outcomes[position] if position < len(context.outcomes) else None
        )
        if actual_pair != expected_pair:
            ok = False
            first_divergence = expected_pair[0]
            if check:
                raise ScenarioFailure(
                    scenario.name,
                    expected_pair[0],
                    expected_pair[1],
                    actual_pair[1] if actual_pair else "<missing>",
                )
            break
    if ok and len(context.outcomes) != len(scenario.expected_outcomes):
        ok = False
        first_divergence = context.outcomes[len(scenario.expected_outcomes)][0]
        if check:
            raise ScenarioFailure(scenario.name, first_divergence, "<end>", "extra step")

    return ScenarioResult(
        scenario=scenario.name,
        ok=ok,
        outcomes=context.outcomes,
        expected=scenario.expected_outcomes,
        transcript=transport.transcript,
        tape=out_tape,
        secrets=dict(context.secrets),
        first_divergence=first_divergence,
    )

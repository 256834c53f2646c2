"""Adversarial simulation harness: loopback transport, scenarios, attacks."""

from .attack import FixedBaseComb, dictionary_attack
from .harness import (
    Scenario,
    ScenarioContext,
    ScenarioFailure,
    ScenarioResult,
    collect_login_secrets,
    find_secret_leaks,
    run_scenario,
)
from .scenarios import SCENARIOS, get_scenario, weak_candidate_list
from .transport import CapturingTransport, Interceptor, Transcript, WireMessage

__all__ = [
    "CapturingTransport",
    "FixedBaseComb",
    "Interceptor",
    "SCENARIOS",
    "Scenario",
    "ScenarioContext",
    "ScenarioFailure",
    "ScenarioResult",
    "Transcript",
    "WireMessage",
    "collect_login_secrets",
    "dictionary_attack",
    "find_secret_leaks",
    "get_scenario",
    "run_scenario",
    "weak_candidate_list",
]

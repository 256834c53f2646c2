"""In-process loopback transport with tamper hooks and full capture.

Every request and response that would cross the wire is recorded as
canonical JSON bytes into an append-only transcript; interceptors can
rewrite matching messages before delivery, modeling an active
man-in-the-middle at the protocol layer.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Callable


@dataclass(frozen=True)
class WireMessage:
    seq: int
    direction: str  # "request" | "response"
    method: str
    path: str
    body: bytes
    status: int | None = None

    def to_json(self) -> dict:
        return {
            "seq": self.seq,
            "direction": self.direction,
            "method": self.method,
            "path": self.path,
            "body": self.body.decode("utf-8", errors="replace"),
            "status": self.status,
        }


@dataclass
class Transcript:
    tape_id: str = ""
    messages: list[WireMessage] = field(default_factory=list)

    def record(self, message: WireMessage) -> None:
        self.messages.append(message)

    def to_jsonl(self) -> str:
        return "\n".join(json.dumps(m.to_json(), sort_keys=True) for m in self.messages)

    def wire_bytes(self) -> list[bytes]:
        return [m.body for m in self.messages]

    def find_requests(self, path: str) -> list[WireMessage]:
        return [
            m for m in self.messages if m.direction == "request" and m.path == path
        ]


@dataclass
class Interceptor:
    """Rewrites matching message bodies before delivery; composable."""

    name: str
    direction: str  # "request" | "response"
    matches: Callable[[str, str], bool]  # (method, path) -> bool
    mutate: Callable[[Any], Any]  # decoded JSON body -> decoded JSON body
    hits: int = 0


def canonical_body(decoded: Any) -> bytes:
    if decoded is None:
        return b""
    return json.dumps(decoded, sort_keys=True, separators=(",", ":")).encode()


@dataclass
class InterceptedResponse:
    status_code: int
    _decoded: Any

    def json(self) -> Any:
        return self._decoded

    @property
    def text(self) -> str:
        return canonical_body(self._decoded).decode()


class CapturingTransport:
    """Wraps an httpx-style client (the in-process test client), applying
    interceptors and recording the transcript."""

    def __init__(self, client, transcript: Transcript | None = None) -> None:
        self._client = client
        self.transcript = transcript or Transcript()
        self.interceptors: list[Interceptor] = []
        self._seq = 0

    def add_interceptor(self, interceptor: Interceptor) -> Interceptor:
        self.interceptors.append(interceptor)
        return interceptor

    def remove_interceptor(self, interceptor: Interceptor) -> None:
        self.interceptors.remove(interceptor)

    def post(self, path: str, json: Any = None) -> InterceptedResponse:
        return self._send("POST", path, json)

    def get(self, path: str) -> InterceptedResponse:
        return self._send("GET", path, None)

    def _send(self, method: str, path: str, body: Any) -> InterceptedResponse:
        body = self._apply(method, path, body, "request")
        self._record(method, path, "request", body, None)
        if method == "POST":
            raw = self._client.post(path, json=body)
        else:
            raw = self._client.get(path)
        try:
            decoded = raw.json() if raw.content else None
        except ValueError:
            decoded = None
        decoded = self._apply(method, path, decoded, "response")
        self._record(method, path, "response", decoded, raw.status_code)
        return InterceptedResponse(status_code=raw.status_code, _decoded=decoded)

    def _apply(self, method: str, path: str, body: Any, direction: str) -> Any:
        for interceptor in self.interceptors:
            if interceptor.direction == direction and interceptor.matches(method, path):
                body = interceptor.mutate(body)
                interceptor.hits += 1
        return body

    def _record(
        self, method: str, path: str, direction: str, body: Any, status: int | None
    ) -> None:
        self.transcript.record(
            WireMessage(
                seq=self._seq,
                direction=direction,
                method=method,
                path=path,
                body=canonical_body(body),
                status=status,
            )
        )
        self._seq += 1

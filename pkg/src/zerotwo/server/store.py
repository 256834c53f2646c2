"""Durable state: one JSON document, written atomically.

Only user records and session records persist; pending logins and
authorization prompts live for two minutes and die with the process.
"""

from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path


def load_document(path: str | os.PathLike) -> dict:
    p = Path(path)
    if not p.exists():
        return {"users": {}, "sessions": {}}
    raw = json.loads(p.read_text())
    raw.setdefault("users", {})
    raw.setdefault("sessions", {})
    return raw


def save_document(path: str | os.PathLike, document: dict) -> None:
    """Write-to-temp then atomic rename, so readers never see a torn file."""
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(dir=p.parent, prefix=p.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as handle:
            json.dump(document, handle, separators=(",", ":"))
            handle.flush()
            os.fsync(handle.fileno())
        os.replace(tmp_name, p)
    except BaseException:
        try:
            os.unlink(tmp_name)
        except FileNotFoundError:
            pass
        raise

"""Line-delimited JSON trace format.

Line 1 is a header object naming the format, its version, the random
stream algorithm, the seed, and the full script text (plus its sha256),
which makes every trace self-contained and replayable. Every following
line is one record with a fixed key order; reals serialize with Python
repr semantics (shortest round-tripping form), so identical runs produce
byte-identical traces.
"""

from __future__ import annotations

import hashlib
import json

from .rng import ALGORITHM

TRACE_FORMAT = "emsim-trace"
TRACE_VERSION = 1


class ReplayError(Exception):
    """The trace cannot be replayed (bad header, wrong version)."""


def make_header(seed: int, script_text: str) -> dict:
    return {
        "format": TRACE_FORMAT,
        "version": TRACE_VERSION,
        "rng": ALGORITHM,
        "seed": seed,
        "script_sha256": hashlib.sha256(script_text.encode()).hexdigest(),
        "script": script_text,
    }


def dumps_line(obj: dict) -> str:
    return json.dumps(obj, separators=(",", ":"), ensure_ascii=True)


def render_trace(header: dict, records: list[dict]) -> str:
    lines = [dumps_line(header)]
    lines.extend(dumps_line(r) for r in records)
    return "\n".join(lines) + "\n"


def parse_header(trace_text: str) -> tuple[dict, list[str]]:
    """Returns (header, record lines). Raises ReplayError on a foreign or
    future trace."""
    lines = trace_text.splitlines()
    if not lines:
        raise ReplayError("empty trace")
    try:
        header = json.loads(lines[0])
    except json.JSONDecodeError as exc:
        raise ReplayError(f"unreadable trace header: {exc}") from exc
    if not isinstance(header, dict) or header.get("format") != TRACE_FORMAT:
        raise ReplayError("not an emsim trace")
    if header.get("version") != TRACE_VERSION:
        raise ReplayError(
            f"trace version {header.get('version')!r} does not match "
            f"this build ({TRACE_VERSION})"
        )
    if "script" not in header or "seed" not in header:
        raise ReplayError("trace header lacks script or seed")
    return header, lines[1:]

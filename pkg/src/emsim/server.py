"""TCP session server speaking newline-delimited JSON.

Each connection owns one session. The client sends one JSON object per
line and gets one JSON object per line back; replies echo an ``id``
field when the request carried one.

Requests::

    {"cmd": "load_script", "text": "...", "seed": 7}   # seed optional
    {"cmd": "cycle", "fields": {"addr": "1", "din": "a"}}
    {"cmd": "set", "name": "wen_am", "value": "1"}
    {"cmd": "step", "line": "PHASE exam"}               # any one script command
    {"cmd": "reset"}
    {"cmd": "snapshot"}

Replies are ``{"event": "snapshot", ...}`` after load_script / set /
reset / snapshot, ``{"event": "delta", "records": [...]}`` after a
cycle (carrying exactly the trace records that cycle appended), and
``{"event": "error", "message": "..."}`` when a request fails; errors
leave the session as it was.

load_script runs the whole script (its batch phase), then leaves the
session open for interactive driving. If the server was started with a
trace directory, each connection's full record log is written there
when the connection closes. Interactive cycles are part of that log
but not of the embedded script, so such logs are transcripts rather
than replayable traces.
"""

from __future__ import annotations

import asyncio
import json
from pathlib import Path

from .script import ScriptError, Session, parse_script
from .trace import make_header, render_trace


def snapshot_of(session: Session | None) -> dict:
    if session is None:
        return {"event": "snapshot", "loaded": False}
    units = {}
    for name, unit in session.units.items():
        p = unit.params
        rows = [
            {"gx": [s.token for s in gx], "gy": [s.token for s in gy]}
            for gx, gy in unit.ltm_rows()
        ]
        units[name] = {
            "m": p.m,
            "p": p.p,
            "wx": list(p.wx),
            "a": p.a,
            "tau": p.tau,
            "c": p.c,
            "capacity": p.capacity,
            "wptr": unit.wptr,
            "e": [float(v) for v in unit.e],
            "rows": rows,
        }
    world = None
    if session.world is not None:
        world = {
            "screen": session.screen,
            "addr": list(session.world_addr.tokens),
            "mem": [s.token for s in session.world.cells],
        }
    asm = session.assembly
    toggles = {
        "ns_sel": asm.ns_sel if asm is not None else session.ns_sel,
        "nm_sel": asm.nm_sel if asm is not None else None,
        "feedback": (int(asm.feedback_on) if asm is not None else None),
        "refresh": (int(asm.proprio_refresh) if asm is not None else None),
        "wen_as": session.wen_as,
        "wen_am": session.wen_am,
    }
    # the excitation floor worth drawing: a screen assembly holds its
    # input pattern at one unit per visual cell, a classic session at one
    if session.kind == "assembly":
        eloss = float(len(session.world_addr)) if session.screen else 1.0
    elif session.kind == "sensory":
        eloss = 1.0
    else:
        eloss = None
    return {
        "event": "snapshot",
        "loaded": True,
        "kind": session.kind,
        "seed": session.seed,
        "nu": session.nu,
        "phase": session.phase,
        "aud": session.aud_default.token if session.aud_default is not None else None,
        "toggles": toggles,
        "alphabets": {name: list(a.tokens) for name, a in session.alphabets.items()},
        "world": world,
        "units": units,
        "eloss": eloss,
        "asserts": list(session.asserts),
    }


def _handle_request(session: Session | None, req: dict) -> tuple[Session | None, dict]:
    cmd = req.get("cmd")
    if cmd == "load_script":
        if not isinstance(req.get("text"), str):
            raise ScriptError("load_script needs a text field")
        seed = req.get("seed")
        if seed is not None and not isinstance(seed, int):
            raise ScriptError("seed must be an integer")
        fresh = Session(parse_script(req["text"]), seed=seed)
        fresh.run_program()
        return fresh, snapshot_of(fresh)
    if cmd == "snapshot":
        return session, snapshot_of(session)
    if session is None:
        raise ScriptError("no script loaded")
    if cmd == "cycle":
        fields = req.get("fields", {})
        if not isinstance(fields, dict) or not all(
            isinstance(k, str) and isinstance(v, str) for k, v in fields.items()
        ):
            raise ScriptError("cycle fields must map strings to strings")
        records = session.cycle(fields)
        return session, {"event": "delta", "nu": session.nu - 1, "records": records}
    if cmd == "set":
        session.set_signal(str(req.get("name")), str(req.get("value")))
        return session, snapshot_of(session)
    if cmd == "step":
        line = req.get("line")
        if not isinstance(line, str):
            raise ScriptError("step needs a line field")
        program = parse_script(line)
        if program.alphabets or program.units or program.world is not None:
            raise ScriptError("step takes a command, not a header statement")
        before = len(session.records)
        for command in program.commands:
            session.execute(command)
        return session, {
            "event": "delta",
            "nu": session.nu - 1,
            "records": session.records[before:],
        }
    if cmd == "reset":
        session.reset()
        return session, snapshot_of(session)
    raise ScriptError(f"unknown command {cmd!r}")


async def _serve_connection(
    reader: asyncio.StreamReader,
    writer: asyncio.StreamWriter,
    trace_dir: Path | None,
    conn_id: int,
) -> None:
    session: Session | None = None

    def send(obj: dict) -> None:
        writer.write(json.dumps(obj, separators=(",", ":")).encode() + b"\n")

    try:
        while True:
            line = await reader.readline()
            if not line:
                break
            req_id = None
            try:
                req = json.loads(line)
                if not isinstance(req, dict):
                    raise ScriptError("each request must be a JSON object")
                req_id = req.get("id")
                session, reply = _handle_request(session, req)
            except (ScriptError, ValueError, KeyError, TypeError) as exc:
                reply = {"event": "error", "message": str(exc)}
            if req_id is not None:
                reply["id"] = req_id
            send(reply)
            await writer.drain()
    except (ConnectionResetError, asyncio.IncompleteReadError):
        pass
    finally:
        if trace_dir is not None and session is not None:
            header = make_header(session.seed, session.program.text)
            path = Path(trace_dir) / f"session-{conn_id}.trace"
            path.write_text(render_trace(header, session.records))
        writer.close()
        try:
            await writer.wait_closed()
        except (ConnectionResetError, BrokenPipeError):
            pass


async def serve(
    host: str = "127.0.0.1",
    port: int = 0,
    trace_dir: str | Path | None = None,
    ready: "asyncio.Future[int] | None" = None,
) -> None:
    """Run until cancelled. Prints the bound address; with port 0 the OS
    picks a free one, so clients should parse that line."""
    if trace_dir is not None:
        trace_dir = Path(trace_dir)
        trace_dir.mkdir(parents=True, exist_ok=True)
    counter = 0

    async def handler(reader: asyncio.StreamReader, writer: asyncio.StreamWriter) -> None:
        nonlocal counter
        counter += 1
        await _serve_connection(reader, writer, trace_dir, counter)

    server = await asyncio.start_server(handler, host, port, limit=1 << 22)
    bound = server.sockets[0].getsockname()[1]
    if ready is not None:
        ready.set_result(bound)
    print(f"listening on {host}:{bound}", flush=True)
    async with server:
        await server.serve_forever()


def run_server(host: str = "127.0.0.1", port: int = 0, trace_dir: str | Path | None = None) -> int:
    try:
        asyncio.run(serve(host, port, trace_dir))
    except KeyboardInterrupt:
        pass
    return 0

import json
import socket
import subprocess
import sys
import time

import pytest

SENSORY = """\
ALPHABET loc 1 2
ALPHABET val a b
GRAM addr=loc data=val
UNIT AS in=loc,val out=val wx=1,1 a=0.4 tau=100 cap=16
SEED 9
PHASE train
CYCLE addr=1 din=a
CYCLE addr=2 din=b
"""


def start_server(*extra):
    proc = subprocess.Popen(
        [sys.executable, "-m", "emsim.cli", "serve", "--port", "0", *extra],
        stdout=subprocess.PIPE,
        stderr=subprocess.PIPE,
        text=True,
    )
    line = proc.stdout.readline().strip()
    assert line.startswith("listening on "), line
    port = int(line.rsplit(":", 1)[1])
    return proc, port


class Client:
    def __init__(self, port):
        self.sock = socket.create_connection(("127.0.0.1", port), timeout=10)
        self.sock.settimeout(10)
        self.file = self.sock.makefile("rw")

    def rpc(self, obj):
        self.file.write(json.dumps(obj) + "\n")
        self.file.flush()
        return json.loads(self.file.readline())

    def raw(self, text):
        self.file.write(text)
        self.file.flush()
        return json.loads(self.file.readline())

    def close(self):
        self.file.close()
        self.sock.close()


@pytest.fixture(scope="module")
def server():
    proc, port = start_server()
    yield port
    proc.terminate()
    proc.wait(timeout=10)


def test_session_flow(server):
    c = Client(server)
    snap = c.rpc({"cmd": "load_script", "text": SENSORY, "id": 7})
    assert snap["event"] == "snapshot"
    assert snap["id"] == 7
    assert snap["kind"] == "sensory"
    assert snap["nu"] == 2
    assert snap["world"]["mem"] == ["a", "b"]
    assert snap["units"]["AS"]["wptr"] == 3
    assert len(snap["units"]["AS"]["rows"]) == 2
    assert snap["eloss"] == 1.0
    assert snap["toggles"]["wen_as"] == 1

    step = c.rpc({"cmd": "step", "line": "PHASE exam"})
    assert step["event"] == "delta"
    delta = c.rpc({"cmd": "cycle", "fields": {"addr": "1"}})
    units = [r["unit"] for r in delta["records"]]
    assert units == ["world", "AS"]
    as_rec = delta["records"][1]
    assert as_rec["y"] == ["a"]
    assert as_rec["wen"] == 0

    snap = c.rpc({"cmd": "set", "name": "wen_as", "value": "1"})
    assert snap["toggles"]["wen_as"] == 1
    snap = c.rpc({"cmd": "reset"})
    assert all(v == 0.0 for v in snap["units"]["AS"]["e"])
    assert len(snap["units"]["AS"]["rows"]) == 2  # memory survives reset
    c.close()


def test_sessions_are_isolated(server):
    a, b = Client(server), Client(server)
    a.rpc({"cmd": "load_script", "text": SENSORY})
    snap = b.rpc({"cmd": "snapshot"})
    assert snap == {"event": "snapshot", "loaded": False}
    a.close()
    b.close()


def test_error_events_keep_session(server):
    c = Client(server)
    err = c.rpc({"cmd": "cycle", "fields": {"addr": "1"}})
    assert err["event"] == "error"
    assert "no script loaded" in err["message"]
    c.rpc({"cmd": "load_script", "text": SENSORY})
    err = c.rpc({"cmd": "cycle", "fields": {"addr": "zz"}})
    assert err["event"] == "error"
    snap = c.rpc({"cmd": "snapshot"})
    assert snap["nu"] == 2  # failed cycle did not advance anything
    err = c.raw("this is not json\n")
    assert err["event"] == "error"
    err = c.rpc({"cmd": "dance"})
    assert err["event"] == "error"
    err = c.rpc({"cmd": "load_script", "text": "BROKEN\n"})
    assert err["event"] == "error"
    snap = c.rpc({"cmd": "snapshot"})
    assert snap["nu"] == 2  # the old session survived the bad load
    c.close()


def test_step_rejects_header_statements(server):
    c = Client(server)
    c.rpc({"cmd": "load_script", "text": SENSORY})
    err = c.rpc({"cmd": "step", "line": "ALPHABET q x"})
    assert err["event"] == "error"
    c.close()


def test_trace_dir_written_on_close(tmp_path):
    proc, port = start_server("--trace-dir", str(tmp_path))
    c = Client(port)
    c.rpc({"cmd": "load_script", "text": SENSORY})
    c.rpc({"cmd": "cycle", "fields": {"addr": "1"}})
    c.close()
    deadline = time.monotonic() + 10
    while not list(tmp_path.glob("session-*.trace")) and time.monotonic() < deadline:
        time.sleep(0.02)
    proc.terminate()
    proc.wait(timeout=10)
    traces = list(tmp_path.glob("session-*.trace"))
    assert len(traces) == 1
    lines = traces[0].read_text().splitlines()
    header = json.loads(lines[0])
    assert header["format"] == "emsim-trace"
    assert header["script"] == SENSORY
    # two scripted cycles plus one interactive, two records each
    assert len(lines) == 1 + 6

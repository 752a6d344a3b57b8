"""Text scripts that declare a machine and drive it cycle by cycle.

A script is a sequence of line statements. Header statements build the
machine and must come first; command statements then run it. Blank
lines are skipped and everything after a ``#`` is a comment.

Header statements::

    ALPHABET <name> <token> <token> ...   # the empty symbol _ is implicit
    GRAM addr=<alphabet> data=<alphabet>  # classic world: one addressed cell bank
    SCREEN cells=<k> data=<alphabet>      # world whose whole row is visible
    UNIT <AS|AM> in=<a,b,..> out=<c,..> wx=<w,..> a=<f> tau=<f> cap=<n>
    ASSEMBLY [aud=<alphabet>] [refresh=on|off]
    SEED <int>

Command statements::

    PHASE train|exam        # preset toggles; first exam marks the probe boundary
    SET <signal> <value>    # ns_sel/nm_sel/wen_as/wen_am 0|1, feedback on|off, aud <tok>
    CYCLE [addr=t] [din=t] [aud=t] [y1=t y2=t ...]
    RESET                   # clear excitations and registers; memories survive
    ASSERT dout=<tok>       # check the last cycle's world response
    ASSERT y=<tok,tok,...>  # check the last cycle's motor output

Session kinds are inferred from the declarations: a world alone, a
world plus a sensory unit (AS), or a full assembly around a motor unit
(AM). With a classic GRAM world and an assembly, addr=/din= alias
y1=/y2= because the world is driven through the first two motor slots;
with a SCREEN world they edit the screen directly and the whole row is
what the motor unit sees.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .brain import BrainAssembly, brain_cycle
from .brain import reset as brain_reset
from .experiments import ExperimentReport
from .gram import gram_new, gram_step
from .pem import CycleIO, Pem, PemParams
from .rng import SplitMix64
from .symbols import Alphabet, Symbol, make_alphabet
from .trace import ReplayError, make_header, parse_header, render_trace


class ScriptError(Exception):
    """A script could not be parsed or executed."""

    def __init__(self, message: str, lineno: int | None = None):
        self.lineno = lineno
        super().__init__(f"line {lineno}: {message}" if lineno else message)


_HEADER_OPS = {"ALPHABET", "GRAM", "SCREEN", "UNIT", "ASSEMBLY", "SEED"}
_COMMAND_OPS = {"PHASE", "SET", "CYCLE", "RESET", "ASSERT"}


@dataclass(frozen=True)
class UnitDecl:
    lineno: int
    name: str
    inputs: tuple[str, ...]
    outputs: tuple[str, ...]
    wx: tuple[float, ...]
    a: float
    tau: float
    cap: int


@dataclass(frozen=True)
class Command:
    lineno: int
    op: str
    args: dict


@dataclass(frozen=True)
class Program:
    text: str
    seed: int
    alphabets: dict  # name -> (lineno, member tokens)
    world: tuple | None  # ("gram", addr, data, lineno) | ("screen", k, data, lineno)
    units: dict  # name -> UnitDecl
    aud: str | None
    refresh: bool
    commands: tuple[Command, ...] = field(default_factory=tuple)


def _strip(raw: str) -> list[str]:
    return raw.split("#", 1)[0].split()


def _kv(parts: list[str], lineno: int, allowed: set[str] | None = None) -> dict[str, str]:
    out: dict[str, str] = {}
    for part in parts:
        if "=" not in part:
            raise ScriptError(f"expected key=value, got {part!r}", lineno)
        key, value = part.split("=", 1)
        if not key or not value:
            raise ScriptError(f"malformed key=value pair {part!r}", lineno)
        if allowed is not None and key not in allowed:
            raise ScriptError(f"unknown field {key!r}", lineno)
        if key in out:
            raise ScriptError(f"duplicate field {key!r}", lineno)
        out[key] = value
    return out


def _need(fields: dict[str, str], keys: tuple[str, ...], what: str, lineno: int) -> None:
    for key in keys:
        if key not in fields:
            raise ScriptError(f"{what} needs {key}=", lineno)


def _int(value: str, what: str, lineno: int) -> int:
    try:
        return int(value)
    except ValueError:
        raise ScriptError(f"{what} must be an integer, got {value!r}", lineno) from None


def _float(value: str, what: str, lineno: int) -> float:
    try:
        return float(value)
    except ValueError:
        raise ScriptError(f"{what} must be a number, got {value!r}", lineno) from None


def parse_script(text: str) -> Program:
    alphabets: dict[str, tuple[int, tuple[str, ...]]] = {}
    units: dict[str, UnitDecl] = {}
    world: tuple | None = None
    aud: str | None = None
    refresh = False
    seed = 0
    commands: list[Command] = []
    in_commands = False

    for lineno, raw in enumerate(text.splitlines(), start=1):
        parts = _strip(raw)
        if not parts:
            continue
        op = parts[0]
        if op in _HEADER_OPS:
            if in_commands:
                raise ScriptError("header statements must precede commands", lineno)
            if op == "ALPHABET":
                if len(parts) < 3:
                    raise ScriptError("ALPHABET needs a name and at least one member", lineno)
                name = parts[1]
                if name in alphabets:
                    raise ScriptError(f"alphabet {name!r} declared twice", lineno)
                members = tuple(parts[2:])
                if "_" in members:
                    raise ScriptError("the empty symbol _ is implicit in every alphabet", lineno)
                alphabets[name] = (lineno, members)
            elif op == "GRAM":
                if world is not None:
                    raise ScriptError("only one world may be declared", lineno)
                fields = _kv(parts[1:], lineno, {"addr", "data"})
                _need(fields, ("addr", "data"), "GRAM", lineno)
                world = ("gram", fields["addr"], fields["data"], lineno)
            elif op == "SCREEN":
                if world is not None:
                    raise ScriptError("only one world may be declared", lineno)
                fields = _kv(parts[1:], lineno, {"cells", "data"})
                _need(fields, ("cells", "data"), "SCREEN", lineno)
                k = _int(fields["cells"], "cells", lineno)
                if k < 1:
                    raise ScriptError("cells must be >= 1", lineno)
                world = ("screen", k, fields["data"], lineno)
            elif op == "UNIT":
                if len(parts) < 2 or parts[1] not in ("AS", "AM"):
                    raise ScriptError("UNIT must be named AS or AM", lineno)
                name = parts[1]
                if name in units:
                    raise ScriptError(f"unit {name} declared twice", lineno)
                fields = _kv(parts[2:], lineno, {"in", "out", "wx", "a", "tau", "cap"})
                _need(fields, ("in", "out", "wx", "a", "tau", "cap"), "UNIT", lineno)
                units[name] = UnitDecl(
                    lineno=lineno,
                    name=name,
                    inputs=tuple(fields["in"].split(",")),
                    outputs=tuple(fields["out"].split(",")),
                    wx=tuple(_float(w, "wx", lineno) for w in fields["wx"].split(",")),
                    a=_float(fields["a"], "a", lineno),
                    tau=_float(fields["tau"], "tau", lineno),
                    cap=_int(fields["cap"], "cap", lineno),
                )
            elif op == "ASSEMBLY":
                fields = _kv(parts[1:], lineno, {"aud", "refresh"})
                aud = fields.get("aud", aud)
                if "refresh" in fields:
                    if fields["refresh"] not in ("on", "off"):
                        raise ScriptError("refresh must be on or off", lineno)
                    refresh = fields["refresh"] == "on"
            elif op == "SEED":
                if len(parts) != 2:
                    raise ScriptError("SEED takes one integer", lineno)
                seed = _int(parts[1], "SEED", lineno)
        elif op in _COMMAND_OPS:
            in_commands = True
            if op == "PHASE":
                if len(parts) != 2 or parts[1] not in ("train", "exam"):
                    raise ScriptError("PHASE must be train or exam", lineno)
                commands.append(Command(lineno, "PHASE", {"which": parts[1]}))
            elif op == "SET":
                if len(parts) != 3:
                    raise ScriptError("SET takes a signal name and a value", lineno)
                commands.append(Command(lineno, "SET", {"name": parts[1], "value": parts[2]}))
            elif op == "CYCLE":
                fields = _kv(parts[1:], lineno)
                commands.append(Command(lineno, "CYCLE", fields))
            elif op == "RESET":
                if len(parts) != 1:
                    raise ScriptError("RESET takes no arguments", lineno)
                commands.append(Command(lineno, "RESET", {}))
            elif op == "ASSERT":
                fields = _kv(parts[1:], lineno, {"dout", "y"})
                if len(fields) != 1:
                    raise ScriptError("ASSERT takes exactly one of dout= or y=", lineno)
                commands.append(Command(lineno, "ASSERT", fields))
        else:
            raise ScriptError(f"unknown statement {op!r}", lineno)

    return Program(
        text=text,
        seed=seed,
        alphabets=alphabets,
        world=world,
        units=units,
        aud=aud,
        refresh=refresh,
        commands=tuple(commands),
    )


class Session:
    """A built machine plus its run state; executes commands one at a time.

    The same object backs both the batch runner and the interactive
    server, so every mutation goes through execute()/cycle()/set_signal().
    """

    def __init__(self, program: Program, seed: int | None = None, protocol: str = "script"):
        self.program = program
        self.protocol = protocol
        self.seed = program.seed if seed is None else seed
        self.rng = SplitMix64(self.seed)

        self.alphabets: dict[str, Alphabet] = {}
        for name, (lineno, members) in program.alphabets.items():
            try:
                self.alphabets[name] = make_alphabet(name, list(members))
            except ValueError as exc:
                raise ScriptError(str(exc), lineno) from None

        self.world = None
        self.screen = False
        self.world_addr: Alphabet | None = None
        self.world_data: Alphabet | None = None
        if program.world is not None:
            kind = program.world[0]
            lineno = program.world[3]
            if kind == "gram":
                self.world_addr = self._alphabet(program.world[1], lineno)
                self.world_data = self._alphabet(program.world[2], lineno)
            else:
                k = program.world[1]
                self.world_addr = make_alphabet("cell", [str(i + 1) for i in range(k)])
                self.world_data = self._alphabet(program.world[2], lineno)
                self.screen = True
            self.world = gram_new(self.world_addr, self.world_data)

        self.units: dict[str, Pem] = {}
        for name, decl in program.units.items():
            ins = tuple(self._alphabet(n, decl.lineno) for n in decl.inputs)
            outs = tuple(self._alphabet(n, decl.lineno) for n in decl.outputs)
            try:
                params = PemParams(ins, outs, decl.cap, decl.wx, decl.a, decl.tau)
            except ValueError as exc:
                raise ScriptError(str(exc), decl.lineno) from None
            self.units[name] = Pem(params)

        self.assembly: BrainAssembly | None = None
        if "AM" in self.units:
            if self.world is None:
                raise ScriptError("a motor unit needs a GRAM or SCREEN world to act on")
            aud_alpha = self._alphabet(program.aud, None) if program.aud else None
            width = len(self.world_addr) if self.screen else 1
            am = self.units["AM"]
            if not self.screen:
                if am.params.p < 2:
                    raise ScriptError("driving a GRAM world takes two motor slots (addr, din)")
                if (am.params.output_alphabets[0] is not self.world_addr
                        or am.params.output_alphabets[1] is not self.world_data):
                    raise ScriptError("motor slots 1 and 2 must speak the world's "
                                      "addr and data alphabets")
            try:
                self.assembly = BrainAssembly(
                    am,
                    as_unit=self.units.get("AS"),
                    aud_alphabet=aud_alpha,
                    visual_width=width,
                    proprio_refresh=program.refresh,
                )
            except ValueError as exc:
                raise ScriptError(str(exc)) from None
            if self.screen:
                for j in range(width):
                    if am.params.input_alphabets[j + (1 if aud_alpha else 0)] is not self.world_data:
                        raise ScriptError("every visual slot must read the screen's data alphabet")
            self.kind = "assembly"
        elif "AS" in self.units:
            if self.world is None or self.screen:
                raise ScriptError("a sensory unit on its own needs a classic GRAM world")
            asu = self.units["AS"]
            if asu.params.m != 2 or asu.params.p != 1:
                raise ScriptError("a sensory session needs UNIT AS with two inputs and one output")
            if (asu.params.input_alphabets[0] is not self.world_addr
                    or asu.params.input_alphabets[1] is not self.world_data
                    or asu.params.output_alphabets[0] is not self.world_data):
                raise ScriptError("the sensory unit must read (addr, data) and emit data")
            self.kind = "sensory"
        elif self.world is not None:
            self.kind = "world"
        else:
            raise ScriptError("script declares no machine (GRAM, SCREEN, or UNIT)")

        # run state
        self.ns_sel = 1  # sensory sessions only; assemblies carry their own
        self.wen_as = 0
        self.wen_am = 0
        self.aud_default: Symbol | None = None
        if self.assembly is not None and self.assembly.aud_alphabet is not None:
            self.aud_default = self.assembly.aud_alphabet.epsilon
        self.phase: str | None = None
        self.nu = 0
        self.nu1: int | None = None
        self.records: list[dict] = []
        self.asserts: list[dict] = []
        self.last_dout: Symbol | None = None
        self.last_y: tuple[Symbol, ...] | None = None

    # -------------------------------------------------------- helpers --

    def _alphabet(self, name: str, lineno: int | None) -> Alphabet:
        try:
            return self.alphabets[name]
        except KeyError:
            raise ScriptError(f"unknown alphabet {name!r}", lineno) from None

    def _symbol(self, alpha: Alphabet, token: str, lineno: int | None) -> Symbol:
        try:
            return alpha.symbol(token)
        except KeyError:
            raise ScriptError(f"{token!r} is not in alphabet {alpha.name}", lineno) from None

    # ------------------------------------------------------- commands --

    def run_program(self) -> None:
        for cmd in self.program.commands:
            self.execute(cmd)

    def execute(self, cmd: Command) -> None:
        if cmd.op == "PHASE":
            self.set_phase(cmd.args["which"])
        elif cmd.op == "SET":
            self.set_signal(cmd.args["name"], cmd.args["value"], cmd.lineno)
        elif cmd.op == "CYCLE":
            self.cycle(cmd.args, cmd.lineno)
        elif cmd.op == "RESET":
            self.reset()
        elif cmd.op == "ASSERT":
            self.check(cmd.args, cmd.lineno)
        else:
            raise ScriptError(f"unknown command {cmd.op!r}", cmd.lineno)

    def set_phase(self, which: str) -> None:
        train = which == "train"
        self.phase = which
        self.wen_as = self.wen_am = 1 if train else 0
        sel = 1 if train else 0
        if self.assembly is not None:
            self.assembly.ns_sel = sel
            self.assembly.nm_sel = sel
        else:
            self.ns_sel = sel
        if not train and self.nu1 is None:
            self.nu1 = self.nu

    def set_signal(self, name: str, value: str, lineno: int | None = None) -> None:
        if name in ("ns_sel", "nm_sel", "wen_as", "wen_am"):
            if value not in ("0", "1"):
                raise ScriptError(f"SET {name} takes 0 or 1", lineno)
            bit = int(value)
            if name == "ns_sel":
                if self.assembly is not None:
                    self.assembly.ns_sel = bit
                elif self.kind == "sensory":
                    self.ns_sel = bit
                else:
                    raise ScriptError("no sensory mux in this session", lineno)
            elif name == "nm_sel":
                if self.assembly is None:
                    raise ScriptError("no motor mux in this session", lineno)
                self.assembly.nm_sel = bit
            elif name == "wen_as":
                if "AS" not in self.units:
                    raise ScriptError("no AS unit in this session", lineno)
                self.wen_as = bit
            else:
                if "AM" not in self.units:
                    raise ScriptError("no AM unit in this session", lineno)
                self.wen_am = bit
        elif name == "feedback":
            if self.assembly is None:
                raise ScriptError("no feedback wire in this session", lineno)
            if value not in ("on", "off"):
                raise ScriptError("SET feedback takes on or off", lineno)
            self.assembly.feedback_on = value == "on"
        elif name == "aud":
            if self.aud_default is None:
                raise ScriptError("no auditory input in this session", lineno)
            self.aud_default = self._symbol(self.assembly.aud_alphabet, value, lineno)
        else:
            raise ScriptError(f"unknown signal {name!r}", lineno)

    def reset(self) -> None:
        """Clear volatile state: excitations and registers. Long-term
        memories and the world keep their contents."""
        if self.assembly is not None:
            brain_reset(self.assembly)
        elif self.kind == "sensory":
            self.units["AS"].reset_e()

    def check(self, args: dict, lineno: int | None) -> None:
        if self.nu == 0:
            raise ScriptError("ASSERT before any CYCLE", lineno)
        if "dout" in args:
            kind, expected = "dout", args["dout"]
            actual = self.last_dout.token if self.last_dout is not None else "_"
        else:
            if self.last_y is None:
                raise ScriptError("ASSERT y= in a session with no unit output", lineno)
            kind, expected = "y", args["y"]
            actual = ",".join(s.token for s in self.last_y)
        ok = expected == actual
        self.asserts.append({
            "nu": self.nu - 1,
            "kind": kind,
            "expected": expected,
            "actual": actual,
            "pass": ok,
        })

    # --------------------------------------------------------- cycles --

    def cycle(self, fields: dict[str, str], lineno: int | None = None) -> list[dict]:
        """Run one cycle from token-valued fields; returns the records it
        appended to the trace."""
        start = len(self.records)
        if self.kind == "world":
            self._cycle_world(fields, lineno)
        elif self.kind == "sensory":
            self._cycle_sensory(fields, lineno)
        else:
            self._cycle_assembly(fields, lineno)
        self.nu += 1
        return self.records[start:]

    def _reject_unknown(self, fields: dict[str, str], allowed: set[str], lineno: int | None) -> None:
        for key in fields:
            if key not in allowed:
                raise ScriptError(f"CYCLE field {key!r} not valid in a {self.kind} session", lineno)

    def _step_world(self, addr: Symbol, din: Symbol) -> Symbol:
        # an empty address leaves the world idle
        if addr.is_empty:
            return self.world_data.epsilon
        self.world, dout = gram_step(self.world, addr, din)
        return dout

    def _cycle_world(self, fields: dict[str, str], lineno: int | None) -> None:
        self._reject_unknown(fields, {"addr", "din"}, lineno)
        addr = self._symbol(self.world_addr, fields.get("addr", "_"), lineno)
        din = self._symbol(self.world_data, fields.get("din", "_"), lineno)
        dout = self._step_world(addr, din)
        self.records.append(self._world_record(addr, din, dout))
        self.last_dout = dout

    def _cycle_sensory(self, fields: dict[str, str], lineno: int | None) -> None:
        self._reject_unknown(fields, {"addr", "din"}, lineno)
        addr = self._symbol(self.world_addr, fields.get("addr", "_"), lineno)
        din = self._symbol(self.world_data, fields.get("din", "_"), lineno)
        dout = self._step_world(addr, din)
        unit = self.units["AS"]
        pending = unit.cycle_start((addr, din), self.rng)
        ns_y = dout if self.ns_sel else pending.y[0]
        io = unit.cycle_finish(pending, (ns_y,), self.wen_as)
        self.records.append(self._world_record(addr, din, dout))
        self.records.append(self._unit_record("AS", io, oracle=dout.token))
        self.last_dout = dout
        self.last_y = io.y

    def _cycle_assembly(self, fields: dict[str, str], lineno: int | None) -> None:
        asm = self.assembly
        am = asm.am_unit
        allowed = {"aud", "addr", "din"} | {f"y{j + 1}" for j in range(am.params.p)}
        self._reject_unknown(fields, allowed, lineno)

        teacher = list(asm.empty_motor)
        for j in range(am.params.p):
            key = f"y{j + 1}"
            if key in fields:
                teacher[j] = self._symbol(am.params.output_alphabets[j], fields[key], lineno)

        if self.screen:
            # experimenter's hand edits the screen before the machine looks
            addr = self._symbol(self.world_addr, fields.get("addr", "_"), lineno)
            din = self._symbol(self.world_data, fields.get("din", "_"), lineno)
            dout = self._step_world(addr, din)
            sensory = self.world.cells
            world_rec = self._world_record(addr, din, dout)
        else:
            # addr/din are aliases for the first two teacher slots
            for key, j in (("addr", 0), ("din", 1)):
                if key in fields:
                    if not teacher[j].is_empty:
                        raise ScriptError(f"{key}= conflicts with y{j + 1}=", lineno)
                    teacher[j] = self._symbol(am.params.output_alphabets[j], fields[key], lineno)
            drive = tuple(teacher[:2]) if asm.nm_sel else asm.motor_reg[:2]
            dout = self._step_world(drive[0], drive[1])
            sensory = (dout,)
            world_rec = self._world_record(drive[0], drive[1], dout)

        if "aud" in fields:
            if self.aud_default is None:
                raise ScriptError("no auditory input in this session", lineno)
            aud = self._symbol(asm.aud_alphabet, fields["aud"], lineno)
        else:
            aud = self.aud_default

        motor, snaps = brain_cycle(
            asm, sensory, tuple(teacher), aud, self.wen_as, self.wen_am, self.rng
        )

        self.records.append(world_rec)
        if "AS" in snaps:
            self.records.append(self._unit_record("AS", snaps["AS"], oracle=dout.token))
        self.records.append(self._unit_record("AM", snaps["AM"]))
        self.records.append({
            "nu": self.nu,
            "unit": "brain",
            "ns_sel": asm.ns_sel,
            "nm_sel": asm.nm_sel,
            "feedback": int(asm.feedback_on),
            "wen_as": self.wen_as,
            "wen_am": self.wen_am,
            "motor": [s.token for s in motor],
            "feedback_reg": asm.feedback_reg.token,
        })
        self.last_dout = dout
        self.last_y = motor

    # -------------------------------------------------------- records --

    def _world_record(self, addr: Symbol, din: Symbol, dout: Symbol) -> dict:
        return {
            "nu": self.nu,
            "unit": "world",
            "addr": addr.token,
            "din": din.token,
            "dout": dout.token,
            "mem": [s.token for s in self.world.cells],
        }

    def _unit_record(self, name: str, io: CycleIO, oracle: str | None = None) -> dict:
        rec = {
            "nu": self.nu,
            "unit": name,
            "x": [s.token for s in io.x],
            "xy": [s.token for s in io.xy],
            "wen": io.wen,
            "s": [float(v) for v in io.s],
            "se": [float(v) for v in io.se],
            "e": [float(v) for v in io.e],
            "iwin": io.iwin,
            "y": [s.token for s in io.y],
            "wptr": io.wptr,
        }
        if oracle is not None:
            rec["oracle"] = oracle
        return rec

    # --------------------------------------------------------- report --

    def report(self) -> ExperimentReport:
        mismatches = sum(1 for a in self.asserts if not a["pass"])
        nu1 = self.nu1 if self.nu1 is not None else self.nu
        return ExperimentReport(
            protocol=self.protocol,
            nu0=0,
            nu1=nu1,
            nu2=max(self.nu - 1, 0),
            probes=len(self.asserts),
            mismatches=mismatches,
            records=list(self.asserts),
            passed=mismatches == 0,
            notes={"seed": self.seed, "kind": self.kind, "cycles": self.nu},
        )


def run_script_text(
    text: str,
    seed: int | None = None,
    trace_out: str | Path | None = None,
    protocol: str = "script",
) -> tuple[ExperimentReport, str]:
    """Parse, build, and run a script; returns (report, trace text)."""
    program = parse_script(text)
    session = Session(program, seed=seed, protocol=protocol)
    session.run_program()
    header = make_header(session.seed, text)
    trace_text = render_trace(header, session.records)
    if trace_out is not None:
        Path(trace_out).write_text(trace_text)
    return session.report(), trace_text


def run_script(
    path: str | Path,
    seed: int | None = None,
    trace_out: str | Path | None = None,
) -> tuple[ExperimentReport, str]:
    text = Path(path).read_text()
    return run_script_text(text, seed=seed, trace_out=trace_out, protocol=Path(path).stem)


@dataclass(frozen=True)
class ReplayResult:
    match: bool
    diverged_nu: int | None
    detail: str


def replay(trace_text: str) -> ReplayResult:
    """Re-run the script a trace carries and compare byte for byte."""
    header, _ = parse_header(trace_text)
    try:
        _, regenerated = run_script_text(header["script"], seed=header["seed"])
    except ScriptError as exc:
        raise ReplayError(f"embedded script failed to run: {exc}") from exc
    old = trace_text.splitlines()
    new = regenerated.splitlines()
    for i in range(min(len(old), len(new))):
        if old[i] != new[i]:
            if i == 0:
                return ReplayResult(False, None, "header mismatch")
            nu = None
            try:
                nu = json.loads(old[i]).get("nu")
            except json.JSONDecodeError:
                pass
            return ReplayResult(False, nu, f"record {i} differs from a fresh run")
    if len(old) != len(new):
        return ReplayResult(False, None,
                            f"trace has {len(old)} lines, fresh run has {len(new)}")
    return ReplayResult(True, None, "byte-identical with a fresh run")

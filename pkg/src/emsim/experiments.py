"""Teaching protocols and their reports.

Each protocol drives a unit (or an assembly) through a training phase
and an examination phase against an independent oracle, and returns an
ExperimentReport. Cycle indices: nu0 is the first training cycle, nu1
the first examination cycle (so nu1 equals the training length when
nu0 is 0), nu2 the last examination cycle.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .brain import BrainAssembly, brain_cycle, reset as brain_reset
from .gram import gram_new, gram_step
from .pem import Pem, PemParams
from .rng import SplitMix64
from .symbols import Alphabet, Symbol, make_alphabet


class ProtocolError(Exception):
    """A protocol precondition does not hold; reported, never papered over."""


# ------------------------------------------------------------- decay law --

def t_decay(emax: float, eloss: float, tau: float) -> float:
    """Cycles for residual excitation to decay from emax to eloss with
    decay factor c = 1 - 1/tau."""
    if not emax > eloss > 0:
        raise ValueError("need emax > eloss > 0")
    if not tau > 1:
        raise ValueError("need tau > 1")
    return math.log(eloss / emax) / math.log(1.0 - 1.0 / tau)


def tau_min(span_cycles: float) -> float:
    """Smallest decay constant that keeps a full write charge above half
    of itself across the given span: span / ln 2."""
    if span_cycles < 0:
        raise ValueError("span must be >= 0")
    return span_cycles / math.log(2.0)


# ---------------------------------------------------------------- report --

@dataclass
class ExperimentReport:
    protocol: str
    nu0: int
    nu1: int
    nu2: int
    probes: int
    mismatches: int
    records: list[dict]
    passed: bool
    notes: dict = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        return {
            "protocol": self.protocol,
            "nu0": self.nu0,
            "nu1": self.nu1,
            "nu2": self.nu2,
            "probes": self.probes,
            "mismatches": self.mismatches,
            "pass": self.passed,
            "notes": self.notes,
            "records": self.records,
        }


# -------------------------------------------------- retention (theorem3) --

def covering_schedule(
    addr_alphabet: Alphabet, data_alphabet: Alphabet, rng: SplitMix64 | None = None
) -> list[tuple[Symbol, Symbol]]:
    """Every write pair once; shuffled when an rng is given."""
    pairs = [
        (a, d)
        for a in addr_alphabet.members
        for d in data_alphabet.members
    ]
    if rng is not None:
        rng.shuffle(pairs)
    return pairs


def run_theorem3(
    addr_alphabet: Alphabet,
    data_alphabet: Alphabet,
    tau: float | None,
    training_schedule: list[tuple[Symbol, Symbol]],
    exam_probes: int | list[tuple[Symbol, Symbol]],
    seed: int,
    a: float = 0.4,
    probe_write_prob: float = 0.2,
) -> ExperimentReport:
    """Teach a two-slot unit a world's write rules, then examine it in
    lockstep against the world itself.

    Training: the sensory selector points at the world and every cycle
    records (addr, din) -> dout. The schedule must cover every write
    pair. Examination: the selector points at the unit's own output,
    writing is off, and each probe's unit output is compared with the
    world's response to the same probe. Integer exam_probes draws that
    many random probes (reads with probability 1 - probe_write_prob).
    """
    needed = {(a_.sid, d.sid) for a_ in addr_alphabet.members for d in data_alphabet.members}
    got = set()
    for addr, din in training_schedule:
        if addr.is_empty or din.is_empty:
            raise ProtocolError("training schedule may contain write pairs only")
        got.add((addr.sid, din.sid))
    missing = needed - got
    if missing:
        toks = sorted(
            f"({addr_alphabet.token_of(x)},{data_alphabet.token_of(y)})" for x, y in missing
        )
        raise ProtocolError(f"training schedule misses write pairs: {', '.join(toks)}")

    span_guess = len(training_schedule) + (
        exam_probes if isinstance(exam_probes, int) else len(exam_probes)
    )
    if tau is None:
        tau = float(math.ceil(tau_min(span_guess)))

    rng = SplitMix64(seed)
    params = PemParams(
        input_alphabets=(addr_alphabet, data_alphabet),
        output_alphabets=(data_alphabet,),
        capacity=len(training_schedule),
        wx=(1.0, 1.0),
        a=a,
        tau=tau,
    )
    if a * params.emax >= 1.0:
        raise ProtocolError("working-memory discrimination needs a < 1/emax")
    unit = Pem(params)
    world = gram_new(addr_alphabet, data_alphabet)

    nu = 0
    for addr, din in training_schedule:
        world, dout = gram_step(world, addr, din)
        unit.cycle((addr, din), (dout,), 1, rng)
        nu += 1
    nu1 = nu

    if isinstance(exam_probes, int):
        probes = []
        members_a = addr_alphabet.members
        members_d = data_alphabet.members
        for _ in range(exam_probes):
            addr = members_a[rng.randrange(len(members_a))]
            if rng.random() < probe_write_prob:
                din = members_d[rng.randrange(len(members_d))]
            else:
                din = data_alphabet.epsilon
            probes.append((addr, din))
    else:
        probes = list(exam_probes)

    records = []
    mismatches = 0
    for addr, din in probes:
        world, dout = gram_step(world, addr, din)  # the world is its own oracle
        pending = unit.cycle_start((addr, din), rng)
        io = unit.cycle_finish(pending, pending.y, 0)  # sensory selector on own output
        actual = io.y[0]
        ok = actual.token == dout.token
        if not ok:
            mismatches += 1
        records.append(
            {
                "nu": nu,
                "input": [addr.token, din.token],
                "expected": dout.token,
                "actual": actual.token,
                "pass": ok,
            }
        )
        nu += 1

    return ExperimentReport(
        protocol="theorem3",
        nu0=0,
        nu1=nu1,
        nu2=nu - 1,
        probes=len(probes),
        mismatches=mismatches,
        records=records,
        passed=mismatches == 0,
        notes={"tau": tau, "a": a, "seed": seed, "schedule_len": len(training_schedule)},
    )


# -------------------------------------------- motor imitation (theorem4) --

def gen_random_table(
    input_alphabet: Alphabet,
    feedback_alphabet: Alphabet,
    output_alphabets: tuple[Alphabet, ...],
    rng: SplitMix64,
) -> dict[tuple[Symbol, Symbol], tuple[Symbol, ...]]:
    """Total random table over all non-empty (sensory, feedback) pairs."""
    table = {}
    for u in input_alphabet.members:
        for v in feedback_alphabet.members:
            table[(u, v)] = tuple(a.members[rng.randrange(len(a.members))] for a in output_alphabets)
    return table


def run_theorem4(
    table: dict[tuple[Symbol, Symbol], tuple[Symbol, ...]],
    seed: int,
    tau: float = 100.0,
) -> ExperimentReport:
    """Teach a motor unit an arbitrary input/output table through the
    assembly wiring, then examine it exhaustively.

    The second table input rides the speech feedback wire, so the
    teacher spends one setup cycle per row speaking that value before
    the row itself is presented. Writing stays on for the whole
    training phase, so the setup cycles record extra rows; they carry
    an empty sensory slot and can never outvote a full match. The
    modulation coefficient is zero: the exam also asserts se == s on
    every cycle.
    """
    if not table:
        raise ProtocolError("table is empty")
    rows = list(table.items())
    (u0, v0), y0 = rows[0]
    sense = u0.alphabet
    fb = v0.alphabet
    outs = tuple(sym.alphabet for sym in y0)
    if len(outs) < 1:
        raise ProtocolError("table needs at least one output slot")
    if outs[-1] is not fb:
        raise ProtocolError("the last output alphabet must be the feedback alphabet")
    for (u, v), y in rows:
        if u.is_empty or v.is_empty:
            raise ProtocolError("table inputs must be non-empty symbols")
        if u.alphabet is not sense or v.alphabet is not fb or len(y) != len(outs):
            raise ProtocolError("table rows disagree on alphabets or widths")

    rng = SplitMix64(seed)
    params = PemParams(
        input_alphabets=(sense, fb),
        output_alphabets=outs,
        capacity=2 * len(rows),
        wx=(1.0, 1.0),
        a=0.0,
        tau=tau,
    )
    am = Pem(params)
    assembly = BrainAssembly(am_unit=am, ns_sel=1, nm_sel=1, feedback_on=True)
    empty_out = assembly.empty_motor
    se_gap = 0.0

    def watch(snapshots):
        nonlocal se_gap
        io = snapshots["AM"]
        gap = float(np.max(np.abs(io.se - io.s))) if io.se.size else 0.0
        se_gap = max(se_gap, gap)

    nu = 0
    for (u, v), y in rows:
        setup = empty_out[:-1] + (v,)
        _, snaps = brain_cycle(assembly, (sense.epsilon,), setup, None, 0, 1, rng)
        watch(snaps)
        _, snaps = brain_cycle(assembly, (u,), y, None, 0, 1, rng)
        watch(snaps)
        nu += 2
    nu1 = nu

    records = []
    mismatches = 0
    for (u, v), y in rows:
        assembly.nm_sel = 1
        setup = empty_out[:-1] + (v,)
        _, snaps = brain_cycle(assembly, (sense.epsilon,), setup, None, 0, 0, rng)
        watch(snaps)
        assembly.nm_sel = 0
        motor, snaps = brain_cycle(assembly, (u,), None, None, 0, 0, rng)
        watch(snaps)
        ok = all(got.token == want.token for got, want in zip(motor, y))
        if not ok:
            mismatches += 1
        records.append(
            {
                "nu": nu + 1,
                "input": [u.token, v.token],
                "expected": [sym.token for sym in y],
                "actual": [sym.token for sym in motor],
                "pass": ok,
            }
        )
        nu += 2
    assembly.nm_sel = 1

    passed = mismatches == 0 and se_gap == 0.0
    return ExperimentReport(
        protocol="theorem4",
        nu0=0,
        nu1=nu1,
        nu2=nu - 1,
        probes=len(rows),
        mismatches=mismatches,
        records=records,
        passed=passed,
        notes={"seed": seed, "tau": tau, "se_minus_s_max": se_gap, "ltm_rows": am.n_written},
    )


# --------------------------------------------------- mental set (screen) --

@dataclass(frozen=True)
class MentalSetSpec:
    """One target Boolean function for the named-screen protocol.

    truth_bits: output bit per visual input, inputs enumerated in
    lexicographic order over {0,1}^k.
    """

    k: int
    truth_bits: tuple[int, ...]
    refresh_on: bool = False
    tau: float = 100.0

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if len(self.truth_bits) != 2 ** self.k:
            raise ValueError(f"need {2 ** self.k} output bits")
        if any(b not in (0, 1) for b in self.truth_bits):
            raise ValueError("output bits must be 0 or 1")
        if not self.tau > 1:
            raise ValueError("tau must be > 1")


@dataclass
class MentalSetMachine:
    k: int
    names: Alphabet
    bits: Alphabet
    speech: Alphabet
    am: Pem
    assembly: BrainAssembly
    refresh_wiring: bool
    # (visual vector, spoken symbol) per production, index-aligned with names
    productions: list[tuple[tuple[Symbol, ...], Symbol]]

    @property
    def visual_inputs(self) -> list[tuple[Symbol, ...]]:
        return [
            v for v in itertools.product(self.bits.members, repeat=self.k)
        ]


def mental_set_machine(
    k: int,
    tau: float = 100.0,
    refresh_wiring: bool = False,
    w1: float | None = None,
    a: float | None = None,
) -> MentalSetMachine:
    """Build the named-screen machine: one production per (visual input,
    output) pair, each with a unique auditory name.

    The name slot weight w1 exceeds k+1 so a name outvotes any visual
    pattern; visual slots weigh 1; the proprioceptive slot weighs 1.
    A full visual match scores k, which is exactly the floor a wrong
    location can reach, so only excitation above k separates the
    pre-tuned set; hence eloss = k for this protocol.
    """
    n = 2 ** (k + 1)
    names = make_alphabet("NAMES", [f"a{i + 1}" for i in range(n)])
    bits = make_alphabet("BITS", ["0", "1"])
    speech = make_alphabet("SPEECH", ["s0", "s1"])
    if w1 is None:
        w1 = float(k + 2)
    if not w1 > k + 1:
        raise ProtocolError("name slot weight must exceed k+1")
    emax = w1 + k + 1.0
    if a is None:
        a = 0.5 / emax
    if not 0 < a * emax < 1:
        raise ProtocolError("need 0 < a < 1/emax for the name and visual votes to order")
    params = PemParams(
        input_alphabets=(names,) + (bits,) * k + (speech,),
        output_alphabets=(speech,),
        capacity=n,
        wx=(w1,) + (1.0,) * k + (1.0,),
        a=a,
        tau=tau,
    )
    am = Pem(params)
    assembly = BrainAssembly(
        am_unit=am,
        aud_alphabet=names,
        visual_width=k,
        proprio_refresh=refresh_wiring,
        ns_sel=1,
        nm_sel=0,
        feedback_on=refresh_wiring,
    )
    productions = [
        (v, b)
        for v in itertools.product(bits.members, repeat=k)
        for b in speech.members
    ]
    return MentalSetMachine(
        k=k,
        names=names,
        bits=bits,
        speech=speech,
        am=am,
        assembly=assembly,
        refresh_wiring=refresh_wiring,
        productions=productions,
    )


def train_mental_set(machine: MentalSetMachine, rng: SplitMix64) -> None:
    """Record every production once: name, visual pattern, and (with the
    refresh wiring) the production's own output on the proprioceptive
    slot, which the teacher arranges by having the robot speak it."""
    if machine.am.n_written:
        raise ProtocolError("machine already trained")
    eps_sp = machine.speech.epsilon
    for i, (v, b) in enumerate(machine.productions):
        proprio = b if machine.refresh_wiring else eps_sp
        x = (machine.names.members[i],) + v + (proprio,)
        machine.am.cycle(x, (b,), 1, rng)


def truth_table(machine: MentalSetMachine, spec: MentalSetSpec) -> dict:
    inputs = machine.visual_inputs
    return {
        v: machine.speech.members[bit] for v, bit in zip(inputs, spec.truth_bits)
    }


def pretune_names(machine: MentalSetMachine, table: dict) -> list[Symbol]:
    """The auditory names of the productions realizing the target table,
    one per visual input in enumeration order."""
    out = []
    for v in machine.visual_inputs:
        if v not in table:
            raise ProtocolError(f"table misses input {tuple(s.token for s in v)}")
        b = table[v]
        try:
            idx = machine.productions.index((v, b))
        except ValueError:
            raise ProtocolError(
                f"no named production for {tuple(s.token for s in v)} -> {b}"
            ) from None
        out.append(machine.names.members[idx])
    return out


def _exam_once(
    machine: MentalSetMachine,
    table: dict,
    refresh_on: bool,
    rng: SplitMix64,
    nu: int,
    probe_inputs: list | None = None,
) -> tuple[list[dict], int, bool, int]:
    """Reset, pre-tune the table's names, then probe. Returns (records,
    mismatches, all winners pre-tuned, next nu)."""
    asm = machine.assembly
    asm.feedback_on = refresh_on
    brain_reset(asm)
    blank = tuple(machine.bits.epsilon for _ in range(machine.k))
    tuned_locations = set()
    for name in pretune_names(machine, table):
        brain_cycle(asm, blank, None, name, 0, 0, rng)
        tuned_locations.add(machine.names.members.index(name) + 1)
        nu += 1
    records = []
    mismatches = 0
    winners_tuned = True
    for v in probe_inputs if probe_inputs is not None else machine.visual_inputs:
        motor, snaps = brain_cycle(asm, v, None, None, 0, 0, rng)
        expected = table[v]
        ok = motor[0].token == expected.token
        if not ok:
            mismatches += 1
        iwin = snaps["AM"].iwin
        if iwin not in tuned_locations:
            winners_tuned = False
        records.append(
            {
                "nu": nu,
                "input": [s.token for s in v],
                "expected": expected.token,
                "actual": motor[0].token,
                "pass": ok,
            }
        )
        nu += 1
    return records, mismatches, winners_tuned, nu


def run_mental_set(spec: MentalSetSpec, seed: int) -> ExperimentReport:
    """Train the production set, then realize the one target function by
    pre-tuning its names and probing every visual input."""
    machine = mental_set_machine(spec.k, tau=spec.tau, refresh_wiring=spec.refresh_on)
    rng = SplitMix64(seed)
    train_mental_set(machine, rng)
    n = len(machine.productions)
    table = truth_table(machine, spec)
    records, mismatches, winners_tuned, nu = _exam_once(
        machine, table, spec.refresh_on, rng, nu=n
    )
    return ExperimentReport(
        protocol="mentalset",
        nu0=0,
        nu1=n,
        nu2=nu - 1,
        probes=len(records),
        mismatches=mismatches,
        records=records,
        passed=mismatches == 0 and winners_tuned,
        notes={
            "k": spec.k,
            "seed": seed,
            "tau": spec.tau,
            "refresh": spec.refresh_on,
            "winners_pretuned": winners_tuned,
            "stored_associations": n,
        },
    )


def run_mental_set_suite(
    k: int,
    seed: int,
    refresh_on: bool = False,
    tau: float = 100.0,
) -> ExperimentReport:
    """One trained production set, examined over every Boolean function of
    k inputs: reset, pre-tune the function's names, probe all inputs."""
    machine = mental_set_machine(k, tau=tau, refresh_wiring=refresh_on)
    rng = SplitMix64(seed)
    train_mental_set(machine, rng)
    n = len(machine.productions)
    n_inputs = 2 ** k
    records = []
    mismatches = 0
    winners_tuned = True
    nu = n
    count = 0
    for bits in itertools.product((0, 1), repeat=n_inputs):
        spec = MentalSetSpec(k=k, truth_bits=bits, refresh_on=refresh_on, tau=tau)
        table = truth_table(machine, spec)
        recs, miss, tuned, nu = _exam_once(machine, table, refresh_on, rng, nu)
        for r in recs:
            r["function"] = "".join(str(b) for b in bits)
        records.extend(recs)
        mismatches += miss
        winners_tuned = winners_tuned and tuned
        count += 1
    return ExperimentReport(
        protocol="mentalset",
        nu0=0,
        nu1=n,
        nu2=nu - 1,
        probes=len(records),
        mismatches=mismatches,
        records=records,
        passed=mismatches == 0 and winners_tuned,
        notes={
            "k": k,
            "seed": seed,
            "tau": tau,
            "refresh": refresh_on,
            "functions": count,
            "stored_associations": n,
            "training_cycles": n,
            "winners_pretuned": winners_tuned,
        },
    )


def run_mental_set_endurance(
    k: int,
    seed: int,
    refresh_on: bool,
    tau: float = 50.0,
    factor: float = 10.0,
) -> ExperimentReport:
    """Hold one pre-tuned function under round-robin probing for factor
    times the decay lifetime of a pre-tune charge. With the refresh
    wiring on, every execution recharges the winner and the set outlives
    the horizon; with it off, the set decays to the k floor and fails."""
    machine = mental_set_machine(k, tau=tau, refresh_wiring=True)
    rng = SplitMix64(seed)
    train_mental_set(machine, rng)
    n = len(machine.productions)
    # parity target; any fixed function works
    bits = tuple(
        sum(1 for s in v if s.token == "1") % 2 for v in machine.visual_inputs
    )
    spec = MentalSetSpec(k=k, truth_bits=bits, refresh_on=refresh_on, tau=tau)
    table = truth_table(machine, spec)
    w1 = machine.am.params.wx[0]
    lifetime = t_decay(w1, float(k), tau)
    total = int(math.ceil(factor * lifetime))
    inputs = machine.visual_inputs
    probe_seq = [inputs[i % len(inputs)] for i in range(total)]
    records, mismatches, winners_tuned, nu = _exam_once(
        machine, table, refresh_on, rng, nu=n, probe_inputs=probe_seq
    )
    return ExperimentReport(
        protocol="mentalset",
        nu0=0,
        nu1=n,
        nu2=nu - 1,
        probes=len(probe_seq),
        mismatches=mismatches,
        records=[r for r in records if not r["pass"]][:32],
        passed=mismatches == 0 and winners_tuned,
        notes={
            "k": k,
            "seed": seed,
            "tau": tau,
            "refresh": refresh_on,
            "probe_cycles": total,
            "set_lifetime_cycles": lifetime,
            "winners_pretuned": winners_tuned,
        },
    )

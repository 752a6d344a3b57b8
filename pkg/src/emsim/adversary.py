"""Adversarial sequence pairs and baseline learners.

Each pair consists of two input sequences whose correct final responses
differ, although the sequences agree on everything a bounded observer
sees: the order pair agrees on the last m inputs (only an unboundedly
old write distinguishes them), and the position pair is a permutation
of the same input multiset (only the order of two writes distinguishes
them). A learner Distinguishes a pair when, after training on both
transcripts, it predicts both oracle responses; otherwise it Fails.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass

from .experiments import ExperimentReport, ProtocolError, tau_min
from .gram import gram_new, gram_step
from .pem import Pem, PemParams
from .rng import SplitMix64
from .symbols import Alphabet, Symbol

InputSeq = list[tuple[Symbol, Symbol]]
Transcript = list[tuple[tuple[Symbol, Symbol], Symbol]]


@dataclass(frozen=True)
class AdversaryPair:
    kind: str
    m: int
    seq1: tuple[tuple[Symbol, Symbol], ...]
    seq2: tuple[tuple[Symbol, Symbol], ...]
    oracle1: Symbol
    oracle2: Symbol


def transcript_of(addr_alphabet: Alphabet, data_alphabet: Alphabet, seq: InputSeq) -> Transcript:
    """Replay a fresh world over the sequence; the transcript pairs every
    input with the world's response."""
    world = gram_new(addr_alphabet, data_alphabet)
    out = []
    for addr, din in seq:
        world, dout = gram_step(world, addr, din)
        out.append(((addr, din), dout))
    return out


def _oracle(addr_alphabet: Alphabet, data_alphabet: Alphabet, seq: InputSeq) -> Symbol:
    return transcript_of(addr_alphabet, data_alphabet, seq)[-1][1]


def gen_theorem1_pair(
    addr_alphabet: Alphabet,
    data_alphabet: Alphabet,
    m: int,
    filler_d: Symbol,
) -> AdversaryPair:
    """Two sequences of length m+1 that agree on their last m entries and
    end with a read whose answer was written at the very first cycle."""
    if m < 1:
        raise ProtocolError("m must be >= 1")
    if len(addr_alphabet) < 2 or len(data_alphabet) < 2:
        raise ProtocolError("need at least two addresses and two data symbols")
    a1, a2 = addr_alphabet.members[:2]
    da, db = data_alphabet.members[:2]
    eps = data_alphabet.epsilon
    tail = [(a2, filler_d)] * (m - 1) + [(a1, eps)]
    seq1 = tuple([(a1, da)] + tail)
    seq2 = tuple([(a1, db)] + tail)
    return AdversaryPair(
        kind="theorem1",
        m=m,
        seq1=seq1,
        seq2=seq2,
        oracle1=_oracle(addr_alphabet, data_alphabet, list(seq1)),
        oracle2=_oracle(addr_alphabet, data_alphabet, list(seq2)),
    )


def gen_theorem2_pair(
    addr_alphabet: Alphabet,
    data_alphabet: Alphabet,
    m: int,
    m1: int,
    m2: int,
    filler_d: Symbol,
) -> AdversaryPair:
    """Two sequences of length m+1 that are permutations of each other:
    writes of two different values to one address at positions m1 < m2,
    filler at a second address elsewhere, and a final read of the
    written address. Only the write order decides the answer."""
    if not 1 <= m1 < m2 <= m:
        raise ProtocolError("need 1 <= m1 < m2 <= m")
    if len(addr_alphabet) < 2 or len(data_alphabet) < 2:
        raise ProtocolError("need at least two addresses and two data symbols")
    a1, a2 = addr_alphabet.members[:2]
    da, db = data_alphabet.members[:2]
    eps = data_alphabet.epsilon

    def build(first: Symbol, second: Symbol) -> tuple:
        seq = []
        for pos in range(1, m + 1):
            if pos == m1:
                seq.append((a1, first))
            elif pos == m2:
                seq.append((a1, second))
            else:
                seq.append((a2, filler_d))
        seq.append((a1, eps))
        return tuple(seq)

    seq1 = build(da, db)
    seq2 = build(db, da)
    return AdversaryPair(
        kind="theorem2",
        m=m,
        seq1=seq1,
        seq2=seq2,
        oracle1=_oracle(addr_alphabet, data_alphabet, list(seq1)),
        oracle2=_oracle(addr_alphabet, data_alphabet, list(seq2)),
    )


# -------------------------------------------------------------- learners --

class WindowLearner:
    """Predicts the response from the last `window` inputs alone; ties in
    the training counts break toward the lexically smallest token."""

    def __init__(self, window: int, data_alphabet: Alphabet):
        self.window = window
        self.data_alphabet = data_alphabet
        self._table: dict[tuple, Counter] = {}

    def _key(self, inputs: list[tuple[Symbol, Symbol]], t: int) -> tuple:
        lo = max(0, t - self.window + 1)
        return tuple((a.token, d.token) for a, d in inputs[lo: t + 1])

    def train(self, transcripts: list[Transcript]) -> None:
        for tr in transcripts:
            inputs = [x for x, _ in tr]
            for t, (_, dout) in enumerate(tr):
                self._table.setdefault(self._key(inputs, t), Counter())[dout.token] += 1

    def predict(self, seq: InputSeq) -> Symbol:
        counts = self._table.get(self._key(list(seq), len(seq) - 1))
        if not counts:
            return self.data_alphabet.epsilon
        token = min(counts, key=lambda tok: (-counts[tok], tok))
        return self.data_alphabet.symbol(token)


class BagLearner:
    """Predicts the final response from the multiset of input pairs of the
    whole sequence, ignoring order; same tie-break as WindowLearner."""

    def __init__(self, data_alphabet: Alphabet):
        self.data_alphabet = data_alphabet
        self._table: dict[tuple, Counter] = {}

    @staticmethod
    def _key(seq: InputSeq) -> tuple:
        bag = Counter((a.token, d.token) for a, d in seq)
        return tuple(sorted(bag.items()))

    def train(self, transcripts: list[Transcript]) -> None:
        for tr in transcripts:
            inputs = [x for x, _ in tr]
            final = tr[-1][1]
            self._table.setdefault(self._key(inputs), Counter())[final.token] += 1

    def predict(self, seq: InputSeq) -> Symbol:
        counts = self._table.get(self._key(list(seq)))
        if not counts:
            return self.data_alphabet.epsilon
        token = min(counts, key=lambda tok: (-counts[tok], tok))
        return self.data_alphabet.symbol(token)


class PemLearner:
    """A sensory unit taught the transcripts verbatim; prediction replays
    a sequence on a copy of the trained state, so predict is pure."""

    def __init__(
        self,
        addr_alphabet: Alphabet,
        data_alphabet: Alphabet,
        capacity: int,
        tau: float,
        seed: int = 0,
        a: float = 0.4,
    ):
        params = PemParams(
            input_alphabets=(addr_alphabet, data_alphabet),
            output_alphabets=(data_alphabet,),
            capacity=capacity,
            wx=(1.0, 1.0),
            a=a,
            tau=tau,
        )
        self._unit = Pem(params)
        self._rng = SplitMix64(seed)

    def train(self, transcripts: list[Transcript]) -> None:
        for tr in transcripts:
            for (addr, din), dout in tr:
                self._unit.cycle((addr, din), (dout,), 1, self._rng)

    def predict(self, seq: InputSeq) -> Symbol:
        unit = self._unit.clone()
        rng = self._rng.clone()
        y = unit.params.output_alphabets[0].epsilon
        for addr, din in seq:
            pending = unit.cycle_start((addr, din), rng)
            io = unit.cycle_finish(pending, pending.y, 0)
            y = io.y[0]
        return y


def evaluate_learner(
    learner,
    pair: AdversaryPair,
    addr_alphabet: Alphabet,
    data_alphabet: Alphabet,
    training_budget: int = 1,
) -> str:
    """Train on both transcripts (budget = passes over the pair), then
    test: 'distinguishes' iff both predictions match their oracles."""
    transcripts = [
        transcript_of(addr_alphabet, data_alphabet, list(pair.seq1)),
        transcript_of(addr_alphabet, data_alphabet, list(pair.seq2)),
    ]
    for _ in range(training_budget):
        learner.train(transcripts)
    p1 = learner.predict(list(pair.seq1))
    p2 = learner.predict(list(pair.seq2))
    ok = p1.token == pair.oracle1.token and p2.token == pair.oracle2.token
    return "distinguishes" if ok else "fails"


def falsification_matrix(
    addr_alphabet: Alphabet,
    data_alphabet: Alphabet,
    ms: range = range(1, 7),
    seed: int = 0,
) -> ExperimentReport:
    """Every learner against every pair kind and window size. Expected
    cells: the window learner fails the order pairs, the bag learner
    fails the position pairs (defined for m >= 2), and the unit-backed
    learner distinguishes everything, given tau covering the replay."""
    filler = data_alphabet.members[0]
    records = []
    mismatches = 0
    probes = 0
    for m in ms:
        pairs = [gen_theorem1_pair(addr_alphabet, data_alphabet, m, filler)]
        if m >= 2:
            pairs.append(gen_theorem2_pair(addr_alphabet, data_alphabet, m, 1, m, filler))
        for pair in pairs:
            run_len = 4 * (m + 1)  # two training transcripts plus one replay, rounded up
            tau = float(2 * math.ceil(tau_min(run_len)))
            learners = {
                "window": WindowLearner(m, data_alphabet),
                "bag": BagLearner(data_alphabet),
                "pem": PemLearner(
                    addr_alphabet, data_alphabet, capacity=2 * (m + 1), tau=tau, seed=seed
                ),
            }
            for name, learner in learners.items():
                result = evaluate_learner(learner, pair, addr_alphabet, data_alphabet)
                expected = None
                if name == "pem":
                    expected = "distinguishes"
                elif name == "window" and pair.kind == "theorem1":
                    expected = "fails"
                elif name == "bag" and pair.kind == "theorem2":
                    expected = "fails"
                ok = expected is None or result == expected
                if expected is not None:
                    probes += 1
                    if not ok:
                        mismatches += 1
                records.append(
                    {
                        "learner": name,
                        "pair": pair.kind,
                        "m": m,
                        "result": result,
                        "expected": expected,
                        "pass": ok,
                    }
                )
    return ExperimentReport(
        protocol="adversary",
        nu0=0,
        nu1=0,
        nu2=0,
        probes=probes,
        mismatches=mismatches,
        records=records,
        passed=mismatches == 0,
        notes={"ms": [m for m in ms], "seed": seed},
    )

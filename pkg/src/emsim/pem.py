"""Primitive associative unit with residual excitation.

The unit records input/output vector pairs verbatim into long-term
memory (one location per teaching cycle) and interprets each input by a
similarity vote modulated by per-location residual excitation:

    decode      s(i)  = sum_j wx(j) * [x(j) == gx(j,i) != empty]
    modulate    se(i) = s(i) * (1 + a * e(i))
    choose      winner uniformly from {i : se(i) == max(se) > 0}
    encode      y     = gy(:, winner), or all-empty when no winner
    excitation  e(i)' = s(i) if s(i) > e(i) else c * e(i)
    learning    gx(:, wptr) = x; gy(:, wptr) = xy; wptr += 1
    write seed  e(wptr)' = sum_j wx(j) * [x(j) != empty]

The empty symbol matches nothing, including itself. All location indices
visible outside this module (winner index, wptr, LTM rows) are 1-based;
arrays inside are 0-based.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import kernels
from .rng import SplitMix64
from .symbols import Alphabet, Symbol


class CapacityError(Exception):
    """Raised when a teaching cycle arrives with long-term memory full."""


@dataclass(frozen=True)
class PemParams:
    input_alphabets: tuple[Alphabet, ...]
    output_alphabets: tuple[Alphabet, ...]
    capacity: int
    wx: tuple[float, ...]
    a: float
    tau: float

    def __post_init__(self):
        if not self.input_alphabets:
            raise ValueError("need at least one input slot")
        if not self.output_alphabets:
            raise ValueError("need at least one output slot")
        if len(self.wx) != len(self.input_alphabets):
            raise ValueError("wx length must equal the number of input slots")
        if any(w < 1.0 for w in self.wx):
            raise ValueError("input weights must be >= 1.0")
        if self.capacity < 1:
            raise ValueError("capacity must be >= 1")
        if self.a < 0:
            raise ValueError("modulation coefficient a must be >= 0")
        if not self.tau > 1:
            raise ValueError("decay constant tau must be > 1 so 0 < c < 1")

    @property
    def m(self) -> int:
        return len(self.input_alphabets)

    @property
    def p(self) -> int:
        return len(self.output_alphabets)

    @property
    def c(self) -> float:
        return 1.0 - 1.0 / self.tau

    @property
    def emax(self) -> float:
        return float(sum(self.wx))


@dataclass(frozen=True)
class CycleIO:
    """Everything one cycle consumed and produced. Arrays are copies at
    full capacity length; e and wptr are the end-of-cycle values."""

    x: tuple[Symbol, ...]
    xy: tuple[Symbol, ...]
    wen: int
    y: tuple[Symbol, ...]
    iwin: int | None
    s: np.ndarray
    se: np.ndarray
    e: np.ndarray = field(repr=False)
    wptr: int = 0

    @property
    def no_winner(self) -> bool:
        return self.iwin is None


@dataclass(frozen=True)
class PendingCycle:
    """Read-only first phase of a cycle (decode through encode), kept
    separate so a caller can route y into xy before committing."""

    x: tuple[Symbol, ...]
    x_ids: np.ndarray
    wx: np.ndarray
    s: np.ndarray
    se: np.ndarray
    iwin: int | None
    y: tuple[Symbol, ...]


def choose(se: np.ndarray, n_written: int, rng: SplitMix64) -> int | None:
    """Winner index (1-based) drawn uniformly from the tied maximum of se
    over recorded locations; None when that maximum is not positive.

    Exactly one rng draw is consumed when a winner exists (even for a
    singleton tie) and none otherwise, so streams are reproducible.
    """
    mx = kernels.max_written(se, n_written)
    if mx <= 0.0:
        return None
    mset = np.flatnonzero(se[:n_written] == mx)
    return int(mset[rng.randrange(len(mset))]) + 1


def match_weight(x_ids: np.ndarray, wx: np.ndarray) -> float:
    """Weight sum over non-empty input slots; the write-cycle seed value."""
    total = 0.0
    for j in range(len(wx)):  # fixed order, matches the decode kernels
        if x_ids[j] != 0:
            total += wx[j]
    return total


class Pem:
    """Mutable unit state (long-term memory plus excitation vector)."""

    def __init__(self, params: PemParams):
        self.params = params
        self._gx = np.zeros((params.m, params.capacity), dtype=np.int32)
        self._gy = np.zeros((params.p, params.capacity), dtype=np.int32)
        self._e = np.zeros(params.capacity)
        self._n_written = 0

    # ------------------------------------------------------------ state --

    @property
    def n_written(self) -> int:
        return self._n_written

    @property
    def wptr(self) -> int:
        """Next free location, 1-based."""
        return self._n_written + 1

    @property
    def e(self) -> np.ndarray:
        return self._e

    @property
    def gx(self) -> np.ndarray:
        return self._gx

    @property
    def gy(self) -> np.ndarray:
        return self._gy

    def location(self, i: int) -> tuple[tuple[Symbol, ...], tuple[Symbol, ...]]:
        """Recorded (x, y) pair at 1-based location i."""
        if not 1 <= i <= self._n_written:
            raise IndexError(f"location {i} not recorded yet")
        x = tuple(a.by_id(int(v)) for a, v in zip(self.params.input_alphabets, self._gx[:, i - 1]))
        y = tuple(a.by_id(int(v)) for a, v in zip(self.params.output_alphabets, self._gy[:, i - 1]))
        return x, y

    def ltm_rows(self) -> list[tuple[tuple[Symbol, ...], tuple[Symbol, ...]]]:
        return [self.location(i) for i in range(1, self._n_written + 1)]

    def reset_e(self) -> None:
        self._e[:] = 0.0

    def clone(self) -> "Pem":
        twin = Pem(self.params)
        twin._gx = self._gx.copy()
        twin._gy = self._gy.copy()
        twin._e = self._e.copy()
        twin._n_written = self._n_written
        return twin

    # ------------------------------------------------------------ cycle --

    def cycle_start(
        self,
        x: Sequence[Symbol],
        rng: SplitMix64,
        wx_override: Sequence[float] | None = None,
    ) -> PendingCycle:
        x = tuple(x)
        x_ids = self._intern(x, self.params.input_alphabets, "input")
        wx = self._weights(wx_override)
        s = kernels.decode(self._gx, x_ids, wx, self._n_written)
        se = kernels.modulate(s, self._e, self.params.a)
        iwin = choose(se, self._n_written, rng)
        if iwin is None:
            y = tuple(a.epsilon for a in self.params.output_alphabets)
        else:
            col = self._gy[:, iwin - 1]
            y = tuple(a.by_id(int(v)) for a, v in zip(self.params.output_alphabets, col))
        return PendingCycle(x=x, x_ids=x_ids, wx=wx, s=s, se=se, iwin=iwin, y=y)

    def cycle_finish(self, pending: PendingCycle, xy: Sequence[Symbol], wen: int) -> CycleIO:
        xy = tuple(xy)
        xy_ids = self._intern(xy, self.params.output_alphabets, "desired output")
        self._e = kernels.next_e(pending.s, self._e, self.params.c)
        if wen:
            if self._n_written >= self.params.capacity:
                raise CapacityError(
                    f"long-term memory full at {self.params.capacity} locations; "
                    "re-size the run"
                )
            slot = self._n_written
            self._gx[:, slot] = pending.x_ids
            self._gy[:, slot] = xy_ids
            self._n_written += 1
            # the write seed overrides the decay update at the new location
            self._e[slot] = match_weight(pending.x_ids, pending.wx)
        return CycleIO(
            x=pending.x,
            xy=xy,
            wen=1 if wen else 0,
            y=pending.y,
            iwin=pending.iwin,
            s=pending.s.copy(),
            se=pending.se.copy(),
            e=self._e.copy(),
            wptr=self.wptr,
        )

    def cycle(
        self,
        x: Sequence[Symbol],
        xy: Sequence[Symbol],
        wen: int,
        rng: SplitMix64,
        wx_override: Sequence[float] | None = None,
    ) -> CycleIO:
        """One full cycle: interpret x, then commit learning and excitation."""
        pending = self.cycle_start(x, rng, wx_override)
        return self.cycle_finish(pending, xy, wen)

    def recharge_executed(self, io: CycleIO, proprio: Symbol) -> float | None:
        """Second half-step of a refresh cycle.

        The proprioceptive symbol (the output the unit just produced)
        arrives on the last input slot; the executed location's s is
        recomputed with that slot included and the charge/decay rule is
        re-applied to that location alone. Returns its new e, or None
        when the cycle had no winner.
        """
        if io.iwin is None:
            return None
        slot = io.iwin - 1
        last = self.params.m - 1
        alphabet = self.params.input_alphabets[last]
        if proprio.alphabet is not alphabet:
            raise TypeError(
                f"proprioceptive symbol from alphabet {proprio.alphabet.name}, "
                f"slot {last + 1} uses {alphabet.name}"
            )
        s2 = io.s[slot]
        if proprio.sid != 0 and self._gx[last, slot] == proprio.sid:
            s2 = s2 + self.params.wx[last]
        if s2 > self._e[slot]:
            self._e[slot] = s2
        else:
            self._e[slot] = self.params.c * self._e[slot]
        return float(self._e[slot])

    # ---------------------------------------------------------- helpers --

    def _weights(self, wx_override: Sequence[float] | None) -> np.ndarray:
        if wx_override is None:
            return np.asarray(self.params.wx, dtype=np.float64)
        if len(wx_override) != self.params.m:
            raise ValueError("wx override length must equal the number of input slots")
        if any(w < 1.0 for w in wx_override):
            raise ValueError("input weights must be >= 1.0")
        return np.asarray(wx_override, dtype=np.float64)

    @staticmethod
    def _intern(syms: tuple[Symbol, ...], alphabets: tuple[Alphabet, ...], what: str) -> np.ndarray:
        if len(syms) != len(alphabets):
            raise ValueError(f"{what} must have {len(alphabets)} slots, got {len(syms)}")
        ids = np.empty(len(syms), dtype=np.int32)
        for j, (sym, alphabet) in enumerate(zip(syms, alphabets)):
            if sym.alphabet is not alphabet:
                raise TypeError(
                    f"{what} slot {j + 1} expects alphabet {alphabet.name}, "
                    f"got {sym.alphabet.name}"
                )
            ids[j] = sym.sid
        return ids

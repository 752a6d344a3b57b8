"""Generalized addressable-memory world.

A world holds one data cell per address. Driving it with (addr, din)
either writes (din non-empty: the cell is overwritten and dout echoes
din) or reads (din empty: dout is the cell content, possibly empty, and
nothing changes). A write pair is a fixed rule: its response never
depends on history. A read pair is a variable rule: its response equals
the most recent write to that address.

State is an immutable value; stepping returns a new state, and a read
returns a state equal to its input.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace

from .symbols import Alphabet, Symbol


class RuleKind(enum.Enum):
    FIXED = "fixed"
    VARIABLE = "variable"


@dataclass(frozen=True)
class GramState:
    addr_alphabet: Alphabet
    data_alphabet: Alphabet
    mem: tuple[int, ...]  # data symbol ids, one cell per address member
    # optional dout translation (data id -> data id), identity when None
    out_map: tuple[int, ...] | None = None

    @property
    def cells(self) -> tuple[Symbol, ...]:
        return tuple(self.data_alphabet.by_id(v) for v in self.mem)


def gram_new(
    addr_alphabet: Alphabet,
    data_alphabet: Alphabet,
    out_map: dict[Symbol, Symbol] | None = None,
) -> GramState:
    """Fresh world with every cell empty."""
    mapped: tuple[int, ...] | None = None
    if out_map is not None:
        table = list(range(len(data_alphabet) + 1))
        for src, dst in out_map.items():
            _check_data(data_alphabet, src)
            _check_data(data_alphabet, dst)
            table[src.sid] = dst.sid
        mapped = tuple(table)
    return GramState(
        addr_alphabet=addr_alphabet,
        data_alphabet=data_alphabet,
        mem=(0,) * len(addr_alphabet),
        out_map=mapped,
    )


def classify_rule(addr: Symbol, din: Symbol) -> RuleKind:
    if addr.is_empty:
        raise ValueError("empty address does not form a rule")
    return RuleKind.VARIABLE if din.is_empty else RuleKind.FIXED


def gram_step(state: GramState, addr: Symbol, din: Symbol) -> tuple[GramState, Symbol]:
    """One transition; returns (next state, dout)."""
    if addr.alphabet is not state.addr_alphabet:
        raise TypeError(f"addr from alphabet {addr.alphabet.name}, "
                        f"world uses {state.addr_alphabet.name}")
    if addr.is_empty:
        raise ValueError("addr must be a non-empty symbol")
    _check_data(state.data_alphabet, din)
    cell = addr.sid - 1
    if din.is_empty:
        out = state.mem[cell]
        next_state = state
    else:
        out = din.sid
        mem = list(state.mem)
        mem[cell] = din.sid
        next_state = replace(state, mem=tuple(mem))
    if state.out_map is not None:
        out = state.out_map[out]
    return next_state, state.data_alphabet.by_id(out)


def _check_data(alphabet: Alphabet, sym: Symbol) -> None:
    if sym.alphabet is not alphabet:
        raise TypeError(f"data symbol from alphabet {sym.alphabet.name}, "
                        f"world uses {alphabet.name}")

"""Named symbol alphabets with interned integer ids.

Every signal in the simulator carries symbols from a declared alphabet.
Each alphabet implicitly contains the empty symbol, printed ``_`` in all
text formats. Internally a symbol is an integer id; the empty symbol is
id 0 in every alphabet so array code can test emptiness uniformly, and
the declared members take ids 1..n in declaration order (cell indexing
and serialization follow that order).
"""

from __future__ import annotations

from typing import Iterator

EPSILON_TOKEN = "_"

# tokens appear in line-based scripts and key=value fields, so ban the
# characters that would break that grammar
_FORBIDDEN = set(' \t\r\n#=,')


class Alphabet:
    """Finite symbol set. Construct via :func:`make_alphabet`."""

    __slots__ = ("name", "_tokens", "_ids")

    def __init__(self, name: str, tokens: tuple[str, ...]):
        self.name = name
        self._tokens = tokens
        self._ids = {tok: i + 1 for i, tok in enumerate(tokens)}

    def __len__(self) -> int:
        """Member count, the empty symbol excluded."""
        return len(self._tokens)

    def __iter__(self) -> Iterator["Symbol"]:
        return iter(self.members)

    def __repr__(self) -> str:
        inner = ",".join(self._tokens + (EPSILON_TOKEN,))
        return f"{self.name}{{{inner}}}"

    @property
    def members(self) -> tuple["Symbol", ...]:
        """Non-empty symbols in declaration order."""
        return tuple(Symbol(self, i + 1) for i in range(len(self._tokens)))

    @property
    def epsilon(self) -> "Symbol":
        return Symbol(self, 0)

    @property
    def tokens(self) -> tuple[str, ...]:
        return self._tokens

    def symbol(self, token: str) -> "Symbol":
        """Parse a token, ``_`` meaning the empty symbol."""
        if token == EPSILON_TOKEN:
            return Symbol(self, 0)
        sid = self._ids.get(token)
        if sid is None:
            raise KeyError(f"token {token!r} is not in alphabet {self.name}")
        return Symbol(self, sid)

    def by_id(self, sid: int) -> "Symbol":
        if not 0 <= sid <= len(self._tokens):
            raise IndexError(f"id {sid} out of range for alphabet {self.name}")
        return Symbol(self, sid)

    def token_of(self, sid: int) -> str:
        return EPSILON_TOKEN if sid == 0 else self._tokens[sid - 1]


class Symbol:
    """One interned symbol. Comparing symbols from different alphabets is
    a usage error and raises, rather than silently reading as unequal."""

    __slots__ = ("alphabet", "sid")

    def __init__(self, alphabet: Alphabet, sid: int):
        self.alphabet = alphabet
        self.sid = sid

    @property
    def is_empty(self) -> bool:
        return self.sid == 0

    @property
    def token(self) -> str:
        return self.alphabet.token_of(self.sid)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Symbol):
            return NotImplemented
        if other.alphabet is not self.alphabet:
            raise TypeError(
                f"cannot compare symbols from alphabets "
                f"{self.alphabet.name} and {other.alphabet.name}"
            )
        return self.sid == other.sid

    def __hash__(self) -> int:
        return hash((id(self.alphabet), self.sid))

    def __str__(self) -> str:
        return self.token

    def __repr__(self) -> str:
        return f"{self.alphabet.name}:{self.token}"


def make_alphabet(name: str, members: list[str] | tuple[str, ...]) -> Alphabet:
    """Create an alphabet from non-empty member tokens; the empty symbol is
    appended implicitly."""
    if not name or any(ch in _FORBIDDEN for ch in name):
        raise ValueError(f"bad alphabet name {name!r}")
    if not members:
        raise ValueError(f"alphabet {name} needs at least one member")
    seen = set()
    for tok in members:
        if not tok or tok == EPSILON_TOKEN or any(ch in _FORBIDDEN for ch in tok):
            raise ValueError(f"bad member token {tok!r} in alphabet {name}")
        if tok in seen:
            raise ValueError(f"duplicate member {tok!r} in alphabet {name}")
        seen.add(tok)
    return Alphabet(name, tuple(members))

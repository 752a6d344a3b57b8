"""Per-location numeric loops, in two interchangeable backends.

The similarity, modulation and excitation-update loops are the only hot
code at large memory sizes, so they carry numba ``@njit`` versions with
pure-numpy twins. Selection: the ``EMSIM_KERNELS`` environment variable
(``numba`` or ``numpy``), defaulting to numba when importable and numpy
otherwise. Both paths accumulate in the same index order, so results are
bit-identical and traces do not depend on the backend.

Array conventions: ``gx`` is int32 of shape (m, capacity) holding symbol
ids with 0 meaning the empty symbol, ``x`` is int32 of shape (m,),
``wx``/``s``/``se``/``e`` are float64.
"""

from __future__ import annotations

import os

import numpy as np

try:
    from numba import njit

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without the extra
    HAS_NUMBA = False


# ---------------------------------------------------------------- numpy ----

def _decode_numpy(gx: np.ndarray, x: np.ndarray, wx: np.ndarray, nw: int) -> np.ndarray:
    s = np.zeros(gx.shape[1])
    if nw:
        acc = np.zeros(nw)
        for j in range(gx.shape[0]):  # fixed j order, matches the jit loop
            col = gx[j, :nw]
            acc = acc + wx[j] * ((col == x[j]) & (col != 0))
        s[:nw] = acc
    return s


def _modulate_numpy(s: np.ndarray, e: np.ndarray, a: float) -> np.ndarray:
    return s * (1.0 + a * e)


def _next_e_numpy(s: np.ndarray, e: np.ndarray, c: float) -> np.ndarray:
    return np.where(s > e, s, c * e)


def _max_written_numpy(se: np.ndarray, nw: int) -> float:
    return float(np.max(se[:nw])) if nw else 0.0


# ---------------------------------------------------------------- numba ----

def _decode_loops(gx, x, wx, nw):
    s = np.zeros(gx.shape[1])
    for i in range(nw):
        acc = 0.0
        for j in range(gx.shape[0]):
            if gx[j, i] == x[j] and gx[j, i] != 0:
                acc += wx[j]
        s[i] = acc
    return s


def _modulate_loops(s, e, a):
    out = np.empty(s.shape[0])
    for i in range(s.shape[0]):
        out[i] = s[i] * (1.0 + a * e[i])
    return out


def _next_e_loops(s, e, c):
    out = np.empty(e.shape[0])
    for i in range(e.shape[0]):
        if s[i] > e[i]:
            out[i] = s[i]
        else:
            out[i] = c * e[i]
    return out


def _max_written_loops(se, nw):
    m = 0.0
    for i in range(nw):
        if se[i] > m:
            m = se[i]
    return m


_BACKENDS: dict[str, dict] = {
    "numpy": {
        "decode": _decode_numpy,
        "modulate": _modulate_numpy,
        "next_e": _next_e_numpy,
        "max_written": _max_written_numpy,
    }
}

if HAS_NUMBA:
    _jit = njit(cache=True)
    _BACKENDS["numba"] = {
        "decode": _jit(_decode_loops),
        "modulate": _jit(_modulate_loops),
        "next_e": _jit(_next_e_loops),
        "max_written": _jit(_max_written_loops),
    }


def available_backends() -> tuple[str, ...]:
    return tuple(sorted(_BACKENDS))


def _default_backend() -> str:
    name = os.environ.get("EMSIM_KERNELS")
    if name is None:
        return "numba" if HAS_NUMBA else "numpy"
    if name not in _BACKENDS:
        raise RuntimeError(
            f"EMSIM_KERNELS={name!r} but available backends are {available_backends()}"
        )
    return name


_active = _default_backend()


def get_backend() -> str:
    return _active


def set_backend(name: str) -> None:
    if name not in _BACKENDS:
        raise ValueError(f"unknown backend {name!r}; available: {available_backends()}")
    global _active
    _active = name


def decode(gx: np.ndarray, x: np.ndarray, wx: np.ndarray, nw: int) -> np.ndarray:
    """Similarity of input x against the first nw recorded locations."""
    return _BACKENDS[_active]["decode"](gx, x, wx, nw)


def modulate(s: np.ndarray, e: np.ndarray, a: float) -> np.ndarray:
    """Excitation-modulated similarity: se = s * (1 + a*e)."""
    return _BACKENDS[_active]["modulate"](s, e, a)


def next_e(s: np.ndarray, e: np.ndarray, c: float) -> np.ndarray:
    """Charge each location to s when s exceeds e, else decay e by c."""
    return _BACKENDS[_active]["next_e"](s, e, c)


def max_written(se: np.ndarray, nw: int) -> float:
    """Maximum of se over recorded locations, 0.0 when none recorded."""
    return _BACKENDS[_active]["max_written"](se, nw)


def warmup() -> str:
    """Run every kernel once on tiny inputs; returns the active backend.

    With the numba backend this forces JIT compilation (or cache load) so
    that timed runs do not pay it.
    """
    gx = np.zeros((2, 2), dtype=np.int32)
    gx[0, 0] = 1
    x = np.ones(2, dtype=np.int32)
    wx = np.ones(2)
    s = decode(gx, x, wx, 1)
    e = np.zeros(2)
    se = modulate(s, e, 0.5)
    next_e(s, e, 0.5)
    max_written(se, 1)
    return _active

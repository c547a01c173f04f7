"""Matrix-free Grover walk on arc space.

One step is ``U = S (2 K^* K - I)``: at every non-leaf vertex the
amplitudes of the incoming arcs are reflected about their mean
(``2/deg * sum - amplitude``), amplitudes entering a leaf are negated,
and then every arc swaps amplitude with its inverse.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Union

import numpy as np

from .graph import Graph, WedgeGraph

__all__ = [
    "ProbabilityCurve",
    "uniform_initial",
    "step",
    "evolve",
    "finding_probability",
    "curve",
    "materialize_U",
    "materialize_K",
    "materialize_S",
    "MAX_DENSE_ARCS",
]

MAX_DENSE_ARCS = 5000

Walkable = Union[Graph, WedgeGraph]


@dataclass(frozen=True)
class ProbabilityCurve:
    """Finding probability ``p[t]`` for ``t = 0 .. len(p) - 1``."""

    p: np.ndarray

    @property
    def t(self) -> np.ndarray:
        return np.arange(len(self.p))

    @property
    def t_max(self) -> int:
        return len(self.p) - 1

    def argmax(self, start: int = 0, stop: int | None = None) -> int:
        stop = len(self.p) if stop is None else min(stop, len(self.p))
        return start + int(np.argmax(self.p[start:stop]))

    def window(self, lo: float, hi: float) -> slice:
        """Integer steps ``ceil(lo) .. floor(hi)`` clipped to the curve."""
        a = max(0, int(np.ceil(lo)))
        b = min(len(self.p), int(np.floor(hi)) + 1)
        return slice(a, b)

    def __len__(self):
        return len(self.p)


def _parts(w: Walkable) -> tuple[Graph, np.ndarray]:
    if isinstance(w, WedgeGraph):
        return w.graph, w.leaf_mask
    return w, np.zeros(w.vertex_count, dtype=bool)


@lru_cache(maxsize=32)
def _operator(w: Walkable):
    g, leaves = _parts(w)
    deg = g.degree.astype(float)
    coef = np.where(leaves, 0.0, 2.0 / deg)
    return g.terminus, g.inverse, coef[g.terminus], g.vertex_count


def uniform_initial(w: WedgeGraph) -> np.ndarray:
    """Uniform superposition over the arcs of the first component."""
    if w.first_arc_count == 0:
        raise ValueError("first component has no arcs")
    psi = np.zeros(w.arc_count, dtype=complex)
    psi[: w.first_arc_count] = 1.0 / np.sqrt(w.first_arc_count)
    return psi


def step(w: Walkable, s: np.ndarray) -> np.ndarray:
    """Apply the Grover walk operator once."""
    terminus, inverse, coef, nv = _operator(w)
    if s.shape != terminus.shape:
        raise ValueError(f"state has {s.shape} entries, graph has {terminus.size} arcs")
    sums = np.bincount(terminus, weights=s.real, minlength=nv) + 1j * np.bincount(
        terminus, weights=s.imag, minlength=nv
    )
    coined = coef * sums[terminus] - s
    return coined[inverse]


def evolve(w: Walkable, s: np.ndarray, t: int) -> np.ndarray:
    if t < 0:
        raise ValueError("t must be nonnegative")
    s = np.asarray(s, dtype=complex)
    for _ in range(t):
        s = step(w, s)
    return s


def finding_probability(s: np.ndarray, target) -> float:
    """Sum of squared amplitudes over ``target`` (an index array or boolean mask)."""
    return float(np.sum(np.abs(s[target]) ** 2))


def curve(w: WedgeGraph, t_max: int, target=None) -> ProbabilityCurve:
    """Finding probability of ``target`` (default: the second component) for t = 0..t_max."""
    if t_max < 0:
        raise ValueError("t_max must be nonnegative")
    target = w.in_second if target is None else target
    s = uniform_initial(w)
    p = np.empty(t_max + 1)
    for t in range(t_max + 1):
        if t:
            s = step(w, s)
        p[t] = finding_probability(s, target)
    return ProbabilityCurve(p)


def _check_dense(g: Graph):
    if g.arc_count > MAX_DENSE_ARCS:
        raise ValueError(f"{g.arc_count} arcs exceeds the dense cap of {MAX_DENSE_ARCS}")


def materialize_S(w: Walkable) -> np.ndarray:
    g, _ = _parts(w)
    _check_dense(g)
    S = np.zeros((g.arc_count, g.arc_count))
    S[g.inverse, np.arange(g.arc_count)] = 1.0
    return S


def materialize_K(w: Walkable) -> np.ndarray:
    """Boundary matrix, one row per non-leaf vertex (rows vanish at leaves and are dropped)."""
    g, leaves = _parts(w)
    _check_dense(g)
    K = np.zeros((g.vertex_count, g.arc_count))
    K[g.terminus, np.arange(g.arc_count)] = 1.0 / np.sqrt(g.degree[g.terminus])
    return K[~leaves]


def materialize_U(w: Walkable) -> np.ndarray:
    """Dense ``S (2 K^* K - I)``; small graphs only."""
    K = materialize_K(w)
    S = materialize_S(w)
    return (S @ (2.0 * K.T @ K - np.eye(S.shape[0]))).astype(complex)

"""Exact reduction of the Johnson-star walk to the distance-class subspace.

Vertices of J(n,k) ^ S_m fall into classes by distance from the glued
vertex v*: X_0 = {v*}, X_j = j steps away (j = 1..k), and X_{-1} holds
the m star leaves. Arcs fall into classes by the classes of their
endpoints:

    A_j : X_j -> X_j        B_j : X_j -> X_{j+1}      C_j : X_j -> X_{j-1}
    S_+ : X_{-1} -> X_0     S_- : X_0 -> X_{-1}

The normalized class indicators span a (3k+2)-dimensional subspace that
the walk leaves invariant, which makes all Johnson-star computations
independent of n.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple, Union

import numpy as np

from .graph import WedgeGraph
from .walk import ProbabilityCurve, step

__all__ = [
    "ClassDecomposition",
    "TransitionMatrix",
    "StationaryMeasure",
    "ArcClass",
    "ReducedWalk",
    "intersection_numbers",
    "decompose",
    "build_T",
    "stationary",
    "vertex_uniform_stationary",
    "lumped_chain",
    "symmetrize",
    "arc_classes",
    "class_size",
    "class_prob",
    "m_weight",
    "build_reduced_walk",
    "reduced_initial",
    "reduced_evolve",
    "reduced_curve",
    "embed_classes",
    "vertex_classes",
    "conjugate_walk",
    "MAX_EMBED_ARCS",
]

MAX_EMBED_ARCS = 50_000


@dataclass(frozen=True)
class ClassDecomposition:
    """Class sizes and intersection numbers of J(n,k) ^ S_m.

    ``sizes[j + 1]`` is |X_j| for j = -1..k. ``a[j]``, ``b[j]``, ``c[j]``
    count the neighbours a vertex of X_j has in X_j, X_{j+1} and X_{j-1}.
    """

    n: int
    k: int
    m: int
    d: int
    sizes: tuple[int, ...]
    a: tuple[int, ...]
    b: tuple[int, ...]
    c: tuple[int, ...]

    def size(self, j: int) -> int:
        return self.sizes[j + 1]

    @property
    def N(self) -> int:
        return math.comb(self.n, self.k)

    @property
    def johnson_arcs(self) -> int:
        return self.d * self.N


def intersection_numbers(n: int, k: int):
    """``(d, |X_0..X_k|, a, b, c)`` for J(n,k); valid whenever k <= n - k."""
    d = k * (n - k)
    sizes = tuple(math.comb(k, j) * math.comb(n - k, j) for j in range(k + 1))
    a = tuple(j * (n - 2 * j) for j in range(k + 1))
    b = tuple((k - j) * (n - k - j) for j in range(k + 1))
    c = tuple(j * j for j in range(k + 1))
    return d, sizes, a, b, c


def decompose(n: int, k: int, m: int) -> ClassDecomposition:
    if k < 1 or m < 1 or n <= 2 * k:
        raise ValueError(f"(n, k, m) = ({n}, {k}, {m}) needs k >= 1, m >= 1, n > 2k")
    d, sizes, a, b, c = intersection_numbers(n, k)
    return ClassDecomposition(n, k, m, d, (m,) + sizes, a, b, c)


@dataclass(frozen=True)
class TransitionMatrix:
    """Class-to-class random walk on X_0..X_k; row 0 leaks m/(d+m) to the leaves."""

    dec: ClassDecomposition
    matrix: np.ndarray

    @property
    def x(self) -> float:
        return self.dec.d / (self.dec.d + self.dec.m)

    @property
    def p(self) -> np.ndarray:
        return np.array(self.dec.c, dtype=float) / self.dec.d

    @property
    def q(self) -> np.ndarray:
        return np.array(self.dec.b, dtype=float) / self.dec.d

    @property
    def r(self) -> np.ndarray:
        return np.array(self.dec.a, dtype=float) / self.dec.d


def build_T(dec: ClassDecomposition) -> TransitionMatrix:
    k, d, m = dec.k, dec.d, dec.m
    T = np.zeros((k + 1, k + 1))
    T[0, 1] = d / (d + m)
    for j in range(1, k + 1):
        T[j, j - 1] = dec.c[j] / d
        T[j, j] = dec.a[j] / d
        if j < k:
            T[j, j + 1] = dec.b[j] / d
    return TransitionMatrix(dec, T)


@dataclass(frozen=True)
class StationaryMeasure:
    """Probability vector over classes -1..k; ``mu[j]`` is the mass of X_j."""

    values: np.ndarray

    def __getitem__(self, j: int) -> float:
        return float(self.values[j + 1])

    @property
    def interior(self) -> np.ndarray:
        """Masses of X_0..X_k (the classes T acts on)."""
        return self.values[1:]


def stationary(dec: ClassDecomposition) -> StationaryMeasure:
    """Degree-proportional measure: leaf 1, v* d+m, other Johnson vertices d each."""
    raw = np.array(
        [dec.m, dec.d + dec.m] + [dec.d * dec.size(j) for j in range(1, dec.k + 1)], dtype=float
    )
    total = 2 * dec.m + dec.d * dec.N
    return StationaryMeasure(raw / total)


def vertex_uniform_stationary(dec: ClassDecomposition) -> StationaryMeasure:
    """The measure with v* weighted like every other Johnson vertex (mass d).

    Satisfies detailed balance inside the Johnson part but is off by a
    factor (d+m)/d at the star edge; kept for comparison only.
    """
    total = dec.m + dec.johnson_arcs
    raw = [dec.m] + [dec.d * dec.size(j) for j in range(dec.k + 1)]
    return StationaryMeasure(np.array(raw, dtype=float) / total)


def lumped_chain(dec: ClassDecomposition) -> np.ndarray:
    """Stochastic (k+2)x(k+2) class chain including the leaf class (index 0 = X_{-1})."""
    k, d, m = dec.k, dec.d, dec.m
    P = np.zeros((k + 2, k + 2))
    P[0, 1] = 1.0
    P[1, 0] = m / (d + m)
    P[1:, 1:] = build_T(dec).matrix
    return P


def symmetrize(T: TransitionMatrix, pi: StationaryMeasure | None = None) -> np.ndarray:
    """``D^{1/2} T D^{-1/2}`` with D the measure restricted to X_0..X_k."""
    pi = stationary(T.dec) if pi is None else pi
    w = pi.interior
    if np.any(w <= 0):
        raise ValueError("measure must be strictly positive on X_0..X_k")
    s = np.sqrt(w)
    return s[:, None] * T.matrix / s[None, :]


class ArcClass(NamedTuple):
    """Arc class label: kind in {"A", "B", "C", "S+", "S-"} and class index j."""

    kind: str
    j: int = 0

    @property
    def origin(self) -> int:
        return -1 if self.kind == "S+" else self.j

    @property
    def terminus(self) -> int:
        if self.kind == "B":
            return self.j + 1
        if self.kind == "C":
            return self.j - 1
        if self.kind == "S-":
            return -1
        return self.j

    @property
    def inverse(self) -> "ArcClass":
        if self.kind == "B":
            return ArcClass("C", self.j + 1)
        if self.kind == "C":
            return ArcClass("B", self.j - 1)
        if self.kind == "S+":
            return ArcClass("S-")
        if self.kind == "S-":
            return ArcClass("S+")
        return self

    @property
    def label(self) -> str:
        return self.kind if self.kind.startswith("S") else f"{self.kind}{self.j}"

    @classmethod
    def parse(cls, label: Union[str, "ArcClass"]) -> "ArcClass":
        if isinstance(label, ArcClass):
            return label
        if label in ("S+", "S-"):
            return cls(label)
        if len(label) >= 2 and label[0] in "ABC" and label[1:].isdigit():
            return cls(label[0], int(label[1:]))
        raise ValueError(f"unknown arc class {label!r}")


def arc_classes(k: int) -> list[ArcClass]:
    """Nonempty arc classes in basis order A_1..A_k, B_0..B_{k-1}, C_1..C_k, S_+, S_-."""
    return (
        [ArcClass("A", j) for j in range(1, k + 1)]
        + [ArcClass("B", j) for j in range(k)]
        + [ArcClass("C", j) for j in range(1, k + 1)]
        + [ArcClass("S+"), ArcClass("S-")]
    )


def _check_label(W: ArcClass, dec: ClassDecomposition) -> ArcClass:
    if W.kind not in ("A", "B", "C", "S+", "S-") or not 0 <= W.j <= dec.k:
        raise ValueError(f"unknown arc class {W!r}")
    if W in (ArcClass("A", 0), ArcClass("B", dec.k), ArcClass("C", 0)):
        raise ValueError(f"arc class {W.label} is empty")
    return W


def class_size(W, dec: ClassDecomposition) -> int:
    W = _check_label(ArcClass.parse(W), dec)
    if W.kind.startswith("S"):
        return dec.m
    coeff = {"A": dec.a, "B": dec.b, "C": dec.c}[W.kind]
    return coeff[W.j] * dec.size(W.j)


def class_prob(W, dec: ClassDecomposition) -> float:
    """Probability that the class random walk moves from o(W) to t(W)."""
    W = _check_label(ArcClass.parse(W), dec)
    d, m = dec.d, dec.m
    if W.kind == "S+":
        return 1.0
    if W.kind == "S-":
        return m / (d + m)
    if W.kind == "B" and W.j == 0:
        return d / (d + m)
    coeff = {"A": dec.a, "B": dec.b, "C": dec.c}[W.kind]
    return coeff[W.j] / d


def m_weight(W, pi: StationaryMeasure, dec: ClassDecomposition) -> float:
    """Probability flow ``pi[o(W)] * p(W)`` across class W."""
    W = ArcClass.parse(W)
    return pi[W.origin] * class_prob(W, dec)


@dataclass(frozen=True, eq=False)
class ReducedWalk:
    """The walk restricted to the span of normalized arc-class indicators."""

    dec: ClassDecomposition
    labels: tuple[ArcClass, ...]
    K: np.ndarray
    S: np.ndarray

    @cached_property
    def U(self) -> np.ndarray:
        dim = len(self.labels)
        return self.S @ (2.0 * self.K.T @ self.K - np.eye(dim))

    @property
    def dim(self) -> int:
        return len(self.labels)

    def index(self, W) -> int:
        return self.labels.index(ArcClass.parse(W))


def build_reduced_walk(dec: ClassDecomposition) -> ReducedWalk:
    labels = tuple(arc_classes(dec.k))
    pos = {W: i for i, W in enumerate(labels)}
    K = np.zeros((dec.k + 1, len(labels)))
    S = np.zeros((len(labels), len(labels)))
    for i, W in enumerate(labels):
        if W.terminus >= 0:
            K[W.terminus, i] = math.sqrt(class_prob(W.inverse, dec))
        S[pos[W.inverse], i] = 1.0
    return ReducedWalk(dec, labels, K, S)


def reduced_initial(dec: ClassDecomposition, rw: ReducedWalk | None = None) -> np.ndarray:
    """Class components of the uniform superposition on Johnson arcs."""
    labels = arc_classes(dec.k) if rw is None else rw.labels
    total = dec.johnson_arcs
    psi = np.zeros(len(labels), dtype=complex)
    for i, W in enumerate(labels):
        if not W.kind.startswith("S"):
            psi[i] = math.sqrt(class_size(W, dec) / total)
    return psi


def reduced_evolve(rw: ReducedWalk, psi: np.ndarray, t: int) -> np.ndarray:
    if t < 0:
        raise ValueError("t must be nonnegative")
    for _ in range(t):
        psi = rw.U @ psi
    return psi


def reduced_curve(dec: ClassDecomposition, t_max: int) -> ProbabilityCurve:
    """Probability on the star arcs, ``|psi(S_+)|^2 + |psi(S_-)|^2``, for t = 0..t_max."""
    if t_max < 0:
        raise ValueError("t_max must be nonnegative")
    rw = build_reduced_walk(dec)
    psi = reduced_initial(dec, rw)
    sp, sm = rw.index("S+"), rw.index("S-")
    p = np.empty(t_max + 1)
    for t in range(t_max + 1):
        if t:
            psi = rw.U @ psi
        p[t] = abs(psi[sp]) ** 2 + abs(psi[sm]) ** 2
    return ProbabilityCurve(p)


def vertex_classes(w: WedgeGraph) -> np.ndarray:
    """Class index of every vertex of a Johnson-star wedge (-1 for leaves)."""
    g = w.graph
    dist = g.distances_from(w.v_star)
    cls = np.where(np.isfinite(dist), dist, -2).astype(int)
    cls[w.leaf_mask] = -1
    if np.any(cls < -1):
        raise ValueError("graph is not connected")
    return cls


def embed_classes(w: WedgeGraph) -> tuple[np.ndarray, tuple[ArcClass, ...]]:
    """Isometry from the class basis into arc space, built on the explicit graph.

    Returns the ``|A| x (3k+2)`` matrix of normalized class indicators and
    the basis labels (same order as :func:`build_reduced_walk`).
    """
    if not w.params or not {"n", "k", "m"} <= set(w.params):
        raise ValueError("embed_classes needs a Johnson-star wedge with (n, k, m) params")
    g = w.graph
    if g.arc_count > MAX_EMBED_ARCS:
        raise ValueError(f"{g.arc_count} arcs exceeds the cap of {MAX_EMBED_ARCS}")
    dec = decompose(w.params["n"], w.params["k"], w.params["m"])
    cls = vertex_classes(w)
    co, ct = cls[g.origin], cls[g.terminus]
    labels = tuple(arc_classes(dec.k))
    B = np.zeros((g.arc_count, len(labels)))
    for i, W in enumerate(labels):
        members = (co == W.origin) & (ct == W.terminus)
        count = int(members.sum())
        if count != class_size(W, dec):
            raise ValueError(f"class {W.label} has {count} arcs, expected {class_size(W, dec)}")
        B[members, i] = 1.0 / math.sqrt(count)
    covered = B.any(axis=1)
    if not covered.all():
        raise ValueError("some arcs fall outside every class")
    return B, labels


def conjugate_walk(w: WedgeGraph, B: np.ndarray) -> np.ndarray:
    """``B^* U B`` computed with the matrix-free step."""
    UB = np.column_stack([step(w, B[:, i].astype(complex)) for i in range(B.shape[1])])
    return B.T @ UB

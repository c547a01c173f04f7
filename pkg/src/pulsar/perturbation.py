"""Kato's perturbation series for the eigenvalue of T(eps) that starts at 1.

With ``eps = 1/d`` the class matrix expands as
``T(eps) = T0 + eps*T1 + eps^2*T2 + ...``. ``T0`` is upper bidiagonal with
the simple eigenvalue 1 at class k, so the eigenvalue branch through 1 has
a convergent series whose coefficients are traces of products of the
``T_nu`` and powers of the reduced resolvent. Matrices are kept as numpy
object arrays of :class:`fractions.Fraction` when exact arithmetic is
requested, so vanishing coefficients vanish exactly.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator

import numpy as np

__all__ = [
    "SeriesExpansion",
    "UnperturbedEigensystem",
    "KatoOperators",
    "expand_T",
    "t0_eigensystem",
    "reduced_resolvent",
    "kato_lambda",
    "kato_coefficients",
    "lambda_series",
    "trace_series",
    "leading_coefficient",
    "positive_compositions",
    "weak_compositions",
]

EXACT_MAX_K = 4


def _zeros(k: int, exact: bool) -> np.ndarray:
    if exact:
        return np.full((k + 1, k + 1), Fraction(0), dtype=object)
    return np.zeros((k + 1, k + 1))


def _identity(k: int, exact: bool) -> np.ndarray:
    I = _zeros(k, exact)
    for j in range(k + 1):
        I[j, j] = Fraction(1) if exact else 1.0
    return I


def _num(value, exact: bool):
    return Fraction(value) if exact else float(value)


@dataclass
class SeriesExpansion:
    """Terms ``T^(q)`` of the expansion of the class matrix in ``eps = 1/d``."""

    k: int
    m: int
    q_max: int
    exact: bool = True
    _cache: dict = field(default_factory=dict, repr=False)

    def term(self, q: int) -> np.ndarray:
        if q < 0:
            raise ValueError("order must be nonnegative")
        if q not in self._cache:
            self._cache[q] = self._build(q)
        return self._cache[q]

    def _build(self, q: int) -> np.ndarray:
        k, m, ex = self.k, self.m, self.exact
        T = _zeros(k, ex)
        if q == 0:
            for j in range(k + 1):
                T[j, j] = _num(Fraction(j, k), ex)
                if j < k:
                    T[j, j + 1] = _num(1 - Fraction(j, k), ex)
        elif q == 1:
            T[0, 1] = _num(-m, ex)
            for j in range(1, k + 1):
                T[j, j] = _num(j * (k - 2 * j), ex)
                T[j, j - 1] = _num(j * j, ex)
                if j < k:
                    T[j, j + 1] = _num(j * (j - k), ex)
        else:
            T[0, 1] = _num((-m) ** q, ex)
        return T

    @property
    def terms(self) -> list[np.ndarray]:
        return [self.term(q) for q in range(self.q_max + 1)]

    def reconstruct(self, eps: float, order: int | None = None) -> np.ndarray:
        """Float partial sum ``sum_{q <= order} eps^q T^(q)``."""
        order = self.q_max if order is None else order
        total = np.zeros((self.k + 1, self.k + 1))
        for q in range(order + 1):
            total += eps**q * self.term(q).astype(float)
        return total


def expand_T(k: int, m: int, q_max: int, exact: bool | None = None) -> SeriesExpansion:
    if k < 1 or m < 1 or q_max < 1:
        raise ValueError("need k >= 1, m >= 1, q_max >= 1")
    exact = k <= EXACT_MAX_K if exact is None else exact
    return SeriesExpansion(k, m, q_max, exact)


@dataclass(frozen=True)
class UnperturbedEigensystem:
    """Eigenvalues ``j/k`` of ``T0`` with right vectors ``u[j]`` and left vectors ``v[j]``."""

    k: int
    eigenvalues: tuple
    u: tuple
    v: tuple
    normalizers: tuple


def t0_eigensystem(k: int, exact: bool = True) -> UnperturbedEigensystem:
    if k < 1:
        raise ValueError("k must be >= 1")
    us, vs, eigs, norms = [], [], [], []
    for j in range(k + 1):
        u = np.array([Fraction(math.comb(j, r), math.comb(k, r)) for r in range(k + 1)], dtype=object)
        v = np.array(
            [Fraction((-1) ** (r - j) * math.comb(k - j, r - j)) if r >= j else Fraction(0)
             for r in range(k + 1)],
            dtype=object,
        )
        if not exact:
            u, v = u.astype(float), v.astype(float)
        us.append(u)
        vs.append(v)
        eigs.append(_num(Fraction(j, k), exact))
        norms.append(v @ u)
    return UnperturbedEigensystem(k, tuple(eigs), tuple(us), tuple(vs), tuple(norms))


@dataclass
class KatoOperators:
    """Eigenprojection ``P`` of ``T0`` at 1 and the reduced resolvent ``S``."""

    k: int
    P: np.ndarray
    S: np.ndarray
    exact: bool
    _powers: dict = field(default_factory=dict, repr=False)

    def power(self, omega: int) -> np.ndarray:
        """``S^(omega)``: ``-P`` for 0, ``S^omega`` for positive, zero for negative."""
        if omega < 0:
            return _zeros(self.k, self.exact)
        if omega == 0:
            return -self.P
        if omega not in self._powers:
            self._powers[omega] = self.S if omega == 1 else self.power(omega - 1) @ self.S
        return self._powers[omega]


def reduced_resolvent(k: int, exact: bool | None = None) -> KatoOperators:
    exact = k <= EXACT_MAX_K if exact is None else exact
    eig = t0_eigensystem(k, exact)
    P = np.outer(eig.u[k], eig.v[k])
    S = _zeros(k, exact)
    for j in range(k):
        weight = _num(math.comb(k, j), exact) / (1 - eig.eigenvalues[j])
        S = S - weight * np.outer(eig.u[j], eig.v[j])
    return KatoOperators(k, P, S, exact)


def positive_compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """Ordered tuples of ``parts`` integers >= 1 summing to ``total``, lexicographic."""
    for cuts in itertools.combinations(range(1, total), parts - 1):
        bounds = (0,) + cuts + (total,)
        yield tuple(b - a for a, b in zip(bounds, bounds[1:]))


def weak_compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """Ordered tuples of ``parts`` integers >= 0 summing to ``total``."""
    for bars in itertools.combinations(range(total + parts - 1), parts - 1):
        bounds = (-1,) + bars + (total + parts - 1,)
        yield tuple(b - a - 1 for a, b in zip(bounds, bounds[1:]))


def kato_lambda(n: int, expansion: SeriesExpansion, ops: KatoOperators):
    """Order-``n`` coefficient of the eigenvalue branch through 1.

    Sums ``(-1)^p / p * Tr(T^(nu_1) S^(w_1) ... T^(nu_p) S^(w_p))`` over
    ``p = 1..n``, ``nu_i >= 1`` summing to ``n`` and ``w_i >= 0`` summing
    to ``p - 1``. Terms with a negative ``w_i`` vanish and are skipped.
    """
    k = expansion.k
    if n < 1:
        raise ValueError("order must be >= 1")
    if k > 5 and n > k + 2:
        raise ValueError(f"order {n} too large for k = {k} (limit k + 2)")
    exact = expansion.exact and ops.exact
    total = Fraction(0) if exact else 0.0
    for p in range(1, n + 1):
        acc = Fraction(0) if exact else 0.0
        for nus in positive_compositions(n, p):
            for omegas in weak_compositions(p - 1, p):
                M = _identity(k, exact)
                for nu, om in zip(nus, omegas):
                    M = M @ expansion.term(nu) @ ops.power(om)
                acc += np.trace(M)
        total += Fraction((-1) ** p, p) * acc if exact else (-1) ** p / p * acc
    return total


def kato_coefficients(k: int, m: int, n_max: int, exact: bool | None = None) -> list:
    """``[lambda^(1), ..., lambda^(n_max)]``."""
    expansion = expand_T(k, m, n_max, exact)
    ops = reduced_resolvent(k, expansion.exact)
    return [kato_lambda(n, expansion, ops) for n in range(1, n_max + 1)]


def leading_coefficient(k: int, m: int) -> int:
    """Closed form of the first nonzero coefficient, at order k+1."""
    return -m * math.factorial(k) * k**k


def lambda_series(eps: float, k: int, m: int) -> float:
    """Leading-order eigenvalue ``1 - m k! k^k eps^(k+1)``."""
    if not 0 < eps < 1 / (2 * k * k):
        raise ValueError(f"eps = {eps} outside (0, 1/(2k^2))")
    return 1.0 + leading_coefficient(k, m) * eps ** (k + 1)


def trace_series(eps: float, coefficients) -> float:
    """``1 + sum_n eps^n lambda^(n)`` for the given coefficient list."""
    return 1.0 + sum(float(c) * eps**n for n, c in enumerate(coefficients, start=1))

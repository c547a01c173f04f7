"""From the principal eigenpair of T to eigenvectors of the reduced walk.

An eigenvalue ``cos(theta)`` of the symmetrized class matrix J with unit
eigenvector g lifts to the pair of walk eigenvectors

    psi_pm = (K^* g - e^{+-i theta} S K^* g) / (sqrt(2) |sin theta|)

with eigenvalues ``e^{+-i theta}``. The uniform start overlaps these two
almost completely, so the star probability oscillates as sin^2(t theta).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .perturbation import leading_coefficient
from .reduction import (
    ClassDecomposition,
    ReducedWalk,
    StationaryMeasure,
    TransitionMatrix,
    m_weight,
    stationary,
    symmetrize,
)
from .walk import ProbabilityCurve

__all__ = [
    "PrincipalPair",
    "LiftedPair",
    "PulsationPrediction",
    "principal_eigenpair",
    "lift",
    "flow_components",
    "overlap",
    "two_mode_curve",
    "predict",
    "theta_series",
    "asymptotic_tau",
]

MIN_GAP = 1e-12


@dataclass(frozen=True)
class PrincipalPair:
    """Eigenvalue of T closest to (and below) 1 with its eigenvectors.

    ``f`` is the right eigenvector of T normalized so that
    ``sum_j pi_j f_j^2 = 1``; ``g = sqrt(pi) * f`` is the matching unit
    eigenvector of J.
    """

    lam: float
    theta: float
    f: np.ndarray
    g: np.ndarray
    pi: StationaryMeasure


def principal_eigenpair(T: TransitionMatrix, pi: StationaryMeasure | None = None) -> PrincipalPair:
    pi = stationary(T.dec) if pi is None else pi
    J = symmetrize(T, pi)
    J = 0.5 * (J + J.T)
    vals, vecs = np.linalg.eigh(J)
    below = vals < 1.0
    if not below.any():
        raise np.linalg.LinAlgError("no eigenvalue below 1")
    i = int(np.argmax(np.where(below, vals, -np.inf)))
    lam = float(vals[i])
    g = vecs[:, i]
    g = g if g.sum() >= 0 else -g
    f = g / np.sqrt(pi.interior)
    resid = np.linalg.norm(T.matrix @ f - lam * f)
    if resid > 1e-10 * np.linalg.norm(f):
        raise np.linalg.LinAlgError(f"eigenvector residual {resid:.3g} too large")
    return PrincipalPair(lam, math.acos(max(-1.0, min(1.0, lam))), f, g, pi)


@dataclass(frozen=True)
class LiftedPair:
    psi_plus: np.ndarray
    psi_minus: np.ndarray
    theta: float


def lift(pair: PrincipalPair, rw: ReducedWalk) -> LiftedPair:
    """Spectral-mapping eigenvectors of ``rw.U`` at ``e^{+-i theta}``."""
    if min(1.0 - pair.lam, 1.0 + pair.lam) < MIN_GAP:
        raise ValueError(f"theta = {pair.theta:.3g} too close to 0 or pi")
    s = abs(math.sin(pair.theta))
    kg = rw.K.T @ pair.g
    skg = rw.S @ kg
    out = []
    for sign in (1, -1):
        phase = np.exp(sign * 1j * pair.theta)
        out.append((kg - phase * skg) / (math.sqrt(2) * s))
    return LiftedPair(out[0], out[1], pair.theta)


def flow_components(pair: PrincipalPair, rw: ReducedWalk, sign: int = 1) -> dict:
    """Interior class components from the flow-weight formula.

    ``psi(W) = sqrt(M(W)) (f(t(W)) - e^{+-i theta} f(o(W))) / (sqrt(2) |sin theta|)``
    for every class with both endpoints in X_0..X_k.
    """
    phase = np.exp(sign * 1j * pair.theta)
    s = math.sqrt(2) * abs(math.sin(pair.theta))
    comps = {}
    for W in rw.labels:
        if W.origin < 0 or W.terminus < 0:
            continue
        M = m_weight(W, pair.pi, rw.dec)
        comps[W] = math.sqrt(M) * (pair.f[W.terminus] - phase * pair.f[W.origin]) / s
    return comps


def overlap(psi0: np.ndarray, lifted: LiftedPair) -> tuple[complex, complex]:
    """Expansion coefficients ``<psi_+|psi0>`` and ``<psi_-|psi0>``."""
    return complex(np.vdot(lifted.psi_plus, psi0)), complex(np.vdot(lifted.psi_minus, psi0))


def two_mode_curve(psi0: np.ndarray, lifted: LiftedPair, rw: ReducedWalk, t_max: int) -> ProbabilityCurve:
    """Star probability from the two lifted modes alone."""
    cp, cm = overlap(psi0, lifted)
    t = np.arange(t_max + 1)
    sp, sm = rw.index("S+"), rw.index("S-")
    ph = np.exp(1j * lifted.theta * t)
    p = np.zeros(t_max + 1)
    for idx in (sp, sm):
        amp = ph * cp * lifted.psi_plus[idx] + ph.conj() * cm * lifted.psi_minus[idx]
        p += np.abs(amp) ** 2
    return ProbabilityCurve(p)


def theta_series(dec: ClassDecomposition) -> float:
    """Small-eps rotation angle ``sqrt(2 m k^k k! eps^(k+1))``."""
    eps = 1.0 / dec.d
    return math.sqrt(-2 * leading_coefficient(dec.k, dec.m) * eps ** (dec.k + 1))


@dataclass(frozen=True)
class PulsationPrediction:
    theta: float
    tau: int
    theta_series: float
    tau_series: int

    def curve(self, t_max: int) -> ProbabilityCurve:
        t = np.arange(t_max + 1)
        return ProbabilityCurve(np.sin(t * self.theta) ** 2)


def predict(pair: PrincipalPair, dec: ClassDecomposition) -> PulsationPrediction:
    """``tau = floor(pi / (2 theta))`` from the exact angle, plus the leading-order version."""
    if pair.theta <= 0:
        raise ValueError("theta must be positive")
    ts = theta_series(dec)
    return PulsationPrediction(
        pair.theta, math.floor(math.pi / (2 * pair.theta)), ts, math.floor(math.pi / (2 * ts))
    )


def asymptotic_tau(N: float, k: int, m: int) -> float:
    """Asymptotic optimal time ``pi sqrt(k (k!)^(1/k)) / (2 sqrt(2m)) * N^((1+1/k)/2)``.

    Derived with ``N ~ (k eps)^(-k) / k!``, so it is only accurate for n >> k.
    """
    if N < 2:
        raise ValueError("N must be >= 2")
    pref = math.pi * math.sqrt(k * math.factorial(k) ** (1 / k)) / (2 * math.sqrt(2 * m))
    return pref * N ** ((1 + 1 / k) / 2)

"""Acceptance battery shared by ``pulsar verify`` and the test suite.

Each check returns a :class:`CriterionResult`; tolerances are module
constants so the numbers a run is held to are visible in one place.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import graph as G
from .perturbation import kato_coefficients, lambda_series, leading_coefficient
from .reduction import (
    build_T,
    build_reduced_walk,
    conjugate_walk,
    decompose,
    embed_classes,
    intersection_numbers,
    reduced_curve,
    reduced_initial,
)
from .spectral import lift, overlap, predict, principal_eigenpair, two_mode_curve
from .experiments import scan
from .walk import curve, materialize_K, materialize_S, materialize_U, step

UNITARY_TOL = 1e-10
CLOSURE_TOL = 1e-10
CURVE_TOL = 1e-8
RESIDUAL_SPREAD = 4.0
PEAK_MIN = 0.8
PEAK_WINDOW = 0.15
TROUGH_MAX = 0.1
SECOND_PEAK_RATIO = 0.7
M_SCALING_TOL = 0.10
SLOPE_TOL = 0.05
EIGEN_RESIDUAL_TOL = 1e-8
OVERLAP_TOL = {(15, 2, 1): 0.05, (40, 2, 1): 0.02}
TWO_MODE_TOL = 0.05
PULSE_MIN = 0.5

BUDGET = {1: 10.0, 2: 60.0, 3: 60.0, 4: 300.0, 5: 10.0, 6: 30.0, 7: 300.0}


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    seconds: float = 0.0
    details: dict = field(default_factory=dict)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] criterion {self.number}: {self.name} ({self.seconds:.2f} s)"

    def to_dict(self) -> dict:
        return {"criterion": self.number, "name": self.name, "passed": self.passed,
                "seconds": round(self.seconds, 3), "details": self.details}


def _timed(number: int, name: str, fn) -> CriterionResult:
    start = time.perf_counter()
    passed, details = fn()
    elapsed = time.perf_counter() - start
    within = elapsed <= BUDGET[number]
    details["within_budget"] = within
    return CriterionResult(number, name, bool(passed and within), elapsed, details)


def structural() -> CriterionResult:
    def body():
        details, ok = {}, True
        for n, k, m in [(5, 2, 1), (6, 3, 2), (8, 2, 5)]:
            w = G.wedge(G.build_johnson(n, k, strict=False), 0, G.build_star(m), 0)
            S, K, U = materialize_S(w), materialize_K(w), materialize_U(w)
            errs = {
                "S2": float(np.abs(S @ S - np.eye(len(S))).max()),
                "KKt": float(np.abs(K @ K.T - np.eye(len(K))).max()),
                "UtU": float(np.abs(U.conj().T @ U - np.eye(len(U))).max()),
            }
            d, sizes, a, b, c = intersection_numbers(n, k)
            integer_ok = (
                all(a[j] + b[j] + c[j] == d for j in range(k + 1))
                and all(b[j] * sizes[j] == c[j + 1] * sizes[j + 1] for j in range(k))
                and sum(sizes) == math.comb(n, k)
            )
            ok &= max(errs.values()) <= UNITARY_TOL and integer_ok
            details[f"J({n},{k})^S_{m}"] = {**errs, "integer_identities": integer_ok}
        return ok, details
    return _timed(1, "structural identities", body)


def subspace_equivalence() -> CriterionResult:
    def body():
        w = G.johnson_star(8, 2, 2)
        B, _ = embed_classes(w)
        UB = np.column_stack([step(w, B[:, i].astype(complex)) for i in range(B.shape[1])])
        closure = float(np.linalg.norm(UB - B @ (B.T @ UB), 2))
        rw = build_reduced_walk(decompose(8, 2, 2))
        conj = float(np.abs(conjugate_walk(w, B) - rw.U).max())
        full = curve(G.johnson_star(10, 2, 2), 500).p
        red = reduced_curve(decompose(10, 2, 2), 500).p
        dev = float(np.abs(full - red).max())
        ok = closure <= CLOSURE_TOL and conj <= CLOSURE_TOL and dev <= CURVE_TOL
        return ok, {"closure": closure, "conjugation": conj, "curve_deviation": dev}
    return _timed(2, "invariant subspace and full-vs-reduced", body)


def perturbation_series() -> CriterionResult:
    def body():
        details, ok = {}, True
        for k in (1, 2, 3, 4):
            for m in (1, 5):
                coeffs = kato_coefficients(k, m, k + 1, exact=True)
                exact = all(isinstance(c, Fraction) for c in coeffs)
                vanish = all(c == 0 for c in coeffs[:k])
                lead = coeffs[k] == leading_coefficient(k, m)
                ok &= exact and vanish and lead
                details[f"k={k},m={m}"] = {"vanishing": vanish, "leading": str(coeffs[k])}
        for k in (1, 2):
            for m in (1, 5):
                ratios = []
                for n in (20, 40, 80, 160):
                    dec = decompose(n, k, m)
                    eps = 1.0 / dec.d
                    lam = principal_eigenpair(build_T(dec)).lam
                    ratios.append(abs(lam - lambda_series(eps, k, m)) / eps ** (k + 2))
                spread = max(ratios) / min(ratios)
                ok &= spread <= RESIDUAL_SPREAD
                details[f"residual k={k},m={m}"] = {"scaled": ratios, "spread": spread}
        return ok, details
    return _timed(3, "perturbation series", body)


def _pulse_battery(n, k, m):
    dec = decompose(n, k, m)
    theta = principal_eigenpair(build_T(dec)).theta
    tau = math.pi / (2 * theta)
    c = curve(G.johnson_star(n, k, m), int(math.ceil((3 + PEAK_WINDOW) * tau)) + 1)
    w1 = c.window((1 - PEAK_WINDOW) * tau, (1 + PEAK_WINDOW) * tau)
    w2 = c.window((2 - PEAK_WINDOW) * tau, (2 + PEAK_WINDOW) * tau)
    w3 = c.window((3 - PEAK_WINDOW) * tau, (3 + PEAK_WINDOW) * tau)
    t1 = c.argmax(w1.start, w1.stop)
    peak1 = float(c.p[t1])
    trough = float(c.p[w2].min())
    peak2 = float(c.p[w3].max())
    ok = peak1 >= PEAK_MIN and trough <= TROUGH_MAX and peak2 >= SECOND_PEAK_RATIO * peak1
    return ok, {"tau_hat": tau, "t_peak": t1, "peak": peak1, "trough": trough, "second_peak": peak2}


def finite_size_pulsation() -> CriterionResult:
    def body():
        details, ok = {}, True
        for k in (2, 3):
            runs = {}
            for m in (1, 5):
                good, info = _pulse_battery(15, k, m)
                ok &= good
                runs[m] = info
                details[f"J(15,{k})^S_{m}"] = info
            target = runs[1]["t_peak"] / math.sqrt(5)
            rel = abs(runs[5]["t_peak"] - target) / target
            ok &= rel <= M_SCALING_TOL
            details[f"m-scaling k={k}"] = rel
        return ok, details
    return _timed(4, "finite-size pulsation on J(15,k)", body)


SCAN_SETS = {1: (20, 40, 80, 160), 2: (20, 30, 40, 60), 3: (15, 20, 30, 40)}


def scaling() -> CriterionResult:
    def body():
        details, ok = {}, True
        for k, ns in SCAN_SETS.items():
            rep = scan(k, 1, ns)
            good = abs(rep.slope - rep.expected_slope) <= SLOPE_TOL
            ok &= good
            details[f"k={k}"] = {"n": list(ns), "slope": rep.slope, "expected": rep.expected_slope}
        return ok, details
    return _timed(5, "optimal-time scaling", body)


def spectral_mapping() -> CriterionResult:
    def body():
        details, ok = {}, True
        for n, k, m in [(15, 2, 1), (30, 2, 1), (40, 2, 1)]:
            dec = decompose(n, k, m)
            pair = principal_eigenpair(build_T(dec))
            rw = build_reduced_walk(dec)
            lp = lift(pair, rw)
            res = max(
                np.linalg.norm(rw.U @ lp.psi_plus - np.exp(1j * lp.theta) * lp.psi_plus),
                np.linalg.norm(rw.U @ lp.psi_minus - np.exp(-1j * lp.theta) * lp.psi_minus),
            )
            psi0 = reduced_initial(dec, rw)
            cp, cm = overlap(psi0, lp)
            info = {"residual": float(res), "overlap": [abs(cp), abs(cm)]}
            ok &= res <= EIGEN_RESIDUAL_TOL
            tol = OVERLAP_TOL.get((n, k, m))
            if tol is not None:
                ok &= max(abs(abs(cp) - 2**-0.5), abs(abs(cm) - 2**-0.5)) <= tol
            if (n, k, m) == (30, 2, 1):
                t_max = 3 * predict(pair, dec).tau
                dev = float(np.abs(two_mode_curve(psi0, lp, rw, t_max).p - reduced_curve(dec, t_max).p).max())
                info["two_mode_deviation"] = dev
                ok &= dev <= TWO_MODE_TOL
            details[f"({n},{k},{m})"] = info
        return ok, details
    return _timed(6, "spectral mapping and overlaps", body)


def has_pulse(p: np.ndarray, level: float = PULSE_MIN) -> bool:
    """Some running maximum >= level is later followed by a value <= half of it."""
    running = np.maximum.accumulate(p)
    return bool(np.any((running >= level) & (p <= running / 2)))


def other_graphs() -> CriterionResult:
    def body():
        q = G.wedge(G.build_hypercube(10), 0, G.build_star(1), 0)
        kk = G.wedge(G.build_complete(30), 0, G.build_complete(30), 0)
        pq = curve(q, 600).p
        pk = curve(kk, 200).p
        details = {
            "Q_10^S_1": {"max": float(pq.max()), "pulse": has_pulse(pq)},
            "K_30^K_30": {"max": float(pk.max()), "pulse": has_pulse(pk)},
        }
        return has_pulse(pq) and has_pulse(pk), details
    return _timed(7, "pulsation on Q_10^S_1 and K_30^K_30", body)


CRITERIA = {
    1: structural,
    2: subspace_equivalence,
    3: perturbation_series,
    4: finite_size_pulsation,
    5: scaling,
    6: spectral_mapping,
    7: other_graphs,
}


def verify(numbers=None) -> list[CriterionResult]:
    numbers = sorted(CRITERIA) if numbers is None else numbers
    return [CRITERIA[i]() for i in numbers]

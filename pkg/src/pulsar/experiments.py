"""Run configurations: build a composite graph, simulate, summarize."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np

from . import graph as G
from .perturbation import lambda_series
from .reduction import build_T, decompose, reduced_curve
from .spectral import predict, principal_eigenpair, asymptotic_tau
from .walk import ProbabilityCurve, curve

__all__ = [
    "RunConfig",
    "SummaryReport",
    "RunResult",
    "ScanReport",
    "run",
    "scan",
    "first_peak",
    "build_graph",
    "arc_count",
    "GRAPH_KINDS",
    "ENGINES",
    "MAX_FULL_ARCS",
]

GRAPH_KINDS = ("johnson-star", "hypercube-star", "complete-complete")
ENGINES = ("full", "reduced", "theory", "compare")
MAX_FULL_ARCS = 1_000_000


@dataclass(frozen=True)
class RunConfig:
    graph: str = "johnson-star"
    n: int = 15
    k: int = 2
    m: int = 1
    n2: Optional[int] = None
    t_max: int = 200
    engine: str = "full"
    theory_column: bool = False

    def validate(self) -> None:
        if self.graph not in GRAPH_KINDS:
            raise ValueError(f"unknown graph kind {self.graph!r}")
        if self.engine not in ENGINES:
            raise ValueError(f"unknown engine {self.engine!r}")
        if self.t_max < 0:
            raise ValueError("t_max must be nonnegative")
        johnson = self.graph == "johnson-star"
        if not johnson and (self.engine != "full" or self.theory_column):
            raise ValueError(f"engine {self.engine!r} and the theory column need --graph johnson-star")
        if johnson:
            decompose(self.n, self.k, self.m)
        elif self.graph == "hypercube-star":
            if not 1 <= self.n <= G.MAX_HYPERCUBE_DIM or self.m < 1:
                raise ValueError("hypercube-star needs 1 <= n <= 20 and m >= 1")
        else:
            if self.n < 2 or self.n2 is None or self.n2 < 2:
                raise ValueError("complete-complete needs n >= 2 and n2 >= 2")
        if self.engine in ("full", "compare") and arc_count(self) > MAX_FULL_ARCS:
            raise ValueError(f"{arc_count(self)} arcs exceeds the full-engine cap of {MAX_FULL_ARCS}")


def arc_count(cfg: RunConfig) -> int:
    if cfg.graph == "johnson-star":
        return math.comb(cfg.n, cfg.k) * cfg.k * (cfg.n - cfg.k) + 2 * cfg.m
    if cfg.graph == "hypercube-star":
        return cfg.n * 2**cfg.n + 2 * cfg.m
    return cfg.n * (cfg.n - 1) + cfg.n2 * (cfg.n2 - 1)


def build_graph(cfg: RunConfig) -> G.WedgeGraph:
    if cfg.graph == "johnson-star":
        return G.johnson_star(cfg.n, cfg.k, cfg.m)
    if cfg.graph == "hypercube-star":
        return G.wedge(G.build_hypercube(cfg.n), 0, G.build_star(cfg.m), 0, params={"n": cfg.n, "m": cfg.m})
    return G.wedge(G.build_complete(cfg.n), 0, G.build_complete(cfg.n2), 0,
                   params={"n": cfg.n, "n2": cfg.n2})


def first_peak(p: np.ndarray) -> int:
    """Argmax of the first excursion above half the global maximum.

    Later lobes of a pulsating curve can be marginally higher than the
    first, so a plain argmax may land on the third period.
    """
    if len(p) < 2:
        return 0
    top = p[1:].max()
    if top <= 0:
        return 1
    above = np.flatnonzero(p >= top / 2)
    start = int(above[0])
    below = np.flatnonzero(p[start:] < top / 2)
    stop = start + int(below[0]) if below.size else len(p)
    return start + int(np.argmax(p[start:stop]))


@dataclass
class SummaryReport:
    config: dict
    tau_sim: int
    peak_prob: float
    trough_prob: Optional[float]
    lambda_exact: Optional[float] = None
    lambda_series: Optional[float] = None
    theta: Optional[float] = None
    theta_series: Optional[float] = None
    tau_hat: Optional[int] = None
    tau_series: Optional[int] = None
    tau_thm2: Optional[float] = None
    max_deviation: Optional[float] = None
    max_deviation_step: Optional[int] = None
    schema: int = 1

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class RunResult:
    report: SummaryReport
    p_star: ProbabilityCurve
    p_theory: Optional[ProbabilityCurve] = None

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        header = ["t", "p_star"] + (["p_theory"] if self.p_theory is not None else [])
        writer.writerow(header)
        for t, p in enumerate(self.p_star.p):
            row = [t, f"{p:.12g}"]
            if self.p_theory is not None:
                row.append(f"{self.p_theory.p[t]:.12g}")
            writer.writerow(row)
        return buf.getvalue()


def run(cfg: RunConfig) -> RunResult:
    cfg.validate()
    theory = {}
    prediction = None
    if cfg.graph == "johnson-star":
        dec = decompose(cfg.n, cfg.k, cfg.m)
        pair = principal_eigenpair(build_T(dec))
        prediction = predict(pair, dec)
        try:
            lam_s = lambda_series(1.0 / dec.d, cfg.k, cfg.m)
        except ValueError:
            lam_s = None
        theory = dict(
            lambda_exact=pair.lam,
            lambda_series=lam_s,
            theta=pair.theta,
            theta_series=prediction.theta_series,
            tau_hat=prediction.tau,
            tau_series=prediction.tau_series,
            tau_thm2=asymptotic_tau(dec.N, cfg.k, cfg.m),
        )

    deviation = {}
    if cfg.engine == "full":
        p_star = curve(build_graph(cfg), cfg.t_max)
    elif cfg.engine == "reduced":
        p_star = reduced_curve(dec, cfg.t_max)
    elif cfg.engine == "theory":
        p_star = prediction.curve(cfg.t_max)
    else:
        p_star = curve(build_graph(cfg), cfg.t_max)
        diff = np.abs(p_star.p - reduced_curve(dec, cfg.t_max).p)
        i = int(np.argmax(diff))
        deviation = dict(max_deviation=float(diff[i]), max_deviation_step=i)

    p = p_star.p
    tau_sim = first_peak(p) if len(p) > 1 else 0
    later = p[tau_sim + 1:]
    report = SummaryReport(
        config=asdict(cfg),
        tau_sim=tau_sim,
        peak_prob=float(p[tau_sim]),
        trough_prob=float(later.min()) if later.size else None,
        **theory,
        **deviation,
    )
    p_theory = prediction.curve(cfg.t_max) if cfg.theory_column else None
    return RunResult(report, p_star, p_theory)


@dataclass
class ScanReport:
    k: int
    m: int
    rows: list = field(default_factory=list)
    slope: float = float("nan")
    expected_slope: float = float("nan")

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["n", "N", "theta", "tau_hat", "tau_thm2"])
        for r in self.rows:
            writer.writerow([r["n"], r["N"], f"{r['theta']:.12g}", r["tau_hat"], f"{r['tau_thm2']:.12g}"])
        return buf.getvalue()

    def to_dict(self) -> dict:
        return {"schema": 1, "k": self.k, "m": self.m, "slope": self.slope,
                "expected_slope": self.expected_slope, "rows": self.rows}


def scan(k: int, m: int, n_list) -> ScanReport:
    """Exact-angle optimal times over ``n_list`` and the log-log slope of tau against N."""
    n_list = sorted(set(int(n) for n in n_list))
    if len(n_list) < 3:
        raise ValueError("scan needs at least 3 distinct values of n")
    rows = []
    for n in n_list:
        dec = decompose(n, k, m)
        pred = predict(principal_eigenpair(build_T(dec)), dec)
        rows.append(dict(n=n, N=dec.N, theta=pred.theta, tau_hat=pred.tau,
                         tau_thm2=asymptotic_tau(dec.N, k, m)))
    logN = np.log([r["N"] for r in rows])
    logtau = np.log([r["tau_hat"] for r in rows])
    slope = float(np.polyfit(logN, logtau, 1)[0])
    return ScanReport(k, m, rows, slope, (1 + 1 / k) / 2)

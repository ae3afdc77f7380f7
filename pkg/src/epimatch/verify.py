"""Seeded property battery behind the ``verify`` command and the acceptance suite."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ParameterError
from .model import ModelParams, delta
from .sampling import DEFAULT_SEED, draw_economy
from .solver import (Activity, Regime, Stability, brute_force_equilibria, find_equilibria,
                     predict_regime)
from .statics import psi_invariance_check, sign_check

ORACLE_TOL = 1e-6
PSI_FACTORS = (0.5, 2.0, 5.0)


@dataclass
class SuiteResult:
    name: str
    passed: int = 0
    total: int = 0
    excluded: int = 0
    counterexample: ModelParams | None = None
    detail: str = ""

    def add(self, ok: bool, economy=None, detail=""):
        self.total += 1
        self.passed += bool(ok)
        if not ok and self.counterexample is None and self.detail == "":
            self.counterexample = economy
            self.detail = detail

    @property
    def ok(self) -> bool:
        return self.passed == self.total and self.detail == ""


def regular_economies(n: int, seed: int):
    """``n`` non-Boundary random economies, plus how many draws were skipped."""
    rng = np.random.default_rng(seed)
    out, skipped = [], 0
    while len(out) < n:
        p = draw_economy(rng)
        if predict_regime(p).tag is Regime.BOUNDARY:
            skipped += 1
            continue
        out.append(p)
    return out, skipped


def _expected_pattern(tag):
    return {
        Regime.UNIQUE_BOTH_ACTIVE: [Activity.BOTH_ACTIVE],
        Regime.UNIQUE_L_INACTIVE: [Activity.L_INACTIVE],
        Regime.COEXISTENCE: [Activity.BOTH_ACTIVE, Activity.BOTH_ACTIVE, Activity.L_INACTIVE],
    }[tag]


def regime_suite(economies, skipped=0) -> SuiteResult:
    res = SuiteResult("regime consistency", excluded=skipped)
    for p in economies:
        s = find_equilibria(p)
        got = [e.activity for e in s]
        want = _expected_pattern(s.regime.tag)
        res.add(got == want, p, f"regime {s.regime.tag.value} but activities {[a.value for a in got]}")
    return res


def oracle_suite(economies, grid_points: int = 100_000, tol: float = ORACLE_TOL) -> SuiteResult:
    res = SuiteResult("oracle equivalence")
    for p in economies:
        a = find_equilibria(p).W_stars
        b = np.asarray(brute_force_equilibria(p, grid_points))
        ok = a.shape == b.shape and bool(np.all(np.abs(a - b) <= tol))
        res.add(ok, p, f"solver {a.tolist()} vs oracle {b.tolist()}")
    return res


def stability_suite(economies, h: float = 1e-6) -> SuiteResult:
    """Alternation S/U/S and agreement of the w' label with the sign of delta'."""
    res = SuiteResult("stability alternation")
    for p in economies:
        s = find_equilibria(p)
        labels = [e.stability for e in s]
        alt = all(lab is (Stability.STABLE if j % 2 == 0 else Stability.UNSTABLE)
                  for j, lab in enumerate(labels))
        agree = True
        for e in s:
            if e.activity is Activity.BOTH_ACTIVE and e.W_star + h < p.theta_L:
                slope = (delta(p, e.W_star + h) - delta(p, e.W_star - h)) / (2 * h)
                agree &= (slope > 0) == (e.stability is Stability.STABLE)
        res.add(alt and agree, p,
                f"labels {[x.value for x in labels]}" + ("" if agree else "; delta' disagrees"))
    return res


def psi_suite(n: int, seed: int, factors=PSI_FACTORS, tol: float = 1e-9) -> SuiteResult:
    res = SuiteResult("psi invariance")
    rng = np.random.default_rng(seed + 1)
    while res.total < n:
        p = draw_economy(rng)
        try:
            for f in factors:
                p.replace(psi=p.psi * f)
        except ParameterError:
            res.excluded += 1
            continue
        r = psi_invariance_check(p, factors, tol)
        res.add(r.passed, p, f"max dW {r.max_W_change:.3g}, max scale error {r.max_scale_error:.3g}")
    return res


def signs_suite(samples: int, seed: int) -> SuiteResult:
    s = sign_check(samples, seed)
    res = SuiteResult("comparative-statics signs", excluded=s.excluded)
    for name, (n_pass, n_total) in sorted(s.checks.items()):
        res.passed += n_pass
        res.total += n_total
    if s.failures:
        name, econ, detail = s.failures[0]
        res.counterexample = econ
        res.detail = f"{name}: {detail}"
    return res


@dataclass
class VerifyReport:
    seed: int
    samples: int
    suites: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(s.ok for s in self.suites)


def run_verify(samples: int = 1000, seed: int = DEFAULT_SEED, oracle_grid: int = 100_000) -> VerifyReport:
    if samples < 1:
        raise ValueError("samples must be >= 1")
    econ, skipped = regular_economies(samples, seed)
    rep = VerifyReport(seed, samples)
    rep.suites.append(regime_suite(econ, skipped))
    rep.suites.append(oracle_suite(econ, oracle_grid))
    rep.suites.append(stability_suite(econ))
    rep.suites.append(signs_suite(samples, seed))
    rep.suites.append(psi_suite(max(1, min(samples, 100)), seed))
    return rep

"""Two populations (f, m) matching across: each side's cost is beta_g times the other's prevalence.

An equilibrium is a pair (W_f, W_m) where each population best-responds to the
other's prevalence and its own pooled prevalence comes out as conjectured.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import ParameterError
from .model import ActionProfile
from .solver import Stability

POPULATIONS = ("f", "m")


@dataclass(frozen=True)
class Population:
    alpha_H: float
    alpha_L: float
    Y_H: float
    Y_L: float
    theta_H: float
    theta_L: float
    psi: float

    def __post_init__(self):
        for name, v in self.__dict__.items():
            if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
                raise ParameterError(f"{name} must be a finite real, got {v!r}")
            object.__setattr__(self, name, float(v))
        if not (self.alpha_H > 0 and self.alpha_L > 0) or abs(self.alpha_H + self.alpha_L - 1) > 1e-12:
            raise ParameterError("need alpha_H, alpha_L > 0 with alpha_H + alpha_L = 1")
        # Y_L == Y_H allowed: prevalence is then action-independent
        if not 0.0 <= self.Y_L <= self.Y_H <= 1.0:
            raise ParameterError(f"need 0 <= Y_L <= Y_H <= 1 (got {self.Y_L}, {self.Y_H})")
        if not self.theta_H > self.theta_L > 0.0:
            raise ParameterError("need theta_H > theta_L > 0")
        if not self.psi > 0:
            raise ParameterError("need psi > 0")

    @property
    def pooled_floor(self) -> float:
        return self.alpha_H * self.Y_H + self.alpha_L * self.Y_L

    @property
    def kernel_args(self) -> tuple:
        return (self.alpha_H, self.alpha_L, self.Y_H, self.Y_L, self.theta_H, self.theta_L)


@dataclass(frozen=True)
class TwoPopParams:
    f: Population
    m: Population
    beta_f: float = 1.0
    beta_m: float = 1.0

    def __post_init__(self):
        for g in POPULATIONS:
            beta = self.beta(g)
            if not (math.isfinite(beta) and beta > 0):
                raise ParameterError(f"beta_{g} must be positive, got {beta!r}")
            pop, other = self.pop(g), self.pop(_other(g))
            bound = 0.5 * (pop.theta_H - beta * other.pooled_floor)
            if pop.psi < bound:
                raise ParameterError(
                    f"need psi_{g} >= (theta_{g}H - beta_{g} * pooled floor of the other side)/2 = {bound!r}")

    def pop(self, g: str) -> Population:
        return {"f": self.f, "m": self.m}[g]

    def beta(self, g: str) -> float:
        return {"f": self.beta_f, "m": self.beta_m}[g]

    @classmethod
    def symmetric(cls, params, beta_f: float = 1.0, beta_m: float = 1.0) -> "TwoPopParams":
        """Clone a single-population economy onto both sides."""
        pop = Population(**params.as_dict())
        return cls(pop, pop, beta_f, beta_m)


def _other(g):
    return "m" if g == "f" else "f"


def two_pop_response(params: TwoPopParams, W_other: float, g: str):
    """Best responses of population g to the other side's prevalence, and g's own pooled prevalence."""
    if not 0.0 <= W_other <= 1.0:
        raise ValueError(f"W_other must lie in [0, 1], got {W_other!r}")
    pop = params.pop(g)
    cost = params.beta(g) * W_other
    i_H = max(0.0, (pop.theta_H - cost) / (2.0 * pop.psi))
    i_L = max(0.0, (pop.theta_L - cost) / (2.0 * pop.psi))
    mH, mL = pop.alpha_H * i_H, pop.alpha_L * i_L
    W_g = pop.Y_H if mH + mL == 0.0 else pop.Y_L + mH / (mH + mL) * (pop.Y_H - pop.Y_L)
    return ActionProfile(i_H, i_L), W_g


@dataclass(frozen=True)
class TwoPopEquilibrium:
    W_f: float
    W_m: float
    actions: dict
    payoffs: dict
    residual: float
    stability: Stability

    def i(self, g: str, k: str) -> float:
        return self.actions[(g, k)]

    def pi(self, g: str, k: str) -> float:
        return self.payoffs[(g, k)]


@dataclass
class TwoPopSolution:
    equilibria: list
    diagnostics: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.equilibria)

    def __iter__(self):
        return iter(self.equilibria)

    def __getitem__(self, k):
        return self.equilibria[k]


def _residual(params, W_f, W_m):
    _, rf = two_pop_response(params, W_m, "f")
    _, rm = two_pop_response(params, W_f, "m")
    return max(abs(rf - W_f), abs(rm - W_m))


def _iterate(params, seeds, damping, tol, max_iter):
    return kernels.twopop_iterate(params.f.kernel_args, params.m.kernel_args,
                                  params.beta_f, params.beta_m,
                                  np.asarray(seeds, dtype=np.float64), damping, tol, max_iter)


def _classify(params, W, tol, damping, max_iter):
    d = 100.0 * tol
    seeds = np.array([[W[0] + d, W[1]], [W[0] - d, W[1]], [W[0], W[1] + d], [W[0], W[1] - d]])
    final, done, _ = _iterate(params, seeds, damping, max(tol * 1e-2, 1e-15), max_iter)
    back = done & (np.max(np.abs(final - np.asarray(W)), axis=1) <= 50.0 * tol)
    return Stability.STABLE if back.all() else Stability.UNSTABLE


def solve_two_pop(params: TwoPopParams, tol: float = 1e-10, max_iter: int = 10_000,
                  grid: int = 21, damping: float = 0.5, scan_points: int = 10_000) -> TwoPopSolution:
    """All equilibria found by damped iteration from a seed grid, plus a 1-D scan.

    Damped iteration only reaches attracting points. Repelling ones are located by
    scanning ``x - R_f(R_m(x))`` over population f's prevalence range, where
    ``R_g`` is population g's response map. Stability is operational: a point is
    Stable when damped iteration returns to it from four nearby seeds.
    """
    f, m = params.f, params.m
    gf = np.linspace(f.Y_L, f.Y_H, grid)
    gm = np.linspace(m.Y_L, m.Y_H, grid)
    seeds = np.array([(a, b) for a in gf for b in gm])
    final, done, iters = _iterate(params, seeds, damping, max(tol * 1e-2, 1e-15), max_iter)
    xs = kernels.twopop_composite_roots(f.kernel_args, m.kernel_args, params.beta_f, params.beta_m,
                                        np.linspace(f.Y_L, f.Y_H, scan_points))
    # scan roots are bisected to machine precision, so they win deduplication
    cands = []
    for x in xs:
        _, wm = two_pop_response(params, float(x), "m")
        cands.append((float(x), wm))
    cands.extend(tuple(w) for w in final[done])

    found = []
    rejected = 0
    for wf, wm in cands:
        wf, wm = float(wf), float(wm)
        if _residual(params, wf, wm) > tol:
            rejected += 1
            continue
        if any(max(abs(wf - a), abs(wm - b)) <= 10.0 * tol for a, b in found):
            continue
        found.append((wf, wm))
    found.sort()

    eqs = []
    for wf, wm in found:
        acts, pays = {}, {}
        for g, W_other in (("f", wm), ("m", wf)):
            (i_H, i_L), _ = two_pop_response(params, W_other, g)
            psi = params.pop(g).psi
            acts[(g, "H")], acts[(g, "L")] = i_H, i_L
            pays[(g, "H")], pays[(g, "L")] = psi * i_H * i_H, psi * i_L * i_L
        eqs.append(TwoPopEquilibrium(wf, wm, acts, pays, _residual(params, wf, wm),
                                     _classify(params, (wf, wm), tol, damping, max_iter)))
    diag = {
        "seeds": int(seeds.shape[0]),
        "max_iter_exceeded": int((~done).sum()),
        "max_iterations_used": int(iters.max()) if iters.size else 0,
        "scan_roots": int(len(xs)),
        "rejected_candidates": rejected,
    }
    return TwoPopSolution(eqs, diag)


def response_monotonicity(params: TwoPopParams, g: str, points: int = 2001) -> dict:
    """Grid check of how population g's responses move with the other side's prevalence."""
    other = params.pop(_other(g))
    grid = np.linspace(0.0, max(other.Y_H, 1e-12), points)
    resp = [two_pop_response(params, float(w), g) for w in grid]
    i_H = np.array([r[0].i_H for r in resp])
    i_L = np.array([r[0].i_L for r in resp])
    W_g = np.array([r[1] for r in resp])
    return {
        "i_H_nonincreasing": bool(np.all(np.diff(i_H) <= 1e-15)),
        "i_L_nonincreasing": bool(np.all(np.diff(i_L) <= 1e-15)),
        "W_g_nondecreasing": bool(np.all(np.diff(W_g) >= -1e-15)),
        "W_g_nonincreasing": bool(np.all(np.diff(W_g) <= 1e-15)),
    }

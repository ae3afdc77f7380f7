"""Equilibrium enumeration, stability classification and regime prediction."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import BracketExhausted, DegenerateRoot, InvalidTolerance
from .model import ModelParams, best_responses, w_map

DEFAULT_TOL = 1e-10
DEFAULT_GRID = 10_000
STABILITY_STEP = 1e-6
BOUNDARY_TOL = 1e-9
ORACLE_GRID = 100_000
MERGE_TOL = 1e-9


class Activity(str, enum.Enum):
    BOTH_ACTIVE = "BothActive"
    L_INACTIVE = "LInactive"


class Stability(str, enum.Enum):
    STABLE = "Stable"
    UNSTABLE = "Unstable"
    # tangent roots are reported but not classified
    DEGENERATE = "Degenerate"


class Regime(str, enum.Enum):
    UNIQUE_BOTH_ACTIVE = "UniqueBothActive"
    COEXISTENCE = "Coexistence"
    UNIQUE_L_INACTIVE = "UniqueLInactive"
    BOUNDARY = "Boundary"


@dataclass(frozen=True)
class RegimeClass:
    tag: Regime
    condition_values: dict = field(default_factory=dict)


@dataclass(frozen=True)
class Equilibrium:
    W_star: float
    i_H: float
    i_L: float
    pi_H: float
    pi_L: float
    activity: Activity
    stability: Stability
    residual: float


@dataclass(frozen=True)
class EquilibriumSet:
    economy: ModelParams
    equilibria: tuple
    regime: RegimeClass

    def __len__(self):
        return len(self.equilibria)

    def __iter__(self):
        return iter(self.equilibria)

    def __getitem__(self, k):
        return self.equilibria[k]

    @property
    def W_stars(self) -> np.ndarray:
        return np.array([e.W_star for e in self.equilibria])


def predict_regime(params: ModelParams, tol: float = BOUNDARY_TOL) -> RegimeClass:
    """Classify the economy into its equilibrium-count regime from closed-form inequalities.

    With ``u = theta_L - W`` the both-active part of delta is ``-u² + b u + c`` where
    ``b = theta_L - alpha_H (theta_H - theta_L) - alpha_L Y_L - alpha_H Y_H`` and
    ``c = alpha_H (theta_H - theta_L)(theta_L - Y_H)``. When ``Y_H > theta_L`` two
    both-active roots exist iff ``b > 0`` and ``b² + 4c > 0``.
    """
    p = params
    gap = p.theta_H - p.theta_L
    b = p.theta_L - p.alpha_H * gap - p.alpha_L * p.Y_L - p.alpha_H * p.Y_H
    disc = b * b - 4.0 * p.alpha_H * gap * (p.Y_H - p.theta_L)
    threshold = p.theta_L - p.theta_H + (p.theta_L - p.alpha_L * p.Y_L) / p.alpha_H
    values = {
        "Y_H_minus_theta_L": p.Y_H - p.theta_L,
        "Y_H": p.Y_H,
        "threshold": threshold,
        "b": b,
        "discriminant": disc,
        "discriminant_as_printed": b * b - 4.0 * p.alpha_H * gap * (p.theta_L - p.Y_H),
    }
    if abs(p.Y_H - p.theta_L) <= tol:
        tag = Regime.BOUNDARY
    elif p.Y_H < p.theta_L:
        tag = Regime.UNIQUE_BOTH_ACTIVE
    elif abs(b) <= tol or abs(p.Y_H - threshold) <= tol:
        tag = Regime.BOUNDARY
    elif b < 0:
        tag = Regime.UNIQUE_L_INACTIVE
    elif abs(disc) <= tol:
        tag = Regime.BOUNDARY
    elif disc > 0:
        tag = Regime.COEXISTENCE
    else:
        tag = Regime.UNIQUE_L_INACTIVE
    return RegimeClass(tag, values)


def w_prime(params: ModelParams, W: float, h: float = STABILITY_STEP) -> float:
    """Finite-difference slope of the w-map; one-sided when the stencil would cross theta_L."""
    if W >= params.theta_L:
        return 0.0
    if W + h < params.theta_L:
        return (w_map(params, W + h) - w_map(params, W - h)) / (2.0 * h)
    return (w_map(params, W) - w_map(params, W - h)) / h


def classify_stability(params: ModelParams, W_star: float, h: float = STABILITY_STEP) -> Stability:
    """Stable iff w'(W*) < 1. Raises :class:`DegenerateRoot` at tangency."""
    if W_star >= params.theta_L:
        return Stability.STABLE
    slope = w_prime(params, W_star, h)
    if abs(slope - 1.0) < 10.0 * h:
        raise DegenerateRoot(f"w'({W_star!r}) = {slope!r} is within {10 * h} of 1")
    return Stability.STABLE if slope < 1.0 else Stability.UNSTABLE


def make_equilibrium(params: ModelParams, W: float, h: float = STABILITY_STEP) -> Equilibrium:
    i_H, i_L = best_responses(params, W)
    try:
        stab = classify_stability(params, W, h)
    except DegenerateRoot:
        stab = Stability.DEGENERATE
    # payoff at a best response reduces to psi i²
    return Equilibrium(
        W_star=W, i_H=i_H, i_L=i_L,
        pi_H=params.psi * i_H * i_H, pi_L=params.psi * i_L * i_L,
        activity=Activity.L_INACTIVE if i_L == 0.0 else Activity.BOTH_ACTIVE,
        stability=stab,
        residual=abs(w_map(params, W) - W),
    )


def _breakpoints(params: ModelParams) -> list:
    # delta is monotone between consecutive breakpoints, so every root is bracketed
    p = params
    B = p.alpha_H * (p.theta_H + p.Y_H) + p.alpha_L * (p.theta_L + p.Y_L)
    return [p.theta_L, p.theta_H, 0.5 * B, 0.5 * (p.theta_H + p.Y_H)]


def _merge(values, tol=MERGE_TOL):
    out = []
    for v in sorted(values):
        if out and v - out[-1] <= tol:
            continue
        out.append(v)
    return out


def candidate_roots(params: ModelParams, grid_points: int = DEFAULT_GRID) -> np.ndarray:
    """Sign changes of delta on a grid over [Y_L, Y_H] plus the analytic corner at Y_H."""
    p = params
    grid = np.linspace(p.Y_L, p.Y_H, grid_points)
    extra = [x for x in _breakpoints(p) if p.Y_L < x < p.Y_H]
    grid = np.unique(np.concatenate([grid, extra]))
    roots = list(kernels.delta_roots(*p.kernel_args, grid))
    if p.theta_L <= p.Y_H:
        # tangent zero: delta >= 0 on both sides, no sign change to find
        roots.append(p.Y_H)
    return np.asarray(_merge(roots))


def find_equilibria(params: ModelParams, tol: float = DEFAULT_TOL,
                    grid_points: int = DEFAULT_GRID, h: float = STABILITY_STEP) -> EquilibriumSet:
    """Every fixed point of the w-map in [Y_L, Y_H], sorted by prevalence."""
    if not 0.0 < tol <= 1e-4:
        raise InvalidTolerance(f"tol must lie in (0, 1e-4], got {tol!r}")
    cands = candidate_roots(params, grid_points)
    valid = [float(W) for W in cands if abs(w_map(params, W) - W) <= tol]
    if len(valid) > 3:
        raise BracketExhausted(f"{len(valid)} validated roots {valid}; at most 3 are possible")
    eqs = tuple(make_equilibrium(params, W, h) for W in valid)
    return EquilibriumSet(params, eqs, predict_regime(params))


def pareto_dominant(eqset: EquilibriumSet) -> Equilibrium:
    """The stable equilibrium with the lowest prevalence."""
    stable = [e for e in eqset if e.stability is Stability.STABLE]
    if not stable:
        raise DegenerateRoot("no classified stable equilibrium")
    return min(stable, key=lambda e: e.W_star)


def brute_force_equilibria(params: ModelParams, grid_points: int = ORACLE_GRID) -> list:
    """Independent oracle: local minimizers of |W - w(W)| on a uniform grid.

    Uses only the w-map (never delta), so it cross-checks the delta-based solver.
    """
    grid = np.linspace(params.Y_L, params.Y_H, grid_points)
    hits = kernels.residual_minima(*params.kernel_args, grid)
    spacing = (params.Y_H - params.Y_L) / max(grid_points - 1, 1)
    return [float(x) for x in _merge(hits, tol=2.0 * spacing)]

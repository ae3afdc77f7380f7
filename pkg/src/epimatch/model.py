"""Model primitives: payoffs, best responses, pooled prevalence, the w-map and delta.

Two agent types H and L search for partners in a common pool. Type k chooses a
match probability i_k and earns ``i θ_k - ψ i² - i W`` where W is the infected
share of the active pool.
"""
from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from typing import NamedTuple

from . import kernels
from .errors import ParameterError

ALPHA_SUM_TOL = 1e-12
TYPES = ("H", "L")
PRIMITIVES = ("alpha_H", "alpha_L", "Y_H", "Y_L", "theta_H", "theta_L", "psi")


@dataclass(frozen=True)
class ModelParams:
    """One economy.

    Construction validates every defining inequality and raises
    :class:`ParameterError` naming the first one violated.

    The satiation bound enforced here is ``psi >= (theta_H - pooled_floor) / 2``,
    where ``pooled_floor = alpha_H Y_H + alpha_L Y_L`` is the lowest prevalence
    any equilibrium can have. It keeps every equilibrium action below 1.
    The stronger bound ``psi >= (theta_H - Y_L) / 2``, which keeps every best
    response to any W in [Y_L, Y_H] interior, is exposed as
    :attr:`globally_interior` but not enforced.
    """

    alpha_H: float
    alpha_L: float
    Y_H: float
    Y_L: float
    theta_H: float
    theta_L: float
    psi: float

    def __post_init__(self):
        for name in PRIMITIVES:
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, (int, float)):
                raise ParameterError(f"{name} must be a real number, got {v!r}")
            if not math.isfinite(v):
                raise ParameterError(f"{name} must be finite, got {v!r}")
            object.__setattr__(self, name, float(v))
        if not (self.alpha_H > 0 and self.alpha_L > 0):
            raise ParameterError(f"need alpha_H > 0 and alpha_L > 0 (got {self.alpha_H}, {self.alpha_L})")
        if abs(self.alpha_H + self.alpha_L - 1.0) > ALPHA_SUM_TOL:
            raise ParameterError(
                f"need alpha_H + alpha_L = 1 (got {self.alpha_H + self.alpha_L!r})")
        if not 0.0 <= self.Y_L < self.Y_H <= 1.0:
            raise ParameterError(f"need 0 <= Y_L < Y_H <= 1 (got Y_L={self.Y_L}, Y_H={self.Y_H})")
        if not self.theta_H > self.theta_L > 0.0:
            raise ParameterError(
                f"need theta_H > theta_L > 0 (got theta_H={self.theta_H}, theta_L={self.theta_L})")
        bound = 0.5 * (self.theta_H - self.pooled_floor)
        if not self.psi >= bound or self.psi <= 0.0:
            raise ParameterError(
                f"need psi >= (theta_H - alpha_H*Y_H - alpha_L*Y_L)/2 = {bound!r} and psi > 0 "
                f"(got psi={self.psi})")

    @property
    def pooled_floor(self) -> float:
        return self.alpha_H * self.Y_H + self.alpha_L * self.Y_L

    @property
    def globally_interior(self) -> bool:
        return self.psi >= 0.5 * (self.theta_H - self.Y_L)

    @property
    def kernel_args(self) -> tuple:
        # ψ never enters delta or w
        return (self.alpha_H, self.alpha_L, self.Y_H, self.Y_L, self.theta_H, self.theta_L)

    def theta(self, k: str) -> float:
        return _pick(self.theta_H, self.theta_L, k)

    def replace(self, **changes) -> "ModelParams":
        """Copy with some primitives changed. Setting ``alpha_H`` alone moves ``alpha_L`` too."""
        if "alpha_H" in changes and "alpha_L" not in changes:
            changes["alpha_L"] = 1.0 - changes["alpha_H"]
        elif "alpha_L" in changes and "alpha_H" not in changes:
            changes["alpha_H"] = 1.0 - changes["alpha_L"]
        return dataclasses.replace(self, **changes)

    def as_dict(self) -> dict:
        return {name: getattr(self, name) for name in PRIMITIVES}


class ActionProfile(NamedTuple):
    i_H: float
    i_L: float


def _pick(h, l, k):
    if k == "H":
        return h
    if k == "L":
        return l
    raise ValueError(f"type must be 'H' or 'L', got {k!r}")


def pooled_prevalence(params: ModelParams, actions) -> float:
    """Infected share among active partner-seekers.

    An empty pool is assigned prevalence Y_H (the worst off-path belief).
    """
    i_H, i_L = actions
    if not (0.0 <= i_H <= 1.0 and 0.0 <= i_L <= 1.0):
        raise ParameterError(f"actions must lie in [0, 1], got {(i_H, i_L)}")
    mH = params.alpha_H * i_H
    mL = params.alpha_L * i_L
    if mH + mL == 0.0:
        return params.Y_H
    # interpolate by H's pool share so subnormal actions cannot leave [Y_L, Y_H]
    share = mH / (mH + mL)
    return params.Y_L + share * (params.Y_H - params.Y_L)


def payoff(params: ModelParams, k: str, i: float, W: float) -> float:
    return i * params.theta(k) - params.psi * i * i - i * W


def best_response(params: ModelParams, k: str, W: float) -> float:
    return max(0.0, (params.theta(k) - W) / (2.0 * params.psi))


def best_responses(params: ModelParams, W: float) -> ActionProfile:
    return ActionProfile(best_response(params, "H", W), best_response(params, "L", W))


def w_map(params: ModelParams, W: float) -> float:
    """Prevalence induced when both types best-respond to a conjectured prevalence W."""
    return kernels.w_point(*params.kernel_args, float(W))


def delta(params: ModelParams, W: float) -> float:
    """``(W - w(W))`` times the pool's activity mass; its zeros are equilibrium candidates.

    ``alpha_H (theta_H - W)(W - Y_H) + alpha_L max(0, theta_L - W)(W - Y_L)``
    """
    return kernels.delta_point(*params.kernel_args, float(W))


def delta_scaled(params: ModelParams, W: float, gamma: float, epsilon: float) -> float:
    """delta with the L term scaled by gamma and the H term by gamma (1 - epsilon)."""
    if not gamma > 0:
        raise ValueError(f"gamma must be positive, got {gamma}")
    if not epsilon >= 0:
        raise ValueError(f"epsilon must be nonnegative, got {epsilon}")
    p = params
    return (p.alpha_H * gamma * (1.0 - epsilon) * (p.theta_H - W) * (W - p.Y_H)
            + p.alpha_L * gamma * max(0.0, p.theta_L - W) * (W - p.Y_L))

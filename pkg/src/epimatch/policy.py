"""Policy experiments: abstinence (lower theta), treatment (lower Y), satiation (scale psi)."""
from __future__ import annotations

import enum
from dataclasses import dataclass

from .errors import InvalidIntervention, ParameterError
from .model import TYPES, ModelParams, payoff
from .solver import EquilibriumSet, find_equilibria, pareto_dominant

CHAIN_TOL = 1e-12


class InterventionKind(str, enum.Enum):
    ABSTINENCE = "abstinence"
    TREATMENT = "treatment"
    SATIATION = "satiation"


@dataclass(frozen=True)
class Intervention:
    """A parameter transform.

    Abstinence adds ``dtheta_H, dtheta_L <= 0``. Treatment multiplies both Y by
    ``factor`` in (0, 1] and then adds ``dY_H, dY_L <= 0``. Satiation multiplies
    psi by ``psi_factor > 0``.
    """

    kind: InterventionKind
    dtheta_H: float = 0.0
    dtheta_L: float = 0.0
    factor: float = 1.0
    dY_H: float = 0.0
    dY_L: float = 0.0
    psi_factor: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "kind", InterventionKind(self.kind))
        if self.kind is InterventionKind.ABSTINENCE:
            if self.dtheta_H > 0 or self.dtheta_L > 0:
                raise InvalidIntervention("abstinence needs dtheta_H <= 0 and dtheta_L <= 0")
        elif self.kind is InterventionKind.TREATMENT:
            if not 0.0 < self.factor <= 1.0:
                raise InvalidIntervention(f"treatment factor must lie in (0, 1], got {self.factor}")
            if self.dY_H > 0 or self.dY_L > 0:
                raise InvalidIntervention("treatment needs dY_H <= 0 and dY_L <= 0")
        elif not self.psi_factor > 0:
            raise InvalidIntervention(f"psi_factor must be positive, got {self.psi_factor}")

    @classmethod
    def abstinence(cls, dtheta_H: float, dtheta_L: float) -> "Intervention":
        return cls(InterventionKind.ABSTINENCE, dtheta_H=dtheta_H, dtheta_L=dtheta_L)

    @classmethod
    def treatment(cls, factor: float = 1.0, dY_H: float = 0.0, dY_L: float = 0.0) -> "Intervention":
        return cls(InterventionKind.TREATMENT, factor=factor, dY_H=dY_H, dY_L=dY_L)

    @classmethod
    def satiation(cls, psi_factor: float) -> "Intervention":
        return cls(InterventionKind.SATIATION, psi_factor=psi_factor)


def apply_intervention(params: ModelParams, iv: Intervention) -> ModelParams:
    if iv.kind is InterventionKind.ABSTINENCE:
        changes = dict(theta_H=params.theta_H + iv.dtheta_H, theta_L=params.theta_L + iv.dtheta_L)
    elif iv.kind is InterventionKind.TREATMENT:
        changes = dict(Y_H=params.Y_H * iv.factor + iv.dY_H, Y_L=params.Y_L * iv.factor + iv.dY_L)
    else:
        changes = dict(psi=params.psi * iv.psi_factor)
    try:
        return params.replace(**changes)
    except ParameterError as exc:
        raise InvalidIntervention(f"transformed economy is invalid: {exc}") from exc


@dataclass(frozen=True)
class PolicyReport:
    baseline: EquilibriumSet
    treated: EquilibriumSet
    focal_before: object
    focal_after: object
    delta_W: float
    payoff_old_utility: dict
    payoff_new_utility: dict
    revealed_preference_chain_holds: dict


def _ik(eq, k):
    return eq.i_H if k == "H" else eq.i_L


def _pik(eq, k):
    return eq.pi_H if k == "H" else eq.pi_L


def compare(params: ModelParams, iv: Intervention) -> PolicyReport:
    """Solve before and after, pair the Pareto-dominant equilibria, cross-evaluate payoffs.

    ``payoff_old_utility[k]`` is the pre-intervention utility at the new action and
    new prevalence; ``payoff_new_utility[k]`` is the realized new payoff.
    """
    new = apply_intervention(params, iv)
    base = find_equilibria(params)
    treated = find_equilibria(new)
    e0 = pareto_dominant(base)
    e1 = pareto_dominant(treated)
    old_u, new_u, chain = {}, {}, {}
    for k in TYPES:
        i1 = _ik(e1, k)
        old_u[k] = payoff(params, k, i1, e1.W_star)
        new_u[k] = payoff(new, k, i1, e1.W_star)
        chain[k] = _pik(e0, k) >= old_u[k] - CHAIN_TOL and old_u[k] >= new_u[k] - CHAIN_TOL
    return PolicyReport(base, treated, e0, e1, e1.W_star - e0.W_star, old_u, new_u, chain)


@dataclass(frozen=True)
class Compensation:
    compensation: float
    compensated_payoff: float
    baseline_payoff: float
    sufficient: bool


@dataclass(frozen=True)
class CompensationLedger:
    H: Compensation
    L: Compensation

    def __getitem__(self, k):
        return getattr(self, k)

    @property
    def insufficient_for_all(self) -> bool:
        return not (self.H.sufficient or self.L.sufficient)


def slutsky_ledger(params0: ModelParams, iv: Intervention) -> CompensationLedger:
    """Refund each type the benefit lost at its original action; is the old payoff restored?"""
    if iv.kind is not InterventionKind.ABSTINENCE:
        raise InvalidIntervention("Slutsky compensation is defined for abstinence interventions")
    params1 = apply_intervention(params0, iv)
    e0 = pareto_dominant(find_equilibria(params0))
    e1 = pareto_dominant(find_equilibria(params1))
    rows = {}
    for k in TYPES:
        comp = (params0.theta(k) - params1.theta(k)) * _ik(e0, k)
        paid = _pik(e1, k) + comp
        rows[k] = Compensation(comp, paid, _pik(e0, k), paid >= _pik(e0, k))
    return CompensationLedger(**rows)

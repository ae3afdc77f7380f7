"""Local sensitivities of stable equilibria and equilibrium-set transitions."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .errors import InvalidStep, ParameterError, PathInvalid, TrackingLost
from .model import ModelParams, best_responses, delta, delta_scaled, w_map
from .sampling import DEFAULT_SEED, draw_economy
from . import kernels
from .solver import Activity, Regime, Stability, find_equilibria, pareto_dominant

SENSITIVITY_PRIMITIVES = ("theta_H", "theta_L", "Y_H", "Y_L", "alpha_H", "psi")
DEFAULT_STEP = 1e-6
SIGN_TOL = 1e-7
KINK_MARGIN = 1e-4
TRACK_TOL = 1e-10
JOINT_SHIFT = 1e-4


class Derivatives(NamedTuple):
    W: float
    i_H: float
    i_L: float
    pi_H: float
    pi_L: float


@dataclass(frozen=True)
class SensitivityReport:
    economy: ModelParams
    equilibrium: object
    derivatives: dict
    step: float
    verdicts: dict


@dataclass(frozen=True)
class ScaledDeltaProbe:
    gamma: float = 1.0
    epsilon: float = 0.1

    def __post_init__(self):
        if not self.gamma > 0:
            raise ValueError(f"gamma must be positive, got {self.gamma}")
        if not self.epsilon >= 0:
            raise ValueError(f"epsilon must be nonnegative, got {self.epsilon}")


def is_regular(params: ModelParams, eq, margin: float = KINK_MARGIN) -> bool:
    """Stable, non-Boundary and at least ``margin`` away from every kink."""
    if eq.stability is not Stability.STABLE:
        return False
    if eq.activity is Activity.BOTH_ACTIVE:
        return params.theta_L - eq.W_star > margin
    return (params.Y_H - params.theta_L > margin
            and abs(params.theta_H - params.Y_H) > margin)


def track_stable_root(params: ModelParams, W0: float, activity: Activity) -> float:
    """Locate the perturbed counterpart of a stable equilibrium near ``W0``."""
    p = params
    if activity is Activity.L_INACTIVE:
        if p.theta_L >= p.Y_H:
            raise TrackingLost("L-inactive corner vanished (theta_L >= Y_H)")
        return p.Y_H
    rho = 1e-2
    while rho >= 1e-9:
        lo = max(W0 - rho, p.Y_L)
        hi = min(W0 + rho, p.theta_L)
        # stable roots are upward crossings of delta
        if lo < hi and delta(p, lo) < 0.0 < delta(p, hi):
            W = kernels.bisect_delta(*p.kernel_args, lo, hi)
            if abs(w_map(p, W) - W) <= TRACK_TOL and W < p.theta_L:
                return float(W)
        rho *= 0.1
    raise TrackingLost(f"no stable root near W={W0!r}")


def _perturbed(params: ModelParams, primitive: str, value: float) -> ModelParams:
    try:
        return params.replace(**{primitive: value})
    except ParameterError as exc:
        raise InvalidStep(f"{primitive}={value!r} leaves the parameter space: {exc}") from exc


def _outcome(params: ModelParams, W: float) -> np.ndarray:
    i_H, i_L = best_responses(params, W)
    return np.array([W, i_H, i_L, params.psi * i_H * i_H, params.psi * i_L * i_L])


def derivative(params: ModelParams, eq, primitive: str, h: float = DEFAULT_STEP) -> Derivatives:
    """Central differences of (W*, i_H*, i_L*, pi_H*, pi_L*) in one primitive."""
    if not h > 0:
        raise InvalidStep(f"step must be positive, got {h!r}")
    if primitive not in SENSITIVITY_PRIMITIVES:
        raise ValueError(f"unknown primitive {primitive!r}")
    base = getattr(params, primitive)
    vals = []
    for v in (base + h, base - h):
        q = _perturbed(params, primitive, v)
        vals.append(_outcome(q, track_stable_root(q, eq.W_star, eq.activity)))
    return Derivatives(*(float(x) for x in (vals[0] - vals[1]) / (2.0 * h)))


def sign_verdicts(params: ModelParams, eq, derivs: dict, tol: float = SIGN_TOL) -> dict:
    """Pass/fail for each comparative-statics sign asserted at stable equilibria."""
    out = {}
    for p in ("Y_H", "Y_L"):
        if p in derivs:
            d = derivs[p]
            out[f"dW/d{p}>=0"] = d.W >= -tol
            out[f"di_H/d{p}<=0"] = d.i_H <= tol
            out[f"di_L/d{p}<=0"] = d.i_L <= tol
    if "theta_L" in derivs:
        d = derivs["theta_L"]
        out["dW/dtheta_L<=0"] = d.W <= tol
        out["di_H/dtheta_L>=0"] = d.i_H >= -tol
        out["di_L/dtheta_L>=0"] = d.i_L >= -tol
    if "theta_H" in derivs:
        d = derivs["theta_H"]
        out["dW/dtheta_H>=0"] = d.W >= -tol
        out["di_L/dtheta_H<=0"] = d.i_L <= tol
        if eq.activity is Activity.L_INACTIVE and eq.i_H > 0.0:
            out["L-inactive: dW/dtheta_H=0<di_H/dtheta_H"] = abs(d.W) <= tol and d.i_H > tol
    return out


def sensitivity(params: ModelParams, primitive=None, h: float = DEFAULT_STEP) -> SensitivityReport:
    """Sensitivities of the Pareto-dominant equilibrium.

    ``primitive`` is one name, an iterable of names, or None for all six.
    Raises :class:`TrackingLost` when the equilibrium set changes inside the
    stencil, :class:`InvalidStep` when a perturbed economy is invalid.
    """
    if primitive is None:
        prims = SENSITIVITY_PRIMITIVES
    elif isinstance(primitive, str):
        prims = (primitive,)
    else:
        prims = tuple(primitive)
    eqset = find_equilibria(params)
    eq = pareto_dominant(eqset)
    if eqset.regime.tag is Regime.BOUNDARY and not is_regular(params, eq):
        raise TrackingLost("focal equilibrium sits on a regime boundary")
    derivs = {p: derivative(params, eq, p, h) for p in prims}
    return SensitivityReport(params, eq, derivs, h, sign_verdicts(params, eq, derivs))


@dataclass
class SignCheckSummary:
    samples: int
    seed: int
    excluded: int = 0
    checks: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)

    def record(self, name, ok, economy, detail):
        n_pass, n_total = self.checks.get(name, (0, 0))
        self.checks[name] = (n_pass + bool(ok), n_total + 1)
        if not ok:
            self.failures.append((name, economy, detail))

    @property
    def passed(self) -> bool:
        return not self.failures


def joint_shift_check(params: ModelParams, d_theta_H: float, d_theta_L: float,
                      tol: float = SIGN_TOL):
    """Raise theta_H by less than theta_L; focal W* must not rise and neither i* fall."""
    e0 = pareto_dominant(find_equilibria(params))
    q = params.replace(theta_H=params.theta_H + d_theta_H, theta_L=params.theta_L + d_theta_L)
    e1 = pareto_dominant(find_equilibria(q))
    ok = (e1.W_star <= e0.W_star + tol and e1.i_H >= e0.i_H - tol and e1.i_L >= e0.i_L - tol)
    return ok, (e0.W_star, e1.W_star, e0.i_H, e1.i_H, e0.i_L, e1.i_L)


def sign_check(samples: int = 1000, seed: int = DEFAULT_SEED, h: float = DEFAULT_STEP,
               shift: float = JOINT_SHIFT, max_excluded_ratio: float = 10.0) -> SignCheckSummary:
    """Seeded battery of comparative-statics signs over random regular economies.

    Economies whose focal equilibrium sits on or near a regime boundary, or whose
    stencil crosses a transition, are redrawn and counted in ``excluded``.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    rng = np.random.default_rng(seed)
    out = SignCheckSummary(samples=samples, seed=seed)
    done = 0
    while done < samples:
        if out.excluded > max_excluded_ratio * samples:
            out.record("exclusion budget", False, None,
                       f"{out.excluded} economies excluded before {samples} were usable")
            break
        p = draw_economy(rng)
        u = rng.uniform(0.0, 1.0)
        eqset = find_equilibria(p)
        if eqset.regime.tag is Regime.BOUNDARY:
            out.excluded += 1
            continue
        eq = pareto_dominant(eqset)
        if not is_regular(p, eq):
            out.excluded += 1
            continue
        try:
            derivs = {k: derivative(p, eq, k, h) for k in SENSITIVITY_PRIMITIVES}
        except (TrackingLost, InvalidStep):
            out.excluded += 1
            continue
        for name, ok in sign_verdicts(p, eq, derivs).items():
            out.record(name, ok, p, derivs)
        d2 = shift
        d1 = shift * max(u, 1e-3)
        ok, detail = joint_shift_check(p, d1, d2)
        out.record("joint shift d_theta_H<=d_theta_L lowers W*, raises i*", ok, p, detail)
        done += 1
    return out


@dataclass(frozen=True)
class PsiInvarianceSummary:
    factors: tuple
    max_W_change: float
    max_scale_error: float
    payoffs_fall: bool
    passed: bool


def psi_invariance_check(params: ModelParams, factors=(0.5, 2.0, 5.0),
                         tol: float = 1e-9) -> PsiInvarianceSummary:
    """Rescale psi and re-solve: W* must not move and every i* scales by 1/factor."""
    base = find_equilibria(params)
    max_dW = 0.0
    max_scale = 0.0
    count_ok = True
    fall = True
    for f in factors:
        s = find_equilibria(params.replace(psi=params.psi * f))
        if len(s) != len(base):
            count_ok = False
            continue
        for e0, e1 in zip(base, s):
            max_dW = max(max_dW, abs(e1.W_star - e0.W_star))
            max_scale = max(max_scale, abs(e1.i_H * f - e0.i_H), abs(e1.i_L * f - e0.i_L))
            if f > 1 and (e1.pi_H > e0.pi_H or e1.pi_L > e0.pi_L):
                fall = False
    passed = count_ok and max_dW <= tol and max_scale <= tol and fall
    return PsiInvarianceSummary(tuple(factors), max_dW, max_scale, fall, passed)


class TransitionKind(str, enum.Enum):
    STABLE_MAX_W_DISAPPEARED = "StableMaxWDisappeared"
    NEW_SMALLEST_W_APPEARED = "NewSmallestWAppeared"
    STABLE_MIN_W_DISAPPEARED = "StableMinWDisappeared"
    NEW_LARGEST_W_APPEARED = "NewLargestWAppeared"
    COUNT_CHANGED = "CountChanged"


class TransitionEvent(NamedTuple):
    step: int
    value: float
    kind: TransitionKind


@dataclass(frozen=True)
class TransitionReport:
    start: ModelParams
    end: ModelParams
    steps: int
    primitive: str | None
    delta_increasing: bool | None
    events: tuple
    claim_holds: bool


# primitives along which delta rises pointwise when the value goes up
_DELTA_SIGN = {"theta_L": +1, "theta_H": -1, "Y_H": -1, "Y_L": -1}


def _stable_keys(eqset):
    # at most one stable both-active root and the L-inactive corner
    return {e.activity: e.W_star for e in eqset if e.stability is Stability.STABLE}


def transition_events(prev, cur, step: int, value: float, delta_increasing=None):
    """Events between two consecutive equilibrium sets, and whether they fit the claim.

    Along a path that raises delta pointwise, every count change should coincide with
    the largest stable root vanishing or a new smallest stable root appearing; along
    the reversed path, with the mirrored pair.
    """
    a, b = _stable_keys(prev), _stable_keys(cur)
    named = []
    if a and max(a, key=a.get) not in b:
        named.append(TransitionKind.STABLE_MAX_W_DISAPPEARED)
    if b and min(b, key=b.get) not in a:
        named.append(TransitionKind.NEW_SMALLEST_W_APPEARED)
    if a and min(a, key=a.get) not in b:
        named.append(TransitionKind.STABLE_MIN_W_DISAPPEARED)
    if b and max(b, key=b.get) not in a:
        named.append(TransitionKind.NEW_LARGEST_W_APPEARED)
    events = [TransitionEvent(step, value, k) for k in named]
    fits = True
    if len(cur) != len(prev):
        events.append(TransitionEvent(step, value, TransitionKind.COUNT_CHANGED))
        if delta_increasing is not None:
            if delta_increasing:
                expected = {TransitionKind.STABLE_MAX_W_DISAPPEARED,
                            TransitionKind.NEW_SMALLEST_W_APPEARED}
            else:
                expected = {TransitionKind.STABLE_MIN_W_DISAPPEARED,
                            TransitionKind.NEW_LARGEST_W_APPEARED}
            # tangent double roots at Boundary waypoints may change the count silently
            on_boundary = Regime.BOUNDARY in (prev.regime.tag, cur.regime.tag)
            fits = on_boundary or bool(expected.intersection(named))
    return events, fits


def transition_scan(start: ModelParams, end: ModelParams, steps: int = 100) -> TransitionReport:
    """Solve along the straight line from ``start`` to ``end`` and log set changes."""
    if steps < 1:
        raise ValueError("steps must be >= 1")
    diff = [k for k in start.as_dict() if getattr(start, k) != getattr(end, k)]
    if len(diff) > 1 or any(k not in _DELTA_SIGN for k in diff):
        raise PathInvalid(f"path must move exactly one of {sorted(_DELTA_SIGN)}, moves {diff}")
    prim = diff[0] if diff else None
    inc = None
    if prim is not None:
        inc = bool(_DELTA_SIGN[prim] * np.sign(getattr(end, prim) - getattr(start, prim)) > 0)
    events = []
    claim = True
    prev = None
    for j, t in enumerate(np.linspace(0.0, 1.0, steps + 1)):
        if prim is None:
            q, value = start, float("nan")
        else:
            value = float((1.0 - t) * getattr(start, prim) + t * getattr(end, prim))
            try:
                q = start.replace(**{prim: value})
            except ParameterError as exc:
                raise PathInvalid(f"step {j}: {exc}") from exc
        cur = find_equilibria(q)
        if prev is not None:
            ev, fits = transition_events(prev, cur, j, value, inc)
            events.extend(ev)
            claim = claim and fits
        prev = cur
    return TransitionReport(start, end, steps, prim, inc, tuple(events), claim)


@dataclass(frozen=True)
class ScaledDeltaResult:
    W0: float
    derivative: float
    closed_form: float
    positive: bool


def scaled_delta_derivative_check(params: ModelParams, probe: ScaledDeltaProbe,
                                  h: float = 1e-6) -> list:
    """d/dgamma of the scaled delta at gamma=1, at every both-active root below Y_H."""
    p = params
    out = []
    for e in find_equilibria(p):
        if e.activity is not Activity.BOTH_ACTIVE or e.W_star >= p.Y_H:
            continue
        W0 = e.W_star
        g = probe.gamma
        step = min(h, 0.5 * g)
        num = (delta_scaled(p, W0, g + step, probe.epsilon)
               - delta_scaled(p, W0, g - step, probe.epsilon)) / (2.0 * step)
        closed = -probe.epsilon * p.alpha_H * (p.theta_H - W0) * (W0 - p.Y_H)
        out.append(ScaledDeltaResult(W0, float(num), float(closed), bool(num > 0.0)))
    return out

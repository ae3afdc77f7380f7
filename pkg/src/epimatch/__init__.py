"""Equilibria of a two-type adverse-selection matching model of infection.

Enumerate and classify the fixed points of pooled prevalence, check comparative
statics, and contrast abstinence with treatment interventions.
"""
from .errors import (BracketExhausted, ConfigError, DegenerateRoot, EpimatchError,
                     InvalidIntervention, InvalidStep, InvalidTolerance, MaxIterExceeded,
                     ParameterError, PathInvalid, SolverError, TrackingLost)
from .kernels import BACKEND
from .model import (ActionProfile, ModelParams, best_response, best_responses, delta,
                    delta_scaled, payoff, pooled_prevalence, w_map)
from .policy import (CompensationLedger, Intervention, InterventionKind, PolicyReport,
                     apply_intervention, compare, slutsky_ledger)
from .solver import (Activity, Equilibrium, EquilibriumSet, Regime, RegimeClass, Stability,
                     brute_force_equilibria, classify_stability, find_equilibria,
                     pareto_dominant, predict_regime)
from .statics import (ScaledDeltaProbe, SensitivityReport, TransitionReport,
                      psi_invariance_check, scaled_delta_derivative_check, sensitivity,
                      sign_check, transition_scan)
from .twopop import (Population, TwoPopEquilibrium, TwoPopParams, solve_two_pop,
                     two_pop_response)

__version__ = "0.1.0"

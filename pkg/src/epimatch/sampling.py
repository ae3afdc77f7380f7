"""Random valid economies spanning all three equilibrium regimes."""
from __future__ import annotations

import numpy as np

from .model import ModelParams

DEFAULT_SEED = 20240101


def draw_economy(rng: np.random.Generator) -> ModelParams:
    """One draw.

    alpha_H ~ U(0.05, 0.95), Y_L ~ U(0, 0.5), Y_H ~ U(Y_L + 0.05, 1),
    theta_L ~ U(0.05, 1), theta_H ~ U(theta_L + 0.01, theta_L + 1),
    psi = max((theta_H - Y_L)/2, 0.05) * U(1, 3).
    """
    aH = rng.uniform(0.05, 0.95)
    YL = rng.uniform(0.0, 0.5)
    YH = rng.uniform(YL + 0.05, 1.0)
    tL = rng.uniform(0.05, 1.0)
    tH = rng.uniform(tL + 0.01, tL + 1.0)
    psi = max(0.5 * (tH - YL), 0.05) * rng.uniform(1.0, 3.0)
    return ModelParams(alpha_H=aH, alpha_L=1.0 - aH, Y_H=YH, Y_L=YL,
                       theta_H=tH, theta_L=tL, psi=psi)


def sample(n: int, seed: int = DEFAULT_SEED, accept=None):
    """List of ``n`` accepted economies and the count of rejected draws."""
    rng = np.random.default_rng(seed)
    out = []
    rejected = 0
    while len(out) < n:
        p = draw_economy(rng)
        if accept is None or accept(p):
            out.append(p)
        else:
            rejected += 1
            if rejected > 1000 * max(n, 1):
                raise RuntimeError("acceptance rule rejects almost every draw")
    return out, rejected

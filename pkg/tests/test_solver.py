import math

import numpy as np
import pytest

from epimatch import solver
from epimatch.errors import BracketExhausted, DegenerateRoot, InvalidTolerance
from epimatch.model import ModelParams, delta, w_map
from epimatch.sampling import draw_economy
from epimatch.solver import (Activity, Regime, Stability, brute_force_equilibria, classify_stability,
                             find_equilibria, pareto_dominant, predict_regime)

SQ = math.sqrt(1.61 ** 2 - 8 * 0.321)
EX1_LOW, EX1_MID = (1.61 - SQ) / 4, (1.61 + SQ) / 4
UNIQUE_W = (1 - math.sqrt(1 - 8 * 0.11)) / 4  # root of 2W² - W + 0.11 in [0.1, 0.2]

# disc(Y_H) = 0 reduces to 0.25 y² - 0.415 y + 0.165025 = 0; take the root with b > 0
TANGENT_YH = (0.415 - math.sqrt(0.0072)) / 0.5
TANGENT_B = 0.395 - 0.5 * TANGENT_YH


@pytest.fixture
def tangent_econ():
    return ModelParams(0.5, 0.5, TANGENT_YH, 0.1, 0.46, 0.45, 0.1)


def random_economies(n, seed):
    rng = np.random.default_rng(seed)
    return [draw_economy(rng) for _ in range(n)]


class TestGoldenExamples:
    def test_three_equilibria(self, ex1):
        eqs = find_equilibria(ex1)
        assert len(eqs) == 3
        assert eqs.W_stars == pytest.approx([EX1_LOW, EX1_MID, 0.6], abs=1e-9)
        assert [e.stability for e in eqs] == [Stability.STABLE, Stability.UNSTABLE, Stability.STABLE]
        assert [e.activity for e in eqs] == [Activity.BOTH_ACTIVE, Activity.BOTH_ACTIVE, Activity.L_INACTIVE]
        corner = eqs[2]
        assert corner.i_L == 0.0 and corner.i_H == 0.0 and corner.pi_H == 0.0

    def test_unique(self, unique_econ):
        eqs = find_equilibria(unique_econ)
        assert len(eqs) == 1
        e = eqs[0]
        assert e.W_star == pytest.approx(UNIQUE_W, abs=1e-9)
        assert e.W_star == pytest.approx(0.16340, abs=1e-5)
        assert (e.i_H, e.i_L) == pytest.approx((0.2366, 0.1366), abs=1e-4)
        assert e.stability is Stability.STABLE and e.activity is Activity.BOTH_ACTIVE
        assert eqs.regime.tag is Regime.UNIQUE_BOTH_ACTIVE

    def test_example_two_contains_focal_point(self, ex2):
        eqs = find_equilibria(ex2)
        focal = pareto_dominant(eqs)
        assert focal.W_star == pytest.approx(0.205, abs=1e-12)
        assert (focal.i_H, focal.i_L) == pytest.approx((0.525, 0.475), abs=1e-12)
        # Y_H = theta_L: the knife-edge corner at Y_H is also a fixed point
        assert eqs.regime.tag is Regime.BOUNDARY
        assert eqs.W_stars == pytest.approx([0.205, 0.3], abs=1e-12)

    def test_invariants_hold(self, ex1, ex2, unique_econ, l_inactive_econ):
        for p in (ex1, ex2, unique_econ, l_inactive_econ):
            for e in find_equilibria(p):
                assert e.residual <= 1e-10
                assert abs(w_map(p, e.W_star) - e.W_star) <= 1e-10
                assert e.pi_H == pytest.approx(p.psi * e.i_H ** 2, abs=1e-15)
                assert e.pi_L == pytest.approx(p.psi * e.i_L ** 2, abs=1e-15)
                l_inactive = e.activity is Activity.L_INACTIVE
                assert l_inactive == (e.i_L == 0.0) == (e.W_star >= p.theta_L)
                if l_inactive:
                    assert e.W_star == p.Y_H

    def test_l_inactive_keeps_H_active(self, l_inactive_econ):
        eqs = find_equilibria(l_inactive_econ)
        assert len(eqs) == 1 and eqs[0].W_star == 0.6
        assert eqs[0].i_H == pytest.approx((0.7 - 0.6) / 0.8, abs=1e-15)
        assert eqs.regime.tag is Regime.UNIQUE_L_INACTIVE


class TestStability:
    def test_example_one_labels(self, ex1):
        assert classify_stability(ex1, EX1_LOW) is Stability.STABLE
        assert classify_stability(ex1, EX1_MID) is Stability.UNSTABLE
        assert classify_stability(ex1, 0.6) is Stability.STABLE

    def test_tangent_root_is_degenerate(self, tangent_econ):
        W_t = tangent_econ.theta_L - TANGENT_B / 2
        assert abs(delta(tangent_econ, W_t)) < 1e-15
        with pytest.raises(DegenerateRoot):
            classify_stability(tangent_econ, W_t)
        assert predict_regime(tangent_econ).tag is Regime.BOUNDARY

    def test_tangent_root_reported_when_found(self, tangent_econ):
        W_t = tangent_econ.theta_L - TANGENT_B / 2
        e = solver.make_equilibrium(tangent_econ, W_t)
        assert e.stability is Stability.DEGENERATE


class TestErrors:
    @pytest.mark.parametrize("tol", [0.0, -1e-10, 1e-3, float("nan")])
    def test_invalid_tolerance(self, ex1, tol):
        with pytest.raises(InvalidTolerance):
            find_equilibria(ex1, tol=tol)

    def test_bracket_exhausted(self, ex1, monkeypatch):
        monkeypatch.setattr(solver, "candidate_roots", lambda p, n: np.array([0.2, 0.3, 0.4, 0.5, 0.6]))
        monkeypatch.setattr(solver, "w_map", lambda p, W: W)
        with pytest.raises(BracketExhausted):
            find_equilibria(ex1)

    def test_spurious_theta_H_zero_discarded(self):
        # theta_H inside [Y_L, Y_H]: delta vanishes there but w(theta_H) = Y_H
        p = ModelParams(0.5, 0.5, 0.9, 0.1, 0.5, 0.2, 0.3)
        assert abs(delta(p, p.theta_H)) < 1e-15
        assert p.theta_H not in find_equilibria(p).W_stars


class TestPredictRegime:
    def test_unique_both_active(self, unique_econ):
        assert predict_regime(unique_econ).tag is Regime.UNIQUE_BOTH_ACTIVE

    def test_example_one_condition_values(self, ex1):
        r = predict_regime(ex1)
        assert r.tag is Regime.COEXISTENCE
        v = r.condition_values
        assert v["threshold"] == pytest.approx(0.79, abs=1e-12)
        assert v["Y_H"] < v["threshold"]
        # the inequality as printed gives 0.012025; the corrected sign gives 0.006025
        assert v["discriminant_as_printed"] == pytest.approx(0.012025, abs=1e-12)
        assert v["discriminant"] == pytest.approx(0.006025, abs=1e-12)

    def test_knife_edge(self, ex1):
        assert predict_regime(ex1.replace(Y_H=0.45)).tag is Regime.BOUNDARY

    def test_corrected_discriminant_decides(self):
        # b > 0 but the corrected discriminant is negative: the printed sign would claim three roots
        p = ModelParams(0.5, 0.5, 0.7, 0.1, 0.46, 0.45, 0.1)
        r = predict_regime(p)
        assert r.condition_values["b"] > 0
        assert r.condition_values["discriminant"] < 0 < r.condition_values["discriminant_as_printed"]
        assert r.tag is Regime.UNIQUE_L_INACTIVE
        assert len(find_equilibria(p)) == 1


def test_oracle_examples(ex1, ex2):
    assert brute_force_equilibria(ex1) == pytest.approx([EX1_LOW, EX1_MID, 0.6], abs=1e-6)
    assert brute_force_equilibria(ex2) == pytest.approx([0.205, 0.3], abs=1e-6)


@pytest.mark.slow
def test_oracle_equivalence_randomized():
    for p in random_economies(10_000, 7):
        got = find_equilibria(p).W_stars
        want = brute_force_equilibria(p)
        assert len(got) == len(want), p
        assert np.allclose(got, want, atol=1e-6, rtol=0), p


def test_randomized_set_properties():
    counts = {1: 0, 2: 0, 3: 0}
    for p in random_economies(3_000, 11):
        eqs = find_equilibria(p)
        n = len(eqs)
        assert 1 <= n <= 3
        counts[n] += 1
        tag = eqs.regime.tag
        if n == 2:
            assert tag is Regime.BOUNDARY
        labels = [e.stability for e in eqs]
        if tag is not Regime.BOUNDARY:
            assert labels == [Stability.STABLE, Stability.UNSTABLE, Stability.STABLE][:n]
            active = [e.i_L > 0 for e in eqs]
            if tag is Regime.UNIQUE_BOTH_ACTIVE:
                assert active == [True]
            elif tag is Regime.UNIQUE_L_INACTIVE:
                assert active == [False]
            else:
                assert active == [True, True, False]
        # Pareto ranking: lower W* means more activity and higher payoffs
        for a, b in zip(eqs, list(eqs)[1:]):
            assert a.W_star < b.W_star
            assert a.i_H >= b.i_H and a.i_L >= b.i_L
            assert a.pi_H >= b.pi_H and a.pi_L >= b.pi_L
        focal = pareto_dominant(eqs)
        for e in eqs:
            assert focal.pi_H >= e.pi_H and focal.pi_L >= e.pi_L
    assert counts[3] > 0 and counts[1] > 0


def test_pareto_examples(ex1, unique_econ):
    eqs = find_equilibria(ex1)
    focal = pareto_dominant(eqs)
    assert focal.W_star == pytest.approx(EX1_LOW, abs=1e-9)
    assert focal.pi_H > eqs[2].pi_H and focal.pi_L > eqs[2].pi_L
    assert focal.pi_L == pytest.approx(0.1 * 0.43163 ** 2, abs=1e-5)
    only = find_equilibria(unique_econ)
    assert pareto_dominant(only) is only[0]

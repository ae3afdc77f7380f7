from fractions import Fraction as F

import numpy as np
import pytest

from epimatch.errors import InvalidIntervention
from epimatch.model import ModelParams
from epimatch.policy import Intervention, InterventionKind, apply_intervention, compare, slutsky_ledger
from epimatch.sampling import draw_economy
from epimatch.solver import Activity, Regime, find_equilibria, pareto_dominant
from epimatch.statics import is_regular

ABSTAIN = Intervention.abstinence(-0.01, -0.03)


def exact(x):
    return F(str(x))


def example_two_oracle():
    """Focal quantities of the abstinence example in exact rationals."""
    psi, W0, W1 = exact(0.1), F(41, 200), F(9, 40)
    th0, th1 = (exact(0.31), exact(0.30)), (exact(0.30), exact(0.27))
    i0 = [(t - W0) / (2 * psi) for t in th0]
    i1 = [(t - W1) / (2 * psi) for t in th1]
    pi0 = [psi * i * i for i in i0]
    pi1 = [psi * i * i for i in i1]
    comp = [(a - b) * i for a, b, i in zip(th0, th1, i0)]
    return i0, i1, pi0, pi1, comp


class TestApply:
    def test_example_two_abstinence(self, ex2):
        q = apply_intervention(ex2, ABSTAIN)
        assert (q.theta_H, q.theta_L) == pytest.approx((0.30, 0.27), abs=1e-15)

    def test_treatment_identity(self, ex1):
        assert apply_intervention(ex1, Intervention.treatment(1.0)) == ex1

    def test_treatment_halves(self, ex1):
        q = apply_intervention(ex1.replace(psi=0.2), Intervention.treatment(0.5))
        assert (q.Y_H, q.Y_L) == pytest.approx((0.3, 0.05), abs=1e-15)

    def test_additive_treatment(self, unique_econ):
        q = apply_intervention(unique_econ, Intervention.treatment(dY_H=-0.05, dY_L=-0.02))
        assert (q.Y_H, q.Y_L) == pytest.approx((0.15, 0.08), abs=1e-15)

    def test_satiation(self, ex2):
        assert apply_intervention(ex2, Intervention.satiation(2.0)).psi == pytest.approx(0.2)

    def test_theta_order_breaks(self, ex2):
        with pytest.raises(InvalidIntervention, match="theta_H > theta_L"):
            apply_intervention(ex2, Intervention.abstinence(-0.02, 0.0))

    @pytest.mark.parametrize("make", [
        lambda: Intervention.abstinence(0.01, 0.0),
        lambda: Intervention.treatment(1.5),
        lambda: Intervention.treatment(0.0),
        lambda: Intervention.treatment(1.0, dY_H=0.1),
        lambda: Intervention.satiation(0.0),
        lambda: Intervention("vaccination"),
    ])
    def test_bad_interventions(self, make):
        with pytest.raises((InvalidIntervention, ValueError)):
            make()


class TestCompare:
    def test_example_two_abstinence(self, ex2):
        i0, i1, pi0, pi1, _ = example_two_oracle()
        r = compare(ex2, ABSTAIN)
        e0, e1 = r.focal_before, r.focal_after
        assert e0.W_star == pytest.approx(0.205, abs=1e-12)
        assert e1.W_star == pytest.approx(0.225, abs=1e-12)
        assert r.delta_W == pytest.approx(0.02, abs=1e-12)
        assert (e0.i_H, e0.i_L) == pytest.approx([float(x) for x in i0], abs=1e-12)
        assert (e1.i_H, e1.i_L) == pytest.approx([float(x) for x in i1], abs=1e-12)
        assert (e1.i_H, e1.i_L) == pytest.approx((0.375, 0.225), abs=1e-12)
        assert (e0.pi_H, e0.pi_L) == pytest.approx((0.0275625, 0.0225625), abs=1e-12)
        assert (e1.pi_H, e1.pi_L) == pytest.approx((0.0140625, 0.0050625), abs=1e-12)
        assert [float(x) for x in pi1] == pytest.approx([e1.pi_H, e1.pi_L], abs=1e-12)
        # old utility at new action: 0.375*0.31 - 0.1*0.375² - 0.375*0.225
        assert r.payoff_old_utility["H"] == pytest.approx(0.0178125, abs=1e-12)
        assert r.payoff_old_utility["L"] == pytest.approx(0.0118125, abs=1e-12)
        assert r.payoff_new_utility["H"] == pytest.approx(0.0140625, abs=1e-12)
        assert r.revealed_preference_chain_holds == {"H": True, "L": True}

    def test_null_intervention(self, ex1):
        r = compare(ex1, Intervention.abstinence(0.0, 0.0))
        assert r.delta_W == 0.0 and r.baseline == r.treated
        assert r.focal_before == r.focal_after

    def test_satiation_neutral(self, ex1):
        for f in (0.8, 2.0, 5.0):
            assert compare(ex1, Intervention.satiation(f)).delta_W == 0.0

    def test_raising_theta_H_is_reverse_abstinence(self, ex1):
        # the higher-utility economy is the baseline; lowering theta_H back recovers ex1
        hi = ex1.replace(theta_H=0.47)
        r = compare(hi, Intervention.abstinence(-0.01, 0.0))
        assert r.focal_before.W_star == pytest.approx(0.38209, abs=1e-5)
        assert (r.focal_before.i_H, r.focal_before.i_L) == pytest.approx((0.44, 0.34), abs=5e-3)
        assert (r.focal_after.i_H, r.focal_after.i_L) == pytest.approx((0.48, 0.43), abs=5e-3)
        # payoffs are lower in the economy with the larger theta_H
        assert r.focal_before.pi_H < r.focal_after.pi_H and r.focal_before.pi_L < r.focal_after.pi_L


class TestLedger:
    def test_example_two(self, ex2):
        *_, comp = example_two_oracle()
        led = slutsky_ledger(ex2, ABSTAIN)
        assert float(comp[0]) == pytest.approx(0.00525, abs=1e-15)
        assert float(comp[1]) == pytest.approx(0.01425, abs=1e-15)
        assert led["H"].compensation == pytest.approx(0.00525, abs=1e-12)
        assert led["L"].compensation == pytest.approx(0.01425, abs=1e-12)
        assert led.H.compensated_payoff == pytest.approx(0.0193125, abs=1e-12)
        assert led.L.compensated_payoff == pytest.approx(0.0193125, abs=1e-12)
        assert led.H.baseline_payoff == pytest.approx(0.0275625, abs=1e-12)
        assert led.insufficient_for_all

    def test_zero_shift(self, ex2):
        led = slutsky_ledger(ex2, Intervention.abstinence(0.0, 0.0))
        assert led.H.compensation == 0.0 == led.L.compensation
        assert led.H.sufficient and led.L.sufficient

    def test_single_agent_analogue(self):
        # nearly identical infection rates make W almost action-independent
        p = ModelParams(0.5, 0.5, 0.2 + 1e-9, 0.2, 0.5, 0.4, 0.2)
        led = slutsky_ledger(p, ABSTAIN)
        assert led.H.sufficient and led.L.sufficient
        assert led.H.compensation > 0 and led.L.compensation > 0

    def test_requires_abstinence(self, ex2):
        with pytest.raises(InvalidIntervention):
            slutsky_ledger(ex2, Intervention.treatment(0.9))


def both_active_regular(n, seed):
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < n:
        p = draw_economy(rng)
        eqs = find_equilibria(p)
        if eqs.regime.tag is Regime.BOUNDARY:
            continue
        e = pareto_dominant(eqs)
        if e.activity is Activity.BOTH_ACTIVE and is_regular(p, e):
            out.append(p)
    return out


def test_treatment_monotone_randomized():
    checked = 0
    for p in both_active_regular(200, 21):
        for f in (0.5, 0.8, 0.99):
            try:
                r = compare(p, Intervention.treatment(f))
            except InvalidIntervention:
                continue  # lower Y_k can push psi below the interiority bound
            checked += 1
            assert r.delta_W <= 1e-12, p
            assert r.focal_after.i_H >= r.focal_before.i_H - 1e-12
            assert r.focal_after.i_L >= r.focal_before.i_L - 1e-12
    assert checked > 300


def test_abstinence_chain_randomized():
    rng = np.random.default_rng(4)
    checked = 0
    for p in both_active_regular(200, 22):
        dH = -rng.uniform(0.0, 0.02)
        dL = dH - rng.uniform(0.0, 0.02)
        try:
            r = compare(p, Intervention.abstinence(dH, dL))
        except InvalidIntervention:
            continue
        assert all(r.revealed_preference_chain_holds.values()), p
        checked += 1
    assert checked > 150

from __future__ import annotations

import math

import numpy as np
import pytest

from pittlab.conditions import (CalderonSegment, ExponentConfig, calderon_majorant, default_s_grid,
                                global_condition_sup, hardy_condition, l2_condition_sup, local_condition_sup,
                                monotone_implication_check, necessary_condition_sup, region_membership_polyexp)
from pittlab.errors import InvalidConfigError
from pittlab.geometry import make_space
from pittlab.profiles import One, PolyExpSpatial, PowerSpectral, Tabulated
from pittlab.rearrangement import MonotoneProfile

ONE = MonotoneProfile.constant(1.0)
UNIT_STEP = MonotoneProfile((1.0,), (1.0,), tail_exponent=None)


def knee(a: float) -> MonotoneProfile:
    """``min(1, t^-a)``."""
    return MonotoneProfile((1.0,), (1.0,), tail_exponent=-a, head_exponent=0.0)


def test_exponent_config_validation():
    with pytest.raises(InvalidConfigError):
        ExponentConfig(0.5, 2.0)
    with pytest.raises(InvalidConfigError):
        ExponentConfig(2.0, 2.0, theta0=1.6)
    cfg = ExponentConfig(4 / 3, 4.0, 3.0)
    assert cfg.p_conj == pytest.approx(4.0)
    assert cfg.q0_max == 3.0 and cfg.q0_small == pytest.approx(1.5)
    with pytest.raises(InvalidConfigError):
        local_condition_sup(ONE, ONE, ExponentConfig(2.0, 1.5))
    with pytest.raises(InvalidConfigError):
        local_condition_sup(ONE, ONE, ExponentConfig(1.5, 2.0, 1.0))


@pytest.mark.parametrize("p", [1.25, 4 / 3, 1.5, 2.0])
def test_trivial_local_sup_is_one_when_q_is_dual(p):
    cfg = ExponentConfig(p, p / (p - 1), 2.0)
    rep = local_condition_sup(ONE, ONE, cfg)
    assert rep.verdict == "finite"
    assert rep.sup_value == pytest.approx(1.0, abs=1e-12)
    assert np.allclose(rep.branch_values, 1.0, atol=1e-12)


def test_trivial_local_diverges_when_q_exceeds_dual():
    rep = local_condition_sup(ONE, ONE, ExponentConfig(4 / 3, 5.0, 2.0))
    assert rep.verdict == "divergent"
    assert rep.argmax_s == pytest.approx(1e4)


def test_global_condition_examples():
    rep = global_condition_sup(ONE, ONE, ExponentConfig(4 / 3, 4.0, 2.0))
    assert rep.verdict == "finite"
    vals = np.asarray(rep.branch_values)
    assert np.ptp(vals) <= 1e-10 * vals.max()
    # closed form: (2/(q-2))^(1/q) (2/(p'-2))^(1/p') with q = p' = 4
    assert rep.sup_value == pytest.approx(1.0, rel=1e-10)
    assert global_condition_sup(ONE, ONE, ExponentConfig(2.0, 2.0, 2.0)).verdict == "divergent"


def test_l2_condition_examples():
    assert l2_condition_sup(knee(1.0), knee(1.0)).verdict == "finite"
    assert l2_condition_sup(ONE, knee(1.0)).verdict == "divergent"
    rep = l2_condition_sup(UNIT_STEP, UNIT_STEP)
    assert rep.verdict == "finite" and math.isfinite(rep.sup_value)


def test_report_fields_and_refinement():
    rep = local_condition_sup(knee(0.3), knee(0.6), ExponentConfig(1.5, 2.0, 2.0))
    assert rep.grid[0] <= 1e-4 and rep.grid[-1] >= 1e4
    assert len(rep.branch_values) == len(rep.grid)
    assert rep.sup_value >= max(rep.branch_values)
    assert rep.sup_value <= 1.05 * max(rep.branch_values)
    d = rep.as_dict()
    assert d["verdict"] == "finite" and len(d["factor1"]) == len(rep.grid)


def test_hardy_examples():
    cfg = ExponentConfig(2.0, 2.0)

    def u_tail(t):
        t = np.asarray(t, dtype=float)
        with np.errstate(divide="ignore"):
            return np.where(t >= 1, 1.0 / t, 0.0)

    def one(t):
        return np.ones_like(np.asarray(t, dtype=float))

    rep = hardy_condition(u_tail, one, cfg, "forward", breakpoints=(1.0,))
    assert rep.verdict == "finite"
    # sup_s (int_max(s,1)^inf t^-2)^(1/2) s^(1/2) = 1, attained for s >= 1
    assert rep.sup_value == pytest.approx(1.0, rel=1e-6)
    assert hardy_condition(one, one, cfg, "forward").verdict == "divergent"

    def step(t):
        return np.where(np.asarray(t, dtype=float) <= 1, 1.0, 0.0)

    def v_step(t):
        with np.errstate(divide="ignore"):
            return 1.0 / step(t)

    rep = hardy_condition(step, v_step, cfg, "dual", breakpoints=(1.0,))
    assert rep.verdict == "finite"
    with pytest.raises(InvalidConfigError):
        hardy_condition(one, one, cfg, "sideways")


def test_calderon_majorant_closed_forms():
    for q0 in (1.25, 1.5, 2.0, 3.0, 6.0):
        assert calderon_majorant(CalderonSegment.pitt(q0), UNIT_STEP, 1.0) == pytest.approx(1.0, abs=1e-8)
    value = calderon_majorant(CalderonSegment.pitt(2.0), UNIT_STEP, 2.0)
    assert abs(value - 1 / math.sqrt(2)) <= 1e-8
    zero = MonotoneProfile((1.0,), (0.0,), tail_exponent=None)
    assert calderon_majorant(CalderonSegment.pitt(2.0), zero, 3.0) == 0.0


@pytest.mark.parametrize("q0", [1.5, 2.0, 4.0])
def test_calderon_majorant_non_increasing_in_t(q0):
    seg = CalderonSegment.pitt(q0)
    for f in (UNIT_STEP, knee(1.5), MonotoneProfile((0.5, 2.0, 5.0), (3.0, 1.0, 0.2), tail_exponent=-2.0)):
        vals = [calderon_majorant(seg, f, t) for t in np.logspace(-2, 2, 30)]
        assert np.all(np.diff(vals) <= 1e-12 * np.abs(vals[:-1]))


def test_calderon_segment_validation():
    with pytest.raises(InvalidConfigError):
        CalderonSegment(0.5, 0.5, 0.5, 0.2)
    with pytest.raises(InvalidConfigError):
        CalderonSegment(0.5, 1.5, 1.0, 0.0)
    with pytest.raises(InvalidConfigError):
        CalderonSegment.pitt(1.0)
    assert CalderonSegment.pitt(2.0).slope == pytest.approx(-1.0)


def random_pair(rng):
    """Random non-increasing U and 1/V: two to four log-linear pieces with random end exponents."""
    out = []
    for _ in range(2):
        k = int(rng.integers(2, 5))
        bps = np.sort(rng.uniform(-2, 2, k))
        b = 10.0 ** bps
        steps = rng.uniform(0, 3, k)
        v = np.exp(-np.cumsum(steps))
        out.append(MonotoneProfile(tuple(b), tuple(v), tail_exponent=-float(rng.uniform(0, 3)),
                                   head_exponent=-float(rng.uniform(0, 0.9))))
    return out


@pytest.mark.parametrize("branch,cfg", [
    ("p<q0", ExponentConfig(1.5, 2.5, 2.0)),
    ("q>q0'", ExponentConfig(2.5, 3.5, 3.0)),
])
def test_monotone_implication_randomized_battery(branch, cfg):
    rng = np.random.default_rng(20240611 + len(branch))
    grid = default_s_grid(8)
    premise_met = 0
    for _ in range(20):
        U, Vinv = random_pair(rng)
        for N in (1, 3):
            res = monotone_implication_check(U, Vinv, cfg, N, grid)
            assert res["applicable"]
            assert res["implication_holds"], (branch, U, Vinv, N)
            premise_met += res["local"].finite
    # the battery must exercise the implication, not only its vacuous branch
    assert premise_met >= 5


def test_monotone_implication_examples():
    cfg = ExponentConfig(1.5, 3.0, 2.0)
    res = monotone_implication_check(knee(1.0), ONE, cfg, 3)
    assert res["local"].finite and res["global"].finite and res["implication_holds"]
    zero = MonotoneProfile((1.0,), (0.0,), tail_exponent=None)
    res = monotone_implication_check(zero, ONE, cfg, 1)
    assert res["local"].sup_value == 0 and res["global"].sup_value == 0 and res["implication_holds"]
    res = monotone_implication_check(ONE, ONE, ExponentConfig(2.0, 2.0, 2.0), 1)
    assert not res["applicable"] and res["implication_holds"] is None
    assert "inapplicable" in res["note"]


def test_necessary_condition_examples(h3):
    space, ev, model = h3
    zero = Tabulated((0.0, 1.0), (0.0, 0.0))
    rep = necessary_condition_sup(zero, One(), ExponentConfig(1.5, 2.0, 2.0), None, model, ev)
    assert rep.sup_value == 0.0 and rep.verdict == "finite"

    q = 2.0
    rep = necessary_condition_sup(PowerSpectral(3 / q), PolyExpSpatial(0.0, 0.5), ExponentConfig(1.5, q, 2.0),
                                  None, model, ev)
    assert rep.verdict == "divergent"

    cfg = ExponentConfig(4 / 3, 2.0, 2.0)
    rep = necessary_condition_sup(PowerSpectral(0.75), One(), cfg, None, model, ev)
    assert rep.verdict == "finite" and math.isfinite(rep.sup_value)


def test_necessary_condition_general_kappa_matches_collapsed_form(h3):
    space, ev, model = h3
    cfg = ExponentConfig(4 / 3, 2.0, 2.0)
    grid = np.logspace(-2, 1, 13)
    a = necessary_condition_sup(PowerSpectral(0.75), One(), cfg, None, model, ev, grid)
    b = necessary_condition_sup(PowerSpectral(0.75), One(), cfg, 1 / (cfg.p - 1), model, ev, grid)
    assert np.allclose(a.branch_values, b.branch_values, rtol=1e-12)


def test_region_membership_examples():
    h3 = make_space(2, 0)
    res = region_membership_polyexp(h3, ExponentConfig(4 / 3, 2.0, 2.0), 0.75, 0.0, 0.0)
    assert res["sufficient"] is True
    res = region_membership_polyexp(h3, ExponentConfig(1.5, 2.0, 2.0), 1.5, 0.0, 0.5)
    assert res["necessary"] is False and "σ<3/q" in res["violated"]
    res = region_membership_polyexp(h3, ExponentConfig(1.5, 2.0, 2.0), 0.0, 1.0, 0.5)
    assert res["necessary"] is False and "κ−σ≤n(1−1/p−1/q)" in res["violated"]


def test_region_membership_is_scale_free():
    a = region_membership_polyexp(make_space(2, 0), ExponentConfig(1.5, 3.0, 1.5), 0.2, 0.1, 0.4)
    b = region_membership_polyexp(make_space(2, 0), ExponentConfig(1.5, 3.0, 1.5), 0.2, 0.1, 0.4)
    assert a == b


def test_region_q0_swap():
    h3 = make_space(2, 0)
    for args in [(0.2, 0.1, 0.4), (0.5, 0.0, 0.1), (0.9, 0.3, 0.0)]:
        a = region_membership_polyexp(h3, ExponentConfig(1.5, 3.0, 1.5), *args)
        b = region_membership_polyexp(h3, ExponentConfig(1.5, 3.0, 3.0), *args)
        assert (a["sufficient"], a["necessary"]) == (b["sufficient"], b["necessary"])


def test_region_two_dimensional_flag():
    plane = make_space(1, 0)
    q = 2.0
    res = region_membership_polyexp(plane, ExponentConfig(1.5, q, 2.0), 2 / q, 0.0, 0.5)
    assert res["necessary"] is None
    assert any("n=2" in note for note in res["notes"])

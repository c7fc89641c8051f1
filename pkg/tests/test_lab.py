from __future__ import annotations

import math

import numpy as np
import pytest

from pittlab.conditions import ExponentConfig
from pittlab.errors import CalibrationError, DomainError, InvalidConfigError
from pittlab.geometry import make_space
from pittlab.harish_chandra import make_model
from pittlab.lab import (VerificationReport, WitnessRule, calderon_domination_check, calibrate_plancherel_constant,
                         localization_ratios, paley_ratio, pitt_lhs, pitt_ratio_sweep, plancherel_ratio,
                         smooth_window, spectral_weight_mass, standard_family, unboundedness_witness, worker_count)
from pittlab.profiles import (Bump, Cutoff, Indicator, One, PolyExpSpatial, PowerSpectral, Scaled, Tabulated,
                              weighted_lp_norm)
from pittlab.spherical import default_evaluator

KAPPA_H3 = 1 / (4 * math.pi)
ZERO = Tabulated((0.0, 1.0), (0.0, 0.0))
THREE = Tabulated((0.0, 1.0), (3.0, 3.0))


def test_smooth_window_shape():
    x = np.linspace(0, 1.2, 121)
    w = smooth_window(x)
    assert np.all(w[x <= 0.5] == 1.0) and np.all(w[x >= 1.0] == 0.0)
    assert np.all(np.diff(w) <= 0)


def test_worker_count_env(monkeypatch):
    monkeypatch.setenv("PITTLAB_THREADS", "3")
    assert worker_count() == 3
    monkeypatch.setenv("PITTLAB_THREADS", "junk")
    assert worker_count() == 1


def test_plancherel_constant_h3(h3):
    space, ev, model = h3
    kappa = calibrate_plancherel_constant(space, ev, [Indicator(1.0), Bump(space, 1.0, 0.2, 1.0)], model)
    assert kappa > 0
    assert kappa == pytest.approx(KAPPA_H3, rel=1e-3)
    # invariant under dilation of the profile
    assert plancherel_ratio(space, ev, model, Indicator(1.3)) == pytest.approx(kappa, rel=1e-3)


def test_plancherel_calibration_validation(h3):
    space, ev, model = h3
    with pytest.raises(InvalidConfigError):
        calibrate_plancherel_constant(space, ev, [Indicator(1.0)], model)
    with pytest.raises(CalibrationError):
        calibrate_plancherel_constant(space, ev, [Indicator(1.0), Indicator(2.0)], model, rtol=1e-12)


def test_pitt_lhs_trivial_and_plancherel(h3):
    space, ev, model = h3
    cfg = ExponentConfig(2.0, 2.0, 2.0)
    f = Indicator(1.0)
    assert pitt_lhs(space, ev, model, f, ZERO, cfg) == 0.0
    lhs = pitt_lhs(space, ev, model, f, One(), cfg)
    norm = math.sqrt(math.sinh(2.0) - 2.0)
    assert weighted_lp_norm(space, f, One(), 2.0) == pytest.approx(norm, rel=1e-10)
    assert lhs == pytest.approx(norm / math.sqrt(KAPPA_H3), rel=1e-3)


def test_verification_report_invariants():
    with pytest.raises(InvalidConfigError):
        VerificationReport("x", {}, (), (), (), (), "unbounded")
    with pytest.raises(InvalidConfigError):
        VerificationReport("x", {}, (), (), (), (), "bounded", witness=((0, 1.0),))
    rep = VerificationReport("x", {}, ({"kind": "indicator", "radius": 1.0},), (2.0,), (1.0,), (2.0,), "bounded")
    assert rep.empirical_constant == 2.0
    assert rep.csv_rows() == [(0, "indicator", 1.0, 2.0, 1.0, 2.0)]


def test_witness_rule():
    rule = WitnessRule()
    assert rule.fires([1, 2, 4, 8, 16, 32])
    assert not rule.fires([1, 2, 4, 8, 9.5])
    assert not rule.fires([1, 20, 15, 30, 40])
    assert rule.fires([1.0, math.inf])
    with pytest.raises(InvalidConfigError):
        WitnessRule(growth=1.0)


def test_standard_family_is_fixed(h3):
    space, _, _ = h3
    fam = standard_family(space)
    assert [f.as_dict()["kind"] for f in fam] == ["indicator"] * 3 + ["bump"] * 3
    cfg = ExponentConfig(4 / 3, 4.0, 2.0)
    assert len(standard_family(space, One(), cfg)) == 9


def test_pitt_sweep_hausdorff_young_bounded_and_homogeneous(h3):
    space, ev, model = h3
    cfg = ExponentConfig(4 / 3, 4.0, 2.0)
    fam = [Indicator(1.0), Bump(space, 1.5, 0.5, 1.0)]
    rep = pitt_ratio_sweep(space, ev, model, One(), One(), cfg, fam)
    assert rep.verdict == "bounded" and rep.witness is None
    assert all(0 < r < 10 for r in rep.ratios)
    scaled = pitt_ratio_sweep(space, ev, model, One(), One(), cfg, [Scaled(f, 2.5) for f in fam])
    assert np.allclose(scaled.ratios, rep.ratios, rtol=1e-9)
    tripled = pitt_ratio_sweep(space, ev, model, THREE, One(), cfg, fam)
    assert np.allclose(tripled.ratios, 3 * np.asarray(rep.ratios), rtol=1e-9)
    assert rep.empirical_constant == max(rep.ratios)


def test_pitt_sweep_rejects_bad_family(h3):
    space, ev, model = h3
    cfg = ExponentConfig(4 / 3, 4.0, 2.0)
    with pytest.raises(InvalidConfigError):
        pitt_ratio_sweep(space, ev, model, One(), One(), cfg, [])


def test_witness_fires_at_sigma_three_over_q(h3):
    space, ev, model = h3
    q = 2.0
    cfg = ExponentConfig(1.5, q, 2.0)
    rep = unboundedness_witness(space, ev, model, PowerSpectral(3 / q), One(), cfg, (0.5, 1.0, 2.0))
    assert rep.verdict == "unbounded" and rep.witness is not None


def test_witness_quiet_for_admissible_config(h3):
    space, ev, model = h3
    cfg = ExponentConfig(4 / 3, 2.0, 2.0)
    rep = unboundedness_witness(space, ev, model, PowerSpectral(0.75), One(), cfg, (1.0, 2.0, 4.0, 6.0, 8.0))
    assert rep.verdict == "bounded" and rep.witness is None
    lo, hi = rep.localization_bounds
    assert 0 < lo <= hi <= 1 + 1e-6


def test_witness_validation(h3):
    space, ev, model = h3
    cfg = ExponentConfig(1.5, 2.0, 2.0)
    with pytest.raises(InvalidConfigError):
        unboundedness_witness(space, ev, model, One(), One(), cfg, (1.0, 3.0, 2.0))
    with pytest.raises(DomainError):
        unboundedness_witness(space, ev, model, One(), One(), cfg, (1.0, 100.0))


@pytest.mark.parametrize("alpha", [0.5, 1.0, 2.0])
def test_localization_ratio_bounds(h3, alpha):
    space, ev, _ = h3
    lo, hi = localization_ratios(space, ev, Indicator(alpha), 1.5)
    assert 0.3 < lo <= hi <= 1 + 1e-6


def test_spectral_weight_mass():
    model = make_model(make_space(2, 0))
    # |c|^-2 = lambda^2 on the three-dimensional space
    assert spectral_weight_mass(model, Cutoff(One(), 1.0)) == pytest.approx(2 / 3, rel=1e-10)
    assert spectral_weight_mass(model, One()) == math.inf
    assert spectral_weight_mass(model, PowerSpectral(3.5)) == math.inf


def test_paley_p2_is_plancherel(h3):
    space, ev, model = h3
    for u in (Cutoff(One(), 1.0), Cutoff(THREE, 2.0), Tabulated((0.0, 1.0, 4.0), (1.0, 1.0, 0.0))):
        r = paley_ratio(space, ev, model, Indicator(1.0), u, 2.0)
        assert r == pytest.approx(KAPPA_H3 ** -0.5, rel=1e-3)


@pytest.mark.parametrize("p", [1.0, 1.5])
def test_paley_low_p_stable_and_homogeneous(h3, p):
    space, ev, model = h3
    f = Indicator(1.0)
    base = paley_ratio(space, ev, model, f, Cutoff(One(), 1.0), p)
    assert math.isfinite(base) and base > 0
    assert paley_ratio(space, ev, model, f, Cutoff(One(), 1.0), p, refinement=2) == pytest.approx(base, rel=0.02)
    assert paley_ratio(space, ev, model, f, Cutoff(THREE, 1.0), p) == pytest.approx(base, rel=1e-9)


def test_paley_refuses_low_dimension_and_bad_weight():
    plane = make_space(1, 0)
    with pytest.raises(DomainError):
        paley_ratio(plane, default_evaluator(plane), make_model(plane), Indicator(1.0), Cutoff(One(), 1.0), 1.5)
    h3 = make_space(2, 0)
    with pytest.raises(InvalidConfigError):
        paley_ratio(h3, default_evaluator(h3), make_model(h3), Indicator(1.0), One(), 1.5)


def test_calderon_domination(h3):
    space, ev, model = h3
    assert calderon_domination_check(space, ev, model, Scaled(Indicator(1.0), 0.0), 2.0) == 0.0
    r = calderon_domination_check(space, ev, model, Indicator(1.0), 2.0)
    assert 0 < r < 10
    assert calderon_domination_check(space, ev, model, Scaled(Indicator(1.0), 4.0), 2.0) == pytest.approx(r, rel=1e-9)


def test_pitt_sweep_admissible_other_space():
    space = make_space(2, 1)
    ev, model = default_evaluator(space), make_model(space)
    cfg = ExponentConfig(4 / 3, 4.0, 2.0)
    rep = pitt_ratio_sweep(space, ev, model, One(), PolyExpSpatial(0.0, 0.0), cfg, [Indicator(1.0), Indicator(2.0)])
    assert rep.verdict == "bounded"

"""Symbol values against independent oracles, parity, asymptotics."""

import numpy as np
import pytest

from whithamlab.dispersion import (
    Symbol, eval_symbol, invert_group_velocity, _whitham_series, _whitham_direct,
)
from whithamlab.errors import DomainError, NoStationaryPointError, UnsupportedOrderError

SYM = Symbol.whitham()

# frozen from an arbitrary-precision oracle (mpmath, 40 digits)
LAM_1 = 0.8726936208978297       # sqrt(tanh 1)
DLAM_1 = 0.6769663884755969      # (tanh 1 + sech^2 1) / (2 sqrt(tanh 1))
LAM_2 = 1.3885442593420037
LAM_3 = 1.7277627907384136
XI0_HALF = 1.5173628121818369    # L'(xi0) = 1/2


def test_frozen_point_values():
    assert eval_symbol(SYM, 1.0, 0) == pytest.approx(LAM_1, abs=1e-14)
    assert eval_symbol(SYM, 1.0, 1) == pytest.approx(DLAM_1, abs=1e-14)
    assert eval_symbol(SYM, 2.0, 0) == pytest.approx(LAM_2, abs=1e-14)
    assert eval_symbol(SYM, 3.0, 0) == pytest.approx(LAM_3, abs=1e-14)


def test_low_frequency_cubic_behavior():
    # L(0.01) = 0.01 - 0.01^3/6 + O(1e-10)
    assert eval_symbol(SYM, 0.01, 0) == pytest.approx(0.01 - 0.01 ** 3 / 6.0, abs=1e-10)
    assert eval_symbol(SYM, 0.0, 1) == 1.0


def test_mpmath_oracle_sweep():
    mp = pytest.importorskip("mpmath")
    mp.mp.dps = 30
    for x in (1e-4, 0.01, 0.049, 0.051, 0.3, 1.7, 9.0, 80.0):
        exact = float(mp.sqrt(mp.mpf(x) * mp.tanh(mp.mpf(x))))
        assert eval_symbol(SYM, x, 0) == pytest.approx(exact, rel=1e-14)


def test_oddness_property():
    rng = np.random.default_rng(0)
    xs = rng.uniform(-50.0, 50.0, 10_000)
    defect = np.max(np.abs(eval_symbol(SYM, xs, 0) + eval_symbol(SYM, -xs, 0)))
    assert defect < 1e-12


def test_derivative_parity():
    xs = np.array([0.01, 0.2, 3.0, 40.0])
    assert np.allclose(eval_symbol(SYM, -xs, 1), eval_symbol(SYM, xs, 1), rtol=0, atol=0)
    assert np.allclose(eval_symbol(SYM, -xs, 2), -eval_symbol(SYM, xs, 2), rtol=0, atol=0)
    assert np.allclose(eval_symbol(SYM, -xs, 3), eval_symbol(SYM, xs, 3), rtol=0, atol=0)


def test_finite_difference_consistency():
    rng = np.random.default_rng(1)
    xs = np.concatenate([rng.uniform(0.2, 30.0, 200), rng.uniform(-30.0, -0.2, 200)])
    for order in (0, 1, 2):
        h = 1e-4 * np.maximum(1.0, np.abs(xs))
        fd = (eval_symbol(SYM, xs + h, order) - eval_symbol(SYM, xs - h, order)) / (2.0 * h)
        exact = eval_symbol(SYM, xs, order + 1)
        rel = np.abs(fd - exact) / np.maximum(np.abs(exact), 1e-12)
        assert np.max(rel) < 1e-6


def test_series_direct_crossover():
    a = np.array([SYM.zero_threshold])
    for order in range(4):
        gap = abs(_whitham_series(a, order)[0] - _whitham_direct(a, order)[0])
        assert gap < 1e-12


def test_high_frequency_asymptotics():
    xs = np.geomspace(1e3, 1e6, 300)
    assert np.max(np.abs(eval_symbol(SYM, xs, 0) / np.sqrt(xs) - 1.0)) < 1e-3
    # L^(k) ~ c_k xi^(1/2-k) with c = (1/2, -1/4, 3/8)
    for order, const in ((1, 0.5), (2, 0.25), (3, 0.375)):
        ratio = np.abs(eval_symbol(SYM, xs, order)) * xs ** (order - 0.5)
        assert np.all(ratio > 0.9 * const)
        assert np.all(ratio < 1.1 * const)
    assert np.all(eval_symbol(SYM, xs, 2) < 0.0)


def test_concavity_on_positive_axis():
    xs = np.geomspace(1e-6, 1e5, 2000)
    assert np.all(eval_symbol(SYM, xs, 2) < 0.0)


def test_eval_errors():
    with pytest.raises(UnsupportedOrderError):
        eval_symbol(SYM, 1.0, 4)
    with pytest.raises(DomainError):
        eval_symbol(SYM, np.inf, 0)
    with pytest.raises(DomainError):
        eval_symbol(SYM, np.nan, 1)


def test_invert_group_velocity_roundtrip():
    c = eval_symbol(SYM, 1.0, 1)
    assert invert_group_velocity(SYM, c) == pytest.approx(1.0, abs=1e-10)
    x0 = invert_group_velocity(SYM, 0.5)
    assert x0 == pytest.approx(XI0_HALF, abs=1e-9)
    assert abs(eval_symbol(SYM, x0, 1) - 0.5) < 1e-12


def test_invert_group_velocity_near_sonic():
    x0 = invert_group_velocity(SYM, 1.0 - 1e-8)
    assert 0.0 < x0 < 1e-3


def test_invert_group_velocity_out_of_range():
    for c in (-0.1, 0.0, 1.0, 1.5):
        with pytest.raises(NoStationaryPointError):
            invert_group_velocity(SYM, c)


def test_residual_tolerance_across_range():
    for c in np.geomspace(1e-4, 0.999, 40):
        x0 = invert_group_velocity(SYM, c)
        assert abs(eval_symbol(SYM, x0, 1) - c) < 1e-12


def test_comparison_symbols():
    kdv = Symbol.kdv()
    assert eval_symbol(kdv, 2.0, 0) == pytest.approx(2.0 - 8.0 / 6.0)
    assert eval_symbol(kdv, 2.0, 2) == -2.0
    hw = Symbol.half_wave()
    assert eval_symbol(hw, 4.0, 0) == pytest.approx(2.0)
    assert eval_symbol(hw, -4.0, 0) == pytest.approx(-2.0)
    fk = Symbol.fkdv(0.5)
    assert eval_symbol(fk, 4.0, 0) == pytest.approx(4.0 ** 1.5)
    assert eval_symbol(fk, 4.0, 1) == pytest.approx(1.5 * 2.0)


def test_fkdv_domain_errors():
    with pytest.raises(DomainError):
        Symbol.fkdv(-1.0)
    with pytest.raises(DomainError):
        Symbol.fkdv(2.5)
    fk = Symbol.fkdv(0.5)
    with pytest.raises(DomainError):
        eval_symbol(fk, 0.0, 1)
    # order 0 at zero is fine
    assert eval_symbol(fk, 0.0, 0) == 0.0


def test_whitham_matches_low_and_high_models():
    kdv = Symbol.kdv()
    xs = np.linspace(-0.3, 0.3, 11)
    assert np.max(np.abs(eval_symbol(SYM, xs, 0) - eval_symbol(kdv, xs, 0))) < 2e-4
    hw = Symbol.half_wave()
    xs = np.geomspace(50.0, 500.0, 11)
    assert np.max(np.abs(eval_symbol(SYM, xs, 0) / eval_symbol(hw, xs, 0) - 1.0)) < 1e-6

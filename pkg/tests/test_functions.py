import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from numpy.testing import assert_allclose

from qig import functions as fn
from qig.errors import DomainError, FileFormatError, InvariantViolation, VerificationError


def test_probe_grid_shape():
    grid = fn.probe_grid()
    assert grid.size == 61
    assert 1.0 in grid
    assert grid.min() == pytest.approx(1e-3) and grid.max() == pytest.approx(1e3)


def test_sld_values():
    f = fn.sld()
    assert f(3.0) == 2.0
    assert f.value_at_zero == 0.5
    assert f.second_derivative_at_one == 0.0


def test_harmonic_values():
    f = fn.harmonic()
    assert f(1.0) == 1.0
    assert f(2.0) == pytest.approx(4.0 / 3.0)
    assert f.value_at_zero == 0.0


def test_wyd_values():
    f = fn.wyd(0.5)
    # f_{1/2}(x) = ((sqrt(x)+1)/2)^2, so f(4) = 9/4
    assert float(f(4.0)) == pytest.approx(9.0 / 4.0, abs=1e-14)
    assert float(f(np.asarray(1.0))) == pytest.approx(1.0, abs=1e-14)
    assert fn.wyd(0.3).value_at_zero == pytest.approx(0.21)
    with pytest.raises(DomainError):
        fn.wyd(0.0)
    with pytest.raises(DomainError):
        fn.wyd(1.0)


@pytest.mark.parametrize("p", [0.1, 0.3, 0.5, 0.9])
def test_wyd_series_window_is_continuous(p):
    f = fn.wyd(p)
    # across the |x-1| = 1e-4 switch the two evaluation paths must agree
    for x in (1.0 - 1.2e-4, 1.0 - 0.8e-4, 1.0 + 0.8e-4, 1.0 + 1.2e-4):
        direct = p * (1 - p) * (x - 1) ** 2 / ((x**p - 1) * (x ** (1 - p) - 1))
        assert float(f(x)) == pytest.approx(direct, abs=1e-10)


def test_kubo_mori_values():
    f = fn.kubo_mori()
    assert float(f(np.e)) == pytest.approx(np.e - 1.0)
    assert float(f(np.asarray(1.0))) == 1.0
    assert f.value_at_zero == 0.0


def test_extremal_kernel_endpoints():
    assert fn.extremal_kernel(0.0)(2.0) == pytest.approx(3.0 / 4.0)
    assert fn.extremal_kernel(1.0)(2.0) == pytest.approx(2.0 / 3.0)
    for lam in (0.0, 0.3, 0.7, 1.0):
        assert fn.extremal_kernel(lam)(1.0) == pytest.approx(1.0)
    with pytest.raises(DomainError):
        fn.extremal_kernel(1.5)


def test_extremal_kernel_monotone_in_parameter():
    x = fn.probe_grid()
    lams = np.linspace(0.0, 1.0, 21)
    values = [fn.extremal_kernel(lam)(x) for lam in lams]
    for lo, hi in zip(values, values[1:]):
        assert np.all(lo >= hi - 1e-12)


def test_extremal_metric_matches_reciprocal_kernel():
    x = fn.probe_grid()
    for lam in (0.0, 0.4, 1.0):
        f = fn.extremal_metric(lam)
        assert_allclose(f(x), 1.0 / fn.extremal_kernel(lam)(x), rtol=1e-13)
    assert fn.extremal_metric(0.5).value_at_zero == pytest.approx(1.0 / 2.25)


def test_discrete_measure_invariants():
    with pytest.raises(InvariantViolation):
        fn.DiscreteMeasure((0.5,), (0.9,))
    with pytest.raises(InvariantViolation):
        fn.DiscreteMeasure((1.5,), (1.0,))
    with pytest.raises(InvariantViolation):
        fn.DiscreteMeasure((0.5, 0.5), (1.5, -0.5))
    m = fn.DiscreteMeasure.from_pairs([[0.0, 0.5], [1.0, 0.5]])
    assert m.atoms == (0.0, 1.0)


def test_hansen_point_masses_reproduce_extremal_kernels():
    x = fn.probe_grid()
    for lam in (0.0, 1.0, 0.37):
        f = fn.hansen_mixture(fn.dirac(lam))
        g = fn.extremal_kernel(lam)(x)
        assert np.max(np.abs(f(x) - 1.0 / g)) <= 1e-14 * np.max(1.0 / g)
    assert fn.hansen_mixture(fn.dirac(0.0))(2.0) == pytest.approx(4.0 / 3.0)
    assert fn.hansen_mixture(fn.dirac(1.0))(2.0) == pytest.approx(3.0 / 2.0)


def test_hansen_mixture_normalization_and_envelope():
    m = fn.DiscreteMeasure((0.0, 1.0), (0.5, 0.5))
    f = fn.hansen_mixture(m)
    assert float(f(1.0)) == pytest.approx(1.0)
    assert f.value_at_zero == 0.0
    x = fn.probe_grid()
    inv = 1.0 / f(x)
    assert np.all(inv <= fn.extremal_kernel(0.0)(x) + 1e-12)
    assert np.all(inv >= fn.extremal_kernel(1.0)(x) - 1e-12)


def test_hansen_value_at_zero_analytic():
    m = fn.DiscreteMeasure((0.5, 0.25), (0.4, 0.6))
    f = fn.hansen_mixture(m)
    expected = 1.0 / (0.4 * 1.5**2 / 1.0 + 0.6 * 1.25**2 / 0.5)
    assert f.value_at_zero == pytest.approx(expected, rel=1e-14)


def test_covariance_kernel_of_sld_is_harmonic():
    x = fn.probe_grid()
    assert_allclose(fn.covariance_kernel(fn.sld())(x), fn.harmonic()(x), atol=1e-13)


def test_covariance_kernel_of_harmonic_is_sld():
    x = fn.probe_grid()
    assert_allclose(fn.covariance_kernel(fn.harmonic())(x), fn.sld()(x), atol=1e-13)


@pytest.mark.parametrize("p", [0.2, 0.5, 0.8])
def test_covariance_kernel_of_wyd_closed_form(p):
    # algebraic simplification: ((x+1) - (x^p-1)(x^{1-p}-1))/2 = (x^p + x^{1-p})/2
    x = fn.probe_grid()
    ft = fn.covariance_kernel(fn.wyd(p))
    assert_allclose(ft(x), (x**p + x ** (1 - p)) / 2.0, rtol=1e-11)
    assert ft.value_at_zero == 0.0
    assert ft.second_derivative_at_one == pytest.approx(-p * (1 - p))


@pytest.mark.parametrize("lam", [0.25, 0.5, 0.9])
def test_covariance_kernel_of_extremal_closed_form(lam):
    x = fn.probe_grid()
    ft = fn.covariance_kernel(fn.extremal_metric(lam))
    ref = x * (x * lam**2 + lam**2 + 2 * lam + 2 * x * lam + x + 1) / (
        2 * (x + lam) * (1 + x * lam)
    )
    assert_allclose(ft(x), ref, rtol=1e-12)


def test_covariance_kernel_fixes_one_and_symmetry():
    x = fn.probe_grid()
    for f in (fn.sld(), fn.wyd(0.3), fn.extremal_metric(0.6), fn.kubo_mori()):
        ft = fn.covariance_kernel(f)
        assert float(np.asarray(ft(np.asarray(1.0)))) == pytest.approx(1.0, abs=1e-12)
        assert np.max(np.abs(x * ft(1.0 / x) - ft(x))) < 1e-10


def test_covariance_kernel_needs_standard_input():
    with pytest.raises(DomainError):
        fn.covariance_kernel(fn.power_kernel(0.5))


def test_check_standard_passes_catalog():
    for f in (fn.sld(), fn.harmonic(), fn.kubo_mori(), fn.wyd(0.3), fn.extremal_metric(0.7)):
        rep = fn.check_standard(f)
        assert rep.passed, (f.name, rep)
        assert rep.max_violation <= 1e-9


def test_check_standard_flags_linear():
    lin = fn.ScalarFunctionSpec("linear", lambda x: x, 0.0, 0.0, False, False)
    rep = fn.check_standard(lin, grid=[0.5, 2.0])
    assert not rep.passed
    assert rep.symmetry == pytest.approx(1.0)


def test_check_standard_grid_validation():
    with pytest.raises(DomainError):
        fn.check_standard(fn.sld(), grid=[])
    with pytest.raises(DomainError):
        fn.check_standard(fn.sld(), grid=[2.0, 3.0])
    with pytest.raises(DomainError):
        fn.check_standard(fn.sld(), grid=[-1.0, 2.0])


def test_check_operator_monotone_passes_affine():
    rep = fn.check_operator_monotone(fn.sld(), seed=0, trials=20, dim=3)
    assert rep.passed
    assert rep.loewner_margin >= -1e-8
    assert not rep.pick_skipped and rep.pick_margin >= -1e-10


def test_check_operator_monotone_rejects_square():
    sq = fn.ScalarFunctionSpec("square", lambda x: x**2, 0.0, 2.0, False, False)
    rep = fn.check_operator_monotone(sq, seed=2, trials=40, dim=2)
    assert not rep.passed
    assert rep.loewner_margin < -1e-8


def test_check_operator_monotone_passes_transformed_extremal():
    ft = fn.covariance_kernel(fn.extremal_metric(0.5))
    rep = fn.check_operator_monotone(ft, seed=1, trials=30, dim=3)
    assert rep.passed, rep


def test_check_operator_monotone_pick_skip_flag():
    def real_only(x):
        if np.iscomplexobj(np.asarray(x)):
            raise TypeError("real arguments only")
        return (1.0 + x) / 2.0

    spec = fn.ScalarFunctionSpec("opaque", real_only, 0.5, 0.0, True, True)
    rep = fn.check_operator_monotone(spec, seed=0, trials=5, dim=2)
    assert rep.pick_skipped and rep.pick_margin is None


def test_scalar_inequality_sld_pair():
    rep = fn.scalar_inequality_check(fn.sld(), fn.sld())
    assert rep.passed
    # (x+1)^2/4 - (x-1)^2/4 = x, so the grid minimum sits at the left edge
    assert rep.min_margin == pytest.approx(1e-3, rel=1e-6)
    # at the pivot the quadratic term vanishes and the margin is f(1) g(1) = 1
    f, g = fn.wyd(0.4), fn.kubo_mori()
    margin_at_one = float(np.asarray(f(1.0))) * float(np.asarray(g(1.0)))
    assert margin_at_one == pytest.approx(1.0, abs=1e-12)


def test_scalar_inequality_zero_at_zero_is_trivial():
    rep = fn.scalar_inequality_check(fn.harmonic(), fn.wyd(0.4))
    assert rep.passed and rep.min_margin >= 0.0


def test_scalar_inequality_needs_standard():
    with pytest.raises(DomainError):
        fn.scalar_inequality_check(fn.sld(), fn.power_kernel(0.5))


def test_second_derivative_analytic_and_numeric():
    assert fn.second_derivative_at_one(fn.power_kernel(2.0)) == 2.0
    assert fn.second_derivative_at_one(fn.power_kernel(1.0)) == 0.0
    neglog_numeric = fn.ScalarFunctionSpec("nl", lambda x: -np.log(x), math.inf, None, False, False)
    assert fn.second_derivative_at_one(neglog_numeric) == pytest.approx(1.0, abs=1e-6)
    assert fn.second_derivative_at_one(lambda x: x**3) == pytest.approx(6.0, abs=1e-6)


def test_second_derivative_noisy_function_rejected():
    kink = fn.ScalarFunctionSpec("kink", lambda x: np.abs(x - 1.0), 1.0, None, False, False)
    with pytest.raises(VerificationError):
        fn.second_derivative_at_one(kink)


@given(st.floats(0.05, 0.95))
@settings(max_examples=30, deadline=None)
def test_wyd_symmetry_property(p):
    f = fn.wyd(p)
    x = fn.probe_grid()
    assert np.max(np.abs(x * f(1.0 / x) - f(x))) < 1e-10


def test_catalog_dispatch():
    assert fn.catalog("sld").name == "sld"
    assert fn.catalog("kubo-mori").name == "kubo-mori"
    assert fn.catalog("wyd", p=0.4).name == "wyd:0.4"
    assert fn.catalog("extremal_inverse", lam=0.5).name == "extremal:0.5"
    with pytest.raises(DomainError):
        fn.catalog("unknown")
    with pytest.raises(DomainError):
        fn.catalog("wyd")


def test_parse_function_spec_tokens(tmp_path):
    assert fn.parse_function_spec("sld").name == "sld"
    assert fn.parse_function_spec("kubo-mori").name == "kubo-mori"
    assert fn.parse_function_spec("wyd:0.5").name == "wyd:0.5"
    assert fn.parse_function_spec("extremal:0.25").name == "extremal:0.25"
    mu = tmp_path / "mu.json"
    mu.write_text("[[0.0, 0.5], [1.0, 0.5]]")
    spec = fn.parse_function_spec(f"hansen:{mu}")
    assert spec.value_at_zero == 0.0
    assert fn.parse_function_spec("power:0.5", allow_kernels=True).name == "power:0.5"
    assert fn.parse_function_spec("neglog", allow_kernels=True).name == "neglog"
    with pytest.raises(DomainError):
        fn.parse_function_spec("neglog")  # kernels rejected without the flag
    with pytest.raises(DomainError):
        fn.parse_function_spec("wyd")
    with pytest.raises(DomainError):
        fn.parse_function_spec("nope")


def test_load_measure_errors(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("[[0.5, 0.5]")
    with pytest.raises(FileFormatError):
        fn.load_measure(bad)
    wrong = tmp_path / "wrong.json"
    wrong.write_text('{"a": 1}')
    with pytest.raises(FileFormatError):
        fn.load_measure(wrong)
    unnorm = tmp_path / "unnorm.json"
    unnorm.write_text("[[0.5, 0.4]]")
    with pytest.raises(InvariantViolation):
        fn.load_measure(unnorm)

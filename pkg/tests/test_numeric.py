import math

import pytest
from mpmath import mp, mpf, workprec

from betamin.errors import BracketError
from betamin.numeric import (Beta, Certified, gamma_k, multinacci, named_beta,
                             solve_increasing_root, _poly_eval)


def test_bisection_sqrt2():
    r = solve_increasing_root(lambda x: x * x - 2, 1, 2, mpf("1e-12"))
    assert abs(float(r) - math.sqrt(2)) < 1e-11


def test_bisection_plastic_root():
    r = solve_increasing_root(lambda x: x ** 3 - x - 1, 1, 2, mpf("1e-12"))
    assert abs(float(r) - 1.3247179572447460) < 1e-11


def test_bisection_golden_root():
    r = solve_increasing_root(lambda x: x * x - x - 1, 1, 2, mpf("1e-12"))
    assert abs(float(r) - (1 + math.sqrt(5)) / 2) < 1e-11


def test_bisection_rejects_bad_bracket():
    with pytest.raises(BracketError):
        solve_increasing_root(lambda x: x * x - 2, 2, 3, mpf("1e-6"))


@pytest.mark.parametrize("k,approx", [(5, 2.28879), (6, 2.2056)])
def test_gamma_values(k, approx):
    g = gamma_k(k)
    assert abs(g.approx - approx) < 1e-4


def test_gamma_defining_residual():
    for k in (5, 6, 12, 40):
        g = gamma_k(k)
        with workprec(200):
            x = g.value(192).val
            resid = x ** (k - 2) * (x - 2) ** 2 - 1
            assert abs(float(resid)) < 1e-10


def test_gamma_strictly_decreasing_to_two():
    vals = [gamma_k(k).approx for k in range(5, 41)]
    assert all(a > b for a, b in zip(vals, vals[1:]))
    assert vals[-1] > 2
    assert gamma_k(40).approx < 2.001
    assert gamma_k(41).approx < gamma_k(40).approx


def test_gamma_domain():
    with pytest.raises(ValueError):
        gamma_k(4)


@pytest.mark.parametrize("k,approx", [(2, 1.6180), (3, 1.8393)])
def test_multinacci_values(k, approx):
    assert abs(multinacci(k).approx - approx) < 1e-4


def test_multinacci_defining_identity():
    for k in (2, 3, 8):
        m = multinacci(k)
        with workprec(200):
            x = m.value(192).val
            assert abs(float(2 - x - x ** -k)) < 1e-12


def test_multinacci_increasing_below_two():
    vals = [multinacci(k).approx for k in range(2, 12)]
    assert all(a < b for a, b in zip(vals, vals[1:]))
    assert all(v < 2 for v in vals)


def test_multinacci_domain():
    with pytest.raises(ValueError):
        multinacci(1)


def test_polynomial_residual_scales_with_precision():
    # |p(approx)| < p'(approx) * 2**(1-precision), up to bracket slack
    for name in ("rho", "chi", "phi", "mu3", "gamma6"):
        b = named_beta(name)
        coeffs = b.definition.coeffs
        dcoeffs = tuple(i * c for i, c in enumerate(coeffs))[1:]
        for prec in (64, 128, 256):
            v = b.value(prec)
            with workprec(prec + 32):
                p = abs(_poly_eval(coeffs, v.val))
                dp = abs(_poly_eval(dcoeffs, v.val))
                assert float(p) < float(dp) * 2.0 ** (1 - prec) * 512


def test_named_base_catalogue():
    assert named_beta("rho").is_pisot is True
    assert named_beta("chi").is_pisot is True
    assert named_beta("sqrt2").is_pisot is False
    assert named_beta("gamma5").is_pisot is False
    assert named_beta("gamma6").is_pisot is True
    assert abs(named_beta("e").approx - math.e) < 1e-12
    assert named_beta("mu2") == named_beta("phi") or \
        abs(named_beta("mu2").approx - named_beta("phi").approx) < 1e-12
    with pytest.raises(ValueError):
        named_beta("tau")


def test_beta_from_float_is_exact():
    b = Beta.from_float(2.5)
    v = b.value(128)
    assert float(v.val) == 2.5
    assert float(v.err) == 0.0


def test_beta_rejects_small_float():
    with pytest.raises(ValueError):
        Beta.from_float(0.9)


def test_beta_pickles_without_cache():
    import pickle
    b = named_beta("rho")
    b.value(192)
    b2 = pickle.loads(pickle.dumps(b))
    assert b2 == b
    assert abs(b2.approx - b.approx) < 1e-12


def test_certified_propagation_is_conservative():
    with workprec(64):
        a = Certified(mpf(1) / 3, mpf("1e-19"))
        b = Certified(mpf(2) / 7, mpf("1e-19"))
        s = a + b
        p = a * b
        assert s.err >= a.err + b.err
        assert p.err >= float(abs(a.val)) * float(b.err)
        with workprec(300):
            true_s = mpf(1) / 3 + mpf(2) / 7
            true_p = (mpf(1) / 3) * (mpf(2) / 7)
        assert abs(float(s.val - true_s)) <= float(s.err) + 1e-18
        assert abs(float(p.val - true_p)) <= float(p.err) + 1e-18


def test_certified_separation():
    c = Certified(1.5, 0.1)
    assert c.separated_from(1.0)
    assert not c.separated_from(1.45)

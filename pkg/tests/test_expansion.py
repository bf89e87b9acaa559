import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from betamin.errors import HorizonTooShort, PrecisionExhausted
from betamin.numeric import Beta, multinacci, named_beta
from betamin.expansion import (Monotone, detect_eventual_period,
                               expansion_of_unity, greedy_expand,
                               is_admissible, is_monotone_MB)
from betamin.representation import BetaRepresentation, evaluate
from betamin.words import DigitWord, format_pointed

GOLDEN_UNITY = {
    "rho": ("10001", True),
    "chi": ("1001", True),
    "sqrt2": ("1001000001", False),
    "phi": ("11", True),
    "mu3": ("111", True),
    "gamma6": ("201", True),
    "gamma5": ("2011002001", False),
    "e": ("2121111212", False),
}


@pytest.mark.parametrize("name", sorted(GOLDEN_UNITY))
def test_unity_golden_vectors(name):
    want, finite = GOLDEN_UNITY[name]
    beta = named_beta(name)
    u = expansion_of_unity(beta, 12)
    got = "".join(str(d) for d in u.digits[:10])
    assert got == want[: len(got)]
    assert u.finite == finite
    if finite:
        assert u.digits[-1] != 0
        # a finite expansion reconstructs 1 within the working tolerance
        v = evaluate(BetaRepresentation(beta, DigitWord(1, u.digits)))
        assert abs(float(v.val) - 1.0) < 1e-40


def test_unity_integer_base():
    u = expansion_of_unity(Beta.from_float(3.0), 6)
    assert u.digits == (3,)
    assert u.finite
    assert u.margin == 0.0  # exact arithmetic termination
    # the single digit reconstructs 1 exactly
    v = evaluate(BetaRepresentation(Beta.from_float(3.0), DigitWord(1, (3,))))
    assert float(v.val) == 1.0


def test_greedy_decimal():
    g = greedy_expand(Beta.from_float(10.0), 0.25, 4)
    assert g.word.digits == (2, 5)
    assert g.word.j_min == 1
    assert g.finite


def test_greedy_forced_zero_examples():
    e = greedy_expand(named_beta("e"), 1, 10, style="fractional")
    assert e.word.digits == (2, 1, 2, 1, 1, 1, 1, 2, 1, 2)
    s = greedy_expand(named_beta("sqrt2"), 1, 10, style="fractional")
    assert s.word.digits == (1, 0, 0, 1, 0, 0, 0, 0, 0, 1)


def test_greedy_spread_golden_ratio_five():
    g = greedy_expand(named_beta("phi"), 5, 12)
    assert format_pointed(g.word) == "1000.1001"
    assert g.finite


def test_greedy_d0_unbounded():
    g = greedy_expand(named_beta("phi"), 5, 6, style="d0")
    assert g.word.digit_at(0) == 5
    assert g.word.j_min == 0


def test_greedy_digit_cap_after_leading():
    # every digit after the first is at most floor(beta)
    for x in (2.5, 3.7, 1.9):
        g = greedy_expand(Beta.from_float(x), 7.3, 20)
        assert all(d <= int(x) for d in g.word.digits[1:])


def test_greedy_rejects_negative():
    with pytest.raises(ValueError):
        greedy_expand(Beta.from_float(2.0), -0.5, 4)


def test_greedy_strict_raises_on_declared_boundary():
    # the golden ratio terminates only via the margin rule at any precision
    with pytest.raises(PrecisionExhausted):
        greedy_expand(named_beta("phi"), 1, 8, style="fractional",
                      precision=128, max_precision=256, strict=True)


def test_reconstruction_random():
    rng = random.Random(42)
    for _ in range(25):
        x = 1.0 + rng.random() * 3.0
        u = rng.random() * 10
        beta = Beta.from_float(x)
        g = greedy_expand(beta, u, 24)
        val = evaluate(BetaRepresentation(beta, g.word))
        assert float(val.val) <= u + 1e-12
        assert u - float(val.val) <= x ** (-24) * x ** (1) + 1e-12


def test_greedy_maximality_random():
    # raising any digit by one and truncating there overshoots the value
    rng = random.Random(1)
    for _ in range(10):
        x = 1.2 + rng.random() * 2.5
        u = rng.random() * 3
        beta = Beta.from_float(x)
        g = greedy_expand(beta, u, 16)
        w = g.word
        for i in range(len(w.digits)):
            bumped = DigitWord(w.j_min, w.digits[:i] + (w.digits[i] + 1,))
            v = evaluate(BetaRepresentation(beta, bumped))
            assert float(v.val) > u - 1e-12


@settings(max_examples=40, deadline=None)
@given(st.floats(min_value=1.1, max_value=3.9),
       st.floats(min_value=0.0, max_value=0.999))
def test_greedy_output_is_admissible(x, u):
    beta = Beta.from_float(x)
    g = greedy_expand(beta, u, 14, style="fractional")
    unity = expansion_of_unity(beta, 40)
    assert is_admissible(g.word, unity)


def test_period_pure():
    assert detect_eventual_period([1, 0, 0, 1] * 4) == (0, 4)


def test_period_base_chi_two():
    # integer-part digits of 2, then zeros, then the repeating tail
    digits = [1, 0, 0] + [0, 0, 0] + [0, 0, 0, 0, 1] * 4
    pre, per = detect_eventual_period(digits)
    assert per == 5
    assert pre <= 6
    assert (pre, per) == (6, 5)


def test_period_absent():
    assert detect_eventual_period(list(range(12))) is None
    with pytest.raises(ValueError):
        detect_eventual_period([])


def test_monotone_classification():
    assert is_monotone_MB(named_beta("phi"), 20) is Monotone.YES
    assert is_monotone_MB(named_beta("gamma6"), 20) is Monotone.NO
    assert is_monotone_MB(named_beta("rho"), 20) is Monotone.NO
    assert is_monotone_MB(named_beta("sqrt2"), 20) is Monotone.NO
    assert is_monotone_MB(multinacci(5), 20) is Monotone.YES
    # an infinite non-increasing stream stays inconclusive: golden ratio
    # squared (root of x^2 - 3x + 1) has digits 2 1 1 1 ...
    phi2 = Beta.from_polynomial([1, -3, 1], 2.5, 3.0)
    assert is_monotone_MB(phi2, 40) is Monotone.INCONCLUSIVE


def test_multinacci_unity_digits():
    u = expansion_of_unity(multinacci(5), 12)
    assert u.digits == (1, 1, 1, 1, 1)
    assert u.finite


def test_admissible_golden_ratio():
    unity = expansion_of_unity(named_beta("phi"), 30)
    assert not is_admissible(DigitWord(1, (1, 1, 0)), unity)
    assert is_admissible(DigitWord(1, (1, 0, 1, 0, 1)), unity)
    assert is_admissible(DigitWord(1, (1, 0, 0, 1)), unity)


def test_admissible_base_e():
    unity = expansion_of_unity(named_beta("e"), 40)
    assert is_admissible(DigitWord(1, (2, 1, 1) * 4), unity)
    assert not is_admissible(DigitWord(1, (2, 2)), unity)


def test_admissible_horizon_error():
    unity = expansion_of_unity(named_beta("e"), 6)
    # a word tying the stream for its whole length needs more digits
    with pytest.raises(HorizonTooShort):
        is_admissible(DigitWord(1, unity.digits), unity)


def test_quasi_greedy_stream():
    unity = expansion_of_unity(named_beta("phi"), 10)
    assert unity.comparison_stream(6) == (1, 0, 1, 0, 1, 0)
    g6 = expansion_of_unity(named_beta("gamma6"), 10)
    assert g6.comparison_stream(7) == (2, 0, 0, 2, 0, 0, 2)

import math
import random
from fractions import Fraction
from itertools import product

import pytest

from betamin.numeric import Beta, gamma_k, multinacci, named_beta
from betamin.expansion import expansion_of_unity, is_admissible
from betamin.bounds import (build_shift_automaton, conditional_lower_bound,
                            entropy_functional, evaluate_bounds,
                            greedy_average_upper, locate_run_interval,
                            lower_bound_via_entropy_root,
                            run_replacement_upper_bound,
                            run_replacement_witness)
from betamin.representation import BetaRepresentation, evaluate
from betamin.words import DigitWord


def test_automaton_matches_direct_admissibility():
    for name in ("phi", "gamma6", "e"):
        beta = named_beta(name)
        unity = expansion_of_unity(beta, 40)
        auto = build_shift_automaton(unity, 24)
        for word in product(range(auto.alphabet_max + 1), repeat=4):
            assert auto.accepts(word) == is_admissible(
                DigitWord(1, word), unity), (name, word)


def test_automaton_rejects_examples():
    unity = expansion_of_unity(named_beta("e"), 24)
    auto = build_shift_automaton(unity, 10)
    assert not auto.accepts((2, 2))
    assert auto.accepts((2, 1, 1, 2, 1, 1))
    full = build_shift_automaton(expansion_of_unity(Beta.from_float(3.0), 8),
                                 8)
    for word in product(range(3), repeat=3):
        assert full.accepts(word)
    assert not full.accepts((3,))


@pytest.mark.parametrize("k", range(2, 7))
def test_cycle_mean_multinacci(k):
    val, exact = greedy_average_upper(multinacci(k), depth=32)
    assert exact
    assert val == Fraction(k - 1, k)


@pytest.mark.parametrize("n", (2, 3, 4))
def test_cycle_mean_integer_bases(n):
    val, exact = greedy_average_upper(Beta.from_float(float(n)), depth=16)
    assert exact
    assert val == n - 1


def test_cycle_mean_base_e_window():
    val, exact = greedy_average_upper(named_beta("e"), depth=12)
    assert not exact  # truncated: an upper approximation
    assert Fraction(4, 3) <= val <= Fraction(4, 3) + Fraction(1, 20)
    # stabilization: deeper truncations stay at 4/3
    deeper, _ = greedy_average_upper(named_beta("e"), depth=32)
    assert deeper == Fraction(4, 3)
    assert deeper <= val


def test_cycle_mean_monotone_in_depth():
    beta = Beta.from_float(2.7)
    vals = [greedy_average_upper(beta, depth=d)[0] for d in (8, 16, 24, 32)]
    assert all(a >= b for a, b in zip(vals, vals[1:]))


def test_greedy_value_one_on_run_interval():
    for x in (2.05, 2.15, 2.25):
        val, _ = greedy_average_upper(Beta.from_float(x), depth=32)
        assert val == 1
        assert run_replacement_upper_bound(Beta.from_float(x)) < 1


def test_run_interval_location():
    g6 = gamma_k(6).approx
    g7 = gamma_k(7).approx
    mid = (g6 + g7) / 2
    assert locate_run_interval(Beta.from_float(mid)) == 6
    assert locate_run_interval(Beta.from_float(2.25)) == 5
    assert locate_run_interval(Beta.from_float(2.0)) is None
    assert locate_run_interval(Beta.from_float(2.5)) is None
    assert locate_run_interval(Beta.from_float(1.5)) is None
    # barely above 2 the interval index grows like -2*log2(beta-2)
    k = locate_run_interval(Beta.from_float(2.0 + 1e-14))
    assert 90 <= k <= 200


def test_run_replacement_bounds_at_thresholds():
    assert run_replacement_upper_bound(named_beta("gamma5")) == Fraction(9, 10)
    assert run_replacement_upper_bound(named_beta("gamma6")) == Fraction(8, 9)
    assert run_replacement_upper_bound(Beta.from_float(2.25)) == Fraction(9, 10)
    g7 = Beta.from_float(gamma_k(7).approx)
    assert run_replacement_upper_bound(g7) == Fraction(8, 9)
    assert run_replacement_upper_bound(Beta.from_float(4.0)) is None


def test_witness_worst_case_blocks():
    # a value whose expansion starts 1^5 2 0 1 1 0 yields exactly that block
    beta = Beta.from_float(gamma_k(5).approx - 0.001)
    digits = (1, 1, 1, 1, 1, 2, 0, 1, 1, 0)
    u = evaluate(BetaRepresentation(beta, DigitWord(1, digits)), 256)
    rep = run_replacement_witness(beta, u, blocks=3)
    assert rep.blocks[0] == (10, 9)
    assert rep.block_averages()[0] == Fraction(9, 10)

    # k >= 6: the 1^k 2 0 0 block has average (k+2)/(k+3)
    beta = Beta.from_float((gamma_k(6).approx + gamma_k(7).approx) / 2)
    digits = (1,) * 6 + (2, 0, 0)
    u = evaluate(BetaRepresentation(beta, DigitWord(1, digits)), 256)
    rep = run_replacement_witness(beta, u, blocks=3)
    assert rep.blocks[0] == (9, 8)
    assert rep.block_averages()[0] == Fraction(8, 9)


def test_witness_replacement_block():
    beta = Beta.from_float(gamma_k(5).approx - 0.0005)
    u = float(evaluate(BetaRepresentation(
        beta, DigitWord(1, (1,) * 9))).val)
    rep = run_replacement_witness(beta, u, blocks=4)
    n, s = rep.blocks[0]
    assert n == 6 and s in (4, 5)   # 040^(k-1) or 040^(k-2)1 for k=5


def test_witness_random_bases():
    rng = random.Random(20240809)
    g5 = gamma_k(5).approx
    for _ in range(20):
        x = 2.0 + rng.random() * (g5 - 2.0 - 1e-9)
        beta = Beta.from_float(x)
        u = rng.random()
        rep = run_replacement_witness(beta, u, blocks=6)
        bound = run_replacement_upper_bound(beta)
        assert rep.overall_average() <= bound + Fraction(1, 10 ** 6)
        assert all(Fraction(s, n) <= bound for n, s in rep.blocks)
        val = evaluate(BetaRepresentation(beta, rep.word))
        assert abs(float(val.val) - u) <= 10 * x ** -len(rep.word.digits)


def test_entropy_functional_values():
    assert abs(entropy_functional(Beta.from_float(2.0), 2 / 3)
               + math.log(1.5)) < 1e-12
    assert abs(entropy_functional(Beta.from_float(4.0), 0.5)) < 1e-12
    # near 1 the functional tends to zero from below for beta > 1
    assert entropy_functional(Beta.from_float(3.0), 0.999999) < 0
    with pytest.raises(ValueError):
        entropy_functional(Beta.from_float(2.0), 0.0)
    with pytest.raises(ValueError):
        entropy_functional(Beta.from_float(2.0), 1.0)


def test_lower_bound_exact_hits():
    assert abs(conditional_lower_bound(Beta.from_float(4.0)) - 1) < 1e-9
    assert abs(conditional_lower_bound(Beta.from_float(6.75)) - 2) < 1e-9
    assert abs(conditional_lower_bound(Beta.from_float(2.0)) - 0.2938) < 1e-3


def test_lower_bound_inverts():
    rng = random.Random(99)
    for _ in range(100):
        x = 1.0 + rng.random() * 7.0
        if x <= 1.0000001:
            continue
        d = conditional_lower_bound(Beta.from_float(x))
        back = math.exp((d + 1) * math.log(d + 1) - d * math.log(d))
        assert abs(back - x) < 1e-12


def test_lower_bound_routes_agree():
    rng = random.Random(7)
    for _ in range(100):
        x = 1.001 + rng.random() * 6.999
        b = Beta.from_float(x)
        assert abs(conditional_lower_bound(b)
                   - lower_bound_via_entropy_root(b)) < 1e-10


def test_lower_bound_domain():
    with pytest.raises(ValueError):
        conditional_lower_bound(Beta.from_float(1.0 + 1e-18))
        # (from_float would reject <= 1; a value this close still exceeds 1)


def test_evaluate_bounds_row():
    ev = evaluate_bounds(named_beta("mu3"))
    assert ev.greedy_upper == Fraction(2, 3)
    assert ev.greedy_exact
    assert ev.run_bound is None
    assert 0 < ev.lower_bound < 1
    ev4 = evaluate_bounds(Beta.from_float(4.0))
    assert abs(ev4.lower_bound - 1.0) < 1e-9
    assert ev4.greedy_upper == 3

"""Bounds on the minimum average digit: the greedy-expansion value via a
shift automaton and its maximum cycle mean, the run-replacement upper bound
on an interval above 2 with constructive witnesses, and the conditional
lower bound obtained by inverting (d+1)^(d+1)/d^d.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from mpmath import mpf, workprec

from .errors import HorizonTooShort
from .numeric import Beta, Certified, gamma_k
from .expansion import UnityExpansion, _greedy_core, expansion_of_unity
from .words import DigitWord

DEAD = -1


@dataclass(frozen=True)
class ShiftAutomaton:
    """Follower automaton of the admissible digit sequences.

    State i means the last i digits equal the first i digits of the
    comparison stream; reading a digit above the next stream digit is fatal,
    equality advances, and smaller digits follow failure links.  The final
    state funnels through its failure link, which under-counts matching and
    therefore only ever accepts more words: truncation yields an
    over-approximation of the language (exact when the stream is the folded
    periodic form of a finite expansion of unity).
    """
    stream: Tuple[int, ...]
    transitions: Tuple[Tuple[int, ...], ...]   # [state][digit] -> state|DEAD
    alphabet_max: int
    exact: bool

    @property
    def n_states(self) -> int:
        return len(self.transitions)

    def accepts(self, word) -> bool:
        state = 0
        for a in word:
            if a > self.alphabet_max:
                return False
            state = self.transitions[state][a]
            if state == DEAD:
                return False
        return True


def build_shift_automaton(unity: UnityExpansion, depth: int) -> ShiftAutomaton:
    """KMP-style automaton over the comparison stream truncated at ``depth``
    (rounded up to full periods when the expansion of unity is finite, which
    makes the automaton exact)."""
    if depth < 1:
        raise ValueError("depth must be >= 1")
    if unity.finite:
        m = len(unity.digits)
        reps = max(2, -(-depth // m))
        n = m * reps
        exact = True
    else:
        if depth > len(unity.digits):
            raise HorizonTooShort(
                f"automaton depth {depth} exceeds computed unity digits")
        n = depth
        exact = False
    stream = unity.comparison_stream(n)
    amax = stream[0]

    fail = [0] * (n + 1)
    k = 0
    for i in range(1, n):
        while k > 0 and stream[i] != stream[k]:
            k = fail[k]
        if stream[i] == stream[k]:
            k += 1
        fail[i + 1] = k

    table: List[List[int]] = [[DEAD] * (amax + 1) for _ in range(n + 1)]
    for a in range(amax + 1):
        if a == stream[0]:
            table[0][a] = 1
        elif a < stream[0]:
            table[0][a] = 0
    for i in range(1, n):
        for a in range(amax + 1):
            if a == stream[i]:
                table[i][a] = i + 1
            elif a < stream[i]:
                table[i][a] = table[fail[i]][a]
    for a in range(amax + 1):
        table[n][a] = table[fail[n]][a]
    return ShiftAutomaton(stream=stream,
                          transitions=tuple(tuple(r) for r in table),
                          alphabet_max=amax, exact=exact)


def max_mean_cycle(auto: ShiftAutomaton) -> Fraction:
    """Exact maximum over cycles of mean edge weight (edge weight = digit),
    by Karp's recurrence from state 0."""
    n = auto.n_states
    NEG = None
    D = [[NEG] * n for _ in range(n + 1)]
    D[0][0] = 0
    for k in range(1, n + 1):
        row = D[k]
        prev = D[k - 1]
        for i in range(n):
            di = prev[i]
            if di is NEG:
                continue
            for a, j in enumerate(auto.transitions[i]):
                if j == DEAD:
                    continue
                w = di + a
                if row[j] is NEG or w > row[j]:
                    row[j] = w
    best: Optional[Fraction] = None
    for v in range(n):
        if D[n][v] is NEG:
            continue
        worst: Optional[Fraction] = None
        for k in range(n):
            if D[k][v] is NEG:
                continue
            r = Fraction(D[n][v] - D[k][v], n - k)
            if worst is None or r < worst:
                worst = r
        if worst is not None and (best is None or worst > best):
            best = worst
    if best is None:
        raise ValueError("automaton has no cycle reachable from the start")
    return best


def greedy_average_upper(beta: Beta, depth: int = 32,
                         precision: Optional[int] = None
                         ) -> Tuple[Fraction, bool]:
    """The largest asymptotic digit average over greedy expansions, as the
    maximum cycle mean of the shift automaton at ``depth``.

    Returns (value, exact); when not exact the value is an upper
    approximation that is non-increasing in ``depth``.
    """
    unity = expansion_of_unity(beta, max(depth, 8), precision=precision)
    auto = build_shift_automaton(unity, depth)
    return max_mean_cycle(auto), auto.exact


# -- run-replacement (interval above 2) upper bound -------------------------

_GAMMA_CACHE: Dict[int, float] = {}
_GAMMA_K_CAP = 200


def _gamma_value(k: int) -> float:
    v = _GAMMA_CACHE.get(k)
    if v is None:
        v = float(gamma_k(k).value(96).val)
        _GAMMA_CACHE[k] = v
    return v


def _interval_bound(k: int) -> Fraction:
    return Fraction(9, 10) if k == 5 else Fraction(k + 2, k + 3)


def locate_run_interval(beta: Beta) -> Optional[int]:
    """The k >= 5 with gamma_{k+1} <= beta <= gamma_k, or None outside
    (2, gamma_5]; capped at k = 200 for beta barely above 2."""
    x = float(beta.value(96).val)
    if x <= 2.0 or x > _gamma_value(5) * (1 + 1e-15):
        return None
    k = 5
    while k < _GAMMA_K_CAP and _gamma_value(k + 1) >= x:
        k += 1
    return k


def run_replacement_upper_bound(beta: Beta) -> Optional[Fraction]:
    """Upper bound on the minimum average digit for 2 < beta <= gamma_5,
    from replacing long runs of ones by a 4 and zeros; at a gamma_k boundary
    the better adjacent bound applies."""
    k = locate_run_interval(beta)
    if k is None:
        return None
    x = float(beta.value(96).val)
    bounds = [_interval_bound(k)]
    if k >= 6 and abs(x - _gamma_value(k)) <= 1e-9 * x:
        bounds.append(_interval_bound(k - 1))
    return min(bounds)


@dataclass(frozen=True)
class WitnessReport:
    """A representation built greedily with run replacement, block by block."""
    word: DigitWord                 # fractional digits, positions from 1
    blocks: Tuple[Tuple[int, int], ...]   # (length, digit sum) per block
    bound: Fraction
    k: int
    residual_bound: float           # |u - value(word)| certified bound

    def block_averages(self) -> List[Fraction]:
        return [Fraction(s, n) for n, s in self.blocks]

    def overall_average(self) -> Fraction:
        total = sum(n for n, _ in self.blocks)
        return Fraction(sum(s for _, s in self.blocks), total)


def run_replacement_witness(beta: Beta, u, blocks: int,
                            precision: int = 256) -> WitnessReport:
    """Constructive witness for the run-replacement bound: expand ``u`` in
    [0,1) block by block; a block of k+1 consecutive ones becomes 040^(k-1)
    or 040^(k-2)1 (whichever keeps the remainder in [0,1)); otherwise greedy
    digits are consumed until the block average drops below 1."""
    k = locate_run_interval(beta)
    if k is None:
        raise ValueError("witness construction applies for 2 < beta <= gamma_5")
    bound = run_replacement_upper_bound(beta)
    if not 0 <= float(u) < 1:
        raise ValueError("u must lie in [0, 1)")
    cap = 8 * (k + 3)
    lookahead = max(k + 1, cap) + 4

    out: List[int] = []
    records: List[Tuple[int, int]] = []
    with workprec(precision):
        b = beta.value(precision)
        binv = Certified(1 / b.val, b.err / (b.val * (b.val - b.err))
                         if b.err > 0 else 0)
        v = Certified(u) if not isinstance(u, Certified) else u
        pow_k1 = Certified(1, 0)
        for _ in range(k + 1):
            pow_k1 = pow_k1 * binv          # beta**-(k+1)
        four_b2 = Certified(4, 0) * binv * binv
        for _ in range(blocks):
            if abs(v.val) <= 4 * v.err:
                out.append(0)
                records.append((1, 0))
                v = v * b
                continue
            digits, _, _, _ = _greedy_core(b, v, 1, lookahead, True)
            digits = list(digits) + [0] * (lookahead - len(digits))
            if all(d == 1 for d in digits[:k + 1]):
                r1 = v - four_b2
                take_extra = (r1 - pow_k1).val >= 0
                block = [0, 4] + [0] * (k - 1)
                if take_extra:
                    block[-1] = 1
                    r1 = r1 - pow_k1
                v = r1
                for _ in range(k + 1):
                    v = v * b
            else:
                t = 1
                while t < cap and sum(digits[:t]) >= t:
                    t += 1
                block = digits[:t]
                for d in block:
                    v = (v * b) - d
            out.extend(block)
            records.append((len(block), sum(block)))
        rb = (abs(v.val) + v.err) * b.val ** mpf(-len(out))
    return WitnessReport(word=DigitWord(1, tuple(out)),
                         blocks=tuple(records), bound=bound, k=k,
                         residual_bound=float(rb))


# -- conditional lower bound -------------------------------------------------

def entropy_functional(beta: Beta, nu1: float) -> float:
    """nu1*log(nu1) + (1-nu1)*log(beta*(1-nu1)); negative at the balanced
    point 1/(1+1/beta), positive near 0, with a single root between."""
    if not 0 < nu1 < 1:
        raise ValueError("nu1 must lie strictly inside (0, 1)")
    x = float(beta.value(96).val)
    return nu1 * math.log(nu1) + (1 - nu1) * math.log(x * (1 - nu1))


def _log_growth(d: float) -> float:
    """log of (d+1)^(d+1) / d^d, stable near 0."""
    return (d + 1) * math.log(d + 1) - d * math.log(d)


def conditional_lower_bound(beta: Beta, tol: float = 1e-13) -> float:
    """The d solving (d+1)^(d+1)/d^d = beta (unique; the left side is
    strictly increasing from 1).  Conditionally a lower bound on the
    minimum average digit."""
    x = float(beta.value(96).val)
    if x <= 1:
        raise ValueError("beta must exceed 1")
    target = math.log(x)
    lo, hi = 1e-300, 1.0
    while _log_growth(hi) < target:
        hi *= 2
    while hi - lo > tol:
        mid = (lo + hi) / 2
        if mid <= lo or mid >= hi:
            break
        if _log_growth(mid) < target:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


def lower_bound_via_entropy_root(beta: Beta, tol: float = 1e-13) -> float:
    """Same bound through the root of the entropy functional: solve
    psi(nu1) = 0 on (0, 1/(1+1/beta)) and map d = nu1/(1-nu1)."""
    x = float(beta.value(96).val)
    if x <= 1:
        raise ValueError("beta must exceed 1")
    nu_bar = 1 / (1 + 1 / x)
    lo, hi = 1e-300, nu_bar
    # entropy decreases on (0, nu_bar): positive at 0+, negative at nu_bar
    while hi - lo > tol:
        mid = (lo + hi) / 2
        if mid <= lo or mid >= hi:
            break
        if entropy_functional(beta, mid) > 0:
            lo = mid
        else:
            hi = mid
    nu = (lo + hi) / 2
    return nu / (1 - nu)


# -- combined evaluation ------------------------------------------------------

@dataclass
class BoundEvaluation:
    """One row of the bounds table for a single base."""
    beta_value: float
    greedy_upper: Fraction
    greedy_exact: bool
    run_bound: Optional[Fraction]
    lower_bound: float
    coverage_bound: Optional[Fraction] = None
    coverage_covered: Optional[bool] = None
    flags: Dict[str, str] = field(default_factory=dict)

    def sandwich_consistent(self) -> Optional[bool]:
        if self.coverage_bound is None:
            return None
        return self.lower_bound <= float(self.coverage_bound) + 1e-12


def evaluate_bounds(beta: Beta, automaton_depth: int = 32,
                    precision: Optional[int] = None) -> BoundEvaluation:
    gu, exact = greedy_average_upper(beta, depth=automaton_depth,
                                     precision=precision)
    flags = {"greedy_upper": "exact" if exact else "upper-approximation"}
    return BoundEvaluation(
        beta_value=float(beta.value(96).val),
        greedy_upper=gu, greedy_exact=exact,
        run_bound=run_replacement_upper_bound(beta),
        lower_bound=conditional_lower_bound(beta),
        flags=flags)

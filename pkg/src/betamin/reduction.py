"""Stepwise reduction of arbitrary beta representations toward the beta
expansion, via tables of disallowed words and their expansions.

A representation is a valid expansion exactly when no suffix of its digit
sequence exceeds the comparison stream.  The minimal offending patterns are
the disallowed words derived from the expansion of unity d1 d2 ...:

  finite case (d1..dm):   (d1+1), d1(d2+1), ..., d1..d_{m-2}(d_{m-1}+1), d1..dm
  infinite case:          (d1+1), d1(d2+1), ...   (truncated at a horizon)

A table word occurs in a representation when all but its last digit match
exactly and the digit under its last position is at least the word's last
digit.  The violation is located at that last position (the digit that is
too high); among occurrences the lowest violation position wins, ties broken
by table order.  Subtracting the word there and adding its expansion
preserves the value and raises the representation lexicographically, so the
iteration converges toward the expansion.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from mpmath import mpf, workprec

from .errors import HorizonTooShort
from .numeric import Beta, Certified, DEFAULT_PRECISION
from .expansion import UnityExpansion, greedy_expand
from .representation import BetaRepresentation, evaluate
from .words import DigitWord, format_pointed


@dataclass(frozen=True)
class TableEntry:
    word: Tuple[int, ...]
    expansion: DigitWord      # positions relative to the word's LAST digit
    finite: bool
    tail_bound: float         # value beyond the truncation (0 when finite)
    value_margin: float       # certification margin of the expansion value
    word_sum: int
    expansion_sum: int

    @property
    def sum_delta(self) -> int:
        return self.expansion_sum - self.word_sum


@dataclass(frozen=True)
class DisallowedWordTable:
    beta: Beta
    unity: UnityExpansion
    entries: Tuple[TableEntry, ...]
    horizon: int

    @property
    def max_lead(self) -> int:
        return max(-e.expansion.j_min for e in self.entries)


def build_disallowed_table(unity: UnityExpansion, horizon: int,
                           expansion_depth: int = 48,
                           precision: int = DEFAULT_PRECISION
                           ) -> DisallowedWordTable:
    """Expand every disallowed word by the greedy expansion, truncated at
    ``expansion_depth`` fractional digits with the dropped value recorded."""
    d = unity.digits
    if unity.finite:
        m = len(d)
        words = [d[:i - 1] + (d[i - 1] + 1,) for i in range(1, m)]
        words.append(d)
    else:
        if horizon > len(d):
            raise HorizonTooShort(
                f"table horizon {horizon} exceeds computed unity digits "
                f"{len(d)}")
        words = [d[:i - 1] + (d[i - 1] + 1,) for i in range(1, horizon + 1)]

    entries = []
    for w in words:
        # anchor the word's value at its last digit (exponent 0)
        value = evaluate(
            BetaRepresentation(unity.beta, DigitWord(-(len(w) - 1), w)),
            precision)
        ge = greedy_expand(unity.beta, value, expansion_depth,
                           style="spread", precision=precision)
        entries.append(TableEntry(
            word=w, expansion=ge.word, finite=ge.finite,
            tail_bound=0.0 if ge.finite else ge.residual_bound,
            value_margin=ge.margin, word_sum=sum(w),
            expansion_sum=ge.word.digit_sum()))
    return DisallowedWordTable(unity.beta, unity, tuple(entries),
                               horizon=horizon)


@dataclass(frozen=True)
class Violation:
    position: int      # the digit that is too high
    start: int         # where the word begins (position - len(word) + 1)
    entry_index: int
    entry: TableEntry


def _digit(digits: Dict[int, int], j: int) -> int:
    return digits.get(j, 0)


def _find_violation(digits: Dict[int, int], table: DisallowedWordTable,
                    not_before: Optional[int] = None) -> Optional[Violation]:
    candidates = sorted(j for j, v in digits.items() if v > 0)
    for v in candidates:
        if not_before is not None and v < not_before:
            continue
        for idx, entry in enumerate(table.entries):
            w = entry.word
            p = v - len(w) + 1
            if _digit(digits, v) < w[-1]:
                continue
            if all(_digit(digits, p + t) == w[t] for t in range(len(w) - 1)):
                return Violation(v, p, idx, entry)
    return None


def find_violation(rep: BetaRepresentation, table: DisallowedWordTable
                   ) -> Optional[Violation]:
    """Locate the lowest-position violation, or None when the representation
    is already a valid expansion (to the table's horizon)."""
    digits = {rep.word.j_min + i: d
              for i, d in enumerate(rep.word.digits) if d != 0}
    return _find_violation(digits, table)


def _apply_step(digits: Dict[int, int], viol: Violation, depth: int
                ) -> Certified:
    """Subtract the word, add its expansion; mass beyond ``depth`` is
    dropped and returned as a value bound (in units of beta**-position,
    accumulated by the caller against the base)."""
    w = viol.entry.word
    p = viol.start
    for t, wd in enumerate(w):
        j = p + t
        nd = _digit(digits, j) - wd
        if nd < 0:
            raise ArithmeticError("subtraction went negative; occurrence "
                                  "test violated")
        if nd == 0:
            digits.pop(j, None)
        else:
            digits[j] = nd
    dropped = []
    exp = viol.entry.expansion
    for i, ed in enumerate(exp.digits):
        if ed == 0:
            continue
        j = viol.position + exp.j_min + i
        if j > depth:
            dropped.append((j, ed))
        else:
            digits[j] = _digit(digits, j) + ed
    return dropped


@dataclass
class ReduceResult:
    final: BetaRepresentation
    trace: List[BetaRepresentation]
    digit_sums: List[int]
    status: str                       # clean | truncated | step-budget-exhausted
    truncation_residual: float        # value bound dropped past the depth limit
    value_error_bound: float          # certification margins accumulated
    unreduced_prefix: Optional[Tuple[int, int]]
    steps: int

    def trace_lines(self) -> List[str]:
        return [format_pointed(r.word) for r in self.trace]

    def rightmost_position(self) -> int:
        return self.final.word.j_max


def _snapshot(beta: Beta, digits: Dict[int, int]) -> BetaRepresentation:
    if not digits:
        return BetaRepresentation(beta, DigitWord(0, (0,)))
    return BetaRepresentation(beta, DigitWord.from_positions(digits.items()))


def reduce_step(rep: BetaRepresentation, table: DisallowedWordTable,
                depth: int = 48) -> BetaRepresentation:
    """One reduction step (requires an existing violation)."""
    digits = {rep.word.j_min + i: d
              for i, d in enumerate(rep.word.digits) if d != 0}
    viol = _find_violation(digits, table)
    if viol is None:
        raise ValueError("representation has no violation to reduce")
    _apply_step(digits, viol, depth)
    return _snapshot(rep.beta, digits)


def reduce_to_expansion(rep: BetaRepresentation, table: DisallowedWordTable,
                        max_steps: Optional[int] = None, depth: int = 48,
                        min_position: Optional[int] = None,
                        precision: int = DEFAULT_PRECISION) -> ReduceResult:
    """Iterate reduction steps until the representation is a valid expansion,
    the step budget runs out, or only frozen leading positions remain.

    ``min_position`` forbids creating digits left of it; steps that would do
    so freeze the offending prefix instead (reported as unreduced).  Digits
    pushed beyond ``depth`` are dropped into a certified residual bound.
    """
    digits = {rep.word.j_min + i: d
              for i, d in enumerate(rep.word.digits) if d != 0}
    if max_steps is None:
        maxd = max(digits.values()) if digits else 1
        max_steps = max(100, 10 * depth * maxd)

    with workprec(precision):
        b = table.beta.value(precision)
        residual = mpf(0)
        margin = mpf(0)
        trace = [_snapshot(table.beta, digits)]
        sums = [sum(digits.values())]
        frozen: Optional[Tuple[int, int]] = None
        not_before = None
        steps = 0
        status = None
        while steps < max_steps:
            viol = _find_violation(digits, table, not_before=not_before)
            if viol is None:
                status = "clean"
                break
            lead_pos = viol.position + viol.entry.expansion.j_min
            if min_position is not None and lead_pos < min_position:
                not_before = viol.position + 1
                frozen = (min_position if frozen is None else frozen[0],
                          viol.position)
                continue
            dropped = _apply_step(digits, viol, depth)
            for j, ed in dropped:
                residual += ed * b.val ** mpf(-j)
            residual += viol.entry.tail_bound
            margin += viol.entry.value_margin
            steps += 1
            trace.append(_snapshot(table.beta, digits))
            sums.append(sum(digits.values()))
        if status is None:
            status = "step-budget-exhausted"
        elif residual > 0:
            status = "truncated"
        return ReduceResult(final=trace[-1], trace=trace, digit_sums=sums,
                            status=status, truncation_residual=float(residual),
                            value_error_bound=float(margin),
                            unreduced_prefix=frozen, steps=steps)


def replacement_identity_check(beta: Beta, unity_prefix: Sequence[int],
                               k: int, require_nonnegative: bool = False,
                               precision: int = DEFAULT_PRECISION) -> bool:
    """Numeric check of the rewrite behind the word table: raising the k-th
    unity digit by one equals a carry of 1 followed by k zeros and the
    digit-wise differences d_t - d_{k+t}.

    The identity holds as values for arbitrary beta; with
    ``require_nonnegative`` the displayed difference digits must also be
    non-negative (the monotone-expansion case).
    """
    d = list(unity_prefix)
    if len(d) < 2 * k:
        raise ValueError("unity prefix must cover at least 2k digits")
    tail_terms = len(d) - k
    with workprec(precision):
        b = beta.value(precision).val
        lhs = mpf(0)
        for t in range(1, k + 1):
            digit = d[t - 1] + (1 if t == k else 0)
            lhs += digit * b ** mpf(-t)
        rhs = mpf(1)
        diffs = []
        for t in range(1, tail_terms + 1):
            dk = d[k + t - 1] if k + t - 1 < len(d) else 0
            diffs.append(d[t - 1] - dk)
            rhs += diffs[-1] * b ** mpf(-(k + t))
        if require_nonnegative and any(x < 0 for x in diffs):
            return False
        maxd = max(d) + 1
        tol = (maxd + 1) * b ** mpf(-(k + tail_terms)) / (b - 1) + mpf(2) ** (
            32 - precision)
        return abs(lhs - rhs) <= tol


def representations_with_sum_at_most(beta: Beta, target, max_sum: int,
                                     j_lo: int, j_hi: int, tol: float,
                                     precision: int = DEFAULT_PRECISION
                                     ) -> List[Tuple[DigitWord, float]]:
    """Brute-force oracle: every digit word over positions j_lo..j_hi with
    digit sum <= max_sum whose value falls within ``tol`` of ``target``.

    Exhaustive (stars-and-bars over positions), so keep max_sum small.
    """
    with workprec(precision):
        b = beta.value(precision).val
        powers = {j: b ** mpf(-j) for j in range(j_lo, j_hi + 1)}
        t = mpf(target) if not isinstance(target, Certified) else target.val
        out: List[Tuple[DigitWord, float]] = []
        positions = list(range(j_lo, j_hi + 1))

        def rec(idx: int, budget: int, val, assignment):
            if idx == len(positions):
                if abs(val - t) <= tol and any(assignment.values()):
                    out.append((DigitWord.from_positions(assignment.items()),
                                float(val)))
                return
            j = positions[idx]
            for dig in range(budget + 1):
                nv = val + dig * powers[j]
                if nv > t + tol:
                    if dig > 0:
                        break
                if dig:
                    assignment[j] = dig
                rec(idx + 1, budget - dig, nv, assignment)
                assignment.pop(j, None)

        rec(0, max_sum, mpf(0), {})
        return out

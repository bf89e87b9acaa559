"""Greedy beta expansions, the expansion of unity, admissibility checks,
periodicity detection, and the monotone-expansion classifier.

Digit extraction is certified: a digit is accepted only when the residual is
farther from the decision boundary than the accumulated error bound.
Ambiguous decisions trigger a retry at doubled precision; a boundary that
persists at the maximum precision is an exact hit for all practical inputs
and is declared a termination, with the residual margin recorded so callers
can tell a certified-exact finish (margin 0) from a numerically-tiny one.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from math import floor, log
from typing import Optional, Sequence, Tuple, Union

from mpmath import mp, mpf, workprec

from .errors import HorizonTooShort, PrecisionExhausted
from .numeric import Beta, Certified, DEFAULT_PRECISION, _to_mpf
from .words import DigitWord

Number = Union[int, float, str, "mpf"]


class Monotone(Enum):
    YES = "yes"
    NO = "no"
    INCONCLUSIVE = "inconclusive"


class _BoundaryHit(Exception):
    def __init__(self, position):
        self.position = position


@dataclass(frozen=True)
class GreedyExpansion:
    """Greedy digits of a value, with certification metadata.

    ``margin`` bounds the terminal residual when ``finite``; 0 means the
    termination happened in exact arithmetic.
    """
    word: DigitWord
    finite: bool
    margin: float
    residual_bound: float
    precision: int

    @property
    def digits(self) -> Tuple[int, ...]:
        return self.word.digits


def _certified_pow(b: Certified, m: int) -> Certified:
    out = Certified(1, 0)
    for _ in range(m):
        out = out * b
    return out


def _greedy_core(b: Certified, u: Certified, p0: int, p_end: int,
                 declare: bool):
    """Digits at positions p0..p_end of the greedy expansion of ``u``.

    Returns (digits, finite, margin_mpf, residual Certified).  Raises
    :class:`_BoundaryHit` when a decision is ambiguous and ``declare`` is
    False (exact-arithmetic boundaries are declared immediately).
    """
    r = u
    if p0 > 0:
        for _ in range(p0):
            r = r * b
    elif p0 < 0:
        binv_val = 1 / b.val
        binv_err = (b.err / (b.val * (b.val - b.err)) if b.err > 0 else mpf(0))
        binv = Certified(binv_val, binv_err + abs(binv_val) * mpf(2) ** (1 - mp.prec))
        for _ in range(-p0):
            r = r * binv

    digits = []
    for pos in range(p0, p_end + 1):
        if abs(r.val) <= 4 * r.err or (r.val == 0 and r.err == 0):
            return digits, True, abs(r.val) + r.err, Certified(0, abs(r.val) + r.err)
        if r.val < 0:
            raise ArithmeticError("residual went certifiably negative")
        d = int(mp.floor(r.val))
        frac = r.val - d
        if frac <= r.err:
            # residual after digit d is indistinguishable from zero
            if not declare and r.err > 0:
                raise _BoundaryHit(pos)
            digits.append(d)
            return digits, True, frac + r.err, Certified(0, frac + r.err)
        if 1 - frac <= r.err:
            # just below the next integer: exact hit on d+1
            if not declare and r.err > 0:
                raise _BoundaryHit(pos)
            digits.append(d + 1)
            return digits, True, (1 - frac) + r.err, Certified(0, (1 - frac) + r.err)
        digits.append(d)
        r = (r - d) * b
    return digits, False, mpf(0), r


def _leading_power(b: Certified, u: Certified) -> int:
    """Largest m >= 0 with beta**m <= u (ties resolve upward so that the
    leading digit becomes 1 with a zero residual)."""
    if u.val < 1:
        return 0
    guess = int(floor(log(float(u.val)) / log(float(b.val))))
    m = max(guess - 1, 0)
    while True:
        cmp = u - _certified_pow(b, m + 1)
        if cmp.val < -cmp.err:
            return m
        m += 1


def greedy_expand(beta: Beta, u: Number, n: int, style: str = "spread",
                  precision: Optional[int] = None,
                  max_precision: Optional[int] = None,
                  strict: bool = False) -> GreedyExpansion:
    """Greedy expansion of ``u >= 0`` with ``n`` digits at positions >= 1.

    style:
      "spread"     canonical expansion; the integer part spreads over leading
                   powers so every digit is at most floor(beta)
      "d0"         one unbounded digit floor(u) at position 0
      "fractional" digit at position 0 forced to 0 (requires u <= 1)

    With ``strict`` the operation raises :class:`PrecisionExhausted` instead
    of declaring a persistent boundary a termination.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if isinstance(u, float) and u < 0:
        raise ValueError("u must be non-negative")
    P = precision or DEFAULT_PRECISION
    maxP = max_precision or max(1536, P)
    while True:
        with workprec(P):
            b = beta.value(P)
            u_c = u if isinstance(u, Certified) else Certified(_to_mpf(u), 0)
            if u_c.val < 0:
                raise ValueError("u must be non-negative")
            declare = P >= maxP
            try:
                if style == "spread":
                    if u_c.val <= u_c.err:
                        return GreedyExpansion(DigitWord(0, (0,)), True, 0.0,
                                               float(u_c.val + u_c.err), P)
                    p0 = -_leading_power(b, u_c)
                elif style == "d0":
                    p0 = 0
                elif style == "fractional":
                    if u_c.val > 1 + u_c.err:
                        raise ValueError("fractional style requires u <= 1")
                    p0 = 1
                else:
                    raise ValueError(f"unknown style {style!r}")
                digits, finite, margin, resid = _greedy_core(
                    b, u_c, p0, n, declare)
            except _BoundaryHit as hit:
                if P < maxP:
                    P = min(2 * P, maxP)
                    continue
                raise PrecisionExhausted(
                    f"digit decision at position {hit.position} inside error "
                    f"bound at {P} bits", step=hit.position, precision=P)
            if declare and strict and finite and margin > 0:
                raise PrecisionExhausted(
                    "termination declared only by margin", precision=P)
            if not digits:
                digits = [0]
            if style == "spread":
                while len(digits) > 1 and digits[0] == 0:
                    digits.pop(0)
                    p0 += 1
            if finite:
                # certified-finite words end at their last nonzero digit
                while len(digits) > 1 and digits[-1] == 0:
                    digits.pop()
            word = DigitWord(p0, tuple(digits))
            last_pos = word.j_min + len(word.digits) - 1
            rb = (abs(resid.val) + resid.err) * b.val ** mpf(-last_pos)
            return GreedyExpansion(word, finite, float(margin), float(rb), P)


@dataclass(frozen=True)
class UnityExpansion:
    """The digit stream of 1 with the position-0 digit forced to 0."""
    beta: Beta
    digits: Tuple[int, ...]
    finite: bool
    margin: float
    period: Optional[Tuple[int, int]]
    monotone: Monotone
    horizon: int
    precision: int

    def comparison_stream(self, n: int) -> Tuple[int, ...]:
        """First n digits of the stream that admissible words must not
        exceed: the periodic quasi-greedy form when the expansion is finite,
        the expansion itself otherwise."""
        if self.finite:
            base = self.digits[:-1] + (self.digits[-1] - 1,)
            reps = -(-n // len(base))
            return (base * reps)[:n]
        if n > len(self.digits):
            raise HorizonTooShort(
                f"need {n} digits of the expansion of unity, have "
                f"{len(self.digits)}")
        return self.digits[:n]

    def stream_digit(self, t: int) -> int:
        """1-based digit of the comparison stream."""
        if self.finite:
            base = self.digits[:-1] + (self.digits[-1] - 1,)
            return base[(t - 1) % len(base)]
        if t > len(self.digits):
            raise HorizonTooShort(
                f"comparison undecided within {len(self.digits)} unity digits")
        return self.digits[t - 1]


def expansion_of_unity(beta: Beta, n: int,
                       precision: Optional[int] = None) -> UnityExpansion:
    """Greedy digits of 1 with the leading digit forced to 0, plus the
    periodicity and monotonicity reports."""
    ge = greedy_expand(beta, 1, n, style="fractional", precision=precision)
    digits = ge.word.digits
    # fractional expansion of 1 starts at position 1; leading zeros only if
    # beta were <= 1, which is excluded
    period = None if ge.finite else detect_eventual_period(digits)
    return UnityExpansion(beta=beta, digits=digits, finite=ge.finite,
                          margin=ge.margin, period=period,
                          monotone=_monotone_verdict(digits, ge.finite),
                          horizon=n, precision=ge.precision)


def detect_eventual_period(digits: Sequence[int]) -> Optional[Tuple[int, int]]:
    """Smallest (preperiod, period) consistent with the whole prefix,
    requiring at least 3 full period repetitions as evidence.

    Reported as evidence, never as proof: a longer prefix can revoke it.
    """
    if not digits:
        raise ValueError("digit list must be non-empty")
    n = len(digits)
    for p in range(1, n // 3 + 1):
        for pre in range(0, n - 3 * p + 1):
            if all(digits[j] == digits[j + p] for j in range(pre, n - p)):
                return (pre, p)
    return None


def _monotone_verdict(digits: Sequence[int], finite: bool) -> Monotone:
    for a, b in zip(digits, digits[1:]):
        if a < b:
            return Monotone.NO
    if finite:
        return Monotone.YES  # trailing zeros keep the sequence non-increasing
    return Monotone.INCONCLUSIVE


def is_monotone_MB(beta: Beta, horizon: int,
                   precision: Optional[int] = None) -> Monotone:
    """Classify beta by whether its expansion of unity is non-increasing.

    YES requires a certified-finite expansion; an infinite monotone stream
    stays INCONCLUSIVE at any horizon.
    """
    if horizon < 2:
        raise ValueError("horizon must be >= 2")
    unity = expansion_of_unity(beta, horizon, precision=precision)
    return unity.monotone


def _suffix_leq_stream(suffix: Sequence[int], unity: UnityExpansion) -> bool:
    t = 0
    limit = len(suffix) + (len(unity.digits) + 2 if not unity.finite
                           else len(unity.digits) + 1)
    while t < limit:
        w = suffix[t] if t < len(suffix) else 0
        c = unity.stream_digit(t + 1)  # may raise HorizonTooShort
        if w < c:
            return True
        if w > c:
            return False
        t += 1
    raise HorizonTooShort("tie not resolved within available stream digits")


def is_admissible(word: DigitWord, unity: UnityExpansion) -> bool:
    """Whether the digit sequence can occur in a greedy expansion (after the
    unbounded leading digit): every suffix, zero-extended, must stay
    lexicographically below the comparison stream."""
    digits = word.digits
    for i in range(len(digits)):
        if not _suffix_leq_stream(digits[i:], unity):
            return False
    return True

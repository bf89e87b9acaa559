"""General beta representations, the digit/switching-signal correspondence,
and the one-dimensional affine switched system simulator.

The switching signal alphabet is {1, 2}: symbol 1 maps u to u - 1, symbol 2
maps u to beta * u.  A representation's digits and a signal are two views of
the same object: digit d at position j means d consecutive 1-symbols between
the j-th and (j+1)-th 2-symbol.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from mpmath import workprec

from .errors import IncompleteBlock
from .numeric import Beta, Certified, DEFAULT_PRECISION, _to_mpf
from .words import DigitWord, average_digit_prefix  # noqa: F401  (re-export)


@dataclass(frozen=True)
class BetaRepresentation:
    beta: Beta
    word: DigitWord

    def value(self, precision: int = DEFAULT_PRECISION) -> Certified:
        return evaluate(self, precision)

    def digit_sum(self) -> int:
        return self.word.digit_sum()


def evaluate(rep: BetaRepresentation,
             precision: int = DEFAULT_PRECISION) -> Certified:
    """Certified value sum(d_j * beta**-j) of a finite representation."""
    with workprec(precision + 16):
        b = rep.beta.value(precision)
        binv_val = 1 / b.val
        binv = Certified(binv_val, b.err / (b.val * (b.val - b.err))
                         if b.err > 0 else 0)
        # Horner from the highest position down to j_min
        acc = Certified(0, 0)
        for d in reversed(rep.word.digits):
            acc = acc * binv + d
        # acc now equals value * beta**j_min
        scale = Certified(1, 0)
        j = rep.word.j_min
        for _ in range(abs(j)):
            scale = scale * (binv if j > 0 else b)
        return acc * scale


def digits_to_switching(word: DigitWord) -> Tuple[int, ...]:
    """Signal that realises the representation: d_j 1-symbols then a 2, for
    each stored digit in position order.  Requires j_min = 0."""
    if word.j_min != 0:
        raise ValueError("switching correspondence needs j_min = 0; "
                         "use shift_to_zero first")
    out: List[int] = []
    for d in word.digits:
        out.extend([1] * d)
        out.append(2)
    return tuple(out)


def switching_to_digits(signal: Sequence[int]) -> DigitWord:
    """Inverse of :func:`digits_to_switching`.

    The signal must end with a 2 (complete final block).
    """
    if any(s not in (1, 2) for s in signal):
        raise ValueError("signal symbols must be 1 or 2")
    if not signal or signal[-1] != 2:
        raise IncompleteBlock("signal must end with a complete block (a 2)")
    digits: List[int] = []
    run = 0
    for s in signal:
        if s == 1:
            run += 1
        else:
            digits.append(run)
            run = 0
    return DigitWord(0, tuple(digits))


def shift_to_zero(word: DigitWord) -> Tuple[DigitWord, int]:
    """Move a word with leading positions to j_min = 0.

    Returns the shifted word and the shift s applied; the shifted word
    represents the original value scaled by beta**-s.
    """
    s = -word.j_min
    return word.shifted(s), s


@dataclass(frozen=True)
class AffineTrajectory:
    """States of u(k+1) = a_sig(k)(u(k)) with a_1(u) = u - 1, a_2(u) = beta*u.

    ``states[k]`` is the state before step k; ``first_negative`` is the index
    of the first certifiably negative state, if any (an invalid strategy is a
    flagged outcome, not an error).
    """
    beta: Beta
    signal: Tuple[int, ...]
    states: Tuple[Certified, ...]
    first_negative: Optional[int]

    def floats(self) -> List[float]:
        return [float(s.val) for s in self.states]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf)
        w.writerow(["step", "symbol", "state", "error_bound"])
        for k, st in enumerate(self.states):
            sym = self.signal[k - 1] if k >= 1 else ""
            w.writerow([k, sym, repr(float(st.val)), repr(float(st.err))])
        return buf.getvalue()


def simulate_affine(beta: Beta, u0, signal: Sequence[int],
                    precision: int = DEFAULT_PRECISION) -> AffineTrajectory:
    """Run the affine switched system and record the full trajectory."""
    if any(s not in (1, 2) for s in signal):
        raise ValueError("signal symbols must be 1 or 2")
    with workprec(precision + 16):
        b = beta.value(precision)
        u = u0 if isinstance(u0, Certified) else Certified(_to_mpf(u0), 0)
        states = [u]
        first_neg = None
        for k, s in enumerate(signal, start=1):
            u = (u - 1) if s == 1 else (u * b)
            states.append(u)
            if first_neg is None and u.val + u.err < 0:
                first_neg = k
        return AffineTrajectory(beta, tuple(signal), tuple(states), first_neg)


def signal_length_identity(word: DigitWord) -> Tuple[int, int, Fraction]:
    """Exact block accounting for a finite word: the signal length equals
    (number of blocks) * (1 + mean digit).

    Returns (T, T2, mean) with T = T2 * (1 + mean) as exact arithmetic.
    """
    k = len(word.digits)
    total = word.digit_sum()
    mean = Fraction(total, k)
    return total + k, k, mean

"""Finite digit words with a position offset, plus their text forms.

A word stores non-negative integer digits occupying consecutive positions
``j_min, j_min+1, ...``; the value against a base beta is
``sum(d[i] * beta**-(j_min+i))``.  Positions j <= 0 sit left of the point in
the pointed notation ("13.01" puts 1 at j=-1 and 3 at j=0).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Tuple


@dataclass(frozen=True)
class DigitWord:
    j_min: int
    digits: Tuple[int, ...]

    def __post_init__(self):
        if not self.digits:
            object.__setattr__(self, "digits", (0,))
        if any(d < 0 for d in self.digits):
            raise ValueError("digits must be non-negative")

    def __len__(self):
        return len(self.digits)

    @property
    def j_max(self) -> int:
        return self.j_min + len(self.digits) - 1

    def digit_at(self, j: int) -> int:
        if self.j_min <= j <= self.j_max:
            return self.digits[j - self.j_min]
        return 0

    def digit_sum(self) -> int:
        return sum(self.digits)

    def shifted(self, delta: int) -> "DigitWord":
        """Same digits, positions moved by ``delta`` (value scales by
        beta**-delta)."""
        return DigitWord(self.j_min + delta, self.digits)

    def trimmed(self) -> "DigitWord":
        """Drop leading and trailing zeros (keeping at least one digit)."""
        digits = list(self.digits)
        j_min = self.j_min
        while len(digits) > 1 and digits[-1] == 0:
            digits.pop()
        while len(digits) > 1 and digits[0] == 0:
            digits.pop(0)
            j_min += 1
        return DigitWord(j_min, tuple(digits))

    @staticmethod
    def from_positions(items: Iterable[Tuple[int, int]]) -> "DigitWord":
        """Build from (position, digit) pairs; missing positions are zero."""
        pairs = [(j, d) for j, d in items if d != 0]
        if not pairs:
            return DigitWord(0, (0,))
        lo = min(j for j, _ in pairs)
        hi = max(j for j, _ in pairs)
        digits = [0] * (hi - lo + 1)
        for j, d in pairs:
            digits[j - lo] += d
        return DigitWord(lo, tuple(digits))


def average_digit_prefix(word: DigitWord, k: int) -> Fraction:
    """Exact mean of the first k stored digits."""
    if k < 1 or k > len(word.digits):
        raise ValueError(f"word has {len(word.digits)} digits, need k={k}")
    return Fraction(sum(word.digits[:k]), k)


def format_pointed(word: DigitWord) -> str:
    """Pointed notation with the point after position 0, e.g. "1000.1001".

    Digits above 9 force comma separation within each side of the point.
    """
    int_digits = [word.digit_at(j) for j in range(min(word.j_min, 0), 1)]
    frac_digits = [word.digit_at(j) for j in range(1, max(word.j_max, 0) + 1)]
    while len(int_digits) > 1 and int_digits[0] == 0:
        int_digits.pop(0)
    while frac_digits and frac_digits[-1] == 0:
        frac_digits.pop()
    if any(d > 9 for d in int_digits + frac_digits):
        left = ",".join(str(d) for d in int_digits)
        right = ",".join(str(d) for d in frac_digits)
    else:
        left = "".join(str(d) for d in int_digits)
        right = "".join(str(d) for d in frac_digits)
    return f"{left}.{right}" if right else f"{left}."


def parse_pointed(text: str) -> DigitWord:
    """Inverse of :func:`format_pointed`; also accepts plain integers."""
    text = text.strip()
    if "." in text:
        left, right = text.split(".", 1)
    else:
        left, right = text, ""
    comma_form = "," in text

    def _side(s):
        if not s:
            return []
        if comma_form:
            return [int(p) for p in s.split(",")]
        return [int(ch) for ch in s]

    int_digits = _side(left) or [0]
    frac_digits = _side(right)
    digits = int_digits + frac_digits
    j_min = -(len(int_digits) - 1)
    return DigitWord(j_min, tuple(digits)).trimmed()


def format_compact(word: DigitWord) -> str:
    """Compact stream form: optional "j_min=N;" prefix, digits juxtaposed
    when all are single decimal digits, comma separated otherwise."""
    prefix = f"j_min={word.j_min};" if word.j_min != 0 else ""
    if any(d > 9 for d in word.digits):
        body = ",".join(str(d) for d in word.digits)
    else:
        body = "".join(str(d) for d in word.digits)
    return prefix + body


def parse_compact(text: str) -> DigitWord:
    text = text.strip()
    j_min = 0
    if text.startswith("j_min="):
        head, text = text.split(";", 1)
        j_min = int(head[len("j_min="):])
    if "," in text:
        digits = tuple(int(p) for p in text.split(","))
    else:
        digits = tuple(int(ch) for ch in text)
    return DigitWord(j_min, digits)

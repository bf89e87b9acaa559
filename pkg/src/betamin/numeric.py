"""High-precision scalar arithmetic, bracketed root solving, and the special
bases used throughout the package.

All arithmetic that feeds digit extraction carries an explicit, conservative
absolute error bound (:class:`Certified`).  Working precision is always well
above double-double so that greedy digit extraction, whose error grows by a
factor beta per step, stays certified to useful depth.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence, Union

from mpmath import mp, mpf, workprec

from .errors import BracketError

DEFAULT_PRECISION = 192  # bits; ~57 decimal digits, comfortably > double-double
MAX_PRECISION = 4096

Number = Union[int, float, Fraction, str, mpf]


def _to_mpf(x: Number) -> mpf:
    """Convert exactly representable inputs to mpf without hidden rounding."""
    if isinstance(x, Fraction):
        return mpf(x.numerator) / mpf(x.denominator)
    return mpf(x)


def _eps() -> mpf:
    return mpf(2) ** (1 - mp.prec)


class Certified:
    """An mpf value together with a conservative absolute error bound.

    Operations propagate bounds so that the true value always lies in
    ``[val - err, val + err]``.  One ulp of the result is added per
    operation to absorb rounding.
    """

    __slots__ = ("val", "err")

    def __init__(self, val: Number, err: Number = 0):
        self.val = _to_mpf(val)
        self.err = _to_mpf(err)
        if self.err < 0:
            raise ValueError("error bound must be non-negative")

    def __repr__(self):
        return f"Certified({self.val!r}, err={self.err!r})"

    def __float__(self):
        return float(self.val)

    @staticmethod
    def _coerce(x) -> "Certified":
        if isinstance(x, Certified):
            return x
        return Certified(_to_mpf(x), 0)

    def __add__(self, other) -> "Certified":
        o = self._coerce(other)
        v = self.val + o.val
        return Certified(v, self.err + o.err + abs(v) * _eps())

    __radd__ = __add__

    def __sub__(self, other) -> "Certified":
        o = self._coerce(other)
        v = self.val - o.val
        return Certified(v, self.err + o.err + abs(v) * _eps())

    def __rsub__(self, other) -> "Certified":
        return self._coerce(other).__sub__(self)

    def __mul__(self, other) -> "Certified":
        o = self._coerce(other)
        v = self.val * o.val
        e = (abs(self.val) * o.err + abs(o.val) * self.err + self.err * o.err
             + abs(v) * _eps())
        return Certified(v, e)

    __rmul__ = __mul__

    def __neg__(self) -> "Certified":
        return Certified(-self.val, self.err)

    def separated_from(self, x: Number) -> bool:
        """True when the enclosure lies strictly on one side of ``x``."""
        x = _to_mpf(x)
        return self.val - self.err > x or self.val + self.err < x


def solve_increasing_root(f: Callable[[mpf], mpf], lo: Number, hi: Number,
                          tol: Number) -> mpf:
    """Plain bisection for a strictly increasing continuous ``f`` with
    ``f(lo) < 0 < f(hi)``.

    Returns the bracket midpoint once the bracket width drops below ``tol``.
    Deterministic; no derivative use.
    """
    lo = _to_mpf(lo)
    hi = _to_mpf(hi)
    tol = _to_mpf(tol)
    if not tol > 0:
        raise ValueError("tol must be positive")
    if not (f(lo) < 0 and f(hi) > 0):
        raise BracketError(f"sign condition f(lo)<0<f(hi) fails on [{lo}, {hi}]")
    while hi - lo > tol:
        mid = (lo + hi) / 2
        if mid <= lo or mid >= hi:  # bracket at working resolution
            break
        if f(mid) < 0:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


def _poly_eval(coeffs: Sequence[int], x: mpf) -> mpf:
    """Horner evaluation of an integer-coefficient polynomial.

    ``coeffs`` are ascending: coeffs[i] multiplies x**i.
    """
    acc = mpf(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _poly_derivative(coeffs: Sequence[int]) -> tuple:
    return tuple(i * c for i, c in enumerate(coeffs) if i >= 1)


@dataclass(frozen=True)
class PolynomialDef:
    """Integer polynomial (ascending coefficients) with an isolating bracket
    on which it changes sign exactly once, from negative to positive."""
    coeffs: tuple
    lo: float
    hi: float


@dataclass(frozen=True)
class FloatDef:
    """A base given literally as a binary double; treated as exact."""
    value: float


@dataclass(frozen=True)
class EulerDef:
    """The base e, computed from its series to working precision."""


class Beta:
    """A base beta > 1, given as a float literal, a polynomial root with an
    isolating bracket, or the constant e.

    Values at any requested precision are computed on demand and cached; a
    ``Beta`` is safe to share and to pickle (the cache is dropped).
    """

    def __init__(self, definition, name: Optional[str] = None,
                 is_pisot: Optional[bool] = None):
        self.definition = definition
        self.name = name
        self.is_pisot = is_pisot
        self._cache = {}
        if isinstance(definition, FloatDef) and not definition.value > 1:
            raise ValueError("beta must exceed 1")

    # -- construction -----------------------------------------------------

    @staticmethod
    def from_float(x: float, name: Optional[str] = None) -> "Beta":
        return Beta(FloatDef(float(x)), name=name)

    @staticmethod
    def from_polynomial(coeffs: Sequence[int], lo: float, hi: float,
                        name: Optional[str] = None,
                        is_pisot: Optional[bool] = None) -> "Beta":
        if len(coeffs) < 2:
            raise ValueError("polynomial must have degree >= 1")
        return Beta(PolynomialDef(tuple(int(c) for c in coeffs), float(lo),
                                  float(hi)),
                    name=name, is_pisot=is_pisot)

    # -- evaluation --------------------------------------------------------

    def value(self, precision: int = DEFAULT_PRECISION) -> Certified:
        """The base as a :class:`Certified` scalar at >= ``precision`` bits."""
        got = self._cache.get(precision)
        if got is not None:
            return got
        with workprec(precision + 16):
            d = self.definition
            if isinstance(d, FloatDef):
                out = Certified(mpf(d.value), 0)
            elif isinstance(d, EulerDef):
                v = +mp.e
                out = Certified(v, abs(v) * mpf(2) ** (4 - precision))
            elif isinstance(d, PolynomialDef):
                tol = mpf(2) ** (-(precision + 8))
                root = solve_increasing_root(
                    lambda x: _poly_eval(d.coeffs, x), d.lo, d.hi, tol)
                out = Certified(root, tol)
            else:
                raise TypeError(f"unknown beta definition {d!r}")
        self._cache[precision] = out
        return out

    @property
    def approx(self) -> float:
        return float(self.value(64).val)

    def floor(self) -> int:
        """The integer part of beta (certified)."""
        v = self.value()
        f = int(mp.floor(v.val))
        # exact integers (float-defined) land here with err 0
        if v.val - f <= v.err and v.err > 0:
            raise BracketError(f"beta too close to integer {f} to certify floor")
        return f

    # -- plumbing ----------------------------------------------------------

    def __repr__(self):
        label = self.name or self.definition
        return f"Beta({label}, ~{self.approx:.6f})"

    def __eq__(self, other):
        return isinstance(other, Beta) and self.definition == other.definition

    def __hash__(self):
        return hash(self.definition)

    def __getstate__(self):
        return {"definition": self.definition, "name": self.name,
                "is_pisot": self.is_pisot}

    def __setstate__(self, state):
        self.definition = state["definition"]
        self.name = state["name"]
        self.is_pisot = state["is_pisot"]
        self._cache = {}


def gamma_k(k: int, tol: float = 1e-30) -> Beta:
    """The unique base > 2 at which a run of k ones can be swapped for the
    block 040^(k-2): the root of x^(k-2) * (x-2)^2 = 1 with x > 2.

    Strictly decreasing in k with limit 2.
    """
    if k < 5:
        raise ValueError("k must be >= 5")
    # expanded form: x^k - 4 x^(k-1) + 4 x^(k-2) - 1
    coeffs = [0] * (k + 1)
    coeffs[0] = -1
    coeffs[k - 2] = 4
    coeffs[k - 1] = -4
    coeffs[k] = 1
    beta = Beta.from_polynomial(coeffs, 2.0, 3.0, name=f"gamma{k}")
    beta.value(max(DEFAULT_PRECISION, _bits_for(tol)))
    return beta


def multinacci(k: int, tol: float = 1e-30) -> Beta:
    """The multinacci base in (1, 2): the root of x^k = (x^k - 1)/(x - 1),
    equivalently of x^(k+1) - 2 x^k + 1 = 0, above the trivial root 1.

    k = 2 gives the golden ratio.  Satisfies 2 - mu_k = mu_k^(-k).
    """
    if k < 2:
        raise ValueError("k must be >= 2")
    coeffs = [0] * (k + 2)
    coeffs[0] = 1
    coeffs[k] = -2
    coeffs[k + 1] = 1
    beta = Beta.from_polynomial(coeffs, 1.5, 2.0, name=f"mu{k}",
                                is_pisot=True)
    beta.value(max(DEFAULT_PRECISION, _bits_for(tol)))
    return beta


def _bits_for(tol: float) -> int:
    import math
    return min(MAX_PRECISION, int(math.ceil(-math.log2(tol))) + 16)


def named_beta(name: str) -> Beta:
    """Bases referred to by name on the CLI.

    Pisot flags are catalogue data, not computed.
    """
    key = name.strip().lower()
    if key == "rho":
        return Beta.from_polynomial([-1, -1, 0, 1], 1.2, 1.5, name="rho",
                                    is_pisot=True)
    if key == "chi":
        return Beta.from_polynomial([-1, 0, 0, -1, 1], 1.3, 1.5, name="chi",
                                    is_pisot=True)
    if key == "sqrt2":
        return Beta.from_polynomial([-2, 0, 1], 1.0, 2.0, name="sqrt2",
                                    is_pisot=False)
    if key in ("phi", "mu2"):
        return Beta.from_polynomial([-1, -1, 1], 1.0, 2.0, name="phi",
                                    is_pisot=True)
    if key == "e":
        return Beta(EulerDef(), name="e", is_pisot=False)
    if key.startswith("mu"):
        k = int(key[2:])
        return multinacci(k)
    if key.startswith("gamma"):
        k = int(key[5:])
        if k == 6:
            # cubic factor of the defining polynomial; same root
            return Beta.from_polynomial([-1, 0, -2, 1], 2.0, 2.5,
                                        name="gamma6", is_pisot=True)
        b = gamma_k(k)
        if k == 5:
            return Beta(b.definition, name="gamma5", is_pisot=False)
        return b
    raise ValueError(f"unknown named base {name!r}")


NAMED_BASES = ("rho", "chi", "sqrt2", "phi", "mu3", "gamma5", "gamma6", "e")

"""The two-dimensional switched linear system behind the one-dimensional
affine model: a rotation by theta against the diagonal contraction
diag(c, beta*c), the exact bookkeeping that links signals to digit averages,
and an exploratory probe of the decay-rate conjecture.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from .numeric import Beta
from .words import DigitWord, average_digit_prefix


@dataclass(frozen=True)
class MatrixSystem:
    """M(theta, c, beta) with A1 a rotation by theta and A2 = diag(c, beta*c).

    Requires beta >= 1/c > 1.  A1 preserves the norm; a product's determinant
    is (beta * c**2)**(number of A2 factors), at least 1 when
    beta >= c**-2.
    """
    theta: float
    c: float
    beta: float

    def __post_init__(self):
        if not (0 < self.c < 1):
            raise ValueError("c must lie in (0, 1)")
        if not self.beta * self.c >= 1:
            raise ValueError("need beta >= 1/c")

    @property
    def a1(self) -> np.ndarray:
        t = self.theta
        return np.array([[math.cos(t), math.sin(t)],
                         [-math.sin(t), math.cos(t)]])

    @property
    def a2(self) -> np.ndarray:
        return np.array([[self.c, 0.0], [0.0, self.beta * self.c]])

    def matrix(self, symbol: int) -> np.ndarray:
        if symbol == 1:
            return self.a1
        if symbol == 2:
            return self.a2
        raise ValueError("symbols are 1 or 2")

    def det_a2(self) -> float:
        return self.beta * self.c ** 2


@dataclass(frozen=True)
class MatrixTrajectory:
    system: MatrixSystem
    signal: Tuple[int, ...]
    states: np.ndarray          # (T+1, 2)

    def norms(self) -> np.ndarray:
        return np.linalg.norm(self.states, axis=1)

    def empirical_rate(self) -> float:
        n = self.norms()
        T = len(self.signal)
        if T == 0 or n[0] == 0:
            return float("nan")
        return float((n[-1] / n[0]) ** (1.0 / T))


def simulate_matrix(system: MatrixSystem, x0: Sequence[float],
                    signal: Sequence[int]) -> MatrixTrajectory:
    """Sequential application of the chosen matrices; the full state history
    is recorded."""
    x = np.asarray(x0, dtype=np.float64)
    if x.shape != (2,) or not np.any(x):
        raise ValueError("x0 must be a nonzero 2-vector")
    states = np.empty((len(signal) + 1, 2))
    states[0] = x
    for i, s in enumerate(signal, start=1):
        x = system.matrix(s) @ x
        states[i] = x
    return MatrixTrajectory(system, tuple(signal), states)


def linearized_rate(c: float, word: DigitWord, k: int) -> float:
    """Per-step norm factor of the bookkeeping model, c**(1/(1+mean digit)),
    with the mean over the first k digits taken exactly."""
    if not (0 < c < 1):
        raise ValueError("c must lie in (0, 1)")
    mean = average_digit_prefix(word, k)
    return c ** float(1 / (1 + mean))


Strategy = Callable[[np.ndarray, MatrixSystem], int]


def greedy_angle_strategy(x: np.ndarray, system: MatrixSystem) -> int:
    """Contract whenever the state sits within one rotation step of the
    stable axis, otherwise rotate (the state-feedback analogue of applying
    symbol 2 when u < 1)."""
    angle = math.atan2(x[1], x[0])
    return 2 if abs(angle) < system.theta else 1


@dataclass(frozen=True)
class ProbeRow:
    theta: float
    x0_angle: float
    empirical_rate: float
    reference_rate: float
    steps: int


@dataclass(frozen=True)
class ProbeTable:
    rows: Tuple[ProbeRow, ...]

    def sup_rate(self, theta: float) -> float:
        return max(r.empirical_rate for r in self.rows if r.theta == theta)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf)
        w.writerow(["theta", "x0_angle", "empirical_rate", "reference_rate",
                    "T"])
        for r in self.rows:
            w.writerow([repr(r.theta), repr(r.x0_angle),
                        repr(r.empirical_rate), repr(r.reference_rate),
                        r.steps])
        return buf.getvalue()


def empirical_rate_probe(c: float, beta: Beta, thetas: Sequence[float],
                         steps: int, strategy: Strategy = greedy_angle_strategy,
                         dbar_estimate: Optional[float] = None,
                         n_angles: int = 64) -> ProbeTable:
    """Run the strategy from a grid of unit initial vectors for each theta
    and record empirical decay rates next to the reference
    c**(1/(1+dbar_estimate)).  Purely exploratory: no pass/fail."""
    bval = float(beta.value(96).val)
    if dbar_estimate is None:
        reference = float("nan")
    else:
        reference = c ** (1.0 / (1.0 + dbar_estimate))
    rows: List[ProbeRow] = []
    for theta in thetas:
        system = MatrixSystem(theta=theta, c=c, beta=bval)
        for i in range(n_angles):
            phi0 = 2 * math.pi * i / n_angles
            x = np.array([math.cos(phi0), math.sin(phi0)])
            # renormalize each step; the rate is the mean log factor
            log_sum = 0.0
            for _ in range(steps):
                x = system.matrix(strategy(x, system)) @ x
                nrm = float(np.linalg.norm(x))
                log_sum += math.log(nrm)
                x /= nrm
            rate = math.exp(log_sum / steps)
            rows.append(ProbeRow(theta=theta, x0_angle=phi0,
                                 empirical_rate=rate,
                                 reference_rate=reference, steps=steps))
    return ProbeTable(tuple(rows))

"""Numerical upper bound on the minimum average digit: enumerate length-k
digit words in increasing digit-sum order and certify that their values
cover [0, 1) with gaps at most beta**-k.

Enumeration is pruned by partial value (words whose value already exceeds
1 + beta**-k can never help coverage) and the last three positions are
vectorized; per-bin minima and maxima make the gap check linear in the bin
count.  Everything here runs in plain double precision with an explicit gap
tolerance (default 1e-14), well above double rounding at these depths.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Iterator, List, Optional, Sequence, Tuple

import numpy as np

from .numeric import Beta
from .words import DigitWord

MAX_BINS = 1 << 26
DEFAULT_TOLERANCE = 1e-14
CHECKPOINT_MAGIC = "betamin-coverage"
CHECKPOINT_VERSION = 1


def enumerate_by_digit_sum(k: int, s: int) -> Iterator[DigitWord]:
    """Every word of length k with non-negative digits summing to exactly s,
    in lexicographic order (cumulative count over sums 0..S is C(S+k, k))."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if s < 0:
        raise ValueError("s must be >= 0")
    word = [0] * k

    def rec(pos: int, rem: int):
        if pos == k - 1:
            word[pos] = rem
            yield DigitWord(1, tuple(word))
            return
        for d in range(rem + 1):
            word[pos] = d
            yield from rec(pos + 1, rem - d)

    yield from rec(0, s)


def cumulative_word_count(k: int, s_max: int) -> int:
    """Number of length-k words with digit sum <= s_max: C(s_max + k, k)."""
    return comb(s_max + k, k)


class _TailTables:
    """Vectorized values of the last ``t`` digit positions, per digit sum."""

    def __init__(self, beta_value: float, k: int, t: int, s_max: int):
        self.t = t
        powers = [beta_value ** -(k - i) for i in range(t)]  # low .. high pos
        self.values: List[np.ndarray] = []
        for s in range(s_max + 1):
            if t == 1:
                vals = np.array([s * powers[0]], dtype=np.float64)
            elif t == 2:
                a = np.arange(s + 1, dtype=np.float64)
                vals = a * powers[1] + (s - a) * powers[0]
            else:
                rows = []
                for a in range(s + 1):
                    b = np.arange(s - a + 1, dtype=np.float64)
                    rows.append(a * powers[2] + b * powers[1]
                                + (s - a - b) * powers[0])
                vals = np.concatenate(rows) if rows else np.empty(0)
            self.values.append(vals)

    def get(self, s: int) -> np.ndarray:
        return self.values[s]


@dataclass
class CoverageGrid:
    """Per-bin minimum and maximum of inserted values on [0, 1)."""
    beta_value: float
    k: int
    n_bins: int
    bin_width: float
    tolerance: float
    mins: np.ndarray
    maxs: np.ndarray

    @staticmethod
    def create(beta_value: float, k: int,
               tolerance: float = DEFAULT_TOLERANCE) -> "CoverageGrid":
        scale = beta_value ** k
        n_bins = int(math.ceil(scale))
        if n_bins > MAX_BINS:
            raise ValueError(
                f"beta**k = {scale:.3g} exceeds the bin cap {MAX_BINS}; "
                f"reduce k")
        return CoverageGrid(
            beta_value=beta_value, k=k, n_bins=n_bins,
            bin_width=beta_value ** -k, tolerance=tolerance,
            mins=np.full(n_bins, np.inf), maxs=np.full(n_bins, -np.inf))

    def insert(self, values: np.ndarray) -> int:
        """Insert values < 1 (others are discarded); returns how many were
        kept.  Min/max updates commute, so insertion order never matters."""
        vals = values[values < 1.0]
        if vals.size == 0:
            return 0
        idx = np.clip((vals * (self.beta_value ** self.k)).astype(np.int64),
                      0, self.n_bins - 1)
        np.minimum.at(self.mins, idx, vals)
        np.maximum.at(self.maxs, idx, vals)
        return int(vals.size)

    def merge(self, other: "CoverageGrid") -> None:
        np.minimum(self.mins, other.mins, out=self.mins)
        np.maximum(self.maxs, other.maxs, out=self.maxs)

    def gap_state(self) -> Tuple[bool, float, bool]:
        """(covered, worst_gap, used_tolerance).

        Walk occupied bins in order; the gap chain starts at 0 (the all-zero
        word is always present) and ends at 1.  Within-bin gaps never exceed
        the bin width, so only min-to-previous-max steps need checking.  A
        gap of exactly one bin width needs no tolerance (adjacent words that
        differ by one in the last digit); the tolerance only absorbs
        round-off above that.
        """
        occ = np.flatnonzero(np.isfinite(self.mins))
        if occ.size == 0:
            return False, 1.0, False
        gaps = [float(self.mins[occ[0]])]
        if occ.size > 1:
            gaps.extend((self.mins[occ[1:]] - self.maxs[occ[:-1]]).tolist())
        gaps.append(1.0 - float(self.maxs[occ[-1]]))
        worst = max(gaps)
        covered = worst <= self.bin_width + self.tolerance
        return covered, worst, covered and worst > self.bin_width


@dataclass
class CoverageReport:
    beta_value: float
    k: int
    s_reached: int
    covered: bool
    bound: Optional[Fraction]
    worst_gap: float
    sequences_examined: int
    tolerance: float
    used_tolerance: bool
    status: str          # covered | sum-exhausted | budget-exhausted
    wall_time: float

    def row(self) -> dict:
        return {
            "beta": self.beta_value, "k": self.k, "S": self.s_reached,
            "bound": float(self.bound) if self.bound is not None else "",
            "covered": self.covered, "worst_gap": self.worst_gap,
            "sequences_examined": self.sequences_examined,
            "wall_time": self.wall_time,
        }


def _emit_exact_sum(beta_value: float, k: int, s: int, vcap: float,
                    tails: _TailTables, d1_only: Optional[int] = None
                    ) -> Iterator[np.ndarray]:
    """Value arrays of all length-k words with digit sum exactly s and every
    partial value below ``vcap``; optionally restricted to a first digit."""
    t = tails.t
    n_prefix = k - t
    powers = [beta_value ** -(j + 1) for j in range(n_prefix)]

    def rec(pos: int, rem: int, pval: float) -> Iterator[np.ndarray]:
        if pos == n_prefix:
            chunk = pval + tails.get(rem)
            yield chunk[chunk < vcap]
            return
        lo, hi = 0, rem
        if pos == 0 and d1_only is not None:
            lo = hi = d1_only
            if d1_only > rem:
                return
        for d in range(lo, hi + 1):
            nv = pval + d * powers[pos]
            if nv >= vcap:
                break
            yield from rec(pos + 1, rem - d, nv)

    yield from rec(0, s, 0.0)


def _insert_sum(grid: CoverageGrid, beta_value: float, k: int, s: int,
                vcap: float, tails: _TailTables,
                d1_only: Optional[int] = None) -> Tuple[int, int]:
    """Returns (examined, kept) counts for digit sum s."""
    examined = kept = 0
    for chunk in _emit_exact_sum(beta_value, k, s, vcap, tails, d1_only):
        examined += int(chunk.size)
        kept += grid.insert(chunk)
    return examined, kept


def coverage_upper_bound(beta: Beta, k: int, s_max: Optional[int] = None,
                         tolerance: float = DEFAULT_TOLERANCE,
                         budget: Optional[int] = None,
                         checkpoint_path: Optional[str] = None,
                         resume: bool = False) -> CoverageReport:
    """Process digit sums s = 0, 1, 2, ... and return the first s whose
    value set covers [0, 1); the resulting upper bound is s/k.

    Monotone: once (beta, k, s) covers, any larger s covers as well.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    beta_value = float(beta.value(96).val)
    if s_max is None:
        s_max = k * (int(beta_value) + 1) + 2
    t0 = time.monotonic()
    start_s = 0
    examined = 0
    grid = CoverageGrid.create(beta_value, k, tolerance)
    if resume and checkpoint_path is not None:
        loaded = load_checkpoint(checkpoint_path)
        _check_checkpoint(loaded, beta_value, k, tolerance)
        grid.mins = loaded["mins"]
        grid.maxs = loaded["maxs"]
        start_s = int(loaded["s_done"]) + 1
        examined = int(loaded["examined"])
    vcap = 1.0 + grid.bin_width
    tails = _TailTables(beta_value, k, min(3, k), s_max)

    for s in range(start_s, s_max + 1):
        ex, _ = _insert_sum(grid, beta_value, k, s, vcap, tails)
        examined += ex
        covered, worst, used_tol = grid.gap_state()
        if checkpoint_path is not None:
            save_checkpoint(checkpoint_path, grid, s, examined)
        if covered:
            return CoverageReport(
                beta_value=beta_value, k=k, s_reached=s, covered=True,
                bound=Fraction(s, k), worst_gap=worst,
                sequences_examined=examined, tolerance=tolerance,
                used_tolerance=used_tol, status="covered",
                wall_time=time.monotonic() - t0)
        if budget is not None and examined > budget:
            return CoverageReport(
                beta_value=beta_value, k=k, s_reached=s, covered=False,
                bound=None, worst_gap=worst, sequences_examined=examined,
                tolerance=tolerance, used_tolerance=False,
                status="budget-exhausted", wall_time=time.monotonic() - t0)
    covered, worst, used_tol = grid.gap_state()
    return CoverageReport(
        beta_value=beta_value, k=k, s_reached=s_max, covered=covered,
        bound=Fraction(s_max, k) if covered else None, worst_gap=worst,
        sequences_examined=examined, tolerance=tolerance,
        used_tolerance=used_tol,
        status="covered" if covered else "sum-exhausted",
        wall_time=time.monotonic() - t0)


def witness_values(beta: Beta, k: int, s: int,
                   tolerance: float = DEFAULT_TOLERANCE) -> np.ndarray:
    """Sorted values of all words with digit sum <= s (for soundness spot
    checks against the covering claim)."""
    beta_value = float(beta.value(96).val)
    vcap = 1.0 + beta_value ** -k
    tails = _TailTables(beta_value, k, min(3, k), s)
    chunks = []
    for si in range(s + 1):
        chunks.extend(_emit_exact_sum(beta_value, k, si, vcap, tails))
    vals = np.concatenate([c for c in chunks if c.size]) if chunks else \
        np.zeros(1)
    vals = vals[vals < 1.0]
    vals.sort()
    return vals


# -- checkpointing ------------------------------------------------------------

def save_checkpoint(path: str, grid: CoverageGrid, s_done: int,
                    examined: int) -> None:
    np.savez(path if path.endswith(".npz") else path + ".npz",
             magic=np.array(CHECKPOINT_MAGIC),
             version=np.array(CHECKPOINT_VERSION),
             beta=np.array(grid.beta_value), k=np.array(grid.k),
             tolerance=np.array(grid.tolerance),
             s_done=np.array(s_done), examined=np.array(examined),
             mins=grid.mins, maxs=grid.maxs)


def load_checkpoint(path: str) -> dict:
    data = np.load(path if path.endswith(".npz") else path + ".npz")
    if str(data["magic"]) != CHECKPOINT_MAGIC:
        raise ValueError(f"{path} is not a coverage checkpoint")
    if int(data["version"]) != CHECKPOINT_VERSION:
        raise ValueError(f"unsupported checkpoint version {data['version']}")
    return {key: data[key] for key in data.files}


def _check_checkpoint(loaded: dict, beta_value: float, k: int,
                      tolerance: float) -> None:
    if float(loaded["beta"]) != beta_value or int(loaded["k"]) != k or \
            float(loaded["tolerance"]) != tolerance:
        raise ValueError("checkpoint does not match the requested run")


# -- sweeping a grid ----------------------------------------------------------

@dataclass
class SweepPoint:
    beta_value: float
    best_bound: Optional[Fraction]
    best_k: Optional[int]
    reports: List[CoverageReport]

    @property
    def covered(self) -> bool:
        return self.best_bound is not None


def sweep_point(beta: Beta, k_max: int, k_min: int = 2,
                tolerance: float = DEFAULT_TOLERANCE,
                budget: Optional[int] = None) -> SweepPoint:
    """Coverage bounds for k = k_min..k_max, keeping the minimum (increasing
    k usually improves the bound, but the minimum is what is kept)."""
    beta_value = float(beta.value(96).val)
    reports: List[CoverageReport] = []
    best: Optional[Fraction] = None
    best_k: Optional[int] = None
    for k in range(k_min, k_max + 1):
        if beta_value ** k > MAX_BINS:
            break
        rep = coverage_upper_bound(beta, k, tolerance=tolerance,
                                   budget=budget)
        reports.append(rep)
        if rep.covered and (best is None or rep.bound < best):
            best, best_k = rep.bound, k
    return SweepPoint(beta_value=beta_value, best_bound=best, best_k=best_k,
                      reports=reports)


def _sweep_worker(args) -> SweepPoint:
    beta, k_max, k_min, tolerance, budget = args
    return sweep_point(beta, k_max, k_min=k_min, tolerance=tolerance,
                       budget=budget)


def sweep(betas: Sequence[Beta], k_max: int, k_min: int = 2,
          tolerance: float = DEFAULT_TOLERANCE,
          budget: Optional[int] = None, workers: int = 1) -> List[SweepPoint]:
    """Independent coverage searches over a grid of bases; deterministic and
    order-preserving for any worker count."""
    tasks = [(b, k_max, k_min, tolerance, budget) for b in betas]
    if workers <= 1 or len(tasks) <= 1:
        return [_sweep_worker(t) for t in tasks]
    import multiprocessing as mp_mod
    with mp_mod.Pool(workers) as pool:
        return list(pool.imap(_sweep_worker, tasks, chunksize=1))

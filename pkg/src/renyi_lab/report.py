"""Trial report record shared by the inequality and uncertainty harnesses."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

PASS = "pass"
FAIL = "fail"
SKIPPED = "skipped"

BASE_TOL = 1e-6
WIDE_TOL = 1e-5   # for trials whose gap contains an optimiser output on the shrinking side


@dataclass
class InequalityReport:
    """One verified trial: `small <= big` oriented so gap >= 0 means pass."""

    theorem: str
    trial_seed: int
    dims: tuple[int, ...]
    alpha: float
    beta: float
    gamma: float
    delta: float | None
    direction: str
    lhs: float                  # small side, bits
    rhs: float                  # big side, bits
    gap: float                  # rhs - lhs
    verdict: str
    opt_iters: int = 0
    opt_residual: float = 0.0
    note: str = ""


def effective_tolerance(tolerance: float, wide: bool) -> float:
    return max(tolerance, WIDE_TOL) if wide else tolerance


def finish(theorem: str, trial_seed: int, dims, alpha, beta, gamma, delta, direction,
           small: float, big: float, tolerance: float, wide: bool = False,
           opt_iters: int = 0, opt_residual: float = 0.0, note: str = "") -> InequalityReport:
    """Assemble a report; infinities resolve to trivially-true or skipped."""
    tol = effective_tolerance(tolerance, wide)
    if wide and not note:
        note = "tolerance widened for one-sided optimiser bias"
    if math.isnan(small) or math.isnan(big):
        verdict, gap = FAIL, math.nan
    elif math.isinf(big) and big > 0 or math.isinf(small) and small < 0:
        verdict, gap = PASS, math.inf
        note = (note + "; " if note else "") + "divergent side, trivially true"
    elif math.isinf(small) or math.isinf(big):
        verdict, gap = FAIL, -math.inf
    else:
        gap = big - small
        verdict = PASS if gap >= -tol else FAIL
    return InequalityReport(theorem, trial_seed, tuple(dims), alpha, beta, gamma, delta,
                            direction, small, big, gap, verdict, opt_iters, opt_residual, note)


def skipped(theorem: str, trial_seed: int, dims, alpha, beta, gamma, delta, direction,
            note: str) -> InequalityReport:
    return InequalityReport(theorem, trial_seed, tuple(dims), alpha, beta, gamma, delta,
                            direction, math.nan, math.nan, math.nan, SKIPPED, note=note)


@dataclass
class SuiteSummary:
    theorem: str
    trials: int
    passed: int
    failed: int
    skipped: int
    min_gap: float
    master_seed: int
    tolerance: float

    @property
    def all_ok(self) -> bool:
        return self.failed == 0

    def line(self) -> str:
        return (f"{self.theorem}: {self.passed} pass / {self.failed} fail / "
                f"{self.skipped} skipped out of {self.trials}; min gap {self.min_gap:.3e}")


def summarize(theorem: str, reports, master_seed: int, tolerance: float) -> SuiteSummary:
    gaps = [r.gap for r in reports if r.verdict != SKIPPED and math.isfinite(r.gap)]
    return SuiteSummary(
        theorem=theorem,
        trials=len(reports),
        passed=sum(r.verdict == PASS for r in reports),
        failed=sum(r.verdict == FAIL for r in reports),
        skipped=sum(r.verdict == SKIPPED for r in reports),
        min_gap=min(gaps) if gaps else math.inf,
        master_seed=master_seed,
        tolerance=tolerance,
    )

"""Running a verification plan and the symbolic oracle."""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .contract import DEFAULT_MAX_DIM
from .diagram import EquationFamily, is_simple
from .errors import FamVerifyError, HasBangbox, NotSimple, ShapeMismatch
from .interp import interpret_exact, interpret_family, interpret_simple
from .planner import Assignment, VerificationPlan

DEFAULT_TOLERANCE = 1e-9

VERIFIED = "verified"
FALSIFIED = "falsified"
PRECONDITION_FAILED = "precondition-failed"


@dataclass(frozen=True)
class CheckRecord:
    deviation: float
    passed: bool
    exact: bool = False
    assignment: Assignment | None = None
    error: str | None = None


@dataclass
class Report:
    verdict: str
    records: list = field(default_factory=list)
    counterexample: Assignment | None = None
    seconds: float = 0.0
    plan: VerificationPlan | None = None
    error: str | None = None

    @property
    def checked(self) -> int:
        return len(self.records)


def _exact_deviation(a, b) -> float:
    diff = a - b
    return max((abs(x) for x in diff.ravel()), default=0.0)


def _scale_to(a: np.ndarray, b: np.ndarray):
    """Multiply ``a`` by the scalar that matches ``b`` at ``a``'s largest entry."""
    flat_a = a.ravel()
    if not flat_a.size:
        return a
    k = int(np.argmax(np.abs(flat_a.astype(complex))))
    if abs(complex(flat_a[k])) == 0:
        return a
    return a * (b.ravel()[k] / flat_a[k])


def check_simple(lhs, rhs, tolerance: float = DEFAULT_TOLERANCE,
                 max_dim: int = DEFAULT_MAX_DIM, up_to_scalar: bool = False) -> CheckRecord:
    """Compare the matrices of two simple diagrams entrywise."""
    for d in (lhs, rhs):
        if not is_simple(d):
            raise NotSimple("both sides must be simple diagrams")
    if (len(lhs.inputs), len(lhs.outputs)) != (len(rhs.inputs), len(rhs.outputs)):
        raise ShapeMismatch(
            f"{len(lhs.inputs)}->{len(lhs.outputs)} vs {len(rhs.inputs)}->{len(rhs.outputs)}")
    ea = interpret_exact(lhs, max_dim)
    eb = interpret_exact(rhs, max_dim) if ea is not None else None
    if ea is not None and eb is not None:
        if up_to_scalar:
            ea = _scale_to(ea, eb)
        dev = _exact_deviation(ea, eb)
        return CheckRecord(float(dev), dev == 0, exact=True)
    a = interpret_simple(lhs, max_dim)
    b = interpret_simple(rhs, max_dim)
    if up_to_scalar:
        a = _scale_to(a, b)
    dev = float(np.max(np.abs(a - b))) if a.size else 0.0
    return CheckRecord(dev, dev <= tolerance, exact=False)


def _run_entry(entry, tolerance, max_dim, up_to_scalar) -> CheckRecord:
    try:
        rec = check_simple(entry.lhs, entry.rhs, tolerance, max_dim, up_to_scalar)
    except FamVerifyError as exc:
        return CheckRecord(float("nan"), False, assignment=entry.assignment,
                           error=f"{type(exc).__name__}: {exc}")
    return CheckRecord(rec.deviation, rec.passed, rec.exact, entry.assignment)


def run_plan(plan: VerificationPlan, tolerance: float = DEFAULT_TOLERANCE, jobs: int = 1,
             max_dim: int = DEFAULT_MAX_DIM, up_to_scalar: bool = False,
             stop_on_failure: bool = False) -> Report:
    """Check every plan member; records stay in plan order whatever ``jobs`` is."""
    start = time.perf_counter()
    entries = list(plan.entries)
    if jobs > 1 and not stop_on_failure:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            records = list(pool.map(lambda e: _run_entry(e, tolerance, max_dim, up_to_scalar),
                                    entries))
    else:
        records = []
        for e in entries:
            rec = _run_entry(e, tolerance, max_dim, up_to_scalar)
            records.append(rec)
            if stop_on_failure and not rec.passed:
                break
    if any(r.error for r in records):
        verdict = PRECONDITION_FAILED
        err = next(r.error for r in records if r.error)
    else:
        verdict = VERIFIED if all(r.passed for r in records) else FALSIFIED
        err = None
    counter = next((r.assignment for r in records if not r.passed), None)
    return Report(verdict, records, counter, time.perf_counter() - start, plan, err)


def symbolic_check(eq: EquationFamily, max_dim: int = DEFAULT_MAX_DIM,
                   tolerance: float = DEFAULT_TOLERANCE) -> bool:
    """Decide a !-box-free family by comparing canonical polynomial matrices."""
    if eq.lhs.bangboxes or eq.rhs.bangboxes:
        raise HasBangbox("symbolic_check needs a !-box-free family")
    variables = eq.lhs.variables() | eq.rhs.variables()
    q = {v: eq.quotient_for(v) for v in variables if eq.quotient_for(v) is not None}
    ml = interpret_family(eq.lhs, q, max_dim)
    mr = interpret_family(eq.rhs, q, max_dim)
    if ml.shape != mr.shape:
        return False
    if ml.is_exact() and mr.is_exact():
        return ml == mr
    return ml.max_coeff_distance(mr) <= tolerance

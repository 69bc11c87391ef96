"""Independent strip membership by linear feasibility.

x lies in the strip E_n + (Omega_k + s) iff some t in R^n satisfies
|x_j - s_j - sum_i t_i w_ij| <= 0.5 for every j. For n = 1 the feasible t
form an intersection of intervals; for n = 2, 3 the largest uniform slack
max_t min_j (0.5 - |y_j - <W_j, t>|) is found with a small linear program.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.optimize import linprog

from qpack_cli.embedding import Embedding, project_physical
from qpack_cli.errors import DimensionMismatch, InvariantViolation
from qpack_cli.models import AgreementReport, SampleCase
from qpack_cli.strip import StripConstraintSet, constraint_values

HALF_EDGE = 0.5
MAX_ORACLE_DIMENSION = 3
ORACLE_TOLERANCE = 1e-9
REPORT_LIMIT = 10
REPORT_CHUNK = 1024
ZERO_COMPONENT = 1e-15

HIGHS_OPTIONS = {
    "primal_feasibility_tolerance": 1e-10,
    "dual_feasibility_tolerance": 1e-10,
}


@dataclass(frozen=True)
class FeasibilityProblem:
    """Find t with |y_j - <W_j, t>| <= slack for all j, where y = x - s."""

    emb: Embedding
    x: NDArray[np.float64]
    shift: NDArray[np.float64] = field(default_factory=lambda: np.zeros(0))
    slack: float = HALF_EDGE

    @property
    def targets(self) -> NDArray[np.float64]:
        if self.shift.shape[0] == 0:
            return self.x
        return self.x - self.shift


def _problem(emb: Embedding, x: ArrayLike, shift: ArrayLike | None) -> FeasibilityProblem:
    if emb.n > MAX_ORACLE_DIMENSION:
        raise DimensionMismatch(f"the feasibility oracle handles n <= 3, got n={emb.n}")
    vector = np.asarray(x, dtype=np.float64).reshape(-1)
    if vector.shape[0] != emb.k:
        raise DimensionMismatch(f"x has {vector.shape[0]} entries, expected k={emb.k}")
    if not np.all(np.isfinite(vector)):
        raise ValueError("x must be finite")
    offset = np.zeros(0) if shift is None else np.asarray(shift, dtype=np.float64).reshape(-1)
    if offset.shape[0] not in (0, emb.k):
        raise DimensionMismatch(f"shift has {offset.shape[0]} entries, expected k={emb.k}")
    return FeasibilityProblem(emb=emb, x=vector, shift=offset)


def _interval_feasible(problem: FeasibilityProblem, tol: float) -> bool:
    half = problem.slack + tol
    low, high = -math.inf, math.inf
    for y, w in zip(problem.targets, problem.emb.w[0]):
        if abs(w) <= ZERO_COMPONENT:
            if abs(y) > half:
                return False
            continue
        a, b = (y - half) / w, (y + half) / w
        low, high = max(low, min(a, b)), min(high, max(a, b))
        if low > high:
            return False
    return True


def _quick_decision(problem: FeasibilityProblem, tol: float) -> bool | None:
    """Settle easy cases from the least-squares point t0 = P y / kappa^2.

    Feasible if t0 already satisfies every bound. Infeasible if the residual
    orthogonal to E_n is too long for any point of the slack cube.
    """
    emb = problem.emb
    y = problem.targets
    t0 = project_physical(emb, y) / emb.kappa_squared
    residual = y - t0 @ emb.w
    half = problem.slack + tol
    if np.max(np.abs(residual)) <= half:
        return True
    if np.linalg.norm(residual) > half * math.sqrt(emb.k):
        return False
    return None


def slack_margin(problem: FeasibilityProblem) -> float:
    """max over t of min_j (slack - |y_j - <W_j, t>|); feasible iff >= 0."""
    w_t = problem.emb.w.T
    k, n = w_t.shape
    y = problem.targets
    # variables (t_1..t_n, r); maximize r
    cost = np.zeros(n + 1)
    cost[-1] = -1.0
    ones = np.ones((k, 1))
    a_ub = np.vstack([np.hstack([w_t, ones]), np.hstack([-w_t, ones])])
    b_ub = np.concatenate([problem.slack + y, problem.slack - y])
    bounds = [(None, None)] * n + [(None, problem.slack)]
    result = linprog(
        cost, A_ub=a_ub, b_ub=b_ub, bounds=bounds, method="highs", options=HIGHS_OPTIONS
    )
    if result.status != 0:
        raise InvariantViolation(f"feasibility program failed: {result.message}")
    return float(-result.fun)


def lp_strip_membership(
    emb: Embedding,
    x: ArrayLike,
    tol: float = ORACLE_TOLERANCE,
    shift: ArrayLike | None = None,
) -> bool:
    """Whether x - s is within (0.5 + tol) of E_n in every coordinate.

    Raises:
        DimensionMismatch: n > 3, or x / shift of the wrong length.
        ValueError: non-finite x or negative tol.
    """
    if tol < 0:
        raise ValueError("oracle tolerance must be non-negative")
    problem = _problem(emb, x, shift)
    if emb.n == 1:
        return _interval_feasible(problem, tol)
    quick = _quick_decision(problem, tol)
    if quick is not None:
        return quick
    return slack_margin(problem) >= -tol


def agreement_report(
    cs: StripConstraintSet,
    emb: Embedding,
    sample_count: int,
    coordinate_range: int,
    seed: int,
) -> AgreementReport:
    """Compare the determinant test with the oracle on random lattice vectors.

    Vectors are drawn uniformly from [-range, range]^k with a seeded
    generator. A sample is a boundary case when some constraint value lies
    within 2 epsilon_b of its bound; disagreements there are counted apart.
    """
    if sample_count < 0:
        raise ValueError("sample_count must be non-negative")
    if coordinate_range < 0:
        raise ValueError("coordinate_range must be non-negative")
    if cs.k != emb.k or cs.n != emb.n:
        raise InvariantViolation("constraint set and embedding disagree on (n, k)")
    if emb.n > MAX_ORACLE_DIMENSION:
        raise DimensionMismatch(f"the feasibility oracle handles n <= 3, got n={emb.n}")

    rng = np.random.default_rng(seed)
    samples = rng.integers(-coordinate_range, coordinate_range + 1, size=(sample_count, emb.k))
    report = AgreementReport(
        n=emb.n,
        k=emb.k,
        sample_count=sample_count,
        coordinate_range=coordinate_range,
        seed=seed,
    )

    for start in range(0, sample_count, REPORT_CHUNK):
        chunk = samples[start : start + REPORT_CHUNK]
        values = np.abs(constraint_values(cs, chunk))
        if cs.count:
            margins = np.min(cs.limits - values, axis=1)
        else:
            margins = np.full(len(chunk), math.inf)
        band = np.any(np.abs(values - cs.bounds) <= 2.0 * cs.tolerances, axis=1)
        for vector, margin, in_band in zip(chunk, margins, band):
            determinant = bool(margin >= 0.0)
            oracle = lp_strip_membership(emb, vector, cs.boundary_tolerance, cs.shift)
            case = SampleCase(
                vector=[int(v) for v in vector],
                in_strip=determinant,
                oracle=oracle,
                margin=float(margin),
            )
            report.inside += int(determinant)
            if in_band:
                report.boundary_cases += 1
                if len(report.first_boundary_cases) < REPORT_LIMIT:
                    report.first_boundary_cases.append(case)
            if determinant == oracle:
                report.agreements += 1
            elif in_band:
                report.boundary_disagreements += 1
            else:
                report.disagreements += 1
                if len(report.first_disagreements) < REPORT_LIMIT:
                    report.first_disagreements.append(case)
    return report

"""Determinant constraints describing the strip S_{n,k} and membership tests.

For every strictly increasing (n+1)-tuple of superspace indices the formal
determinant

    | x_i1    x_i2    ...  x_i(n+1)   |
    | v_1,i1  v_1,i2  ...  v_1,i(n+1) |
    | ...                             |
    | v_n,i1  v_n,i2  ...  v_n,i(n+1) |

is linear in its first row, f(x) = sum_j c_j x_ij, where c_j are the signed
n x n minors of the v-rows. A point x belongs to the strip E_n + (Omega_k + s)
iff |f(x) - f(s)| <= d for every tuple, with d = 0.5 * sum_j |c_j| the
maximum of |f| over the hypercube vertices {-0.5, 0.5}^(n+1).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from numpy.typing import ArrayLike, NDArray

from qpack_cli.config import settings
from qpack_cli.embedding import Embedding

IndexTuple = tuple[int, ...]

DROP_FACTOR = 1e-12
MAX_SHIFT = 0.5
# Constraint block sizes for early-exit evaluation; later blocks are larger
FIRST_BLOCK = 256
MAX_BLOCK = 8192


def index_tuples(n: int, k: int) -> list[IndexTuple]:
    """All strictly increasing (n+1)-tuples over 1..k, lexicographic order."""
    if n < 1:
        raise ValueError(f"physical dimension must be at least 1, got {n}")
    if n >= k:
        raise ValueError(f"physical dimension n={n} must be smaller than k={k}")
    return list(itertools.combinations(range(1, k + 1), n + 1))


@dataclass(frozen=True)
class StripConstraint:
    """One determinant inequality |sum_j c_j x_ij - offset| <= bound."""

    indices: IndexTuple
    cofactors: tuple[float, ...]
    bound: float
    offset: float = 0.0


@dataclass(frozen=True)
class StripConstraintSet:
    """Precomputed cofactors and bounds for every non-degenerate tuple.

    Arrays are stored in lexicographic tuple order; ``order`` is the
    evaluation permutation used for early exit (most discriminating first).
    ``tuples`` are zero-based column indices.
    """

    k: int
    n: int
    tuples: NDArray[np.int64]
    cofactors: NDArray[np.float64]
    bounds: NDArray[np.float64]
    tolerances: NDArray[np.float64]
    offsets: NDArray[np.float64]
    shift: NDArray[np.float64]
    order: NDArray[np.int64]
    boundary_tolerance: float
    dropped: int = 0

    @property
    def count(self) -> int:
        return int(self.bounds.shape[0])

    @property
    def limits(self) -> NDArray[np.float64]:
        """Accepted magnitude per constraint, d + epsilon_b."""
        return self.bounds + self.tolerances

    @property
    def is_centered(self) -> bool:
        return not bool(np.any(self.shift))

    def constraint(self, q: int) -> StripConstraint:
        """Constraint ``q`` (lexicographic position) with one-based indices."""
        return StripConstraint(
            indices=tuple(int(i) + 1 for i in self.tuples[q]),
            cofactors=tuple(float(c) for c in self.cofactors[q]),
            bound=float(self.bounds[q]),
            offset=float(self.offsets[q]),
        )

    @property
    def constraints(self) -> list[StripConstraint]:
        return [self.constraint(q) for q in range(self.count)]

    @cached_property
    def matrix(self) -> NDArray[np.float64]:
        """Dense Q x k matrix whose rows are the linear forms f_q."""
        dense = np.zeros((self.count, self.k))
        rows = np.arange(self.count)[:, None]
        dense[rows, self.tuples] = self.cofactors
        dense.setflags(write=False)
        return dense

    @cached_property
    def _ordered(self) -> tuple[NDArray[np.float64], NDArray[np.float64], NDArray[np.float64]]:
        return (
            np.ascontiguousarray(self.matrix[self.order]),
            self.offsets[self.order],
            self.limits[self.order],
        )


def _signed_minors(columns: NDArray[np.float64]) -> NDArray[np.float64]:
    """First-row cofactors of the formal determinant for a stack of n x (n+1) blocks."""
    count, n, width = columns.shape
    cofactors = np.empty((count, width))
    for j in range(width):
        minor = np.delete(columns, j, axis=2)
        sign = -1.0 if j % 2 else 1.0
        if n == 1:
            cofactors[:, j] = sign * minor[:, 0, 0]
        else:
            cofactors[:, j] = sign * np.linalg.det(minor)
    return cofactors


def _shift_vector(shift: float | ArrayLike | None, k: int) -> NDArray[np.float64]:
    if shift is None:
        vector = np.zeros(k)
    elif np.isscalar(shift):
        vector = np.full(k, float(shift))  # type: ignore[arg-type]
    else:
        vector = np.asarray(shift, dtype=np.float64).reshape(-1)
    if vector.shape[0] != k:
        raise ValueError(f"shift has {vector.shape[0]} entries, expected k={k}")
    if np.any(np.abs(vector) > MAX_SHIFT):
        raise ValueError("every shift entry must lie in [-0.5, 0.5] so the origin is selected")
    return vector


def build_constraints(
    emb: Embedding,
    shift: float | ArrayLike | None = None,
    boundary_tolerance: float | None = None,
) -> StripConstraintSet:
    """Precompute cofactors, bounds and evaluation order for the strip of ``emb``.

    Constraints with d < 1e-12 * kappa^n hold identically and are dropped.
    """
    n, k = emb.n, emb.k
    tolerance = settings.boundary_tolerance if boundary_tolerance is None else boundary_tolerance
    if tolerance <= 0:
        raise ValueError("boundary tolerance must be positive")
    shift_vector = _shift_vector(shift, k)

    all_tuples = np.array(index_tuples(n, k), dtype=np.int64) - 1
    blocks = np.transpose(emb.w[:, all_tuples], (1, 0, 2))
    cofactors = _signed_minors(blocks)
    bounds = 0.5 * np.sum(np.abs(cofactors), axis=1)

    keep = bounds >= DROP_FACTOR * emb.kappa**n
    tuples = all_tuples[keep]
    cofactors = cofactors[keep]
    bounds = bounds[keep]

    tolerances = tolerance * np.maximum(1.0, bounds)
    offsets = np.sum(cofactors * shift_vector[tuples], axis=1)
    score = np.max(np.abs(cofactors), axis=1) / bounds
    order = np.argsort(-score, kind="stable").astype(np.int64)

    for array in (tuples, cofactors, bounds, tolerances, offsets, shift_vector, order):
        array.setflags(write=False)

    return StripConstraintSet(
        k=k,
        n=n,
        tuples=tuples,
        cofactors=cofactors,
        bounds=bounds,
        tolerances=tolerances,
        offsets=offsets,
        shift=shift_vector,
        order=order,
        boundary_tolerance=tolerance,
        dropped=int(np.count_nonzero(~keep)),
    )


def _blocks(count: int) -> list[slice]:
    blocks = []
    start, size = 0, FIRST_BLOCK
    while start < count:
        blocks.append(slice(start, min(count, start + size)))
        start += size
        size = min(MAX_BLOCK, size * 4)
    return blocks


def in_strip(cs: StripConstraintSet, x: ArrayLike) -> bool:
    """Whether x satisfies every constraint, evaluated in early-exit order."""
    point = np.asarray(x, dtype=np.float64).reshape(-1)
    for block in _blocks(cs.count):
        rows = cs.order[block]
        values = np.sum(cs.cofactors[rows] * point[cs.tuples[rows]], axis=1) - cs.offsets[rows]
        if np.any(np.abs(values) > cs.limits[rows]):
            return False
    return True


def constraint_values(cs: StripConstraintSet, x: ArrayLike) -> NDArray[np.float64]:
    """f_q(x) - f_q(s) for every constraint (columns) and every row of x."""
    vectors = np.asarray(x, dtype=np.float64)
    return vectors @ cs.matrix.T - cs.offsets


def members(cs: StripConstraintSet, x: ArrayLike) -> NDArray[np.bool_]:
    """Batch membership for a stack of k-vectors, one result per row."""
    vectors = np.atleast_2d(np.asarray(x, dtype=np.float64))
    alive = np.ones(vectors.shape[0], dtype=bool)
    matrix, offsets, limits = cs._ordered
    for block in _blocks(cs.count):
        candidates = np.flatnonzero(alive)
        if candidates.size == 0:
            break
        values = vectors[candidates] @ matrix[block].T - offsets[block]
        inside = np.all(np.abs(values) <= limits[block], axis=1)
        alive[candidates[~inside]] = False
    return alive


def boundary_margin(cs: StripConstraintSet, x: ArrayLike) -> float:
    """Smallest slack d + epsilon_b - |f(x) - f(s)|; negative iff x is outside."""
    values = constraint_values(cs, x)
    if cs.count == 0:
        return math.inf
    return float(np.min(cs.limits - np.abs(values)))


def in_boundary_band(cs: StripConstraintSet, x: ArrayLike) -> bool:
    """Whether some constraint value lies within 2 epsilon_b of its bound."""
    values = np.abs(constraint_values(cs, x))
    return bool(np.any(np.abs(values - cs.bounds) <= 2.0 * cs.tolerances))

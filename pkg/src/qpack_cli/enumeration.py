"""Enumeration of strip lattice points S ∩ Z^k and their physical projections.

The default search is breadth-first over unit steps x ± e_j starting at the
origin, expanded one level at a time. Each level's candidates are
deduplicated, sorted, tested in parallel chunks and merged in order, so the
result does not depend on the number of worker threads. ``box_scan`` is the
exhaustive alternative for small k.
"""

from __future__ import annotations

from collections import Counter
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np
from joblib import Parallel, delayed
from numpy.typing import ArrayLike, NDArray

from qpack_cli.config import settings
from qpack_cli.embedding import Embedding, project_physical
from qpack_cli.errors import InvariantViolation, LimitExceeded
from qpack_cli.models import EnumerationLimits
from qpack_cli.strip import StripConstraintSet, in_strip, members

# Rows per membership task; bounds the temporary matmul buffers per thread
CHUNK_ROWS = 512
MAX_BOX_PREFIXES = 4_000_000

LevelCallback = Callable[[int, int, int], None]


@dataclass(frozen=True)
class PackingPoint:
    """One selected lattice point with its projection and neighbour flags."""

    lattice: tuple[int, ...]
    physical: tuple[float, ...]
    occupancy: tuple[bool, ...]

    @property
    def occupancy_count(self) -> int:
        return sum(self.occupancy)


@dataclass(frozen=True)
class Packing:
    """Selected lattice points, sorted lexicographically by lattice vector.

    ``occupancy`` has 2k columns ordered (1,+), (1,-), (2,+), (2,-), ...
    """

    n: int
    k: int
    lattice: NDArray[np.int64]
    physical: NDArray[np.float64]
    occupancy: NDArray[np.bool_]
    emb_fingerprint: str

    @property
    def size(self) -> int:
        return int(self.lattice.shape[0])

    @property
    def occupancy_counts(self) -> NDArray[np.int64]:
        return np.sum(self.occupancy, axis=1).astype(np.int64)

    def point(self, index: int) -> PackingPoint:
        return PackingPoint(
            lattice=tuple(int(v) for v in self.lattice[index]),
            physical=tuple(float(v) for v in self.physical[index]),
            occupancy=tuple(bool(v) for v in self.occupancy[index]),
        )

    @property
    def points(self) -> list[PackingPoint]:
        return [self.point(i) for i in range(self.size)]

    def lattice_set(self) -> set[tuple[int, ...]]:
        return {tuple(int(v) for v in row) for row in self.lattice}


def unit_steps(k: int) -> NDArray[np.int64]:
    """The 2k steps +e_1, -e_1, +e_2, -e_2, ... as rows."""
    steps = np.zeros((2 * k, k), dtype=np.int64)
    for j in range(k):
        steps[2 * j, j] = 1
        steps[2 * j + 1, j] = -1
    return steps


def sort_lattice(lattice: NDArray[np.int64]) -> NDArray[np.int64]:
    if lattice.shape[0] == 0:
        return lattice
    return lattice[np.lexsort(lattice.T[::-1])]


def evaluate_members(
    cs: StripConstraintSet,
    vectors: NDArray[np.int64],
    threads: int = 1,
) -> NDArray[np.bool_]:
    """Membership for many lattice vectors, split across worker threads."""
    if vectors.shape[0] == 0:
        return np.zeros(0, dtype=bool)
    chunks = [vectors[i : i + CHUNK_ROWS] for i in range(0, vectors.shape[0], CHUNK_ROWS)]
    if threads <= 1 or len(chunks) == 1:
        return np.concatenate([members(cs, chunk) for chunk in chunks])
    results = Parallel(n_jobs=threads, backend="threading")(
        delayed(members)(cs, chunk) for chunk in chunks
    )
    return np.concatenate(results)


def occupancy_profile(cs: StripConstraintSet, x: ArrayLike) -> tuple[bool, ...]:
    """Flags (j,+) = x + e_j in S and (j,-) = x - e_j in S for j = 1..k."""
    point = np.asarray(x, dtype=np.int64).reshape(-1)
    return tuple(in_strip(cs, point + step) for step in unit_steps(cs.k))


def _occupancy(
    cs: StripConstraintSet,
    lattice: NDArray[np.int64],
    known: dict[bytes, bool],
    threads: int,
) -> NDArray[np.bool_]:
    steps = unit_steps(cs.k)
    neighbours = (lattice[:, None, :] + steps[None, :, :]).reshape(-1, cs.k)
    flags = np.zeros(neighbours.shape[0], dtype=bool)
    missing: list[int] = []
    for row, vector in enumerate(neighbours):
        status = known.get(vector.tobytes())
        if status is None:
            missing.append(row)
        else:
            flags[row] = status
    if missing:
        flags[missing] = evaluate_members(cs, neighbours[missing], threads)
    return flags.reshape(lattice.shape[0], 2 * cs.k)


def _assemble(
    cs: StripConstraintSet,
    emb: Embedding,
    lattice: NDArray[np.int64],
    known: dict[bytes, bool],
    threads: int,
) -> Packing:
    lattice = sort_lattice(lattice)
    return Packing(
        n=emb.n,
        k=emb.k,
        lattice=lattice,
        physical=project_physical(emb, lattice),
        occupancy=_occupancy(cs, lattice, known, threads),
        emb_fingerprint=emb.fingerprint,
    )


def enumerate_packing(
    cs: StripConstraintSet,
    emb: Embedding,
    limits: EnumerationLimits,
    threads: int | None = None,
    on_level: LevelCallback | None = None,
) -> Packing:
    """Breadth-first search of S ∩ Z^k from the origin.

    Candidates with ||P x|| above ``limits.max_physical_radius`` are skipped.
    Candidates outside the coordinate box are never kept; if any of them lies
    in the strip, the search finishes inside the box and then raises
    LimitExceeded. Reaching ``limits.max_points`` stops the search at once,
    keeping the lexicographically smallest points of the last level.

    Raises:
        LimitExceeded: a limit cut the search short; ``partial`` holds the
            packing collected so far.
        InvariantViolation: the origin is not in the strip.
    """
    if cs.k != emb.k or cs.n != emb.n:
        raise InvariantViolation("constraint set and embedding disagree on (n, k)")
    workers = settings.threads if threads is None else max(1, threads)
    k = emb.k
    origin = np.zeros(k, dtype=np.int64)
    if not in_strip(cs, origin):
        raise InvariantViolation("the origin is not in the strip")

    steps = unit_steps(k)
    known: dict[bytes, bool] = {origin.tobytes(): True}
    accepted = [origin[None, :]]
    total = 1
    level = origin[None, :]
    depth = 0
    coordinate_hit = False
    points_hit = False

    while level.shape[0] > 0:
        depth += 1
        candidates = np.unique((level[:, None, :] + steps[None, :, :]).reshape(-1, k), axis=0)
        fresh = np.array([vector.tobytes() not in known for vector in candidates], dtype=bool)
        candidates = candidates[fresh]
        if candidates.shape[0] == 0:
            break

        if limits.max_physical_radius is not None:
            radius = np.linalg.norm(project_physical(emb, candidates), axis=1)
            candidates = candidates[radius <= limits.max_physical_radius]

        inside = evaluate_members(cs, candidates, workers)
        for vector, status in zip(candidates, inside):
            known[vector.tobytes()] = bool(status)

        outside_box = np.max(np.abs(candidates), axis=1) > limits.max_coordinate
        if np.any(inside & outside_box):
            coordinate_hit = True
        level = candidates[inside & ~outside_box]

        if limits.max_points is not None and total + level.shape[0] > limits.max_points:
            level = level[: limits.max_points - total]
            points_hit = True

        accepted.append(level)
        total += level.shape[0]
        if on_level is not None:
            on_level(depth, int(level.shape[0]), total)
        if points_hit:
            break

    packing = _assemble(cs, emb, np.vstack(accepted), known, workers)
    if points_hit:
        raise LimitExceeded(
            f"stopped at max_points={limits.max_points} with the frontier still open",
            partial=packing,
        )
    if coordinate_hit:
        raise LimitExceeded(
            f"strip points exist beyond max_coordinate={limits.max_coordinate}",
            partial=packing,
        )
    return packing


def box_scan(
    cs: StripConstraintSet,
    emb: Embedding,
    max_coordinate: int,
    threads: int | None = None,
) -> Packing:
    """Every strip point with |x_j| <= max_coordinate, found by pruned scanning.

    Coordinates are fixed one at a time; a prefix is discarded as soon as a
    constraint whose tuple lies inside the prefix fails.
    """
    if max_coordinate < 0:
        raise ValueError("max_coordinate must be non-negative")
    workers = settings.threads if threads is None else max(1, threads)
    k = emb.k
    values = np.arange(-max_coordinate, max_coordinate + 1, dtype=np.int64)
    last_index = cs.tuples[:, -1]
    prefixes = np.zeros((1, 0), dtype=np.int64)

    for depth in range(k):
        count = prefixes.shape[0] * values.shape[0]
        if count > MAX_BOX_PREFIXES:
            raise ValueError(
                f"box scan would examine {count} prefixes at depth {depth + 1}; "
                "use a smaller max_coordinate"
            )
        extended = np.repeat(prefixes, values.shape[0], axis=0)
        appended = np.tile(values, prefixes.shape[0])[:, None]
        prefixes = np.hstack([extended, appended])
        closing = np.flatnonzero(last_index == depth)
        if closing.size:
            forms = cs.matrix[closing, : depth + 1]
            result = prefixes @ forms.T - cs.offsets[closing]
            keep = np.all(np.abs(result) <= cs.limits[closing], axis=1)
            prefixes = prefixes[keep]

    known = {vector.tobytes(): True for vector in prefixes}
    return _assemble(cs, emb, prefixes, known, workers)


def occupancy_histogram(packing: Packing) -> dict[int, int]:
    """Number of packing points for each occupancy count 0..2k."""
    counts = Counter(int(c) for c in packing.occupancy_counts)
    return dict(sorted(counts.items()))

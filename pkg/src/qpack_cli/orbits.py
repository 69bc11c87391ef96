"""Finite group generators, orbits and origin-symmetric multi-shell clusters.

Three families are supported:

- dihedral(m): rotation ``a`` by pi/m and reflection ``b``, acting on R^2.
- icosahedral: the rotations ``a`` (order 5) and ``b`` (order 2) generating
  an irreducible representation of the icosahedral group Y in R^3.
- inversion: the group {+1, -1} acting on R^1, used for one-dimensional
  physical spaces such as the Fibonacci chain.

All values returned here are immutable (arrays are marked read-only).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal

import numpy as np
from numpy.typing import ArrayLike, NDArray

from qpack_cli.errors import ClusterError, GroupRelationError, OrbitOverflowError

GroupKind = Literal["dihedral", "icosahedral", "inversion"]
HalfRule = Literal["sign", "alternate"]

TAU = (1.0 + math.sqrt(5.0)) / 2.0

DEFAULT_ORBIT_TOLERANCE = 1e-9
ORTHOGONALITY_TOLERANCE = 1e-12
RELATION_TOLERANCE = 1e-10
NORM_TOLERANCE = 1e-10
CLUSTER_TOLERANCE = 1e-9


def _frozen(array: ArrayLike) -> NDArray[np.float64]:
    """Return a read-only float64 copy of ``array``."""
    out = np.array(array, dtype=np.float64)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class GeneratorSet:
    """A finite group given by orthogonal generator matrices and relations.

    ``relation_orders`` lists ``(word, order)`` pairs; a word is a string over
    the letters ``a``, ``b`` naming ``generators[0]`` and ``generators[1]``.
    """

    n: int
    generators: tuple[NDArray[np.float64], ...]
    relation_orders: tuple[tuple[str, int], ...]
    group_kind: GroupKind
    m: int | None = None

    def word(self, letters: str) -> NDArray[np.float64]:
        """Matrix of a word, letters multiplied left to right."""
        result = np.eye(self.n)
        for letter in letters:
            result = result @ self.generators[ord(letter) - ord("a")]
        return result

    @property
    def order(self) -> int:
        """Order of the abstract group."""
        return group_order(self)

    def describe(self) -> str:
        if self.group_kind == "dihedral":
            return f"dihedral D{2 * (self.m or 0)}"
        return self.group_kind


def verify_relations(gens: GeneratorSet) -> None:
    """Check orthogonality of every generator and every declared relation.

    Raises:
        GroupRelationError: if a generator is not orthogonal within 1e-12 per
            entry or a relation word does not reach the identity within 1e-10.
    """
    identity = np.eye(gens.n)
    for index, matrix in enumerate(gens.generators):
        if np.max(np.abs(matrix.T @ matrix - identity)) > ORTHOGONALITY_TOLERANCE:
            raise GroupRelationError(f"generator {chr(ord('a') + index)} is not orthogonal")
    for word, order in gens.relation_orders:
        power = np.linalg.matrix_power(gens.word(word), order)
        if np.max(np.abs(power - identity)) > RELATION_TOLERANCE:
            raise GroupRelationError(f"relation ({word})^{order} = e does not hold")


def dihedral_generators(m: int) -> GeneratorSet:
    """Generators of D_2m: a rotates by pi/m, b(alpha, beta) = (alpha, -beta)."""
    if m < 2:
        raise ValueError(f"dihedral group needs m >= 2, got {m}")
    angle = math.pi / m
    cos_a, sin_a = math.cos(angle), math.sin(angle)
    a = _frozen([[cos_a, -sin_a], [sin_a, cos_a]])
    b = _frozen([[1.0, 0.0], [0.0, -1.0]])
    gens = GeneratorSet(
        n=2,
        generators=(a, b),
        relation_orders=(("a", 2 * m), ("b", 2), ("ab", 2)),
        group_kind="dihedral",
        m=m,
    )
    verify_relations(gens)
    return gens


def icosahedral_generators() -> GeneratorSet:
    """Generators a (order 5) and b (order 2) of the icosahedral group Y in R^3."""
    half = 0.5
    a = _frozen(
        [
            [(TAU - 1.0) * half, -TAU * half, half],
            [TAU * half, half, (TAU - 1.0) * half],
            [-half, (TAU - 1.0) * half, TAU * half],
        ]
    )
    b = _frozen([[-1.0, 0.0, 0.0], [0.0, -1.0, 0.0], [0.0, 0.0, 1.0]])
    gens = GeneratorSet(
        n=3,
        generators=(a, b),
        relation_orders=(("a", 5), ("b", 2), ("ab", 3)),
        group_kind="icosahedral",
    )
    verify_relations(gens)
    return gens


def inversion_generators() -> GeneratorSet:
    """The group {+1, -1} acting on R^1."""
    gens = GeneratorSet(
        n=1,
        generators=(_frozen([[-1.0]]),),
        relation_orders=(("a", 2),),
        group_kind="inversion",
    )
    verify_relations(gens)
    return gens


def group_order(gens: GeneratorSet) -> int:
    """Order of the group generated by ``gens``."""
    if gens.group_kind == "dihedral":
        return 4 * (gens.m or 0)
    if gens.group_kind == "icosahedral":
        return 60
    return 2


@dataclass(frozen=True)
class OrbitPoints:
    """Points of one orbit, sorted lexicographically.

    ``cycle`` holds dihedral orbits in generation order s, a s, a^2 s, ...;
    it is empty for the other families.
    """

    points: NDArray[np.float64]
    seed: NDArray[np.float64]
    dedup_tolerance: float
    cycle: NDArray[np.float64] = field(default_factory=lambda: _frozen(np.empty((0, 0))))

    @property
    def size(self) -> int:
        return int(self.points.shape[0])

    @property
    def n(self) -> int:
        return int(self.points.shape[1])

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.seed))


def _matches(candidate: NDArray[np.float64], found: list[NDArray[np.float64]], tol: float) -> bool:
    return any(bool(np.all(np.abs(candidate - point) <= tol)) for point in found)


def sort_points(points: NDArray[np.float64], tol: float) -> NDArray[np.float64]:
    """Sort rows lexicographically, treating coordinates within ``tol`` as equal."""
    if points.shape[0] == 0:
        return points
    snapped = np.round(points / tol)
    order = np.lexsort(snapped.T[::-1])
    return points[order]


def orbit(
    gens: GeneratorSet,
    seed: ArrayLike,
    tol: float = DEFAULT_ORBIT_TOLERANCE,
) -> OrbitPoints:
    """Orbit of ``seed`` under ``gens``.

    Dihedral orbits are the 2m rotation images a^i(seed); the other families
    use closure under every generator until a fixpoint is reached.

    Raises:
        ValueError: seed of the wrong dimension, non-finite, or tol <= 0.
        OrbitOverflowError: more than 4 |G| distinct points were produced.
    """
    start = np.asarray(seed, dtype=np.float64).reshape(-1)
    if start.shape[0] != gens.n:
        raise ValueError(f"seed has dimension {start.shape[0]}, group acts on R^{gens.n}")
    if not np.all(np.isfinite(start)):
        raise ValueError("seed must be finite")
    if tol <= 0:
        raise ValueError("orbit tolerance must be positive")

    cap = 4 * group_order(gens)
    found: list[NDArray[np.float64]] = []
    cycle: list[NDArray[np.float64]] = []

    if gens.group_kind == "dihedral":
        rotation = gens.generators[0]
        point = start
        for _ in range(2 * (gens.m or 0)):
            if not _matches(point, found, tol):
                found.append(point)
            cycle.append(point)
            point = rotation @ point
    else:
        found.append(start)
        frontier = [start]
        while frontier:
            produced: list[NDArray[np.float64]] = []
            for point in frontier:
                for matrix in gens.generators:
                    image = matrix @ point
                    if _matches(image, found, tol):
                        continue
                    found.append(image)
                    produced.append(image)
                    if len(found) > cap:
                        raise OrbitOverflowError(
                            f"orbit of {start.tolist()} exceeded {cap} points; "
                            f"tolerance {tol:g} is inconsistent"
                        )
            frontier = produced

    points = sort_points(np.array(found), tol)
    if len(cycle) != len(found):
        cycle = []
    cycle_array = np.array(cycle) if cycle else np.empty((0, gens.n))
    return OrbitPoints(
        points=_frozen(points),
        seed=_frozen(start),
        dedup_tolerance=tol,
        cycle=_frozen(cycle_array),
    )


def group_elements(gens: GeneratorSet) -> list[NDArray[np.float64]]:
    """Every matrix of the group, by closure of the identity under the generators."""
    identity = np.eye(gens.n)
    found = [identity]
    frontier = [identity]
    cap = 4 * group_order(gens)
    while frontier:
        produced: list[NDArray[np.float64]] = []
        for element in frontier:
            for matrix in gens.generators:
                image = matrix @ element
                if any(np.max(np.abs(image - g)) <= RELATION_TOLERANCE for g in found):
                    continue
                found.append(image)
                produced.append(image)
                if len(found) > cap:
                    raise OrbitOverflowError(f"{gens.describe()} closure exceeded {cap} elements")
        frontier = produced
    return found


def snap_seed(gens: GeneratorSet, seed: ArrayLike, tol: float) -> NDArray[np.float64]:
    """Move a rounded seed onto the fixed space of the elements that almost fix it.

    A seed typed with a few decimals, such as (0.525731, 0.850651, 0) for an
    icosahedron vertex, is nearly fixed by its true stabilizer H but not
    exactly, so its orbit would come out generic. Averaging h(seed) over the
    elements with |h(seed) - seed| <= tol * max(1, |seed|) lands exactly in
    the fixed space of H. Seeds without such elements are returned unchanged;
    ``tol = 0`` disables snapping.
    """
    start = np.asarray(seed, dtype=np.float64).reshape(-1)
    if tol <= 0 or start.shape[0] != gens.n or not np.all(np.isfinite(start)):
        return start
    scale = max(1.0, float(np.linalg.norm(start)))
    images = [g @ start for g in group_elements(gens)]
    near = [image for image in images if np.linalg.norm(image - start) <= tol * scale]
    if len(near) <= 1:
        return start
    return np.mean(near, axis=0)


@dataclass(frozen=True)
class Cluster:
    """Half-set v_1..v_k of an origin-symmetric cluster {+v_j} U {-v_j}."""

    n: int
    half_points: NDArray[np.float64]
    shell_boundaries: tuple[tuple[int, int], ...]

    @property
    def k(self) -> int:
        return int(self.half_points.shape[0])

    @property
    def full_points(self) -> NDArray[np.float64]:
        return np.vstack([self.half_points, -self.half_points])

    def shell_of(self, j: int) -> int:
        """Index of the shell holding half point ``j`` (zero-based)."""
        for shell, (begin, end) in enumerate(self.shell_boundaries):
            if begin <= j < end:
                return shell
        raise IndexError(j)

    @classmethod
    def from_half_points(cls, half_points: ArrayLike) -> Cluster:
        """Single-shell cluster from explicit representatives (one per +- pair)."""
        points = np.atleast_2d(np.asarray(half_points, dtype=np.float64))
        _check_collisions(points)
        return cls(
            n=int(points.shape[1]),
            half_points=_frozen(points),
            shell_boundaries=((0, int(points.shape[0])),),
        )


def _first_nonzero_positive(point: NDArray[np.float64], tol: float) -> bool:
    for value in point:
        if abs(value) > tol:
            return bool(value > 0)
    return False


def _check_collisions(points: NDArray[np.float64]) -> None:
    count = points.shape[0]
    for i in range(count):
        for j in range(i + 1, count):
            if np.all(np.abs(points[i] - points[j]) <= CLUSTER_TOLERANCE):
                raise ClusterError(f"half points {i + 1} and {j + 1} coincide")
            if np.all(np.abs(points[i] + points[j]) <= CLUSTER_TOLERANCE):
                raise ClusterError(f"half points {i + 1} and {j + 1} are antipodal")


def _half_of(shell: OrbitPoints, index: int, half_rule: HalfRule) -> NDArray[np.float64]:
    tol = max(shell.dedup_tolerance, CLUSTER_TOLERANCE)
    for point in shell.points:
        if not np.any(np.all(np.abs(shell.points + point) <= tol, axis=1)):
            raise ClusterError(f"shell {index + 1} is not symmetric with respect to the origin")
    if np.all(np.abs(shell.points) <= tol):
        raise ClusterError(f"shell {index + 1} is the trivial orbit {{0}}")

    if half_rule == "sign":
        kept = [point for point in shell.points if _first_nonzero_positive(point, tol)]
        return np.array(kept)

    length = shell.cycle.shape[0]
    if length == 0 or length % 4 != 2:
        raise ClusterError(
            f"shell {index + 1}: the alternate rule needs a dihedral orbit of 2m points, m odd"
        )
    return np.array(shell.cycle[::2])


def build_cluster(shells: list[OrbitPoints], half_rule: HalfRule = "sign") -> Cluster:
    """Concatenate one representative per +- pair of every shell.

    With ``half_rule="sign"`` the representative is the point whose first
    nonzero coordinate is positive. With ``"alternate"`` every other point of
    a dihedral cycle is kept (s, a^2 s, a^4 s, ...), which requires m odd.

    Raises:
        ClusterError: empty input, mixed dimensions, a non-symmetric or trivial
            shell, or points colliding (equal or antipodal) across shells.
    """
    if not shells:
        raise ClusterError("a cluster needs at least one shell")
    n = shells[0].n
    if any(shell.n != n for shell in shells):
        raise ClusterError("all shells must live in the same dimension")

    halves: list[NDArray[np.float64]] = []
    boundaries: list[tuple[int, int]] = []
    start = 0
    for index, shell in enumerate(shells):
        half = _half_of(shell, index, half_rule)
        halves.append(half)
        boundaries.append((start, start + half.shape[0]))
        start += half.shape[0]

    half_points = np.vstack(halves)
    _check_collisions(half_points)
    return Cluster(n=n, half_points=_frozen(half_points), shell_boundaries=tuple(boundaries))

"""From a cluster file to a ready-to-enumerate strip."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from pydantic import ValidationError

from qpack_cli.config import settings
from qpack_cli.embedding import Embedding, build_embedding
from qpack_cli.errors import ConfigParseError, ConfigValidationError
from qpack_cli.models import ClusterSpec
from qpack_cli.orbits import (
    Cluster,
    GeneratorSet,
    OrbitPoints,
    build_cluster,
    dihedral_generators,
    icosahedral_generators,
    inversion_generators,
    orbit,
    snap_seed,
)
from qpack_cli.strip import StripConstraintSet, build_constraints


@dataclass(frozen=True)
class PreparedStrip:
    """Everything derived from a ClusterSpec before enumeration."""

    spec: ClusterSpec
    gens: GeneratorSet
    shells: tuple[OrbitPoints, ...]
    cluster: Cluster
    emb: Embedding
    cs: StripConstraintSet


def generators_for(group_kind: str, m: int | None = None) -> GeneratorSet:
    """Generator set for a group name as used in cluster files."""
    if group_kind == "dihedral":
        if m is None:
            raise ValueError("dihedral groups need m")
        return dihedral_generators(m)
    if group_kind == "icosahedral":
        return icosahedral_generators()
    if group_kind == "inversion":
        return inversion_generators()
    raise ValueError(f"unknown group {group_kind!r}")


def parse_config(text: str, source: str = "<string>") -> ClusterSpec:
    """Validate cluster JSON text.

    Raises:
        ConfigParseError: the text is not JSON; carries line and column.
        ConfigValidationError: the JSON does not match ClusterSpec; names the
            first offending field.
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigParseError(f"{source}: {e.msg}", line=e.lineno, column=e.colno) from e
    try:
        return ClusterSpec.model_validate(data)
    except ValidationError as e:
        first = e.errors()[0]
        field = ".".join(str(part) for part in first["loc"]) or None
        count = e.error_count()
        suffix = f" (+{count - 1} more)" if count > 1 else ""
        raise ConfigValidationError(f"{first['msg']}{suffix}", field=field) from e


def load_config(path: Path | str) -> ClusterSpec:
    """Read and validate a cluster file."""
    file_path = Path(path)
    try:
        text = file_path.read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigParseError(f"cannot read {file_path}: {e.strerror or e}") from e
    return parse_config(text, source=str(file_path))


def prepare(
    spec: ClusterSpec,
    shift: float | list[float] | None = None,
    orbit_tolerance: float | None = None,
    boundary_tolerance: float | None = None,
) -> PreparedStrip:
    """Build generators, shells, cluster, embedding and constraints.

    Seeds are snapped onto their symmetry axes first, so rounded decimal
    seeds give the intended orbit. ``shift`` overrides the value stored in
    the spec.
    """
    tol = settings.orbit_tolerance if orbit_tolerance is None else orbit_tolerance
    gens = generators_for(spec.group_kind, spec.m)
    snap = settings.seed_snap_tolerance
    shells = tuple(orbit(gens, snap_seed(gens, seed, snap), tol) for seed in spec.shells)
    cluster = build_cluster(list(shells), spec.half_rule)
    emb = build_embedding(cluster)
    chosen = spec.shift if shift is None else shift
    try:
        cs = build_constraints(emb, chosen, boundary_tolerance)
    except ValueError as e:
        raise ConfigValidationError(str(e), field="shift") from e
    return PreparedStrip(spec=spec, gens=gens, shells=shells, cluster=cluster, emb=emb, cs=cs)

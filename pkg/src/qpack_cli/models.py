"""Pydantic models for cluster files, render views, reports and exported packings."""

from __future__ import annotations

import math
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from qpack_cli.config import settings

AXIS_NORM_TOLERANCE = 1e-9

GROUP_DIMENSIONS = {"dihedral": 2, "icosahedral": 3, "inversion": 1}


# ========== Enumeration ==========


class EnumerationLimits(BaseModel):
    """Bounds on a lattice search.

    ``max_physical_radius`` is measured on the unnormalized projection P x, the
    scale of the cluster coordinates themselves.
    """

    model_config = ConfigDict(extra="forbid", populate_by_name=True, frozen=True)

    max_points: int | None = Field(None, gt=0)
    max_physical_radius: float | None = Field(None, gt=0, alias="radius")
    max_coordinate: int = Field(default_factory=lambda: settings.max_coordinate, gt=0)

    @model_validator(mode="after")
    def _one_finite_bound(self) -> EnumerationLimits:
        if self.max_points is None and self.max_physical_radius is None:
            raise ValueError("limits need max_points or radius")
        return self


def default_limits() -> EnumerationLimits:
    return EnumerationLimits(max_points=settings.max_points)


# ========== Cluster files ==========


class ClusterSpec(BaseModel):
    """Contents of a cluster JSON file.

    Example:
        {"group": "dihedral", "m": 5, "shells": [[1.1, 1.3], [1, 0]]}
    """

    model_config = ConfigDict(extra="forbid", populate_by_name=True)

    group_kind: Literal["dihedral", "icosahedral", "inversion"] = Field(alias="group")
    m: int | None = Field(None, ge=2)
    shells: list[list[float]] = Field(min_length=1)
    half_rule: Literal["sign", "alternate"] = "sign"
    shift: float | list[float] | None = None
    limits: EnumerationLimits = Field(default_factory=default_limits)
    export_format: Literal["csv", "json"] = Field("csv", alias="format")
    name: str | None = None

    @field_validator("shells")
    @classmethod
    def _seeds_nonzero(cls, shells: list[list[float]]) -> list[list[float]]:
        for index, seed in enumerate(shells):
            if not all(math.isfinite(value) for value in seed):
                raise ValueError(f"seed {index + 1} is not finite")
            if not any(value != 0.0 for value in seed):
                raise ValueError(f"seed {index + 1} is the zero vector")
        return shells

    @model_validator(mode="after")
    def _group_consistent(self) -> ClusterSpec:
        if self.group_kind == "dihedral" and self.m is None:
            raise ValueError("m is required when group is dihedral")
        if self.group_kind != "dihedral" and self.m is not None:
            raise ValueError(f"m only applies to dihedral groups, not {self.group_kind}")
        dimension = GROUP_DIMENSIONS[self.group_kind]
        for index, seed in enumerate(self.shells):
            if len(seed) != dimension:
                raise ValueError(
                    f"seed {index + 1} has {len(seed)} coordinates, "
                    f"{self.group_kind} acts on R^{dimension}"
                )
        if self.half_rule == "alternate" and self.group_kind != "dihedral":
            raise ValueError("half_rule 'alternate' applies to dihedral groups only")
        return self

    @property
    def n(self) -> int:
        return GROUP_DIMENSIONS[self.group_kind]


# ========== Rendering ==========


class RenderView(BaseModel):
    """How a packing is drawn: directly (n=2) or projected along an axis (n=3)."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    projection: Literal["direct", "axis"] = "direct"
    axis: tuple[float, float, float] | None = None
    point_radius: float = Field(0.12, gt=0)
    canvas_size: int = Field(800, gt=0)
    scale: float = Field(20.0, gt=0)

    @model_validator(mode="after")
    def _axis_unit(self) -> RenderView:
        if self.projection == "axis":
            if self.axis is None:
                raise ValueError("projection 'axis' needs an axis")
            norm = math.sqrt(sum(value * value for value in self.axis))
            if abs(norm - 1.0) > AXIS_NORM_TOLERANCE:
                raise ValueError(f"axis must be a unit vector, |axis| = {norm:.12g}")
        return self


# ========== Oracle report ==========


class SampleCase(BaseModel):
    """One sampled lattice vector with both decisions."""

    vector: list[int]
    in_strip: bool
    oracle: bool
    margin: float


class AgreementReport(BaseModel):
    """Outcome of comparing the determinant test against the feasibility oracle."""

    n: int
    k: int
    sample_count: int
    coordinate_range: int
    seed: int
    inside: int = 0
    agreements: int = 0
    disagreements: int = 0
    boundary_cases: int = 0
    boundary_disagreements: int = 0
    first_disagreements: list[SampleCase] = Field(default_factory=list)
    first_boundary_cases: list[SampleCase] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        """No disagreement outside the boundary band."""
        return self.disagreements == 0

    def summary(self) -> dict[str, int | str]:
        return {
            "n": self.n,
            "k": self.k,
            "samples": self.sample_count,
            "range": self.coordinate_range,
            "seed": self.seed,
            "inside": self.inside,
            "agreements": self.agreements,
            "disagreements": self.disagreements,
            "boundary_cases": self.boundary_cases,
            "boundary_disagreements": self.boundary_disagreements,
            "status": "ok" if self.passed else "FAILED",
        }


# ========== Exported packings ==========


class PackingRecord(BaseModel):
    """One row of an exported packing."""

    model_config = ConfigDict(extra="forbid")

    physical: list[float]
    lattice: list[int]
    occupancy: int
    occ_mask: str


class PackingDocument(BaseModel):
    """JSON export layout; mirrors the CSV header and columns."""

    model_config = ConfigDict(extra="forbid")

    n: int
    k: int
    points: int
    fingerprint: str
    records: list[PackingRecord]

    @model_validator(mode="after")
    def _consistent(self) -> PackingDocument:
        if self.points != len(self.records):
            raise ValueError(f"header says {self.points} points, found {len(self.records)}")
        for index, record in enumerate(self.records):
            if len(record.physical) != self.n or len(record.lattice) != self.k:
                raise ValueError(f"record {index + 1} does not match n={self.n}, k={self.k}")
            if len(record.occ_mask) != 2 * self.k:
                raise ValueError(f"record {index + 1} has an occupancy mask of the wrong length")
        return self

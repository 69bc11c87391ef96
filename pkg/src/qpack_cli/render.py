"""Static SVG scatter plots of packings.

Planar packings are drawn as they are. Three-dimensional packings are
projected onto the plane orthogonal to a viewing axis, usually the fivefold
axis of the icosahedral generator ``a``.
"""

from __future__ import annotations

import xml.etree.ElementTree as ET
from pathlib import Path

import numpy as np
from numpy.typing import NDArray

from qpack_cli.enumeration import Packing
from qpack_cli.errors import DimensionMismatch, InvariantViolation, PackingFileError
from qpack_cli.models import RenderView
from qpack_cli.orbits import GeneratorSet

SVG_NAMESPACE = "http://www.w3.org/2000/svg"
FIXED_SPACE_TOLERANCE = 1e-9
SIGN_TOLERANCE = 1e-12
DEGENERATE_DIRECTION = 1e-6
POINT_FILL = "#1f2937"


def _first_nonzero_positive(vector: NDArray[np.float64]) -> NDArray[np.float64]:
    for value in vector:
        if abs(value) > SIGN_TOLERANCE:
            return vector if value > 0 else -vector
    return vector


def fivefold_axis(gens: GeneratorSet) -> NDArray[np.float64]:
    """Unit vector u with a u = u for the order-5 icosahedral generator a.

    Raises:
        DimensionMismatch: ``gens`` is not the icosahedral group.
        InvariantViolation: the fixed space of ``a`` is not one-dimensional.
    """
    if gens.group_kind != "icosahedral":
        raise DimensionMismatch(
            f"a fivefold axis needs the icosahedral group, got {gens.describe()}"
        )
    a = gens.generators[0]
    _, singular, vt = np.linalg.svd(a - np.eye(3))
    null_dimension = int(np.count_nonzero(singular <= FIXED_SPACE_TOLERANCE))
    if null_dimension != 1:
        raise InvariantViolation(
            f"generator a fixes a {null_dimension}-dimensional subspace, expected an axis"
        )
    axis = vt[-1] / np.linalg.norm(vt[-1])
    return _first_nonzero_positive(axis)


def plane_basis(axis: NDArray[np.float64]) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    """Orthonormal b1, b2 completing ``axis``; Gram-Schmidt on (axis, x, y, z)."""
    u = np.asarray(axis, dtype=np.float64) / np.linalg.norm(axis)
    basis: list[NDArray[np.float64]] = [u]
    for candidate in np.eye(3):
        vector = candidate - sum(float(np.dot(candidate, b)) * b for b in basis)
        norm = float(np.linalg.norm(vector))
        if norm > DEGENERATE_DIRECTION:
            basis.append(vector / norm)
        if len(basis) == 3:
            break
    return basis[1], basis[2]


def project_view(p: Packing, view: RenderView) -> NDArray[np.float64]:
    """Plane coordinates (one row per point) before scaling.

    Raises:
        DimensionMismatch: the view does not fit the packing dimension.
    """
    if view.projection == "direct":
        if p.n == 2:
            return np.array(p.physical, dtype=np.float64)
        if p.n == 1:
            return np.hstack([p.physical, np.zeros((p.size, 1))])
        raise DimensionMismatch(f"direct rendering needs n <= 2, packing has n={p.n}")
    if p.n != 3:
        raise DimensionMismatch(f"axis rendering needs n = 3, packing has n={p.n}")
    if view.axis is None:
        raise DimensionMismatch("axis rendering needs an axis")
    b1, b2 = plane_basis(np.array(view.axis))
    return np.column_stack([p.physical @ b1, p.physical @ b2])


def _number(value: float) -> str:
    text = f"{value:.4f}"
    return "0.0000" if text == "-0.0000" else text


def svg_document(p: Packing, view: RenderView) -> str:
    """SVG 1.1 text with one filled circle per point, origin at the canvas centre."""
    coordinates = project_view(p, view)
    size = view.canvas_size
    centre = size / 2.0

    ET.register_namespace("", SVG_NAMESPACE)
    root = ET.Element(
        f"{{{SVG_NAMESPACE}}}svg",
        {
            "version": "1.1",
            "width": str(size),
            "height": str(size),
            "viewBox": f"0 0 {size} {size}",
        },
    )
    ET.SubElement(
        root,
        f"{{{SVG_NAMESPACE}}}rect",
        {"x": "0", "y": "0", "width": str(size), "height": str(size), "fill": "white"},
    )
    group = ET.SubElement(root, f"{{{SVG_NAMESPACE}}}g", {"fill": POINT_FILL})
    radius = _number(view.point_radius * view.scale)
    for x, y in coordinates:
        ET.SubElement(
            group,
            f"{{{SVG_NAMESPACE}}}circle",
            {
                "cx": _number(centre + x * view.scale),
                "cy": _number(centre - y * view.scale),
                "r": radius,
            },
        )
    body = ET.tostring(root, encoding="unicode")
    return '<?xml version="1.0" encoding="UTF-8"?>\n' + body + "\n"


def render_svg(p: Packing, view: RenderView, path: Path | str) -> None:
    """Write the SVG for ``p`` under ``view`` to ``path``."""
    target = Path(path)
    text = svg_document(p, view)
    try:
        target.write_text(text, encoding="utf-8")
    except OSError as e:
        raise PackingFileError(e.strerror or str(e), path=str(target)) from e

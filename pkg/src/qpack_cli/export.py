"""Writing packings to CSV/JSON files and reading them back.

CSV layout::

    # n=2 k=10 points=401 fingerprint=3f0c...
    p1,p2,x1,...,x10,occupancy,occ_mask
    0.0,0.0,0,...,0,4,01000110...

Physical coordinates use the shortest decimal that round-trips to the same
double, so a re-import reproduces the packing exactly. ``occ_mask`` holds
2k flags ordered (1,+), (1,-), (2,+), (2,-), ...
"""

from __future__ import annotations

import csv
import io
import re
from pathlib import Path
from typing import Literal

import numpy as np
from pydantic import ValidationError

from qpack_cli.enumeration import Packing
from qpack_cli.errors import PackingFileError
from qpack_cli.models import PackingDocument, PackingRecord

ExportFormat = Literal["csv", "json"]

HEADER_PATTERN = re.compile(
    r"^#\s*n=(?P<n>\d+)\s+k=(?P<k>\d+)\s+points=(?P<points>\d+)\s+fingerprint=(?P<fp>\S*)\s*$"
)


def format_for(path: Path | str, fmt: str | None = None) -> ExportFormat:
    """Explicit format, else ``json`` for a .json suffix and ``csv`` otherwise."""
    chosen = fmt or ("json" if Path(path).suffix.lower() == ".json" else "csv")
    if chosen not in ("csv", "json"):
        raise ValueError(f"unknown export format {chosen!r}")
    return chosen  # type: ignore[return-value]


def _mask(flags: np.ndarray) -> str:
    return "".join("1" if flag else "0" for flag in flags)


def packing_to_csv(p: Packing) -> str:
    output = io.StringIO()
    output.write(f"# n={p.n} k={p.k} points={p.size} fingerprint={p.emb_fingerprint}\n")
    writer = csv.writer(output, lineterminator="\n")
    writer.writerow(
        [f"p{i + 1}" for i in range(p.n)]
        + [f"x{j + 1}" for j in range(p.k)]
        + ["occupancy", "occ_mask"]
    )
    counts = p.occupancy_counts
    for index in range(p.size):
        writer.writerow(
            [repr(float(v)) for v in p.physical[index]]
            + [str(int(v)) for v in p.lattice[index]]
            + [str(int(counts[index])), _mask(p.occupancy[index])]
        )
    return output.getvalue()


def packing_to_document(p: Packing) -> PackingDocument:
    counts = p.occupancy_counts
    records = [
        PackingRecord(
            physical=[float(v) for v in p.physical[index]],
            lattice=[int(v) for v in p.lattice[index]],
            occupancy=int(counts[index]),
            occ_mask=_mask(p.occupancy[index]),
        )
        for index in range(p.size)
    ]
    return PackingDocument(
        n=p.n, k=p.k, points=p.size, fingerprint=p.emb_fingerprint, records=records
    )


def export_packing(p: Packing, path: Path | str, fmt: str | None = None) -> None:
    """Write ``p`` to ``path`` as CSV or JSON.

    Raises:
        PackingFileError: the file cannot be written.
    """
    target = Path(path)
    chosen = format_for(target, fmt)
    if chosen == "json":
        text = packing_to_document(p).model_dump_json(indent=2) + "\n"
    else:
        text = packing_to_csv(p)
    try:
        target.write_text(text, encoding="utf-8")
    except OSError as e:
        raise PackingFileError(e.strerror or str(e), path=str(target)) from e


def _from_records(
    n: int, k: int, fingerprint: str, records: list[PackingRecord], source: str
) -> Packing:
    lattice = np.array([r.lattice for r in records], dtype=np.int64).reshape(-1, k)
    physical = np.array([r.physical for r in records], dtype=np.float64).reshape(-1, n)
    occupancy = np.array(
        [[c == "1" for c in r.occ_mask] for r in records], dtype=bool
    ).reshape(-1, 2 * k)
    for index, record in enumerate(records):
        if record.occupancy != int(np.sum(occupancy[index])):
            raise PackingFileError(
                f"record {index + 1}: occupancy {record.occupancy} disagrees with its mask",
                path=source,
            )
    return Packing(
        n=n,
        k=k,
        lattice=lattice,
        physical=physical,
        occupancy=occupancy,
        emb_fingerprint=fingerprint,
    )


def packing_from_csv(text: str, source: str = "<string>") -> Packing:
    lines = text.splitlines()
    if not lines:
        raise PackingFileError("empty packing file", path=source)
    match = HEADER_PATTERN.match(lines[0])
    if match is None:
        raise PackingFileError("missing '# n=.. k=.. points=.. fingerprint=..' header", path=source)
    n, k = int(match["n"]), int(match["k"])
    rows = list(csv.reader(lines[1:]))
    if not rows:
        raise PackingFileError("missing column header", path=source)
    width = n + k + 2
    records: list[PackingRecord] = []
    for number, row in enumerate(rows[1:], start=3):
        if not row:
            continue
        if len(row) != width:
            raise PackingFileError(f"line {number}: expected {width} columns", path=source)
        try:
            records.append(
                PackingRecord(
                    physical=[float(v) for v in row[:n]],
                    lattice=[int(v) for v in row[n : n + k]],
                    occupancy=int(row[n + k]),
                    occ_mask=row[n + k + 1],
                )
            )
        except ValueError as e:
            raise PackingFileError(f"line {number}: {e}", path=source) from e
    try:
        document = PackingDocument(
            n=n, k=k, points=int(match["points"]), fingerprint=match["fp"], records=records
        )
    except ValidationError as e:
        raise PackingFileError(e.errors()[0]["msg"], path=source) from e
    return _from_records(n, k, document.fingerprint, document.records, source)


def packing_from_json(text: str, source: str = "<string>") -> Packing:
    try:
        document = PackingDocument.model_validate_json(text)
    except ValidationError as e:
        raise PackingFileError(e.errors()[0]["msg"], path=source) from e
    return _from_records(document.n, document.k, document.fingerprint, document.records, source)


def import_packing(path: Path | str, fmt: str | None = None) -> Packing:
    """Read a packing written by export_packing; format from the suffix.

    Raises:
        PackingFileError: unreadable or malformed file.
    """
    source = Path(path)
    try:
        text = source.read_text(encoding="utf-8")
    except OSError as e:
        raise PackingFileError(e.strerror or str(e), path=str(source)) from e
    if format_for(source, fmt) == "json":
        return packing_from_json(text, str(source))
    return packing_from_csv(text, str(source))

"""Roster and path-loss matrix loading, plus reciprocal symmetrization.

Missing propagation paths are written as ``NA`` in files and held as
``numpy.inf`` in memory, so the max-of-reciprocal rule treats them as
infinite loss without special casing.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .errors import IngestError

NO_PATH = math.inf
NO_PATH_TOKEN = "NA"

ROSTER_HEADER = ("id", "lat", "lon", "elev_m")


@dataclass(frozen=True)
class NodeRecord:
    id: str
    latitude: Optional[float] = None
    longitude: Optional[float] = None
    elevation_m: Optional[float] = None


@dataclass(frozen=True)
class NodeRoster:
    nodes: tuple[NodeRecord, ...]

    def __post_init__(self):
        seen = set()
        for row, node in enumerate(self.nodes, start=1):
            if not node.id:
                raise IngestError(f"row {row}: empty node id")
            if node.id in seen:
                raise IngestError(f"row {row}: duplicate node id {node.id!r}")
            seen.add(node.id)

    def __len__(self) -> int:
        return len(self.nodes)

    @property
    def ids(self) -> list[str]:
        return [node.id for node in self.nodes]

    def index(self, node_id: str) -> int:
        for i, node in enumerate(self.nodes):
            if node.id == node_id:
                return i
        raise KeyError(node_id)


@dataclass(frozen=True)
class RawPathLoss:
    """Directed loss in dB; ``values[i, j]`` is node i transmitting to node j."""

    values: np.ndarray

    def __post_init__(self):
        v = self.values
        if v.ndim != 2 or v.shape[0] != v.shape[1]:
            raise IngestError(f"path-loss matrix must be square, got shape {v.shape}")
        if np.isnan(v).any() or (v < 0).any() or np.isneginf(v).any():
            raise IngestError("path-loss entries must be finite >= 0 dB or no-path")

    @property
    def n(self) -> int:
        return self.values.shape[0]


@dataclass(frozen=True)
class PathLossMatrix:
    values: np.ndarray

    def __post_init__(self):
        v = self.values
        if v.ndim != 2 or v.shape[0] != v.shape[1]:
            raise IngestError(f"path-loss matrix must be square, got shape {v.shape}")
        if not np.array_equal(v, v.T):
            raise IngestError("path-loss matrix is not symmetric")
        if np.any(np.diag(v) != 0):
            raise IngestError("path-loss matrix diagonal must be zero")

    @property
    def n(self) -> int:
        return self.values.shape[0]


def _optional_float(text: str, row: int, column: str) -> Optional[float]:
    text = text.strip()
    if not text:
        return None
    try:
        return float(text)
    except ValueError:
        raise IngestError(f"row {row}: column {column!r} is not a number: {text!r}") from None


def load_roster(path) -> NodeRoster:
    """Read a roster CSV with header ``id,lat,lon,elev_m``.

    Row numbers in error messages count the header as row 1.
    """
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    rows = [r for r in rows if r]
    if not rows:
        raise IngestError(f"{path}: roster file is empty")
    header = tuple(c.strip() for c in rows[0])
    if header != ROSTER_HEADER:
        raise IngestError(f"{path}: row 1: expected header {','.join(ROSTER_HEADER)}, got {','.join(header)}")
    if len(rows) == 1:
        raise IngestError(f"{path}: roster has no nodes")

    nodes = []
    seen = {}
    for rownum, row in enumerate(rows[1:], start=2):
        if len(row) != len(ROSTER_HEADER):
            raise IngestError(f"{path}: row {rownum}: expected {len(ROSTER_HEADER)} fields, got {len(row)}")
        node_id = row[0].strip()
        if not node_id:
            raise IngestError(f"{path}: row {rownum}: empty node id")
        if node_id in seen:
            raise IngestError(f"{path}: row {rownum}: duplicate node id {node_id!r} (first seen on row {seen[node_id]})")
        seen[node_id] = rownum
        nodes.append(NodeRecord(
            id=node_id,
            latitude=_optional_float(row[1], rownum, "lat"),
            longitude=_optional_float(row[2], rownum, "lon"),
            elevation_m=_optional_float(row[3], rownum, "elev_m"),
        ))
    return NodeRoster(tuple(nodes))


def _parse_loss(text: str, row: int, column: str) -> float:
    text = text.strip()
    if text == NO_PATH_TOKEN:
        return NO_PATH
    try:
        value = float(text)
    except ValueError:
        raise IngestError(f"row {row}: column {column!r}: non-numeric cell {text!r}") from None
    if not math.isfinite(value) or value < 0:
        raise IngestError(f"row {row}: column {column!r}: path loss must be finite and >= 0, got {text!r}")
    return value


def read_matrix_csv(path) -> tuple[list[str], np.ndarray]:
    """Read a labelled square matrix CSV and return (ids, values) in file order."""
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        rows = [r for r in csv.reader(fh) if r]
    if not rows:
        raise IngestError(f"{path}: matrix file is empty")
    header = [c.strip() for c in rows[0]]
    if not header or header[0] != "id":
        raise IngestError(f"{path}: row 1: first header cell must be 'id'")
    col_ids = header[1:]
    if len(set(col_ids)) != len(col_ids):
        raise IngestError(f"{path}: row 1: duplicate column ids")
    n = len(col_ids)
    body = rows[1:]
    if len(body) != n:
        raise IngestError(f"{path}: expected {n} data rows, got {len(body)}")

    row_ids = []
    values = np.empty((n, n))
    for r, row in enumerate(body):
        rownum = r + 2
        if len(row) != n + 1:
            raise IngestError(f"{path}: row {rownum}: ragged row, expected {n + 1} fields, got {len(row)}")
        row_ids.append(row[0].strip())
        for c in range(n):
            try:
                values[r, c] = _parse_loss(row[c + 1], rownum, col_ids[c])
            except IngestError as exc:
                raise IngestError(f"{path}: {exc}") from None
    if sorted(row_ids) != sorted(col_ids):
        raise IngestError(f"{path}: row ids do not match column ids")
    # Canonicalize rows to column order.
    order = [row_ids.index(cid) for cid in col_ids]
    return col_ids, values[order, :]


def load_raw_pathloss(path, roster: NodeRoster) -> RawPathLoss:
    """Load a directed path-loss CSV and reorder it to roster order."""
    ids, values = read_matrix_csv(path)
    roster_ids = roster.ids
    known, listed = set(roster_ids), set(ids)
    missing = [i for i in ids if i not in known]
    if missing:
        raise IngestError(f"{path}: id {missing[0]!r} is not in the roster")
    absent = [i for i in roster_ids if i not in listed]
    if absent:
        raise IngestError(f"{path}: roster id {absent[0]!r} is missing from the matrix")
    pos = {node_id: i for i, node_id in enumerate(ids)}
    order = [pos[node_id] for node_id in roster_ids]
    return RawPathLoss(values[np.ix_(order, order)])


def symmetrize(raw) -> PathLossMatrix:
    """Keep the worse direction of each reciprocal pair and zero the diagonal."""
    values = raw.values if isinstance(raw, (RawPathLoss, PathLossMatrix)) else np.asarray(raw, dtype=float)
    if values.ndim != 2 or values.shape[0] != values.shape[1]:
        raise IngestError(f"path-loss matrix must be square, got shape {values.shape}")
    out = np.maximum(values, values.T)
    np.fill_diagonal(out, 0.0)
    return PathLossMatrix(out)


def format_value(value: float) -> str:
    if math.isinf(value):
        return NO_PATH_TOKEN
    return repr(float(value))


def write_matrix_csv(path, ids: Sequence[str], values: np.ndarray) -> None:
    """Write a labelled matrix; floats use shortest round-trip repr, no-path as NA."""
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["id", *ids])
        for node_id, row in zip(ids, values):
            writer.writerow([node_id, *(format_value(v) for v in row)])


def write_roster(path, roster: NodeRoster) -> None:
    def cell(v):
        return "" if v is None else repr(float(v))

    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(ROSTER_HEADER)
        for node in roster.nodes:
            writer.writerow([node.id, cell(node.latitude), cell(node.longitude), cell(node.elevation_m)])

"""Core table representation, CSV serialization, and cell addressing.

Tables move through the system in two forms: :class:`RawTable` is the
grid as ingested (possibly ragged, with multi-row headers and merged
spans still encoded in metadata), and :class:`NormalizedTable` is the
rectangular single-header form every downstream stage consumes.  Both
are immutable value objects; operations return new instances.
"""

from __future__ import annotations

import csv
import enum
import io
import json
from dataclasses import dataclass
from pathlib import Path

from autopk.errors import MalformedInput

META_KEYS = ("caption", "footnote", "article_title", "article_abstract")


class Axis(enum.Enum):
    """Whether a cell reference points into the body grid or the header."""

    BODY = "body"
    HEADER = "header"


@dataclass(frozen=True)
class CellRef:
    """Location of a cell or header fragment within a NormalizedTable.

    For ``axis=HEADER`` the ``row`` index addresses the caret-delimited
    fragment within the composite header at ``col`` (0 = topmost).
    """

    row: int
    col: int
    axis: Axis = Axis.BODY


@dataclass(frozen=True)
class RawTable:
    """Ingested grid plus the metadata needed to normalize and prompt it."""

    id: str
    grid: tuple[tuple[str, ...], ...]
    header_row_count: int = 1
    merged_spans: tuple[tuple[int, int, int, int], ...] = ()
    caption: str | None = None
    footnote: str | None = None
    article_title: str | None = None
    article_abstract: str | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "grid", tuple(tuple(row) for row in self.grid))
        object.__setattr__(
            self, "merged_spans", tuple(tuple(s) for s in self.merged_spans)
        )
        if self.header_row_count < 0:
            raise MalformedInput(f"{self.id}: negative header_row_count")
        if self.header_row_count > len(self.grid):
            raise MalformedInput(
                f"{self.id}: header_row_count {self.header_row_count} exceeds "
                f"{len(self.grid)} grid rows"
            )
        width = max((len(r) for r in self.grid), default=0)
        for span in self.merged_spans:
            row, col, row_span, col_span = span
            if row < 0 or col < 0 or row_span < 1 or col_span < 1:
                raise MalformedInput(f"{self.id}: invalid merged span {span}")
            if row + row_span > len(self.grid) or col + col_span > width:
                raise MalformedInput(f"{self.id}: merged span {span} out of bounds")

    @property
    def width(self) -> int:
        return max((len(r) for r in self.grid), default=0)


@dataclass(frozen=True)
class NormalizedTable:
    """Rectangular grid with a single caret-joined composite header row."""

    header: tuple[str, ...]
    rows: tuple[tuple[str, ...], ...] = ()
    provenance_id: str = ""

    def __post_init__(self) -> None:
        object.__setattr__(self, "header", tuple(self.header))
        object.__setattr__(self, "rows", tuple(tuple(row) for row in self.rows))
        for i, row in enumerate(self.rows):
            if len(row) != len(self.header):
                raise MalformedInput(
                    f"{self.provenance_id}: row {i} has {len(row)} cells, "
                    f"header has {len(self.header)}"
                )

    @property
    def n_cols(self) -> int:
        return len(self.header)

    @property
    def n_rows(self) -> int:
        return len(self.rows)


def parse_table_file(path: str | Path, format: str = "csv_with_sidecar") -> RawTable:
    """Read a table file into a RawTable.

    ``csv_with_sidecar`` reads ``<id>.csv`` plus an optional
    ``<id>.meta.json`` sidecar; ``json`` reads a single document with a
    ``grid`` key.  Missing metadata is not an error; a grid that cannot
    be read, or metadata violating the grid bounds, is MalformedInput.
    """
    path = Path(path)
    if format == "csv_with_sidecar":
        meta: dict = {}
        meta_path = path.parent / (path.stem + ".meta.json")
        if meta_path.exists():
            meta = _load_json(meta_path)
        try:
            with open(path, newline="", encoding="utf-8") as fh:
                grid = [tuple(row) for row in csv.reader(fh)]
        except (OSError, csv.Error, UnicodeDecodeError) as exc:
            raise MalformedInput(f"{path}: unreadable CSV grid: {exc}") from exc
        table_id = path.stem
    elif format == "json":
        meta = _load_json(path)
        grid_raw = meta.get("grid")
        if not isinstance(grid_raw, list) or not all(
            isinstance(r, list) for r in grid_raw
        ):
            raise MalformedInput(f"{path}: 'grid' must be an array of arrays")
        grid = [tuple(str(c) for c in row) for row in grid_raw]
        table_id = meta.get("id", path.stem)
    else:
        raise ValueError(f"unknown table format: {format!r}")

    return RawTable(
        id=table_id,
        grid=tuple(grid),
        header_row_count=int(meta.get("header_row_count", 1)),
        merged_spans=tuple(tuple(int(x) for x in s) for s in meta.get("merged_spans", [])),
        **{k: meta.get(k) for k in META_KEYS},
    )


def _load_json(path: Path) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise MalformedInput(f"{path}: unreadable JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise MalformedInput(f"{path}: expected a JSON object")
    return doc


def serialize_csv(table: NormalizedTable) -> str:
    """Render header plus rows as comma-separated text, no trailing newline."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(table.header)
    writer.writerows(table.rows)
    text = buf.getvalue()
    return text[:-1] if text.endswith("\n") else text


def parse_csv_text(text: str, provenance_id: str = "") -> NormalizedTable:
    """Inverse of :func:`serialize_csv`: first line is the header."""
    reader = csv.reader(io.StringIO(text))
    rows = [tuple(r) for r in reader]
    if not rows:
        raise MalformedInput(f"{provenance_id}: empty CSV text")
    return NormalizedTable(header=rows[0], rows=tuple(rows[1:]), provenance_id=provenance_id)


def transpose(table: NormalizedTable) -> NormalizedTable:
    """Swap rows and columns, treating column 0 as the row-label column.

    The first column (with its header) becomes the new header; every
    remaining column becomes a row whose label cell is its old header.
    Applying transpose twice returns the original table.
    """
    if table.n_cols == 0:
        raise MalformedInput(f"{table.provenance_id}: cannot transpose a 0-column table")
    new_header = (table.header[0],) + tuple(row[0] for row in table.rows)
    new_rows = tuple(
        (table.header[j],) + tuple(row[j] for row in table.rows)
        for j in range(1, table.n_cols)
    )
    return NormalizedTable(
        header=new_header, rows=new_rows, provenance_id=table.provenance_id
    )


def header_fragments(header: str) -> tuple[str, ...]:
    """Split a composite header into its caret-joined fragments."""
    return tuple(header.split("^"))

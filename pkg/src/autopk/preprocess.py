"""Header normalization: merged-cell expansion, empty-header filling, and
collapse of multi-row headers into one caret-joined composite row."""

from __future__ import annotations

from dataclasses import replace

from autopk.errors import MalformedInput
from autopk.tables import NormalizedTable, RawTable

JOIN_ORDERS = ("top_down", "bottom_up")


def _padded_grid(raw: RawTable) -> tuple[tuple[str, ...], ...]:
    # Ragged rows are right-padded so every later stage sees a rectangle.
    width = raw.width
    return tuple(row + ("",) * (width - len(row)) for row in raw.grid)


def expand_merged(raw: RawTable) -> RawTable:
    """Duplicate each merged span's anchor content across its full extent."""
    if not raw.merged_spans:
        return raw
    grid = [list(row) for row in _padded_grid(raw)]
    for row, col, row_span, col_span in raw.merged_spans:
        anchor = grid[row][col]
        for i in range(row, row + row_span):
            for j in range(col, col + col_span):
                grid[i][j] = anchor
    return replace(raw, grid=tuple(tuple(r) for r in grid), merged_spans=())


def fill_empty_headers(raw: RawTable) -> RawTable:
    """Fill empty header cells from the nearest non-empty cell on the left,
    falling back to the nearest on the right; body rows are untouched."""
    if raw.header_row_count < 1:
        raise MalformedInput(f"{raw.id}: at least one header row is required")
    grid = [list(row) for row in _padded_grid(raw)]
    for i in range(min(raw.header_row_count, len(grid))):
        row = grid[i]
        last_seen = ""
        for j, cell in enumerate(row):
            if cell.strip():
                last_seen = cell
            elif last_seen:
                row[j] = last_seen
        # Leading empties have no left neighbor; take the nearest right one.
        next_seen = ""
        for j in range(len(row) - 1, -1, -1):
            if row[j].strip():
                next_seen = row[j]
            elif next_seen:
                row[j] = next_seen
    return replace(raw, grid=tuple(tuple(r) for r in grid))


def collapse_headers(raw: RawTable, join_order: str = "top_down") -> NormalizedTable:
    """Join each column's header cells with ``^`` into one composite header.

    Cells still empty after filling are skipped, and consecutive duplicates
    within a column (merged-cell residue) collapse to a single occurrence.
    ``join_order`` controls fragment order: ``top_down`` stacks outer labels
    first, ``bottom_up`` puts the leaf label first.
    """
    if join_order not in JOIN_ORDERS:
        raise ValueError(f"join_order must be one of {JOIN_ORDERS}")
    if raw.header_row_count < 1:
        raise MalformedInput(f"{raw.id}: header_row_count must be >= 1")
    grid = _padded_grid(raw)
    h = raw.header_row_count
    header = []
    for j in range(raw.width):
        fragments: list[str] = []
        for i in range(h):
            cell = grid[i][j]
            if not cell.strip():
                continue
            if fragments and fragments[-1] == cell:
                continue
            fragments.append(cell)
        if join_order == "bottom_up":
            fragments.reverse()
        header.append("^".join(fragments))
    return NormalizedTable(
        header=tuple(header), rows=grid[h:], provenance_id=raw.id
    )


def preprocess(raw: RawTable, join_order: str = "top_down") -> NormalizedTable:
    """expand_merged -> fill_empty_headers -> collapse_headers."""
    return collapse_headers(
        fill_empty_headers(expand_merged(raw)), join_order=join_order
    )

"""Parsers for the three response formats models are asked to produce."""

from __future__ import annotations

import csv
import io
import logging
import re

from autopk.errors import NoTableFound, UnparseableVerdict

log = logging.getLogger(__name__)

_WS = re.compile(r"\s+")
_WORD = re.compile(r"[A-Za-z]+")


def parse_variant_list(text: str) -> list[str]:
    """Extract every ``$...$``-delimited variant, in order, deduplicated.

    Text outside the delimiters is ignored; an unterminated trailing
    delimiter drops its fragment.  Unparseable text yields an empty list.
    """
    parts = text.split("$")
    enclosed = parts[1:-1:2] if len(parts) % 2 == 0 else parts[1::2]
    seen: dict[str, None] = {}
    for fragment in enclosed:
        variant = fragment.strip()
        if variant:
            seen.setdefault(variant, None)
    if not seen and text.strip():
        log.debug("no $...$ variants found in response: %.80r", text)
    return list(seen)


def _normalize_header_cell(cell: str) -> str:
    return _WS.sub(" ", cell.strip().lower())


def parse_csv_block(text: str, expected_header: list[str] | tuple[str, ...]) -> list[list[str]]:
    """Parse the CSV table a model was told to emit.

    Finds the first line whose cells match ``expected_header`` after
    lowercasing and whitespace collapse, then reads every following
    non-empty line as one CSV row, padded or truncated to the header
    arity, with the literal "None" mapped to an empty cell.  Raises
    NoTableFound when no header line is present.
    """
    want = [_normalize_header_cell(c) for c in expected_header]
    n_cols = len(expected_header)
    lines = text.splitlines()
    header_at = None
    for i, line in enumerate(lines):
        if "," not in line:
            continue
        cells = next(csv.reader(io.StringIO(line)), [])
        if [_normalize_header_cell(c) for c in cells] == want:
            header_at = i
            break
    if header_at is None:
        raise NoTableFound("response contains no line matching the expected header")

    rows: list[list[str]] = []
    for line in lines[header_at + 1 :]:
        if not line.strip() or line.strip().startswith("```"):
            continue
        cells = next(csv.reader(io.StringIO(line)), [])
        if not cells:
            continue
        if len(cells) != n_cols:
            log.warning(
                "row has %d columns, expected %d; adjusting: %.60r",
                len(cells), n_cols, line,
            )
            cells = (cells + [""] * n_cols)[:n_cols]
        rows.append(["" if c.strip().lower() == "none" else c.strip() for c in cells])
    return rows


def parse_verdict(text: str) -> bool:
    """Return True/False for the first standalone YES/NO word.

    Raises UnparseableVerdict when neither word appears; callers treat
    that as a rejection (fail closed).
    """
    for word in _WORD.findall(text):
        lowered = word.lower()
        if lowered == "yes":
            return True
        if lowered == "no":
            return False
    raise UnparseableVerdict(f"no YES/NO token in verdict: {text[:80]!r}")

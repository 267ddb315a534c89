"""Pure-Python edit-distance kernel; fallback when the C extension is absent."""

from __future__ import annotations


def levenshtein_distance(a: str, b: str) -> int:
    """Unit-cost edit distance (insert, delete, substitute)."""
    la, lb = len(a), len(b)
    if la == 0:
        return lb
    if lb == 0:
        return la
    if lb > la:
        a, b = b, a
        la, lb = lb, la
    row = list(range(lb + 1))
    for i in range(1, la + 1):
        diag = row[0]
        row[0] = i
        ca = a[i - 1]
        for j in range(1, lb + 1):
            above = row[j]
            cur = diag if ca == b[j - 1] else diag + 1
            if above + 1 < cur:
                cur = above + 1
            if row[j - 1] + 1 < cur:
                cur = row[j - 1] + 1
            row[j] = cur
            diag = above
    return row[lb]

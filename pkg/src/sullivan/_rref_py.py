"""Pure-Python integer Gauss-Jordan kernel.

Rows are sparse ``{column: int}`` dicts.  The echelon is kept fully reduced
while rows are inserted, so eliminating the pivots of an incoming row never
re-introduces an entry at another pivot column.  Every stored row is
primitive (content 1) with a positive pivot entry.
"""

from math import gcd

__all__ = ["rref_int"]


def _primitive(row):
    g = 0
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            break
    lead = row[min(row)]
    if lead < 0:
        g = -g
    if g != 1:
        for c in row:
            row[c] //= g
    return row


def _eliminate(target, col, prow):
    # target := p*target - t*prow, which kills target[col]
    p = prow[col]
    t = target.pop(col)
    g = gcd(p, t)
    p //= g
    t //= g
    if p != 1:
        for c in target:
            target[c] *= p
    for c, v in prow.items():
        if c == col:
            continue
        nv = target.get(c, 0) - t * v
        if nv:
            target[c] = nv
        else:
            target.pop(c, None)


def rref_int(rows):
    """Return ``(reduced_rows, pivots)`` for a list of sparse integer rows.

    ``reduced_rows[i]`` has its pivot at ``pivots[i]``; pivots ascend.
    Input rows are not modified.
    """
    echelon = {}
    for src in rows:
        row = {c: v for c, v in src.items() if v}
        if not row:
            continue
        for col in [c for c in row if c in echelon]:
            if col in row:
                _eliminate(row, col, echelon[col])
        if not row:
            continue
        _primitive(row)
        piv = min(row)
        for other in echelon.values():
            if piv in other:
                _eliminate(other, piv, row)
                _primitive(other)
        echelon[piv] = row
    pivots = sorted(echelon)
    return [echelon[c] for c in pivots], pivots

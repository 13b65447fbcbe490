"""Exact linear algebra over the rationals.

The heavy lifting is integer Gauss-Jordan elimination on sparse rows
(``rref_int``), provided by the compiled ``_rref`` extension when it was
built and by ``_rref_py`` otherwise.  Set ``SULLIVAN_PURE_PYTHON=1`` to force
the fallback.

Two layers live here:

* sparse helpers on ``{index: Fraction}`` vectors, used by the rest of the
  package (``rref_rows``, ``nullspace``, ``Subspace``, ``solve_sparse``);
* the dense ``RatMatrix`` API (``rref``, ``solve_affine``,
  ``induced_quotient_map``).
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterable, Optional, Sequence

if os.environ.get("SULLIVAN_PURE_PYTHON"):
    from ._rref_py import rref_int

    BACKEND = "python"
else:
    try:
        from ._rref import rref_int

        BACKEND = "cython"
    except ImportError:  # extension not built
        from ._rref_py import rref_int

        BACKEND = "python"

__all__ = [
    "BACKEND",
    "MappingNotWellDefined",
    "RatMatrix",
    "Subspace",
    "induced_quotient_map",
    "nullspace",
    "rref",
    "rref_rows",
    "solve_affine",
    "solve_sparse",
]

Vec = dict  # sparse vector {index: Fraction}


class MappingNotWellDefined(ValueError):
    """A linear map does not carry the source subspace into the target one."""


def _to_int_row(row: dict) -> dict:
    den = 1
    for v in row.values():
        if isinstance(v, Fraction):
            den = lcm(den, v.denominator)
    if den == 1:
        return {c: int(v) for c, v in row.items() if v}
    return {c: int(v * den) for c, v in row.items() if v}


def rref_rows(rows: Iterable[dict]) -> tuple[list[dict], list[int]]:
    """Reduced row-echelon form of sparse rational rows.

    Returns the nonzero reduced rows (pivot entry 1) and their pivot
    columns in ascending order.
    """
    irows, pivots = rref_int([_to_int_row(r) for r in rows])
    out = []
    for r, p in zip(irows, pivots):
        lead = r[p]
        if lead == 1:
            out.append({c: Fraction(v) for c, v in r.items()})
        else:
            out.append({c: Fraction(v, lead) for c, v in r.items()})
    return out, pivots


def nullspace(rows: Iterable[dict], ncols: int) -> list[dict]:
    """Basis of ``{x : R x = 0}``, one vector per free column (ascending)."""
    red, pivots = rref_rows(rows)
    pivset = set(pivots)
    basis = []
    for f in range(ncols):
        if f in pivset:
            continue
        v = {f: Fraction(1)}
        for r, p in zip(red, pivots):
            c = r.get(f)
            if c:
                v[p] = -c
        basis.append(v)
    return basis


def solve_sparse(columns: Sequence[dict], target: dict) -> Optional[dict]:
    """Solve ``sum_j x_j columns[j] = target``.

    Returns the canonical particular solution (free variables zero) as a
    sparse vector, or ``None`` when the system is inconsistent.
    """
    n = len(columns)
    rows: dict = {}
    for j, col in enumerate(columns):
        for i, v in col.items():
            if v:
                rows.setdefault(i, {})[j] = v
    for i, v in target.items():
        if v:
            rows.setdefault(i, {})[n] = v
    red, pivots = rref_rows(rows.values())
    if pivots and pivots[-1] == n:
        return None
    sol = {}
    for r, p in zip(red, pivots):
        c = r.get(n)
        if c:
            sol[p] = c
    return sol


class Subspace:
    """A subspace of Q^n held as a reduced row-echelon basis.

    ``reduce`` maps a vector to the canonical representative of its coset:
    the unique element of ``v + S`` that vanishes on every pivot column.
    """

    __slots__ = ("basis", "pivots", "_pivset")

    def __init__(self, vectors: Iterable[dict] = ()):
        self.basis, self.pivots = rref_rows(vectors)
        self._pivset = set(self.pivots)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def reduce(self, v: dict) -> dict:
        out = {c: x for c, x in v.items() if x}
        for r, p in zip(self.basis, self.pivots):
            c = out.get(p)
            if c:
                for k, x in r.items():
                    nv = out.get(k, 0) - c * x
                    if nv:
                        out[k] = nv
                    else:
                        out.pop(k, None)
        return out

    def __contains__(self, v: dict) -> bool:
        return not self.reduce(v)


# ---------------------------------------------------------------------------
# dense API


@dataclass(frozen=True)
class RatMatrix:
    rows: int
    cols: int
    entries: tuple  # tuple of row tuples of Fraction

    def __post_init__(self):
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise ValueError("inconsistent matrix dimensions")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: Optional[int] = None) -> "RatMatrix":
        rows = [tuple(Fraction(x) for x in r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        return cls(len(rows), cols, tuple(rows))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "RatMatrix":
        return cls(rows, cols, tuple((Fraction(0),) * cols for _ in range(rows)))

    @classmethod
    def identity(cls, n: int) -> "RatMatrix":
        return cls.from_rows([[1 if i == j else 0 for j in range(n)] for i in range(n)], n)

    def sparse_rows(self) -> list[dict]:
        return [{j: x for j, x in enumerate(r) if x} for r in self.entries]

    def column(self, j: int) -> tuple:
        return tuple(r[j] for r in self.entries)

    def __matmul__(self, other: "RatMatrix") -> "RatMatrix":
        if self.cols != other.rows:
            raise ValueError("dimension mismatch")
        cols = [other.column(j) for j in range(other.cols)]
        return RatMatrix.from_rows(
            [[sum((a * b for a, b in zip(r, c)), Fraction(0)) for c in cols] for r in self.entries],
            other.cols,
        )

    def apply(self, v: Sequence) -> tuple:
        if len(v) != self.cols:
            raise ValueError("dimension mismatch")
        return tuple(sum((a * Fraction(b) for a, b in zip(r, v)), Fraction(0)) for r in self.entries)


def _dense(v: dict, n: int) -> tuple:
    return tuple(v.get(i, Fraction(0)) for i in range(n))


def rref(m: RatMatrix) -> tuple[RatMatrix, tuple[int, ...], int]:
    red, pivots = rref_rows(m.sparse_rows())
    rows = [_dense(r, m.cols) for r in red]
    rows += [(Fraction(0),) * m.cols] * (m.rows - len(rows))
    return RatMatrix(m.rows, m.cols, tuple(rows)), tuple(pivots), len(pivots)


def solve_affine(a: RatMatrix, b: Sequence) -> Optional[tuple[tuple, list[tuple]]]:
    """Solve ``a x = b``: ``(particular, kernel_basis)`` or ``None``."""
    if len(b) != a.rows:
        raise ValueError("dimension mismatch")
    cols = [{i: x for i, x in enumerate(a.column(j)) if x} for j in range(a.cols)]
    sol = solve_sparse(cols, {i: Fraction(x) for i, x in enumerate(b) if x})
    if sol is None:
        return None
    kernel = [_dense(k, a.cols) for k in nullspace(a.sparse_rows(), a.cols)]
    return _dense(sol, a.cols), kernel


def _columns_to_vectors(basis: Sequence[Sequence]) -> list[dict]:
    return [{i: Fraction(x) for i, x in enumerate(col) if x} for col in basis]


def induced_quotient_map(a: RatMatrix, sub_src: Sequence[Sequence], sub_tgt: Sequence[Sequence]) -> RatMatrix:
    """Matrix of the map ``Q^n/sub_src -> Q^m/sub_tgt`` induced by ``a``.

    The quotient bases are the coordinate vectors on the non-pivot columns of
    the reduced echelon form of each subspace, in ascending order.
    """
    src = Subspace(_columns_to_vectors(sub_src))
    tgt = Subspace(_columns_to_vectors(sub_tgt))
    for v in src.basis:
        img = {i: x for i, x in enumerate(a.apply(_dense(v, a.cols))) if x}
        if img not in tgt:
            raise MappingNotWellDefined("image of a source subspace vector leaves the target subspace")
    src_free = [j for j in range(a.cols) if j not in set(src.pivots)]
    tgt_free = [i for i in range(a.rows) if i not in set(tgt.pivots)]
    out = []
    for i in tgt_free:
        out.append([])
    for j in src_free:
        img = tgt.reduce({i: x for i, x in enumerate(a.column(j)) if x})
        for k, i in enumerate(tgt_free):
            out[k].append(img.get(i, Fraction(0)))
    return RatMatrix.from_rows(out, len(src_free)) if out else RatMatrix(0, len(src_free), ())

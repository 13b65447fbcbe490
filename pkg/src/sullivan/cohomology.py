"""Cohomology of Sullivan algebras, degree by degree.

Representatives are canonical: a cocycle basis is reduced modulo the
coboundary echelon basis and the remainders are brought to reduced echelon
form.  The coordinates of a class are then read off at the pivot columns of
the representatives.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .algebra import Polynomial
from .dga import SullivanAlgebra
from .linalg import RatMatrix, Subspace, nullspace, solve_sparse

__all__ = [
    "Certainty",
    "CohomologyTable",
    "CutoffMismatch",
    "CutoffTooSmall",
    "InducedMap",
    "NotACocycle",
    "ToomerVerdict",
    "betti",
    "cup_length_evidence",
    "find_primitive",
    "induced_on_H",
    "toomer",
]


class CutoffTooSmall(ValueError):
    pass


class NotACocycle(ValueError):
    pass


class CutoffMismatch(ValueError):
    pass


def _transpose(columns: list) -> list:
    rows: dict = {}
    for j, col in enumerate(columns):
        for i, v in col.items():
            rows.setdefault(i, {})[j] = v
    return list(rows.values())


@dataclass
class DegreeData:
    degree: int
    cocycles: list  # sparse vectors, basis of Z^k
    coboundaries: Subspace
    reps: Subspace  # canonical complement, rows are the representatives

    @property
    def dim(self) -> int:
        return self.reps.dim

    def coordinates(self, v: dict) -> list:
        r = self.coboundaries.reduce(v)
        coords = [r.get(p, Fraction(0)) for p in self.reps.pivots]
        check = dict(r)
        for c, row in zip(coords, self.reps.basis):
            if c:
                for k, x in row.items():
                    nv = check.get(k, 0) - c * x
                    if nv:
                        check[k] = nv
                    else:
                        check.pop(k, None)
        if check:
            raise NotACocycle(f"vector in degree {self.degree} is not a cocycle")
        return coords


@dataclass
class CohomologyTable:
    alg: SullivanAlgebra
    cutoff: int
    by_degree: list = field(default_factory=list)

    @property
    def dims(self) -> list:
        return [dd.dim for dd in self.by_degree]

    def max_degree(self) -> int:
        return self.cutoff - 1

    def representatives(self, k: int) -> list:
        return [self.alg.from_vector(v, k) for v in self.by_degree[k].reps.basis]

    def class_coordinates(self, z: Polynomial, k: Optional[int] = None) -> list:
        if k is None:
            k = z.degree()
            if k is None:
                raise ValueError("degree of the zero polynomial is ambiguous; pass k")
        if k > self.max_degree():
            raise CutoffTooSmall(f"degree {k} is beyond the table (max {self.max_degree()})")
        if self.alg.d(z):
            raise NotACocycle(f"{z} is not a cocycle")
        return self.by_degree[k].coordinates(self.alg.to_vector(z, k))

    def is_coboundary(self, z: Polynomial, k: Optional[int] = None) -> bool:
        return not any(self.class_coordinates(z, k))


def _degree_data(alg: SullivanAlgebra, k: int) -> DegreeData:
    cache = alg._cache.setdefault("hdeg", {})
    if k in cache:
        return cache[k]
    n = len(alg.cochain_basis(k))
    cocycles = nullspace(_transpose(alg.d_columns(k)), n) if n else []
    bounds = Subspace(alg.d_columns(k - 1) if k >= 1 else [])
    reps = Subspace([bounds.reduce(z) for z in cocycles])
    dd = DegreeData(k, cocycles, bounds, reps)
    cache[k] = dd
    return dd


def betti(alg: SullivanAlgebra, cutoff: int) -> CohomologyTable:
    """H^k(ΛV, d) for 0 <= k <= cutoff - 1."""
    if cutoff < 1:
        raise CutoffTooSmall("cutoff must be at least 1")
    return CohomologyTable(alg, cutoff, [_degree_data(alg, k) for k in range(cutoff)])


def find_primitive(alg: SullivanAlgebra, z: Polynomial, min_wordlength: int = 0) -> Optional[Polynomial]:
    """Some z' with d z' = z whose terms all have wordlength >= ``min_wordlength``."""
    if not z:
        return Polynomial(alg.ctx)
    if alg.d(z):
        raise NotACocycle(f"{z} is not a cocycle")
    k = z.degree()
    if k == 0:
        return None
    b = alg.cochain_basis(k - 1)
    cols = alg.d_columns(k - 1)
    keep = [j for j, m in enumerate(b) if sum(m) >= min_wordlength]
    sol = solve_sparse([cols[j] for j in keep], alg.to_vector(z, k))
    if sol is None:
        return None
    return Polynomial(alg.ctx, {b[keep[j]]: c for j, c in sol.items()})


# ---------------------------------------------------------------------------
# Toomer invariant


class Certainty(enum.Enum):
    EXACT_UP_TO_CUTOFF = "ExactUpToCutoff"
    LOWER_BOUND_ONLY = "LowerBoundOnly"


@dataclass
class ToomerVerdict:
    value: int
    certainty: Certainty
    cutoff: int
    # (degree, class representative) killed by the quotient at wordlength value-1
    witness: Optional[tuple] = None


def _truncation_kernel(alg: SullivanAlgebra, dd: DegreeData, r: int) -> Optional[list]:
    """Coordinates of a class of degree dd.degree killed by ρ_r, or None if injective."""
    k = dd.degree
    if dd.dim == 0:
        return None
    b = alg.cochain_basis(k)
    if all(sum(m) <= r for m in b):
        return None
    low = {i for i, m in enumerate(b) if sum(m) <= r}
    prev = alg.cochain_basis(k - 1)
    cols = alg.d_columns(k - 1)
    qbounds = Subspace(
        [{i: v for i, v in col.items() if i in low} for j, col in enumerate(cols) if sum(prev[j]) <= r]
    )
    images = [qbounds.reduce({i: v for i, v in rep.items() if i in low}) for rep in dd.reps.basis]
    ker = nullspace(_transpose(images), len(images))
    return ker[0] if ker else None


def toomer(alg: SullivanAlgebra, cutoff: int, check_monotone: bool = True) -> ToomerVerdict:
    """Least r with H(ρ_r) injective in degrees <= cutoff - 1."""
    if not alg.is_minimal():
        from .dga import NotMinimal

        raise NotMinimal("the Toomer invariant is defined here for minimal algebras")
    if cutoff < 2:
        raise CutoffTooSmall("cutoff must be at least 2")
    table = betti(alg, cutoff)
    degrees = [dd for dd in table.by_degree[1:] if dd.dim]
    max_wl = max((sum(m) for dd in degrees for m in alg.cochain_basis(dd.degree)), default=0)
    witness = None
    for r in range(0, max_wl + 1):
        failure = None
        for dd in degrees:
            ker = _truncation_kernel(alg, dd, r)
            if ker is not None:
                failure = (dd, ker)
                break
        if failure is None:
            if check_monotone and r + 1 <= max_wl:
                for dd in degrees:
                    assert _truncation_kernel(alg, dd, r + 1) is None, "Toomer monotonicity violated"
            return ToomerVerdict(r, Certainty.EXACT_UP_TO_CUTOFF, cutoff, witness)
        dd, ker = failure
        rep = {}
        for idx, c in ker.items():
            for i, v in dd.reps.basis[idx].items():
                rep[i] = rep.get(i, 0) + c * v
        witness = (dd.degree, alg.from_vector({i: v for i, v in rep.items() if v}, dd.degree))
    return ToomerVerdict(max_wl, Certainty.EXACT_UP_TO_CUTOFF, cutoff, witness)


# ---------------------------------------------------------------------------
# induced maps


@dataclass
class InducedMap:
    cutoff: int
    matrices: dict  # degree -> RatMatrix (target dim x source dim)
    injective_in: dict
    surjective_in: dict

    @property
    def injective(self) -> bool:
        return all(self.injective_in.values())

    @property
    def surjective(self) -> bool:
        return all(self.surjective_in.values())


def induced_on_H(phi, cutoff: int, source_table: Optional[CohomologyTable] = None,
                 target_table: Optional[CohomologyTable] = None) -> InducedMap:
    src = source_table or betti(phi.source, cutoff)
    tgt = target_table or betti(phi.target, cutoff)
    if src.cutoff != cutoff or tgt.cutoff != cutoff:
        raise CutoffMismatch(f"tables computed to cutoffs {src.cutoff}/{tgt.cutoff}, asked for {cutoff}")
    mats, inj, sur = {}, {}, {}
    for k in range(cutoff):
        reps = src.representatives(k)
        cols = [tgt.class_coordinates(phi.apply(z), k) for z in reps]
        m = RatMatrix.from_rows([[c[i] for c in cols] for i in range(tgt.dims[k])], len(reps))
        from .linalg import rref

        rank = rref(m)[2]
        mats[k] = m
        inj[k] = rank == len(reps)
        sur[k] = rank == tgt.dims[k]
    return InducedMap(cutoff, mats, inj, sur)


# ---------------------------------------------------------------------------
# cup length


def cup_length_evidence(alg: SullivanAlgebra, cutoff: int, kmax: int = 4) -> int:
    """Largest k <= kmax with a nonzero k-fold product of positive-degree classes.

    Products landing in degrees >= cutoff are not visible and are ignored.
    """
    if kmax > 4:
        raise ValueError("kmax is capped at 4")
    table = betti(alg, cutoff)
    top = table.max_degree()
    gens = [(k, z) for k in range(1, top + 1) for z in table.representatives(k)]
    if not gens:
        return 0
    # spanning set of k-fold products, kept as a basis of classes per degree
    layer = {}
    for k, z in gens:
        layer.setdefault(k, []).append(z)
    length = 1
    while length < kmax:
        nxt: dict = {}
        for k, zs in layer.items():
            for z in zs:
                for k2, g in gens:
                    if k + k2 > top:
                        continue
                    p = z * g
                    if p and any(table.class_coordinates(p, k + k2)):
                        nxt.setdefault(k + k2, []).append(p)
        if not nxt:
            break
        # thin each degree to independent classes
        for k in nxt:
            seen = Subspace()
            keep = []
            for p in nxt[k]:
                c = {i: v for i, v in enumerate(table.class_coordinates(p, k)) if v}
                if c not in seen:
                    keep.append(p)
                    seen = Subspace(seen.basis + [c])
            nxt[k] = keep
        layer = nxt
        length += 1
    return length

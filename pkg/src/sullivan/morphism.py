"""Morphisms of Sullivan algebras."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Optional

from .algebra import Polynomial
from .dga import SullivanAlgebra, quadratic_part
from .linalg import RatMatrix, rref, solve_sparse

__all__ = [
    "DgaMorphism",
    "MorphismReport",
    "NotInvertible",
    "SeedInvalid",
    "compose",
    "extend_degreewise",
    "identity",
    "inverse",
    "linear_part",
    "parametrized_iso_search",
    "quadratic_model_map",
    "validate_morphism",
]


class SeedInvalid(ValueError):
    pass


class NotInvertible(ValueError):
    pass


@dataclass(frozen=True)
class DgaMorphism:
    source: SullivanAlgebra
    target: SullivanAlgebra
    assignment: tuple  # Polynomial in target, one per source generator
    _cache: dict = field(default_factory=dict, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        a = tuple(self.assignment)
        if len(a) != len(self.source.ctx):
            raise ValueError("one image per source generator is required")
        for p in a:
            if p.ctx != self.target.ctx:
                raise ValueError("images must live in the target context")
        object.__setattr__(self, "assignment", a)

    @classmethod
    def from_partial(cls, source, target, images: Mapping) -> "DgaMorphism":
        """Images given by name (Polynomial or DSL string).

        Unlisted generators go to the target generator of the same name and
        degree; anything else is an error.
        """
        out = []
        for name, deg in source.ctx.pairs():
            v = images.get(name)
            if v is None:
                if name in target.ctx._index and target.ctx.degree_of(name) == deg:
                    v = target.gen(name)
                else:
                    raise ValueError(f"no image given for {name}")
            elif isinstance(v, str):
                v = target.poly(v)
            out.append(v)
        return cls(source, target, tuple(out))

    def image(self, name) -> Polynomial:
        i = self.source.ctx.index(name) if isinstance(name, str) else name
        return self.assignment[i]

    def apply_mono(self, m) -> Polynomial:
        cache = self._cache.setdefault("mono", {})
        hit = cache.get(m)
        if hit is not None:
            return hit
        out = Polynomial.const(self.target.ctx)
        for i, e in enumerate(m):
            for _ in range(e):
                out = out * self.assignment[i]
        cache[m] = out
        return out

    def apply(self, p: Polynomial) -> Polynomial:
        if p.ctx != self.source.ctx:
            raise ValueError("polynomial is not in the source context")
        out: dict = {}
        for m, c in p.terms.items():
            for m2, c2 in self.apply_mono(m).terms.items():
                nv = out.get(m2, 0) + c * c2
                if nv:
                    out[m2] = nv
                else:
                    out.pop(m2, None)
        return Polynomial(self.target.ctx, out)

    __call__ = apply

    def __str__(self):
        return "; ".join(f"{n} ↦ {p}" for n, p in zip(self.source.names, self.assignment))


def identity(alg: SullivanAlgebra) -> DgaMorphism:
    return DgaMorphism(alg, alg, tuple(alg.gen(n) for n in alg.names))


def compose(phi: DgaMorphism, psi: DgaMorphism) -> DgaMorphism:
    """phi ∘ psi."""
    if psi.target.ctx != phi.source.ctx:
        raise ValueError("morphisms are not composable")
    return DgaMorphism(psi.source, phi.target, tuple(phi.apply(p) for p in psi.assignment))


@dataclass
class MorphismReport:
    cutoff: int
    degree_ok: bool
    commutes: bool
    witnesses: list  # (generator, φ(dg) - d(φg))

    @property
    def ok(self) -> bool:
        return self.degree_ok and self.commutes


def validate_morphism(phi: DgaMorphism, cutoff: Optional[int] = None) -> MorphismReport:
    src, tgt = phi.source, phi.target
    if cutoff is None:
        cutoff = src.ctx.max_degree() + 1
    degree_ok = True
    witnesses = []
    for (name, deg), img in zip(src.ctx.pairs(), phi.assignment):
        if img and img.degrees() != {deg}:
            degree_ok = False
            witnesses.append((name, img))
    commutes = True
    for (name, deg), img, dg in zip(src.ctx.pairs(), phi.assignment, src.diff):
        if deg >= cutoff:
            continue
        defect = phi.apply(dg) - tgt.d(img)
        if defect:
            commutes = False
            witnesses.append((name, defect))
    return MorphismReport(cutoff, degree_ok, commutes, witnesses)


def linear_part(phi: DgaMorphism) -> dict:
    """Qφ as {degree: RatMatrix}; columns are source generators, rows target generators."""
    src, tgt = phi.source.ctx, phi.target.ctx
    out = {}
    for k in sorted(set(src.degrees) | set(tgt.degrees)):
        s = [i for i, d in enumerate(src.degrees) if d == k]
        t = [i for i, d in enumerate(tgt.degrees) if d == k]
        rows = []
        for ti in t:
            g = tgt.generator_mono(ti)
            rows.append([phi.assignment[si].coefficient(g) for si in s])
        out[k] = RatMatrix.from_rows(rows, len(s)) if rows else RatMatrix(0, len(s), ())
    return out


def linear_assignment(phi: DgaMorphism) -> tuple:
    return tuple(p.wordlength_part(1) for p in phi.assignment)


def quadratic_model_map(phi: DgaMorphism) -> DgaMorphism:
    """ΛQφ between the quadratic parts of source and target."""
    qs, qt = quadratic_part(phi.source), quadratic_part(phi.target)
    return DgaMorphism(qs, qt, tuple(Polynomial(qt.ctx, p.terms) for p in linear_assignment(phi)))


def _order(alg: SullivanAlgebra) -> list:
    return sorted(range(len(alg.ctx)), key=lambda i: (alg.ctx.degrees[i], i))


def extend_degreewise(source: SullivanAlgebra, target: SullivanAlgebra, seed: Mapping,
                      cutoff: Optional[int] = None) -> Optional[DgaMorphism]:
    """Extend a partial assignment to a DGA morphism, generator by generator.

    Generators are handled in ascending degree.  For an unassigned g the
    condition d φ(g) = φ(d g) is linear in the coefficients of φ(g), since
    d g only involves generators already assigned; the canonical solution
    (free coefficients zero) is taken.  Returns ``None`` when some condition
    has no solution.  Generators of degree > cutoff are left at 0.
    """
    if cutoff is None:
        cutoff = source.ctx.max_degree()
    sctx, tctx = source.ctx, target.ctx
    images: list = [None] * len(sctx)
    for name, v in seed.items():
        i = sctx.index(name)
        images[i] = target.poly(v) if isinstance(v, str) else v
    for i in _order(source):
        deg = sctx.degrees[i]
        if deg > cutoff:
            if images[i] is None:
                images[i] = Polynomial(tctx)
            continue
        partial = DgaMorphism(source, target, tuple(p if p is not None else Polynomial(tctx) for p in images))
        rhs = partial.apply(source.diff[i])
        if images[i] is not None:
            if images[i] and images[i].degrees() != {deg}:
                raise SeedInvalid(f"seed image of {sctx.names[i]} has the wrong degree")
            if target.d(images[i]) - rhs:
                raise SeedInvalid(f"seed does not commute with d on {sctx.names[i]}")
            continue
        b = target.cochain_basis(deg)
        sol = solve_sparse(target.d_columns(deg), target.to_vector(rhs, deg + 1))
        if sol is None:
            return None
        images[i] = Polynomial(tctx, {b[j]: c for j, c in sol.items()})
    return DgaMorphism(source, target, tuple(images))


def inverse(phi: DgaMorphism) -> DgaMorphism:
    """Inverse of an isomorphism of free algebras, built degree by degree.

    Writing φ(g) = Σ L[h, g] h + D_g with D_g decomposable, the inverse ψ
    satisfies Σ L[h, g] ψ(h) = g − ψ(D_g), and ψ(D_g) only needs ψ on lower
    degrees.
    """
    src, tgt = phi.source, phi.target
    sctx, tctx = src.ctx, tgt.ctx
    lin = linear_part(phi)
    images: list = [None] * len(tctx)
    for k in sorted(set(tctx.degrees)):
        s = [i for i, d in enumerate(sctx.degrees) if d == k]
        t = [i for i, d in enumerate(tctx.degrees) if d == k]
        m = lin[k]
        if len(s) != len(t):
            raise NotInvertible(f"linear part is not square in degree {k}")
        partial = DgaMorphism(tgt, src, tuple(p if p is not None else Polynomial(sctx) for p in images))
        rhs = []
        for si in s:
            dec = phi.assignment[si].wordlength_at_least(2)
            rhs.append(src.gen(si) - partial.apply(dec))
        if rref(m)[2] != len(s):
            raise NotInvertible(f"linear part is singular in degree {k}")
        lcols = [{b: m.entries[b][a] for b in range(len(t)) if m.entries[b][a]} for a in range(len(s))]
        for b in range(len(t)):
            # row b of (L^T)^{-1}: Σ_a x_a L[:, a] = e_b
            x = solve_sparse(lcols, {b: Fraction(1)})
            out = Polynomial(sctx)
            for a, c in x.items():
                out = out + rhs[a].scale(c)
            images[t[b]] = out
    return DgaMorphism(tgt, src, tuple(images))


def parametrized_iso_search(source, target, cutoff=None, split_depth: int = 4):
    """See :func:`sullivan.isosearch.parametrized_iso_search`."""
    from .isosearch import parametrized_iso_search as search

    return search(source, target, cutoff, split_depth)

"""Sullivan algebras (ΛV, d) with the differential stored on generators."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Optional, Sequence

from .algebra import GradedContext, Polynomial, basis

__all__ = [
    "NotMinimal",
    "SullivanAlgebra",
    "ValidationReport",
    "apply_d",
    "quadratic_part",
    "sphere_model",
    "tensor",
    "validate",
    "wordlength_part",
]


class NotMinimal(ValueError):
    """The differential has a linear (or constant) part."""


@dataclass(frozen=True)
class SullivanAlgebra:
    ctx: GradedContext
    diff: tuple  # Polynomial per generator, in context order
    # degrees of the spheres when built as a wedge-of-spheres model
    wedge_spheres: Optional[tuple] = field(default=None, compare=False)
    _cache: dict = field(default_factory=dict, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        diff = tuple(self.diff)
        if len(diff) != len(self.ctx):
            raise ValueError("one differential value per generator is required")
        for p in diff:
            if p.ctx != self.ctx:
                raise ValueError("differential values must live in the algebra's context")
        object.__setattr__(self, "diff", diff)

    @classmethod
    def build(cls, gens: Sequence, d: Optional[Mapping] = None, **kw) -> "SullivanAlgebra":
        """Convenience constructor; ``d`` maps names to Polynomials or DSL strings."""
        from .dsl import parse_polynomial

        ctx = GradedContext.of(*gens)
        vals = []
        for name in ctx.names:
            v = (d or {}).get(name, 0)
            if isinstance(v, str):
                v = parse_polynomial(v, ctx)
            elif not isinstance(v, Polynomial):
                v = Polynomial(ctx) if v == 0 else Polynomial.const(ctx, v)
            vals.append(v)
        return cls(ctx, tuple(vals), **kw)

    def __hash__(self):
        return hash((self.ctx, self.diff))

    # element access ---------------------------------------------------------
    @property
    def names(self):
        return self.ctx.names

    def gen(self, name) -> Polynomial:
        return Polynomial.gen(self.ctx, name)

    def poly(self, text: str) -> Polynomial:
        from .dsl import parse_polynomial

        return parse_polynomial(text, self.ctx)

    def d_of(self, name) -> Polynomial:
        i = self.ctx.index(name) if isinstance(name, str) else name
        return self.diff[i]

    def diff_map(self) -> dict:
        return dict(zip(self.ctx.names, self.diff))

    # differential -------------------------------------------------------------
    def d_mono(self, m) -> Polynomial:
        cache = self._cache.setdefault("dmono", {})
        hit = cache.get(m)
        if hit is not None:
            return hit
        ctx = self.ctx
        if not any(m):
            out = Polynomial(ctx)
        else:
            i = next(k for k, e in enumerate(m) if e)
            rest = list(m)
            rest[i] -= 1
            rest = tuple(rest)
            g = ctx.generator_mono(i)
            # m = g * rest with no sign: g is the first factor in normal order
            out = self.diff[i] * Polynomial(ctx, {rest: Fraction(1)})
            tail = self.d_mono(rest)
            if tail:
                t = Polynomial(ctx, {g: Fraction(-1 if ctx.degrees[i] % 2 else 1)}) * tail
                out = out + t
        cache[m] = out
        return out

    def d(self, p: Polynomial) -> Polynomial:
        out: dict = {}
        for m, c in p.terms.items():
            for m2, c2 in self.d_mono(m).terms.items():
                nv = out.get(m2, 0) + c * c2
                if nv:
                    out[m2] = nv
                else:
                    out.pop(m2, None)
        return Polynomial(self.ctx, out)

    # cochains -----------------------------------------------------------------
    def cochain_basis(self, k: int) -> list:
        cache = self._cache.setdefault("basis", {})
        if k not in cache:
            cache[k] = basis(self.ctx, k)
        return cache[k]

    def cochain_index(self, k: int) -> dict:
        cache = self._cache.setdefault("index", {})
        if k not in cache:
            cache[k] = {m: i for i, m in enumerate(self.cochain_basis(k))}
        return cache[k]

    def to_vector(self, p: Polynomial, k: int) -> dict:
        idx = self.cochain_index(k)
        out = {}
        for m, c in p.terms.items():
            if self.ctx.mono_degree(m) != k:
                raise ValueError(f"term of degree {self.ctx.mono_degree(m)} in a degree-{k} vector")
            out[idx[m]] = c
        return out

    def from_vector(self, v: dict, k: int) -> Polynomial:
        b = self.cochain_basis(k)
        return Polynomial(self.ctx, {b[i]: c for i, c in v.items()})

    def d_columns(self, k: int) -> list:
        """Sparse vectors in C^{k+1} of ``d(m)`` for each basis monomial of C^k."""
        cache = self._cache.setdefault("dcols", {})
        if k not in cache:
            cache[k] = [self.to_vector(self.d_mono(m), k + 1) for m in self.cochain_basis(k)]
        return cache[k]

    # structure flags ----------------------------------------------------------
    def is_minimal(self) -> bool:
        return all((p.min_wordlength() or 2) >= 2 for p in self.diff)

    def is_purely_quadratic(self) -> bool:
        return all(p.wordlengths() <= {2} for p in self.diff)

    def __str__(self):
        gens = ", ".join(f"{n}_{d}" for n, d in self.ctx.pairs())
        ds = ", ".join(f"d{n} = {p}" for n, p in zip(self.ctx.names, self.diff) if p)
        return f"(Λ({gens}); {ds or 'd = 0'})"


def apply_d(alg: SullivanAlgebra, p: Polynomial) -> Polynomial:
    return alg.d(p)


@dataclass
class ValidationReport:
    cutoff: int
    degree_ok: bool
    d_squared_ok: bool
    minimal: bool
    simply_connected: bool
    finite_type: bool
    counterexamples: list = field(default_factory=list)  # (generator, polynomial, reason)

    @property
    def ok(self) -> bool:
        return self.degree_ok and self.d_squared_ok and self.simply_connected and self.finite_type


def validate(alg: SullivanAlgebra, cutoff: Optional[int] = None) -> ValidationReport:
    """Check degrees, d² = 0 on generators below ``cutoff`` and minimality."""
    ctx = alg.ctx
    if cutoff is None:
        cutoff = ctx.max_degree() + 1
    bad = []
    degree_ok = True
    for name, deg, p in zip(ctx.names, ctx.degrees, alg.diff):
        if p and p.degrees() != {deg + 1}:
            degree_ok = False
            bad.append((name, p, "degree"))
    d2_ok = True
    if degree_ok:
        for name, deg, p in zip(ctx.names, ctx.degrees, alg.diff):
            if deg < cutoff:
                dd = alg.d(p)
                if dd:
                    d2_ok = False
                    bad.append((name, dd, "d^2"))
    else:
        d2_ok = False
    minimal = True
    for name, p in zip(ctx.names, alg.diff):
        low = p.wordlength_at_most(1)
        if low:
            minimal = False
            bad.append((name, low, "linear"))
    return ValidationReport(
        cutoff=cutoff,
        degree_ok=degree_ok,
        d_squared_ok=d2_ok,
        minimal=minimal,
        simply_connected=all(d >= 2 for d in ctx.degrees),
        finite_type=True,
        counterexamples=bad,
    )


def wordlength_part(alg: SullivanAlgebra, i: int) -> dict:
    """The component d_i: generator -> Λ^{i+1}V of the differential."""
    if i < 0:
        raise ValueError("wordlength index must be >= 0")
    return {n: p.wordlength_part(i + 1) for n, p in zip(alg.ctx.names, alg.diff)}


def quadratic_part(alg: SullivanAlgebra) -> SullivanAlgebra:
    if not alg.is_minimal():
        raise NotMinimal(f"{alg} has a linear part")
    return SullivanAlgebra(alg.ctx, tuple(p.wordlength_part(2) for p in alg.diff), wedge_spheres=alg.wedge_spheres)


def sphere_model(n: int, names: Optional[Sequence[str]] = None) -> SullivanAlgebra:
    """Minimal model of S^n: (Λx, 0) for n odd, (Λ(x, y), dy = x²) for n even."""
    if n < 2:
        raise ValueError("spheres of dimension >= 2 only")
    names = tuple(names or ("x", "y"))
    x = names[0]
    if n % 2:
        ctx = GradedContext((x,), (n,))
        return SullivanAlgebra(ctx, (Polynomial(ctx),))
    if len(names) < 2:
        raise ValueError("even spheres need two generator names")
    ctx = GradedContext((x, names[1]), (n, 2 * n - 1))
    return SullivanAlgebra(ctx, (Polynomial(ctx), Polynomial.gen(ctx, x) ** 2))


def _fresh(name: str, taken: set) -> str:
    k = 1
    while f"{name}_{k}" in taken:
        k += 1
    return f"{name}_{k}"


def tensor(a: SullivanAlgebra, b: SullivanAlgebra) -> SullivanAlgebra:
    """(ΛV, d) ⊗ (ΛW, d); clashing names of ``b`` get the first free ``_k`` suffix."""
    taken = set(a.ctx.names)
    bnames = []
    for n in b.ctx.names:
        if n in taken:
            n = _fresh(n, taken | set(b.ctx.names))
        taken.add(n)
        bnames.append(n)
    ctx = GradedContext(a.ctx.names + tuple(bnames), a.ctx.degrees + b.ctx.degrees)
    na = len(a.ctx)
    amap = list(range(na))
    bmap = [na + i for i in range(len(b.ctx))]
    diff = tuple(p.rename_context(ctx, amap) for p in a.diff) + tuple(p.rename_context(ctx, bmap) for p in b.diff)
    return SullivanAlgebra(ctx, diff)

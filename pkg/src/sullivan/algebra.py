"""Free graded-commutative algebras and their polynomials.

A monomial is stored as a tuple of exponents indexed by generator position,
so the normal form (factors sorted by declaration order) is the only form
that exists.  Odd generators only ever receive exponent 0 or 1: every
constructor goes through ``normalize`` or ``mono_mul``, which return sign 0
instead of building a repeated odd factor.

Coefficients are ``Fraction`` by default but any commutative ring element
supporting ``+``, ``*`` and truth-testing works; the isomorphism search uses
polynomials in symbolic parameters here.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Optional, Sequence

__all__ = [
    "GradedContext",
    "MixedContexts",
    "Monomial",
    "Polynomial",
    "basis",
    "hilbert_series",
    "mono_mul",
    "normalize",
]

Monomial = tuple  # exponents, one per generator

_IDENT = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")


class MixedContexts(ValueError):
    """Operands belong to different generator contexts."""


@dataclass(frozen=True)
class GradedContext:
    names: tuple
    degrees: tuple
    _index: dict = field(init=False, repr=False, compare=False, hash=False)
    _odd: tuple = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        names = tuple(self.names)
        degrees = tuple(int(d) for d in self.degrees)
        object.__setattr__(self, "names", names)
        object.__setattr__(self, "degrees", degrees)
        if len(names) != len(degrees):
            raise ValueError("names and degrees differ in length")
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate generator names in {names}")
        for n, d in zip(names, degrees):
            if not _IDENT.match(n):
                raise ValueError(f"bad generator name {n!r}")
            if d < 2:
                raise ValueError(f"generator {n} has degree {d}; simply connected algebras need degree >= 2")
        object.__setattr__(self, "_index", {n: i for i, n in enumerate(names)})
        object.__setattr__(self, "_odd", tuple(i for i, d in enumerate(degrees) if d % 2))

    @classmethod
    def of(cls, *pairs) -> "GradedContext":
        """``GradedContext.of(("x", 2), ("y", 3))``."""
        return cls(tuple(p[0] for p in pairs), tuple(p[1] for p in pairs))

    def __len__(self):
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"unknown generator {name!r}") from None

    def degree_of(self, name: str) -> int:
        return self.degrees[self.index(name)]

    @property
    def odd_indices(self) -> tuple:
        return self._odd

    def is_odd(self, i: int) -> bool:
        return self.degrees[i] % 2 == 1

    def unit(self) -> Monomial:
        return (0,) * len(self.names)

    def mono_degree(self, m: Monomial) -> int:
        return sum(e * d for e, d in zip(m, self.degrees))

    def generator_mono(self, i: int) -> Monomial:
        m = [0] * len(self.names)
        m[i] = 1
        return tuple(m)

    def pairs(self) -> list:
        return list(zip(self.names, self.degrees))

    def max_degree(self) -> int:
        return max(self.degrees, default=0)


def wordlength(m: Monomial) -> int:
    return sum(m)


def mono_mul(ctx: GradedContext, a: Monomial, b: Monomial) -> tuple[int, Monomial]:
    """Product of two normal-form monomials: ``(sign, monomial)``, sign 0 if it vanishes."""
    parity = 0
    seen = 0  # odd factors of ``a`` at positions greater than the current index
    for i in reversed(ctx._odd):
        if b[i]:
            if a[i]:
                return 0, ()
            parity += seen
        if a[i]:
            seen += 1
    return (-1 if parity & 1 else 1), tuple(x + y for x, y in zip(a, b))


def normalize(ctx: GradedContext, factors: Sequence) -> tuple[int, Optional[Monomial]]:
    """Sort a word of generators (names or indices) into normal form.

    Returns ``(sign, monomial)``; the sign is the Koszul sign of the sorting
    permutation and is 0 (with monomial ``None``) when an odd generator
    repeats.
    """
    idx = [ctx.index(f) if isinstance(f, str) else int(f) for f in factors]
    for i in idx:
        if not 0 <= i < len(ctx):
            raise IndexError(f"generator index {i} out of range")
    odd = [i for i in idx if ctx.is_odd(i)]
    if len(set(odd)) != len(odd):
        return 0, None
    inversions = sum(1 for p in range(len(odd)) for q in range(p + 1, len(odd)) if odd[p] > odd[q])
    m = [0] * len(ctx)
    for i in idx:
        m[i] += 1
    return (-1 if inversions & 1 else 1), tuple(m)


class Polynomial:
    """An element of the free graded-commutative algebra on ``ctx``."""

    __slots__ = ("ctx", "terms")

    def __init__(self, ctx: GradedContext, terms: Optional[Mapping] = None):
        self.ctx = ctx
        self.terms = {m: c for m, c in (terms or {}).items() if c}

    # construction --------------------------------------------------------
    @classmethod
    def zero(cls, ctx):
        return cls(ctx)

    @classmethod
    def const(cls, ctx, c=1):
        return cls(ctx, {ctx.unit(): Fraction(c)})

    @classmethod
    def gen(cls, ctx, name):
        i = ctx.index(name) if isinstance(name, str) else name
        return cls(ctx, {ctx.generator_mono(i): Fraction(1)})

    @classmethod
    def monomial(cls, ctx, m, c=1):
        return cls(ctx, {tuple(m): Fraction(c) if isinstance(c, int) else c})

    @classmethod
    def from_word(cls, ctx, factors, c=1) -> "Polynomial":
        sign, m = normalize(ctx, factors)
        if not sign:
            return cls(ctx)
        return cls(ctx, {m: sign * Fraction(c)})

    # arithmetic ----------------------------------------------------------
    def _check(self, other):
        if not isinstance(other, Polynomial):
            return False
        if other.ctx is not self.ctx and other.ctx != self.ctx:
            raise MixedContexts("polynomials live in different contexts")
        return True

    def __add__(self, other):
        if not self._check(other):
            return NotImplemented
        out = dict(self.terms)
        for m, c in other.terms.items():
            nc = out.get(m, 0) + c
            if nc:
                out[m] = nc
            else:
                out.pop(m, None)
        return Polynomial(self.ctx, out)

    def __neg__(self):
        return Polynomial(self.ctx, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        if not self._check(other):
            return NotImplemented
        return self + (-other)

    def scale(self, c):
        if not c:
            return Polynomial(self.ctx)
        return Polynomial(self.ctx, {m: c * v for m, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, Polynomial):
            self._check(other)
            ctx = self.ctx
            out: dict = {}
            for m1, c1 in self.terms.items():
                for m2, c2 in other.terms.items():
                    s, m = mono_mul(ctx, m1, m2)
                    if not s:
                        continue
                    v = c1 * c2
                    if s < 0:
                        v = -v
                    nv = out.get(m, 0) + v
                    if nv:
                        out[m] = nv
                    else:
                        out.pop(m, None)
            return Polynomial(ctx, out)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, n: int):
        out = Polynomial.const(self.ctx)
        for _ in range(n):
            out = out * self
        return out

    # inspection ----------------------------------------------------------
    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.ctx == other.ctx and self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    def __hash__(self):
        return hash((self.ctx, frozenset(self.terms.items())))

    def items(self):
        return self.terms.items()

    def coefficient(self, m) -> Fraction:
        return self.terms.get(tuple(m), Fraction(0))

    def degrees(self) -> set:
        return {self.ctx.mono_degree(m) for m in self.terms}

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def degree(self) -> Optional[int]:
        """Degree of a homogeneous polynomial; ``None`` for 0."""
        ds = self.degrees()
        if not ds:
            return None
        if len(ds) > 1:
            raise ValueError(f"polynomial {self} is not homogeneous")
        return ds.pop()

    def wordlengths(self) -> set:
        return {sum(m) for m in self.terms}

    def min_wordlength(self) -> Optional[int]:
        return min(self.wordlengths(), default=None)

    def degree_part(self, k: int) -> "Polynomial":
        return Polynomial(self.ctx, {m: c for m, c in self.terms.items() if self.ctx.mono_degree(m) == k})

    def wordlength_part(self, k: int) -> "Polynomial":
        return Polynomial(self.ctx, {m: c for m, c in self.terms.items() if sum(m) == k})

    def wordlength_at_least(self, k: int) -> "Polynomial":
        return Polynomial(self.ctx, {m: c for m, c in self.terms.items() if sum(m) >= k})

    def wordlength_at_most(self, k: int) -> "Polynomial":
        return Polynomial(self.ctx, {m: c for m, c in self.terms.items() if sum(m) <= k})

    def generators_used(self) -> set:
        return {i for m in self.terms for i, e in enumerate(m) if e}

    def rename_context(self, ctx: GradedContext, index_map: Sequence[int]) -> "Polynomial":
        """Move into ``ctx``; generator ``i`` becomes ``index_map[i]``.

        Used to embed into a larger context; the relative order of the
        generators must be preserved (no sign correction is applied).
        """
        out = {}
        n = len(ctx)
        for m, c in self.terms.items():
            nm = [0] * n
            for i, e in enumerate(m):
                if e:
                    nm[index_map[i]] = e
            out[tuple(nm)] = c
        return Polynomial(ctx, out)

    # printing ------------------------------------------------------------
    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: mono_key(t[0]))

    def __str__(self):
        return format_polynomial(self)

    def __repr__(self):
        return f"Polynomial({format_polynomial(self)})"


def mono_key(m: Monomial):
    """Sort key: wordlength, then the factor word in generator order."""
    word = tuple(i for i, e in enumerate(m) for _ in range(e))
    return (len(word), word)


def format_monomial(ctx: GradedContext, m: Monomial) -> str:
    parts = []
    for i, e in enumerate(m):
        if e == 1:
            parts.append(ctx.names[i])
        elif e > 1:
            parts.append(f"{ctx.names[i]}^{e}")
    return "*".join(parts) if parts else "1"


def _format_coeff(c) -> str:
    if isinstance(c, Fraction):
        return str(c)
    return f"({c})"


def format_polynomial(p: Polynomial) -> str:
    if not p.terms:
        return "0"
    out = []
    for m, c in p.sorted_terms():
        neg = isinstance(c, Fraction) and c < 0
        a = -c if neg else c
        mono = format_monomial(p.ctx, m)
        if mono == "1":
            body = _format_coeff(a)
        elif isinstance(a, Fraction) and a == 1:
            body = mono
        else:
            body = f"{_format_coeff(a)}*{mono}"
        if not out:
            out.append(("-" if neg else "") + body)
        else:
            out.append((" - " if neg else " + ") + body)
    return "".join(out)


def basis(ctx: GradedContext, degree: int, wordlength_min: int = 0, wordlength_max: Optional[int] = None) -> list:
    """Normal-form monomials of ``degree`` with wordlength in the given window."""
    if degree < 0:
        return []
    out = []
    n = len(ctx)
    degs = ctx.degrees
    exps = [0] * n
    # fillable[i][r]: degree r is reachable with generators i..n-1
    fillable = [[False] * (degree + 1) for _ in range(n + 1)]
    fillable[n][0] = True
    for i in range(n - 1, -1, -1):
        d, nxt, cur = degs[i], fillable[i + 1], fillable[i]
        cap = 1 if d % 2 else degree // d
        for r in range(degree + 1):
            cur[r] = any(nxt[r - e * d] for e in range(min(cap, r // d) + 1))

    def rec(i, remaining, wl):
        if wordlength_max is not None and wl > wordlength_max:
            return
        if i == n:
            if wl >= wordlength_min:
                out.append(tuple(exps))
            return
        d = degs[i]
        cap = 1 if d % 2 else remaining // d
        nxt = fillable[i + 1]
        for e in range(min(cap, remaining // d) + 1):
            if nxt[remaining - e * d]:
                exps[i] = e
                rec(i + 1, remaining - e * d, wl + e)
        exps[i] = 0

    if fillable[0][degree]:
        rec(0, degree, 0)
    out.sort(key=mono_key)
    return out


def hilbert_series(ctx: GradedContext, up_to: int) -> list:
    """Coefficients of prod(1-t^even)^-1 * prod(1+t^odd) up to ``t^up_to``."""
    coeffs = [0] * (up_to + 1)
    coeffs[0] = 1
    for d in ctx.degrees:
        if d % 2:
            for k in range(up_to, d - 1, -1):
                coeffs[k] += coeffs[k - d]
        else:
            for k in range(d, up_to + 1):
                coeffs[k] += coeffs[k - d]
    return coeffs

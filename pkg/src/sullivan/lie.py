"""Graded Lie algebras over Q and their Chevalley–Eilenberg models.

Lie degree n corresponds to a Sullivan generator of degree n + 1.  Brackets
are graded: [x, y] = -(-1)^{|x||y|} [y, x].  Free Lie algebras are built
inside the tensor algebra, where [u, v] = uv - (-1)^{|u||v|} vu, on standard
bracketings of Lyndon words together with the squares [w, w] of odd Lyndon
words.

CE convention: for basis x_i with structure constants [x_i, x_j] = Σ c^k_ij x_k,

    d v_k = -1/2 Σ_{i,j} (-1)^{|x_i|} c^k_ij v_i v_j

where the sum runs over all ordered pairs.  d² = 0 holds exactly when the
Jacobi identity does.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Optional, Sequence

from .algebra import GradedContext, Polynomial
from .dga import SullivanAlgebra
from .linalg import solve_sparse

__all__ = [
    "GradedLieAlgebra",
    "LieInvalid",
    "LieReport",
    "NotQuadratic",
    "ce_quadratic_model",
    "free_lie",
    "free_lie_dims",
    "lyndon_words",
    "quadratic_dual",
    "validate_lie",
    "wedge_of_spheres_model",
]


class LieInvalid(ValueError):
    pass


class NotQuadratic(ValueError):
    pass


def _sign(a: int, b: int) -> int:
    return -1 if (a % 2 and b % 2) else 1


def _add(out: dict, vec: Mapping, c=1):
    for k, v in vec.items():
        nv = out.get(k, 0) + c * v
        if nv:
            out[k] = nv
        else:
            out.pop(k, None)


@dataclass(frozen=True)
class GradedLieAlgebra:
    basis: tuple  # ((name, degree), ...)
    brackets: Mapping = field(default_factory=dict)  # (i, j) with i <= j -> {k: Fraction}

    def __post_init__(self):
        object.__setattr__(self, "basis", tuple((str(n), int(d)) for n, d in self.basis))
        clean = {}
        for (i, j), vec in dict(self.brackets).items():
            if i > j:
                raise ValueError("brackets are stored for i <= j")
            vec = {k: Fraction(c) for k, c in vec.items() if c}
            if vec:
                clean[(i, j)] = vec
        object.__setattr__(self, "brackets", clean)

    @classmethod
    def from_brackets(cls, gens: Sequence, brackets: Mapping) -> "GradedLieAlgebra":
        """Brackets keyed by name pairs; values map names to coefficients."""
        names = [n for n, _ in gens]
        degs = [d for _, d in gens]
        index = {n: i for i, n in enumerate(names)}
        out: dict = {}
        for (x, y), val in brackets.items():
            i, j = index[x], index[y]
            vec = {index[z]: Fraction(c) for z, c in val.items()}
            if i > j:
                i, j = j, i
                s = -_sign(degs[i], degs[j])
                vec = {k: s * c for k, c in vec.items()}
            _add(out.setdefault((i, j), {}), vec)
        return cls(tuple(gens), out)

    @property
    def names(self) -> tuple:
        return tuple(n for n, _ in self.basis)

    def degree(self, i: int) -> int:
        return self.basis[i][1]

    def index(self, name: str) -> int:
        return self.names.index(name)

    def __len__(self):
        return len(self.basis)

    def dims(self, up_to: int) -> list:
        out = [0] * (up_to + 1)
        for _, d in self.basis:
            if d <= up_to:
                out[d] += 1
        return out

    def bracket_basis(self, i: int, j: int) -> dict:
        if i <= j:
            return dict(self.brackets.get((i, j), {}))
        s = -_sign(self.degree(i), self.degree(j))
        return {k: s * c for k, c in self.brackets.get((j, i), {}).items()}

    def bracket(self, u: Mapping, v: Mapping) -> dict:
        out: dict = {}
        for i, a in u.items():
            for j, b in v.items():
                _add(out, self.bracket_basis(i, j), a * b)
        return out


@dataclass
class LieReport:
    ok: bool
    failures: list  # (kind, detail)


def validate_lie(l: GradedLieAlgebra) -> LieReport:
    failures = []
    n = len(l)
    for (i, j), vec in l.brackets.items():
        for k in vec:
            if l.degree(k) != l.degree(i) + l.degree(j):
                failures.append(("degree", (l.names[i], l.names[j], l.names[k])))
        if i == j and l.degree(i) % 2 == 0:
            failures.append(("antisymmetry", (l.names[i], l.names[i])))
    top = max((d for _, d in l.basis), default=0)
    for a in range(n):
        for b in range(a, n):
            for c in range(b, n):
                da, db, dc = l.degree(a), l.degree(b), l.degree(c)
                if da + db + dc > top:
                    continue
                x, y, z = {a: 1}, {b: 1}, {c: 1}
                total: dict = {}
                _add(total, l.bracket(x, l.bracket(y, z)), _sign(da, dc))
                _add(total, l.bracket(y, l.bracket(z, x)), _sign(db, da))
                _add(total, l.bracket(z, l.bracket(x, y)), _sign(dc, db))
                if total:
                    failures.append(("jacobi", (l.names[a], l.names[b], l.names[c])))
    return LieReport(not failures, failures)


# ---------------------------------------------------------------------------
# free Lie algebras


def lyndon_words(k: int, max_len: int):
    """Lyndon words over range(k) of length <= max_len (Duval's algorithm)."""
    w = [-1]
    while w:
        w[-1] += 1
        yield tuple(w)
        m = len(w)
        while len(w) < max_len:
            w.append(w[len(w) - m])
        while w and w[-1] == k - 1:
            w.pop()


def _standard_split(w: tuple, lyndon: set) -> tuple:
    for i in range(1, len(w)):
        if w[i:] in lyndon:
            return w[:i], w[i:]
    raise AssertionError("no standard factorization")


def _tmul(a: dict, b: dict) -> dict:
    out: dict = {}
    for u, x in a.items():
        for v, y in b.items():
            k = u + v
            nv = out.get(k, 0) + x * y
            if nv:
                out[k] = nv
            else:
                out.pop(k, None)
    return out


def _tbracket(a: dict, da: int, b: dict, db: int) -> dict:
    out = _tmul(a, b)
    _add(out, _tmul(b, a), -_sign(da, db))
    return out


def free_lie(gens: Sequence, cutoff: int) -> GradedLieAlgebra:
    """Free graded Lie algebra on ``gens`` truncated to degrees <= cutoff."""
    names = [n for n, _ in gens]
    degs = [int(d) for _, d in gens]
    if any(d < 1 for d in degs):
        raise ValueError("Lie generators need degree >= 1")
    if not gens:
        return GradedLieAlgebra(())
    max_len = cutoff // min(degs)

    def wdeg(w):
        return sum(degs[c] for c in w)

    words = [w for w in lyndon_words(len(gens), max_len) if wdeg(w) <= cutoff]
    lyndon = set(words)
    expansion: dict = {}

    def expand(w):
        if w not in expansion:
            if len(w) == 1:
                expansion[w] = {w: Fraction(1)}
            else:
                u, v = _standard_split(w, lyndon)
                expansion[w] = _tbracket(expand(u), wdeg(u), expand(v), wdeg(v))
        return expansion[w]

    elems = []  # (label word, degree, tensor expansion)
    for w in words:
        elems.append((w, wdeg(w), expand(w)))
        if wdeg(w) % 2 and 2 * wdeg(w) <= cutoff:
            elems.append((w + w, 2 * wdeg(w), _tbracket(expand(w), wdeg(w), expand(w), wdeg(w))))
    elems.sort(key=lambda e: (e[1], len(e[0]), e[0]))
    basis = tuple(("_".join(names[c] for c in w), d) for w, d, _ in elems)

    by_degree: dict = {}
    for idx, (_, d, _) in enumerate(elems):
        by_degree.setdefault(d, []).append(idx)
    columns: dict = {}
    for d, idxs in by_degree.items():
        cols = []
        for idx in idxs:
            cols.append(dict(elems[idx][2]))
        columns[d] = cols

    brackets = {}
    for i, (_, di, ei) in enumerate(elems):
        for j in range(i, len(elems)):
            _, dj, ej = elems[j]
            if di + dj > cutoff:
                continue
            t = _tbracket(ei, di, ej, dj)
            if not t:
                continue
            sol = solve_sparse(columns[di + dj], t)
            if sol is None:
                raise AssertionError("bracket left the span of the basis")
            brackets[(i, j)] = {by_degree[di + dj][k]: c for k, c in sol.items()}
    return GradedLieAlgebra(basis, brackets)


def free_lie_dims(degs: Sequence, cutoff: int) -> list:
    """Dimensions of the free graded Lie algebra from T(V) = U(L) (PBW).

    Returns a list indexed by degree 0..cutoff.
    """
    t = [0] * (cutoff + 1)  # Hilbert series of the tensor algebra
    t[0] = 1
    for n in range(1, cutoff + 1):
        t[n] = sum(t[n - d] for d in degs if d <= n)
    dims = [0] * (cutoff + 1)
    # divide t by ∏_{n odd}(1 + q^n)^{l_n} ∏_{n even}(1 - q^n)^{-l_n} progressively
    cur = [1] + [0] * cutoff
    for n in range(1, cutoff + 1):
        dims[n] = t[n] - cur[n]
        for _ in range(dims[n]):
            if n % 2:
                cur = [cur[k] + (cur[k - n] if k >= n else 0) for k in range(cutoff + 1)]
            else:
                nxt = list(cur)
                for k in range(n, cutoff + 1):
                    nxt[k] += nxt[k - n]
                cur = nxt
    return dims


# ---------------------------------------------------------------------------
# Chevalley–Eilenberg models


def ce_quadratic_model(l: GradedLieAlgebra, cutoff: int) -> SullivanAlgebra:
    rep = validate_lie(l)
    if not rep.ok:
        raise LieInvalid(f"not a graded Lie algebra: {rep.failures[0]}")
    keep = [i for i, (_, d) in enumerate(l.basis) if d <= cutoff - 1]
    pos = {i: p for p, i in enumerate(keep)}
    ctx = GradedContext(tuple(l.names[i] for i in keep), tuple(l.degree(i) + 1 for i in keep))
    diff = [Polynomial(ctx) for _ in keep]
    gens = [Polynomial.gen(ctx, n) for n in ctx.names]
    for (i, j), vec in l.brackets.items():
        if i not in pos or j not in pos:
            continue
        s = -1 if l.degree(i) % 2 else 1
        # ordered pairs (i, j) and (j, i) give the same product after normal ordering
        prod = gens[pos[i]] * gens[pos[j]]
        if not prod:
            continue
        for k, c in vec.items():
            if k in pos:
                w = Fraction(-s) * c if i != j else Fraction(-s, 2) * c
                diff[pos[k]] = diff[pos[k]] + prod.scale(w)
    return SullivanAlgebra(ctx, tuple(diff))


def quadratic_dual(alg: SullivanAlgebra) -> GradedLieAlgebra:
    """Inverse of ce_quadratic_model on purely quadratic minimal algebras."""
    if not alg.is_minimal() or not alg.is_purely_quadratic():
        raise NotQuadratic("quadratic_dual needs a purely quadratic minimal algebra")
    ctx = alg.ctx
    basis = tuple((n, d - 1) for n, d in ctx.pairs())
    brackets: dict = {}
    for k, dk in enumerate(alg.diff):
        for m, c in dk.terms.items():
            idx = [i for i, e in enumerate(m) for _ in range(e)]
            i, j = idx
            s = -1 if basis[i][1] % 2 else 1
            coef = -s * c if i != j else -2 * s * c
            brackets.setdefault((i, j), {})[k] = Fraction(coef)
    return GradedLieAlgebra(basis, brackets)


def wedge_of_spheres_model(spheres: Sequence, cutoff: int, names: Optional[Sequence] = None) -> SullivanAlgebra:
    """Quadratic model of a wedge of spheres, valid in degrees < cutoff.

    Sphere S^n contributes a free Lie generator of degree n - 1.
    """
    if any(n < 2 for n in spheres):
        raise ValueError("spheres must be simply connected")
    if names is None:
        names = [chr(ord("a") + i) for i in range(len(spheres))]
    l = free_lie([(nm, n - 1) for nm, n in zip(names, spheres)], cutoff - 1)
    alg = ce_quadratic_model(l, cutoff)
    return SullivanAlgebra(alg.ctx, alg.diff, wedge_spheres=tuple(spheres))

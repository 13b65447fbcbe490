"""Search for isomorphisms between minimal Sullivan algebras.

Every coefficient of φ(g) (linear part and decomposable part) becomes a
symbolic parameter.  Commutation φ(dg) = dφ(g) gives polynomial equations in
the parameters, invertibility of the linear part gives side conditions
det_k ≠ 0.  The solver eliminates parameters that occur linearly with a
constant coefficient, forces zeros from monomial equations, and otherwise
splits a monomial equation into p = 0 / p ≠ 0.  Each branch is recorded so a
negative answer can be replayed independently.
"""

from __future__ import annotations

import random
from fractions import Fraction
from collections import Counter
from dataclasses import dataclass, field
from typing import Optional

from .algebra import Polynomial, basis, format_monomial
from .dga import NotMinimal, SullivanAlgebra
from .linalg import rref
from .morphism import DgaMorphism, linear_part, validate_morphism
from .params import ParamPoly

__all__ = [
    "Branch",
    "CensusMismatch",
    "ReplayFailure",
    "SearchTrace",
    "SearchVerdict",
    "parametrized_iso_search",
    "replay",
]


class CensusMismatch(ValueError):
    pass


class ReplayFailure(AssertionError):
    pass


@dataclass
class Branch:
    assumptions: list = field(default_factory=list)  # (param name, "zero" | "nonzero")
    steps: list = field(default_factory=list)
    outcome: str = "open"  # contradiction | solution | open
    contradiction: Optional[tuple] = None  # (label, reduced constraint, reason)
    note: str = ""


@dataclass
class SearchTrace:
    params: tuple
    branches: list = field(default_factory=list)
    census: Optional[str] = None


@dataclass
class SearchVerdict:
    kind: str  # IsoFound | NoIsoExists | Inconclusive
    iso: Optional[DgaMorphism] = None
    trace: Optional[SearchTrace] = None
    reason: str = ""

    @property
    def found(self) -> bool:
        return self.kind == "IsoFound"


# ---------------------------------------------------------------------------
# the constraint system


@dataclass
class _System:
    names: tuple
    templates: list  # per source generator: list of (param, target monomial), or None above cutoff
    equations: list  # (label, ParamPoly) = 0
    conditions: list  # (label, ParamPoly) != 0


def _census(alg: SullivanAlgebra, cutoff: int) -> Counter:
    return Counter(d for d in alg.ctx.degrees if d <= cutoff)


def _determinant(m: list) -> ParamPoly:
    n = len(m)
    if n == 0:
        return ParamPoly.const(1)
    if n == 1:
        return m[0][0]
    out = ParamPoly()
    for j in range(n):
        if not m[0][j]:
            continue
        minor = [row[:j] + row[j + 1:] for row in m[1:]]
        term = m[0][j] * _determinant(minor)
        out = out + term if j % 2 == 0 else out - term
    return out


def _build_system(source: SullivanAlgebra, target: SullivanAlgebra, cutoff: int) -> _System:
    sctx, tctx = source.ctx, target.ctx
    names: list = []
    templates: list = []
    images = []
    for i, (g, deg) in enumerate(sctx.pairs()):
        if deg > cutoff:
            templates.append(None)
            images.append(Polynomial(tctx))
            continue
        tmpl = []
        terms = {}
        for m in basis(tctx, deg, wordlength_min=1):
            p = len(names)
            names.append(f"{g}[{format_monomial(tctx, m)}]")
            tmpl.append((p, m))
            terms[m] = ParamPoly.var(p)
        templates.append(tmpl)
        images.append(Polynomial(tctx, terms))
    phi = DgaMorphism(source, target, tuple(images))

    equations = []
    order = sorted(range(len(sctx)), key=lambda i: (sctx.degrees[i], i))
    for i in order:
        if templates[i] is None:
            continue
        defect = target.d(images[i]) - phi.apply(source.diff[i])
        for m, c in sorted(defect.terms.items(), key=lambda t: t[0]):
            equations.append((f"d{sctx.names[i]} @ {format_monomial(tctx, m)}", c))

    conditions = []
    for k in sorted(set(d for d in sctx.degrees if d <= cutoff)):
        src = [i for i in order if sctx.degrees[i] == k]
        tgt = [j for j, d in enumerate(tctx.degrees) if d == k]
        block = []
        for j in tgt:
            gm = tctx.generator_mono(j)
            block.append([images[i].terms.get(gm, ParamPoly()) for i in src])
        conditions.append((f"det{k}", _determinant(block)))
    return _System(tuple(names), templates, equations, conditions)


# ---------------------------------------------------------------------------
# branch solving


class _State:
    def __init__(self, system: _System):
        self.sub: dict = {}
        self.nonzero: set = set()
        self.equations = list(system.equations)
        self.conditions = list(system.conditions)

    def copy(self) -> "_State":
        s = _State.__new__(_State)
        s.sub = dict(self.sub)
        s.nonzero = set(self.nonzero)
        s.equations = list(self.equations)
        s.conditions = list(self.conditions)
        return s

    def assign(self, p: int, e: ParamPoly):
        for q in self.sub:
            self.sub[q] = self.sub[q].substitute({p: e})
        self.sub[p] = e
        if p in self.nonzero:
            self.nonzero.discard(p)
            self.conditions.append((f"{p}!=0", e))

    def reduce(self):
        self.equations = [(lab, e.substitute(self.sub)) for lab, e in self.equations]
        self.equations = [(lab, e) for lab, e in self.equations if e]
        self.conditions = [(lab, c.substitute(self.sub)) for lab, c in self.conditions]


def _contradiction(state: _State) -> Optional[tuple]:
    for lab, e in state.equations:
        if e.is_constant():
            return lab, e, "nonzero constant"
        if e.is_monomial() and e.variables() <= state.nonzero:
            return lab, e, "monomial in invertible parameters"
    for lab, c in state.conditions:
        if not c:
            return lab, c, "side condition vanishes"
    return None


def _simplify(state: _State, branch: Branch, names: tuple) -> bool:
    """Propagate until stable; False on contradiction."""
    while True:
        state.reduce()
        bad = _contradiction(state)
        if bad is not None:
            lab, e, why = bad
            branch.outcome = "contradiction"
            branch.contradiction = (lab, e.format(names), why)
            return False
        progress = False
        for lab, c in state.conditions:
            if c.is_monomial():
                new = c.variables() - state.nonzero
                for p in sorted(new):
                    state.nonzero.add(p)
                    branch.steps.append(("nonzero", names[p], lab))
                progress = progress or bool(new)
        if progress:
            continue
        for lab, e in state.equations:
            if e.is_monomial():
                free = sorted(e.variables() - state.nonzero)
                if len(free) == 1:
                    state.assign(free[0], ParamPoly())
                    branch.steps.append(("zero", names[free[0]], lab))
                    progress = True
                    break
        if progress:
            continue
        for lab, e in state.equations:
            for p in sorted(e.variables(), reverse=True):
                sol = e.linear_solution(p)
                if sol is not None:
                    state.assign(p, sol)
                    branch.steps.append(("eliminate", names[p], sol, lab))
                    progress = True
                    break
            if progress:
                break
        if not progress:
            return True


def _concrete(system: _System, state: _State, source, target, cutoff) -> Optional[DgaMorphism]:
    free = sorted(set(range(len(system.names))) - set(state.sub))
    candidates = [
        {p: (1 if p in state.nonzero else 0) for p in free},
        {p: 1 for p in free},
    ]
    rng = random.Random(0)
    for _ in range(24):
        candidates.append({p: rng.choice([-3, -2, -1, 1, 2, 3]) if p in state.nonzero
                           else rng.randint(-3, 3) for p in free})
    for vals in candidates:
        if any(c.evaluate(vals) == 0 for _, c in state.conditions):
            continue
        full = dict(vals)
        for p, e in state.sub.items():
            full[p] = e.evaluate(vals)
        imgs = []
        for tmpl in system.templates:
            imgs.append(Polynomial(target.ctx, {m: Fraction(full[p]) for p, m in tmpl}))
        phi = DgaMorphism(source, target, tuple(imgs))
        if not validate_morphism(phi, cutoff + 1).ok:
            continue
        if all(rref(m)[2] == m.cols == m.rows for m in linear_part(phi).values()):
            return phi
    return None


def parametrized_iso_search(source: SullivanAlgebra, target: SullivanAlgebra, cutoff: Optional[int] = None,
                            split_depth: int = 4) -> SearchVerdict:
    """Decide whether source ≅ target, within the given split budget."""
    for alg in (source, target):
        if not alg.is_minimal():
            raise NotMinimal("iso search needs minimal algebras")
    top = max(source.ctx.max_degree(), target.ctx.max_degree())
    if cutoff is None:
        cutoff = top
    cs, ct = _census(source, cutoff), _census(target, cutoff)
    if cs != ct:
        why = f"generator census differs: {dict(sorted(cs.items()))} vs {dict(sorted(ct.items()))}"
        return SearchVerdict("NoIsoExists", trace=SearchTrace((), [], census=why), reason=why)
    system = _build_system(source, target, cutoff)
    trace = SearchTrace(system.names)
    open_reasons = []
    found = None

    stack = [(_State(system), Branch(), 0)]
    while stack:
        state, branch, depth = stack.pop()
        ok = _simplify(state, branch, system.names)
        if not ok:
            trace.branches.append(branch)
            continue
        if not state.equations:
            if cutoff < top:
                branch.note = "generators above the cutoff are not covered"
                open_reasons.append(branch.note)
                trace.branches.append(branch)
                continue
            phi = _concrete(system, state, source, target, cutoff)
            if phi is not None:
                branch.outcome = "solution"
                trace.branches.append(branch)
                found = phi
                break
            branch.note = "no sampled point met the side conditions"
            open_reasons.append(branch.note)
            trace.branches.append(branch)
            continue
        split = None
        best = None
        for lab, e in state.equations:
            if e.is_monomial():
                free = sorted(e.variables() - state.nonzero)
                if best is None or len(free) < best:
                    best, split = len(free), free[0]
        if split is None:
            branch.note = "nonlinear constraints without a monomial to split on"
            open_reasons.append(branch.note)
            trace.branches.append(branch)
            continue
        if depth >= split_depth:
            branch.note = f"split depth {split_depth} exhausted"
            open_reasons.append(branch.note)
            trace.branches.append(branch)
            continue
        name = system.names[split]
        nz_state = state.copy()
        nz_branch = Branch(branch.assumptions + [(name, "nonzero")], branch.steps + [("assume", name, "nonzero")])
        nz_state.nonzero.add(split)
        z_state = state.copy()
        z_branch = Branch(branch.assumptions + [(name, "zero")], branch.steps + [("assume", name, "zero")])
        z_state.assign(split, ParamPoly())
        # p != 0 is explored first so self-maps come out as the identity
        stack.append((z_state, z_branch, depth + 1))
        stack.append((nz_state, nz_branch, depth + 1))

    if found is not None:
        return SearchVerdict("IsoFound", iso=found, trace=trace)
    if open_reasons:
        return SearchVerdict("Inconclusive", trace=trace, reason=open_reasons[0])
    return SearchVerdict("NoIsoExists", trace=trace, reason="every branch ends in a contradiction")


# ---------------------------------------------------------------------------
# replay


def replay(source: SullivanAlgebra, target: SullivanAlgebra, cutoff: int, trace: SearchTrace) -> bool:
    """Re-derive every branch of a negative trace from scratch.

    Checks that each recorded step is justified by its constraint, that each
    branch ends in the recorded contradiction and that the branch assumptions
    cover every case.  Raises ReplayFailure on the first discrepancy.
    """
    if trace.census is not None:
        if _census(source, cutoff) == _census(target, cutoff):
            raise ReplayFailure("recorded census mismatch does not reproduce")
        return True
    system = _build_system(source, target, cutoff)
    if system.names != trace.params:
        raise ReplayFailure("parameter list differs")
    index = {n: i for i, n in enumerate(system.names)}
    leaves = set()
    for br in trace.branches:
        if br.outcome != "contradiction":
            raise ReplayFailure("trace has a branch that is not a contradiction")
        state = _State(system)
        for step in br.steps:
            state.reduce()
            eqs = dict(state.equations)
            conds = dict(state.conditions)
            kind, name, lab = step[0], step[1], step[-1]
            p = index[name]
            if kind == "assume":
                if step[2] == "zero":
                    state.assign(p, ParamPoly())
                else:
                    state.nonzero.add(p)
            elif kind == "nonzero":
                c = conds.get(lab)
                if c is None or not c.is_monomial() or p not in c.variables():
                    raise ReplayFailure(f"nonzero step on {name} not justified by {lab}")
                state.nonzero.add(p)
            elif kind == "zero":
                e = eqs.get(lab)
                if e is None or not e.is_monomial() or (e.variables() - state.nonzero) != {p}:
                    raise ReplayFailure(f"zero step on {name} not justified by {lab}")
                state.assign(p, ParamPoly())
            elif kind == "eliminate":
                e = eqs.get(lab)
                expr = step[2]
                if e is None or e.linear_solution(p) != expr:
                    raise ReplayFailure(f"elimination of {name} not justified by {lab}")
                state.assign(p, expr)
            else:
                raise ReplayFailure(f"unknown step {kind}")
        state.reduce()
        lab, _, why = br.contradiction
        if why == "side condition vanishes":
            c = dict(state.conditions).get(lab)
            if c is None or c:
                raise ReplayFailure(f"condition {lab} does not vanish")
        else:
            e = dict(state.equations).get(lab)
            if e is None:
                raise ReplayFailure(f"constraint {lab} vanished on replay")
            if not (e.is_constant() or (e.is_monomial() and e.variables() <= state.nonzero)):
                raise ReplayFailure(f"constraint {lab} is not contradictory on replay")
        leaves.add(tuple(br.assumptions))
    # coverage: every split has both children below it
    def covered(prefix: tuple) -> bool:
        if prefix in leaves:
            return True
        kids = [l for l in leaves if len(l) > len(prefix) and l[: len(prefix)] == prefix]
        if not kids:
            return False
        name = kids[0][len(prefix)][0]
        return covered(prefix + ((name, "zero"),)) and covered(prefix + ((name, "nonzero"),))

    if not covered(()):
        raise ReplayFailure("branches do not cover every case")
    return True

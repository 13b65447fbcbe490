"""Relative Sullivan models (ΛV_B ⊗ ΛW, d) of fibrations F → E → B."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Optional

from .algebra import GradedContext, Polynomial
from .cohomology import CutoffTooSmall, cup_length_evidence, find_primitive, induced_on_H
from .dga import NotMinimal, SullivanAlgebra, quadratic_part, validate
from .morphism import DgaMorphism

__all__ = [
    "BaseNotQuadratic",
    "DSquaredViolation",
    "DegreeGap",
    "HypothesesNotMet",
    "KoszulVerdict",
    "NotSpherical",
    "RelativeMinimalityViolation",
    "RelativeModel",
    "RestrictionMismatch",
    "assemble",
    "check_tncz",
    "check_tnhz",
    "degree_gap_criterion",
    "limit_fibration",
    "spherical_koszul_classifier",
]


class RestrictionMismatch(ValueError):
    pass


class RelativeMinimalityViolation(ValueError):
    pass


class DSquaredViolation(ValueError):
    pass


class BaseNotQuadratic(ValueError):
    pass


class HypothesesNotMet(ValueError):
    pass


class NotSpherical(ValueError):
    pass


@dataclass(frozen=True)
class RelativeModel:
    base: SullivanAlgebra
    fiber_gens: GradedContext
    total: SullivanAlgebra  # base generators first, then fiber generators
    quotient: SullivanAlgebra  # (ΛW, d̄)
    cutoff: int

    @property
    def nbase(self) -> int:
        return len(self.base.ctx)

    @property
    def total_diff(self) -> dict:
        return self.total.diff_map()

    def projection(self) -> DgaMorphism:
        """total → quotient, killing the base generators."""
        imgs = [Polynomial(self.quotient.ctx) for _ in range(self.nbase)]
        imgs += [self.quotient.gen(n) for n in self.fiber_gens.names]
        return DgaMorphism(self.total, self.quotient, tuple(imgs))

    def inclusion(self) -> DgaMorphism:
        """base → total."""
        return DgaMorphism(self.base, self.total, tuple(self.total.gen(n) for n in self.base.names))


def _kill_base(p: Polynomial, nbase: int, qctx: GradedContext) -> Polynomial:
    terms = {}
    for m, c in p.terms.items():
        if any(m[:nbase]):
            continue
        terms[m[nbase:]] = c
    return Polynomial(qctx, terms)


def assemble(base: SullivanAlgebra, fiber_gens: GradedContext, total_diff: Mapping,
             cutoff: Optional[int] = None) -> RelativeModel:
    """Build and check the relative model with the given differentials.

    ``total_diff`` maps generator names to polynomials (or DSL text) in
    Λ(V_B ⊕ W); base entries are optional but must agree with the base.
    """
    clash = set(base.names) & set(fiber_gens.names)
    if clash:
        raise ValueError(f"fiber generators clash with base generators: {sorted(clash)}")
    ctx = GradedContext(base.ctx.names + fiber_gens.names, base.ctx.degrees + fiber_gens.degrees)
    if cutoff is None:
        cutoff = ctx.max_degree() + 1
    nb = len(base.ctx)
    from .dsl import parse_polynomial

    def value(name):
        v = total_diff.get(name)
        if v is None:
            return Polynomial(ctx)
        if isinstance(v, str):
            return parse_polynomial(v, ctx)
        if v.ctx != ctx:
            raise ValueError(f"d{name} is not in the total context")
        return v

    diff = []
    for i, name in enumerate(base.names):
        lifted = base.diff[i].rename_context(ctx, list(range(nb)))
        if name in total_diff and value(name) != lifted:
            raise RestrictionMismatch(f"d{name} differs from the base differential")
        diff.append(lifted)
    for name in fiber_gens.names:
        p = value(name)
        for m in p.terms:
            fiber_wl = sum(m[nb:])
            if not any(m[:nb]) and fiber_wl <= 1:
                raise RelativeMinimalityViolation(
                    f"d{name} has a term outside (Λ⁺V_B ⊗ ΛW) ⊕ Λ^≥2 W")
        diff.append(p)
    total = SullivanAlgebra(ctx, tuple(diff), wedge_spheres=None)
    rep = validate(total, cutoff)
    if not rep.degree_ok:
        bad = [c for c in rep.counterexamples if c[2] == "degree"]
        raise ValueError(f"d{bad[0][0]} has the wrong degree")
    if not rep.d_squared_ok:
        bad = [c for c in rep.counterexamples if c[2] == "d^2"]
        raise DSquaredViolation(f"d²({bad[0][0]}) = {bad[0][1]} ≠ 0")
    qdiff = tuple(_kill_base(p, nb, fiber_gens) for p in diff[nb:])
    quotient = SullivanAlgebra(fiber_gens, qdiff)
    return RelativeModel(base, fiber_gens, total, quotient, cutoff)


def check_tnhz(rm: RelativeModel) -> bool:
    """Fiber inclusion injective on rational homotopy ⇔ the total algebra is minimal."""
    for p in rm.total.diff:
        for m in p.terms:
            if sum(m) < 2:
                return False
    return True


def check_tncz(rm: RelativeModel, cutoff: int) -> bool:
    """H(total) → H(fiber) surjective in degrees <= cutoff - 1."""
    if cutoff < 1:
        raise CutoffTooSmall("cutoff must be at least 1")
    return induced_on_H(rm.projection(), cutoff).surjective


def limit_fibration(rm: RelativeModel) -> RelativeModel:
    if not rm.base.is_purely_quadratic():
        raise BaseNotQuadratic("the base differential is not purely quadratic")
    if not rm.total.is_minimal():
        raise NotMinimal("the total algebra is not minimal (fibration not TNHZ)")
    q = quadratic_part(rm.total)
    return assemble(rm.base, rm.fiber_gens, dict(zip(q.names[rm.nbase:], q.diff[rm.nbase:])), rm.cutoff)


@dataclass
class DegreeGap:
    applies: bool
    n: int
    m: int


def degree_gap_criterion(rm: RelativeModel) -> DegreeGap:
    if not rm.base.is_purely_quadratic():
        raise HypothesesNotMet("base is not purely quadratic")
    if not rm.quotient.is_purely_quadratic():
        raise HypothesesNotMet("fiber quotient is not purely quadratic")
    if not check_tnhz(rm):
        raise HypothesesNotMet("fibration is not TNHZ")
    n = rm.fiber_gens.max_degree()
    m = min(rm.base.ctx.degrees, default=10**9) - 1
    applies = n <= m + 3
    if applies:
        assert rm.total.is_purely_quadratic(), "degree gap applies but the total differential is not quadratic"
    return DegreeGap(applies, n, m)


# ---------------------------------------------------------------------------
# spherical fibrations over wedges of spheres


@dataclass
class KoszulVerdict:
    kind: str  # KoszulByCase | NoVerdict
    cutoff: int
    n: int
    case: Optional[int] = None
    cases: list = field(default_factory=list)  # every case whose hypotheses hold
    checks: dict = field(default_factory=dict)
    reason: str = ""


def _sphere_dimension(q: SullivanAlgebra) -> int:
    ctx = q.ctx
    if len(ctx) == 1 and ctx.degrees[0] % 2 and not q.diff[0]:
        return ctx.degrees[0]
    if len(ctx) == 2:
        (a, na), (b, nb) = sorted(ctx.pairs(), key=lambda t: t[1])
        if na % 2 == 0 and nb == 2 * na - 1 and not q.d_of(a):
            db = q.d_of(b)
            sq = q.gen(a) ** 2
            c = db.coefficient(next(iter(sq.terms)))
            if c and db == sq.scale(c):
                return na
    raise NotSpherical("the fiber quotient is not a sphere model")


def spherical_koszul_classifier(rm: RelativeModel, cutoff: int) -> KoszulVerdict:
    """Check the hypotheses under which the total space is Koszul.

    Cases are tried in the order 1, 3, 2: case 3 needs no cohomology of the
    limit, case 2 needs the two auxiliary computations.
    """
    n = _sphere_dimension(rm.quotient)
    spheres = rm.base.wedge_spheres
    if spheres is None:
        return KoszulVerdict("NoVerdict", cutoff, n, reason="base is not a certified wedge of spheres")
    if cutoff <= n:
        raise CutoffTooSmall(f"cutoff must exceed {n} to see the fiber class")
    checks: dict = {}
    cases = []
    proj = induced_on_H(rm.projection(), cutoff)
    if n % 2:
        nontrivial = any(any(row) for row in proj.matrices[n].entries)
        checks["i*_nontrivial"] = nontrivial
        if nontrivial:
            cases.append(1)
    else:
        tncz = proj.surjective
        tnhz = check_tnhz(rm)
        checks["tncz"] = tncz
        checks["tnhz"] = tnhz
        odd_wedge = all(k % 2 for k in spheres)
        checks["odd_sphere_wedge"] = odd_wedge
        if odd_wedge and tncz:
            cases.append(3)
        if tnhz and tncz:
            lim = quadratic_part(rm.total)
            (a_name, _), (b_name, _) = sorted(rm.fiber_gens.pairs(), key=lambda t: t[1])
            a = lim.gen(a_name)
            sq = a * a
            d1b = lim.d_of(b_name)
            c = d1b.coefficient(next(iter(sq.terms)))
            theta = sq.scale(c) - d1b
            claim_a = False
            if not lim.d(a):
                z = a * theta
                claim_a = not z or find_primitive(lim, z) is not None
            checks["claim_A"] = claim_a
            length = cup_length_evidence(lim, cutoff)
            checks["cup_length"] = length
            checks["claim_B"] = length <= 2
            if claim_a and length <= 2:
                cases.append(2)
    if not cases:
        return KoszulVerdict("NoVerdict", cutoff, n, checks=checks, reason="no case hypotheses hold")
    return KoszulVerdict("KoszulByCase", cutoff, n, case=cases[0], cases=cases, checks=checks)

"""Coformal limits and the elimination procedure that certifies coformality.

Generators are processed in ascending degree.  Once every lower generator
has a quadratic differential, the non-quadratic part θ(v) = dv − d₁v of the
next one is a cocycle; if θ(v) = dz with z decomposable, the substitution
v ↦ v − z makes dv quadratic.  The composite of the substitutions is an
isomorphism onto the quadratic part.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .algebra import Polynomial
from .cohomology import ToomerVerdict, find_primitive, toomer
from .dga import NotMinimal, SullivanAlgebra, quadratic_part
from .morphism import DgaMorphism, validate_morphism

__all__ = [
    "ClosednessViolation",
    "CoformalVerdict",
    "CoformalityReport",
    "coformal_limit",
    "certified_iso_ok",
    "coformality_report",
    "coformalize",
]


class ClosednessViolation(ValueError):
    pass


@dataclass
class CoformalVerdict:
    kind: str  # CertifiedCoformal | Obstructed | Inconclusive
    cutoff: int
    iso: Optional[DgaMorphism] = None
    substitutions: list = field(default_factory=list)  # (generator, z): v ↦ v − z
    generator: Optional[str] = None
    obstruction: Optional[Polynomial] = None  # θ(v), a d₁-cocycle
    reason: str = ""


def coformal_limit(alg: SullivanAlgebra) -> SullivanAlgebra:
    return quadratic_part(alg)


def _substitute(alg: SullivanAlgebra, p: Polynomial, i: int, z: Polynomial) -> Polynomial:
    imgs = [alg.gen(j) for j in range(len(alg.ctx))]
    imgs[i] = imgs[i] + z
    return DgaMorphism(alg, alg, tuple(imgs)).apply(p)


def coformalize(alg: SullivanAlgebra, cutoff: int) -> CoformalVerdict:
    if not alg.is_minimal():
        raise NotMinimal("coformalize needs a minimal algebra")
    ctx = alg.ctx
    limit = quadratic_part(alg)
    diff = list(alg.diff)
    current = alg
    subs = []
    order = sorted(range(len(ctx)), key=lambda i: (ctx.degrees[i], i))
    for i in order:
        if ctx.degrees[i] > cutoff:
            continue
        dv = diff[i]
        theta = dv - dv.wordlength_part(2)
        if not theta:
            continue
        name = ctx.names[i]
        if limit.d(theta):
            raise ClosednessViolation(f"θ({name}) = {theta} is not d₁-closed")
        z = find_primitive(current, theta, 2)
        if z is None:
            return CoformalVerdict("Obstructed", cutoff, generator=name, obstruction=theta,
                                   substitutions=subs,
                                   reason=f"θ({name}) has no decomposable primitive")
        new_dv = dv - current.d(z)
        assert new_dv == dv.wordlength_part(2), "elimination did not leave a quadratic differential"
        diff[i] = new_dv
        for j in range(len(ctx)):
            if j != i and ctx.degrees[j] > ctx.degrees[i]:
                diff[j] = _substitute(current, diff[j], i, z)
        subs.append((name, z))
        current = SullivanAlgebra(ctx, tuple(diff))
    leftover = [ctx.names[i] for i in order if ctx.degrees[i] > cutoff and diff[i].wordlength_at_least(3)]
    if leftover:
        return CoformalVerdict("Inconclusive", cutoff, substitutions=subs,
                               reason=f"generators above the cutoff are not quadratic: {', '.join(leftover)}")
    assert current.diff == limit.diff, "eliminated algebra differs from the quadratic part"
    # Ψ(v) = v + z_v from alg to the quadratic part
    imgs = [limit.gen(j) for j in range(len(ctx))]
    for name, z in subs:
        j = ctx.index(name)
        imgs[j] = imgs[j] + Polynomial(limit.ctx, z.terms)
    iso = DgaMorphism(alg, limit, tuple(imgs))
    return CoformalVerdict("CertifiedCoformal", cutoff, iso=iso, substitutions=subs)


@dataclass
class CoformalityReport:
    cutoff: int
    limit: SullivanAlgebra
    limit_toomer: ToomerVerdict
    verdict: CoformalVerdict
    search: Optional[object] = None  # SearchVerdict when escalated
    coformal: Optional[bool] = None

    @property
    def cat0_limit(self) -> int:
        return self.limit_toomer.value

    @property
    def cat0(self) -> Optional[int]:
        return self.limit_toomer.value if self.coformal else None


def coformality_report(alg: SullivanAlgebra, cutoff: int, split_depth: int = 4) -> CoformalityReport:
    from .isosearch import parametrized_iso_search

    limit = coformal_limit(alg)
    e0 = toomer(limit, cutoff)
    verdict = coformalize(alg, cutoff)
    rep = CoformalityReport(cutoff, limit, e0, verdict)
    if verdict.kind == "CertifiedCoformal":
        rep.coformal = True
    elif verdict.kind == "Obstructed":
        rep.search = parametrized_iso_search(alg, limit, None, split_depth)
        if rep.search.kind == "NoIsoExists":
            rep.coformal = False
        elif rep.search.kind == "IsoFound":
            rep.coformal = True
    return rep


def certified_iso_ok(verdict: CoformalVerdict) -> bool:
    """The iso validates and has identity linear part."""
    if verdict.iso is None:
        return False
    if not validate_morphism(verdict.iso).ok:
        return False
    lim = verdict.iso.target
    return all(p.wordlength_part(1) == lim.gen(i) for i, p in enumerate(verdict.iso.assignment))

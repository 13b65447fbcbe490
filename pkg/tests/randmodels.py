"""Random minimal Sullivan algebras for property tests.

Each generator's differential is a random cocycle of wordlength >= 2 in the
algebra on the generators of lower degree, so d² = 0 holds by construction.
"""

import random
from fractions import Fraction

from sullivan.algebra import GradedContext, Polynomial, basis
from sullivan.dga import SullivanAlgebra
from sullivan.linalg import nullspace

NAMES = "xyzuvwabcst"


def _cocycles(alg: SullivanAlgebra, degree: int) -> list:
    """Basis of the cocycles of ``degree`` with wordlength >= 2."""
    mons = basis(alg.ctx, degree, wordlength_min=2)
    if not mons:
        return []
    rows: dict = {}
    for j, m in enumerate(mons):
        for i, c in alg.to_vector(alg.d_mono(m), degree + 1).items():
            rows.setdefault(i, {})[j] = c
    kernel = nullspace(list(rows.values()), len(mons))
    return [Polynomial(alg.ctx, {mons[j]: c for j, c in v.items()}) for v in kernel]


def random_minimal(rng: random.Random, max_gens: int = 5, max_degree: int = 9,
                   coeffs=(-2, -1, 1, 2), p_zero: float = 0.25, low: bool = False) -> SullivanAlgebra:
    """``low`` favours degrees 2 to 5, where products of three or more generators fit."""
    n = rng.randint(1, max_gens)
    pool = [2, 2, 3, 3, 4, 5] + list(range(2, max_degree + 1)) if low else list(range(2, max_degree + 1))
    degrees = sorted(rng.choice(pool) for _ in range(n))
    ctx = GradedContext(tuple(NAMES[:n]), tuple(degrees))
    diff = [Polynomial(ctx) for _ in range(n)]
    for i, deg in enumerate(degrees):
        if rng.random() < p_zero:
            continue
        cur = SullivanAlgebra(ctx, tuple(diff))
        zs = _cocycles(cur, deg + 1)
        p = Polynomial(ctx)
        for z in zs:
            c = rng.choice((0,) + tuple(coeffs))
            if c:
                p = p + z.scale(Fraction(c))
        diff[i] = p
    return SullivanAlgebra(ctx, tuple(diff))


def twist(alg: SullivanAlgebra, rng: random.Random, coeffs=(-1, 1, 2)) -> SullivanAlgebra:
    """Conjugate d by a random automorphism v ↦ v + (decomposable).

    The result is isomorphic to ``alg`` and has the same quadratic part, but
    its differential usually has terms of higher wordlength.
    """
    from sullivan.morphism import DgaMorphism, inverse

    ctx = alg.ctx
    imgs = []
    for i, deg in enumerate(ctx.degrees):
        p = Polynomial.monomial(ctx, ctx.generator_mono(i))
        for m in basis(ctx, deg, wordlength_min=2):
            if rng.random() < 0.5:
                p = p + Polynomial.monomial(ctx, m, Fraction(rng.choice(coeffs)))
        imgs.append(p)
    phi = DgaMorphism(alg, alg, tuple(imgs))
    psi = inverse(phi)
    gens = [Polynomial.monomial(ctx, ctx.generator_mono(i)) for i in range(len(ctx))]
    diff = tuple(psi.apply(alg.d(phi.apply(g))) for g in gens)
    return SullivanAlgebra(ctx, diff)


def random_coformal(rng: random.Random, quadratic=None, attempts: int = 6, **kw) -> SullivanAlgebra:
    """Twist a quadratic algebra until the differential stops being quadratic.

    The result is coformal by construction; if no attempt leaves a
    higher-wordlength term the last twist is returned anyway.
    """
    from sullivan.dga import quadratic_part

    if quadratic is None:
        kw.setdefault("p_zero", 0.0)
        quadratic = quadratic_part(random_minimal(rng, **kw))
    out = quadratic
    for _ in range(attempts):
        out = twist(quadratic, rng)
        if not out.is_purely_quadratic():
            break
    return out

"""Hypothesis property suites for the algebraic invariants.

Each ``check_*`` function is a hypothesis test; calling it runs the whole
property with the configured number of examples.
"""

import random
from fractions import Fraction

from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from randmodels import random_minimal
from sullivan.algebra import GradedContext, Polynomial, basis
from sullivan.cohomology import betti, toomer
from sullivan.dga import quadratic_part, tensor, validate
from sullivan.dsl import AlgebraDecl, DslDocument, parse, print_document
from sullivan.linalg import solve_sparse

EXAMPLES = 1000

SETTINGS = settings(max_examples=EXAMPLES, deadline=None, derandomize=True,
                    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large])

seeds = st.integers(min_value=0, max_value=2**32 - 1)


@st.composite
def contexts(draw, max_gens=4, max_degree=7):
    n = draw(st.integers(1, max_gens))
    degs = draw(st.lists(st.integers(2, max_degree), min_size=n, max_size=n))
    return GradedContext(tuple("xyzuvw"[:n]), tuple(degs))


@st.composite
def homogeneous(draw, ctx, max_degree=12):
    """A nonzero homogeneous element, or None when the drawn degree is empty."""
    k = draw(st.integers(2, max_degree))
    mons = basis(ctx, k)
    if not mons:
        return None
    picks = draw(st.lists(st.sampled_from(mons), min_size=1, max_size=4, unique=True))
    coeffs = draw(st.lists(st.integers(-3, 3).filter(bool), min_size=len(picks), max_size=len(picks)))
    return Polynomial(ctx, {m: Fraction(c) for m, c in zip(picks, coeffs)})


minimal_algebras = seeds.map(lambda s: random_minimal(random.Random(s), max_gens=4, max_degree=7))
small_algebras = seeds.map(lambda s: random_minimal(random.Random(s), max_gens=3, max_degree=6))


@SETTINGS
@given(st.data())
def check_koszul_signs(data):
    ctx = data.draw(contexts())
    a = data.draw(homogeneous(ctx))
    b = data.draw(homogeneous(ctx))
    c = data.draw(homogeneous(ctx))
    if a is None or b is None:
        return
    da, db = a.degree(), b.degree()
    assert a * b == (b * a).scale((-1) ** (da * db))
    if da % 2:
        assert not a * a
    if c is not None:
        assert (a * b) * c == a * (b * c)


@SETTINGS
@given(minimal_algebras, st.data())
def check_leibniz(alg, data):
    a = data.draw(homogeneous(alg.ctx, 10))
    b = data.draw(homogeneous(alg.ctx, 10))
    if a is None or b is None:
        return
    sign = -1 if a.degree() % 2 else 1
    assert alg.d(a * b) == alg.d(a) * b + (a * alg.d(b)).scale(sign)


@SETTINGS
@given(minimal_algebras)
def check_d1_squared(alg):
    assert validate(alg).ok
    q = quadratic_part(alg)
    rep = validate(q)
    assert rep.d_squared_ok and rep.minimal
    for p in q.diff:
        assert not q.d(p)


def _killed_by_truncation(alg, k, z, r):
    """Is z ≡ d(w) modulo wordlength > r for some w of degree k - 1?"""
    low = [i for i, m in enumerate(alg.cochain_basis(k)) if sum(m) <= r]
    cols = [{i: c for i, c in col.items() if i in low} for col in alg.d_columns(k - 1)]
    target = {i: c for i, c in alg.to_vector(z, k).items() if i in low}
    return solve_sparse(cols, target) is not None


@SETTINGS
@given(small_algebras, st.integers(4, 10))
def check_toomer_monotone(alg, cutoff):
    v = toomer(alg, cutoff)
    # a smaller window can only see fewer obstructions
    assert toomer(alg, cutoff - 1, check_monotone=False).value <= v.value
    if v.value == 0:
        assert v.witness is None
        return
    k, z = v.witness
    assert k < cutoff and z and not alg.d(z)
    table = betti(alg, cutoff)
    assert any(table.class_coordinates(z, k))
    assert _killed_by_truncation(alg, k, z, v.value - 1)


@SETTINGS
@given(small_algebras, small_algebras, st.integers(2, 10))
def check_kunneth(a, b, cutoff):
    ha = betti(a, cutoff).dims
    hb = betti(b, cutoff).dims
    expect = [sum(ha[i] * hb[k - i] for i in range(k + 1)) for k in range(cutoff)]
    assert betti(tensor(a, b), cutoff).dims == expect


@SETTINGS
@given(minimal_algebras)
def check_parse_print(alg):
    decl = AlgebraDecl("A", list(alg.ctx.pairs()), [(n, p) for n, p in zip(alg.names, alg.diff) if p])
    text = print_document(DslDocument([decl]))
    doc = parse(text)
    assert print_document(doc) == text
    back = doc.algebra("A")
    assert back.ctx == alg.ctx and back.diff == alg.diff


SUITES = {
    "koszul signs": check_koszul_signs,
    "leibniz": check_leibniz,
    "d1 squared": check_d1_squared,
    "toomer monotonicity": check_toomer_monotone,
    "kunneth": check_kunneth,
    "parse/print": check_parse_print,
}

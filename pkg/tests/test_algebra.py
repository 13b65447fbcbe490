from fractions import Fraction

import pytest

from sullivan.algebra import (GradedContext, MixedContexts, Polynomial, basis, format_polynomial, hilbert_series,
                              mono_mul, normalize, wordlength)

CTX = GradedContext.of(("x", 2), ("y", 3), ("a", 2), ("b", 3))


def gen(n):
    return Polynomial.gen(CTX, n)


def test_context_rejects_bad_input():
    with pytest.raises(ValueError):
        GradedContext.of(("x", 1))
    with pytest.raises(ValueError):
        GradedContext.of(("x", 2), ("x", 3))
    with pytest.raises(KeyError):
        CTX.index("q")


def test_odd_generators_anticommute():
    x, y, b = gen("x"), gen("y"), gen("b")
    assert y * b == -(b * y)
    assert not y * y
    assert x * y == y * x


def test_normalize_sign():
    sign, m = normalize(CTX, ["b", "y"])
    assert sign == -1 and m == (0, 1, 0, 1)
    sign, _ = normalize(CTX, ["y", "x", "y"])
    assert sign == 0


def test_mono_mul_unit():
    u = CTX.unit()
    assert mono_mul(CTX, u, (1, 1, 0, 0)) == (1, (1, 1, 0, 0))


def test_from_word_matches_product():
    p = Polynomial.from_word(CTX, ["b", "x", "y"], 3)
    assert p == (gen("b") * gen("x") * gen("y")).scale(3)


def test_powers_and_degrees():
    x = gen("x")
    p = x ** 3 + gen("a") * x * x
    assert p.degree() == 6 and p.is_homogeneous()
    assert p.wordlengths() == {3}
    assert wordlength((3, 0, 0, 0)) == 3


def test_parts():
    p = gen("x") * gen("y") + gen("x") ** 2 * gen("y")
    assert p.wordlength_part(2) == gen("x") * gen("y")
    assert p.wordlength_at_least(3) == gen("x") ** 2 * gen("y")
    assert p.degree_part(5) == gen("x") * gen("y")
    assert p.generators_used() == {0, 1}


def test_mixed_contexts():
    other = GradedContext.of(("x", 2))
    with pytest.raises(MixedContexts):
        gen("x") + Polynomial.gen(other, "x")


def test_format():
    p = gen("x") ** 2 - gen("y") * gen("b").scale(Fraction(1, 2))
    assert format_polynomial(p) == "x^2 - 1/2*y*b"
    assert str(Polynomial(CTX)) == "0"


def test_rename_context():
    big = GradedContext.of(("u", 4), ("x", 2), ("y", 3))
    small = GradedContext.of(("x", 2), ("y", 3))
    p = Polynomial.gen(small, "x") * Polynomial.gen(small, "y")
    q = p.rename_context(big, [1, 2])
    assert q == Polynomial.gen(big, "x") * Polynomial.gen(big, "y")


@pytest.mark.parametrize("k", range(0, 16))
def test_basis_counts_match_hilbert_series(k):
    assert len(basis(CTX, k)) == hilbert_series(CTX, 15)[k]


def test_basis_wordlength_window():
    mons = basis(CTX, 6, wordlength_min=3)
    assert all(sum(m) >= 3 for m in mons)
    assert len(mons) == 4  # x^3, x^2 a, x a^2, a^3

from fractions import Fraction

import pytest

from sullivan.algebra import GradedContext, Polynomial
from sullivan.dsl import (DegreeMismatch, DslError, DslSyntaxError, UnknownGenerator, UnknownName, parse,
                          parse_polynomial, print_document)

CTX = GradedContext.of(("x", 2), ("y", 3), ("b", 3))

DOC = """\
# comment line
algebra S2
  gen x 2
  gen y 3
  d y = x^2   # trailing comment

algebra T
  gen x 2
  gen y 3
  d y = 2*x^2

morphism f : S2 -> T
  map x = x
  map y = 1/2*y

lie L
  gen a 1
  gen b 2
  bracket [a,a] = 2*b
"""


def test_polynomial_syntax():
    x, y, b = (Polynomial.gen(CTX, n) for n in "xyb")
    assert parse_polynomial("x^2*y - 3/4*x*b", CTX) == x * x * y - (x * b).scale(Fraction(3, 4))
    assert parse_polynomial("(x + 1)^2", CTX) == x * x + x.scale(2) + Polynomial.const(CTX)
    assert parse_polynomial("-y*b", CTX) == -(y * b)
    assert parse_polynomial("y*y", CTX) == Polynomial(CTX)


def test_sign_warning():
    warnings = []
    p = parse_polynomial("b*y", CTX, warnings)
    assert p == -(Polynomial.gen(CTX, "y") * Polynomial.gen(CTX, "b"))
    assert warnings and "flips the sign" in warnings[0]


def test_document():
    doc = parse(DOC)
    assert doc.names() == ["S2", "T", "f", "L"]
    phi = doc.morphism("f")
    assert phi.image("y") == phi.target.poly("1/2*y")
    lie = doc.lie("L")
    assert lie.bracket_basis(0, 0) == {1: 2}
    assert parse(print_document(doc)) == doc


@pytest.mark.parametrize("text,exc,line", [
    ("algebra A\n  gen x 2\n  d x = x\n", DegreeMismatch, 3),
    ("algebra A\n  gen x 2\n  gen y 3\n  d y = z^2\n", UnknownGenerator, 4),
    ("algebra A\n  gen x 2\n  d y = x\n", UnknownGenerator, 3),
    ("algebra A\n  gen x 2\n  gen x 4\n", DslError, 3),
    ("algebra A\n  gen x 2\n  frob\n", DslSyntaxError, 3),
    ("algebra A\n  gen x 2\n  gen y 3\n  d y = x^2 +\n", DslSyntaxError, 4),
    ("algebra A\n  gen x 2\n  gen y 3\n  d y = 1/0*x^2\n", DslSyntaxError, 4),
    ("widget A\n", DslSyntaxError, 1),
    ("algebra A\n  gen x 2\nalgebra A\n  gen y 2\n", DslError, 3),
    ("algebra A\n  gen x 1\n", DslError, 1),
    ("expect Nope valid true\n", UnknownName, None),
])
def test_errors_carry_locations(text, exc, line):
    with pytest.raises(exc) as info:
        parse(text)
    assert info.value.line == line


def test_error_column():
    with pytest.raises(DslSyntaxError) as info:
        parse("algebra A\n  gen x 2\n  gen y 3\n  d y = x^2 $ x\n")
    assert info.value.line == 4 and info.value.col == 13


def test_fibration_block():
    doc = parse("algebra B\n  gen z 2\n  gen t 3\n  d t = z^2\n"
                "fibration F : base B fiber {\n  gen x 2\n  gen y 3\n  d y = x^2 + x*z\n}\n")
    rm = doc.fibration("F")
    assert rm.total.names == ("z", "t", "x", "y")
    assert rm.quotient.d_of("y") == rm.quotient.poly("x^2")


def test_unclosed_fiber_block():
    with pytest.raises(DslSyntaxError):
        parse("algebra B\n  gen z 2\nfibration F : base B fiber {\n  gen x 2\n")


def test_wedge_declaration():
    doc = parse("wedge W : spheres 3 3 cutoff 8\n")
    w = doc.algebra("W")
    assert w.wedge_spheres == (3, 3)
    assert w.ctx.degrees[:3] == (3, 3, 5)

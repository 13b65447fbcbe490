import pytest

from sullivan.algebra import GradedContext
from sullivan.cohomology import CutoffTooSmall
from sullivan.dga import NotMinimal, SullivanAlgebra, sphere_model
from sullivan.fibration import (BaseNotQuadratic, DSquaredViolation, HypothesesNotMet, NotSpherical,
                                RelativeMinimalityViolation, RestrictionMismatch, assemble, check_tncz, check_tnhz,
                                degree_gap_criterion, limit_fibration, spherical_koszul_classifier)
from sullivan.lie import wedge_of_spheres_model
from sullivan.morphism import validate_morphism

S2 = sphere_model(2, ["z", "t"])
S4 = sphere_model(4, ["u", "v"])
CP2 = SullivanAlgebra.build([("x", 2), ("y", 5)], {"y": "x^3"})
S2S2 = SullivanAlgebra.build([("x", 2), ("y", 3), ("a", 2), ("b", 3)], {"y": "x^2", "b": "a^2"})


def fiber(*pairs):
    return GradedContext.of(*pairs)


def test_assemble_and_maps():
    rm = assemble(CP2, fiber(("a", 3)), {"a": "x^2"})
    assert rm.total.names == ("x", "y", "a") and rm.nbase == 2
    assert validate_morphism(rm.projection()).ok and validate_morphism(rm.inclusion()).ok
    assert rm.total_diff["a"] == rm.total.poly("x^2")
    assert not rm.quotient.d_of("a")


def test_linear_fiber_term_rejected():
    with pytest.raises(RelativeMinimalityViolation):
        assemble(S2, fiber(("e", 4), ("c", 5)), {"e": "c"})


def test_base_restriction_must_agree():
    with pytest.raises(RestrictionMismatch):
        assemble(S2, fiber(("s", 3)), {"t": "0"})
    rm = assemble(S2, fiber(("s", 3)), {"t": "z^2"})
    assert rm.total.d_of("t") == rm.total.poly("z^2")


def test_name_clash():
    with pytest.raises(ValueError):
        assemble(S2, fiber(("z", 3)), {})


def test_d_squared_checked():
    with pytest.raises(DSquaredViolation):
        assemble(S2S2, fiber(("s", 9)), {"s": "a*x*b*y"})


def test_cp3_over_s4_not_tnhz():
    rm = assemble(S4, fiber(("x", 2), ("w", 3)), {"w": "x^2 - u"})
    assert not check_tnhz(rm)
    assert not rm.total.is_minimal()
    with pytest.raises(NotMinimal):
        limit_fibration(rm)
    with pytest.raises(HypothesesNotMet):
        degree_gap_criterion(rm)


def test_tncz():
    # S^3 -> S^2 x S^5 -> CP^2: the fiber class dies, so not TNCZ
    rm = assemble(CP2, fiber(("a", 3)), {"a": "x^2"})
    assert check_tnhz(rm) and not check_tncz(rm, 8)
    # a product fibration is TNCZ
    prod = assemble(S2, fiber(("s", 3)), {})
    assert check_tncz(prod, 8)
    with pytest.raises(CutoffTooSmall):
        check_tncz(prod, 0)


def test_limit_fibration():
    rm = assemble(S2, fiber(("x", 2), ("y", 3)), {"y": "x^2 + x*z"})
    lim = limit_fibration(rm)
    assert lim.total.diff == rm.total.diff
    with pytest.raises(BaseNotQuadratic):
        limit_fibration(assemble(CP2, fiber(("a", 3)), {"a": "x^2"}))


def test_degree_gap():
    gap = degree_gap_criterion(assemble(S2, fiber(("x", 2), ("y", 3)), {"y": "x^2 + x*z"}))
    assert gap.applies and (gap.n, gap.m) == (3, 1)
    nogap = degree_gap_criterion(assemble(S2S2, fiber(("s", 9)), {"s": "x^5"}))
    assert not nogap.applies and (nogap.n, nogap.m) == (9, 1)
    with pytest.raises(HypothesesNotMet):
        degree_gap_criterion(assemble(CP2, fiber(("a", 3)), {"a": "x^2"}))


def test_koszul_cases():
    w = wedge_of_spheres_model([3, 3], 12)
    odd = assemble(w, fiber(("s", 5)), {"s": "a*b"}, 12)
    v = spherical_koszul_classifier(odd, 11)
    assert v.kind == "KoszulByCase" and v.case == 1 and v.checks["i*_nontrivial"]
    even = assemble(w, fiber(("e", 4), ("f", 7)), {"f": "e^2"}, 12)
    v = spherical_koszul_classifier(even, 11)
    assert v.case == 3 and v.checks["odd_sphere_wedge"] and v.checks["tncz"]
    with pytest.raises(CutoffTooSmall):
        spherical_koszul_classifier(odd, 5)


def test_koszul_needs_wedge_and_sphere():
    rm = assemble(S2, fiber(("s", 3)), {})
    assert spherical_koszul_classifier(rm, 8).kind == "NoVerdict"
    w = wedge_of_spheres_model([3, 3], 12)
    with pytest.raises(NotSpherical):
        spherical_koszul_classifier(assemble(w, fiber(("s", 5), ("r", 5)), {}, 12), 11)

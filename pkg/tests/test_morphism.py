import pytest

from sullivan.dga import SullivanAlgebra, sphere_model
from sullivan.morphism import (DgaMorphism, NotInvertible, SeedInvalid, compose, extend_degreewise, identity, inverse,
                               linear_part, quadratic_model_map, validate_morphism)

E54 = SullivanAlgebra.build([("x", 2), ("y", 5), ("a", 3)], {"y": "x^3", "a": "x^2"})
LIM = SullivanAlgebra.build([("x", 2), ("y", 5), ("a", 3)], {"a": "x^2"})


def test_identity_validates():
    assert validate_morphism(identity(E54)).ok


def test_known_iso_and_inverse():
    phi = DgaMorphism.from_partial(E54, LIM, {"y": "y + x*a"})
    assert validate_morphism(phi).ok
    psi = inverse(phi)
    assert psi.image("y") == E54.poly("y - x*a")
    assert compose(psi, phi).assignment == identity(E54).assignment
    assert compose(phi, psi).assignment == identity(LIM).assignment


def test_non_commuting_map():
    phi = DgaMorphism.from_partial(E54, LIM, {})
    rep = validate_morphism(phi)
    assert not rep.ok and rep.witnesses[0][0] == "y"


def test_wrong_degree_image():
    phi = DgaMorphism.from_partial(E54, LIM, {"a": "x^2"})
    assert not validate_morphism(phi).degree_ok


def test_from_partial_needs_images():
    s2 = sphere_model(2, ["u", "v"])
    with pytest.raises(ValueError):
        DgaMorphism.from_partial(s2, E54, {"u": "x"})


def test_inverse_of_singular():
    phi = DgaMorphism.from_partial(E54, E54, {"x": "0", "y": "0", "a": "0"})
    with pytest.raises(NotInvertible):
        inverse(phi)


def test_linear_part():
    phi = DgaMorphism.from_partial(E54, LIM, {"y": "y + x*a", "x": "2*x"})
    lin = linear_part(phi)
    assert lin[2].entries == ((2,),) and lin[5].entries == ((1,),)
    q = quadratic_model_map(DgaMorphism.from_partial(E54, LIM, {"y": "y + x*a"}))
    assert q.image("y") == q.target.gen("y")


def test_extend_degreewise():
    s2 = sphere_model(2)
    phi = extend_degreewise(s2, E54, {"x": "x"})
    assert phi is not None and validate_morphism(phi).ok
    assert phi.image("y") == E54.poly("a")
    # x ↦ x into (Λx, 0) has no extension: x^2 is not exact there
    free = SullivanAlgebra.build([("x", 2)])
    assert extend_degreewise(s2, free, {"x": "x"}) is None
    with pytest.raises(SeedInvalid):
        extend_degreewise(s2, E54, {"x": "x", "y": "y"})

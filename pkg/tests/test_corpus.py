"""Golden values: every ``expect`` line of the bundled corpus."""

import pytest

from sullivan.cli import corpus_names, load_document
from sullivan.cohomology import betti, toomer
from sullivan.coformal import ClosednessViolation, coformal_limit, coformality_report, coformalize
from sullivan.dga import quadratic_part, validate
from sullivan.dsl import parse, print_document
from sullivan.fibration import check_tncz, check_tnhz, degree_gap_criterion, spherical_koszul_classifier
from sullivan.isosearch import parametrized_iso_search


def _flag(s):
    return {"true": True, "false": False}[s]


def _ints(s):
    return [int(t) for t in s.split()]


def _coformalize_kind(alg):
    try:
        return coformalize(alg, alg.ctx.max_degree()).kind
    except ClosednessViolation:
        return "ClosednessViolation"


def evaluate(doc, target, key, value):
    """(computed, expected) for one expectation."""
    if key == "valid":
        return validate(doc.algebra(target)).ok, _flag(value)
    if key in ("betti", "limit_betti"):
        cutoff, *dims = _ints(value)
        alg = doc.algebra(target)
        if key == "limit_betti":
            alg = coformal_limit(alg)
        return betti(alg, cutoff).dims, dims
    if key == "coformalize":
        return _coformalize_kind(doc.algebra(target)), value
    if key in ("toomer", "toomer_limit"):
        cutoff, e0 = _ints(value)
        alg = doc.algebra(target)
        if key == "toomer_limit":
            alg = quadratic_part(alg)
        return toomer(alg, cutoff).value, e0
    if key == "iso_limit":
        alg = doc.algebra(target)
        return parametrized_iso_search(alg, coformal_limit(alg)).kind, value
    if key == "report":
        alg = doc.algebra(target)
        rep = coformality_report(alg, 2 * alg.ctx.max_degree())
        return ("coformal" if rep.coformal else "not coformal"), value
    if key == "tnhz":
        return check_tnhz(doc.fibration(target)), _flag(value)
    if key == "tncz":
        cutoff, flag = value.split()
        return check_tncz(doc.fibration(target), int(cutoff)), _flag(flag)
    if key == "degree_gap":
        return degree_gap_criterion(doc.fibration(target)).applies, _flag(value)
    if key == "koszul":
        cutoff, case = _ints(value)
        return spherical_koszul_classifier(doc.fibration(target), cutoff).case, case
    raise AssertionError(f"unknown expectation key {key!r}")


CASES = []
for fixture in corpus_names():
    d = load_document(fixture)[0]
    for e in d.expectations():
        CASES.append(pytest.param(fixture, e.target, e.key, e.value, id=f"{fixture}:{e.target}:{e.key}"))


@pytest.mark.parametrize("fixture,target,key,value", CASES)
def test_expectation(fixture, target, key, value):
    doc = load_document(fixture)[0]
    got, want = evaluate(doc, target, key, value)
    assert got == want


@pytest.mark.parametrize("fixture", corpus_names())
def test_print_round_trip(fixture):
    doc = load_document(fixture)[0]
    text = print_document(doc)
    again = parse(text)
    assert print_document(again) == text
    assert again.names() == doc.names()


def test_corpus_is_not_empty():
    assert len(corpus_names()) >= 7 and len(CASES) >= 30

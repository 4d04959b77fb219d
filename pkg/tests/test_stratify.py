import pytest

from conftest import brute_force_stratifiable
from nfcheck.depgraph import build_graph
from nfcheck.stratify import (CertificateError, MissingVariableError, TypeAssignment, UnsatCertificate,
                              canonicalize, check_assignment, check_certificate, stratify, verdict_json)
from nfcheck.syntax import normalize

SEPARATION = "x in y and y in z and w in z and x in w"


def test_chain_of_two():
    assert stratify(normalize("y in x and x in z")) == TypeAssignment({"y": 0, "x": 1, "z": 2})


def test_two_cycle_certificate():
    f = normalize("x in y and y in x")
    c = stratify(f)
    assert isinstance(c, UnsatCertificate)
    assert c.net_weight == 2
    assert check_certificate(f, c)


def test_separation_formula_types():
    f = normalize(SEPARATION)
    # brute force over 0..3: every solution is the canonical one shifted
    import itertools
    names = ["w", "x", "y", "z"]
    sols = []
    for vals in itertools.product(range(4), repeat=4):
        t = dict(zip(names, vals))
        if check_assignment(f, t):
            low = min(vals)
            sols.append({k: v - low for k, v in t.items()})
    assert all(s == {"x": 0, "y": 1, "w": 1, "z": 2} for s in sols) and sols
    assert stratify(f) == TypeAssignment({"x": 0, "y": 1, "w": 1, "z": 2})


def test_self_membership():
    f = normalize("x in x")
    c = stratify(f)
    assert c == UnsatCertificate(((0, "forward"),), 1)
    assert check_certificate(f, c)


def test_reflexive_equality_is_stratified():
    assert stratify(normalize("x = x")) == TypeAssignment({"x": 0})


def test_isolated_variables_get_zero():
    assert stratify(normalize("forall v (y in a)")) == TypeAssignment({"a": 1, "y": 0, "v": 0})


def test_check_assignment():
    f = normalize("y in x")
    assert check_assignment(f, {"y": 0, "x": 1})
    assert not check_assignment(f, {"y": 0, "x": 0})
    assert check_assignment(normalize("y = a"), {"y": 5, "a": 5})
    with pytest.raises(MissingVariableError):
        check_assignment(f, {"y": 0})


def test_check_certificate_rejections():
    f = normalize("x in y and y in x")
    c = stratify(f)
    assert not check_certificate(f, UnsatCertificate(c.closed_walk, 0))
    assert not check_certificate(f, UnsatCertificate(c.closed_walk[:1], 1))
    with pytest.raises(CertificateError):
        check_certificate(normalize("x = y"), c)


def test_canonicalize():
    g = build_graph(normalize("y in x"))
    assert canonicalize(TypeAssignment({"y": 3, "x": 4}), g) == TypeAssignment({"y": 0, "x": 1})
    g2 = build_graph(normalize("a = b and c = c"))
    assert canonicalize(TypeAssignment({"a": 2, "b": 2, "c": 7}), g2) == TypeAssignment({"a": 0, "b": 0, "c": 0})


def test_canonicalize_idempotent_and_shift_invariant(small_sample):
    for f in small_sample:
        t = stratify(f)
        if not isinstance(t, TypeAssignment):
            continue
        g = build_graph(f)
        assert canonicalize(t, g) == t
        for k in (-3, 5):
            shifted = TypeAssignment({v: n + k for v, n in t.types.items()})
            assert check_assignment(f, shifted)
            assert canonicalize(shifted, g) == t


def test_completeness_against_brute_force(small_sample):
    for f in small_sample:
        r = stratify(f)
        assert isinstance(r, TypeAssignment) == brute_force_stratifiable(f)
        if isinstance(r, TypeAssignment):
            assert check_assignment(f, r)
        else:
            assert check_certificate(f, r)


def test_acyclic_implies_stratified(acyclic_sample):
    assert all(isinstance(stratify(f), TypeAssignment) for f in acyclic_sample)


def test_verdict_json():
    assert verdict_json(stratify(normalize("y in x"))) == {
        "stratified": True, "types": {"x": 1, "y": 0}, "certificate": None}
    v = verdict_json(stratify(normalize("x in y and y in x")))
    assert v["stratified"] is False and v["certificate"]["net_weight"] == 2

import pytest
from hypothesis import given, settings, strategies as st

from conftest import brute_force_has_cycle
from nfcheck.corpus import load_corpus
from nfcheck.depgraph import (CycleWitness, Orient, build_graph, components, find_cycle, graph_json,
                              is_acyclic_chain, to_dot, verdict_json, verify_witness)
from nfcheck.generator import gen, random_config
from nfcheck.syntax import Rel, normalize

SEPARATION = "x in y and y in z and w in z and x in w"


def graph(text):
    return build_graph(normalize(text))


def test_build_graph_equality():
    g = graph("y = a")
    assert g.vertices == {"y", "a"}
    assert len(g.edges) == 1 and g.edges[0].kind is Rel.EQUAL and g.edges[0].orient is Orient.NONE


def test_build_graph_membership():
    g = graph("exists z (y in z and z in a)")
    assert g.vertices == {"y", "z", "a"}
    assert [e.kind for e in g.edges] == [Rel.MEMBER, Rel.MEMBER]
    assert all(e.orient is Orient.U_IN_V for e in g.edges)


def test_negated_atom_still_counts():
    g = graph("not (y in a)")
    assert g.vertices == {"y", "a"} and len(g.edges) == 1


def test_duplicate_atoms_give_parallel_edges():
    g = graph("x in y or x in y")
    assert len(g.edges) == 2
    w = find_cycle(g)
    assert w.edge_ids == (0, 1) and w.vertex_sequence == ("x", "y", "x")


def test_vacuous_binder_is_a_vertex():
    g = graph("forall v (y in a)")
    assert "v" in g.vertices
    assert components(g) == [["a", "y"], ["v"]]


def test_separation_witness_is_a_four_cycle():
    f = normalize(SEPARATION)
    assert brute_force_has_cycle(f)
    w = find_cycle(build_graph(f))
    assert w == CycleWitness((0, 1, 2, 3), ("x", "y", "z", "w", "x"))
    assert verify_witness(build_graph(f), w)


def test_two_edge_cycle():
    w = find_cycle(graph("x in y and x = y"))
    assert len(w.edge_ids) == 2


def test_self_loops():
    for text in ("x in x", "x = x"):
        w = find_cycle(graph(text))
        assert w == CycleWitness((0,), ("x", "x"))
        assert not is_acyclic_chain(normalize(text))


def test_tree_has_no_cycle():
    assert find_cycle(graph("y in z and z in a")) is None
    assert is_acyclic_chain(normalize("y = a"))


def test_forest_characterisation(arbitrary_sample):
    for f in arbitrary_sample:
        g = build_graph(f)
        pairs = [frozenset((e.u, e.v)) for e in g.edges]
        simple = len(set(pairs)) == len(pairs) and all(e.u != e.v for e in g.edges)
        forest = simple and len(g.edges) == len(g.vertices) - len(components(g))
        assert (find_cycle(g) is None) == forest


def test_definitions_agree_with_brute_force():
    for seed in range(300):
        f = gen(random_config(seed, max_vars=6, max_atoms=7))
        assert is_acyclic_chain(f) == (not brute_force_has_cycle(f)) == (find_cycle(build_graph(f)) is None)


def test_witnesses_verify(arbitrary_sample):
    for f in arbitrary_sample:
        g = build_graph(f)
        w = find_cycle(g)
        if w is not None:
            assert verify_witness(g, w)


def test_verify_witness_rejects_bad_walks():
    g = graph(SEPARATION)
    assert not verify_witness(g, CycleWitness((0, 1), ("x", "y", "x")))
    assert not verify_witness(g, CycleWitness((0, 0), ("x", "y", "x")))
    assert not verify_witness(g, CycleWitness((0, 1, 2), ("x", "y", "z", "w")))
    assert not verify_witness(g, CycleWitness((9,), ("x", "x")))


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**32))
def test_subformula_monotonicity(seed):
    f = gen(random_config(seed, "acyclic"))
    stack = [f]
    while stack:
        g = stack.pop()
        assert find_cycle(build_graph(g)) is None
        stack.extend(getattr(g, name) for name in ("left", "right", "body") if hasattr(g, name))


def test_components():
    assert components(graph("y in z and a = b")) == [["a", "b"], ["y", "z"]]
    assert components(graph("y in z")) == [["y", "z"]]


def test_dot_empty():
    from nfcheck.depgraph import VarGraph
    assert to_dot(VarGraph(frozenset(), ())) == "digraph G {}\n"


def test_dot_membership_is_directed():
    dot = to_dot(graph("y in z"))
    assert "y -> z" in dot and "dir=none" not in dot
    assert "dir=none" in to_dot(graph("y = z"))


def test_dot_is_deterministic_and_quotes_odd_names():
    assert to_dot(graph("b in a and x' = a")) == to_dot(graph("b in a and x' = a"))
    assert '"x\'"' in to_dot(graph("x' = a"))


def test_dot_diagonal_is_a_tree():
    entry = next(e for e in load_corpus() if e.name == "10_diagonal")
    g = build_graph(entry.analysed())
    assert find_cycle(g) is None
    dot = to_dot(g)
    assert dot.count("->") == len(g.edges) == len(g.vertices) - len(components(g))


def test_json_verdicts():
    assert verdict_json(graph("y = a")) == {"acyclic": True, "cycle": None}
    v = verdict_json(graph("x in y and y in x"))
    assert v == {"acyclic": False, "cycle": {"edges": [0, 1], "vertices": ["y", "x", "y"]}}
    assert graph_json(graph("y in a"))["edges"] == [{"id": 0, "u": "y", "v": "a", "kind": "member", "orient": "u_in_v"}]

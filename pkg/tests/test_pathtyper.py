import pytest

from nfcheck.corpus import load_corpus
from nfcheck.depgraph import VarGraph, build_graph, components
from nfcheck.pathtyper import NotAcyclicError, count_simple_paths, type_acyclic, verify_uniqueness
from nfcheck.stratify import TypeAssignment, check_assignment, stratify
from nfcheck.syntax import Rel, atoms, normalize


def test_chain_with_least_root():
    trace = type_acyclic(normalize("y in x and x in z"))
    assert trace.roots == {0: "x"}
    assert trace.raw == {"x": 0, "y": -1, "z": 1}
    assert trace.assignment == TypeAssignment({"y": 0, "x": 1, "z": 2})
    assert trace.assignment == stratify(normalize("y in x and x in z"))


def test_equality():
    trace = type_acyclic(normalize("y = a"))
    assert trace.roots == {0: "a"}
    assert trace.assignment == TypeAssignment({"y": 0, "a": 0})


def test_cyclic_is_rejected_with_witness():
    with pytest.raises(NotAcyclicError) as info:
        type_acyclic(normalize("x in y and y in x"))
    assert info.value.witness.edge_ids == (0, 1)


def test_paths_lead_to_roots():
    f = normalize("exists m in R . exists p, q (y in p in q in m and 0 in q)")
    trace = type_acyclic(f)
    occ = atoms(f)
    root = trace.roots[0]
    for v, path in trace.paths.items():
        here = v
        for i in path:
            a = occ[i]
            assert here in (a.lhs, a.rhs)
            here = a.rhs if here == a.lhs else a.lhs
        assert here == root
        assert len(set(path)) == len(path)


def _signed_sum(f, trace, v):
    occ = atoms(f)
    here, total = v, 0
    for i in trace.paths[v]:
        a = occ[i]
        nxt = a.rhs if here == a.lhs else a.lhs
        if a.rel is Rel.MEMBER:
            total += 1 if nxt == a.rhs else -1
        here = nxt
    return total


def test_soundness_agreement_and_additivity(acyclic_sample):
    for f in acyclic_sample:
        trace = type_acyclic(f)
        assert check_assignment(f, trace.assignment)
        assert trace.assignment == stratify(f)
        for v in trace.raw:
            # element -> container adds one along the walk from v up to the root
            assert trace.raw[v] == -_signed_sum(f, trace, v)
        for root in trace.roots.values():
            assert trace.raw[root] == 0


def test_root_independence(acyclic_sample):
    for f in acyclic_sample[:200]:
        base = type_acyclic(f).assignment
        assert type_acyclic(f, choose_root=lambda comp: comp[-1]).assignment == base
        assert type_acyclic(f, choose_root=lambda comp: comp[len(comp) // 2]).assignment == base


def test_uniqueness_on_domains_entry():
    entry = next(e for e in load_corpus() if e.name == "09_domains")
    g = build_graph(entry.analysed())
    assert len(g.vertices) <= 8
    assert verify_uniqueness(g)


def test_uniqueness_small_and_rejection():
    assert verify_uniqueness(build_graph(normalize("y in a")))
    with pytest.raises(NotAcyclicError):
        verify_uniqueness(build_graph(normalize("x in y and x = y")))


def test_count_simple_paths_sees_parallel_edges():
    g = build_graph(normalize("x in y and y = z and x in z"))
    assert count_simple_paths(g, "x", "z", limit=10) == 2


def test_uniqueness_on_corpus():
    for e in load_corpus():
        assert verify_uniqueness(build_graph(e.analysed()))


def test_trace_json():
    trace = type_acyclic(normalize("y in x and a = b"))
    assert trace.to_json() == {"roots": {"0": "a", "1": "x"}, "types": {"a": 0, "b": 0, "x": 1, "y": 0}}

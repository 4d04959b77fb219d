import itertools
import sys

import pytest

from nfcheck.generator import gen, random_config
from nfcheck.syntax import Rel, atoms, variables


def brute_force_stratifiable(f) -> bool:
    """Try every assignment with types in [0, #vars)."""
    names = sorted(variables(f))
    occ = atoms(f)
    for values in itertools.product(range(len(names)), repeat=len(names)):
        t = dict(zip(names, values))
        if all(t[a.rhs] == t[a.lhs] + (1 if a.rel is Rel.MEMBER else 0) for a in occ):
            return True
    return False


def brute_force_has_cycle(f) -> bool:
    """Some nonempty set of atom occurrences forms a simple cycle.

    A set of edges is a cycle iff it is connected and every vertex has
    degree 2 (a self-loop contributes 2).
    """
    edges = [(a.lhs, a.rhs) for a in atoms(f)]
    for r in range(1, len(edges) + 1):
        for subset in itertools.combinations(edges, r):
            degree = {}
            for u, v in subset:
                degree[u] = degree.get(u, 0) + 1
                degree[v] = degree.get(v, 0) + 1
            if any(d != 2 for d in degree.values()):
                continue
            verts = list(degree)
            seen = {verts[0]}
            grew = True
            while grew:
                grew = False
                for u, v in subset:
                    if (u in seen) != (v in seen):
                        seen |= {u, v}
                        grew = True
            if len(seen) == len(verts):
                return True
    return False


@pytest.fixture(scope="session")
def arbitrary_sample():
    return [gen(random_config(s, "arbitrary")) for s in range(1000)]


@pytest.fixture(scope="session")
def acyclic_sample():
    return [gen(random_config(s, "acyclic")) for s in range(1000)]


@pytest.fixture(scope="session")
def small_sample():
    """Formulas over at most five variables."""
    return [gen(random_config(s, mode, max_vars=5, max_atoms=8))
            for mode in ("arbitrary", "stratified") for s in range(300)]


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is not None and mod.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in mod.RESULTS:
            terminalreporter.write_line(line)

"""Pairs in a finite universe of hereditarily finite sets."""
import itertools

from nfcheck.modelcheck import (EMPTY, build_hf_universe, hf_format, hf_sets_of_rank_at_most, hf_wiener,
                                pair_body, pair_equation, satisfying, wiener_pair)
from nfcheck.syntax import pretty

a, b = EMPTY, frozenset({EMPTY})
u = build_hf_universe([hf_wiener(a, b)] + hf_sets_of_rank_at_most(3))
ea, eb = u.element_of(a), u.element_of(b)
env = {"a": ea, "b": eb, "0": "0"}
print(f"universe of {len(u)} sets")
print("pair body:", pretty(pair_body()))
for e in satisfying(pair_body(), u, "y", env):
    print("  holds at", hf_format(u.sets[e]))
hits = satisfying(pair_equation(), u, "p", env)
print("pair equation holds at", [hf_format(u.sets[e]) for e in hits])
print("wiener_pair(a, b) =", hf_format(u.sets[wiener_pair(ea, eb, u)]))

carrier = hf_sets_of_rank_at_most(2)
pu = build_hf_universe([hf_wiener(x, y) for x in carrier for y in carrier])
ids = [pu.element_of(c) for c in carrier]
pairs = {wiener_pair(x, y, pu) for x, y in itertools.product(ids, repeat=2)}
print(f"{len(ids) ** 2} ordered pairs over {len(ids)} sets give {len(pairs)} distinct elements")

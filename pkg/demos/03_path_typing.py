"""Acyclic formulas are typed by walking the unique path to a root."""
from nfcheck import build_graph, normalize, pretty, type_acyclic, verify_uniqueness
from nfcheck.generator import GenConfig, gen
from nfcheck.stratify import stratify

f = normalize("exists m in R . exists p, q (y in p in q in m and 0 in q)")
trace = type_acyclic(f)
print(pretty(f))
print("roots:", trace.roots)
for v in sorted(trace.paths):
    print(f"  {v}: path {trace.paths[v]} -> raw type {trace.raw[v]}")
print("canonical:", trace.assignment.to_json())
print("unique paths verified:", verify_uniqueness(build_graph(f)))

# any root gives the same canonical types, and they match the solver
for seed in range(5):
    g = gen(GenConfig(seed=seed, num_vars=7, num_atoms=5, mode="acyclic"))
    a = type_acyclic(g).assignment
    b = type_acyclic(g, choose_root=lambda comp: comp[-1]).assignment
    assert a == b == stratify(g)
    print(f"seed {seed}: {pretty(g)}")
    print("   ", a.to_json())

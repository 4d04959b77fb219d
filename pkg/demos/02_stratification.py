"""Stratification: types when they exist, a refuting closed walk when not."""
from nfcheck import check_assignment, check_certificate, normalize, pretty
from nfcheck.stratify import TypeAssignment, stratify

examples = [
    "x in y and y in z and w in z and x in w",  # stratified but cyclic
    "x in y and y in x",
    "x in x",
    "exists u (u in x and u in y and x = y)",
    "x in y and y in z and x in z",
]
for text in examples:
    f = normalize(text)
    result = stratify(f)
    print(pretty(f))
    if isinstance(result, TypeAssignment):
        assert check_assignment(f, result)
        print("  types:", result.to_json())
    else:
        assert check_certificate(f, result)
        walk = ", ".join(f"{i}{'+' if d == 'forward' else '-'}" for i, d in result.closed_walk)
        print(f"  no types: closed walk [{walk}] has net weight {result.net_weight}")

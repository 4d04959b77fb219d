"""The bundled definitions, checked one by one."""
from nfcheck.corpus import load_corpus, verify_all
from nfcheck.syntax import pretty

entries = load_corpus()
short = min(entries, key=lambda e: len(pretty(e.formula)))
print(f"{len(entries)} entries; the shortest is {short.name}: {{{short.target} | {pretty(short.formula)}}}")
print()
report = verify_all()
print(report.table())
for v in report.verdicts:
    if not v.acyclic_merged:
        print(f"{v.name}: cyclic while the occurrences of 0 are one vertex, acyclic once split")

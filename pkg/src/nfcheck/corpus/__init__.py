"""The bundled corpus of set definitions and its mechanical verification.

Each ``.nf`` file in this directory is one comprehension instance
``{target | formula}`` whose previously defined sets appear as parameters.
:func:`verify_all` checks that every entry is well formed, acyclic under
both deciders, stratified, and typable along unique paths.

A ``split:`` header names parameters (in practice the empty set ``0``)
whose occurrences are analysed as independent parameters.  This is sound
because the comprehension scheme quantifies over parameters, so the copies
may afterwards be instantiated to the same set.  The verdict with the
occurrences merged is reported alongside as ``acyclic_merged``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Union

from ..depgraph import CycleWitness, build_graph, find_cycle, is_acyclic_chain
from ..pathtyper import type_acyclic
from ..stratify import TypeAssignment, UnsatCertificate, check_assignment, check_certificate, stratify
from ..syntax import (ComprehensionInstance, Formula, FormulaSyntaxError, InstanceError,
                      check_instance, normalize, parse_nf, split_occurrences)

__all__ = ["CorpusError", "CorpusEntry", "EntryVerdict", "CorpusReport", "bundled_dir",
           "load_entry", "load_corpus", "verify_entry", "verify_all"]


class CorpusError(ValueError):
    pass


def bundled_dir() -> Path:
    return Path(__file__).resolve().parent


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    file: Path
    target: str
    parameters: tuple
    formula: Formula  # desugared and rectified
    split: tuple = ()
    expected: dict = field(default_factory=lambda: {"acyclic": True, "stratified": True})

    def instance(self) -> ComprehensionInstance:
        return ComprehensionInstance(self.target, self.formula, self.parameters)

    def analysed(self) -> Formula:
        return split_occurrences(self.formula, self.split)


def load_entry(path: Union[str, Path]) -> CorpusEntry:
    path = Path(path)
    try:
        nf = parse_nf(path.read_text(encoding="utf-8"))
    except FormulaSyntaxError as exc:
        raise CorpusError(f"{path}:{exc.line}:{exc.column}: {exc.message}") from exc
    if nf.target is None:
        raise CorpusError(f"{path}: missing 'target:' header")
    return CorpusEntry(
        name=path.stem,
        file=path,
        target=nf.target,
        parameters=nf.params,
        formula=normalize(nf.formula),
        split=nf.split,
    )


def load_corpus(directory: Union[str, Path, None] = None) -> list:
    """Entries of every ``.nf`` file in ``directory``, in file-name order."""
    directory = bundled_dir() if directory is None else Path(directory)
    if not directory.is_dir():
        raise CorpusError(f"{directory}: not a directory")
    return [load_entry(p) for p in sorted(directory.glob("*.nf"))]


@dataclass(frozen=True)
class EntryVerdict:
    name: str
    admissible: bool
    acyclic: bool
    acyclic_chain: bool
    acyclic_merged: bool
    cycle: Optional[CycleWitness]
    stratified: bool
    types: Optional[TypeAssignment]
    certificate: Optional[UnsatCertificate]
    path_types: Optional[TypeAssignment]
    expected: dict
    problems: tuple = ()

    @property
    def ok(self) -> bool:
        return (not self.problems
                and self.acyclic == self.expected["acyclic"]
                and self.stratified == self.expected["stratified"])

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "ok": self.ok,
            "admissible": self.admissible,
            "acyclic": self.acyclic,
            "acyclic_chain": self.acyclic_chain,
            "acyclic_merged": self.acyclic_merged,
            "cycle": None if self.cycle is None else self.cycle.to_json(),
            "stratified": self.stratified,
            "types": None if self.types is None else self.types.to_json(),
            "certificate": None if self.certificate is None else self.certificate.to_json(),
            "path_types": None if self.path_types is None else self.path_types.to_json(),
            "expected": dict(sorted(self.expected.items())),
            "problems": list(self.problems),
        }


def verify_entry(e: CorpusEntry) -> EntryVerdict:
    problems = []
    try:
        check_instance(e.instance())
        admissible = True
    except InstanceError as exc:
        admissible = False
        problems.append(str(exc))

    f = e.analysed()
    witness = find_cycle(build_graph(f))
    acyclic = witness is None
    chain = is_acyclic_chain(f)
    if chain != acyclic:
        problems.append("graph and chain deciders disagree")
    merged = find_cycle(build_graph(e.formula)) is None

    result = stratify(f)
    types = result if isinstance(result, TypeAssignment) else None
    cert = result if isinstance(result, UnsatCertificate) else None
    if types is not None and not check_assignment(f, types):
        problems.append("type assignment fails its own check")
    if cert is not None and not check_certificate(f, cert):
        problems.append("certificate fails its own check")

    path_types = None
    if acyclic:
        path_types = type_acyclic(f).assignment
        if path_types != types:
            problems.append("path typing and solver disagree")

    return EntryVerdict(
        name=e.name, admissible=admissible, acyclic=acyclic, acyclic_chain=chain,
        acyclic_merged=merged, cycle=witness, stratified=types is not None, types=types,
        certificate=cert, path_types=path_types, expected=dict(e.expected),
        problems=tuple(problems),
    )


@dataclass(frozen=True)
class CorpusReport:
    verdicts: tuple

    @property
    def passed(self) -> bool:
        return all(v.ok for v in self.verdicts)

    @property
    def failures(self) -> list:
        return [v.name for v in self.verdicts if not v.ok]

    def to_json(self) -> dict:
        return {"passed": self.passed, "entries": [v.to_json() for v in self.verdicts]}

    def table(self, color: bool = False) -> str:
        def cell(flag: bool, width: int) -> str:
            text = f"{'yes' if flag else 'NO':<{width}}"
            if color:
                return f"\033[{32 if flag else 31}m{text}\033[0m"
            return text

        width = max([len(v.name) for v in self.verdicts] + [5])
        rows = [f"{'entry':<{width}}  acyclic  chain  merged  stratified  status"]
        for v in self.verdicts:
            status = "ok" if v.ok else "FAIL: " + "; ".join(v.problems or ("verdict differs from expected",))
            rows.append(
                f"{v.name:<{width}}  {cell(v.acyclic, 7)}  {cell(v.acyclic_chain, 5)}  "
                f"{'yes' if v.acyclic_merged else 'no':<6}  {cell(v.stratified, 10)}  {status}"
            )
        summary = "all pass" if self.passed else "FAILED: " + ", ".join(self.failures)
        rows.append(f"{len(self.verdicts)} entries, {summary}")
        return "\n".join(rows) + "\n"


def verify_all(directory: Union[str, Path, None] = None) -> CorpusReport:
    return CorpusReport(tuple(verify_entry(e) for e in load_corpus(directory)))

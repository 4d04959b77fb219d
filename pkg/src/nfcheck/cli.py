"""Command-line front end: ``nfcheck <subcommand> ...``.

Exit status: 0 for a positive verdict, 1 for a negative one (cyclic,
unstratified, false, corpus failure), 2 for usage, parse or I/O errors.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import depgraph, modelcheck, pathtyper, stratify as strat
from .corpus import CorpusError, bundled_dir, verify_all
from .generator import MODES, ConfigError, GenConfig, gen
from .syntax import (FormulaSyntaxError, desugar, free_vars, normalize, parse_nf, pretty,
                     split_occurrences)

EXIT_OK, EXIT_NEGATIVE, EXIT_ERROR = 0, 1, 2


class UsageError(Exception):
    pass


def _color_enabled(stream) -> bool:
    mode = os.environ.get("NFCHECK_COLOR", "auto").lower()
    if mode == "always":
        return True
    if mode == "never":
        return False
    return hasattr(stream, "isatty") and stream.isatty()


def _emit_json(data, out) -> None:
    out.write(json.dumps(data, indent=2, sort_keys=True) + "\n")


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"{path}: {exc.strerror}") from exc


def _load(path: str):
    """(nf file, analysed formula) for a formula file."""
    text = _read(path)
    try:
        nf = parse_nf(text)
    except FormulaSyntaxError as exc:
        raise UsageError(f"{path}:{exc.line}:{exc.column}: {exc.message}") from exc
    return nf, split_occurrences(normalize(nf.formula), nf.split)


def _write_dot(dest: str, text: str, out) -> None:
    if dest == "-":
        out.write(text)
    else:
        Path(dest).write_text(text, encoding="utf-8")


def _verdict_word(flag: bool, yes: str, no: str, color: bool) -> str:
    word = yes if flag else no
    if color:
        return f"\033[{32 if flag else 31}m{word}\033[0m"
    return word


# ---------------------------------------------------------------- subcommands

def cmd_parse(args, out) -> int:
    nf, f = _load(args.file)
    data = {
        "formula": pretty(nf.formula),
        "desugared": pretty(desugar(nf.formula)),
        "normalized": pretty(f),
        "free_vars": sorted(free_vars(f)),
        "target": nf.target,
        "params": list(nf.params),
    }
    if args.json:
        _emit_json(data, out)
    else:
        out.write(data["normalized"] + "\n")
    return EXIT_OK


def cmd_graph(args, out) -> int:
    _, f = _load(args.file)
    g = depgraph.build_graph(f)
    if args.dot:
        _write_dot(args.dot, depgraph.to_dot(g), out)
    if args.json:
        _emit_json(depgraph.graph_json(g), out)
    elif args.dot != "-":
        out.write(f"{len(g.vertices)} vertices, {len(g.edges)} edges, "
                  f"{len(depgraph.components(g))} components\n")
        for e in g.edges:
            op = "in" if e.kind.value == "in" else "="
            out.write(f"  [{e.occurrence_id}] {e.u} {op} {e.v}\n")
    return EXIT_OK


def cmd_acyclic(args, out) -> int:
    _, f = _load(args.file)
    g = depgraph.build_graph(f)
    verdict = depgraph.verdict_json(g)
    if args.method in ("chain", "both"):
        chain = depgraph.is_acyclic_chain(f)
        if args.method == "chain":
            verdict = {"acyclic": chain, "cycle": verdict["cycle"] if not chain else None}
        elif chain != verdict["acyclic"]:
            raise UsageError(f"internal error: graph verdict {verdict['acyclic']} but chain verdict {chain}")
    if args.json:
        _emit_json(verdict, out)
    else:
        color = _color_enabled(out)
        out.write(_verdict_word(verdict["acyclic"], "acyclic", "cyclic", color) + "\n")
        if verdict["cycle"]:
            out.write("cycle: " + " - ".join(verdict["cycle"]["vertices"])
                      + f"  (atoms {', '.join(map(str, verdict['cycle']['edges']))})\n")
    return EXIT_OK if verdict["acyclic"] else EXIT_NEGATIVE


def cmd_stratify(args, out) -> int:
    _, f = _load(args.file)
    result = strat.stratify(f)
    verdict = strat.verdict_json(result)
    if args.json:
        _emit_json(verdict, out)
    else:
        color = _color_enabled(out)
        out.write(_verdict_word(verdict["stratified"], "stratified", "not stratified", color) + "\n")
        if verdict["types"] is not None:
            for v, t in verdict["types"].items():
                out.write(f"  {v}: {t}\n")
        else:
            c = verdict["certificate"]
            steps = ", ".join(f"{i}{'+' if d == 'forward' else '-'}" for i, d in c["closed_walk"])
            out.write(f"closed walk {steps} has net weight {c['net_weight']}\n")
    return EXIT_OK if verdict["stratified"] else EXIT_NEGATIVE


def cmd_typepath(args, out) -> int:
    _, f = _load(args.file)
    try:
        trace = pathtyper.type_acyclic(f)
    except pathtyper.NotAcyclicError as exc:
        if args.json:
            _emit_json({"roots": None, "types": None, "cycle": exc.witness.to_json()}, out)
        else:
            out.write(str(exc) + "\n")
        return EXIT_NEGATIVE
    if args.dot:
        _write_dot(args.dot, depgraph.to_dot(depgraph.build_graph(f), labels=trace.assignment.types), out)
    if args.json:
        _emit_json(trace.to_json(), out)
    elif args.dot != "-":
        for v, t in trace.assignment.to_json().items():
            out.write(f"  {v}: {t}\n")
    return EXIT_OK


def cmd_corpus(args, out) -> int:
    directory = args.dir if args.dir else bundled_dir()
    try:
        report = verify_all(directory)
    except CorpusError as exc:
        raise UsageError(str(exc)) from exc
    if args.json:
        _emit_json(report.to_json(), out)
    else:
        out.write(report.table(color=_color_enabled(out)))
    return EXIT_OK if report.passed else EXIT_NEGATIVE


def cmd_eval(args, out) -> int:
    nf, _ = _load(args.file)
    f = desugar(nf.formula)
    try:
        u = modelcheck.load_universe(args.universe)
    except (OSError, ValueError) as exc:
        raise UsageError(f"{args.universe}: {exc}") from exc
    env = {}
    for b in args.bind:
        name, sep, elem = b.partition("=")
        if not sep or not name or not elem:
            raise UsageError(f"--bind expects var=element, got {b!r}")
        env[name] = elem
    for v in free_vars(f):
        if v not in env and v in u.labels:
            env[v] = v
    try:
        value = modelcheck.evaluate(f, u, env)
    except (modelcheck.UnboundVariableError, modelcheck.UniverseError) as exc:
        raise UsageError(str(exc.args[0] if exc.args else exc)) from exc
    if args.json:
        _emit_json({"value": value, "env": dict(sorted(env.items()))}, out)
    else:
        out.write(("true" if value else "false") + "\n")
    return EXIT_OK if value else EXIT_NEGATIVE


def cmd_gen(args, out) -> int:
    atoms = args.atoms
    if atoms is None:
        atoms = max(1, args.size - 1) if args.mode == "acyclic" else args.size
    items = []
    for seed in range(args.seed, args.seed + args.count):
        cfg = GenConfig(seed=seed, num_vars=args.size, num_atoms=atoms, mode=args.mode)
        try:
            f = gen(cfg)
        except ConfigError as exc:
            raise UsageError(str(exc)) from exc
        items.append({"seed": seed, "mode": args.mode, "formula": pretty(f)})
    if args.out:
        target = Path(args.out)
        target.mkdir(parents=True, exist_ok=True)
        for it in items:
            (target / f"gen_{args.mode}_{it['seed']}.nf").write_text(
                f"# generated: mode={it['mode']} seed={it['seed']} vars={args.size} atoms={atoms}\n"
                f"{it['formula']}\n", encoding="utf-8")
    if args.json:
        _emit_json(items, out)
    elif not args.out:
        for it in items:
            out.write(f"# generated: mode={it['mode']} seed={it['seed']}\n{it['formula']}\n")
    return EXIT_OK


# ---------------------------------------------------------------- argument parsing

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="nfcheck", description="Acyclicity and stratification of set-theoretic formulas.")
    sub = p.add_subparsers(dest="command", metavar="SUBCOMMAND")
    sub.required = True

    def formula_cmd(name, fn, help_text):
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("file", help="formula file (.nf) or - for standard input")
        sp.add_argument("--json", action="store_true", help="machine-readable output")
        sp.set_defaults(func=fn)
        return sp

    formula_cmd("parse", cmd_parse, "parse and normalize a formula")
    sp = formula_cmd("graph", cmd_graph, "variable multigraph of a formula")
    sp.add_argument("--dot", metavar="PATH", help="write DOT to PATH (- for standard output)")
    sp = formula_cmd("acyclic", cmd_acyclic, "decide acyclicity")
    sp.add_argument("--method", choices=("graph", "chain", "both"), default="graph")
    formula_cmd("stratify", cmd_stratify, "decide stratification")
    sp = formula_cmd("typepath", cmd_typepath, "type an acyclic formula along unique paths")
    sp.add_argument("--dot", metavar="PATH", help="write type-annotated DOT to PATH")
    sp = formula_cmd("eval", cmd_eval, "evaluate a formula in a finite universe")
    sp.add_argument("--universe", metavar="PATH", required=True, help="universe file (.u.json)")
    sp.add_argument("--bind", metavar="VAR=ELEM", action="append", default=[],
                    help="bind a free variable to an element id or label (repeatable)")

    sp = sub.add_parser("corpus", help="verify the definition corpus")
    sp.add_argument("action", nargs="?", choices=("verify",), default="verify")
    sp.add_argument("dir", nargs="?", help="corpus directory (default: bundled corpus)")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_corpus)

    sp = sub.add_parser("gen", help="generate random formulas")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--size", type=int, default=4, help="number of variables")
    sp.add_argument("--atoms", type=int, default=None, help="number of atoms")
    sp.add_argument("--count", type=int, default=1)
    sp.add_argument("--mode", choices=MODES, default="arbitrary")
    sp.add_argument("--out", metavar="DIR", help="write one .nf file per formula into DIR")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_gen)
    return p


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code else EXIT_OK
    try:
        return args.func(args, out)
    except UsageError as exc:
        err.write(f"nfcheck: {exc}\n")
        return EXIT_ERROR


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()

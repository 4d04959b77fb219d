import shutil
import time

import pytest

from nfcheck.corpus import CorpusError, bundled_dir, load_corpus, load_entry, verify_all
from nfcheck.depgraph import build_graph
from nfcheck.modelcheck import pair_body
from nfcheck.stratify import TypeAssignment
from nfcheck.syntax import desugar, normalize, parse, pretty, rectify

SPLIT_ENTRIES = {"11_converses", "12_singleton_images", "13_composition_pairs", "14_relative_product"}


def test_bundled_corpus_loads():
    entries = load_corpus()
    assert len(entries) == 20
    assert [e.name for e in entries] == sorted(e.name for e in entries)
    assert {e.name for e in entries if e.split} == SPLIT_ENTRIES


def test_bundled_corpus_passes_quickly():
    t0 = time.perf_counter()
    report = verify_all()
    assert time.perf_counter() - t0 < 1.0
    assert report.passed, report.table()
    assert all(v.admissible and v.acyclic and v.acyclic_chain and v.stratified for v in report.verdicts)


def test_merged_verdicts():
    merged = {v.name: v.acyclic_merged for v in verify_all().verdicts}
    assert {n for n, ok in merged.items() if not ok} == SPLIT_ENTRIES


def test_diagonal_and_singletons():
    verdicts = {v.name: v for v in verify_all().verdicts}
    assert verdicts["10_diagonal"].ok
    assert verdicts["05_singletons"].types == TypeAssignment({"y": 0, "a": 0})


def test_wiener_entry_is_pair_body():
    e = next(e for e in load_corpus() if e.name == "06_wiener_pair")
    assert e.formula == rectify(desugar(pair_body()))


def test_inclusion_variables():
    e = next(e for e in load_corpus() if e.name == "20_inclusion")
    assert build_graph(e.analysed()).vertices == frozenset(
        {"t", "x", "y", "w", "m", "k", "u", "Pair", "i", "s", "r", "v", "j", "p", "q", "0"})


def test_round_trip():
    for e in load_corpus():
        assert normalize(parse(pretty(e.formula))) == e.formula


def test_empty_and_missing_dirs(tmp_path):
    assert load_corpus(tmp_path) == []
    assert verify_all(tmp_path).passed
    with pytest.raises(CorpusError):
        load_corpus(tmp_path / "nope")


def test_missing_target(tmp_path):
    p = tmp_path / "bad.nf"
    p.write_text("params: a\ny in a\n")
    with pytest.raises(CorpusError, match="target"):
        load_entry(p)


def test_syntax_error_is_located(tmp_path):
    p = tmp_path / "bad.nf"
    p.write_text("target: y\ny in (a\n")
    with pytest.raises(CorpusError, match=r"bad\.nf:2:"):
        load_entry(p)


def test_corrupted_entry_is_named(tmp_path):
    for f in bundled_dir().glob("*.nf"):
        shutil.copy(f, tmp_path)
    victim = tmp_path / "05_singletons.nf"
    victim.write_text(victim.read_text().rstrip("\n") + " and y in y\n")
    report = verify_all(tmp_path)
    assert not report.passed
    assert report.failures == ["05_singletons"]
    assert "05_singletons" in report.table()
    bad = next(v for v in report.verdicts if v.name == "05_singletons")
    assert bad.certificate is not None and bad.cycle is not None


def test_report_json_shape():
    data = verify_all().to_json()
    assert data["passed"] is True and len(data["entries"]) == 20
    assert set(data["entries"][0]) >= {"name", "ok", "acyclic", "stratified", "types", "certificate"}

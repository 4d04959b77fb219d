import pytest

from nfcheck.depgraph import is_acyclic, is_acyclic_chain
from nfcheck.generator import ConfigError, GenConfig, SplitMix64, gen, gen_many, random_config
from nfcheck.stratify import TypeAssignment, stratify
from nfcheck.syntax import atoms, free_vars, normalize, variables


def test_splitmix_reference_values():
    # published reference outputs for seed 0
    r = SplitMix64(0)
    assert [r.next() for _ in range(3)] == [0xE220A8397B1DCDAF, 0x6E789E6AA1B965F4, 0x06C45D188009454F]


def test_splitmix_helpers():
    r = SplitMix64(7)
    xs = [r.below(5) for _ in range(500)]
    assert set(xs) == set(range(5))
    assert sorted(SplitMix64(3).shuffle(list(range(10)))) == list(range(10))
    with pytest.raises(ValueError):
        r.below(0)


def test_determinism():
    for mode in ("arbitrary", "acyclic", "stratified"):
        cfg = GenConfig(seed=42, num_vars=6, num_atoms=5, mode=mode)
        assert gen(cfg) == gen(cfg)
        assert gen_many(20, seed=3, mode=mode) == gen_many(20, seed=3, mode=mode)


def test_seeds_differ():
    assert len({repr(f) for f in gen_many(50)}) > 40


def test_shape():
    for seed in range(200):
        cfg = random_config(seed)
        f = gen(cfg)
        assert len(atoms(f)) == cfg.num_atoms
        assert variables(f) <= {f"v{i}" for i in range(cfg.num_vars)}
        assert normalize(f) == f


def test_acyclic_mode(acyclic_sample):
    assert all(is_acyclic(f) and is_acyclic_chain(f) for f in acyclic_sample)


def test_stratified_mode():
    for f in gen_many(500, mode="stratified"):
        assert isinstance(stratify(f), TypeAssignment)


def test_arbitrary_mode_reaches_both_verdicts(arbitrary_sample):
    acyc = [is_acyclic(f) for f in arbitrary_sample]
    strat = [isinstance(stratify(f), TypeAssignment) for f in arbitrary_sample]
    assert any(acyc) and not all(acyc)
    assert any(strat) and not all(strat)
    assert any(s and not a for a, s in zip(acyc, strat))


def test_some_variables_stay_free():
    assert any(free_vars(f) for f in gen_many(50))
    assert any(len(free_vars(f)) < len(variables(f)) for f in gen_many(50))


@pytest.mark.parametrize("kwargs", [
    {"seed": -1},
    {"mode": "cyclic"},
    {"num_vars": 0},
    {"num_atoms": 0},
    {"num_atoms": 17, "connective_depth": 4},
    {"mode": "acyclic", "num_vars": 3, "num_atoms": 3},
])
def test_config_errors(kwargs):
    with pytest.raises(ConfigError):
        gen(GenConfig(**kwargs))

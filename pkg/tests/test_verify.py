"""The named suite runner: registry, config validation, determinism."""

import pytest

from hardy import (
    ParameterError,
    RunConfig,
    SizeError,
    registry_ids,
    run_verification,
)


def test_registry_lists_eight_ids_sorted():
    ids = registry_ids()
    assert len(ids) == 8
    assert list(ids) == sorted(ids)
    assert "lemma-4.2" in ids
    assert "thm-5.4" in ids


def test_unknown_id_names_the_registry():
    with pytest.raises(ParameterError) as err:
        run_verification("nope")
    msg = str(err.value)
    for tid in registry_ids():
        assert tid in msg


def test_config_validation():
    with pytest.raises(SizeError):
        RunConfig(n_samples=100)
    with pytest.raises(SizeError):
        RunConfig(n_samples=2)
    with pytest.raises(ParameterError):
        RunConfig(tol_overrides={"x": -1.0})
    with pytest.raises(ParameterError):
        RunConfig(modulus=0)


def test_fast_suite_passes_and_reports():
    rep = run_verification("lemma-4.2", RunConfig(seed=1, modulus=3))
    assert rep.passed
    assert rep.theorem_id == "lemma-4.2"
    assert rep.wall_time > 0.0
    names = [c.name for c in rep.checks]
    assert "split_residual" in names
    d = rep.as_dict()
    assert d["wall_time"] is None
    assert all("pass" in c for c in d["checks"])


def test_reports_are_seed_deterministic():
    a = run_verification("lemma-4.2", RunConfig(seed=4, modulus=2))
    b = run_verification("lemma-4.2", RunConfig(seed=4, modulus=2))
    assert a.as_dict() == b.as_dict()
    c = run_verification("lemma-4.2", RunConfig(seed=5, modulus=2))
    assert [x.measured for x in a.checks] != [y.measured for y in c.checks]


def test_tol_override_can_fail_a_suite():
    cfg = RunConfig(seed=1, modulus=2,
                    tol_overrides={"split_residual": 1e-20})
    rep = run_verification("lemma-4.2", cfg)
    assert not rep.passed
    failed = [c for c in rep.checks if not c.passed]
    assert [c.name for c in failed] == ["split_residual"]
    assert failed[0].threshold == 1e-20

"""
Tests for option resolution, sweep parsing and artifact checks
"""

import sys
import os
sys.path.append(os.path.dirname(os.path.dirname(os.path.dirname(os.path.abspath(__file__)))))

import pytest

from robustvda.config import ConfigError, RunConfig
from robustvda.pipeline import (
    ABLATIONS,
    MissingArtifactError,
    OutputExistsError,
    cmd_eval,
    cmd_synth,
    load_attack_synonyms,
    resolve_train_config,
)
from textio import build_vocab, load_synonyms
from robustvda.sweep import parse_values, sweep_point


def test_resolve_defaults():
    """--vda on keeps lambda; --vda off forces it to zero"""
    cfg = RunConfig()
    on, name = resolve_train_config(cfg, "on")
    assert name == "vda" and on.lam == 1.0
    off, name = resolve_train_config(cfg, "off")
    assert name == "baseline" and off.lam == 0.0
    assert cfg.lam == 1.0
    print("✓ --vda on/off resolved")


def test_resolve_ablations():
    """Each ablation changes exactly its own keys"""
    cfg = RunConfig()
    for ablation, changes in ABLATIONS.items():
        resolved, name = resolve_train_config(cfg, "on", ablation)
        assert name == ablation
        for key in RunConfig.keys():
            attr = "lam" if key == "lambda" else key
            expected = changes.get(key, getattr(cfg, attr))
            assert getattr(resolved, attr) == expected, (ablation, key)
    print("✓ Ablations change only their keys")


def test_resolve_conflicts():
    """Contradictory flags and keys are config errors"""
    explicit_lambda = RunConfig.from_text("lambda = 0.5\n")
    with pytest.raises(ConfigError):
        resolve_train_config(explicit_lambda, "off")
    with pytest.raises(ConfigError):
        resolve_train_config(RunConfig(), "off", "cevda")
    with pytest.raises(ConfigError):
        resolve_train_config(RunConfig.from_text("lambda = 0\n"), "on")
    with pytest.raises(ConfigError):
        resolve_train_config(RunConfig.from_text("mode = mixture\n"), "on", "argmax")
    with pytest.raises(ConfigError):
        resolve_train_config(RunConfig(), "on", "dropout")
    with pytest.raises(ConfigError):
        resolve_train_config(RunConfig(), "maybe")

    # an explicit key that already agrees with the ablation is fine
    resolved, _ = resolve_train_config(RunConfig.from_text("sigma = 0\n"), "on", "vda-noeps")
    assert resolved.sigma == 0.0
    assert resolve_train_config(RunConfig.from_text("lambda = 0\n"), "off")[0].lam == 0.0
    print("✓ Conflicting options rejected")


def test_parse_values():
    """Sweep values are typed per parameter"""
    assert parse_values("sigma", "0.001, 0.01,0.1") == [0.001, 0.01, 0.1]
    assert parse_values("k", "1,2,4") == [1, 2, 4]
    assert parse_values("lambda", ["0.5"]) == [0.5]
    for param, values in (("k", "1.5"), ("sigma", ""), ("lr", "0.1"), ("lambda", "x")):
        with pytest.raises(ConfigError):
            parse_values(param, values)
    print("✓ Sweep values parsed")


def test_sweep_point_lambda_zero():
    """A lambda sweep may include 0, which trains without the regularizer"""
    cfg = RunConfig()
    assert sweep_point(cfg, "lambda", 0.0).lam == 0.0
    assert sweep_point(cfg, "lambda", 0.4).lam == 0.4
    point = sweep_point(cfg, "k", 3)
    assert point.k == 3 and point.lam == 1.0
    assert "k" in point.explicit
    with pytest.raises(ConfigError):
        sweep_point(RunConfig.from_text("lambda = 0\n"), "sigma", 0.1)
    print("✓ Sweep points resolved, lambda = 0 included")


def test_missing_artifacts(tmp_path):
    """Later stages name the stage to run first"""
    cfg = RunConfig(data_dir=str(tmp_path / "data"), out_dir=str(tmp_path / "runs"))
    with pytest.raises(MissingArtifactError, match="pretrain"):
        cmd_eval(cfg, "vda")
    print("✓ Missing artifacts reported")


def test_synth_refuses_overwrite(tmp_path):
    """A second synth needs force"""
    cfg = RunConfig(data_dir=str(tmp_path / "data"), train_size=6, dev_size=2, test_size=2)
    paths = cmd_synth(cfg)
    assert set(paths) == {"train", "dev", "test", "synonyms"}
    before = paths["train"].read_text(encoding="utf-8")
    with pytest.raises(OutputExistsError):
        cmd_synth(cfg)
    cmd_synth(cfg, force=True)
    assert paths["train"].read_text(encoding="utf-8") == before
    print("✓ synth refuses to overwrite without force")


def test_attack_synonyms_opt_in(tmp_path):
    """Default attacks use unrestricted MLM candidates even when synonyms.json exists"""
    cfg = RunConfig(data_dir=str(tmp_path / "data"), train_size=6, dev_size=2, test_size=2)
    paths = cmd_synth(cfg)
    table = load_synonyms(paths["synonyms"])
    vocab = build_vocab([" ".join(table)])

    assert load_attack_synonyms(cfg, vocab) is None
    assert cfg.attack_config(load_attack_synonyms(cfg, vocab)).synonyms is None

    restricted = load_attack_synonyms(cfg.copy(use_synonyms=True), vocab)
    assert restricted
    assert all(vocab.id(word) in restricted for word, others in table.items() if others)
    print("✓ Synonym restriction is opt-in")


def run_all_tests():
    """Run all pipeline tests"""
    import tempfile
    from pathlib import Path

    print("Testing pipeline...")
    print("-" * 40)

    test_resolve_defaults()
    test_resolve_ablations()
    test_resolve_conflicts()
    test_parse_values()
    test_sweep_point_lambda_zero()
    with tempfile.TemporaryDirectory() as tmp:
        test_missing_artifacts(Path(tmp))
    with tempfile.TemporaryDirectory() as tmp:
        test_synth_refuses_overwrite(Path(tmp))
    with tempfile.TemporaryDirectory() as tmp:
        test_attack_synonyms_opt_in(Path(tmp))

    print("-" * 40)
    print("All pipeline tests passed! ✓")


if __name__ == "__main__":
    run_all_tests()

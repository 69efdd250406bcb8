import sys
import os
import json
from pathlib import Path

ROOT = Path(__file__).resolve().parents[2]
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))

import pytest

from robustvda.cli import build_parser, main


def _tiny(tmp_path):
    """Global options for a run small enough for a unit test"""
    settings = {
        "data_dir": tmp_path / "data", "out_dir": tmp_path / "runs",
        "train_size": 40, "dev_size": 8, "test_size": 8,
        "layers": 1, "hidden_dim": 8, "heads": 2, "ffn_dim": 16, "max_len": 12,
        "pretrain_steps": 5, "pretrain_batch_size": 8,
        "epochs": 1, "batch_size": 8, "lr": 0.01,
        "sample_size": 3, "epoch_attack_sample": 2, "top_k_candidates": 2,
    }
    args = []
    for key, value in settings.items():
        args += ["--set", f"{key}={value}"]
    return args


def test_parser_subcommands():
    parser = build_parser()
    args = parser.parse_args(["--set", "k=2", "train", "--vda", "off"])
    assert args.command == "train" and args.vda == "off" and args.overrides == ["k=2"]
    with pytest.raises(SystemExit):
        parser.parse_args(["train", "--ablation", "dropout"])


def test_errors_exit_one(tmp_path):
    base = ["--set", f"data_dir={tmp_path / 'data'}", "--set", f"out_dir={tmp_path / 'runs'}"]
    assert main(base + ["eval", "--name", "vda"]) == 1
    assert main(["--set", "sigmaa=0.1", "synth"]) == 1
    assert main(base + ["--set", "lambda=0", "train"]) == 1


def test_config_file(tmp_path):
    config = tmp_path / "run.cfg"
    config.write_text(f"data_dir = {tmp_path / 'data'}\ntrain_size = 6\ndev_size = 2\ntest_size = 2\n")
    assert main(["--config", str(config), "synth"]) == 0
    assert main(["--config", str(config), "synth"]) == 1
    assert main(["--config", str(config), "synth", "--force"]) == 0
    assert (tmp_path / "data" / "config.resolved").exists()


def test_end_to_end(tmp_path):
    opts = _tiny(tmp_path)
    runs = tmp_path / "runs"
    assert main(opts + ["synth"]) == 0
    assert main(opts + ["pretrain"]) == 0
    assert (runs / "mlm.ckpt").exists() and (runs / "vocab.txt").exists()

    assert (runs / "mlm.config.resolved").exists()

    assert main(opts + ["train", "--vda", "off"]) == 0
    assert "lambda = 0.0" in (runs / "baseline.config.resolved").read_text()
    assert main(opts + ["train"]) == 0
    assert "lambda = 1.0" in (runs / "vda.config.resolved").read_text()
    lines = (runs / "vda.metrics.jsonl").read_text().splitlines()
    assert len(lines) == 2
    assert json.loads(lines[0])["dev_attack_accuracy"] is not None
    assert json.loads(lines[1])["summary"] is True

    assert main(opts + ["eval", "--name", "baseline", "--split", "dev"]) == 0
    export = tmp_path / "adv.jsonl"
    assert main(opts + ["attack", "--name", "vda", "--export", str(export)]) == 0
    report = json.loads((runs / "vda.report.json").read_text())
    assert report["sample_size"] == 3
    assert 0.0 <= report["att_acc"] <= report["ori_acc"] <= 1.0
    assert export.exists()

    assert main(opts + ["train", "--extra-data", str(export), "--name", "vda-adv"]) == 0
    assert (runs / "vda-adv.ckpt").exists()

    assert main(opts + ["sweep", "--param", "k", "--values", "1,2"]) == 0
    rows = (runs / "sweep-k.csv").read_text().splitlines()
    assert rows[0].startswith("param,value,ori_acc,att_acc")
    assert len(rows) == 3
    assert "k = 2" in (runs / "sweep-k-2.config.resolved").read_text()
    assert (runs / "sweep-k.config.resolved").exists()

    assert main(opts + ["ablate"]) == 0
    ablation = json.loads((runs / "ablation.json").read_text())
    assert set(ablation) == {"vda", "vda-noeps", "cevda", "argmax", "sample"}
    assert "train_size = 40" in (runs / "ablation.config.resolved").read_text()
    assert "mode = argmax" in (runs / "argmax.config.resolved").read_text()
    # Later runs leave earlier echoes alone.
    assert "lambda = 0.0" in (runs / "baseline.config.resolved").read_text()
    assert (runs / "vda.report.config.resolved").exists()


def test_cli_execution(tmp_path):
    from subprocess import run, PIPE
    env = dict(**os.environ, PYTHONPATH=str(Path(__file__).resolve().parents[2]))
    result = run(
        [sys.executable, "-m", "robustvda.cli", "--help"],
        stdout=PIPE,
        text=True,
        env=env,
    )
    assert result.returncode == 0
    assert "lambda = 1.0" in result.stdout
    assert "sweep" in result.stdout

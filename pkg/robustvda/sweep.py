"""
Sweep - One full train + attack per value of sigma, k or lambda, collected as CSV

A lambda value of 0 runs the plain baseline at that point.

CSV columns:
    param, value, ori_acc, att_acc, avg_queries, avg_perturb_pct,
    best_epoch, best_dev_accuracy, test_accuracy
"""

import csv
import logging
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Union

from .config import ConfigError, RunConfig
from .pipeline import resolve_train_config, train_and_attack

logger = logging.getLogger(__name__)

SWEEP_PARAMS = ("sigma", "k", "lambda")
CSV_COLUMNS = (
    "param", "value", "ori_acc", "att_acc", "avg_queries", "avg_perturb_pct",
    "best_epoch", "best_dev_accuracy", "test_accuracy",
)


def parse_values(param: str, text: Union[str, Sequence]) -> List:
    """Comma-separated values typed for ``param`` (ints for k, floats otherwise)"""
    if param not in SWEEP_PARAMS:
        raise ConfigError(f"cannot sweep {param!r}; choose from {list(SWEEP_PARAMS)}")
    items = [v.strip() for v in text.split(",")] if isinstance(text, str) else list(text)
    items = [v for v in items if v != ""]
    if not items:
        raise ConfigError("sweep needs at least one value")
    cast = int if param == "k" else float
    try:
        return [cast(v) for v in items]
    except ValueError as exc:
        raise ConfigError(f"bad sweep value for {param}: {exc}") from None


def sweep_point(cfg: RunConfig, param: str, value) -> RunConfig:
    """Config for one sweep value; lambda = 0 trains the plain baseline"""
    point = cfg.copy()
    point.set(param, str(value))
    vda = "off" if param == "lambda" and value == 0 else "on"
    resolved, _ = resolve_train_config(point, vda)
    return resolved


def cmd_sweep(cfg: RunConfig, param: str, values, output: Optional[Union[str, Path]] = None) -> Path:
    """
    Train and attack once per value at the run seed; write one CSV row per value

    Returns:
        Path of the CSV (default ``<out_dir>/sweep-<param>.csv``)
    """
    values = parse_values(param, values)
    output = Path(output) if output is not None else cfg.out_path / f"sweep-{param}.csv"
    output.parent.mkdir(parents=True, exist_ok=True)

    rows: List[Dict] = []
    for value in values:
        resolved = sweep_point(cfg, param, value)
        name = f"sweep-{param}-{value}"
        logger.info("sweep %s = %s", param, value)
        outcome = train_and_attack(resolved, name)
        report, summary = outcome["report"], outcome["summary"]
        rows.append({
            "param": param,
            "value": value,
            "ori_acc": report["ori_acc"],
            "att_acc": report["att_acc"],
            "avg_queries": report["avg_queries"],
            "avg_perturb_pct": report["avg_perturb_pct"],
            "best_epoch": summary["best_epoch"],
            "best_dev_accuracy": summary["best_dev_accuracy"],
            "test_accuracy": summary["test_accuracy"],
        })
        print(f"{param} = {value}: ori acc {report['ori_acc']:.4f}, att acc {report['att_acc']:.4f}")

    with open(output, "w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=CSV_COLUMNS)
        writer.writeheader()
        writer.writerows(rows)
    cfg.write_resolved(output.parent, output.stem)
    print(f"sweep table: {output}")
    return output

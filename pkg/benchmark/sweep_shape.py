"""
Sweep shape: attack accuracy over sigma and over k should peak inside the
range or level off, rather than keep rising at an edge
"""

import csv
import time
import sys
import os
from typing import List, Sequence

sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from benchmark_runner import ExperimentRunner, configure_logging, save_report
from robustvda.sweep import cmd_sweep
from vda.config import SIGMA_SWEEP

SIGMA_VALUES = SIGMA_SWEEP + (1e-1, 4e-1)
K_VALUES = (1, 2, 3, 4)
PLATEAU_TOLERANCE = 0.01
SEED = 0


def interior_max_or_plateau(values: Sequence[float], tolerance: float = PLATEAU_TOLERANCE) -> bool:
    """True when the maximum is interior, or an edge maximum is matched by its neighbour"""
    best = max(values)
    peak = values.index(best)
    if 0 < peak < len(values) - 1:
        return True
    neighbour = values[1] if peak == 0 else values[-2]
    return best - neighbour <= tolerance


def read_column(path, column: str) -> List[float]:
    with open(path, newline="", encoding="utf-8") as fh:
        return [float(row[column]) for row in csv.DictReader(fh)]


def main():
    """Run the sigma and k sweeps and check each curve's shape"""
    configure_logging()
    runner = ExperimentRunner()
    cfg = runner.seed_config(SEED)
    runner.prepare(cfg)

    print("Sweep shape check")
    print("=" * 50)
    start_time = time.time()
    report = ["Sweep shape check", "=" * 50]
    for param, values in (("sigma", SIGMA_VALUES), ("k", K_VALUES)):
        path = cmd_sweep(cfg, param, list(values))
        att = read_column(path, "att_acc")
        ok = interior_max_or_plateau(att)
        report.append(f"{param}: " + ", ".join(f"{v}->{a:.4f}" for v, a in zip(values, att)))
        report.append(f"  interior maximum or plateau: {'PASS' if ok else 'FAIL'}  ({path})")

    report.append("")
    report.append(f"Total benchmark time: {time.time() - start_time:.1f}s")
    print("\n".join(report))
    save_report(report, "sweep_shape.txt")


if __name__ == "__main__":
    main()

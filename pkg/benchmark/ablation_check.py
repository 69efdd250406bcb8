"""
Ablation harness: full VDA and every ablation train and attack to completion
with finite losses and comparable reports
"""

import json
import time
import sys
import os

sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from benchmark_runner import ExperimentRunner, all_finite, configure_logging, save_report
from robustvda.pipeline import cmd_ablate

SEED = 0
REPORT_KEYS = {"ori_acc", "att_acc", "avg_queries", "avg_perturb_pct", "sample_size"}


def metric_losses(path):
    """Every train_loss, L_c and L_reg recorded in a metrics log"""
    values = []
    for line in path.read_text(encoding="utf-8").splitlines():
        record = json.loads(line)
        if not record.get("summary"):
            values += [record["train_loss"], record["L_c"], record["L_reg"]]
    return values


def main():
    """Run every variant on one seed and check the reports"""
    configure_logging()
    runner = ExperimentRunner()
    cfg = runner.seed_config(SEED)
    runner.prepare(cfg)

    print("Ablation check")
    print("=" * 50)
    start_time = time.time()
    outcomes = cmd_ablate(cfg)

    report = ["Ablation check", "=" * 50]
    all_ok = True
    for name, outcome in outcomes.items():
        losses = metric_losses(cfg.out_path / f"{name}.metrics.jsonl")
        finite = all_finite(losses)
        complete = REPORT_KEYS <= set(outcome["report"])
        all_ok = all_ok and finite and complete
        r = outcome["report"]
        report.append(f"{name:<10} ori {r['ori_acc']:.4f}  att {r['att_acc']:.4f}  "
                      f"queries {r['avg_queries']:.1f}  perturb {r['avg_perturb_pct']:.1f}%  "
                      f"finite losses: {finite}")

    report.append("")
    report.append(f"All variants complete with finite losses: {'PASS' if all_ok else 'FAIL'}")
    report.append(f"Total benchmark time: {time.time() - start_time:.1f}s")
    print("\n".join(report))
    save_report(report, "ablation_check.txt")


if __name__ == "__main__":
    main()

"""
Direction check: does VDA raise attack accuracy without costing clean accuracy?

Over five seeds on the default synthetic corpus (8k/1k/1k, 2-layer d=64):
  (a) the baseline reaches >= 0.95 test accuracy within 3 epochs in < 5 min
  (b) median VDA attack accuracy >= median baseline attack accuracy + 0.03,
      with a median clean-accuracy drop <= 0.01
If (b) misses the margin at default settings, a (sigma, lambda) grid on the
first seed looks for a pair that meets it.
"""

import time
import sys
import os
from typing import List

sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from benchmark_runner import SEEDS, ExperimentRunner, RunOutcome, configure_logging, median_of, save_report
from trainer.config import LAMBDA_SWEEP
from vda.config import SIGMA_SWEEP

BASELINE_MIN_ACC = 0.95
BASELINE_MAX_SECONDS = 300.0
MARGIN = 0.03
MAX_CLEAN_DROP = 0.01


def margin_met(baseline: List[RunOutcome], vda: List[RunOutcome]) -> bool:
    gain = median_of(vda, "att_acc") - median_of(baseline, "att_acc")
    drop = median_of(baseline, "test_accuracy") - median_of(vda, "test_accuracy")
    return gain >= MARGIN and drop <= MAX_CLEAN_DROP


def grid_search(runner: ExperimentRunner, baseline: RunOutcome) -> List[str]:
    """(sigma, lambda) pairs on one seed, compared with that seed's baseline"""
    lines = ["", f"(sigma, lambda) grid on seed {baseline.seed}:"]
    for sigma in SIGMA_SWEEP:
        for lam in LAMBDA_SWEEP:
            cfg = runner.seed_config(baseline.seed, sigma=sigma, **{"lambda": lam})
            outcome = runner.run(cfg, name=f"grid-s{sigma}-l{lam}")
            gain = outcome.att_acc - baseline.att_acc
            drop = baseline.test_accuracy - outcome.test_accuracy
            ok = gain >= MARGIN and drop <= MAX_CLEAN_DROP
            lines.append(f"  sigma={sigma:<6} lambda={lam:<5} att {outcome.att_acc:.4f} "
                         f"(+{gain:.4f}) clean drop {drop:.4f} {'MEETS' if ok else ''}")
    return lines


def main():
    """Run baseline and VDA on every seed and compare medians"""
    configure_logging()
    runner = ExperimentRunner()
    print("Direction check: baseline vs VDA")
    print("=" * 50)

    start_time = time.time()
    baseline, vda = [], []
    for seed in SEEDS:
        cfg = runner.seed_config(seed)
        baseline.append(runner.run(cfg, vda="off"))
        vda.append(runner.run(cfg, vda="on"))

    report = ["Direction check", "=" * 50]
    report += [o.row() for o in runner.outcomes]
    report.append("")

    fastest_ok = [o for o in baseline if o.test_accuracy >= BASELINE_MIN_ACC and o.time_taken < BASELINE_MAX_SECONDS]
    report.append(f"(a) baseline >= {BASELINE_MIN_ACC} test acc in < {BASELINE_MAX_SECONDS:.0f}s: "
                  f"{len(fastest_ok)}/{len(baseline)} seeds")

    report.append(f"median attack accuracy: baseline {median_of(baseline, 'att_acc'):.4f}, "
                  f"VDA {median_of(vda, 'att_acc'):.4f}")
    report.append(f"median test accuracy:   baseline {median_of(baseline, 'test_accuracy'):.4f}, "
                  f"VDA {median_of(vda, 'test_accuracy'):.4f}")
    met = margin_met(baseline, vda)
    report.append(f"(b) +{MARGIN} attack accuracy with <= {MAX_CLEAN_DROP} clean drop: "
                  f"{'PASS' if met else 'not met at defaults'}")
    if not met:
        report += grid_search(runner, baseline[0])

    report.append("")
    report.append(f"Total benchmark time: {time.time() - start_time:.1f}s")
    print()
    print("\n".join(report))
    save_report(report, "direction_check.txt")


if __name__ == "__main__":
    main()

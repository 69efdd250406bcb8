"""
MLM pilot: masked-token pretraining sanity over five seeds

Checks that dev masked-token loss falls from its step-0 value, that the
unmasked argmax recovers the input token for >= 60% of dev positions, and
reports how often the input token ranks in its row's top 5.
"""

import time
import sys
import os

import numpy as np

sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from benchmark_runner import SEEDS, ExperimentRunner, configure_logging, save_report
from model import (
    PILOT_RECOVERY_THRESHOLD,
    Encoder,
    mlm_loss,
    mlm_token_recovery,
    original_token_ranks,
    pilot_passes,
)
from robustvda.pipeline import load_mlm, load_split, load_vocab, seed_stream

TOP_RANK = 5


def main():
    """Pretrain one MLM per seed and measure it on the dev split"""
    configure_logging()
    runner = ExperimentRunner()
    print("MLM pretraining pilot")
    print("=" * 50)

    start_time = time.time()
    report = ["MLM pretraining pilot", "=" * 50]
    passed = 0
    for seed in SEEDS:
        cfg = runner.seed_config(seed)
        runner.prepare(cfg)
        vocab = load_vocab(cfg)
        dev_set = load_split(cfg, vocab, "dev")
        initial = Encoder(cfg.model_config(len(vocab)), seed_stream(cfg, 0))
        trained = load_mlm(cfg, vocab)

        loss_before = mlm_loss(initial, dev_set, seed=seed)
        loss_after = mlm_loss(trained, dev_set, seed=seed)
        recovery = mlm_token_recovery(trained, dev_set)
        top = float(np.mean(original_token_ranks(trained, dev_set) < TOP_RANK))
        ok = pilot_passes(loss_before, loss_after, recovery)
        passed += ok
        report.append(f"seed {seed}: dev loss {loss_before:.4f} -> {loss_after:.4f}  "
                      f"recovery {recovery:.4f}  top-{TOP_RANK} {top:.4f}  {'PASS' if ok else 'FAIL'}")

    report.append("")
    report.append(f"{passed}/{len(SEEDS)} seeds meet loss decrease and recovery >= {PILOT_RECOVERY_THRESHOLD}")
    report.append(f"Total benchmark time: {time.time() - start_time:.1f}s")
    print("\n".join(report))
    save_report(report, "mlm_pilot.txt")


if __name__ == "__main__":
    main()

"""
Benchmark suite for robustvda

Long-running experiment drivers that sit outside the unit tests:
- ExperimentRunner: seeded corpora, pretrained MLMs and train + attack runs
- direction_check, sweep_shape, ablation_check, mlm_pilot: one script per check
"""

from .benchmark_runner import ExperimentRunner, RunOutcome

__all__ = [
    'ExperimentRunner',
    'RunOutcome',
]

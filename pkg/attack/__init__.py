"""
Attack: black-box greedy word substitution and robustness metrics
"""

from .victim import Victim
from .greedy import (
    AttackConfig,
    AttackResult,
    candidates,
    greedy_attack,
    perturbation_budget,
    synonym_ids,
    word_importance,
)
from .report import (
    RobustnessReport,
    evaluate_robustness,
    export_adversarial,
    sample_indices,
    summarize,
)

__all__ = [
    'Victim',
    'AttackConfig', 'AttackResult', 'candidates', 'greedy_attack', 'perturbation_budget',
    'synonym_ids', 'word_importance',
    'RobustnessReport', 'evaluate_robustness', 'export_adversarial', 'sample_indices', 'summarize',
]

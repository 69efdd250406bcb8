"""
Tests for the greedy word-substitution attack
Victims are hand-built probability functions so every query count is exact
"""

import sys
import os
sys.path.append(os.path.dirname(os.path.dirname(os.path.dirname(os.path.abspath(__file__)))))

import numpy as np
import pytest

from numerics.errors import ArgumentError
from numerics.rng import Rng
from model.config import ModelConfig
from model.encoder import Classifier, ClassifierHead, Encoder, predict_proba
from model.pretrain import FIRST_CONTENT_ID
from textio.encoding import EncodedExample
from textio.vocab import SPECIAL_TOKENS, Vocab
from attack.greedy import (
    AttackConfig,
    candidates,
    greedy_attack,
    perturbation_budget,
    synonym_ids,
    word_importance,
)
from attack.victim import Victim

CONFIG = ModelConfig(vocab_size=12, num_classes=2, layers=1, hidden_dim=8, heads=2,
                     ffn_dim=16, max_len=12, init_std=0.3)
F_MLM = Encoder(CONFIG, Rng(0))


def _single(words, label):
    ids = (2,) + tuple(words)
    return EncodedExample(ids, label, None, (1, len(ids)))


def constant_victim(probs):
    """Same class probabilities for every input"""
    return lambda sequences: np.tile(np.asarray(probs, dtype=np.float64), (len(sequences), 1))


def keyword_victim(keyword):
    """Class 1 with probability 0.9 while ``keyword`` is present, else 0.2"""
    def proba(sequences):
        p1 = np.array([0.9 if keyword in s else 0.2 for s in sequences])
        return np.stack([1 - p1, p1], axis=-1)
    return proba


def eroding_victim(original):
    """Gold (class 0) probability drops by 0.01 per changed token, never flipping"""
    def proba(sequences):
        changed = np.array([sum(a != b for a, b in zip(s, original)) for s in sequences])
        p0 = 0.9 - 0.01 * changed
        return np.stack([p0, 1 - p0], axis=-1)
    return proba


def flip_on_change_victim(original_set):
    """Correct (class 0) on unmodified inputs, wrong on anything else"""
    def proba(sequences):
        p0 = np.array([0.8 if tuple(s) in original_set else 0.3 for s in sequences])
        return np.stack([p0, 1 - p0], axis=-1)
    return proba


def test_victim_counts_queries():
    """Every queried sequence counts once, batched or not"""
    victim = Victim(constant_victim([0.6, 0.4]))
    victim.query([(2, 5), (2, 6), (2, 7)])
    victim.query_one((2, 8))
    assert victim.queries == 4
    assert list(victim.predict([(2, 5)])) == [0]
    assert victim.reset() == 5
    assert victim.queries == 0
    victim.query([])
    assert victim.queries == 0

    broken = Victim(lambda sequences: np.zeros(3))
    with pytest.raises(ArgumentError):
        broken.query([(2, 5)])
    print("✓ Victim query accounting")


def test_victim_wraps_classifier():
    """A Classifier victim returns predict_proba rows"""
    model = Classifier(F_MLM.clone(), ClassifierHead(CONFIG, Rng(1)))
    victim = Victim(model, batch_size=2)
    sequences = [(2, 5, 6), (2, 7), (2, 8, 9, 10)]
    assert np.allclose(victim.query(sequences), predict_proba(model, sequences))
    assert victim.queries == 3
    print("✓ Classifier victim")


def test_importance_constant_victim():
    """A constant victim gives zero importance everywhere; one query per attackable position"""
    victim = Victim(constant_victim([0.7, 0.3]))
    ranked = word_importance(victim, _single((5, 6, 7), 0), 0.7)
    assert ranked == [(1, 0.0), (2, 0.0), (3, 0.0)]
    assert victim.queries == 3
    assert word_importance(victim, _single((), 0), 0.7) == []
    assert victim.queries == 3
    print("✓ Constant victim importances")


def test_importance_keyword_first():
    """The position holding the decisive word ranks first"""
    victim = Victim(keyword_victim(9))
    ranked = word_importance(victim, _single((5, 6, 9, 7), 1), 0.9)
    assert ranked[0][0] == 3
    assert ranked[0][1] == pytest.approx(0.7)
    assert all(score == 0.0 for _, score in ranked[1:])
    print("✓ Keyword position ranked first")


def test_candidates():
    """MLM top-k skips specials and the original token; allowed ids restrict"""
    ids = [2, 5, 6, 7]
    picked = candidates(F_MLM, ids, 2, 4)
    assert len(picked) == 4
    assert all(t >= FIRST_CONTENT_ID and t != 6 for t in picked)
    assert len(set(picked)) == 4

    restricted = candidates(F_MLM, ids, 2, 4, allowed=[9, 11, 3])
    assert sorted(restricted) == [9, 11]
    assert candidates(F_MLM, ids, 2, 4, allowed=[6]) == []
    print("✓ Candidate filtering")


def test_already_wrong():
    """A misclassified example costs exactly one query"""
    victim = Victim(constant_victim([0.9, 0.1]))
    result = greedy_attack(victim, F_MLM, _single((5, 6, 7), 1), AttackConfig())
    assert not result.originally_correct
    assert not result.success
    assert result.queries == 1
    assert result.final_ids == (2, 5, 6, 7)
    print("✓ Already-wrong example skipped")


def test_query_count_closed_form():
    """No improvement anywhere: 1 + n importance queries + k per position"""
    victim = Victim(constant_victim([0.9, 0.1]))
    cfg = AttackConfig(top_k_candidates=3)
    example = _single((5, 6, 7, 8, 9), 0)
    result = greedy_attack(victim, F_MLM, example, cfg)
    assert result.originally_correct and not result.success
    assert result.queries == 1 + 5 + 5 * 3
    assert result.queries == victim.queries
    assert result.perturbed_positions == []
    print("✓ Query count matches the closed form")


def test_budget_and_percentage():
    """Two of ten words perturbed at a 20% budget gives 20.0%"""
    example = _single((5, 6, 7, 8, 9, 10, 11, 5, 6, 7), 0)
    victim = Victim(eroding_victim(example.ids))
    cfg = AttackConfig(top_k_candidates=2, max_perturb_frac=0.2)
    result = greedy_attack(victim, F_MLM, example, cfg)
    assert perturbation_budget(10, 0.2) == 2
    assert not result.success
    assert len(result.perturbed_positions) == 2
    assert result.perturbed_pct == 20.0
    assert result.queries == 1 + 10 + 2 * 2
    assert sum(a != b for a, b in zip(result.final_ids, example.ids)) == 2
    print("✓ Perturbation budget respected")


def test_budget_minimum_one():
    """Tiny fractions still allow one substitution"""
    assert perturbation_budget(3, 0.1) == 1
    assert perturbation_budget(10, 0.4) == 4
    print("✓ Budget floor of one")


def test_successful_flip():
    """The first flipping candidate ends the attack at one perturbed word"""
    example = _single((5, 6, 7, 8), 0)
    victim = Victim(flip_on_change_victim({example.ids}))
    result = greedy_attack(victim, F_MLM, example, AttackConfig(top_k_candidates=3))
    assert result.success
    assert result.perturbed_positions == [1]
    assert result.perturbed_pct == 25.0
    assert result.queries == 1 + 4 + 3
    assert victim.predict([result.final_ids])[0] != example.label
    print("✓ Flip found and recorded")


def test_unattackable():
    """No attackable words: the example survives"""
    victim = Victim(constant_victim([0.9, 0.1]))
    example = EncodedExample((2, 3), 0, None, (1, 1))
    result = greedy_attack(victim, F_MLM, example, AttackConfig())
    assert result.originally_correct and not result.success
    assert result.queries == 1
    assert result.perturbed_pct == 0.0
    print("✓ Unattackable example survives")


def test_pair_perturbs_second_sentence_only():
    """For pairs only positions after [SEP] change"""
    ids = (2, 5, 6, 3, 7, 8, 9)
    example = EncodedExample(ids, 0, 4, (4, 7))
    victim = Victim(eroding_victim(ids))
    result = greedy_attack(victim, F_MLM, example, AttackConfig(top_k_candidates=2, max_perturb_frac=1.0))
    assert result.perturbed_positions
    assert all(pos >= 4 for pos in result.perturbed_positions)
    assert result.final_ids[:4] == ids[:4]
    print("✓ Pair attack touches the second sentence only")


def test_synonym_restriction():
    """Positions without synonyms are skipped; candidates come from the table"""
    example = _single((5, 6, 7), 0)
    victim = Victim(eroding_victim(example.ids))
    cfg = AttackConfig(top_k_candidates=4, max_perturb_frac=1.0, synonyms={6: (10, 11)})
    result = greedy_attack(victim, F_MLM, example, cfg)
    assert result.perturbed_positions == [2]
    assert result.final_ids[2] in (10, 11)
    assert result.queries == 1 + 3 + 2
    print("✓ Synonym table restricts substitutions")


def test_synonym_ids():
    """Word table mapped to ids; out-of-vocabulary words dropped"""
    vocab = Vocab(list(SPECIAL_TOKENS) + ["good", "great", "fine", "bad"])
    table = {"good": ["great", "fine", "superb"], "bad": ["awful"], "zany": ["odd"]}
    assert synonym_ids(vocab, table) == {5: (6, 7)}
    print("✓ synonym_ids maps words to ids")


def test_attack_config_validation():
    """Out-of-range settings are argument errors"""
    for bad in (AttackConfig(top_k_candidates=0), AttackConfig(max_perturb_frac=0.0),
                AttackConfig(max_perturb_frac=1.5), AttackConfig(sample_size=0)):
        with pytest.raises(ArgumentError):
            bad.validate()
    print("✓ AttackConfig validation")


def run_all_tests():
    """Run all greedy attack tests"""
    print("Testing greedy attack...")
    print("-" * 40)

    test_victim_counts_queries()
    test_victim_wraps_classifier()
    test_importance_constant_victim()
    test_importance_keyword_first()
    test_candidates()
    test_already_wrong()
    test_query_count_closed_form()
    test_budget_and_percentage()
    test_budget_minimum_one()
    test_successful_flip()
    test_unattackable()
    test_pair_perturbs_second_sentence_only()
    test_synonym_restriction()
    test_synonym_ids()
    test_attack_config_validation()

    print("-" * 40)
    print("All greedy attack tests passed! ✓")


if __name__ == "__main__":
    run_all_tests()

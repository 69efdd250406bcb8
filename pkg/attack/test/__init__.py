"""
Tests for the greedy substitution attack and robustness metrics
"""

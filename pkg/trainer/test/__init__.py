"""
Tests for regularized fine-tuning
"""

"""
Tests for the model package: encoder, heads, checkpoints, pretraining
"""

"""
Tests for the numerics package: tape, kernels, randomness, optimizer
"""

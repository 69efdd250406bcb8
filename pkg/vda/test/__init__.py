"""
Tests for virtual data augmentation
"""

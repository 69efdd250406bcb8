"""
Tests for the textio package: vocabulary, encoding, datasets, synthetic corpus
"""

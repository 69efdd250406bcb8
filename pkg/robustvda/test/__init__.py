"""
Tests for the run configuration, pipeline and command line
"""

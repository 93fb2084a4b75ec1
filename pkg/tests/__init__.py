"""Test suite for the parallel submodular greedy package."""

"""Tests for the kRSP solver."""

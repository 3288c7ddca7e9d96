"""Exact integer and rational matrix routines."""

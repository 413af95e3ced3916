"""Fuzzy fractional calculus and the generalized fuzzy Euler method."""

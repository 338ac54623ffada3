"""Digit streams, block decompositions, orbit sums and the verification suite."""

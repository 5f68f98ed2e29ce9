"""Numerical verification of Weyl sequences on radial graphs."""

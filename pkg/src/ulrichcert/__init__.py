"""Exact commutative algebra over F_p and a certification pipeline for
rank-3 Ulrich bundles on complete intersections
of two quadrics in P^5."""

__version__ = "0.1.0"

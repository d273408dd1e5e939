"""Exact checking of order and statistical order convergence for sequences of
order bounded operators between finite coordinate lattices."""

__version__ = "0.1.0"

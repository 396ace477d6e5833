"""Exact Fourier expansions of Poincare square series for even lattices.

The package computes weight 3/2 and weight 2 Poincare square series and
weight 3/2 Eisenstein series attached to the discriminant form of an even
lattice, entirely in exact arithmetic, and ships brute force oracles for
the class number and overpartition identities they encode.
"""

__version__ = "0.1.0"

"""Computable checks around length-product inequalities: GF(2) linear
algebra, multilinear invariants, cup-product forms on triangulated
manifolds, certified cycle bases on metric graphs, lattice successive
minima on flat tori, and pairing permutations for alternating forms."""

__version__ = "0.1.0"

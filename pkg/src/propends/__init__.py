"""Desk-scale invariants of pro-p groups: ends via transfer colimits,
Krull-Schmidt decompositions over group algebras, Kurosh subgroup data
for free products, and cyclic-group lattice classification."""

__version__ = "0.1.0"

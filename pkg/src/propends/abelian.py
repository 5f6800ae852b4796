"""Abelianizations of finite presentations.

The integral structure comes from the Smith normal form of the relator
exponent matrix; the mod-p quotient G/G^* gets canonical coordinates
from the RREF of the same matrix over F_p, so that two runs on the same
presentation always agree.
"""

from __future__ import annotations

import numpy as np

from .fplin import rref
from .intlin import IntMatrix, smith_normal_form
from .words import Presentation, Word, exponent_vector, relator_matrix


class AbelianizationData:
    """Invariant factors of G^ab and the mod-p quotient G/G^*.

    coords(word) returns the canonical F_p^d coordinates of a word's
    image in G/G^*; d = free rank + number of torsion entries divisible
    by p.
    """

    def __init__(self, pres: Presentation, p: int):
        self.pres = pres
        self.p = p
        rel = relator_matrix(pres)
        n = pres.n_gens
        snf = smith_normal_form(IntMatrix(rel.tolist()))
        nonzero = [d for d in snf.diag if d != 0]
        self.torsion = [d for d in nonzero if d != 1]
        self.free_rank = n - len(nonzero)
        # Canonical mod-p coordinates from RREF of the relator matrix.
        r, rk, pivots = rref(rel % p, p)
        self._rref = r[:rk]
        self._pivots = pivots
        self._free_cols = [c for c in range(n) if c not in pivots]
        self.d = len(self._free_cols)
        assert self.d == self.free_rank + sum(
            1 for t in self.torsion if t % p == 0
        )

    def exponent(self, w: Word) -> np.ndarray:
        return exponent_vector(w, self.pres.n_gens)

    def coords_of_vector(self, v: np.ndarray) -> np.ndarray:
        v = np.array(v, dtype=np.int64) % self.p
        for row, pcol in zip(self._rref, self._pivots):
            c = v[pcol]
            if c:
                v = (v - c * row) % self.p
        return v[self._free_cols]

    def coords(self, w: Word) -> np.ndarray:
        return self.coords_of_vector(self.exponent(w))

    def generator_coord_matrix(self) -> np.ndarray:
        """d x n_gens matrix whose column i is coords(generator i+1)."""
        n = self.pres.n_gens
        m = np.zeros((self.d, n), dtype=np.int64)
        for i in range(n):
            m[:, i] = self.coords((i + 1,))
        return m

    def first_coordinate_images(self) -> list:
        """Image of each generator under the first mod-p coordinate."""
        m = self.generator_coord_matrix()
        return [int(x) for x in m[0]]

    def invariant_factors(self) -> list:
        return list(self.torsion) + [0] * self.free_rank


def abelianization(pres: Presentation, p: int) -> AbelianizationData:
    return AbelianizationData(pres, p)

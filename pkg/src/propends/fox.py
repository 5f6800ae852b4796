"""First cohomology of a finitely presented group with coefficients in
a finite-dimensional module, via free differential calculus.

A 1-cocycle is determined by its values on generators; the relator
conditions are linearized by the derivative rules d(uv) = du + u dv and
d(x^-1) = -x^-1 dx, evaluated through the action matrices.
"""

from __future__ import annotations

import numpy as np

from .errors import ActionInvalid, PropEndsError
from .fplin import FpMatrix, inv, mat_mul, nullspace_basis, rank
from .words import Presentation


def _element_matrix(word, mats, inv_mats, p, dim):
    m = np.eye(dim, dtype=np.int64)
    for s in word:
        m = mat_mul(m, mats[s - 1] if s > 0 else inv_mats[-s - 1], p)
    return m


def fox_h1_dim(pres: Presentation, action, p: int) -> int:
    """dim H^1(G, M) where the module M is given by one matrix per
    generator of pres.

    Computed as dim Z1 - dim B1: Z1 from the relator conditions on
    cocycle values, B1 as the rank of the stacked matrices A_x - 1.
    """
    mats = [a.a % p if isinstance(a, FpMatrix) else np.array(a) % p for a in action]
    if len(mats) != pres.n_gens:
        raise PropEndsError("one action matrix per generator required")
    if not mats:
        return 0
    dim = mats[0].shape[0]
    for m in mats:
        if m.shape != (dim, dim):
            raise ActionInvalid("action matrices must be square of equal size")
    try:
        inv_mats = [inv(m, p) for m in mats]
    except PropEndsError as exc:
        raise ActionInvalid("action matrix is singular") from exc
    ident = np.eye(dim, dtype=np.int64)
    for r in pres.relators:
        if not np.array_equal(_element_matrix(r, mats, inv_mats, p, dim), ident):
            raise ActionInvalid("a relator does not act trivially")

    n = pres.n_gens
    if pres.relators:
        rows = []
        for r in pres.relators:
            coeff = [np.zeros((dim, dim), dtype=np.int64) for _ in range(n)]
            prefix = ident
            for s in r:
                if s > 0:
                    coeff[s - 1] = (coeff[s - 1] + prefix) % p
                    prefix = mat_mul(prefix, mats[s - 1], p)
                else:
                    prefix = mat_mul(prefix, inv_mats[-s - 1], p)
                    coeff[-s - 1] = (coeff[-s - 1] - prefix) % p
            rows.append(np.hstack(coeff))
        z1 = nullspace_basis(np.vstack(rows) % p, p).shape[0]
    else:
        z1 = n * dim
    b1 = rank(np.vstack([(m - ident) % p for m in mats]), p)
    return z1 - b1

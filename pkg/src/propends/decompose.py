"""Certified Krull-Schmidt decomposition of modules over F_p[G].

Certification hierarchy, strongest first: a one-dimensional fixed space
certifies indecomposability outright (over a p-group the socle equals
M^G and a simple socle forbids splitting); otherwise random
endomorphisms are split along coprime factors of their characteristic
polynomial (Fitting); if that fails and the endomorphism algebra is
small enough, all of it is searched for a nontrivial idempotent;
failing everything the verdict is flagged probabilistic.
"""

from __future__ import annotations

import itertools
import random

import numpy as np

from .errors import PropEndsError
from .fox import fox_h1_dim
from .finite_group import SubgroupEmbedding
from .fplin import FpMatrix, Subspace, inv, mat_mul, nullspace_basis, rank
from .fppoly import charpoly, factor_poly
from .gmodule import (
    GModule,
    augmentation_ideal,
    hom_space,
    invariants,
    is_isomorphic,
    regular_module,
    submodule,
)

SOCLE_SIMPLE = "SocleSimple"
EXHAUSTIVE = "ExhaustiveIdempotent"


def _probabilistic(trials):
    return f"Probabilistic({trials})"


class DecompositionReport:
    """Indecomposable summands with multiplicities and certificates.

    pieces: every indecomposable piece as (basis rows in the input
    module's coordinates, GModule, certificate).  summands groups the
    pieces up to isomorphism as (representative, multiplicity,
    certificates).  grouping_notes records any pair the isomorphism
    test could not settle.
    """

    def __init__(self, module, pieces, summands, grouping_notes):
        self.module = module
        self.pieces = pieces
        self.summands = summands
        self.grouping_notes = grouping_notes

    @property
    def certificates(self):
        return [cert for _, _, cert in self.pieces]

    def change_of_basis(self) -> FpMatrix:
        rows = np.vstack([b for b, _, _ in self.pieces])
        return FpMatrix(self.module.p, rows)

    def verify(self) -> bool:
        """Explicit witness check: the stacked bases are invertible and
        conjugation brings every action matrix to matching block form."""
        m = self.module
        v = self.change_of_basis()
        if v.rows != m.dim or not v.is_invertible():
            return False
        bt = v.a.T
        bt_inv = inv(bt, m.p)
        dims = [piece.dim for _, piece, _ in self.pieces]
        for i, a in enumerate(m.action):
            conj = mat_mul(mat_mul(bt_inv, a, m.p), bt, m.p)
            at = 0
            for (_, piece, _), d in zip(self.pieces, dims):
                block = conj[at : at + d, at : at + d]
                if not np.array_equal(block, piece.action[i]):
                    return False
                conj[at : at + d, at : at + d] = 0
                at += d
            if np.any(conj):
                return False
        return True


def _split_basis(mod, subspaces):
    """Row bases of the given subspaces, which must direct-sum to the
    whole space."""
    total = sum(s.dim for s in subspaces)
    if total != mod.dim:
        return None
    stacked = np.vstack([s.basis for s in subspaces])
    if rank(stacked, mod.p) != mod.dim:
        return None
    return [s.basis for s in subspaces]


def krull_schmidt(
    m: GModule,
    seed: int = 0,
    trials: int = 64,
    enum_budget: int = 2**22,
) -> DecompositionReport:
    p = m.p
    pieces = []
    rng = random.Random(seed ^ 0x1234567)

    def recurse(mod: GModule, basis: np.ndarray):
        if mod.dim == 0:
            return
        if invariants(mod).dim == 1:
            pieces.append((basis, mod, SOCLE_SIMPLE))
            return
        end = hom_space(mod, mod)
        for _ in range(trials):
            e = end.element([rng.randrange(p) for _ in range(end.dim)])
            em = FpMatrix(p, e)
            facs = factor_poly(charpoly(em), seed=seed)
            if len(facs) < 2:
                continue
            subs = [
                Subspace(
                    p,
                    mod.dim,
                    nullspace_basis(_matpow(f.eval_matrix(e), mod.dim, p), p),
                )
                for f, _ in facs
            ]
            split = _split_basis(mod, subs)
            if split is None:
                raise PropEndsError("Fitting kernels failed to span")
            for rows in split:
                recurse(
                    submodule(mod, rows),
                    (rows @ basis) % p,
                )
            return
        # No Fitting split found; look for an idempotent exhaustively.
        if p**end.dim <= enum_budget:
            ident = np.eye(mod.dim, dtype=np.int64)
            for coeffs in itertools.product(range(p), repeat=end.dim):
                e = end.element(coeffs)
                if not np.array_equal(mat_mul(e, e, p), e):
                    continue
                if not np.any(e) or np.array_equal(e, ident):
                    continue
                k0 = Subspace(p, mod.dim, nullspace_basis(e, p))
                k1 = Subspace(
                    p, mod.dim, nullspace_basis((e - ident) % p, p)
                )
                split = _split_basis(mod, [k0, k1])
                if split is None:
                    raise PropEndsError("idempotent kernels failed to span")
                for rows in split:
                    recurse(submodule(mod, rows), (rows @ basis) % p)
                return
            pieces.append((basis, mod, EXHAUSTIVE))
            return
        pieces.append((basis, mod, _probabilistic(trials)))

    recurse(m, np.eye(m.dim, dtype=np.int64))

    summands = []  # (representative, multiplicity, certificates)
    notes = []
    for basis, piece, cert in pieces:
        placed = False
        for entry in summands:
            res = is_isomorphic(
                entry[0], piece, seed=seed, trials=trials, enum_budget=enum_budget
            )
            if res.status == "yes":
                entry[1] += 1
                entry[2].append(cert)
                placed = True
                break
            if res.status == "unknown":
                notes.append(
                    f"could not settle isomorphism between summands of dim "
                    f"{entry[0].dim} and {piece.dim}"
                )
        if not placed:
            summands.append([piece, 1, [cert]])
    summands = [(mod, mult, certs) for mod, mult, certs in summands]
    return DecompositionReport(m, pieces, summands, notes)


def _matpow(a: np.ndarray, e: int, p: int) -> np.ndarray:
    out = np.eye(a.shape[0], dtype=np.int64)
    base = a % p
    while e:
        if e & 1:
            out = mat_mul(out, base, p)
        base = mat_mul(base, base, p)
        e >>= 1
    return out


def restriction_split_check(emb: SubgroupEmbedding, seed: int = 0) -> bool:
    """True iff the restriction of the parent's augmentation ideal to
    the subgroup decomposes as I_U plus (G:U)-1 free modules."""
    from .gmodule import restrict

    parent, sub = emb.parent, emb.sub
    res = restrict(emb, augmentation_ideal(parent))
    dec = krull_schmidt(res, seed=seed)
    want_free = emb.index - 1
    iu = augmentation_ideal(sub)
    lam = regular_module(sub)
    got_iu = 0
    got_free = 0
    for mod, mult, _ in dec.summands:
        if iu.dim and is_isomorphic(mod, iu, seed=seed).status == "yes":
            got_iu += mult
        elif is_isomorphic(mod, lam, seed=seed).status == "yes":
            got_free += mult
        else:
            return False
    if iu.dim == 0:
        got_iu = 1  # trivial subgroup: I_U = 0 contributes nothing
    return got_iu == 1 and got_free == want_free


def star_sequence_check(group) -> bool:
    """Finite shadow of the structural exact sequence for the regular
    module: dim Hom(I_G, F_p[G]) = |G| - 1 and H^1(G, F_p[G]) = 0."""
    lam = regular_module(group)
    ig = augmentation_ideal(group)
    if group.order == 1:
        return fox_h1_dim(group.pres, lam.action, group.p) == 0
    hs = hom_space(ig, lam)
    if hs.dim != group.order - 1:
        return False
    return fox_h1_dim(group.pres, lam.action, group.p) == 0

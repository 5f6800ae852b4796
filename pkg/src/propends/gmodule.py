"""Modules over the group algebra F_p[G] for a finite p-group G.

A module is one invertible action matrix per generator of the group's
presentation; relators are checked to act trivially.  Everything here
is exact linear algebra over F_p.
"""

from __future__ import annotations

import itertools
import random

import numpy as np

from .errors import ActionInvalid, GroupMismatch, PropEndsError
from .finite_group import FiniteGroup, SubgroupEmbedding
from .fplin import (
    FpMatrix,
    Subspace,
    inv,
    mat_mul,
    nullspace_basis,
    rank,
    rref,
    solve,
)


class GModule:
    """Finite-dimensional left module over F_p[G]."""

    def __init__(self, group: FiniteGroup, action, label: str = "", check=True):
        self.group = group
        self.p = group.p
        mats = []
        for a in action:
            arr = a.a % self.p if isinstance(a, FpMatrix) else (
                np.array(a, dtype=np.int64) % self.p
            )
            mats.append(arr)
        if len(mats) != group.pres.n_gens:
            raise ActionInvalid("one action matrix per group generator")
        self.dim = mats[0].shape[0] if mats else 0
        for m in mats:
            if m.shape != (self.dim, self.dim):
                raise ActionInvalid("action matrices must be square, same size")
        self.action = mats
        self.label = label
        self._inv_action = None
        self._elem_cache = {}
        if check:
            self._validate()

    def _validate(self):
        ident = np.eye(self.dim, dtype=np.int64)
        for m in self.action:
            if rank(m, self.p) != self.dim:
                raise ActionInvalid("action matrix is singular")
        for r in self.group.pres.relators:
            if not np.array_equal(self.word_action(r), ident):
                raise ActionInvalid("relator does not act trivially")

    def _inverse_mats(self):
        if self._inv_action is None:
            self._inv_action = [inv(m, self.p) for m in self.action]
        return self._inv_action

    def word_action(self, w) -> np.ndarray:
        out = np.eye(self.dim, dtype=np.int64)
        invs = self._inverse_mats() if any(s < 0 for s in w) else None
        for s in w:
            m = self.action[s - 1] if s > 0 else invs[-s - 1]
            out = mat_mul(out, m, self.p)
        return out

    def element_action(self, elem: int) -> np.ndarray:
        if elem not in self._elem_cache:
            self._elem_cache[elem] = self.word_action(
                self.group.element_words[elem]
            )
        return self._elem_cache[elem]

    def __repr__(self):
        tag = f" {self.label}" if self.label else ""
        return f"GModule(dim={self.dim}, |G|={self.group.order}{tag})"


def trivial_module(group: FiniteGroup, dim: int = 1) -> GModule:
    ident = np.eye(dim, dtype=np.int64)
    return GModule(group, [ident] * group.pres.n_gens, label="triv", check=False)


def regular_module(group: FiniteGroup) -> GModule:
    """F_p[G] with the left-multiplication permutation action."""
    n = group.order
    mats = []
    for ge in group.gen_elems:
        m = np.zeros((n, n), dtype=np.int64)
        for g in range(n):
            m[group.multiply(ge, g), g] = 1
        mats.append(m)
    return GModule(group, mats, label="reg")


def augmentation_ideal(group: FiniteGroup) -> GModule:
    """Kernel of the augmentation map, basis {g - 1 : g != 1}.

    The returned module carries .embedding, the |G| x (|G|-1) matrix of
    the inclusion into the regular module.
    """
    n = group.order
    p = group.p
    mats = []
    for ge in group.gen_elems:
        m = np.zeros((n - 1, n - 1), dtype=np.int64)
        for g in range(1, n):
            tg = group.multiply(ge, g)
            if tg != 0:
                m[tg - 1, g - 1] += 1
            if ge != 0:
                m[ge - 1, g - 1] -= 1
        mats.append(m % p)
    mod = GModule(group, mats, label="aug")
    emb = np.zeros((n, n - 1), dtype=np.int64)
    for g in range(1, n):
        emb[g, g - 1] = 1
        emb[0, g - 1] = (-1) % p
    mod.embedding = emb
    return mod


def direct_sum(*mods: GModule) -> GModule:
    if not mods:
        raise PropEndsError("empty direct sum")
    g = mods[0].group
    for m in mods:
        if m.group is not g and m.group.order != g.order:
            raise GroupMismatch("direct sum over different groups")
    mats = []
    for i in range(g.pres.n_gens):
        blocks = [m.action[i] for m in mods]
        total = sum(m.dim for m in mods)
        big = np.zeros((total, total), dtype=np.int64)
        at = 0
        for b in blocks:
            k = b.shape[0]
            big[at : at + k, at : at + k] = b
            at += k
        mats.append(big)
    label = "+".join(m.label or "?" for m in mods)
    return GModule(g, mats, label=label, check=False)


def invariants(m: GModule) -> Subspace:
    """The fixed subspace M^G (the socle, since G is a p-group)."""
    if m.dim == 0:
        return Subspace(m.p, 0, np.zeros((0, 0)))
    ident = np.eye(m.dim, dtype=np.int64)
    stacked = np.vstack([(a - ident) % m.p for a in m.action])
    return Subspace(m.p, m.dim, nullspace_basis(stacked, m.p))


def coinvariants_dim(m: GModule) -> int:
    """dim of M_G = M / I_G M."""
    if m.dim == 0:
        return 0
    ident = np.eye(m.dim, dtype=np.int64)
    spans = np.hstack([(a - ident) % m.p for a in m.action])
    return m.dim - rank(spans, m.p)


class HomSpace:
    """Basis of the space of module homomorphisms domain -> codomain."""

    def __init__(self, domain: GModule, codomain: GModule):
        if domain.group is not codomain.group and not (
            domain.group.order == codomain.group.order
            and np.array_equal(domain.group.mult, codomain.group.mult)
        ):
            raise GroupMismatch("Hom between modules over different groups")
        self.domain = domain
        self.codomain = codomain
        p = domain.p
        dm, dn = domain.dim, codomain.dim
        if dm == 0 or dn == 0:
            self.basis = []
            return
        eq = []
        im = np.eye(dm, dtype=np.int64)
        inn = np.eye(dn, dtype=np.int64)
        for am, an in zip(domain.action, codomain.action):
            eq.append((np.kron(an, im) - np.kron(inn, am.T)) % p)
        ker = nullspace_basis(np.vstack(eq), p)
        self.basis = [v.reshape(dn, dm) for v in ker]

    @property
    def dim(self) -> int:
        return len(self.basis)

    def element(self, coeffs) -> np.ndarray:
        p = self.domain.p
        out = np.zeros((self.codomain.dim, self.domain.dim), dtype=np.int64)
        for c, b in zip(coeffs, self.basis):
            if c:
                out += c * b
        return out % p


def hom_space(m: GModule, n: GModule) -> HomSpace:
    return HomSpace(m, n)


class IsoResult:
    """Three-valued isomorphism answer: yes / no / unknown."""

    __slots__ = ("status", "witness", "certificate")

    def __init__(self, status, witness=None, certificate=""):
        self.status = status
        self.witness = witness
        self.certificate = certificate

    def __bool__(self):
        return self.status == "yes"

    def __repr__(self):
        return f"IsoResult({self.status}, {self.certificate})"


def is_isomorphic(
    m: GModule,
    n: GModule,
    seed: int = 0,
    trials: int = 64,
    enum_budget: int = 2**22,
) -> IsoResult:
    if m.dim != n.dim:
        return IsoResult("no", certificate="dim-mismatch")
    if m.dim == 0:
        return IsoResult("yes", FpMatrix(m.p, np.zeros((0, 0))), "empty")
    hs = hom_space(m, n)
    if hs.dim == 0:
        return IsoResult("no", certificate="no-homomorphisms")
    p = m.p
    rng = random.Random(seed ^ 0x9E3779B9)
    for _ in range(trials):
        h = hs.element([rng.randrange(p) for _ in range(hs.dim)])
        if rank(h, p) == m.dim:
            return IsoResult("yes", FpMatrix(p, h), "random-search")
    if p**hs.dim <= enum_budget:
        for coeffs in itertools.product(range(p), repeat=hs.dim):
            h = hs.element(coeffs)
            if rank(h, p) == m.dim:
                return IsoResult("yes", FpMatrix(p, h), "exhaustive-search")
        return IsoResult("no", certificate="exhaustive-search")
    return IsoResult("unknown", certificate=f"trials={trials}")


def restrict(emb: SubgroupEmbedding, m: GModule) -> GModule:
    """Restriction of a parent-group module along an embedding."""
    if m.group is not emb.parent:
        raise GroupMismatch("module is not over the embedding's parent")
    mats = [m.word_action(w) for w in emb.gen_words]
    return GModule(emb.sub, mats, label=f"res({m.label})")


def induce(emb: SubgroupEmbedding, m: GModule) -> GModule:
    """Induction along an embedding, dim (G:H) * dim M, built blockwise
    over the fixed left-coset transversal."""
    if m.group is not emb.sub:
        raise GroupMismatch("module is not over the embedded subgroup")
    parent = emb.parent
    k, d = emb.index, m.dim
    mats = []
    for ge in parent.gen_elems:
        big = np.zeros((k * d, k * d), dtype=np.int64)
        for j, rep in enumerate(emb.coset_reps):
            z = parent.multiply(ge, rep)
            j2, h = emb.location[z]
            big[j2 * d : (j2 + 1) * d, j * d : (j + 1) * d] = m.element_action(h)
        mats.append(big)
    return GModule(parent, mats, label=f"ind({m.label})")


def submodule(m: GModule, basis_rows: np.ndarray, label: str = "") -> GModule:
    """Module structure on an invariant subspace, basis vectors as rows."""
    b = np.array(basis_rows, dtype=np.int64) % m.p
    k = b.shape[0]
    mats = []
    for a in m.action:
        c = solve(b.T, mat_mul(a, b.T, m.p), m.p)
        if c is None:
            raise PropEndsError("subspace is not invariant under the action")
        mats.append(c % m.p)
    return GModule(m.group, mats, label=label, check=False)


def j_ideal(emb: SubgroupEmbedding) -> GModule:
    """The left ideal of F_p[G] generated by the augmentation ideal of
    the embedded subgroup, as a module with .embedding into F_p[G]."""
    parent = emb.parent
    n, p = parent.order, parent.p
    gen_elems = [parent.evaluate(w) for w in emb.gen_words]
    vecs = []
    for g in range(n):
        for he in gen_elems:
            v = np.zeros(n, dtype=np.int64)
            v[parent.multiply(g, he)] += 1
            v[g] -= 1
            vecs.append(v % p)
    if not vecs:
        basis = np.zeros((0, n), dtype=np.int64)
    else:
        r, rk, _ = rref(np.vstack(vecs), p)
        basis = r[:rk]
    reg = regular_module(parent)
    mod = submodule(reg, basis, label="J")
    mod.embedding = basis.T.copy()
    return mod

"""Finite-index subgroups: Schreier transversals, Reidemeister-Schreier
presentations, word rewriting, and transfer maps.

The Schreier transversal is built breadth-first in a fixed signed-letter
order (all generators, then all inverses), and Schreier generators are
numbered lexicographically by (coset, generator).  Tietze reduction only
eliminates generators through length-1 and length-2 relators, always
removing the larger-indexed generator.  These choices make every derived
basis, presentation, and transfer matrix reproducible.
"""

from __future__ import annotations

import numpy as np

from .abelian import AbelianizationData
from .coset import CosetTable, todd_coxeter
from .errors import MembershipError, PropEndsError
from .fplin import FpMatrix, solve
from .words import Presentation, Word, free_reduce, winv, wmul


def _shift_down(w: Word, k: int) -> Word:
    return tuple(
        s - 1 if s > k else (s + 1 if s < -k else s) for s in w
    )


def _tietze_reduce(n_gens: int, relators):
    """Eliminate generators via length-1 and length-2 relators.

    Returns (n_final, relators_final, images, survivors) where images
    maps each original generator to a word in the final generators and
    survivors lists the original index of each final generator.
    """
    rels = []
    seen = set()
    for r in relators:
        r = free_reduce(r)
        if r and r not in seen:
            rels.append(r)
            seen.add(r)
    images = [(i + 1,) for i in range(n_gens)]
    survivors = list(range(n_gens))
    while True:
        pick = None
        for r in rels:
            if len(r) == 1:
                pick = (abs(r[0]), ())
                break
            if len(r) == 2 and abs(r[0]) != abs(r[1]):
                a, b = r
                if abs(a) < abs(b):
                    a, b = b, a  # relator is cyclic, rotate
                pick = (abs(a), (-b,) if a > 0 else (b,))
                break
        if pick is None:
            break
        k, rep = pick
        rep = _shift_down(rep, k)

        def update(w, k=k, rep=rep):
            # Replace generator k by rep (already in shifted indexing)
            # and renumber everything above k down by one.
            out = []
            for s in w:
                if abs(s) == k:
                    out.extend(rep if s > 0 else winv(rep))
                else:
                    out.extend(_shift_down((s,), k))
            return free_reduce(out)

        new_rels = []
        seen = set()
        for r in rels:
            r2 = update(r)
            if r2 and r2 not in seen:
                new_rels.append(r2)
                seen.add(r2)
        rels = new_rels
        images = [update(im) for im in images]
        survivors.pop(k - 1)
        n_gens -= 1
    return n_gens, rels, images, survivors


class SubgroupData:
    """A finite-index subgroup H of a presented group, with everything
    needed to compute in it: transversal, presentation, rewriting.

    gen_words[i] is the parent word for subgroup generator i+1;
    rewrite(w) expresses a parent word lying in H in those generators.
    """

    def __init__(self, parent: Presentation, table: CosetTable, label: str = ""):
        if table.pres is not parent and table.pres != parent:
            raise PropEndsError("table was built over a different presentation")
        self.parent = parent
        self.table = table
        self.index = table.n
        self._build_transversal()
        self._reidemeister_schreier(label)
        self._ab_cache = {}

    @classmethod
    def from_generators(cls, parent, gen_words, max_cosets=20000, label=""):
        return cls(parent, todd_coxeter(parent, gen_words, max_cosets), label)

    @classmethod
    def whole_group(cls, parent: Presentation):
        trivial = CosetTable(
            parent, (), np.zeros((1, 2 * parent.n_gens), dtype=np.int64)
        )
        return cls(parent, trivial, label=parent.label)

    def _build_transversal(self):
        n = self.index
        order = list(range(1, self.parent.n_gens + 1)) + list(
            range(-1, -self.parent.n_gens - 1, -1)
        )
        trans = [None] * n
        trans[0] = ()
        tree = set()
        queue = [0]
        while queue:
            c = queue.pop(0)
            for s in order:
                c2 = self.table.step(c, s)
                if trans[c2] is None:
                    trans[c2] = trans[c] + (s,)
                    tree.add((c, s) if s > 0 else (c2, -s))
                    queue.append(c2)
        if any(t is None for t in trans):
            raise PropEndsError("coset table is not connected")
        self.transversal = trans
        self._tree = tree

    def _reidemeister_schreier(self, label):
        n, ng = self.index, self.parent.n_gens
        sgen_index = {}
        sgen_words = []
        for c in range(n):
            for g in range(1, ng + 1):
                if (c, g) in self._tree:
                    continue
                w = wmul(
                    self.transversal[c],
                    (g,),
                    winv(self.transversal[self.table.step(c, g)]),
                )
                if not w:
                    continue
                sgen_index[(c, g)] = len(sgen_words)
                sgen_words.append(w)
        self._sgen_index = sgen_index
        raw_rels = []
        for c in range(n):
            for r in self.parent.relators:
                raw_rels.append(self._rewrite_raw(r, start=c))
        n_final, rels, images, survivors = _tietze_reduce(
            len(sgen_words), raw_rels
        )
        self._images = images
        self.pres = Presentation(n_final, tuple(rels), label)
        self.gen_words = [sgen_words[j] for j in survivors]
        for i, j in enumerate(survivors):
            if images[j] != (i + 1,):
                raise PropEndsError("surviving generator image is not length 1")

    def _rewrite_raw(self, w: Word, start: int = 0) -> Word:
        c = start
        out = []
        for s in w:
            if s > 0:
                idx = self._sgen_index.get((c, s))
                if idx is not None:
                    out.append(idx + 1)
                c = self.table.step(c, s)
            else:
                c2 = self.table.step(c, s)
                idx = self._sgen_index.get((c2, -s))
                if idx is not None:
                    out.append(-(idx + 1))
                c = c2
        if c != start:
            raise MembershipError("word does not lie in the subgroup")
        return free_reduce(out)

    def contains(self, w: Word) -> bool:
        return self.table.trace(w) == 0

    def rewrite(self, w: Word) -> Word:
        """Express a parent word lying in H in H's generators."""
        raw = self._rewrite_raw(free_reduce(w))
        out = []
        for s in raw:
            im = self._images[abs(s) - 1]
            out.extend(im if s > 0 else winv(im))
        return free_reduce(out)

    def abelianization(self, p: int) -> AbelianizationData:
        if p not in self._ab_cache:
            self._ab_cache[p] = AbelianizationData(self.pres, p)
        return self._ab_cache[p]

    def __repr__(self):
        return (
            f"SubgroupData(index={self.index}, "
            f"rank={self.pres.n_gens}, relators={len(self.pres.relators)})"
        )


def compose_tables(outer: SubgroupData, inner: CosetTable) -> CosetTable:
    """Coset table over the parent for W, where W is given by a table
    over outer's own presentation (so W <= outer <= parent).

    Coset (j, i) with j an inner coset and i an outer coset gets index
    j * outer.index + i.
    """
    if inner.pres != outer.pres:
        raise PropEndsError("inner table is not over the outer presentation")
    parent = outer.parent
    n_out, m = outer.index, inner.n
    rewrites = {}
    for i in range(n_out):
        for g in range(1, parent.n_gens + 1):
            for s in (g, -g):
                i2 = outer.table.step(i, s)
                u = wmul(
                    outer.transversal[i], (s,), winv(outer.transversal[i2])
                )
                rewrites[(i, s)] = (i2, outer.rewrite(u))
    table = np.zeros((m * n_out, 2 * parent.n_gens), dtype=np.int64)
    for j in range(m):
        for i in range(n_out):
            for g in range(1, parent.n_gens + 1):
                for s, col in ((g, 2 * (g - 1)), (-g, 2 * (g - 1) + 1)):
                    i2, hw = rewrites[(i, s)]
                    j2 = inner.trace(hw, start=j)
                    table[j * n_out + i, col] = j2 * n_out + i2
    out = CosetTable(parent, (), table)
    out.validate()
    return out


def transfer(u: SubgroupData, v: SubgroupData, p: int) -> FpMatrix:
    """Matrix of the transfer map U/U* -> V/V* on mod-p abelianizations,
    for V <= U inside a common parent group.

    Computed by the transversal-product formula: the image of a
    generator u is the product over coset representatives t of t u t'^-1,
    rewritten into V's generators and read off mod p.  The result is
    independent of the transversal.
    """
    if u.parent != v.parent:
        raise PropEndsError("subgroups live over different parents")
    for w in v.gen_words:
        if not u.contains(w):
            raise MembershipError("V is not contained in U")
    ab_u = u.abelianization(p)
    ab_v = v.abelianization(p)
    # Transversal of V in U: BFS over the U-orbit of coset 0 in V's table.
    reps = {0: ()}
    queue = [0]
    moves = list(u.gen_words) + [winv(w) for w in u.gen_words]
    while queue:
        c = queue.pop(0)
        for mv in moves:
            c2 = v.table.trace(mv, start=c)
            if c2 not in reps:
                reps[c2] = wmul(reps[c], mv)
                queue.append(c2)
    if v.index % u.index or len(reps) != v.index // u.index:
        raise PropEndsError("transversal size mismatch; is V <= U?")
    orbit = sorted(reps)
    cmat = np.zeros((ab_v.d, u.pres.n_gens), dtype=np.int64)
    for i, gw in enumerate(u.gen_words):
        total = np.zeros(ab_v.d, dtype=np.int64)
        for c in orbit:
            c2 = v.table.trace(gw, start=c)
            w = wmul(reps[c], gw, winv(reps[c2]))
            total += ab_v.coords(v.rewrite(w))
        cmat[:, i] = total % p
    gm = ab_u.generator_coord_matrix()
    tt = solve(gm.T % p, cmat.T % p, p)
    if tt is None:
        raise PropEndsError("transfer values do not factor through U/U*")
    t = tt.T % p
    if not np.array_equal((t @ gm) % p, cmat % p):
        raise PropEndsError("transfer matrix failed the consistency check")
    return FpMatrix(p, t)

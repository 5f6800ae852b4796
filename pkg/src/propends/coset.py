"""Coset enumeration.

todd_coxeter runs an HLT-style enumeration with a deterministic
definition order (cosets scanned in creation order, generators in index
order), so tables and everything derived from them are reproducible.
kernel_table builds the complete table of the kernel of an explicit map
to a finite abelian group directly, without enumeration.
"""

from __future__ import annotations

import numpy as np

from .errors import BudgetExceeded, PropEndsError
from .words import Presentation, Word, exponent_vector, free_reduce


def _col(s: int) -> int:
    return 2 * (s - 1) if s > 0 else 2 * (-s - 1) + 1


def _inv_col(c: int) -> int:
    return c ^ 1


class CosetTable:
    """Complete closed coset table for a finite-index subgroup.

    Row 0 is the subgroup itself.  Column 2i is generator i+1, column
    2i+1 its inverse.
    """

    __slots__ = ("pres", "sub_gens", "table", "n")

    def __init__(self, pres: Presentation, sub_gens, table: np.ndarray):
        self.pres = pres
        self.sub_gens = tuple(free_reduce(w) for w in sub_gens)
        self.table = np.array(table, dtype=np.int64)
        self.n = self.table.shape[0]
        if self.table.shape[1] != 2 * pres.n_gens:
            raise PropEndsError("coset table has wrong width")

    @property
    def index(self) -> int:
        return self.n

    def step(self, coset: int, letter: int) -> int:
        return int(self.table[coset, _col(letter)])

    def trace(self, word: Word, start: int = 0) -> int:
        c = start
        for s in word:
            c = int(self.table[c, _col(s)])
        return c

    def validate(self) -> None:
        n, pres = self.n, self.pres
        for g in range(pres.n_gens):
            fwd = self.table[:, 2 * g]
            bwd = self.table[:, 2 * g + 1]
            if sorted(fwd.tolist()) != list(range(n)):
                raise PropEndsError("table column is not a permutation")
            if any(bwd[fwd[c]] != c for c in range(n)):
                raise PropEndsError("inverse column mismatch")
        for r in pres.relators:
            for c in range(n):
                if self.trace(r, c) != c:
                    raise PropEndsError("relator does not close")
        for w in self.sub_gens:
            if self.trace(w) != 0:
                raise PropEndsError("subgroup generator does not fix coset 0")

    def permutation_action(self, p: int):
        """Left-action permutation matrices on the coset space, one per
        generator: sigma(x)(c) = c . x^-1 defines a left action."""
        from .fplin import FpMatrix

        mats = []
        for g in range(1, self.pres.n_gens + 1):
            m = np.zeros((self.n, self.n), dtype=np.int64)
            for c in range(self.n):
                m[self.step(c, -g), c] = 1
            mats.append(FpMatrix(p, m))
        return mats


class _Enumerator:
    def __init__(self, pres: Presentation, max_cosets: int):
        self.pres = pres
        self.cols = 2 * pres.n_gens
        self.max_cosets = max_cosets
        self.labels = [0]
        self.neighbors = [[None] * self.cols]
        self.alive_count = 1

    def find(self, c: int) -> int:
        root = c
        while self.labels[root] != root:
            root = self.labels[root]
        while self.labels[c] != root:
            self.labels[c], c = root, self.labels[c]
        return root

    def define(self, a: int, col: int) -> int:
        if len(self.labels) >= self.max_cosets:
            raise BudgetExceeded(
                f"coset budget {self.max_cosets} exhausted",
                defined=len(self.labels),
            )
        v = len(self.labels)
        self.labels.append(v)
        self.neighbors.append([None] * self.cols)
        self.neighbors[a][col] = v
        self.neighbors[v][_inv_col(col)] = a
        self.alive_count += 1
        return v

    def _join(self, a: int, col: int, b: int, stack) -> None:
        a, b = self.find(a), self.find(b)
        na = self.neighbors[a][col]
        if na is None:
            self.neighbors[a][col] = b
        elif self.find(na) != b:
            stack.append((na, b))
        nb = self.neighbors[b][_inv_col(col)]
        if nb is None:
            self.neighbors[b][_inv_col(col)] = a
        elif self.find(nb) != a:
            stack.append((nb, a))

    def unify(self, a: int, b: int) -> None:
        stack = [(a, b)]
        while stack:
            a, b = stack.pop()
            a, b = self.find(a), self.find(b)
            if a == b:
                continue
            if a > b:
                a, b = b, a
            self.labels[b] = a
            self.alive_count -= 1
            for col in range(self.cols):
                nb = self.neighbors[b][col]
                if nb is not None:
                    self.neighbors[b][col] = None
                    self._join(a, col, nb, stack)

    def scan_cycle(self, start: int, word: Word) -> bool:
        """Force the path of word from start to close back at start.
        Returns True if anything was defined or merged."""
        changed = False
        c = self.find(start)
        start = c
        for s in word[:-1]:
            col = _col(s)
            nxt = self.neighbors[c][col]
            if nxt is None:
                nxt = self.define(c, col)
                changed = True
            c = self.find(nxt)
            start = self.find(start)
        if word:
            col = _col(word[-1])
            nxt = self.neighbors[c][col]
            if nxt is None or self.find(nxt) != start:
                before = self.alive_count
            if nxt is None:
                stack = []
                self._join(c, col, start, stack)
                if stack:
                    self.unify(*stack.pop())
                changed = True
            elif self.find(nxt) != start:
                self.unify(nxt, start)
                changed = changed or self.alive_count != before
        return changed


def todd_coxeter(
    pres: Presentation, sub_gens, max_cosets: int = 20000
) -> CosetTable:
    """Enumerate cosets of <sub_gens> in the presented group.

    Raises BudgetExceeded if more than max_cosets cosets get defined
    before the table closes (the usual sign of infinite index).
    """
    if max_cosets < 1:
        raise PropEndsError("max_cosets must be >= 1")
    sub_gens = [free_reduce(w) for w in sub_gens]
    enum = _Enumerator(pres, max_cosets)
    while True:
        changed = False
        for w in sub_gens:
            if w:
                if enum.scan_cycle(enum.find(0), w):
                    changed = True
        v = 0
        while v < len(enum.labels):
            if enum.find(v) == v:
                for r in pres.relators:
                    if enum.scan_cycle(v, r):
                        changed = True
                    if enum.find(v) != v:
                        break
            v += 1
        v = 0
        while v < len(enum.labels):
            if enum.find(v) == v:
                for col in range(enum.cols):
                    if enum.neighbors[v][col] is None:
                        enum.define(v, col)
                        changed = True
            v += 1
        if not changed:
            break

    alive = [v for v in range(len(enum.labels)) if enum.find(v) == v]
    remap = {v: i for i, v in enumerate(alive)}
    table = np.zeros((len(alive), enum.cols), dtype=np.int64)
    for v in alive:
        for col in range(enum.cols):
            nb = enum.neighbors[v][col]
            if nb is None:
                raise PropEndsError("incomplete table after closure")
            table[remap[v], col] = remap[enum.find(nb)]
    out = CosetTable(pres, sub_gens, table)
    out.validate()
    return out


def kernel_table(pres: Presentation, images, moduli) -> CosetTable:
    """Coset table of the kernel of the map sending generator i to
    images[i] in the abelian group Z/moduli[0] x ... x Z/moduli[-1].

    Every relator must map to zero.  Cosets are the subgroup generated
    by the images, numbered in BFS order from the identity.
    """
    moduli = [int(m) for m in moduli]
    k = len(moduli)
    imgs = [tuple(int(x) % m for x, m in zip(img, moduli)) for img in images]
    if len(imgs) != pres.n_gens:
        raise PropEndsError("one image per generator required")
    for r in pres.relators:
        v = exponent_vector(r, pres.n_gens)
        total = [0] * k
        for g, e in enumerate(v):
            for j in range(k):
                total[j] = (total[j] + e * imgs[g][j]) % moduli[j]
        if any(total):
            raise PropEndsError("relator does not map to zero; kernel undefined")

    def add(a, b, sign=1):
        return tuple((x + sign * y) % m for x, y, m in zip(a, b, moduli))

    zero = tuple(0 for _ in range(k))
    order = {zero: 0}
    queue = [zero]
    while queue:
        cur = queue.pop(0)
        for img in imgs:
            nxt = add(cur, img)
            if nxt not in order:
                order[nxt] = len(order)
                queue.append(nxt)
    n = len(order)
    elems = sorted(order, key=order.get)
    table = np.zeros((n, 2 * pres.n_gens), dtype=np.int64)
    for t, c in order.items():
        for g in range(pres.n_gens):
            table[c, 2 * g] = order[add(t, imgs[g])]
            table[c, 2 * g + 1] = order[add(t, imgs[g], -1)]
    del elems
    out = CosetTable(pres, (), table)
    out.validate()
    return out

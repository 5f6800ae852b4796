"""Finite p-groups realized from presentations.

A group is materialized by enumerating cosets of the trivial subgroup:
elements are coset indices, the identity is 0, and each element carries
a word in the generators (its transversal word), so arbitrary elements
can act through per-generator data.
"""

from __future__ import annotations

import numpy as np

from .coset import todd_coxeter
from .errors import NonPGroup, PropEndsError, SubgroupInvalid
from .fplin import is_prime
from .words import Presentation, Word, free_reduce, substitute


def _is_p_power(n: int, p: int) -> bool:
    while n % p == 0:
        n //= p
    return n == 1


class FiniteGroup:
    """Finite p-group with explicit multiplication table."""

    def __init__(self, pres: Presentation, p: int, max_cosets: int = 8192):
        if not is_prime(p):
            raise PropEndsError(f"{p} is not prime")
        table = todd_coxeter(pres, [], max_cosets=max_cosets)
        self.pres = pres
        self.p = p
        self.order = table.n
        if not _is_p_power(self.order, p):
            raise NonPGroup(
                f"group of order {self.order} is not a {p}-group"
            )
        # Element words: breadth-first transversal in generator order.
        words = [None] * self.order
        words[0] = ()
        queue = [0]
        letters = list(range(1, pres.n_gens + 1)) + list(
            range(-1, -pres.n_gens - 1, -1)
        )
        while queue:
            c = queue.pop(0)
            for s in letters:
                c2 = table.step(c, s)
                if words[c2] is None:
                    words[c2] = words[c] + (s,)
                    queue.append(c2)
        self.element_words = [free_reduce(w) for w in words]
        n = self.order
        mult = np.zeros((n, n), dtype=np.int64)
        for b in range(n):
            w = self.element_words[b]
            for a in range(n):
                mult[a, b] = table.trace(w, start=a)
        self.mult = mult
        inv = np.zeros(n, dtype=np.int64)
        for a in range(n):
            zeros = np.nonzero(mult[a] == 0)[0]
            inv[a] = int(zeros[0])
        self.inv = inv
        self.gen_elems = [table.step(0, g) for g in range(1, pres.n_gens + 1)]
        self._table = table

    def multiply(self, a: int, b: int) -> int:
        return int(self.mult[a, b])

    def inverse(self, a: int) -> int:
        return int(self.inv[a])

    def evaluate(self, w: Word) -> int:
        """Element index of a word in the group's generators."""
        return self._table.trace(free_reduce(w), start=0)

    def __repr__(self):
        return f"FiniteGroup(order={self.order}, p={self.p})"


class SubgroupEmbedding:
    """A finite group H realized inside a parent finite group G via
    words for H's generators.

    elem_map[h] is the parent element of h; coset_reps lists left-coset
    representatives of the image, smallest parent index first.
    """

    def __init__(self, parent: FiniteGroup, sub: FiniteGroup, gen_words):
        if parent.p != sub.p:
            raise PropEndsError("primes differ")
        gen_words = [free_reduce(w) for w in gen_words]
        if len(gen_words) != sub.pres.n_gens:
            raise SubgroupInvalid("one parent word per subgroup generator")
        for r in sub.pres.relators:
            if parent.evaluate(substitute(r, gen_words)) != 0:
                raise SubgroupInvalid(
                    "subgroup relator does not hold in the parent"
                )
        elem_map = [
            parent.evaluate(substitute(w, gen_words))
            for w in sub.element_words
        ]
        if len(set(elem_map)) != sub.order:
            raise SubgroupInvalid(
                "generator words span a smaller group than claimed"
            )
        self.parent = parent
        self.sub = sub
        self.gen_words = gen_words
        self.elem_map = elem_map
        self.parent_to_sub = {g: h for h, g in enumerate(elem_map)}
        self.index = parent.order // sub.order
        reps = []
        location = [None] * parent.order  # element -> (coset idx, sub elem)
        for g in range(parent.order):
            if location[g] is None:
                j = len(reps)
                reps.append(g)
                for h, gh in enumerate(elem_map):
                    location[parent.multiply(g, gh)] = (j, h)
        if len(reps) != self.index:
            raise SubgroupInvalid("left cosets do not partition evenly")
        self.coset_reps = reps
        self.location = location

    @staticmethod
    def whole(parent: FiniteGroup) -> "SubgroupEmbedding":
        return SubgroupEmbedding(
            parent, parent, [(i + 1,) for i in range(parent.pres.n_gens)]
        )


def trivial_group(p: int) -> FiniteGroup:
    return FiniteGroup(Presentation(1, ((1,),), label="1"), p)


def cyclic_p_group(order: int, p: int) -> FiniteGroup:
    if not _is_p_power(order, p) or order < 1:
        raise NonPGroup(f"{order} is not a power of {p}")
    return FiniteGroup(
        Presentation(1, ((1,) * order,), label=f"cyclic({order})"), p
    )

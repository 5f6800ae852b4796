"""Constructor-algebra descriptors for pro-p groups.

A descriptor is an expression tree over Zp, free(r), cyclic(p^k),
finite presentations, free products, and direct products.  compile()
turns it into a discrete presentation whose finite-index data matches
the pro-p group for this constructor catalog.
"""

from __future__ import annotations

from .coset import todd_coxeter
from .errors import BudgetExceeded, NonPGroup, PropEndsError
from .fplin import is_prime
from .words import Presentation, commutator


def _shift_word(w, off):
    return tuple(s + off if s > 0 else s - off for s in w)


class ProPDescriptor:
    """Base class; p is fixed per descriptor tree."""

    def __init__(self, p: int):
        if not is_prime(p):
            raise PropEndsError(f"{p} is not prime")
        self.p = p

    def compile(self) -> Presentation:
        raise NotImplementedError

    def has_torsion(self) -> bool:
        raise NotImplementedError

    def text(self) -> str:
        raise NotImplementedError

    def __repr__(self):
        return f"{type(self).__name__}({self.text()}, p={self.p})"


class Zp(ProPDescriptor):
    def compile(self):
        return Presentation(1, (), label="Zp")

    def has_torsion(self):
        return False

    def text(self):
        return "Zp"


class FreeProP(ProPDescriptor):
    def __init__(self, p: int, rank: int):
        super().__init__(p)
        if rank < 1:
            raise PropEndsError("free rank must be >= 1")
        self.rank = rank

    def compile(self):
        return Presentation(self.rank, (), label=f"free({self.rank})")

    def has_torsion(self):
        return False

    def text(self):
        return f"free({self.rank})"


class CyclicP(ProPDescriptor):
    def __init__(self, p: int, order: int):
        super().__init__(p)
        n = order
        k = 0
        while n % p == 0:
            n //= p
            k += 1
        if n != 1 or k < 1:
            raise NonPGroup(f"cyclic({order}) is not a nontrivial {p}-group")
        self.order = order

    def compile(self):
        return Presentation(1, ((1,) * self.order,), label=f"cyclic({self.order})")

    def has_torsion(self):
        return True

    def text(self):
        return f"cyclic({self.order})"


class FinitePres(ProPDescriptor):
    """A finite p-group given by an explicit presentation; finiteness
    and p-power order are verified at construction."""

    def __init__(self, p: int, pres: Presentation, max_cosets: int = 8192):
        super().__init__(p)
        try:
            table = todd_coxeter(pres, [], max_cosets=max_cosets)
        except BudgetExceeded as exc:
            raise NonPGroup(
                "presentation did not close within budget; not verified finite"
            ) from exc
        order = table.n
        n = order
        while n % p == 0:
            n //= p
        if n != 1:
            raise NonPGroup(f"group of order {order} is not a {p}-group")
        self.pres = pres
        self.order = order

    def compile(self):
        return self.pres

    def has_torsion(self):
        return self.order > 1

    def text(self):
        return f"finite{{{self.pres.describe()}}}"


class FreeProduct(ProPDescriptor):
    def __init__(self, p: int, parts):
        super().__init__(p)
        parts = list(parts)
        if len(parts) < 2:
            raise PropEndsError("free product needs at least two factors")
        for d in parts:
            if d.p != p:
                raise PropEndsError("mixed primes in free product")
        self.parts = parts

    def compile(self):
        n = 0
        relators = []
        for d in self.parts:
            pr = d.compile()
            relators.extend(_shift_word(r, n) for r in pr.relators)
            n += pr.n_gens
        return Presentation(n, tuple(relators), label=self.text())

    def has_torsion(self):
        return any(d.has_torsion() for d in self.parts)

    def text(self):
        return " * ".join(
            d.text() if not isinstance(d, FreeProduct) else f"({d.text()})"
            for d in self.parts
        )


class DirectProduct(ProPDescriptor):
    def __init__(self, p: int, left: ProPDescriptor, right: ProPDescriptor):
        super().__init__(p)
        if left.p != p or right.p != p:
            raise PropEndsError("mixed primes in direct product")
        self.left = left
        self.right = right

    def compile(self):
        pl = self.left.compile()
        pr = self.right.compile()
        n = pl.n_gens + pr.n_gens
        relators = list(pl.relators)
        relators.extend(_shift_word(r, pl.n_gens) for r in pr.relators)
        for i in range(1, pl.n_gens + 1):
            for j in range(1, pr.n_gens + 1):
                relators.append(commutator((i,), (pl.n_gens + j,)))
        return Presentation(n, tuple(relators), label=self.text())

    def has_torsion(self):
        return self.left.has_torsion() or self.right.has_torsion()

    def text(self):
        return f"direct({self.left.text()}, {self.right.text()})"

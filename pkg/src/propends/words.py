"""Group words and finite presentations.

A word is a tuple of nonzero ints: +i is generator i (1-based), -i its
inverse.  Words are stored freely reduced; relators additionally
cyclically reduced.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import PropEndsError

Word = tuple  # tuple of nonzero signed ints


def free_reduce(letters) -> Word:
    out = []
    for s in letters:
        s = int(s)
        if s == 0:
            raise PropEndsError("0 is not a valid letter")
        if out and out[-1] == -s:
            out.pop()
        else:
            out.append(s)
    return tuple(out)


def wmul(*words) -> Word:
    letters = []
    for w in words:
        letters.extend(w)
    return free_reduce(letters)


def winv(w) -> Word:
    return tuple(-s for s in reversed(w))


def wpow(w, e: int) -> Word:
    if e < 0:
        return wpow(winv(w), -e)
    return free_reduce(list(w) * e)


def wconj(w, t) -> Word:
    """t w t^-1."""
    return wmul(t, w, winv(t))


def commutator(a, b) -> Word:
    return wmul(a, b, winv(a), winv(b))


def cyclic_reduce(w) -> Word:
    w = free_reduce(w)
    while len(w) >= 2 and w[0] == -w[-1]:
        w = w[1:-1]
    return w


def exponent_vector(w, n_gens: int) -> np.ndarray:
    v = np.zeros(n_gens, dtype=np.int64)
    for s in w:
        v[abs(s) - 1] += 1 if s > 0 else -1
    return v


def substitute(w, images) -> Word:
    """Replace generator i by images[i-1] (words in another alphabet)."""
    letters = []
    for s in w:
        img = images[abs(s) - 1]
        letters.extend(img if s > 0 else winv(img))
    return free_reduce(letters)


_LETTERS = "abcdefghijklmnopqrstuvwxyz"


def format_word(w, names=None) -> str:
    if not w:
        return "1"
    parts = []
    i = 0
    while i < len(w):
        s = w[i]
        j = i
        while j < len(w) and w[j] == s:
            j += 1
        e = (j - i) * (1 if s > 0 else -1)
        g = abs(s)
        name = names[g - 1] if names else (
            _LETTERS[g - 1] if g <= 26 else f"x{g}"
        )
        parts.append(name if e == 1 else f"{name}^{e}")
        i = j
    return " ".join(parts)


@dataclass(frozen=True)
class Presentation:
    """Finitely presented group: n_gens generators and relator words."""

    n_gens: int
    relators: tuple = ()
    label: str = ""
    gen_names: tuple = None

    def __post_init__(self):
        rels = tuple(cyclic_reduce(r) for r in self.relators)
        rels = tuple(r for r in rels if r)
        object.__setattr__(self, "relators", rels)
        for r in rels:
            for s in r:
                if not (1 <= abs(s) <= self.n_gens):
                    raise PropEndsError(f"relator letter {s} out of range")
        if self.gen_names is not None and len(self.gen_names) != self.n_gens:
            raise PropEndsError("gen_names length mismatch")

    def name(self, g: int) -> str:
        if self.gen_names:
            return self.gen_names[g - 1]
        return _LETTERS[g - 1] if g <= 26 else f"x{g}"

    def describe(self) -> str:
        gens = ", ".join(self.name(i + 1) for i in range(self.n_gens))
        rels = ", ".join(format_word(r, self.gen_names) for r in self.relators)
        return f"< {gens} | {rels} >"


def free_group(rank: int, label: str = "") -> Presentation:
    return Presentation(rank, (), label or f"free({rank})")


def cyclic_group(order: int, label: str = "") -> Presentation:
    return Presentation(1, (wpow((1,), order),), label or f"cyclic({order})")


def relator_matrix(pres: Presentation) -> np.ndarray:
    """Exponent vectors of relators, one row per relator."""
    m = np.zeros((len(pres.relators), pres.n_gens), dtype=np.int64)
    for i, r in enumerate(pres.relators):
        m[i] = exponent_vector(r, pres.n_gens)
    return m

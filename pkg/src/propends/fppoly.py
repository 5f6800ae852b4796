"""Univariate polynomials over F_p: arithmetic, characteristic
polynomials, and factorization into irreducibles.

Factorization runs square-free decomposition, then distinct-degree
splitting, then Cantor-Zassenhaus equal-degree splitting with a seeded
generator; degrees up to 3 fall back to deterministic root enumeration.
"""

from __future__ import annotations

import random

import numpy as np

from .errors import PropEndsError
from .fplin import FpMatrix, _inv_mod, is_prime


class FpPoly:
    """Coefficients low-to-high with trailing zeros trimmed."""

    __slots__ = ("p", "coeffs")

    def __init__(self, p: int, coeffs):
        if not is_prime(p):
            raise PropEndsError(f"modulus {p} is not prime")
        c = [int(x) % p for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.p = p
        self.coeffs = tuple(c)

    @classmethod
    def zero(cls, p):
        return cls(p, [])

    @classmethod
    def one(cls, p):
        return cls(p, [1])

    @classmethod
    def x(cls, p):
        return cls(p, [0, 1])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1  # -1 for the zero polynomial

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other):
        return (
            isinstance(other, FpPoly)
            and self.p == other.p
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.p, self.coeffs))

    def __add__(self, other):
        n = max(len(self.coeffs), len(other.coeffs))
        a = list(self.coeffs) + [0] * (n - len(self.coeffs))
        b = list(other.coeffs) + [0] * (n - len(other.coeffs))
        return FpPoly(self.p, [x + y for x, y in zip(a, b)])

    def __sub__(self, other):
        n = max(len(self.coeffs), len(other.coeffs))
        a = list(self.coeffs) + [0] * (n - len(self.coeffs))
        b = list(other.coeffs) + [0] * (n - len(other.coeffs))
        return FpPoly(self.p, [x - y for x, y in zip(a, b)])

    def __mul__(self, other):
        if isinstance(other, (int, np.integer)):
            return FpPoly(self.p, [c * other for c in self.coeffs])
        if self.is_zero() or other.is_zero():
            return FpPoly.zero(self.p)
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return FpPoly(self.p, out)

    def __divmod__(self, other):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        p = self.p
        rem = list(self.coeffs)
        q = [0] * max(0, len(rem) - len(other.coeffs) + 1)
        dinv = _inv_mod(other.coeffs[-1], p)
        db = other.degree
        for i in range(len(rem) - 1, db - 1, -1):
            c = rem[i] % p
            if c:
                f = (c * dinv) % p
                q[i - db] = f
                for j, b in enumerate(other.coeffs):
                    rem[i - db + j] -= f * b
        return FpPoly(p, q), FpPoly(p, rem[:db])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def monic(self):
        if self.is_zero():
            return self
        return self * _inv_mod(self.coeffs[-1], self.p)

    def derivative(self):
        return FpPoly(self.p, [i * c for i, c in enumerate(self.coeffs)][1:])

    def eval(self, x: int) -> int:
        acc = 0
        for c in reversed(self.coeffs):
            acc = (acc * x + c) % self.p
        return acc

    def eval_matrix(self, m: np.ndarray) -> np.ndarray:
        n = m.shape[0]
        acc = np.zeros((n, n), dtype=np.int64)
        for c in reversed(self.coeffs):
            acc = (acc @ m + c * np.eye(n, dtype=np.int64)) % self.p
        return acc

    def __repr__(self):
        if self.is_zero():
            return f"FpPoly(p={self.p}, 0)"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                if i == 0:
                    terms.append(str(c))
                elif i == 1:
                    terms.append(f"{c if c != 1 else ''}x")
                else:
                    terms.append(f"{c if c != 1 else ''}x^{i}")
        return f"FpPoly(p={self.p}, {' + '.join(terms)})"


def poly_gcd(a: FpPoly, b: FpPoly) -> FpPoly:
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def poly_pow_mod(base: FpPoly, e: int, mod: FpPoly) -> FpPoly:
    out = FpPoly.one(base.p)
    base = base % mod
    while e:
        if e & 1:
            out = (out * base) % mod
        base = (base * base) % mod
        e >>= 1
    return out


def charpoly(m: FpMatrix) -> FpPoly:
    """Characteristic polynomial det(xI - m) via Hessenberg reduction."""
    p = m.p
    n = m.rows
    if n != m.cols:
        raise PropEndsError("charpoly of non-square matrix")
    h = m.a.copy() % p
    # Similarity reduction to upper Hessenberg form.
    for k in range(n - 2):
        nz = np.nonzero(h[k + 1 :, k])[0]
        if nz.size == 0:
            continue
        piv = k + 1 + int(nz[0])
        if piv != k + 1:
            h[[k + 1, piv]] = h[[piv, k + 1]]
            h[:, [k + 1, piv]] = h[:, [piv, k + 1]]
        inv_piv = _inv_mod(h[k + 1, k], p)
        for i in range(k + 2, n):
            if h[i, k]:
                f = (h[i, k] * inv_piv) % p
                h[i] = (h[i] - f * h[k + 1]) % p
                h[:, k + 1] = (h[:, k + 1] + f * h[:, i]) % p
    # Recurrence on leading principal minors of xI - H.
    polys = [FpPoly.one(p)]
    x = FpPoly.x(p)
    for mdim in range(1, n + 1):
        term = (x - FpPoly(p, [h[mdim - 1, mdim - 1]])) * polys[mdim - 1]
        prod_sub = 1
        for i in range(mdim - 2, -1, -1):
            prod_sub = (prod_sub * int(h[i + 1, i])) % p
            term = term - polys[i] * ((int(h[i, mdim - 1]) * prod_sub) % p)
        polys.append(term)
    return polys[n]


def _squarefree_parts(f: FpPoly):
    """Yield (squarefree factor, multiplicity) pairs, multiplicities
    summing with degrees to deg f.  Standard char-p algorithm."""
    p = f.p
    out = []

    def rec(g: FpPoly, mult: int):
        if g.degree <= 0:
            return
        d = g.derivative()
        if d.is_zero():
            # g = h(x^p) = (h1)^p over F_p.
            h1 = FpPoly(p, [g.coeffs[i] for i in range(0, len(g.coeffs), p)])
            rec(h1, mult * p)
            return
        c = poly_gcd(g, d)
        w = (g // c).monic()
        i = 1
        while w.degree > 0:
            y = poly_gcd(w, c)
            z = (w // y).monic()
            if z.degree > 0:
                out.append((z, mult * i))
            w = y
            c = c // y
            i += 1
        if c.degree > 0:
            rec(c, mult)

    rec(f.monic(), 1)
    return out


def _distinct_degree(f: FpPoly):
    """Split a squarefree monic f into (product of degree-d irreducibles, d)."""
    p = f.p
    out = []
    x = FpPoly.x(p)
    h = x
    rest = f
    d = 0
    while rest.degree > 2 * (d + 1) - 1 and rest.degree > 0:
        d += 1
        h = poly_pow_mod(h, p, rest)
        g = poly_gcd(h - x, rest)
        if g.degree > 0:
            out.append((g, d))
            rest = (rest // g).monic()
            h = h % rest
    if rest.degree > 0:
        out.append((rest, rest.degree))
    return out


def _equal_degree_split(f: FpPoly, d: int, rng: random.Random):
    """Factor a squarefree monic product of degree-d irreducibles."""
    p = f.p
    n = f.degree
    if n == d:
        return [f]
    while True:
        r = FpPoly(p, [rng.randrange(p) for _ in range(n)] + [1])
        if p == 2:
            # Trace map over F_{2^d}.
            t = FpPoly.zero(p)
            acc = r % f
            for _ in range(d):
                t = (t + acc) % f
                acc = (acc * acc) % f
            g = poly_gcd(t, f)
        else:
            e = (p**d - 1) // 2
            g = poly_gcd(poly_pow_mod(r, e, f) - FpPoly.one(p), f)
        if 0 < g.degree < n:
            left = _equal_degree_split(g, d, rng)
            right = _equal_degree_split((f // g).monic(), d, rng)
            return left + right


def _factor_by_roots(f: FpPoly):
    """Deterministic factorization for degree <= 3 via root enumeration."""
    p = f.p
    factors = []
    g = f.monic()
    changed = True
    while g.degree > 0 and changed:
        changed = False
        for a in range(p):
            if g.eval(a) == 0:
                factors.append(FpPoly(p, [-a, 1]))
                g = (g // FpPoly(p, [-a, 1])).monic()
                changed = True
                break
    if g.degree > 0:
        factors.append(g)  # no roots, degree 2 or 3: irreducible
    return factors


def is_irreducible(f: FpPoly) -> bool:
    f = f.monic()
    n = f.degree
    if n <= 0:
        return False
    if n == 1:
        return True
    p = f.p
    x = FpPoly.x(p)
    # x^(p^n) == x mod f, and x^(p^(n/q)) - x coprime for prime q | n.
    h = x
    for _ in range(n):
        h = poly_pow_mod(h, p, f)
    if h != x % f:
        return False
    for q in {q for q in range(2, n + 1) if n % q == 0 and is_prime(q)}:
        h = x
        for _ in range(n // q):
            h = poly_pow_mod(h, p, f)
        if poly_gcd(h - x, f).degree != 0:
            return False
    return True


def factor_poly(f: FpPoly, seed: int = 0):
    """Factor f into monic irreducibles: list of (factor, multiplicity),
    sorted by (degree, coefficients) for determinism."""
    if f.is_zero():
        raise PropEndsError("cannot factor the zero polynomial")
    rng = random.Random(seed ^ 0x5F3759DF)
    mults: dict[FpPoly, int] = {}
    for sq, mult in _squarefree_parts(f):
        if sq.degree <= 3:
            irreds = _factor_by_roots(sq)
        else:
            irreds = []
            for block, d in _distinct_degree(sq):
                irreds.extend(_equal_degree_split(block, d, rng))
        for g in irreds:
            g = g.monic()
            mults[g] = mults.get(g, 0) + mult
    out = sorted(mults.items(), key=lambda kv: (kv[0].degree, kv[0].coeffs))
    for g, _ in out:
        if not is_irreducible(g):
            raise PropEndsError(f"factorization produced a reducible factor {g}")
    return out


def generalized_kernel(m: FpMatrix, f: FpPoly):
    """ker f(m)^n where n is the ambient dimension; invariant under m."""
    from .fplin import Subspace, mat_pow, nullspace_basis

    if m.rows != m.cols:
        raise PropEndsError("generalized kernel of a non-square matrix")
    b = f.eval_matrix(m.a)
    bn = mat_pow(b, max(m.rows, 1), m.p)
    return Subspace(m.p, m.cols, nullspace_basis(bn, m.p))

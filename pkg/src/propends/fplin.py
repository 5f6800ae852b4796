"""Exact dense linear algebra over a prime field F_p.

Matrices are numpy int64 arrays with entries reduced into [0, p).
Vectors are columns; matrices act on the left.  All operations are pure
and return fresh arrays.
"""

from __future__ import annotations

import numpy as np

from .errors import PropEndsError


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def _inv_mod(a: int, p: int) -> int:
    return pow(int(a) % p, p - 2, p)


class FpMatrix:
    """Dense matrix over F_p.  Immutable by convention: do not write to .a."""

    __slots__ = ("p", "a")

    def __init__(self, p: int, data):
        if not is_prime(p):
            raise PropEndsError(f"modulus {p} is not prime")
        a = np.array(data, dtype=np.int64)
        if a.ndim == 1:
            a = a.reshape(1, -1)
        if a.ndim != 2:
            raise PropEndsError("FpMatrix data must be 2-dimensional")
        self.p = p
        self.a = a % p

    @classmethod
    def zeros(cls, p: int, rows: int, cols: int) -> "FpMatrix":
        return cls(p, np.zeros((rows, cols), dtype=np.int64))

    @classmethod
    def identity(cls, p: int, n: int) -> "FpMatrix":
        return cls(p, np.eye(n, dtype=np.int64))

    @property
    def rows(self) -> int:
        return self.a.shape[0]

    @property
    def cols(self) -> int:
        return self.a.shape[1]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FpMatrix)
            and self.p == other.p
            and self.a.shape == other.a.shape
            and bool(np.array_equal(self.a, other.a))
        )

    def __hash__(self):
        return hash((self.p, self.a.shape, self.a.tobytes()))

    def __matmul__(self, other: "FpMatrix") -> "FpMatrix":
        return FpMatrix(self.p, mat_mul(self.a, other.a, self.p))

    def __add__(self, other: "FpMatrix") -> "FpMatrix":
        return FpMatrix(self.p, (self.a + other.a) % self.p)

    def __sub__(self, other: "FpMatrix") -> "FpMatrix":
        return FpMatrix(self.p, (self.a - other.a) % self.p)

    def transpose(self) -> "FpMatrix":
        return FpMatrix(self.p, self.a.T)

    def rank(self) -> int:
        return rank(self.a, self.p)

    def inv(self) -> "FpMatrix":
        return FpMatrix(self.p, inv(self.a, self.p))

    def is_invertible(self) -> bool:
        return self.rows == self.cols and self.rank() == self.rows

    def __repr__(self):
        return f"FpMatrix(p={self.p}, shape={self.a.shape})"


def mat_mul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """Exact product mod p.

    int64 is safe as long as cols(a) * (p-1)^2 < 2^63, which holds for
    every desk-scale size this package produces.
    """
    return (a @ b) % p


def mat_pow(a: np.ndarray, e: int, p: int) -> np.ndarray:
    n = a.shape[0]
    out = np.eye(n, dtype=np.int64)
    base = a % p
    while e:
        if e & 1:
            out = mat_mul(out, base, p)
        base = mat_mul(base, base, p)
        e >>= 1
    return out


def rref(a: np.ndarray, p: int):
    """Reduced row-echelon form.

    Returns (R, rank, pivots) with R row-equivalent to a.
    """
    r = (np.array(a, dtype=np.int64) % p).copy()
    nrows, ncols = r.shape
    pivots = []
    row = 0
    for col in range(ncols):
        if row >= nrows:
            break
        nz = np.nonzero(r[row:, col])[0]
        if nz.size == 0:
            continue
        pr = row + int(nz[0])
        if pr != row:
            r[[row, pr]] = r[[pr, row]]
        r[row] = (r[row] * _inv_mod(r[row, col], p)) % p
        coeffs = r[:, col].copy()
        coeffs[row] = 0
        if np.any(coeffs):
            r -= np.outer(coeffs, r[row])
            r %= p
        pivots.append(col)
        row += 1
    return r, row, pivots


def rank(a: np.ndarray, p: int) -> int:
    return rref(a, p)[1]


def nullspace_basis(a: np.ndarray, p: int) -> np.ndarray:
    """Basis of {v : a v = 0}, rows = basis vectors, in RREF."""
    r, rk, pivots = rref(a, p)
    ncols = a.shape[1]
    free = [c for c in range(ncols) if c not in pivots]
    basis = np.zeros((len(free), ncols), dtype=np.int64)
    for i, c in enumerate(free):
        basis[i, c] = 1
        for prow, pcol in enumerate(pivots):
            basis[i, pcol] = (-r[prow, c]) % p
    if basis.size:
        basis = rref(basis, p)[0][: len(free)]
    return basis


def inv(a: np.ndarray, p: int) -> np.ndarray:
    n = a.shape[0]
    if a.shape[1] != n:
        raise PropEndsError("inverse of a non-square matrix")
    aug = np.hstack([a % p, np.eye(n, dtype=np.int64)])
    r, rk, pivots = rref(aug, p)
    if rk < n or pivots[:n] != list(range(n)):
        raise PropEndsError("matrix is singular")
    return r[:, n:]


def solve(a: np.ndarray, b: np.ndarray, p: int):
    """Some solution x of a x = b (columns), or None if inconsistent."""
    b = np.array(b, dtype=np.int64) % p
    single = b.ndim == 1
    if single:
        b = b.reshape(-1, 1)
    nrows, ncols = a.shape
    aug = np.hstack([a % p, b])
    r, rk, pivots = rref(aug, p)
    for c in pivots:
        if c >= ncols:
            return None
    x = np.zeros((ncols, b.shape[1]), dtype=np.int64)
    for prow, pcol in enumerate(pivots):
        x[pcol] = r[prow, ncols:]
    return x[:, 0] if single else x


class Subspace:
    """Subspace of F_p^n in canonical form: RREF basis rows.

    Two equal subspaces have identical basis matrices.
    """

    __slots__ = ("p", "ambient_dim", "basis")

    def __init__(self, p: int, ambient_dim: int, rows):
        rows = np.array(rows, dtype=np.int64).reshape(-1, ambient_dim) % p
        r, rk, _ = rref(rows, p)
        self.p = p
        self.ambient_dim = ambient_dim
        self.basis = r[:rk]

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def contains(self, v) -> bool:
        v = np.array(v, dtype=np.int64) % self.p
        if self.dim == 0:
            return not np.any(v)
        stacked = np.vstack([self.basis, v.reshape(1, -1)])
        return rank(stacked, self.p) == self.dim

    def intersect(self, other: "Subspace") -> "Subspace":
        # Rows v with v = x B1 = y B2: solve [B1^T | -B2^T] kernel.
        if self.dim == 0 or other.dim == 0:
            return Subspace(self.p, self.ambient_dim, np.zeros((0, self.ambient_dim)))
        m = np.hstack([self.basis.T, (-other.basis.T) % self.p])
        ker = nullspace_basis(m, self.p)
        vecs = (ker[:, : self.dim] @ self.basis) % self.p
        return Subspace(self.p, self.ambient_dim, vecs)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Subspace)
            and self.p == other.p
            and self.ambient_dim == other.ambient_dim
            and bool(np.array_equal(self.basis, other.basis))
        )

    def __hash__(self):
        return hash((self.p, self.ambient_dim, self.basis.tobytes()))

    def __repr__(self):
        return f"Subspace(p={self.p}, dim={self.dim}, ambient={self.ambient_dim})"


def nullspace(m: FpMatrix) -> Subspace:
    return Subspace(m.p, m.cols, nullspace_basis(m.a, m.p))


def rref_matrix(m: FpMatrix):
    r, rk, pivots = rref(m.a, m.p)
    return FpMatrix(m.p, r), rk, pivots

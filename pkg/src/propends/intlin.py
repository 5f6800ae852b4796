"""Exact integer linear algebra: Smith normal form with transforms.

Entries are arbitrary-precision Python ints held in plain lists of
lists, so pivoting never overflows.  Sizes here are desk scale
(at most a few hundred rows), so the cubic algorithm is fine.
"""

from __future__ import annotations

from .errors import PropEndsError


class IntMatrix:
    """Dense integer matrix, list-of-lists of Python ints."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, data):
        entries = [[int(x) for x in row] for row in data]
        if entries:
            w = len(entries[0])
            if any(len(r) != w for r in entries):
                raise PropEndsError("ragged integer matrix")
        else:
            w = 0
        self.entries = entries
        self.rows = len(entries)
        self.cols = w

    @classmethod
    def zeros(cls, rows, cols):
        return cls([[0] * cols for _ in range(rows)])

    @classmethod
    def identity(cls, n):
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    def copy(self):
        return IntMatrix([row[:] for row in self.entries])

    def __eq__(self, other):
        return isinstance(other, IntMatrix) and self.entries == other.entries

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise PropEndsError("shape mismatch")
        bt = list(zip(*other.entries)) if other.entries else []
        out = [
            [sum(a * b for a, b in zip(row, col)) for col in bt]
            for row in self.entries
        ]
        return IntMatrix(out if out else [[]] * 0)

    def __repr__(self):
        return f"IntMatrix({self.rows}x{self.cols})"


def det_unimodular_sign(m: IntMatrix) -> int:
    """Determinant of a square integer matrix by fraction-free elimination."""
    n = m.rows
    if n != m.cols:
        raise PropEndsError("determinant of non-square matrix")
    a = [row[:] for row in m.entries]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


class SmithForm:
    """Diagonalization U A V = D with unimodular transforms.

    diag has length min(rows, cols); nonzero entries first, each dividing
    the next; rank = number of nonzero entries.
    """

    __slots__ = ("diag", "rank", "left", "right", "rows", "cols")

    def __init__(self, diag, left: IntMatrix, right: IntMatrix, rows: int, cols: int):
        self.diag = list(diag)
        self.rank = sum(1 for d in self.diag if d != 0)
        self.left = left
        self.right = right
        self.rows = rows
        self.cols = cols


def smith_normal_form(a: IntMatrix) -> SmithForm:
    m, n = a.rows, a.cols
    mat = [row[:] for row in a.entries]
    u = IntMatrix.identity(m).entries
    v = IntMatrix.identity(n).entries

    def swap_rows(i, j):
        mat[i], mat[j] = mat[j], mat[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in mat:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, c):
        # row dst += c * row src
        rs, rd = mat[src], mat[dst]
        for k in range(n):
            rd[k] += c * rs[k]
        us, ud = u[src], u[dst]
        for k in range(m):
            ud[k] += c * us[k]

    def add_col(src, dst, c):
        for row in mat:
            row[dst] += c * row[src]
        for row in v:
            row[dst] += c * row[src]

    def negate_row(i):
        mat[i] = [-x for x in mat[i]]
        u[i] = [-x for x in u[i]]

    t = 0
    limit = min(m, n)
    while t < limit:
        # Locate a pivot of minimal absolute value in the trailing block.
        piv = None
        best = None
        for i in range(t, m):
            for j in range(t, n):
                x = mat[i][j]
                if x != 0 and (best is None or abs(x) < best):
                    best = abs(x)
                    piv = (i, j)
        if piv is None:
            break
        swap_rows(t, piv[0])
        swap_cols(t, piv[1])
        while True:
            # Clear column t.
            done = True
            for i in range(t + 1, m):
                if mat[i][t] != 0:
                    q = mat[i][t] // mat[t][t]
                    add_row(t, i, -q)
                    if mat[i][t] != 0:
                        swap_rows(t, i)
                        done = False
            # Clear row t.
            for j in range(t + 1, n):
                if mat[t][j] != 0:
                    q = mat[t][j] // mat[t][t]
                    add_col(t, j, -q)
                    if mat[t][j] != 0:
                        swap_cols(t, j)
                        done = False
            if done:
                break
        # Enforce divisibility into the remaining block.
        redo = False
        d = mat[t][t]
        for i in range(t + 1, m):
            for j in range(t + 1, n):
                if mat[i][j] % d != 0:
                    add_row(i, t, 1)
                    redo = True
                    break
            if redo:
                break
        if redo:
            continue
        if mat[t][t] < 0:
            negate_row(t)
        t += 1

    diag = [mat[i][i] if i < n else 0 for i in range(limit)]
    return SmithForm(diag, IntMatrix(u), IntMatrix(v), m, n)


def snf_reconstruct(a: IntMatrix, s: SmithForm) -> bool:
    """Check U A V equals the diagonal matrix of s exactly."""
    prod = (s.left @ a) @ s.right
    for i in range(a.rows):
        for j in range(a.cols):
            want = s.diag[i] if i == j and i < len(s.diag) else 0
            if prod.entries[i][j] != want:
                return False
    return True


def int_rank(m: IntMatrix) -> int:
    """Rank over the rationals by fraction-free elimination."""
    a = [row[:] for row in m.entries]
    rows, cols = m.rows, m.cols
    r = 0
    prev = 1
    for c in range(cols):
        piv = next((i for i in range(r, rows) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        for i in range(r + 1, rows):
            for j in range(c + 1, cols):
                a[i][j] = (a[i][j] * a[r][c] - a[i][c] * a[r][j]) // prev
            a[i][c] = 0
        prev = a[r][c]
        r += 1
        if r == rows:
            break
    return r


def kernel_basis(a: IntMatrix):
    """Integer kernel of x -> A x: columns v with A v = 0, as a list."""
    s = smith_normal_form(a)
    vt = list(zip(*s.right.entries)) if s.right.entries else []
    cols = []
    for j in range(a.cols):
        d = s.diag[j] if j < len(s.diag) else 0
        if d == 0:
            cols.append(list(vt[j]))
    return cols


def int_solve_columns(a: IntMatrix, b: IntMatrix):
    """Solve A X = B over Z columnwise, or None if some column has no
    integral solution."""
    s = smith_normal_form(a)
    ub = s.left @ b
    m, n = a.rows, a.cols
    k = b.cols
    y = [[0] * k for _ in range(n)]
    for i in range(m):
        d = s.diag[i] if i < len(s.diag) else 0
        for j in range(k):
            rhs = ub.entries[i][j]
            if d == 0:
                if rhs != 0:
                    return None
            else:
                if rhs % d != 0:
                    return None
                if i < n:
                    y[i][j] = rhs // d
    return s.right @ IntMatrix(y)

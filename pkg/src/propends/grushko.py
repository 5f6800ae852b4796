"""Free products and their finite-index subgroups: Kurosh decomposition
data, the rank and factor-count formulas, explicit bases of cyclic
covers of free groups, and classification of integer lattices with an
order-p automorphism into regular, augmentation, and trivial summands.
"""

from __future__ import annotations

import random

import numpy as np

from .coset import kernel_table, todd_coxeter
from .descriptors import (
    CyclicP,
    FinitePres,
    FreeProP,
    FreeProduct,
    ProPDescriptor,
    Zp,
)
from .errors import (
    BudgetExceeded,
    IndexInfinite,
    NotClassifiable,
    PropEndsError,
)
from .fplin import mat_mul
from .fplin import rank as fp_rank
from .intlin import (
    IntMatrix,
    det_unimodular_sign,
    int_rank,
    int_solve_columns,
    smith_normal_form,
)
from .stallings import same_subgroup
from .subgroup import SubgroupData
from .words import (
    Presentation,
    exponent_vector,
    free_group,
    free_reduce,
    relator_matrix,
    winv,
    wmul,
    wpow,
)


class Factor:
    """One free factor of a free product, with its generator range in
    the compiled presentation and its catalog tags."""

    __slots__ = ("desc", "gen_lo", "gen_hi", "is_free_part", "order", "label")

    def __init__(self, desc, gen_lo, gen_hi, is_free_part, order, label):
        self.desc = desc
        self.gen_lo = gen_lo  # 1-based, inclusive
        self.gen_hi = gen_hi
        self.is_free_part = is_free_part  # a Zp factor (counts into t)
        self.order = order  # None for infinite factors
        self.label = label

    @property
    def gens(self):
        return list(range(self.gen_lo, self.gen_hi + 1))


class FreeProductDescriptor:
    """A descriptor flattened into its list of free factors.

    Free indecomposability of non-free factors is a catalog tag, not
    something decided here; every report carries the tags.
    """

    def __init__(self, descriptor: ProPDescriptor):
        self.descriptor = descriptor
        self.p = descriptor.p
        parts = (
            list(descriptor.parts)
            if isinstance(descriptor, FreeProduct)
            else [descriptor]
        )
        flat = []
        for d in parts:
            if isinstance(d, FreeProP):
                flat.extend(Zp(d.p) for _ in range(d.rank))
            elif isinstance(d, FreeProduct):
                flat.extend(FreeProductDescriptor(d)._raw_parts())
            else:
                flat.append(d)
        self.factors = []
        at = 0
        for d in flat:
            pr = d.compile()
            order = None
            if isinstance(d, CyclicP):
                order = d.order
            elif isinstance(d, FinitePres):
                order = d.order
            self.factors.append(
                Factor(
                    d,
                    at + 1,
                    at + pr.n_gens,
                    isinstance(d, Zp),
                    order,
                    d.text(),
                )
            )
            at += pr.n_gens
        self.pres = descriptor.compile()
        if at != self.pres.n_gens:
            raise PropEndsError("factor generator ranges do not cover G")
        self.t = sum(1 for f in self.factors if f.is_free_part)
        self.s_g = len(self.factors)
        self.has_torsion = descriptor.has_torsion()

    def _raw_parts(self):
        return [f.desc for f in self.factors]


class OrbitData:
    """One double coset: representative, orbit size, and generators of
    the corresponding conjugated-factor intersection with H."""

    __slots__ = ("rep_word", "size", "intersection_gens", "nontrivial")

    def __init__(self, rep_word, size, intersection_gens, nontrivial):
        self.rep_word = rep_word
        self.size = size
        self.intersection_gens = intersection_gens
        self.nontrivial = nontrivial


class KuroshReport:
    def __init__(self, fpd, index, factor_orbits, r, s_h, total_rank,
                 rs_rank, flags):
        self.fpd = fpd
        self.index = index
        self.factor_orbits = factor_orbits  # list (Factor, [OrbitData])
        self.r = r
        self.s_h = s_h
        self.total_rank = total_rank
        self.rs_rank = rs_rank  # None when G is not free
        self.flags = flags

    @property
    def double_coset_counts(self):
        return [len(orbits) for _, orbits in self.factor_orbits]


def subgroup_from_spec(pres: Presentation, h_spec, budget=20000):
    """h_spec is either {"gens": [words]} or
    {"kernel": (images, moduli)} for a map onto a finite abelian group."""
    if "gens" in h_spec:
        try:
            table = todd_coxeter(pres, h_spec["gens"], max_cosets=budget)
        except BudgetExceeded as exc:
            raise IndexInfinite(
                f"enumeration did not close within {budget} cosets"
            ) from exc
        return SubgroupData(pres, table)
    if "kernel" in h_spec:
        images, moduli = h_spec["kernel"]
        return SubgroupData(pres, kernel_table(pres, images, moduli))
    raise PropEndsError("subgroup spec needs 'gens' or 'kernel'")


def kurosh(fpd: FreeProductDescriptor, h_spec, budget=20000) -> KuroshReport:
    pres = fpd.pres
    sub = (
        h_spec
        if isinstance(h_spec, SubgroupData)
        else subgroup_from_spec(pres, h_spec, budget)
    )
    n = sub.index
    factor_orbits = []
    nontrivial_total = 0
    for fac in fpd.factors:
        gens = fac.gens
        seen = [False] * n
        orbits = []
        for c0 in range(n):
            if seen[c0]:
                continue
            # Breadth-first orbit of the factor on the coset space,
            # recording a factor-word transversal and Schreier
            # generators of the stabilizer.
            trans = {c0: ()}
            tree = set()
            queue = [c0]
            seen[c0] = True
            while queue:
                c = queue.pop(0)
                for g in gens:
                    for s in (g, -g):
                        c2 = sub.table.step(c, s)
                        if c2 not in trans:
                            trans[c2] = trans[c] + (s,)
                            tree.add((c, s) if s > 0 else (c2, -s))
                            seen[c2] = True
                            queue.append(c2)
            stab = []
            for c in sorted(trans):
                for g in gens:
                    if (c, g) in tree:
                        continue
                    w = wmul(trans[c], (g,), winv(trans[sub.table.step(c, g)]))
                    if w:
                        stab.append(w)
            rep = sub.transversal[c0]
            inter = [free_reduce(wmul(rep, w, winv(rep))) for w in stab]
            inter = [w for w in inter if w]
            if fac.order is None:
                nontrivial = len(trans) > 0  # infinite factor, finite orbit
            else:
                nontrivial = len(trans) < fac.order
            if nontrivial:
                nontrivial_total += 1
            else:
                inter = []
            orbits.append(OrbitData(rep, len(trans), inter, nontrivial))
        factor_orbits.append((fac, orbits))
    counts = [len(orbits) for _, orbits in factor_orbits]
    r = sum(n - k for k in counts) - n + 1
    s_h = nontrivial_total + r
    flags = []
    if fpd.has_torsion:
        flags.append(
            "torsion factors present; the factor-count formula is only "
            "asserted for torsion-free groups"
        )
    rs_rank = None
    total_rank = None
    if all(f.is_free_part for f in fpd.factors):
        if sub.pres.relators:
            raise PropEndsError("subgroup of a free group got relators")
        rs_rank = sub.pres.n_gens
        total_rank = nontrivial_total + r
        if total_rank != rs_rank:
            flags.append(
                f"rank mismatch: Kurosh {total_rank} vs "
                f"Reidemeister-Schreier {rs_rank}"
            )
    return KuroshReport(
        fpd, n, factor_orbits, r, s_h, total_rank, rs_rank, flags
    )


def grushko_bookkeeping(fpd: FreeProductDescriptor, h_specs=(), budget=20000):
    """Symbolic factor counts s(G) and f(G), plus checks of the
    subgroup-count formula for each requested finite-index subgroup."""
    free_case = all(f.is_free_part for f in fpd.factors)
    s_g = fpd.s_g
    f_g = s_g if free_case else s_g - 1
    checks = []
    discrepancies = []
    for spec in h_specs:
        rep = kurosh(fpd, spec, budget)
        expected = rep.index * (s_g - 1) + 1
        ok = rep.s_h == expected
        checks.append(
            {
                "index": rep.index,
                "s_h": rep.s_h,
                "expected": expected,
                "ok": ok,
            }
        )
        if not ok:
            discrepancies.append(
                f"index {rep.index}: s(H) = {rep.s_h}, formula gives {expected}"
            )
    return {
        "s_g": s_g,
        "f_g": f_g,
        "free": free_case,
        "tags": [
            (f.label, "free-part" if f.is_free_part else "indecomposable(tag)")
            for f in fpd.factors
        ],
        "subgroup_checks": checks,
        "discrepancies": discrepancies,
    }


def schreier_basis_cyclic_cover(r: int, p: int):
    """Basis of the index-p kernel of x1 -> 1 in free(r): the p-th power
    of the first generator plus all conjugates x1^k xi x1^-k.

    Returns (words, checks) where checks reports the count, the kernel
    membership of each word, and mutual generation with the
    Reidemeister-Schreier basis.
    """
    if r < 1:
        raise PropEndsError("rank must be >= 1")
    words = [wpow((1,), p)]
    for i in range(2, r + 1):
        for k in range(p):
            t = wpow((1,), k)
            words.append(free_reduce(wmul(t, (i,), winv(t))))
    count_ok = len(words) == p * (r - 1) + 1
    kernel_ok = all(
        int(exponent_vector(w, r)[0]) % p == 0 for w in words
    )
    pres = free_group(r)
    images = [(1,)] + [(0,)] * (r - 1)
    sub = SubgroupData(pres, kernel_table(pres, images, [p]))
    mutual_ok = same_subgroup(r, words, sub.gen_words)
    checks = {
        "count": count_ok,
        "kernel_membership": kernel_ok,
        "mutual_generation": mutual_ok,
        "rs_rank": sub.pres.n_gens,
    }
    return words, checks


class CpLatticeClass:
    """Multiplicities (a, b, c) of regular, augmentation, and trivial
    summands of an integer lattice with an order-p automorphism."""

    __slots__ = ("p", "a", "b", "c")

    def __init__(self, p, a, b, c):
        self.p = p
        self.a = a
        self.b = b
        self.c = c

    @property
    def rank(self):
        return self.p * self.a + (self.p - 1) * self.b + self.c

    def triple(self):
        return (self.a, self.b, self.c)

    def __eq__(self, other):
        return (
            isinstance(other, CpLatticeClass)
            and (self.p,) + self.triple() == (other.p,) + other.triple()
        )

    def __repr__(self):
        return f"CpLatticeClass(p={self.p}, a={self.a}, b={self.b}, c={self.c})"


class LatticeData:
    """Integer lattice of finite rank with an automorphism of order
    dividing p, stored as a unimodular matrix."""

    def __init__(self, p: int, sigma):
        sigma = sigma if isinstance(sigma, IntMatrix) else IntMatrix(sigma)
        if sigma.rows != sigma.cols:
            raise PropEndsError("lattice automorphism must be square")
        self.p = p
        self.rank = sigma.rows
        self.sigma = sigma
        if self.rank:
            if det_unimodular_sign(sigma) not in (1, -1):
                raise PropEndsError("automorphism is not unimodular")
            acc = IntMatrix.identity(self.rank)
            for _ in range(p):
                acc = acc @ sigma
            if acc != IntMatrix.identity(self.rank):
                raise PropEndsError("automorphism does not have order dividing p")


def cp_lattice_classify(lat: LatticeData) -> CpLatticeClass:
    """Recover (a, b, c) from the Jordan type of the reduction mod p.

    The three summand types reduce to unipotent Jordan blocks of sizes
    p, p - 1, and 1.  For p = 2 the last two collide, so the block
    counts are combined with the rational multiplicity of the
    eigenvalue -1.  A Jordan size outside the allowed set means the
    lattice is not a sum of the three types.
    """
    p, big_r = lat.p, lat.rank
    if big_r == 0:
        return CpLatticeClass(p, 0, 0, 0)
    sig = np.array(
        [[x % p for x in row] for row in lat.sigma.entries], dtype=np.int64
    )
    n1 = (sig - np.eye(big_r, dtype=np.int64)) % p
    ranks = [big_r]
    acc = np.eye(big_r, dtype=np.int64)
    for _ in range(p):
        acc = mat_mul(acc, n1, p)
        ranks.append(fp_rank(acc, p))
    if ranks[p] != 0:
        raise NotClassifiable("reduction mod p is not unipotent")
    ge = [ranks[k - 1] - ranks[k] for k in range(1, p + 1)] + [0]
    count = {k: ge[k - 1] - ge[k] for k in range(1, p + 1)}
    bad = [k for k in range(2, p) if k != p - 1 and count[k]]
    if bad:
        raise NotClassifiable(f"Jordan block sizes {bad} do not occur in "
                              "sums of regular, augmentation, and trivial "
                              "lattices")
    if p == 2:
        a = count[2]
        minus_mult = big_r - int_rank(
            IntMatrix(
                [
                    [lat.sigma.entries[i][j] + (1 if i == j else 0)
                     for j in range(big_r)]
                    for i in range(big_r)
                ]
            )
        )
        b = minus_mult - a
        c = count[1] - b
    else:
        a = count[p]
        b = count[p - 1]
        c = count[1]
    out = CpLatticeClass(p, a, b, c)
    if min(a, b, c) < 0 or out.rank != big_r:
        raise NotClassifiable(
            f"block counts (a, b, c) = ({a}, {b}, {c}) do not fit rank {big_r}"
        )
    return out


def regular_sigma(p: int):
    """Cyclic permutation matrix: the regular lattice."""
    m = [[0] * p for _ in range(p)]
    for i in range(p):
        m[(i + 1) % p][i] = 1
    return IntMatrix(m)


def augmentation_sigma(p: int):
    """Action on the augmentation sublattice, basis {g^i - 1}."""
    n = p - 1
    m = [[0] * n for _ in range(n)]
    for i in range(n):
        # sigma (g^{i+1} - 1) = g^{i+2} - g = (g^{i+2} - 1) - (g - 1)
        if i + 1 < n:
            m[i + 1][i] = 1
        m[0][i] -= 1
    return IntMatrix(m)


def build_standard_lattice(p: int, a: int, b: int, c: int) -> LatticeData:
    blocks = (
        [regular_sigma(p)] * a
        + [augmentation_sigma(p)] * b
        + [IntMatrix.identity(1)] * c
    )
    n = p * a + (p - 1) * b + c
    m = [[0] * n for _ in range(n)]
    at = 0
    for blk in blocks:
        for i in range(blk.rows):
            for j in range(blk.cols):
                m[at + i][at + j] = blk.entries[i][j]
        at += blk.rows
    return LatticeData(p, IntMatrix(m))


def random_unimodular(n: int, rng: random.Random, steps: int = None):
    """Product of random elementary row operations, returned together
    with its exact inverse (tracked operation by operation, so no
    matrix inversion is ever needed)."""
    m = IntMatrix.identity(n).entries
    minv = IntMatrix.identity(n).entries
    steps = steps if steps is not None else 4 * n
    for _ in range(steps):
        i = rng.randrange(n)
        j = rng.randrange(n)
        if i == j:
            continue
        coef = rng.choice([-2, -1, 1, 2])
        for col in range(n):
            m[i][col] += coef * m[j][col]
        for row in minv:
            row[j] -= coef * row[i]
    return IntMatrix(m), IntMatrix(minv)


def conjugated_lattice(lat: LatticeData, v: IntMatrix, vinv=None) -> LatticeData:
    if vinv is None:
        vinv = int_solve_columns(v, IntMatrix.identity(v.rows))
        if vinv is None:
            raise PropEndsError("conjugator is not unimodular")
    return LatticeData(lat.p, (v @ lat.sigma) @ vinv)


def conjugation_action(sub: SubgroupData, t_word) -> IntMatrix:
    """Integer matrix of w -> t w t^-1 on the abelianization of a
    normal finite-index subgroup, in its generator basis."""
    m = sub.pres.n_gens
    cols = []
    for w in sub.gen_words:
        conj = sub.rewrite(wmul(t_word, w, winv(t_word)))
        cols.append(exponent_vector(conj, m))
    return IntMatrix([[int(cols[j][i]) for j in range(m)] for i in range(m)])


def free_quotient_action(sub: SubgroupData, s: IntMatrix) -> IntMatrix:
    """Action induced on the free part of the abelianization."""
    rel = relator_matrix(sub.pres)
    m = sub.pres.n_gens
    if rel.shape[0] == 0:
        return s
    bmat = IntMatrix([[int(rel[j][i]) for j in range(rel.shape[0])]
                      for i in range(m)])
    snf = smith_normal_form(bmat)
    u = snf.left
    uinv = int_solve_columns(u, IntMatrix.identity(m))
    conj = (u @ s) @ uinv
    free_idx = [
        i
        for i in range(m)
        if i >= len(snf.diag) or snf.diag[i] == 0
    ]
    killed = [i for i in range(m) if i not in free_idx]
    for i in free_idx:
        for j in killed:
            if conj.entries[i][j] != 0:
                raise PropEndsError(
                    "action does not descend to the free quotient"
                )
    return IntMatrix(
        [[conj.entries[i][j] for j in free_idx] for i in free_idx]
    )


def hab_module_structure(r: int, p: int) -> CpLatticeClass:
    """Classify the abelianization of the index-p kernel of x1 -> 1 in
    free(r) under conjugation by x1."""
    if r < 1:
        raise PropEndsError("rank must be >= 1")
    pres = free_group(r)
    images = [(1,)] + [(0,)] * (r - 1)
    sub = SubgroupData(pres, kernel_table(pres, images, [p]))
    sigma = free_quotient_action(sub, conjugation_action(sub, (1,)))
    return cp_lattice_classify(LatticeData(p, sigma))


def fbar_structure(n: int, p: int) -> CpLatticeClass:
    """Classify the abelianization of the kernel of all generators -> 1
    in the free product of n copies of the cyclic group of order p."""
    if n < 1:
        raise PropEndsError("need at least one factor")
    if n == 1:
        return CpLatticeClass(p, 0, 0, 0)
    relators = tuple(wpow((i,), p) for i in range(1, n + 1))
    pres = Presentation(n, relators)
    images = [(1,)] * n
    sub = SubgroupData(pres, kernel_table(pres, images, [p]))
    sigma = free_quotient_action(sub, conjugation_action(sub, (1,)))
    return cp_lattice_classify(LatticeData(p, sigma))

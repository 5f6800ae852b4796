"""Number of ends of a pro-p group, via transfer colimits along chains
of finite-index subgroups.

The chain steps are Frattini kernels (characteristic, so the chain is
normal in the whole group) while the step index p^d fits the coset
budget, then index-p kernels cut out by the first mod-p abelianization
coordinate.  The colimit trace records all composite transfer ranks;
the classification reads the stable ranks: 0 gives one end, 1 gives
two, unbounded growth is reported as evidence of infinitely many.
"""

from __future__ import annotations

from .abelian import AbelianizationData
from .coset import kernel_table, todd_coxeter
from .descriptors import ProPDescriptor
from .errors import BudgetExceeded, PropEndsError
from .fox import fox_h1_dim
from .subgroup import SubgroupData, compose_tables, transfer
from .words import Presentation

FRATTINI = "Frattini"
INDEX_P = "IndexP"
AUTO = "Auto"


class ChainLevel:
    """One subgroup in a chain: its own presentation plus how it sits
    inside the previous level."""

    __slots__ = ("pres", "sub", "index_total", "d", "step", "normal")

    def __init__(self, pres, sub, index_total, d, step, normal):
        self.pres = pres
        self.sub = sub  # SubgroupData over the previous level, None at the top
        self.index_total = index_total
        self.d = d
        self.step = step  # FRATTINI / INDEX_P / None for the top level
        self.normal = normal  # whole chain so far characteristic in the base


class SubgroupChain:
    __slots__ = ("base", "p", "levels", "strategy", "truncated")

    def __init__(self, base, p, levels, strategy, truncated):
        self.base = base
        self.p = p
        self.levels = levels
        self.strategy = strategy
        self.truncated = truncated  # None or a reason string

    @property
    def depth(self) -> int:
        return len(self.levels) - 1

    def dims(self):
        return [lv.d for lv in self.levels]


def frattini_kernel_table(pres: Presentation, p: int, ab=None):
    """Coset table of the kernel of U -> U/U^* (index p^d)."""
    ab = ab or AbelianizationData(pres, p)
    cols = ab.generator_coord_matrix()
    images = [tuple(int(x) for x in cols[:, i]) for i in range(pres.n_gens)]
    return kernel_table(pres, images, [p] * ab.d)


def index_p_kernel_table(pres: Presentation, p: int, ab=None):
    """Coset table of the kernel of the first mod-p coordinate."""
    ab = ab or AbelianizationData(pres, p)
    images = [(x,) for x in ab.first_coordinate_images()]
    return kernel_table(pres, images, [p])


def build_chain(
    base: Presentation,
    p: int,
    strategy: str = AUTO,
    depth: int = 6,
    coset_budget: int = 20000,
    d_cap: int = 512,
) -> SubgroupChain:
    if depth < 1:
        raise PropEndsError("depth must be >= 1")
    if strategy not in (AUTO, FRATTINI, INDEX_P):
        raise PropEndsError(f"unknown chain strategy {strategy!r}")
    d0 = AbelianizationData(base, p).d
    levels = [ChainLevel(base, None, 1, d0, None, True)]
    truncated = None
    cur = base
    normal = True
    for _ in range(depth):
        ab = AbelianizationData(cur, p)
        if ab.d == 0:
            truncated = "trivial mod-p abelianization"
            break
        if ab.d > d_cap:
            truncated = f"d={ab.d} exceeds cap {d_cap}"
            break
        step = strategy
        if strategy == AUTO:
            step = FRATTINI if p**ab.d <= coset_budget else INDEX_P
        if step == FRATTINI and p**ab.d > coset_budget:
            truncated = f"Frattini index p^{ab.d} exceeds coset budget"
            break
        if step == FRATTINI:
            table = frattini_kernel_table(cur, p, ab)
        else:
            # An IndexP step need not be characteristic; only an
            # unbroken Frattini tower is guaranteed normal in the base.
            table = index_p_kernel_table(cur, p, ab)
            normal = False
        sub = SubgroupData(cur, table)
        nd = sub.abelianization(p).d
        levels.append(
            ChainLevel(
                sub.pres,
                sub,
                levels[-1].index_total * table.n,
                nd,
                step,
                normal,
            )
        )
        cur = sub.pres
    return SubgroupChain(base, p, levels, strategy, truncated)


class ColimitTrace:
    """Transfer matrices along a chain with all composite ranks.

    ranks[(n, m)] = rank of the composite transfer from level n to
    level m; stable[n] = min over computed m of ranks[(n, m)].
    """

    def __init__(self, chain: SubgroupChain):
        if len(chain.levels) < 2:
            raise PropEndsError("colimit needs a chain of length >= 2")
        self.p = chain.p
        self.dims = chain.dims()
        self.transfers = []
        for n in range(len(chain.levels) - 1):
            u = SubgroupData.whole_group(chain.levels[n].pres)
            v = chain.levels[n + 1].sub
            self.transfers.append(transfer(u, v, chain.p))
        self.ranks = {}
        last = len(chain.levels) - 1
        for n in range(last):
            acc = self.transfers[n]
            self.ranks[(n, n + 1)] = acc.rank()
            for m in range(n + 2, last + 1):
                acc = self.transfers[m - 1] @ acc
                self.ranks[(n, m)] = acc.rank()
        self.stable = [
            min(self.ranks[(n, m)] for m in range(n + 1, last + 1))
            for n in range(last)
        ]
        self._check_monotone()

    def _check_monotone(self):
        last = len(self.dims) - 1
        for n in range(last):
            for m in range(n + 1, last):
                if self.ranks[(n, m + 1)] > self.ranks[(n, m)]:
                    raise PropEndsError("composite ranks increased with depth")
        for n in range(last - 1):
            if self.stable[n + 1] < self.stable[n]:
                raise PropEndsError("stable ranks decreased along the chain")

    def settled(self, n: int) -> bool:
        """True if the tail ranks from level n stopped changing."""
        last = len(self.dims) - 1
        if n + 2 > last:
            return False
        return self.ranks[(n, last)] == self.ranks[(n, last - 1)]


class EndsReport:
    """Outcome of the ends computation with its evidence trace."""

    def __init__(self, e_estimate, h0, h1_evidence, chain, trace, notes):
        self.e_estimate = e_estimate  # "0" | "1" | "2" | "Infinity-evidence" | "Inconclusive"
        self.h0 = h0
        self.h1_evidence = h1_evidence
        self.chain = chain
        self.trace = trace
        self.notes = notes

    def __repr__(self):
        return f"EndsReport(e={self.e_estimate})"


def ends_of_presentation(
    pres: Presentation,
    p: int,
    depth: int = 6,
    coset_budget: int = 20000,
    finite_budget: int = 4096,
    strategy: str = AUTO,
    notes=None,
) -> EndsReport:
    notes = list(notes or [])
    try:
        table = todd_coxeter(pres, [], max_cosets=min(finite_budget, coset_budget))
        notes.append(f"group is finite of order {table.n}")
        return EndsReport("0", 1, 0, None, None, notes)
    except BudgetExceeded:
        pass
    chain = build_chain(pres, p, strategy, depth, coset_budget)
    if chain.truncated:
        notes.append(f"chain truncated: {chain.truncated}")
    if len(chain.levels) < 2:
        notes.append("no chain levels could be built")
        return EndsReport("Inconclusive", 0, None, chain, None, notes)
    trace = ColimitTrace(chain)
    settled = [n for n in range(len(trace.stable)) if trace.settled(n)]
    if settled and all(trace.settled(n) for n in range(len(trace.stable) - 1)):
        sup = max(trace.stable[n] for n in settled)
        if sup == 0:
            return EndsReport("1", 0, 0, chain, trace, notes)
        if sup == 1:
            return EndsReport("2", 0, 1, chain, trace, notes)
        notes.append(f"stable colimit rank settled at {sup}")
    dims = chain.dims()
    d_growth = sum(1 for i in range(len(dims) - 1) if dims[i + 1] > dims[i])
    s_growth = sum(
        1
        for i in range(len(trace.stable) - 1)
        if trace.stable[i + 1] > trace.stable[i]
    )
    if d_growth >= 3 and s_growth >= 2:
        notes.append(
            f"d grew across {d_growth} levels and stable ranks grew "
            f"{s_growth} times"
        )
        return EndsReport("Infinity-evidence", 0, "growing", chain, trace, notes)
    return EndsReport("Inconclusive", 0, None, chain, trace, notes)


def ends(
    descriptor: ProPDescriptor,
    depth: int = 6,
    coset_budget: int = 20000,
    finite_budget: int = 4096,
    strategy: str = AUTO,
) -> EndsReport:
    notes = []
    if descriptor.has_torsion():
        notes.append(
            "descriptor has torsion; the full ends classification is only "
            "asserted for torsion-free groups"
        )
    return ends_of_presentation(
        descriptor.compile(),
        descriptor.p,
        depth=depth,
        coset_budget=coset_budget,
        finite_budget=finite_budget,
        strategy=strategy,
        notes=notes,
    )


def quotient_side_h1(
    base: Presentation,
    p: int,
    depth: int = 2,
    coset_budget: int = 20000,
) -> list:
    """dims of H^1(G, F_p[G/U_n]) along the Frattini chain, starting at
    U_0 = G (where the module is the trivial one)."""
    out = []
    sub = SubgroupData.whole_group(base)
    for _ in range(depth):
        mats = sub.table.permutation_action(p)
        out.append(fox_h1_dim(base, mats, p))
        ab = sub.abelianization(p)
        if ab.d == 0:
            break
        if p**ab.d * sub.index > coset_budget:
            raise BudgetExceeded(
                f"next Frattini level needs {p**ab.d * sub.index} cosets"
            )
        inner = frattini_kernel_table(sub.pres, p, ab)
        sub = SubgroupData(base, compose_tables(sub, inner))
    return out

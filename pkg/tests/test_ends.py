"""Ends via transfer colimits along finite-index subgroup chains."""

import pytest

from propends.descriptors import (
    CyclicP,
    DirectProduct,
    FreeProP,
    FreeProduct,
    Zp,
)
from propends.ends import (
    AUTO,
    FRATTINI,
    INDEX_P,
    ColimitTrace,
    build_chain,
    ends,
    ends_of_presentation,
    quotient_side_h1,
)
from propends.errors import BudgetExceeded
from propends.words import Presentation, commutator, free_group


def zp_squared_pres():
    return Presentation(2, (commutator((1,), (2,)),))


@pytest.mark.parametrize(
    "desc,want",
    [
        (CyclicP(2, 4), "0"),
        (CyclicP(3, 9), "0"),
        (Zp(2), "2"),
        (Zp(3), "2"),
        (Zp(5), "2"),
        (FreeProduct(2, (CyclicP(2, 2), CyclicP(2, 2))), "2"),
        (DirectProduct(2, Zp(2), Zp(2)), "1"),
        (FreeProP(2, 2), "Infinity-evidence"),
        (FreeProP(2, 3), "Infinity-evidence"),
    ],
)
def test_ends_catalog(desc, want):
    assert ends(desc).e_estimate == want


def test_torsion_note_present():
    rep = ends(FreeProduct(2, (CyclicP(2, 2), CyclicP(2, 2))))
    assert any("torsion" in n for n in rep.notes)
    rep2 = ends(Zp(2))
    assert not any("torsion" in n for n in rep2.notes)


def test_strategies_agree_for_zp():
    for p in (2, 3):
        a = ends(Zp(p), strategy=FRATTINI)
        b = ends(Zp(p), strategy=INDEX_P)
        assert a.e_estimate == b.e_estimate == "2"


def test_chain_shift_invariance():
    """Recomputing from a deeper starting level gives the same answer."""
    rep = ends(DirectProduct(2, Zp(2), Zp(2)))
    assert rep.e_estimate == "1"
    deeper = rep.chain.levels[1].pres
    rep2 = ends_of_presentation(deeper, 2)
    assert rep2.e_estimate == "1"


def test_chain_indices_and_dims():
    chain = build_chain(zp_squared_pres(), 2, AUTO, depth=3, coset_budget=20000)
    assert chain.levels[0].index_total == 1
    for lo, hi in zip(chain.levels, chain.levels[1:]):
        assert hi.index_total % lo.index_total == 0
        assert hi.index_total > lo.index_total
    # Zp^2 has d = 2 at every level.
    assert chain.dims() == [2] * len(chain.levels)


def test_trace_ranks_monotone_and_settled():
    chain = build_chain(free_group(1), 2, AUTO, depth=4, coset_budget=20000)
    trace = ColimitTrace(chain)
    last = len(chain.levels) - 1
    for n in range(last):
        for m in range(n + 1, last):
            assert trace.ranks[(n, m + 1)] <= trace.ranks[(n, m)]
    assert trace.settled(0)
    assert trace.stable[0] == 1


def test_quotient_side_h1_matches_subgroup_rank():
    # H^1(G, F_p[G/U]) = d(U); for free groups this is Nielsen-Schreier.
    dims = quotient_side_h1(free_group(2), 2, depth=2, coset_budget=20000)
    assert dims[0] == 2  # d(G)
    assert dims[1] == 4 * (2 - 1) + 1  # index 4 Frattini kernel
    dims3 = quotient_side_h1(free_group(1), 3, depth=3)
    assert dims3 == [1, 1, 1]


def test_quotient_side_h1_budget():
    with pytest.raises(BudgetExceeded):
        quotient_side_h1(free_group(2), 2, depth=3, coset_budget=8)


def test_truncation_reported():
    rep = ends_of_presentation(free_group(2), 2, depth=6, coset_budget=300)
    assert rep.chain.truncated
    assert any("truncated" in n for n in rep.notes)


def test_finite_group_shortcut():
    rep = ends_of_presentation(
        Presentation(1, ((1, 1, 1, 1),)), 2, depth=4
    )
    assert rep.e_estimate == "0"
    assert rep.chain is None
    assert any("finite" in n for n in rep.notes)

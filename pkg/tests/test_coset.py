"""Coset enumeration and direct kernel tables."""

import numpy as np
import pytest

from propends.coset import CosetTable, kernel_table, todd_coxeter
from propends.errors import BudgetExceeded, PropEndsError
from propends.words import (
    Presentation,
    commutator,
    cyclic_group,
    free_group,
    wpow,
)


def test_cyclic_subgroup_index():
    c4 = cyclic_group(4)
    t = todd_coxeter(c4, [wpow((1,), 2)])
    assert t.index == 2
    t = todd_coxeter(c4, [])
    assert t.index == 4


def test_whole_group_single_coset():
    c4 = cyclic_group(4)
    t = todd_coxeter(c4, [(1,)])
    assert t.index == 1


def test_klein_four_group_order():
    v4 = Presentation(2, (wpow((1,), 2), wpow((2,), 2), commutator((1,), (2,))))
    t = todd_coxeter(v4, [])
    assert t.index == 4


def test_quaternion_group_order():
    # a^4, a^2 = b^2, b a b^-1 = a^-1.
    q8 = Presentation(
        2,
        (
            wpow((1,), 4),
            (1, 1, -2, -2),
            (2, 1, -2, 1),
        ),
    )
    assert todd_coxeter(q8, []).index == 8


def test_heisenberg_27():
    # Extra-special group of order 27, exponent 3.
    rels = (
        wpow((1,), 3),
        wpow((2,), 3),
        wpow((3,), 3),
        (1, 2, -1, -2, -3),
        commutator((1,), (3,)),
        commutator((2,), (3,)),
    )
    assert todd_coxeter(Presentation(3, rels), []).index == 27


def test_free_group_kernel_index():
    f2 = free_group(2)
    t = todd_coxeter(f2, [(1,), (2, 2), (2, 1, -2)])
    assert t.index == 2


def test_infinite_index_raises_budget():
    with pytest.raises(BudgetExceeded) as exc:
        todd_coxeter(free_group(1), [], max_cosets=100)
    assert exc.value.defined is not None


def test_table_validation_catches_corruption():
    c4 = cyclic_group(4)
    t = todd_coxeter(c4, [wpow((1,), 2)])
    bad = t.table.copy()
    bad[0, 0] = 0
    with pytest.raises(PropEndsError):
        CosetTable(c4, t.sub_gens, bad).validate()


def test_trace_and_step_agree():
    c4 = cyclic_group(4)
    t = todd_coxeter(c4, [])
    for c in range(4):
        assert t.trace((1, 1), c) == t.step(t.step(c, 1), 1)
        assert t.step(t.step(c, 1), -1) == c


def test_kernel_table_matches_enumeration():
    f2 = free_group(2)
    # Kernel of a -> 1, b -> 0 in Z/4.
    kt = kernel_table(f2, [(1,), (0,)], [4])
    assert kt.index == 4
    gens = [(2,), wpow((1,), 4), (1, 2, -1), (1, 1, 2, -1, -1),
            (1, 1, 1, 2, -1, -1, -1)]
    te = todd_coxeter(f2, gens)
    assert te.index == 4
    kt.validate()
    # Same subgroup: generators of one fix coset 0 of the other.
    for w in ((2,), wpow((1,), 4), (1, 2, -1), (1, 1, 2, -1, -1)):
        assert kt.trace(w) == 0


def test_kernel_table_multi_coordinate():
    f2 = free_group(2)
    kt = kernel_table(f2, [(1, 0), (0, 1)], [2, 2])
    assert kt.index == 4
    assert kt.trace((1, 1)) == 0
    assert kt.trace((1, 2)) != 0


def test_kernel_table_rejects_bad_relator_image():
    c2 = cyclic_group(2)
    with pytest.raises(PropEndsError):
        kernel_table(c2, [(1,)], [4])


def test_permutation_action_is_left_action():
    c4 = cyclic_group(4)
    t = todd_coxeter(c4, [wpow((1,), 2)])
    mats = t.permutation_action(2)
    assert len(mats) == 1
    m = mats[0].a
    # Permutation matrix, and (sigma_g)^order = identity.
    assert np.array_equal(m.sum(axis=0), np.ones(2, dtype=np.int64))
    assert np.array_equal((m @ m) % 2, np.eye(2, dtype=np.int64))


def test_deterministic_tables():
    pres = Presentation(2, (wpow((1,), 2), wpow((2,), 2)))
    t1 = todd_coxeter(pres, [(1, 2)], max_cosets=500)
    t2 = todd_coxeter(pres, [(1, 2)], max_cosets=500)
    assert np.array_equal(t1.table, t2.table)
    assert t1.index == 2

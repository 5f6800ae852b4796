"""Subgroup machinery: transversals, rewriting, presentations, transfer."""

import random

import numpy as np
import pytest

from propends.abelian import AbelianizationData
from propends.coset import kernel_table, todd_coxeter
from propends.errors import MembershipError, PropEndsError
from propends.fplin import FpMatrix
from propends.subgroup import SubgroupData, compose_tables, transfer
from propends.words import (
    Presentation,
    commutator,
    cyclic_group,
    exponent_vector,
    free_group,
    free_reduce,
    substitute,
    winv,
    wmul,
    wpow,
)


def random_word(rng, n_gens, length):
    return free_reduce(
        rng.choice([s for s in range(-n_gens, n_gens + 1) if s])
        for _ in range(length)
    )


def test_abelianization_basics():
    ab = AbelianizationData(free_group(2), 3)
    assert ab.d == 2
    ab4 = AbelianizationData(cyclic_group(4), 2)
    assert ab4.d == 1
    # cyclic(3) dies at p = 2.
    assert AbelianizationData(cyclic_group(3), 2).d == 0


def test_abelianization_coords_homomorphism():
    rng = random.Random(2)
    pres = Presentation(3, (wpow((1,), 4), commutator((2,), (3,))))
    for p in (2, 3):
        ab = AbelianizationData(pres, p)
        for _ in range(20):
            a = random_word(rng, 3, 6)
            b = random_word(rng, 3, 6)
            assert np.array_equal(
                ab.coords(wmul(a, b)), (ab.coords(a) + ab.coords(b)) % p
            )
        for r in pres.relators:
            assert not np.any(ab.coords(r))


@pytest.mark.parametrize("r,n", [(2, 2), (2, 3), (3, 2), (2, 4)])
def test_nielsen_schreier_rank(r, n):
    pres = free_group(r)
    # Kernel of first generator mod n: index n.
    images = [(1,)] + [(0,)] * (r - 1)
    sub = SubgroupData(pres, kernel_table(pres, images, [n]))
    assert sub.index == n
    assert sub.pres.relators == ()
    assert sub.pres.n_gens == n * (r - 1) + 1


def test_transversal_is_prefix_closed():
    pres = free_group(2)
    sub = SubgroupData(pres, kernel_table(pres, [(1, 0), (0, 1)], [2, 2]))
    words = set(sub.transversal)
    for t in sub.transversal:
        for k in range(len(t)):
            assert t[:k] in words


def test_rewrite_round_trip_in_free_group():
    pres = free_group(2)
    sub = SubgroupData(pres, kernel_table(pres, [(1,), (1,)], [3]))
    rng = random.Random(5)
    for _ in range(30):
        # Random product of subgroup generators.
        w = ()
        for _ in range(rng.randint(1, 5)):
            g = rng.randrange(len(sub.gen_words))
            w = wmul(w, sub.gen_words[g] if rng.random() < 0.5
                     else winv(sub.gen_words[g]))
        assert sub.contains(w)
        back = substitute(sub.rewrite(w), sub.gen_words)
        assert back == w


def test_rewrite_rejects_non_members():
    pres = free_group(2)
    sub = SubgroupData(pres, kernel_table(pres, [(1,), (0,)], [2]))
    assert not sub.contains((1,))
    with pytest.raises(MembershipError):
        sub.rewrite((1,))


def test_whole_group_is_identity_subgroup():
    pres = free_group(2)
    whole = SubgroupData.whole_group(pres)
    assert whole.index == 1
    assert whole.pres.n_gens == 2
    assert whole.rewrite((1, 2)) == (1, 2)


def test_compose_tables_multiplies_index():
    pres = free_group(2)
    outer = SubgroupData(pres, kernel_table(pres, [(1,), (0,)], [2]))
    inner_ab = outer.abelianization(2)
    from propends.ends import frattini_kernel_table

    inner = frattini_kernel_table(outer.pres, 2, inner_ab)
    composed = compose_tables(outer, inner)
    assert composed.n == outer.index * inner.n
    composed.validate()
    # Every inner generator word, pushed to the parent, fixes coset 0.
    sub_w = SubgroupData(outer.pres, inner)
    for w in sub_w.gen_words:
        parent_word = substitute(w, outer.gen_words)
        assert composed.trace(parent_word) == 0


def test_transfer_z_to_pz_is_identity():
    pres = free_group(1)
    for p in (2, 3, 5):
        whole = SubgroupData.whole_group(pres)
        sub = SubgroupData(pres, kernel_table(pres, [(1,)], [p]))
        t = transfer(whole, sub, p)
        assert t.a.tolist() == [[1]]


def test_transfer_matches_definition_with_scrambled_transversal():
    """Transversal independence: recompute the generator images with
    representatives multiplied by subgroup elements; same matrix."""
    pres = free_group(2)
    p = 2
    whole = SubgroupData.whole_group(pres)
    sub = SubgroupData(pres, kernel_table(pres, [(1, 0), (0, 1)], [2, 2]))
    t = transfer(whole, sub, p)
    ab_v = sub.abelianization(p)
    rng = random.Random(9)
    # A transversal of the 4 cosets, each rep multiplied by a random
    # element of the subgroup on the left.
    reps = {}
    for c in range(sub.index):
        noise = sub.gen_words[rng.randrange(len(sub.gen_words))]
        reps[c] = wmul(noise if rng.random() < 0.5 else winv(noise),
                       sub.transversal[c])
        assert sub.table.trace(reps[c]) == c
    cmat = np.zeros((ab_v.d, 2), dtype=np.int64)
    for i, g in enumerate([(1,), (2,)]):
        total = np.zeros(ab_v.d, dtype=np.int64)
        for c in range(sub.index):
            c2 = sub.table.trace(g, start=c)
            total += ab_v.coords(sub.rewrite(wmul(reps[c], g, winv(reps[c2]))))
        cmat[:, i] = total % p
    gm = whole.abelianization(p).generator_coord_matrix()
    assert np.array_equal((t.a @ gm) % p, cmat)


@pytest.mark.parametrize("p", [2, 3])
def test_transfer_composes_along_nested_kernels(p):
    pres = free_group(2)
    whole = SubgroupData.whole_group(pres)
    mid = SubgroupData(pres, kernel_table(pres, [(1,), (0,)], [p]))
    low = SubgroupData(pres, kernel_table(pres, [(1,), (0,)], [p * p]))
    for w in low.gen_words:
        assert mid.contains(w)
    t_gm = transfer(whole, mid, p)
    t_gl = transfer(whole, low, p)
    t_ml = transfer(mid, low, p)
    assert (t_ml @ t_gm) == t_gl


def test_transfer_rejects_non_nested_subgroups():
    pres = free_group(2)
    a_ker = SubgroupData(pres, kernel_table(pres, [(1,), (0,)], [2]))
    b_ker = SubgroupData(pres, kernel_table(pres, [(0,), (1,)], [2]))
    with pytest.raises(MembershipError):
        transfer(a_ker, b_ker, 2)


def test_subgroup_of_relator_group_gets_relators():
    c4 = cyclic_group(4)
    sub = SubgroupData(c4, todd_coxeter(c4, [wpow((1,), 2)]))
    assert sub.index == 2
    assert sub.pres.n_gens == 1
    assert sub.pres.relators == ((1, 1),)  # the subgroup is C2

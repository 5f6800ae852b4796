"""Finite p-groups and their modular representations."""

import numpy as np
import pytest

from propends.errors import ActionInvalid, NonPGroup, SubgroupInvalid
from propends.finite_group import (
    FiniteGroup,
    SubgroupEmbedding,
    cyclic_p_group,
    trivial_group,
)
from propends.gmodule import (
    GModule,
    augmentation_ideal,
    direct_sum,
    hom_space,
    induce,
    invariants,
    is_isomorphic,
    j_ideal,
    regular_module,
    restrict,
    trivial_module,
)
from propends.words import Presentation, commutator, cyclic_group, wpow

V4 = Presentation(2, (wpow((1,), 2), wpow((2,), 2), commutator((1,), (2,))))
D4 = Presentation(2, (wpow((1,), 4), wpow((2,), 2), (2, 1, 2, 1)))
HEIS3 = Presentation(
    3,
    (
        wpow((1,), 3),
        wpow((2,), 3),
        wpow((3,), 3),
        (1, 2, -1, -2, -3),
        commutator((1,), (3,)),
        commutator((2,), (3,)),
    ),
)


def test_finite_group_table_is_a_group():
    g = FiniteGroup(D4, 2)
    assert g.order == 8
    for a in range(8):
        assert g.multiply(a, 0) == a == g.multiply(0, a)
        assert g.multiply(a, g.inverse(a)) == 0
    # Associativity spot check.
    rng = np.random.default_rng(3)
    for _ in range(40):
        a, b, c = rng.integers(0, 8, size=3)
        assert g.multiply(g.multiply(a, b), c) == g.multiply(a, g.multiply(b, c))


def test_non_p_group_rejected():
    with pytest.raises(NonPGroup):
        FiniteGroup(cyclic_group(6), 2)
    with pytest.raises(NonPGroup):
        cyclic_p_group(6, 3)


def test_regular_module_and_invariants():
    for pres, p in ((V4, 2), (cyclic_group(9), 3)):
        g = FiniteGroup(pres, p)
        lam = regular_module(g)
        assert lam.dim == g.order
        # Invariants of the regular module of a p-group: the socle, dim 1.
        assert invariants(lam).dim == 1
        aug = augmentation_ideal(g)
        assert aug.dim == g.order - 1
        assert invariants(aug).dim == 1
        assert invariants(trivial_module(g)).dim == 1


def test_hom_space_dimensions_regular():
    g = FiniteGroup(cyclic_group(4), 2)
    lam = regular_module(g)
    # Hom(Lambda, M) is isomorphic to M as a vector space.
    assert hom_space(lam, lam).dim == 4
    assert hom_space(lam, trivial_module(g)).dim == 1
    assert hom_space(trivial_module(g), lam).dim == 1
    aug = augmentation_ideal(g)
    assert hom_space(lam, aug).dim == 3


def test_hom_space_elements_are_intertwiners():
    g = FiniteGroup(V4, 2)
    lam = regular_module(g)
    aug = augmentation_ideal(g)
    hs = hom_space(lam, aug)
    rng = np.random.default_rng(7)
    f = hs.element(rng.integers(0, 2, size=hs.dim))
    for ga, gm in zip(aug.action, lam.action):
        assert np.array_equal((ga @ f) % 2, (f @ gm) % 2)


def test_embedding_and_cosets():
    g = FiniteGroup(cyclic_group(4), 2)
    h = cyclic_p_group(2, 2)
    emb = SubgroupEmbedding(g, h, [wpow((1,), 2)])
    assert emb.index == 2
    assert len(emb.coset_reps) == 2
    # location is consistent: g = rep * sub_elem.
    for x in range(g.order):
        j, hh = emb.location[x]
        assert g.multiply(emb.coset_reps[j], emb.elem_map[hh]) == x


def test_embedding_rejects_wrong_words():
    g = FiniteGroup(cyclic_group(4), 2)
    h = cyclic_p_group(2, 2)
    with pytest.raises(SubgroupInvalid):
        SubgroupEmbedding(g, h, [(1,)])  # order 4 element, not order 2


def test_induce_trivial_is_regular():
    for pres, p in ((cyclic_group(4), 2), (V4, 2), (cyclic_group(3), 3)):
        g = FiniteGroup(pres, p)
        one = trivial_group(p)
        emb = SubgroupEmbedding(g, one, [()])
        ind = induce(emb, trivial_module(one))
        assert ind.dim == g.order
        res = is_isomorphic(ind, regular_module(g), seed=0)
        assert res.status == "yes"


@pytest.mark.parametrize(
    "pres,p,sub_word",
    [
        (cyclic_group(4), 2, (1, 1)),
        (V4, 2, (1,)),
        (cyclic_group(9), 3, (1, 1, 1)),
    ],
)
def test_frobenius_reciprocity_dimensions(pres, p, sub_word):
    g = FiniteGroup(pres, p)
    h = cyclic_p_group(p, p)
    emb = SubgroupEmbedding(g, h, [sub_word])
    for m in (trivial_module(h), augmentation_ideal(h)):
        for n in (regular_module(g), augmentation_ideal(g)):
            lhs = hom_space(induce(emb, m), n).dim
            rhs = hom_space(m, restrict(emb, n)).dim
            assert lhs == rhs


def test_is_isomorphic_distinguishes_equal_dims():
    g = FiniteGroup(cyclic_group(4), 2)
    lam = regular_module(g)
    other = direct_sum(augmentation_ideal(g), trivial_module(g))
    assert other.dim == lam.dim
    res = is_isomorphic(lam, other, seed=0)
    assert res.status == "no"
    res2 = is_isomorphic(lam, regular_module(g), seed=0)
    assert res2.status == "yes"
    # The witness really is an isomorphism of modules.
    w = res2.witness.a
    for a, b in zip(lam.action, regular_module(g).action):
        assert np.array_equal((b @ w) % 2, (w @ a) % 2)


def test_j_ideal_dimensions():
    g = FiniteGroup(V4, 2)
    emb = SubgroupEmbedding.whole(g)
    assert j_ideal(emb).dim == g.order - 1
    h = cyclic_p_group(2, 2)
    emb2 = SubgroupEmbedding(g, h, [(1,)])
    assert j_ideal(emb2).dim == g.order - emb2.index


def test_direct_sum_and_restrict_dims():
    g = FiniteGroup(HEIS3, 3)
    assert g.order == 27
    aug = augmentation_ideal(g)
    s = direct_sum(aug, trivial_module(g))
    assert s.dim == 27
    h = cyclic_p_group(3, 3)
    emb = SubgroupEmbedding(g, h, [(3,)])  # central generator
    r = restrict(emb, s)
    assert r.dim == 27 and r.group is h


def test_gmodule_validates_action():
    g = FiniteGroup(cyclic_group(2), 2)
    with pytest.raises(ActionInvalid):
        GModule(g, [np.zeros((2, 2), dtype=np.int64)])  # singular
    with pytest.raises(ActionInvalid):
        # Invertible but of order 3, so it breaks the relator a^2.
        GModule(g, [np.array([[0, 1], [1, 1]], dtype=np.int64)])
    with pytest.raises(ActionInvalid):
        GModule(g, [])  # wrong number of matrices

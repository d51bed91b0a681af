import itertools
import random
from fractions import Fraction
from math import gcd, prod

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from neronpair.fgab import (
    BilinearPairing,
    FpAbGroup,
    GroupError,
    GroupHom,
    QModZ,
    block_hom,
    direct_sum,
    double_dual_map,
    evaluation_pairing,
    ext1_Z,
    finite_groups,
    hom_from_images,
    is_exact_at,
    is_perfect,
    pairing_adjoint,
    pontryagin_dual,
    present,
    primary_component,
    primary_decomposition,
    prime_factors,
    tensor_hom,
    tensor_product,
)
from neronpair.linalg import IntegerMatrix

from conftest import finite_groups as finite_group_strategy
from conftest import group_profile, order_profile, random_hom


def test_qmodz():
    assert QModZ(3, 4) + QModZ(1, 4) == QModZ(0, 1)
    assert QModZ(-1, 3) == QModZ(2, 3)
    assert QModZ(2, 4) == QModZ(1, 2)
    assert str(QModZ.parse("5/6")) == "5/6"
    assert (QModZ(1, 6) * 3) == QModZ(1, 2)
    assert QModZ(1, 6).order == 6


def test_normal_form():
    assert FpAbGroup.from_orders([2, 3]) == FpAbGroup(0, (6,))
    assert FpAbGroup.from_orders([4, 6]) == FpAbGroup(0, (2, 12))
    assert FpAbGroup.from_orders([0, 2, 1]) == FpAbGroup(1, (2,))
    assert str(FpAbGroup(2, (2, 4))) == "Z/2 x Z/4 x Z^2"
    assert str(FpAbGroup()) == "0"
    assert FpAbGroup.parse("1; 2,4") == FpAbGroup(1, (2, 4))
    with pytest.raises(GroupError):
        FpAbGroup(0, (4, 2))
    with pytest.raises(GroupError):
        FpAbGroup(0, (1,))


def test_finite_group_census():
    # number of abelian groups of order n is a product of partition numbers
    counts = {}
    for G in finite_groups(16):
        counts[G.order] = counts.get(G.order, 0) + 1
    assert counts == {1: 1, 2: 1, 3: 1, 4: 2, 5: 1, 6: 1, 7: 1, 8: 3, 9: 2, 10: 1,
                      11: 1, 12: 2, 13: 1, 14: 1, 15: 1, 16: 5}


def test_hom_validation():
    Z2, Z = FpAbGroup.cyclic(2), FpAbGroup.cyclic(0)
    with pytest.raises(GroupError):
        hom_from_images(Z2, Z, [[1]])
    Z4 = FpAbGroup.cyclic(4)
    h = hom_from_images(Z2, Z4, [[2]])
    assert h((1,)) == (2,)
    with pytest.raises(GroupError):
        hom_from_images(Z2, Z4, [[1]])


def _brute_kernel(f: GroupHom):
    return [x for x in f.source.elements() if not any(f(x))]


def _brute_image(f: GroupHom):
    return {f(x) for x in f.source.elements()}


def _coset_order(H: FpAbGroup, image: set, y) -> int:
    k = 1
    while H.mul(k, y) not in image:
        k += 1
    return k


@settings(max_examples=120, deadline=None)
@given(finite_group_strategy(36), finite_group_strategy(36), st.integers(0, 10**6))
def test_kernel_image_cokernel_enumeration(G, H, seed):
    f = random_hom(random.Random(seed), G, H)
    ker, img, cok = f.kernel(), f.image(), f.cokernel()
    K = _brute_kernel(f)
    assert group_profile(ker.group) == order_profile(K, G.element_order)
    I = _brute_image(f)
    assert group_profile(img.group) == order_profile(I, H.element_order)
    # cosets: one representative per class
    reps, seen = [], set()
    for y in H.elements():
        if y in seen:
            continue
        reps.append(y)
        seen |= {H.add(y, i) for i in I}
    assert group_profile(cok.group) == order_profile(reps, lambda y: _coset_order(H, I, y))
    for g in map(ker.group.generator, range(ker.group.ngens)):
        assert not any(f(ker.lift_element(g)))
    assert f.is_injective() == (len(K) == 1)
    assert f.is_surjective() == (len(I) == H.order)


def test_free_hom():
    f = GroupHom(FpAbGroup.free(2), FpAbGroup.free(2), IntegerMatrix.from_rows([[2, 0], [0, 3]]))
    assert f.cokernel().group == FpAbGroup(0, (6,))
    assert f.kernel().group.is_trivial
    g = GroupHom(FpAbGroup.free(2), FpAbGroup.free(1), IntegerMatrix.from_rows([[2, 4]]))
    assert g.kernel().group == FpAbGroup.free(1)
    assert g.image().group == FpAbGroup.free(1)
    assert g.cokernel().group == FpAbGroup.cyclic(2)


def test_exactness():
    Z, Z2 = FpAbGroup.cyclic(0), FpAbGroup.cyclic(2)
    two = GroupHom(Z, Z, IntegerMatrix.from_rows([[2]]))
    proj = GroupHom(Z, Z2, IntegerMatrix.from_rows([[1]]))
    assert is_exact_at(two, proj)
    assert not is_exact_at(GroupHom(Z, Z, IntegerMatrix.from_rows([[4]])), proj)


def test_inverse():
    G = FpAbGroup(0, (2, 4))
    f = hom_from_images(G, G, [[1, 2], [0, 3]])
    assert f.is_isomorphism()
    assert f.inverse() @ f == GroupHom.identity(G)


@settings(max_examples=80, deadline=None)
@given(finite_group_strategy(30), finite_group_strategy(30))
def test_tensor_order_formula(G, H):
    T = tensor_product(G, H)
    assert T.group.order == prod(gcd(a, b) for a in G.orders for b in H.orders)
    # bilinearity on random elements
    rng = random.Random(G.order * 31 + H.order)
    for _ in range(10):
        x, x2 = [rng.randrange(o) for o in G.orders], [rng.randrange(o) for o in G.orders]
        y = [rng.randrange(o) for o in H.orders]
        lhs = T.pure([a + b for a, b in zip(x, x2)], y)
        assert lhs == T.group.add(T.pure(x, y), T.pure(x2, y))


def test_tensor_hom_functorial():
    G, H = FpAbGroup.cyclic(4), FpAbGroup.cyclic(6)
    f = hom_from_images(G, G, [[3]])
    g = hom_from_images(H, H, [[5]])
    T = tensor_product(G, H)
    fg = tensor_hom(f, g, T, T)
    assert fg(T.pure((1,), (1,))) == T.pure(f((1,)), g((1,)))
    assert tensor_hom(f @ f, g @ g, T, T) == fg @ fg


def test_direct_sum_and_blocks():
    G, H = FpAbGroup.cyclic(2), FpAbGroup.cyclic(3)
    S = direct_sum([G, H])
    assert S.group == FpAbGroup(0, (6,))
    for i in range(2):
        assert S.projection(i) @ S.inclusion(i) == GroupHom.identity(S.summands[i])
    assert (S.projection(1) @ S.inclusion(0)).is_zero()
    swap = block_hom(S, S, {(0, 0): GroupHom.identity(G), (1, 1): GroupHom.identity(H).scale(2)})
    assert swap.is_isomorphism()


# ---------------------------------------------------------------------------
# duality


def _brute_characters(G: FpAbGroup):
    """All homs G -> Q/Z as value tuples on generators (enumeration oracle)."""
    return list(itertools.product(*([QModZ(k, d) for k in range(d)] for d in G.invariant_factors)))


def _perfect_by_enumeration(P: BilinearPairing) -> bool:
    if P.left.order != P.right.order:
        return False
    for x in P.left.elements():
        if any(x) and all(P(x, y).is_zero() for y in P.right.elements()):
            return False
    return True


def test_dual_counts_homs():
    for G in finite_groups(24):
        chars = _brute_characters(G)
        Gs, ev = pontryagin_dual(G)
        assert len(chars) == Gs.order
        def char_order(c):
            o = 1
            for v in c:
                o = o * v.order // gcd(o, v.order)
            return o
        assert order_profile(chars, char_order) == group_profile(Gs)


@settings(max_examples=150, deadline=None)
@given(finite_group_strategy(24), finite_group_strategy(24), st.integers(0, 10**6))
def test_perfect_matches_enumeration(G, H, seed):
    rng = random.Random(seed)
    vals = []
    for a in G.orders:
        row = []
        for b in H.orders:
            g = gcd(a, b)
            row.append(QModZ(rng.randrange(g), g))
        vals.append(row)
    P = BilinearPairing(G, H, vals)
    assert is_perfect(P) == _perfect_by_enumeration(P)
    adj = pairing_adjoint(P)
    _, ev = pontryagin_dual(H)
    for x in itertools.islice(G.elements(), 20):
        for y in itertools.islice(H.elements(), 20):
            assert P(x, y) == ev(y, adj(x))


def test_evaluation_pairing_perfect():
    for G in finite_groups(64):
        assert is_perfect(evaluation_pairing(G))


def test_double_dual_and_ext1():
    for G in finite_groups(64):
        dd = double_dual_map(G)
        assert dd.is_isomorphism()
        for x in G.elements():
            assert dd(x) == tuple(x)
        ext, iso = ext1_Z(G)
        assert ext.invariant_factors == pontryagin_dual(G)[0].invariant_factors
        assert iso.is_isomorphism()
    ext, _ = ext1_Z(FpAbGroup(2, (3,)))
    assert ext == FpAbGroup(0, (3,))


def test_primary_decomposition():
    for G in finite_groups(64):
        parts = primary_decomposition(G)
        assert prod(Gp.order for _, Gp in parts) == G.order
        for p, Gp in parts:
            assert all(prime_factors(d) == [p] for d in Gp.invariant_factors)
            _, inc = primary_component(G, p)
            assert inc.is_injective()
        ev = evaluation_pairing(G)
        for (p, _), (q, _) in itertools.permutations(parts, 2):
            Gp, ip = primary_component(G, p)
            Gq, iq = primary_component(G, q)
            for x in map(Gp.generator, range(Gp.ngens)):
                for y in map(Gq.generator, range(Gq.ngens)):
                    assert ev(ip(x), iq(y)).is_zero()


def test_present():
    p = present(IntegerMatrix.from_rows([[2, 1], [1, 3]]))
    assert p.group == FpAbGroup.cyclic(5)
    proj = p.projection()
    assert proj((2, 1)) == (0,) and proj((1, 3)) == (0,)


def test_pairing_validation():
    G = FpAbGroup.cyclic(2)
    with pytest.raises(GroupError):
        BilinearPairing(G, G, ((QModZ(1, 3),),))
    P = BilinearPairing(G, FpAbGroup.cyclic(4), ((Fraction(1, 2),),))
    assert P.transpose()((1,), (1,)) == QModZ(1, 2)

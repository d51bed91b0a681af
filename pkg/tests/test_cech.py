import itertools
import random
from math import gcd

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from neronpair.cech import (
    CechCochain,
    CoveringPresheaf,
    PresheafError,
    aw_cup_cech,
    cech_complex,
    cech_complex_data,
    cech_differential,
    nerve_presheaf,
    nonempty_subsets,
    sections,
)
from neronpair.complexes import Complex
from neronpair.fgab import FpAbGroup, GroupHom, hom_from_images
from neronpair.linalg import IntegerMatrix

Z = FpAbGroup.cyclic(0)


def simplicial_complex_oracle(vertices, simplices, group: FpAbGroup, top: int) -> Complex:
    """Alternating cochains on the nerve: one copy of ``group`` per increasing simplex."""
    faces = set()
    for s in simplices:
        for k in range(1, len(s) + 1):
            faces.update(tuple(sorted(c)) for c in itertools.combinations(s, k))
    by_dim = [sorted(f for f in faces if len(f) == r + 1) for r in range(top + 2)]
    terms = [FpAbGroup.from_orders(list(group.orders) * len(b)) for b in by_dim]
    g = group.ngens
    maps = []
    for r in range(top + 1):
        rows = []
        for tau in by_dim[r + 1]:
            for a in range(g):
                row = [0] * (len(by_dim[r]) * g)
                for k in range(r + 2):
                    face = tau[:k] + tau[k + 1:]
                    row[by_dim[r].index(face) * g + a] += (-1) ** k
                rows.append(row)
        m = IntegerMatrix.from_rows(rows, cols=len(by_dim[r]) * g)
        maps.append(GroupHom(terms[r], terms[r + 1], m))
    return Complex.from_maps(0, maps)


def reduction_presheaf(index, N, mult):
    """``Z/n_S`` with ``n_S = N / gcd(N, prod_{i in S} mult_i)`` and reduction maps."""
    def n_of(S):
        p = 1
        for i in S:
            p *= mult[i]
        return N // gcd(N, p)

    vals = {S: FpAbGroup.cyclic(n_of(S)) for S in nonempty_subsets(index)}
    res = {}
    for S in vals:
        for a in index:
            if a not in S:
                T = S | {a}
                GS, GT = vals[S], vals[T]
                if GS.is_trivial or GT.is_trivial:
                    continue
                res[(S, T)] = hom_from_images(GS, GT, [[1]])
    return CoveringPresheaf(index, vals, res)


def random_presheaf(rng: random.Random) -> CoveringPresheaf:
    index = tuple(range(rng.randint(1, 3)))
    if rng.random() < 0.5:
        simplices = [s for k in (2, 3) for s in itertools.combinations(index, k) if rng.random() < 0.6]
        simplices += [(i,) for i in index]
        return nerve_presheaf(index, simplices, rng.choice([Z, FpAbGroup.cyclic(2), FpAbGroup.cyclic(6)]))
    N = rng.choice([4, 6, 12])
    return reduction_presheaf(index, N, {i: rng.choice([1, 2, 3]) for i in index})


def random_cochain(rng, F, r):
    def val(t):
        return [rng.randint(-4, 4) if o == 0 else rng.randrange(o) for o in F.value(t).orders]

    return CechCochain.from_function(F, r, val)


def test_golden_two_sets():
    F = CoveringPresheaf.constant((1, 2), Z)
    cc = cech_complex_data(F, 2)
    assert [cc.cohomology(r) for r in range(3)] == [Z, FpAbGroup(), FpAbGroup()]


def test_golden_circle():
    F = nerve_presheaf((0, 1, 2), [(0, 1), (1, 2), (0, 2)], Z)
    cc = cech_complex_data(F, 1)
    assert cc.cohomology(0) == Z and cc.cohomology(1) == Z
    assert cech_complex_data(F, 2).cohomology(2).is_trivial


def test_trivial_presheaf_and_constant_torsion():
    F = CoveringPresheaf.with_defaults((0, 1), {})
    X = cech_complex(F, 2)
    assert all(t.is_trivial for t in X.terms)
    G = CoveringPresheaf.constant((0, 1, 2), FpAbGroup.cyclic(6))
    cc = cech_complex_data(G, 2)
    assert [cc.cohomology(r) for r in range(3)] == [FpAbGroup.cyclic(6), FpAbGroup(), FpAbGroup()]


def test_truncation_guard():
    cc = cech_complex_data(CoveringPresheaf.constant((0,), Z), 1)
    with pytest.raises(PresheafError):
        cc.cohomology(2)
    with pytest.raises(PresheafError):
        cech_complex_data(CoveringPresheaf.constant((0,), Z), -1)


def test_matches_alternating_complex():
    # ordered-tuple and alternating Cech complexes are quasi-isomorphic
    for n in (1, 2, 3, 4):
        index = tuple(range(n))
        edges = list(itertools.combinations(index, 2))
        for k in range(len(edges) + 1):
            for chosen in itertools.combinations(edges, k):
                if n == 4 and k not in (3, 4, 6):
                    continue
                simplices = [(i,) for i in index] + list(chosen)
                for group in (Z, FpAbGroup.cyclic(2)):
                    F = nerve_presheaf(index, simplices, group)
                    cc = cech_complex_data(F, 1)
                    oracle = simplicial_complex_oracle(index, simplices, group, 1)
                    for r in (0, 1):
                        assert cc.cohomology(r) == oracle.cohomology(r)
    # a filled triangle is contractible
    F = nerve_presheaf((0, 1, 2), [(0, 1, 2)], Z)
    cc = cech_complex_data(F, 2)
    assert [cc.cohomology(r) for r in range(3)] == [Z, FpAbGroup(), FpAbGroup()]


def test_functoriality_checked():
    Z2 = FpAbGroup.cyclic(2)
    vals = {frozenset({0}): Z, frozenset({1}): Z, frozenset({0, 1}): Z2}
    res = {(frozenset({0}), frozenset({0, 1})): hom_from_images(Z, Z2, [[1]])}
    with pytest.raises(PresheafError):
        CoveringPresheaf((0, 1), vals, res)
    vals3 = {S: Z for S in nonempty_subsets((0, 1, 2))}
    res3 = {}
    for S in vals3:
        for a in (0, 1, 2):
            if a not in S:
                res3[(S, S | {a})] = GroupHom.identity(Z)
    res3[(frozenset({0}), frozenset({0, 1}))] = GroupHom.identity(Z).scale(-1)
    with pytest.raises(PresheafError):
        CoveringPresheaf((0, 1, 2), vals3, res3)


def test_sections_nontrivial_restrictions():
    Z2 = FpAbGroup.cyclic(2)
    vals = {frozenset({0}): Z, frozenset({1}): Z, frozenset({0, 1}): Z2}
    res = {(frozenset({0}), frozenset({0, 1})): hom_from_images(Z, Z2, [[1]]),
           (frozenset({1}), frozenset({0, 1})): hom_from_images(Z, Z2, [[1]])}
    F = CoveringPresheaf((0, 1), vals, res)
    assert sections(F) == FpAbGroup.free(2)
    assert cech_complex_data(F, 1).cohomology(0) == sections(F)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_h0_is_sections(seed):
    F = random_presheaf(random.Random(seed))
    assert cech_complex_data(F, 0).cohomology(0) == sections(F)


def test_cup_formula_examples():
    F = CoveringPresheaf.constant((1, 2), Z)
    a0 = CechCochain.from_function(F, 0, lambda t: (3 * t[0],))
    b0 = CechCochain.from_function(F, 0, lambda t: (t[0] + 1,))
    c = aw_cup_cech(a0, b0)
    T = F.tensor(F)
    for i in (1, 2):
        assert c[(i,)] == T.pure(frozenset({i}), a0[(i,)], b0[(i,)])
    a1 = CechCochain.from_function(F, 1, lambda t: (10 * t[0] + t[1],))
    c = aw_cup_cech(a1, b0)
    assert c[(1, 2)] == T.pure(frozenset({1, 2}), (12,), (3,))
    assert c[(1, 2)] == (36,)


@settings(max_examples=120, deadline=None)
@given(st.integers(0, 10**6))
def test_leibniz(seed):
    rng = random.Random(seed)
    F, G = random_presheaf(rng), random_presheaf(rng)
    while G.index_set != F.index_set:
        G = random_presheaf(rng)
    r, s = rng.randint(0, 2), rng.randint(0, 1)
    a, b = random_cochain(rng, F, r), random_cochain(rng, G, s)
    lhs = cech_differential(aw_cup_cech(a, b))
    rhs = aw_cup_cech(cech_differential(a), b) + aw_cup_cech(a, cech_differential(b)).scale((-1) ** r)
    assert (lhs - rhs).is_zero()


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10**6))
def test_differential_squares_to_zero(seed):
    rng = random.Random(seed)
    F = random_presheaf(rng)
    a = random_cochain(rng, F, rng.randint(0, 2))
    assert cech_differential(cech_differential(a)).is_zero()


def _class_generators(cc, r):
    H = cc.cohomology(r)
    return [cc.cocycle(r, H.generator(i)) for i in range(H.ngens)]


def test_cocycle_cup_cocycle():
    covers = [
        nerve_presheaf((0, 1, 2), [(0, 1), (1, 2), (0, 2)], Z),
        CoveringPresheaf.constant((0, 1), FpAbGroup.cyclic(2)),
        reduction_presheaf((0, 1, 2), 12, {0: 2, 1: 3, 2: 1}),
    ]
    for F in covers:
        cc = cech_complex_data(F, 2)
        for r, s in ((0, 0), (0, 1), (1, 0), (1, 1), (0, 2)):
            for a in _class_generators(cc, r):
                for b in _class_generators(cc, s):
                    assert cech_differential(aw_cup_cech(a, b)).is_zero()


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_cup_class_independent(seed):
    rng = random.Random(seed)
    F = rng.choice([
        nerve_presheaf((0, 1, 2), [(0, 1), (1, 2), (0, 2)], Z),
        reduction_presheaf((0, 1, 2), 12, {0: 2, 1: 3, 2: 1}),
        CoveringPresheaf.constant((0, 1), FpAbGroup.cyclic(4)),
    ])
    cc = cech_complex_data(F, 1)
    T = F.tensor(F)
    tc = cech_complex_data(T.presheaf, 2)
    r, s = rng.choice([(0, 1), (1, 0), (1, 1), (0, 0)])
    Hr, Hs = cc.cohomology(r), cc.cohomology(s)
    x = [rng.randrange(o) if o else rng.randint(-3, 3) for o in Hr.orders]
    y = [rng.randrange(o) if o else rng.randint(-3, 3) for o in Hs.orders]
    a, b = cc.cocycle(r, x), cc.cocycle(s, y)
    a2 = a + cech_differential(random_cochain(rng, F, r - 1)) if r else a
    b2 = b + cech_differential(random_cochain(rng, F, s - 1)) if s else b
    assert tc.class_of(aw_cup_cech(a, b)) == tc.class_of(aw_cup_cech(a2, b2))

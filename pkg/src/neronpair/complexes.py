"""Bounded cochain complexes of finitely generated abelian groups.

Grading is cohomological: ``d^n: X^n -> X^{n+1}``.  Homological statements are
transported by ``H^n = H_{-n}``.

Double complexes store *commuting* squares; :func:`total_complex` multiplies the
vertical differential leaving column ``p`` by ``(-1)^p`` so that the total
differential squares to zero.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from math import prod
from typing import Iterable, Sequence

from .fgab import (
    TRIVIAL,
    DirectSum,
    FpAbGroup,
    GroupError,
    GroupHom,
    Subquotient,
    block_hom,
    direct_sum,
    hom_from_images,
    is_exact_at,
    tensor_hom,
    tensor_product,
)
from .linalg import IntegerMatrix, smith_normal_form


class ComplexError(ValueError):
    """Raised when complex data violates d o d = 0, exactness or shape rules."""


@dataclass(frozen=True)
class Complex:
    """``X^lo -> X^{lo+1} -> ... -> X^hi`` with ``differentials[i]: terms[i] -> terms[i+1]``."""

    lowest_degree: int
    terms: tuple[FpAbGroup, ...]
    differentials: tuple[GroupHom, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))
        object.__setattr__(self, "differentials", tuple(self.differentials))
        if self.terms and len(self.differentials) != len(self.terms) - 1:
            raise ComplexError(
                f"{len(self.terms)} terms need {len(self.terms) - 1} differentials, "
                f"got {len(self.differentials)}"
            )
        for i, d in enumerate(self.differentials):
            if d.source != self.terms[i] or d.target != self.terms[i + 1]:
                raise ComplexError(f"differential in degree {self.lowest_degree + i} has the wrong endpoints")
        for i in range(len(self.differentials) - 1):
            if not (self.differentials[i + 1] @ self.differentials[i]).is_zero():
                raise ComplexError(f"d o d != 0 starting in degree {self.lowest_degree + i}")

    @classmethod
    def single(cls, group: FpAbGroup, degree: int = 0) -> "Complex":
        return cls(degree, (group,), ())

    @classmethod
    def from_maps(cls, lowest_degree: int, maps: Sequence[GroupHom]) -> "Complex":
        if not maps:
            raise ComplexError("use Complex.single for a one-term complex")
        terms = [maps[0].source] + [m.target for m in maps]
        return cls(lowest_degree, tuple(terms), tuple(maps))

    @property
    def highest_degree(self) -> int:
        return self.lowest_degree + len(self.terms) - 1

    @property
    def degrees(self) -> range:
        return range(self.lowest_degree, self.highest_degree + 1)

    def term(self, n: int) -> FpAbGroup:
        if self.lowest_degree <= n <= self.highest_degree:
            return self.terms[n - self.lowest_degree]
        return TRIVIAL

    def differential(self, n: int) -> GroupHom:
        if self.lowest_degree <= n < self.highest_degree:
            return self.differentials[n - self.lowest_degree]
        return GroupHom.zero(self.term(n), self.term(n + 1))

    def is_free(self) -> bool:
        return all(not t.invariant_factors for t in self.terms)

    def cohomology_data(self, n: int) -> Subquotient:
        """``ker d^n / im d^{n-1}`` as a subquotient of the coordinates of ``X^n``."""
        K = self.differential(n).kernel_lattice
        L = self.differential(n - 1).image_lattice()
        return Subquotient.build(K, L)

    def cohomology(self, n: int) -> FpAbGroup:
        return self.cohomology_data(n).group

    def cohomology_table(self) -> dict[int, FpAbGroup]:
        return {n: self.cohomology(n) for n in self.degrees}

    def is_acyclic(self) -> bool:
        return all(self.cohomology(n).is_trivial for n in self.degrees)

    def shift(self, k: int) -> "Complex":
        """``X[k]`` with ``X[k]^n = X^{n+k}`` and differentials multiplied by ``(-1)^k``."""
        sign = -1 if k % 2 else 1
        return Complex(self.lowest_degree - k, self.terms, tuple(d.scale(sign) for d in self.differentials))


def cohomology(X: Complex, n: int) -> FpAbGroup:
    """``H^n(X)`` in normal form (trivial outside the support of ``X``)."""
    return X.cohomology(n)


def is_cocycle(X: Complex, n: int, x: Sequence[int]) -> bool:
    return not any(X.differential(n)(x))


# ---------------------------------------------------------------------------
# chain maps


@dataclass(frozen=True)
class ChainMap:
    """Degreewise homomorphisms commuting with the differentials."""

    source: Complex
    target: Complex
    components: dict[int, GroupHom] = field(default_factory=dict)

    def __post_init__(self):
        lo = min(self.source.lowest_degree, self.target.lowest_degree) - 1
        hi = max(self.source.highest_degree, self.target.highest_degree) + 1
        for n in range(lo, hi):
            f, g = self.at(n), self.at(n + 1)
            if not ((g @ self.source.differential(n)) - (self.target.differential(n) @ f)).is_zero():
                raise ComplexError(f"chain map does not commute with d in degree {n}")

    def at(self, n: int) -> GroupHom:
        if n in self.components:
            h = self.components[n]
            if h.source != self.source.term(n) or h.target != self.target.term(n):
                raise ComplexError(f"component in degree {n} has the wrong endpoints")
            return h
        return GroupHom.zero(self.source.term(n), self.target.term(n))

    def induced(self, n: int) -> GroupHom:
        """The map ``H^n(source) -> H^n(target)``."""
        hs = self.source.cohomology_data(n)
        ht = self.target.cohomology_data(n)
        f = self.at(n)
        cols = [ht.project(f.matrix.apply(hs.lift.col(j))) for j in range(hs.group.ngens)]
        return hom_from_images(hs.group, ht.group, cols)

    def is_quasi_isomorphism(self) -> bool:
        lo = min(self.source.lowest_degree, self.target.lowest_degree)
        hi = max(self.source.highest_degree, self.target.highest_degree)
        return all(self.induced(n).is_isomorphism() for n in range(lo, hi + 1))


def identity_map(X: Complex) -> ChainMap:
    return ChainMap(X, X, {n: GroupHom.identity(X.term(n)) for n in X.degrees})


# ---------------------------------------------------------------------------
# free approximation


def _relation_block(G: FpAbGroup) -> IntegerMatrix:
    return G.relation_matrix()


def free_approximation(X: Complex) -> tuple[Complex, ChainMap]:
    """A complex of free groups ``P`` and a quasi-isomorphism ``P -> X``.

    Each term is resolved by ``0 -> Z^t --diag(d)--> Z^g -> X^n -> 0`` and ``P``
    is the total complex, ``P^m = Z^{g_m} + Z^{t_{m+1}}`` with differential
    ``(a, b) -> (D a + R b, -H a - E b)`` where ``D`` lifts ``d^m``, ``D R = R E``
    and ``D D = R H``.
    """
    if X.is_free():
        return X, identity_map(X)
    lo, hi = X.lowest_degree - 1, X.highest_degree
    g = {n: X.term(n).ngens for n in range(lo, hi + 2)}
    t = {n: X.term(n).torsion_rank for n in range(lo, hi + 3)}
    R = {n: _relation_block(X.term(n)) for n in range(lo, hi + 3)}

    def lift(n: int) -> IntegerMatrix:
        return X.differential(n).matrix

    def divide_rows(M: IntegerMatrix, G: FpAbGroup) -> IntegerMatrix:
        rows = []
        for i, d in enumerate(G.invariant_factors):
            r = M.row(i)
            if any(v % d for v in r):
                raise ComplexError("lifted differential does not preserve relations")
            rows.append([v // d for v in r])
        for i in range(G.torsion_rank, G.ngens):
            if any(M.row(i)):
                raise ComplexError("lifted differential does not preserve relations")
        return IntegerMatrix.from_rows(rows, cols=M.cols)

    def E(n: int) -> IntegerMatrix:  # t_{n+1} x t_n
        return divide_rows(lift(n) @ R[n], X.term(n + 1))

    def H(n: int) -> IntegerMatrix:  # t_{n+2} x g_n
        return divide_rows(lift(n + 1) @ lift(n), X.term(n + 2))

    terms, diffs = [], []
    for m in range(lo, hi + 1):
        terms.append(FpAbGroup.free(g[m] + t[m + 1]))
    for m in range(lo, hi):
        top = lift(m).hstack(R[m + 1])
        bottom = (-H(m)).hstack(-E(m + 1))
        mat = top.vstack(bottom)
        diffs.append(GroupHom(terms[m - lo], terms[m + 1 - lo], mat))
    P = Complex(lo, tuple(terms), tuple(diffs))
    comps = {}
    for m in range(lo, hi + 1):
        proj = IntegerMatrix.identity(g[m]).hstack(IntegerMatrix.zeros(g[m], t[m + 1]))
        comps[m] = GroupHom(P.term(m), X.term(m), proj)
    witness = ChainMap(P, X, comps)
    if not witness.is_quasi_isomorphism():
        raise ComplexError("free approximation failed to be a quasi-isomorphism")
    return P, witness


# ---------------------------------------------------------------------------
# double and total complexes


@dataclass(frozen=True)
class DoubleComplex:
    """Grid ``D^{p,q}`` with commuting ``horizontal: (p,q)->(p+1,q)`` and ``vertical: (p,q)->(p,q+1)``."""

    terms: dict[tuple[int, int], FpAbGroup]
    horizontal: dict[tuple[int, int], GroupHom] = field(default_factory=dict)
    vertical: dict[tuple[int, int], GroupHom] = field(default_factory=dict)

    def __post_init__(self):
        for (p, q) in set(self.terms) | set(self.horizontal) | set(self.vertical):
            h, v = self.h(p, q), self.v(p, q)
            if not (self.h(p + 1, q) @ h).is_zero():
                raise ComplexError(f"horizontal d o d != 0 at {(p, q)}")
            if not (self.v(p, q + 1) @ v).is_zero():
                raise ComplexError(f"vertical d o d != 0 at {(p, q)}")
            if not ((self.v(p + 1, q) @ h) - (self.h(p, q + 1) @ v)).is_zero():
                raise ComplexError(f"square at {(p, q)} does not commute")

    def term(self, p: int, q: int) -> FpAbGroup:
        return self.terms.get((p, q), TRIVIAL)

    def h(self, p: int, q: int) -> GroupHom:
        m = self.horizontal.get((p, q))
        return m if m is not None else GroupHom.zero(self.term(p, q), self.term(p + 1, q))

    def v(self, p: int, q: int) -> GroupHom:
        m = self.vertical.get((p, q))
        return m if m is not None else GroupHom.zero(self.term(p, q), self.term(p, q + 1))

    def total_degrees(self) -> range:
        if not self.terms:
            return range(0, 1)
        sums = [p + q for p, q in self.terms]
        return range(min(sums), max(sums) + 1)

    def diagonal(self, n: int) -> list[tuple[int, int]]:
        return sorted((p, q) for (p, q) in self.terms if p + q == n)


@dataclass(frozen=True)
class TotalComplex:
    complex: Complex
    sums: dict[int, DirectSum]
    positions: dict[int, list[tuple[int, int]]]

    def inclusion(self, p: int, q: int) -> GroupHom:
        n = p + q
        return self.sums[n].inclusion(self.positions[n].index((p, q)))


def total_complex_data(D: DoubleComplex) -> TotalComplex:
    degrees = D.total_degrees()
    sums, positions = {}, {}
    for n in range(degrees.start, degrees.stop + 1):
        pos = D.diagonal(n)
        positions[n] = pos
        sums[n] = direct_sum([D.term(p, q) for p, q in pos])
    diffs = []
    for n in range(degrees.start, degrees.stop - 1):
        blocks = {}
        src, dst = positions[n], positions[n + 1]
        for j, (p, q) in enumerate(src):
            if (p + 1, q) in dst:
                blocks[(dst.index((p + 1, q)), j)] = D.h(p, q)
            if (p, q + 1) in dst:
                blocks[(dst.index((p, q + 1)), j)] = D.v(p, q).scale(-1 if p % 2 else 1)
        diffs.append(block_hom(sums[n], sums[n + 1], blocks))
    terms = tuple(sums[n].group for n in range(degrees.start, degrees.stop))
    X = Complex(degrees.start, terms, tuple(diffs))
    return TotalComplex(X, sums, positions)


def total_complex(D: DoubleComplex) -> Complex:
    """``Tot^n = sum_{p+q=n} D^{p,q}`` with ``d = d' + (-1)^p d''``."""
    return total_complex_data(D).complex


# ---------------------------------------------------------------------------
# derived tensor product


@dataclass(frozen=True)
class DerivedTensor:
    complex: Complex
    total: TotalComplex
    approximation: Complex
    witness: ChainMap
    right: Complex
    grid: dict[tuple[int, int], object]


def tensor_grid(P: Complex, Y: Complex) -> tuple[DoubleComplex, dict]:
    grid = {(p, q): tensor_product(P.term(p), Y.term(q)) for p in P.degrees for q in Y.degrees}
    terms = {k: v.group for k, v in grid.items()}
    horizontal, vertical = {}, {}
    for (p, q), T in grid.items():
        if (p + 1, q) in grid:
            horizontal[(p, q)] = tensor_hom(P.differential(p), GroupHom.identity(Y.term(q)), T, grid[(p + 1, q)])
        if (p, q + 1) in grid:
            vertical[(p, q)] = tensor_hom(GroupHom.identity(P.term(p)), Y.differential(q), T, grid[(p, q + 1)])
    return DoubleComplex(terms, horizontal, vertical), grid


def derived_tensor_data(X: Complex, Y: Complex) -> DerivedTensor:
    P, witness = free_approximation(X)
    D, grid = tensor_grid(P, Y)
    tot = total_complex_data(D)
    return DerivedTensor(tot.complex, tot, P, witness, Y, grid)


def derived_tensor(X: Complex, Y: Complex) -> Complex:
    """Total complex of ``free_approximation(X) (x) Y``."""
    return derived_tensor_data(X, Y).complex


def tor1(A: FpAbGroup, B: FpAbGroup) -> FpAbGroup:
    """``Tor_1(A, B)`` as ``H^{-1}(A (x)^L B)``."""
    return derived_tensor(Complex.single(A), Complex.single(B)).cohomology(-1)


# ---------------------------------------------------------------------------
# Kunneth


def _group_sum(groups: Iterable[FpAbGroup]) -> FpAbGroup:
    groups = list(groups)
    return direct_sum(groups).group if groups else TRIVIAL


@dataclass(frozen=True)
class KunnethReport:
    degree: int
    left: FpAbGroup
    middle: FpAbGroup
    right: FpAbGroup
    injection: GroupHom
    injective: bool
    cokernel_matches: bool
    splits: bool
    order_identity: bool | None  # None when some group is infinite

    @property
    def ok(self) -> bool:
        return self.injective and self.cokernel_matches and self.splits and self.order_identity is not False


def _lift_to_approximation(dt: DerivedTensor, n: int) -> IntegerMatrix:
    """Cocycles of ``P^n`` representing the generators of ``H^n(X)``."""
    P = dt.approximation
    hp = P.cohomology_data(n)
    inv = dt.witness.induced(n).inverse()
    cols = [hp.lift_element(inv.matrix.col(j)) for j in range(inv.source.ngens)]
    return IntegerMatrix.from_columns(cols, P.term(n).ngens)


def kunneth_verify(X: Complex, Y: Complex, s: int) -> KunnethReport:
    """Check ``0 -> sum H^a(X) (x) H^b(Y) -> H^s(X (x)^L Y) -> sum Tor_1(H^a X, H^b Y) -> 0``.

    The left sum runs over ``a + b = s`` and the right one over ``a + b = s + 1``.
    The injection is built by tensoring cocycle representatives.
    """
    dt = derived_tensor_data(X, Y)
    Z = dt.complex
    hz = Z.cohomology_data(s)
    middle = hz.group

    pairs = [(a, s - a) for a in X.degrees if (s - a) in Y.degrees]
    left_parts, maps = [], []
    for a, b in pairs:
        HX, HY = X.cohomology(a), Y.cohomology(b)
        T = tensor_product(HX, HY)
        xs = _lift_to_approximation(dt, a)
        ys = Y.cohomology_data(b).lift
        grid_T = dt.grid[(a, b)]
        incl = dt.total.inclusion(a, b)
        raw_cols = []
        for i in range(HX.ngens):
            for j in range(HY.ngens):
                e = grid_T.pure(xs.col(i), ys.col(j))
                raw_cols.append(hz.project(incl.matrix.apply(e)))
        raw = IntegerMatrix.from_columns(raw_cols, middle.ngens) if raw_cols else IntegerMatrix.zeros(middle.ngens, 0)
        left_parts.append(T.group)
        maps.append(GroupHom(T.group, middle, raw @ T.presentation.from_group))
    if left_parts:
        S = direct_sum(left_parts)
        left = S.group
        alpha = GroupHom.zero(left, middle)
        for i, m in enumerate(maps):
            alpha = alpha + (m @ S.projection(i))
    else:
        left = TRIVIAL
        alpha = GroupHom.zero(left, middle)

    right = _group_sum(
        tor1(X.cohomology(a), Y.cohomology(s + 1 - a))
        for a in X.degrees if (s + 1 - a) in Y.degrees
    )
    injective = alpha.is_injective()
    cokernel_matches = alpha.cokernel().group == right
    splits = _group_sum([left, right]) == middle
    if left.is_finite and right.is_finite and middle.is_finite:
        order_identity = middle.order == left.order * right.order
    else:
        order_identity = None
    return KunnethReport(s, left, middle, right, alpha, injective, cokernel_matches, splits, order_identity)


# ---------------------------------------------------------------------------
# long exact sequence


@dataclass(frozen=True)
class LongExactSequence:
    """Nodes ``H^n(A), H^n(B), H^n(C)`` for consecutive ``n`` and the maps between them."""

    degrees: tuple[int, ...]
    groups: tuple[FpAbGroup, ...]
    maps: tuple[GroupHom, ...]  # maps[i]: groups[i] -> groups[i+1]
    labels: tuple[str, ...]

    def connecting(self, n: int) -> GroupHom:
        i = self.degrees.index(n)
        return self.maps[3 * i + 2]


def _check_short_exact(f: ChainMap, g: ChainMap) -> None:
    A, B, C = f.source, f.target, g.target
    if g.source != B:
        raise ComplexError("chain maps are not composable")
    lo = min(A.lowest_degree, B.lowest_degree, C.lowest_degree)
    hi = max(A.highest_degree, B.highest_degree, C.highest_degree)
    for n in range(lo, hi + 1):
        fn, gn = f.at(n), g.at(n)
        if not fn.is_injective():
            raise ComplexError(f"A^{n} -> B^{n} is not injective")
        if not gn.is_surjective():
            raise ComplexError(f"B^{n} -> C^{n} is not surjective")
        if not is_exact_at(fn, gn):
            raise ComplexError(f"sequence is not exact at B^{n}")


def _preimage(h: GroupHom, y: Sequence[int]) -> tuple[int, ...]:
    """Some integer ``x`` with ``h(x) = y``."""
    big = h.matrix.hstack(h.target.relation_matrix())
    x = smith_normal_form(big).solve(list(y))
    if x is None:
        raise ComplexError("element has no preimage")
    return x[: h.source.ngens]


def connecting_map(f: ChainMap, g: ChainMap, n: int) -> GroupHom:
    """Snake-lemma ``delta: H^n(C) -> H^{n+1}(A)``."""
    A, B, C = f.source, f.target, g.target
    hc = C.cohomology_data(n)
    ha = A.cohomology_data(n + 1)
    cols = []
    for j in range(hc.group.ngens):
        z = hc.lift.col(j)
        b = _preimage(g.at(n), z)
        db = B.differential(n).matrix.apply(b)
        a = _preimage(f.at(n + 1), db)
        cols.append(ha.project(a))
    return hom_from_images(hc.group, ha.group, cols)


def long_exact_sequence(f: ChainMap, g: ChainMap) -> LongExactSequence:
    """``... -> H^n(A) -> H^n(B) -> H^n(C) -> H^{n+1}(A) -> ...`` with exactness checked."""
    _check_short_exact(f, g)
    A, B, C = f.source, f.target, g.target
    lo = min(A.lowest_degree, B.lowest_degree, C.lowest_degree)
    hi = max(A.highest_degree, B.highest_degree, C.highest_degree)
    degrees = tuple(range(lo, hi + 1))
    groups, maps, labels = [], [], []
    for n in degrees:
        groups += [A.cohomology(n), B.cohomology(n), C.cohomology(n)]
        labels += [f"H^{n}(A)", f"H^{n}(B)", f"H^{n}(C)"]
        maps += [f.induced(n), g.induced(n), connecting_map(f, g, n)]
    groups.append(A.cohomology(hi + 1))
    labels.append(f"H^{hi + 1}(A)")
    for i in range(len(maps) - 1):
        if not is_exact_at(maps[i], maps[i + 1]):
            raise ComplexError(f"long sequence fails to be exact at {labels[i + 1]}")
    if not maps[0].is_injective():
        raise ComplexError(f"long sequence fails to be exact at {labels[0]}")
    return LongExactSequence(degrees, tuple(groups), tuple(maps), tuple(labels))

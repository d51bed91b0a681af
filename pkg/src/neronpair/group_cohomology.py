"""Cohomology of a finite cyclic group acting on a finite abelian group.

A profinite group acting through a finite cyclic quotient is modelled by a
single automorphism ``sigma``; the acting group is ``G = Z/m`` with ``m`` the
period (by default the order of ``sigma``) and ``j in G`` acting as ``sigma^j``.

Bar cochains of degree ``r`` are exhaustive tables over ``G^r`` and the
coboundary is

    (df)(g_1..g_{r+1}) = g_1 f(g_2..g_{r+1})
                         + sum_i (-1)^i f(.., g_i g_{i+1}, ..)
                         + (-1)^{r+1} f(g_1..g_r).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Callable, Sequence

import numpy as np

from .complexes import Complex
from .fgab import (
    BilinearPairing,
    Element,
    FpAbGroup,
    GroupError,
    GroupHom,
    QModZ,
    Subquotient,
    finite_groups,
    hom_from_images,
    is_perfect,
    prime_factors,
    primary_component,
)
from .linalg import IntegerMatrix, solve_integer
from .modular import kernel_mod, subquotient_factors

MAX_ORDER = 10_000


@dataclass(frozen=True)
class MonogenicModule:
    """Finite abelian group with an automorphism of finite order."""

    module: FpAbGroup
    sigma: GroupHom
    period: int | None = None  # size of the acting cyclic group; defaults to ``order``
    order: int = field(init=False)

    def __post_init__(self):
        if not self.module.is_finite:
            raise GroupError("module must be finite")
        if self.sigma.source != self.module or self.sigma.target != self.module:
            raise GroupError("sigma must be an endomorphism of the module")
        if not self.sigma.is_isomorphism():
            raise GroupError("sigma is not an automorphism")
        ident = GroupHom.identity(self.module)
        power, m = self.sigma, 1
        while power != ident:
            power = self.sigma @ power
            m += 1
            if m > MAX_ORDER:
                raise GroupError("sigma has no small finite order")
        object.__setattr__(self, "order", m)
        if self.period is None:
            object.__setattr__(self, "period", m)
        elif self.period < 1 or self.period % m:
            raise GroupError(f"sigma of order {m} does not factor through Z/{self.period}")

    @classmethod
    def trivial_action(cls, module: FpAbGroup, period: int = 1) -> "MonogenicModule":
        return cls(module, GroupHom.identity(module), period)

    @classmethod
    def from_matrix(cls, module: FpAbGroup, rows: Sequence[Sequence[int]], period: int | None = None) -> "MonogenicModule":
        return cls(module, GroupHom(module, module, IntegerMatrix.from_rows(rows, cols=module.ngens)), period)

    @classmethod
    def scalar(cls, n: int, a: int) -> "MonogenicModule":
        """``Z/n`` with ``sigma`` = multiplication by ``a``."""
        G = FpAbGroup.cyclic(n)
        return cls(G, GroupHom(G, G, IntegerMatrix.identity(G.ngens).scale(a)))

    @property
    def group_order(self) -> int:
        return self.period

    def act(self, j: int, x: Sequence[int]) -> Element:
        """``sigma^j x`` for ``j in Z/period``."""
        return self.power(j % self.group_order)(x)

    def power(self, j: int) -> GroupHom:
        return self._powers[j % self.group_order]

    @property
    def _powers(self) -> list[GroupHom]:
        cached = self.__dict__.get("_power_cache")
        if cached is None:
            cached = [GroupHom.identity(self.module)]
            for _ in range(self.group_order - 1):
                cached.append(self.sigma @ cached[-1])
            object.__setattr__(self, "_power_cache", cached)
        return cached

    def norm(self) -> GroupHom:
        total = GroupHom.zero(self.module, self.module)
        for h in self._powers:
            total = total + h
        return total

    def sigma_minus_one(self) -> GroupHom:
        return self.sigma - GroupHom.identity(self.module)


def dual_module(M: MonogenicModule) -> MonogenicModule:
    """``M* = hom(M, Q/Z)`` with ``(sigma . phi) = phi o sigma``.

    In dual-basis coordinates the action is ``T = D S^T D^{-1}`` with ``D``
    the diagonal of invariant factors.
    """
    d = M.module.invariant_factors
    S = M.sigma.matrix
    rows = [[d[i] * S[k, i] // d[k] for k in range(len(d))] for i in range(len(d))]
    return MonogenicModule.from_matrix(M.module, rows, M.period)


def contragredient_module(M: MonogenicModule) -> MonogenicModule:
    """``M*`` with ``(sigma . phi) = phi o sigma^{-1}``, making evaluation invariant."""
    inv = M.power(M.order - 1)
    d = M.module.invariant_factors
    S = inv.matrix
    rows = [[d[i] * S[k, i] // d[k] for k in range(len(d))] for i in range(len(d))]
    return MonogenicModule.from_matrix(M.module, rows, M.period)


# ---------------------------------------------------------------------------
# H^0 and H^1 of the procyclic group


def invariants(M: MonogenicModule) -> tuple[FpAbGroup, GroupHom]:
    """``ker(sigma - 1)`` and its inclusion into ``M``."""
    sq = M.sigma_minus_one().kernel()
    cols = [sq.lift.col(j) for j in range(sq.group.ngens)]
    return sq.group, hom_from_images(sq.group, M.module, cols)


def coinvariants(M: MonogenicModule) -> tuple[FpAbGroup, GroupHom]:
    """``coker(sigma - 1)`` and the projection from ``M``."""
    sq = M.sigma_minus_one().cokernel()
    cols = [sq.project(M.module.generator(j)) for j in range(M.module.ngens)]
    return sq.group, hom_from_images(M.module, sq.group, cols)


def h0(M: MonogenicModule) -> FpAbGroup:
    return invariants(M)[0]


def h1(M: MonogenicModule) -> FpAbGroup:
    return coinvariants(M)[0]


def periodic_cohomology(M: MonogenicModule, r: int) -> FpAbGroup:
    """Cohomology of the finite cyclic group via its 2-periodic resolution."""
    s, N = M.sigma_minus_one(), M.norm()
    if r == 0:
        return s.kernel().group
    if r < 0:
        return FpAbGroup()
    if r % 2 == 1:
        return Subquotient.build(N.kernel_lattice, s.image_lattice()).group
    return Subquotient.build(s.kernel_lattice, N.image_lattice()).group


# ---------------------------------------------------------------------------
# bar cochains


def tuples(m: int, r: int) -> list[tuple[int, ...]]:
    return list(itertools.product(range(m), repeat=r))


@dataclass(frozen=True)
class BarCochain:
    """A function ``G^r -> M`` stored on every tuple."""

    module: MonogenicModule
    degree: int
    values: dict[tuple[int, ...], Element]

    def __post_init__(self):
        keys = tuples(self.module.group_order, self.degree)
        if set(self.values) != set(keys):
            raise GroupError(f"a degree {self.degree} bar cochain needs a value on each of {len(keys)} tuples")
        red = {k: self.module.module.reduce(self.values[k]) for k in keys}
        object.__setattr__(self, "values", red)

    def __call__(self, *g: int) -> Element:
        return self.values[tuple(x % self.module.group_order for x in g)]

    @classmethod
    def zero(cls, M: MonogenicModule, r: int) -> "BarCochain":
        return cls(M, r, {k: M.module.zero() for k in tuples(M.group_order, r)})

    @classmethod
    def from_function(cls, M: MonogenicModule, r: int, f: Callable[..., Sequence[int]]) -> "BarCochain":
        return cls(M, r, {k: tuple(f(*k)) for k in tuples(M.group_order, r)})

    def __add__(self, other: "BarCochain") -> "BarCochain":
        self._check(other)
        return BarCochain(self.module, self.degree, {k: self.module.module.add(v, other.values[k]) for k, v in self.values.items()})

    def __sub__(self, other: "BarCochain") -> "BarCochain":
        self._check(other)
        G = self.module.module
        return BarCochain(self.module, self.degree, {k: G.add(v, G.neg(other.values[k])) for k, v in self.values.items()})

    def scale(self, a: int) -> "BarCochain":
        return BarCochain(self.module, self.degree, {k: self.module.module.mul(a, v) for k, v in self.values.items()})

    def is_zero(self) -> bool:
        return not any(any(v) for v in self.values.values())

    def _check(self, other: "BarCochain"):
        if other.module != self.module or other.degree != self.degree:
            raise GroupError("cochains live in different groups")


def bar_differential(f: BarCochain) -> BarCochain:
    M, r, m = f.module, f.degree, f.module.group_order
    G = M.module
    out = {}
    for g in tuples(m, r + 1):
        acc = list(M.act(g[0], f.values[g[1:]]))
        for i in range(1, r + 1):
            merged = g[: i - 1] + ((g[i - 1] + g[i]) % m,) + g[i + 1:]
            sign = -1 if i % 2 else 1
            acc = [a + sign * b for a, b in zip(acc, f.values[merged])]
        sign = -1 if (r + 1) % 2 else 1
        acc = [a + sign * b for a, b in zip(acc, f.values[g[:r]])]
        out[g] = G.reduce(acc)
    return BarCochain(M, r + 1, out)


def _bar_matrix(S: np.ndarray, m: int, r: int, q: int) -> np.ndarray:
    """Bar coboundary ``C^r -> C^{r+1}`` on ``F = (Z/q)^g`` for an integer lift ``S`` of sigma."""
    g = S.shape[0]
    powers = [np.eye(g, dtype=np.int64)]
    for _ in range(m - 1):
        powers.append((S @ powers[-1]) % q)
    src = {t: i for i, t in enumerate(tuples(m, r))}
    tgt = tuples(m, r + 1)
    D = np.zeros((len(tgt) * g, len(src) * g), dtype=np.int64)
    eye = np.eye(g, dtype=np.int64)
    for row, t in enumerate(tgt):
        rs = slice(row * g, (row + 1) * g)

        def add(block, key, sign):
            c = src[key]
            D[rs, c * g:(c + 1) * g] += sign * block

        add(powers[t[0]], t[1:], 1)
        for i in range(1, r + 1):
            add(eye, t[: i - 1] + ((t[i - 1] + t[i]) % m,) + t[i + 1:], -1 if i % 2 else 1)
        add(eye, t[:r], -1 if (r + 1) % 2 else 1)
    return D % q


def _primary_restriction(M: MonogenicModule, p: int) -> tuple[list[int], np.ndarray, int]:
    """Exponents ``a_i`` and sigma's matrix on the p-primary component."""
    Mp, incl = primary_component(M.module, p)
    a = []
    for d in Mp.invariant_factors:
        e = 0
        while d > 1:
            d //= p
            e += 1
        a.append(e)
    k = max(a)
    S = np.zeros((Mp.ngens, Mp.ngens), dtype=np.int64)
    scale = [incl.matrix.col(j) for j in range(Mp.ngens)]
    for j in range(Mp.ngens):
        img = M.sigma(incl.matrix.col(j))
        for i in range(Mp.ngens):
            src_idx = next(t for t, v in enumerate(scale[i]) if v)
            S[i, j] = (img[src_idx] // scale[i][src_idx]) % Mp.invariant_factors[i]
    return a, S, k


def bar_cohomology(M: MonogenicModule, r: int) -> FpAbGroup:
    """``H^r`` of the bar complex of ``G = <sigma>`` with coefficients in ``M``.

    Each primary component is handled over ``Z/p^k``: cochains of the
    component are cochains in ``F = (Z/p^k)^g`` modulo cochains in the
    relation subgroup ``R``.
    """
    if r < 0:
        return FpAbGroup()
    if M.module.is_trivial:
        return FpAbGroup()
    factors: list[int] = []
    m = M.group_order
    for p in prime_factors(M.module.order):
        a, S, k = _primary_restriction(M, p)
        q = p ** k
        g = len(a)
        weight = np.array([p ** (k - x) for x in a], dtype=np.int64)

        def relation_cochains(n: int) -> np.ndarray:
            cols = len(tuples(m, n)) * g
            diag = np.tile(np.array([p ** x for x in a], dtype=np.int64), cols // g)
            return np.diag(diag % q)

        D = _bar_matrix(S, m, r, q)
        W = np.tile(weight, D.shape[0] // g)[:, None]
        K = kernel_mod((W * D) % q, p, k)
        L = relation_cochains(r)
        if r > 0:
            L = np.concatenate([L, _bar_matrix(S, m, r - 1, q)], axis=1)
        factors += subquotient_factors(K, L, p, k)
    return FpAbGroup.from_orders(factors)


def bar_complex(M: MonogenicModule, top: int = 3) -> Complex:
    """The bar cochain complex ``C^0 -> ... -> C^top`` built from exact group data.

    Slow; meant for cross-checking :func:`bar_cohomology` on tiny inputs.
    """
    m, G = M.group_order, M.module
    terms, diffs = [], []
    for r in range(top + 1):
        terms.append(FpAbGroup.from_orders(list(G.orders) * (m ** r)))
    for r in range(top):
        src, tgt = tuples(m, r), tuples(m, r + 1)
        cols = []
        for idx in range(len(src) * G.ngens):
            c, j = divmod(idx, G.ngens)
            f = BarCochain(M, r, {t: (G.generator(j) if t == src[c] else G.zero()) for t in src})
            df = bar_differential(f)
            cols.append([v for t in tgt for v in df.values[t]])
        diffs.append(GroupHom(terms[r], terms[r + 1], IntegerMatrix.from_columns(cols, len(tgt) * G.ngens)))
    return Complex(0, tuple(terms), tuple(diffs))


def is_bar_coboundary(f: BarCochain) -> bool:
    """Whether ``f = dh`` for some cochain ``h`` of degree ``f.degree - 1``."""
    if f.degree == 0:
        return f.is_zero()
    M, m, G = f.module, f.module.group_order, f.module.module
    src, tgt = tuples(m, f.degree - 1), tuples(m, f.degree)
    cols = []
    for idx in range(len(src) * G.ngens):
        c, j = divmod(idx, G.ngens)
        h = BarCochain(M, f.degree - 1, {t: (G.generator(j) if t == src[c] else G.zero()) for t in src})
        dh = bar_differential(h)
        cols.append([v for t in tgt for v in dh.values[t]])
    rel = IntegerMatrix.diagonal(list(G.orders) * len(tgt))
    A = IntegerMatrix.from_columns(cols, len(tgt) * G.ngens).hstack(rel)
    return solve_integer(A, [v for t in tgt for v in f.values[t]]) is not None


# ---------------------------------------------------------------------------
# cup product


def cup_value_group(P: BilinearPairing) -> FpAbGroup:
    """``Z/e`` receiving pairing values, ``e`` the lcm of their denominators."""
    e = 1
    for row in P.values:
        for v in row:
            e = lcm(e, v.denominator)
    return FpAbGroup.cyclic(e)


def aw_cup_bar(
    u: BarCochain,
    v: BarCochain,
    pairing: BilinearPairing,
    total_degree_sign: bool = False,
) -> BarCochain:
    """Alexander-Whitney cup product pushed through ``pairing: M x N -> Q/Z``.

    ``(u cup v)(g_1..g_{r+s}) = <u(g_1..g_r), (g_1...g_r) v(g_{r+1}..g_{r+s})>``.
    Values land in the trivial module ``Z/e`` (see :func:`cup_value_group`),
    with ``k/e`` encoded as ``k``.  With ``total_degree_sign`` the result is
    multiplied by ``(-1)^{r+s}``; that variant satisfies the Leibniz rule
    only up to an overall sign.
    """
    if u.module.group_order != v.module.group_order:
        raise GroupError("cochains are over different groups")
    if pairing.left != u.module.module or pairing.right != v.module.module:
        raise GroupError("pairing does not match the coefficient modules")
    r, s, m = u.degree, v.degree, u.module.group_order
    E = cup_value_group(pairing)
    e = E.invariant_factors[0] if E.invariant_factors else 1
    target = MonogenicModule.trivial_action(E, m)
    sign = -1 if (total_degree_sign and (r + s) % 2) else 1
    out = {}
    for g in tuples(m, r + s):
        a = u.values[g[:r]]
        b = v.module.act(sum(g[:r]), v.values[g[r:]])
        val = pairing(a, b).as_fraction() * e * sign
        out[g] = E.reduce((int(val),)) if E.ngens else ()
    return BarCochain(target, r + s, out)


# ---------------------------------------------------------------------------
# tame duality


@dataclass(frozen=True)
class TameDuality:
    pairing: BilinearPairing
    perfect: bool
    invariants: FpAbGroup
    dual_coinvariants: FpAbGroup


def tame_duality_pairing(M: MonogenicModule) -> tuple[BilinearPairing, bool]:
    """``H^0(M) x H^1(M*) -> Q/Z``, ``<a, [phi]> = phi(a)``, and its perfectness."""
    t = tame_duality(M)
    return t.pairing, t.perfect


def tame_duality(M: MonogenicModule) -> TameDuality:
    Ds = dual_module(M)
    H0, incl = invariants(M)
    H1, _ = coinvariants(Ds)
    sq = Ds.sigma_minus_one().cokernel()
    d = M.module.invariant_factors
    vals = []
    for i in range(H0.ngens):
        a = incl.matrix.col(i)
        row = []
        for j in range(H1.ngens):
            phi = sq.lift.col(j)
            row.append(QModZ.of(sum(Fraction(x * c, dk) for x, c, dk in zip(a, phi, d))))
        vals.append(tuple(row))
    P = BilinearPairing(H0, H1, tuple(vals))
    return TameDuality(P, is_perfect(P), H0, H1)


# ---------------------------------------------------------------------------
# exhaustive module corpus


def automorphism_matrices(G: FpAbGroup) -> np.ndarray:
    """All automorphisms of finite ``G`` as an array of shape ``(N, g, g)``."""
    d = list(G.invariant_factors)
    g = len(d)
    if g == 0:
        return np.zeros((1, 0, 0), dtype=np.int64)
    # column j may be any element killed by d_j
    choices = []
    for dj in d:
        col = [x for x in G.elements() if all((dj * xi) % di == 0 for xi, di in zip(x, d))]
        choices.append(np.array(col, dtype=np.int64))
    idx = np.stack(np.meshgrid(*[np.arange(len(c)) for c in choices], indexing="ij"), -1).reshape(-1, g)
    mats = np.stack([choices[j][idx[:, j]] for j in range(g)], axis=2)  # (N, g rows, g cols)
    # injective iff no element of prime order maps to zero
    dvec = np.array(d, dtype=np.int64)
    socle = [x for x in G.elements() if any(x) and any(
        all((p * xi) % di == 0 for xi, di in zip(x, d)) for p in prime_factors(G.order))]
    S = np.array(socle, dtype=np.int64).T  # (g, s)
    images = np.einsum("nij,js->nis", mats, S) % dvec[None, :, None]
    ok = images.any(axis=1).all(axis=1)
    return mats[ok]


def _order_of(mats: np.ndarray, d: np.ndarray, cap: int) -> np.ndarray:
    n, g, _ = mats.shape
    eye = np.eye(g, dtype=np.int64)
    order = np.zeros(n, dtype=np.int64)
    power = mats.copy()
    for k in range(1, cap + 1):
        hit = (order == 0) & ((power % d[None, :, None]) == eye[None]).all(axis=(1, 2))
        order[hit] = k
        power = np.einsum("nij,njk->nik", mats, power) % d[None, :, None]
    return order


def conjugacy_representatives(G: FpAbGroup, max_order: int | None = None) -> list[np.ndarray]:
    """One automorphism from each conjugacy class of ``Aut(G)`` (optionally of order ``<= max_order``)."""
    mats = automorphism_matrices(G)
    if G.ngens == 0:
        return [mats[0]]
    d = np.array(G.invariant_factors, dtype=np.int64)
    keys = {m.tobytes(): i for i, m in enumerate(mats)}
    n = len(mats)
    # conjugating by every element is quadratic; the whole group acts the same as a generating set
    rng = np.random.default_rng(0)
    gens: list[int] = []
    reached = {keys[np.eye(len(d), dtype=np.int64).tobytes()]}
    while len(reached) < n:
        cand = int(rng.integers(n))
        gens.append(cand)
        frontier = list(reached)
        while frontier:
            batch = mats[frontier]
            new = []
            for h in gens:
                prod_ = np.einsum("ij,njk->nik", mats[h], batch) % d[None, :, None]
                for m in prod_:
                    k = keys[m.tobytes()]
                    if k not in reached:
                        reached.add(k)
                        new.append(k)
            frontier = new
    inverses = []
    for h in gens:
        prods = np.einsum("ij,njk->nik", mats[h], mats) % d[None, :, None]
        j = int(np.argmax((prods == np.eye(len(d), dtype=np.int64)[None]).all(axis=(1, 2))))
        inverses.append(j)
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for h, hi in zip(gens, inverses):
        conj = np.einsum("ij,njk,kl->nil", mats[h], mats, mats[hi]) % d[None, :, None]
        for i, m in enumerate(conj):
            a, b = find(i), find(keys[m.tobytes()])
            if a != b:
                parent[max(a, b)] = min(a, b)
    roots = sorted({find(i) for i in range(n)})
    reps = [mats[r] for r in roots]
    if max_order is not None:
        orders = _order_of(np.array(reps), d, max_order)
        reps = [r for r, o in zip(reps, orders) if o]
    return reps


def module_corpus(max_module_order: int = 16, max_group_order: int = 6) -> list[MonogenicModule]:
    """Every module of order ``<= max_module_order`` with an automorphism of order
    ``<= max_group_order``, one per isomorphism class of pairs (conjugacy in ``Aut``)."""
    out = []
    for G in finite_groups(max_module_order):
        for S in conjugacy_representatives(G, max_group_order):
            out.append(MonogenicModule.from_matrix(G, S.tolist()))
    return out

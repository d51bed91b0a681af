"""Čech cochains of presheaves on the nerve of a finite covering.

A presheaf assigns a group to every nonempty subset ``S`` of the index set
(the value on the intersection ``U_S``) and a restriction ``F(S) -> F(T)`` to
each inclusion ``S ⊆ T``.  Only restrictions that add one index are stored;
longer ones are composites, and functoriality means all such composites agree.

Cochains are on the full ordered-tuple complex: a degree ``r`` cochain has a
component in ``F(support(t))`` for every ``t in I^{r+1}``, repetitions allowed.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Iterable, Mapping, Sequence

from .complexes import Complex
from .fgab import (
    TRIVIAL,
    DirectSum,
    Element,
    FpAbGroup,
    GroupError,
    GroupHom,
    Subquotient,
    TensorProduct,
    block_hom,
    direct_sum,
    tensor_hom,
    tensor_product,
)
from .linalg import IntegerMatrix

Subset = frozenset


class PresheafError(ValueError):
    pass


def nonempty_subsets(index: Sequence[int]) -> list[frozenset]:
    out = []
    for k in range(1, len(index) + 1):
        out += [frozenset(c) for c in itertools.combinations(index, k)]
    return out


def _key(S: Iterable[int]) -> tuple[int, ...]:
    return tuple(sorted(S))


@dataclass(frozen=True)
class CoveringPresheaf:
    """Groups on the nonempty subsets of ``index_set`` with one-step restrictions.

    ``restrictions[(S, T)]`` is required for every ``S ⊂ T`` with ``|T| = |S| + 1``
    unless both groups are trivial.  Use :meth:`with_defaults` to fill missing
    maps with identities (equal groups) or zero maps.
    """

    index_set: tuple[int, ...]
    values: Mapping[frozenset, FpAbGroup]
    restrictions: Mapping[tuple[frozenset, frozenset], GroupHom] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "index_set", tuple(sorted(self.index_set)))
        if len(set(self.index_set)) != len(self.index_set):
            raise PresheafError("repeated index")
        vals = {frozenset(S): G for S, G in self.values.items()}
        for S in vals:
            if not S or not S <= set(self.index_set):
                raise PresheafError(f"subset {_key(S)} is not a nonempty subset of the index set")
        object.__setattr__(self, "values", vals)
        res = {(frozenset(S), frozenset(T)): h for (S, T), h in self.restrictions.items()}
        object.__setattr__(self, "restrictions", res)
        for (S, T), h in res.items():
            if not (S < T and len(T) == len(S) + 1):
                raise PresheafError(f"restriction {_key(S)} -> {_key(T)} must add exactly one index")
            if h.source != self.value(S) or h.target != self.value(T):
                raise PresheafError(f"restriction {_key(S)} -> {_key(T)} has the wrong endpoints")
        for S in nonempty_subsets(self.index_set):
            for a in self.index_set:
                if a in S:
                    continue
                T = S | {a}
                if (S, T) not in res and not (self.value(S).is_trivial or self.value(T).is_trivial):
                    raise PresheafError(f"missing restriction {_key(S)} -> {_key(T)}")
        self._check_functorial()

    @classmethod
    def with_defaults(cls, index_set, values, restrictions=None) -> "CoveringPresheaf":
        """Fill missing one-step restrictions: identity between equal groups, zero otherwise."""
        index_set = tuple(sorted(index_set))
        vals = {frozenset(S): G for S, G in values.items()}
        res = {(frozenset(S), frozenset(T)): h for (S, T), h in (restrictions or {}).items()}
        for S in nonempty_subsets(index_set):
            for a in index_set:
                if a in S:
                    continue
                T = S | {a}
                if (S, T) in res:
                    continue
                GS, GT = vals.get(S, TRIVIAL), vals.get(T, TRIVIAL)
                res[(S, T)] = GroupHom.identity(GS) if GS == GT else GroupHom.zero(GS, GT)
        return cls(index_set, vals, res)

    @classmethod
    def constant(cls, index_set, group: FpAbGroup) -> "CoveringPresheaf":
        index_set = tuple(sorted(index_set))
        return cls.with_defaults(index_set, {S: group for S in nonempty_subsets(index_set)})

    def value(self, S: Iterable[int]) -> FpAbGroup:
        return self.values.get(frozenset(S), TRIVIAL)

    def step(self, S: frozenset, T: frozenset) -> GroupHom:
        h = self.restrictions.get((S, T))
        return h if h is not None else GroupHom.zero(self.value(S), self.value(T))

    def restriction(self, S: Iterable[int], T: Iterable[int]) -> GroupHom:
        """``F(S) -> F(T)`` for ``S ⊆ T``, composed along increasing indices."""
        S, T = frozenset(S), frozenset(T)
        if not S <= T:
            raise PresheafError(f"{_key(S)} is not contained in {_key(T)}")
        cache = self.__dict__.setdefault("_res_cache", {})
        if (S, T) in cache:
            return cache[(S, T)]
        h = GroupHom.identity(self.value(S))
        cur = S
        for a in sorted(T - S):
            nxt = cur | {a}
            h = self.step(cur, nxt) @ h
            cur = nxt
        cache[(S, T)] = h
        return h

    def _check_functorial(self):
        for S in nonempty_subsets(self.index_set):
            rest = [a for a in self.index_set if a not in S]
            for a, b in itertools.combinations(rest, 2):
                via_a = self.step(S | {a}, S | {a, b}) @ self.step(S, S | {a})
                via_b = self.step(S | {b}, S | {a, b}) @ self.step(S, S | {b})
                if via_a != via_b:
                    raise PresheafError(
                        f"restrictions from {_key(S)} to {_key(S | {a, b})} depend on the path"
                    )

    def tensor(self, other: "CoveringPresheaf") -> "TensorPresheaf":
        cache = self.__dict__.setdefault("_tensor_cache", {})
        hit = cache.get(id(other))
        if hit is None or hit[0] is not other:
            hit = (other, tensor_presheaf(self, other))
            cache[id(other)] = hit
        return hit[1]


@dataclass(frozen=True)
class TensorPresheaf:
    presheaf: CoveringPresheaf
    factors: dict[frozenset, TensorProduct]

    def pure(self, S: frozenset, x: Sequence[int], y: Sequence[int]) -> Element:
        return self.factors[S].pure(x, y)


def tensor_presheaf(F: CoveringPresheaf, G: CoveringPresheaf) -> TensorPresheaf:
    """``S -> F(S) (x) G(S)``."""
    if F.index_set != G.index_set:
        raise PresheafError("presheaves live on different coverings")
    subsets = nonempty_subsets(F.index_set)
    factors = {S: tensor_product(F.value(S), G.value(S)) for S in subsets}
    res = {}
    for S in subsets:
        for a in F.index_set:
            if a not in S:
                T = S | {a}
                res[(S, T)] = tensor_hom(F.step(S, T), G.step(S, T), factors[S], factors[T])
    vals = {S: t.group for S, t in factors.items()}
    return TensorPresheaf(CoveringPresheaf(F.index_set, vals, res), factors)


# ---------------------------------------------------------------------------
# cochains


def ordered_tuples(index: Sequence[int], r: int) -> list[tuple[int, ...]]:
    return list(itertools.product(index, repeat=r + 1))


@dataclass(frozen=True)
class CechCochain:
    presheaf: CoveringPresheaf
    degree: int
    components: dict[tuple[int, ...], Element]

    def __post_init__(self):
        keys = ordered_tuples(self.presheaf.index_set, self.degree)
        if set(self.components) != set(keys):
            raise PresheafError(f"a degree {self.degree} cochain needs all {len(keys)} ordered tuples")
        red = {t: self.presheaf.value(t).reduce(self.components[t]) for t in keys}
        object.__setattr__(self, "components", red)

    def __getitem__(self, t: tuple[int, ...]) -> Element:
        return self.components[tuple(t)]

    @classmethod
    def zero(cls, F: CoveringPresheaf, r: int) -> "CechCochain":
        return cls(F, r, {t: F.value(t).zero() for t in ordered_tuples(F.index_set, r)})

    @classmethod
    def from_function(cls, F: CoveringPresheaf, r: int, f: Callable[[tuple[int, ...]], Sequence[int]]) -> "CechCochain":
        return cls(F, r, {t: tuple(f(t)) for t in ordered_tuples(F.index_set, r)})

    def _combine(self, other: "CechCochain", sign: int) -> "CechCochain":
        if other.presheaf is not self.presheaf and other.presheaf != self.presheaf:
            raise PresheafError("cochains of different presheaves")
        if other.degree != self.degree:
            raise PresheafError("cochains of different degrees")
        return CechCochain(self.presheaf, self.degree, {
            t: tuple(a + sign * b for a, b in zip(v, other.components[t]))
            for t, v in self.components.items()
        })

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def scale(self, k: int) -> "CechCochain":
        return CechCochain(self.presheaf, self.degree, {t: tuple(k * a for a in v) for t, v in self.components.items()})

    def is_zero(self) -> bool:
        return not any(any(v) for v in self.components.values())


def cech_differential(a: CechCochain) -> CechCochain:
    """``(da)_{i_0..i_{r+1}} = sum_k (-1)^k a_{i_0..î_k..i_{r+1}}`` restricted to the full support."""
    F, r = a.presheaf, a.degree
    out = {}
    for t in ordered_tuples(F.index_set, r + 1):
        target = F.value(t)
        acc = [0] * target.ngens
        for k in range(r + 2):
            face = t[:k] + t[k + 1:]
            img = F.restriction(face, t)(a.components[face])
            sign = -1 if k % 2 else 1
            acc = [x + sign * y for x, y in zip(acc, img)]
        out[t] = target.reduce(acc)
    return CechCochain(F, r + 1, out)


def aw_cup_cech(a: CechCochain, b: CechCochain, target: TensorPresheaf | None = None) -> CechCochain:
    """``(a cup b)_{i_0..i_{r+s}} = a_{i_0..i_r} (x) b_{i_r..i_{r+s}}`` with both factors
    restricted to ``{i_0, .., i_{r+s}}`` first.  No sign."""
    F, G = a.presheaf, b.presheaf
    T = target if target is not None else F.tensor(G)
    r, s = a.degree, b.degree
    out = {}
    for t in ordered_tuples(F.index_set, r + s):
        S = frozenset(t)
        x = F.restriction(t[: r + 1], S)(a.components[t[: r + 1]])
        y = G.restriction(t[r:], S)(b.components[t[r:]])
        out[t] = T.pure(S, x, y)
    return CechCochain(T.presheaf, r + s, out)


# ---------------------------------------------------------------------------
# the complex


@dataclass(frozen=True)
class CechComplex:
    presheaf: CoveringPresheaf
    max_degree: int
    complex: Complex
    sums: tuple[DirectSum, ...]

    def vector(self, a: CechCochain) -> Element:
        """Coordinates of ``a`` in the normal form of ``C^r``."""
        raw = [v for t in ordered_tuples(self.presheaf.index_set, a.degree) for v in a.components[t]]
        return self.sums[a.degree].presentation.to_element(raw)

    def cochain(self, r: int, x: Sequence[int]) -> CechCochain:
        raw = self.sums[r].presentation.from_group.apply(x)
        comps, pos = {}, 0
        for t in ordered_tuples(self.presheaf.index_set, r):
            n = self.presheaf.value(t).ngens
            comps[t] = tuple(raw[pos:pos + n])
            pos += n
        return CechCochain(self.presheaf, r, comps)

    def cohomology(self, r: int) -> FpAbGroup:
        if r > self.max_degree:
            raise PresheafError(f"degree {r} exceeds the truncation {self.max_degree}")
        return self.complex.cohomology(r)

    def class_of(self, a: CechCochain) -> Element:
        """Cohomology class of a cocycle."""
        data = self.complex.cohomology_data(a.degree)
        return data.project(self.vector(a))

    def cocycle(self, r: int, cls: Sequence[int]) -> CechCochain:
        """A cocycle representing the class ``cls``."""
        data = self.complex.cohomology_data(r)
        return self.cochain(r, data.lift_element(cls))


def cech_complex_data(F: CoveringPresheaf, max_degree: int) -> CechComplex:
    """``C^0 .. C^{max_degree + 1}``; the extra term makes ``H^{max_degree}`` correct."""
    if max_degree < 0:
        raise PresheafError("max_degree must be nonnegative")
    top = max_degree + 1
    sums = []
    for r in range(top + 1):
        sums.append(direct_sum([F.value(t) for t in ordered_tuples(F.index_set, r)]))
    diffs = []
    for r in range(top):
        src = {t: i for i, t in enumerate(ordered_tuples(F.index_set, r))}
        blocks = {}
        for j, t in enumerate(ordered_tuples(F.index_set, r + 1)):
            for k in range(r + 2):
                face = t[:k] + t[k + 1:]
                h = F.restriction(face, t).scale(-1 if k % 2 else 1)
                key = (j, src[face])
                blocks[key] = blocks[key] + h if key in blocks else h
        diffs.append(block_hom(sums[r], sums[r + 1], blocks))
    X = Complex(0, tuple(s.group for s in sums), tuple(diffs))
    return CechComplex(F, max_degree, X, tuple(sums))


def cech_complex(F: CoveringPresheaf, max_degree: int) -> Complex:
    return cech_complex_data(F, max_degree).complex


def sections(F: CoveringPresheaf) -> FpAbGroup:
    """Families ``(s_i)`` agreeing on every pairwise overlap (the equalizer)."""
    I = F.index_set
    src = direct_sum([F.value({i}) for i in I])
    pairs = list(itertools.combinations(I, 2))
    if not pairs:
        return src.group
    dst = direct_sum([F.value({i, j}) for i, j in pairs])
    blocks = {}
    for k, (i, j) in enumerate(pairs):
        blocks[(k, I.index(i))] = F.restriction({i}, {i, j})
        blocks[(k, I.index(j))] = -F.restriction({j}, {i, j})
    return block_hom(src, dst, blocks).kernel().group


def nerve_presheaf(index_set: Sequence[int], simplices: Iterable[Iterable[int]], group: FpAbGroup) -> CoveringPresheaf:
    """``group`` on subsets spanning a simplex of the nerve, trivial elsewhere."""
    index_set = tuple(sorted(index_set))
    faces = set()
    for s in simplices:
        s = tuple(s)
        for k in range(1, len(s) + 1):
            faces.update(frozenset(c) for c in itertools.combinations(s, k))
    return CoveringPresheaf.with_defaults(index_set, {S: group for S in faces})

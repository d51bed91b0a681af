"""Component groups and the monodromy pairing from lattice data.

A datum is the integer matrix ``u`` of the map ``M -> M'^dual`` between two
rank ``d`` lattices.  The component groups are ``coker(u)`` and ``coker(u^T)``
and the monodromy pairing is

    <x, y> = x^T u^{-T} y = y^T u^{-1} x   (mod Z)

on lifts ``x, y in Z^d``.  This is the form that is well defined on
``coker(u) x coker(u^T)``; it is checked against the pairing obtained from the
connecting map of ``0 -> Z -> Q -> Q/Z -> 0``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .fgab import (
    BilinearPairing,
    ExtChase,
    FpAbGroup,
    GroupHom,
    Presentation,
    QModZ,
    present,
    present_diagonal,
)
from .linalg import IntegerMatrix

# Global sign relating the monodromy pairing to Grothendieck's pairing.
GLOBAL_SIGN = 1
ORACLE_MAX_RANK = 4


class DegenerateDatum(ValueError):
    """Raised for singular ``u``: the component groups would be infinite."""


class GraphError(ValueError):
    pass


@dataclass(frozen=True)
class UniformizationDatum:
    u: IntegerMatrix

    def __post_init__(self):
        if self.u.rows != self.u.cols:
            raise DegenerateDatum(f"u must be square, got {self.u.rows}x{self.u.cols}")
        if self.u.det() == 0:
            raise DegenerateDatum("det(u) = 0: degenerate datum")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "UniformizationDatum":
        rows = [list(r) for r in rows]
        return cls(IntegerMatrix.from_rows(rows, cols=len(rows)))

    @property
    def toric_rank(self) -> int:
        return self.u.rows

    @property
    def det(self) -> int:
        return self.u.det()

    def transpose(self) -> "UniformizationDatum":
        return UniformizationDatum(self.u.T)


@dataclass(frozen=True)
class ComponentGroups:
    phi: FpAbGroup
    phi_prime: FpAbGroup
    projection: GroupHom  # Z^d -> phi
    projection_prime: GroupHom  # Z^d -> phi'
    presentation: Presentation
    presentation_prime: Presentation


def component_groups(D: UniformizationDatum) -> ComponentGroups:
    """``phi_A = coker(u)`` and ``phi_A' = coker(u^T)`` with their projections from ``Z^d``."""
    p, pp = present(D.u), present(D.u.T)
    return ComponentGroups(p.group, pp.group, p.projection(), pp.projection(), p, pp)


def pair_lifts(D: UniformizationDatum, x: Sequence[int], y: Sequence[int]) -> QModZ:
    """Closed form ``x^T u^{-T} y`` via the adjugate."""
    adj = D.u.adjugate()
    num = sum(y[i] * adj[i, j] * x[j] for i in range(D.toric_rank) for j in range(D.toric_rank))
    return QModZ.of(Fraction(num, D.det))


def ext_oracle(D: UniformizationDatum, x: Sequence[int], y: Sequence[int]) -> QModZ:
    """Pairing through ``phi_A = Ext^1(phi_A', Z)`` and the connecting-map chase.

    ``phi_A'`` is presented by ``u^T``, so its ``Ext^1`` is ``coker(u)`` and the
    class of ``x`` is sent to the character ``y -> c . y`` with ``u c = x``.
    """
    chase = ExtChase(D.u.T, present(D.u))
    return chase.character_on(x, y)


def monodromy_pairing(D: UniformizationDatum, check_oracle: bool | None = None) -> BilinearPairing:
    """The pairing ``phi_A x phi_A' -> Q/Z`` on normal-form generators.

    For toric rank ``<= 4`` (or when ``check_oracle`` is set) every generator
    pair is also evaluated through :func:`ext_oracle` and any disagreement
    raises ``AssertionError``.
    """
    cg = component_groups(D)
    xs = [cg.presentation.from_group.col(i) for i in range(cg.phi.ngens)]
    ys = [cg.presentation_prime.from_group.col(j) for j in range(cg.phi_prime.ngens)]
    vals = tuple(tuple(pair_lifts(D, x, y) for y in ys) for x in xs)
    if check_oracle is None:
        check_oracle = D.toric_rank <= ORACLE_MAX_RANK
    if check_oracle:
        for i, x in enumerate(xs):
            for j, y in enumerate(ys):
                other = ext_oracle(D, x, y)
                if other != vals[i][j]:
                    raise AssertionError(
                        f"closed form {vals[i][j]} disagrees with the Ext chase {other} at ({i},{j})"
                    )
    return BilinearPairing(cg.phi, cg.phi_prime, vals)


def standard_basis_table(D: UniformizationDatum) -> list[list[QModZ]]:
    """``<e_i, e_j>`` for the standard basis vectors of ``Z^d`` on both sides."""
    d = D.toric_rank
    basis = [tuple(int(i == k) for k in range(d)) for i in range(d)]
    return [[pair_lifts(D, x, y) for y in basis] for x in basis]


def grothendieck_pairing(D: UniformizationDatum) -> BilinearPairing:
    """Monodromy pairing with the fixed global sign (+); equal to Grothendieck's up to sign."""
    P = monodromy_pairing(D)
    if GLOBAL_SIGN == 1:
        return P
    return BilinearPairing(P.left, P.right, tuple(tuple(-v for v in row) for row in P.values))


def torsion_level_map(D: UniformizationDatum, n: int) -> GroupHom:
    """The surjection ``(Z/n)^d -> phi_A`` induced by ``Z^d -> coker(u)``."""
    cg = component_groups(D)
    if n < 1 or n % cg.phi.exponent:
        raise DegenerateDatum(f"n = {n} does not kill the component group {cg.phi}")
    src = present_diagonal([n] * D.toric_rank)
    h = GroupHom(src.group, cg.phi, cg.projection.matrix @ src.from_group)
    if not h.is_surjective():
        raise AssertionError("level-n map is not surjective")
    return h


# ---------------------------------------------------------------------------
# graphs


@dataclass(frozen=True)
class DegenerationGraph:
    """Connected multigraph; loops are allowed and ignored by the Laplacian."""

    vertices: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple((int(a), int(b)) for a, b in self.edges))
        if self.vertices < 1:
            raise GraphError("a graph needs at least one vertex")
        for a, b in self.edges:
            if not (0 <= a < self.vertices and 0 <= b < self.vertices):
                raise GraphError(f"edge ({a},{b}) uses a vertex outside 0..{self.vertices - 1}")
        if not self.is_connected():
            raise GraphError("graph is disconnected")

    def is_connected(self) -> bool:
        uf = _UnionFind(self.vertices)
        for a, b in self.edges:
            uf.union(a, b)
        return len({uf.find(v) for v in range(self.vertices)}) == 1

    @property
    def betti_number(self) -> int:
        return len(self.edges) - self.vertices + 1

    def laplacian(self) -> IntegerMatrix:
        L = [[0] * self.vertices for _ in range(self.vertices)]
        for a, b in self.edges:
            if a == b:
                continue
            L[a][a] += 1
            L[b][b] += 1
            L[a][b] -= 1
            L[b][a] -= 1
        return IntegerMatrix.from_rows(L, cols=self.vertices)


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[max(ra, rb)] = min(ra, rb)
        return True


def reduced_laplacian(G: DegenerationGraph, base: int = 0) -> IntegerMatrix:
    keep = [v for v in range(G.vertices) if v != base]
    return G.laplacian().select_rows(keep).select_cols(keep)


def graph_to_datum(G: DegenerationGraph, base: int = 0) -> UniformizationDatum:
    """Reduced Laplacian (row and column of ``base`` deleted) as a datum of rank ``V - 1``."""
    return UniformizationDatum(reduced_laplacian(G, base))


def cycle_datum(G: DegenerationGraph) -> UniformizationDatum:
    """Gram matrix of the fundamental cycles (unit edge lengths), rank = first Betti number.

    Its cokernel is the same critical group, presented on the cycle lattice.
    """
    uf = _UnionFind(G.vertices)
    tree, extra = [], []
    for e, (a, b) in enumerate(G.edges):
        (tree if a != b and uf.union(a, b) else extra).append(e)
    adj: dict[int, list[tuple[int, int, int]]] = {v: [] for v in range(G.vertices)}
    for e in tree:
        a, b = G.edges[e]
        adj[a].append((b, e, 1))
        adj[b].append((a, e, -1))

    def tree_path(src: int, dst: int) -> dict[int, int]:
        # signed edge multiset of the tree path src -> dst
        prev = {src: None}
        stack = [src]
        while stack:
            v = stack.pop()
            for w, e, s in adj[v]:
                if w not in prev:
                    prev[w] = (v, e, s)
                    stack.append(w)
        out: dict[int, int] = {}
        v = dst
        while prev[v] is not None:
            u, e, s = prev[v]
            out[e] = out.get(e, 0) + s
            v = u
        return out

    cycles = []
    for e in extra:
        a, b = G.edges[e]
        c = {e: 1}
        for k, s in tree_path(b, a).items():
            c[k] = c.get(k, 0) + s
        cycles.append(c)
    gram = [[sum(ci.get(k, 0) * cj.get(k, 0) for k in ci) for cj in cycles] for ci in cycles]
    return UniformizationDatum(IntegerMatrix.from_rows(gram, cols=len(cycles)))


def spanning_tree_count(G: DegenerationGraph) -> int:
    """Brute force: subsets of ``V - 1`` non-loop edges that form a tree."""
    proper = [e for e in G.edges if e[0] != e[1]]
    count = 0
    for subset in itertools.combinations(proper, G.vertices - 1):
        uf = _UnionFind(G.vertices)
        if all(uf.union(a, b) for a, b in subset):
            count += 1
    return count


def critical_group(G: DegenerationGraph) -> FpAbGroup:
    return component_groups(graph_to_datum(G)).phi

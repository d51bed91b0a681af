"""Finitely presented abelian groups, homomorphisms and pairings into Q/Z.

A group is stored in normal form ``Z/d_1 x ... x Z/d_k x Z^r`` with
``d_1 | d_2 | ... | d_k`` and every ``d_i >= 2``.  Its generators are the
standard ones, torsion generators first, and elements are integer coordinate
vectors reduced eagerly (torsion coordinate ``i`` modulo ``d_i``), so element
equality is tuple equality.

Most constructions (kernels, cokernels, direct sums, tensor products,
cohomology) reduce to a *subquotient* ``K / L`` of two lattices
``L <= K <= Z^n``; :class:`Subquotient` carries the resulting group together
with lifting and projection data so that elements can be moved back and forth.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, reduce
from math import gcd, lcm, prod
from typing import Iterable, Iterator, Sequence

from .linalg import (
    IntegerMatrix,
    SmithDecomposition,
    image_basis,
    kernel_basis,
    smith_normal_form,
    solve_rational,
)

Element = tuple[int, ...]


class GroupError(ValueError):
    """Raised on ill-defined homomorphisms, pairings or group data."""


# ---------------------------------------------------------------------------
# Q/Z


@dataclass(frozen=True, order=True)
class QModZ:
    """A rational number modulo 1 in reduced form ``numerator/denominator``."""

    numerator: int
    denominator: int = 1

    def __post_init__(self):
        if self.denominator <= 0:
            raise ValueError("denominator must be positive")
        n, d = self.numerator % self.denominator, self.denominator
        g = gcd(n, d)
        if g != 1 or n != self.numerator:
            g = g or d
            object.__setattr__(self, "numerator", n // g)
            object.__setattr__(self, "denominator", d // g)

    @classmethod
    def of(cls, x: Fraction | int | "QModZ") -> "QModZ":
        if isinstance(x, QModZ):
            return x
        x = Fraction(x)
        return cls(x.numerator, x.denominator)

    @classmethod
    def parse(cls, token: str) -> "QModZ":
        token = token.strip()
        if "/" in token:
            n, d = token.split("/", 1)
            return cls(int(n), int(d))
        return cls(int(token), 1)

    def as_fraction(self) -> Fraction:
        return Fraction(self.numerator, self.denominator)

    def __add__(self, other) -> "QModZ":
        return QModZ.of(self.as_fraction() + QModZ.of(other).as_fraction())

    def __sub__(self, other) -> "QModZ":
        return QModZ.of(self.as_fraction() - QModZ.of(other).as_fraction())

    def __neg__(self) -> "QModZ":
        return QModZ(-self.numerator, self.denominator)

    def __mul__(self, k: int) -> "QModZ":
        if not isinstance(k, int):
            return NotImplemented
        return QModZ(k * self.numerator, self.denominator)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return self.numerator == 0

    @property
    def order(self) -> int:
        return self.denominator

    def __str__(self) -> str:
        return f"{self.numerator}/{self.denominator}"


ZERO = QModZ(0, 1)


# ---------------------------------------------------------------------------
# groups


@dataclass(frozen=True)
class FpAbGroup:
    """``Z/d_1 x ... x Z/d_k x Z^free_rank`` in invariant-factor normal form."""

    free_rank: int = 0
    invariant_factors: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "invariant_factors", tuple(int(d) for d in self.invariant_factors))
        if self.free_rank < 0:
            raise GroupError("negative free rank")
        d = self.invariant_factors
        if any(x < 2 for x in d):
            raise GroupError(f"invariant factors must be >= 2, got {d}")
        if any(d[i + 1] % d[i] for i in range(len(d) - 1)):
            raise GroupError(f"invariant factors {d} do not form a divisibility chain")

    @classmethod
    def cyclic(cls, n: int) -> "FpAbGroup":
        """``Z/n``; ``n = 0`` gives ``Z`` and ``n = 1`` the trivial group."""
        if n == 0:
            return cls(1, ())
        n = abs(n)
        return cls(0, (n,) if n > 1 else ())

    @classmethod
    def free(cls, r: int) -> "FpAbGroup":
        return cls(r, ())

    @classmethod
    def from_orders(cls, orders: Sequence[int]) -> "FpAbGroup":
        """Normal form of ``Z/o_1 x ... x Z/o_n`` (``0`` meaning ``Z``)."""
        return present_diagonal(orders).group

    @classmethod
    def parse(cls, text: str) -> "FpAbGroup":
        """Parse ``"free_rank; d1,d2,..."``."""
        if ";" not in text:
            raise GroupError(f"group descriptor {text!r} lacks ';'")
        r, ds = text.split(";", 1)
        factors = [int(x) for x in ds.replace(",", " ").split()]
        return cls(int(r.strip() or 0), tuple(factors))

    def serialize(self) -> str:
        return f"{self.free_rank}; " + ",".join(str(d) for d in self.invariant_factors)

    # structure ------------------------------------------------------------
    @property
    def torsion_rank(self) -> int:
        return len(self.invariant_factors)

    @property
    def ngens(self) -> int:
        return self.torsion_rank + self.free_rank

    @property
    def orders(self) -> tuple[int, ...]:
        """Generator orders, ``0`` for free generators."""
        return self.invariant_factors + (0,) * self.free_rank

    @property
    def is_finite(self) -> bool:
        return self.free_rank == 0

    @property
    def is_trivial(self) -> bool:
        return self.ngens == 0

    @property
    def order(self) -> int | None:
        """Cardinality, ``None`` for infinite groups."""
        return prod(self.invariant_factors) if self.is_finite else None

    @property
    def exponent(self) -> int:
        """Exponent of the torsion subgroup."""
        return self.invariant_factors[-1] if self.invariant_factors else 1

    def torsion(self) -> "FpAbGroup":
        return FpAbGroup(0, self.invariant_factors)

    def relation_matrix(self) -> IntegerMatrix:
        """Columns ``d_i e_i``: generators of the relation lattice."""
        return IntegerMatrix.diagonal(self.invariant_factors, rows=self.ngens, cols=self.torsion_rank)

    # elements -------------------------------------------------------------
    def reduce(self, x: Sequence[int]) -> Element:
        if len(x) != self.ngens:
            raise GroupError(f"element of length {len(x)} in a group with {self.ngens} generators")
        return tuple(v % o if o else int(v) for v, o in zip(x, self.orders))

    def zero(self) -> Element:
        return (0,) * self.ngens

    def generator(self, i: int) -> Element:
        return tuple(int(i == j) for j in range(self.ngens))

    def add(self, x: Sequence[int], y: Sequence[int]) -> Element:
        return self.reduce([a + b for a, b in zip(x, y)])

    def neg(self, x: Sequence[int]) -> Element:
        return self.reduce([-a for a in x])

    def mul(self, k: int, x: Sequence[int]) -> Element:
        return self.reduce([k * a for a in x])

    def contains_relation(self, x: Sequence[int]) -> bool:
        """Whether the integer vector ``x`` represents zero."""
        return not any(self.reduce(x))

    def element_order(self, x: Sequence[int]) -> int:
        """Order of ``x`` (``0`` if infinite)."""
        x = self.reduce(x)
        if any(v for v, o in zip(x, self.orders) if o == 0):
            return 0
        return reduce(lcm, (o // gcd(o, v) for v, o in zip(x, self.orders) if o), 1)

    def elements(self) -> Iterator[Element]:
        if not self.is_finite:
            raise GroupError("cannot enumerate an infinite group")
        return itertools.product(*(range(d) for d in self.invariant_factors))

    def __str__(self) -> str:
        parts = [f"Z/{d}" for d in self.invariant_factors]
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        return " x ".join(parts) if parts else "0"


TRIVIAL = FpAbGroup()


def _reduce_rows(matrix: IntegerMatrix, target: FpAbGroup) -> IntegerMatrix:
    rows = []
    for i, o in enumerate(target.orders):
        r = matrix.row(i)
        rows.append([v % o for v in r] if o else list(r))
    return IntegerMatrix.from_rows(rows, cols=matrix.cols)


# ---------------------------------------------------------------------------
# homomorphisms


@dataclass(frozen=True)
class GroupHom:
    """Homomorphism given by its integer matrix on generator coordinates.

    Construction fails with :class:`GroupError` when the matrix does not send
    the relations of ``source`` into the relation lattice of ``target``.
    """

    source: FpAbGroup
    target: FpAbGroup
    matrix: IntegerMatrix

    def __post_init__(self):
        m = self.matrix
        if m.shape != (self.target.ngens, self.source.ngens):
            raise GroupError(
                f"matrix shape {m.shape} does not fit {self.source} -> {self.target}"
            )
        for j, d in enumerate(self.source.invariant_factors):
            if not self.target.contains_relation([d * v for v in m.col(j)]):
                raise GroupError(
                    f"relation {d}*e_{j} of {self.source} is not mapped to 0 in {self.target}"
                )
        object.__setattr__(self, "matrix", _reduce_rows(m, self.target))

    @classmethod
    def zero(cls, source: FpAbGroup, target: FpAbGroup) -> "GroupHom":
        return cls(source, target, IntegerMatrix.zeros(target.ngens, source.ngens))

    @classmethod
    def identity(cls, group: FpAbGroup) -> "GroupHom":
        return cls(group, group, IntegerMatrix.identity(group.ngens))

    def __call__(self, x: Sequence[int]) -> Element:
        return self.target.reduce(self.matrix.apply(self.source.reduce(x)))

    def __matmul__(self, other: "GroupHom") -> "GroupHom":
        """Composition ``self o other``."""
        if other.target != self.source:
            raise GroupError(f"cannot compose {other.target} -> ... with {self.source} -> ...")
        return GroupHom(other.source, self.target, self.matrix @ other.matrix)

    def __add__(self, other: "GroupHom") -> "GroupHom":
        return GroupHom(self.source, self.target, self.matrix + other.matrix)

    def __sub__(self, other: "GroupHom") -> "GroupHom":
        return GroupHom(self.source, self.target, self.matrix - other.matrix)

    def __neg__(self) -> "GroupHom":
        return GroupHom(self.source, self.target, -self.matrix)

    def scale(self, k: int) -> "GroupHom":
        return GroupHom(self.source, self.target, self.matrix.scale(k))

    def power(self, k: int) -> "GroupHom":
        if self.source != self.target:
            raise GroupError("powers need an endomorphism")
        out = GroupHom.identity(self.source)
        for _ in range(k):
            out = self @ out
        return out

    def is_zero(self) -> bool:
        return self.matrix.is_zero()

    # derived groups -------------------------------------------------------
    @cached_property
    def kernel_lattice(self) -> IntegerMatrix:
        """Generators of ``{x in Z^n : f(x) = 0}`` (contains the source relations)."""
        return preimage_lattice(self.matrix, self.target)

    def kernel(self) -> "Subquotient":
        """``ker f`` as a subquotient of the source coordinates."""
        return Subquotient.build(self.kernel_lattice, self.source.relation_matrix())

    def image_lattice(self) -> IntegerMatrix:
        return self.matrix.hstack(self.target.relation_matrix())

    def image(self) -> "Subquotient":
        return Subquotient.build(self.image_lattice(), self.target.relation_matrix())

    def cokernel(self) -> "Subquotient":
        return Subquotient.build(
            IntegerMatrix.identity(self.target.ngens), self.image_lattice()
        )

    def is_injective(self) -> bool:
        return self.kernel().group.is_trivial

    def is_surjective(self) -> bool:
        return self.cokernel().group.is_trivial

    def is_isomorphism(self) -> bool:
        return self.is_injective() and self.is_surjective()

    def inverse(self) -> "GroupHom":
        """Inverse of an isomorphism."""
        if not self.is_isomorphism():
            raise GroupError("homomorphism is not invertible")
        dec = smith_normal_form(self.image_lattice())
        cols = []
        for j in range(self.target.ngens):
            x = dec.solve(self.target.generator(j))
            cols.append(x[: self.source.ngens])
        return GroupHom(self.target, self.source, IntegerMatrix.from_columns(cols, self.source.ngens))


def preimage_lattice(matrix: IntegerMatrix, target: FpAbGroup) -> IntegerMatrix:
    """Generators of ``{x : matrix @ x represents 0 in target}``."""
    n = matrix.cols
    big = matrix.hstack(target.relation_matrix())
    ker = kernel_basis(big)
    gens = ker.select_rows(range(n))
    return gens if gens.cols else IntegerMatrix.zeros(n, 0)


def hom_from_images(source: FpAbGroup, target: FpAbGroup, images: Sequence[Sequence[int]]) -> GroupHom:
    """Homomorphism sending generator ``i`` of ``source`` to ``images[i]``."""
    return GroupHom(source, target, IntegerMatrix.from_columns(images, target.ngens))


def is_exact_at(incoming: GroupHom, outgoing: GroupHom) -> bool:
    """Exactness of ``A -> B -> C`` at ``B``: ``im(incoming) == ker(outgoing)``."""
    if incoming.target != outgoing.source:
        raise GroupError("maps are not composable")
    if not (outgoing @ incoming).is_zero():
        return False
    B = incoming.target
    ker = outgoing.kernel_lattice
    img = incoming.image_lattice()
    if ker.cols == 0:
        return True
    return Subquotient.build(ker, img).group.is_trivial


# ---------------------------------------------------------------------------
# subquotients


@dataclass(frozen=True)
class Subquotient:
    """The group ``K / L`` for lattices ``L <= K <= Z^n``.

    ``lift`` holds ambient representatives of the generators of ``group``;
    :meth:`project` sends an ambient vector of ``K`` to group coordinates.
    """

    group: FpAbGroup
    ambient_dim: int
    basis: IntegerMatrix  # n x k basis of K
    lift: IntegerMatrix  # n x ngens
    _to_group: IntegerMatrix  # ngens x k, on K-basis coordinates
    _basis_snf: SmithDecomposition

    @classmethod
    def build(cls, K: IntegerMatrix, L: IntegerMatrix) -> "Subquotient":
        n = K.rows
        if L.rows != n:
            raise GroupError("lattices live in different ambient spaces")
        B = image_basis(K) if K.cols else IntegerMatrix.zeros(n, 0)
        k = B.cols
        bdec = smith_normal_form(B)
        coords = []
        for j in range(L.cols):
            y = bdec.solve(L.col(j))
            if y is None:
                raise GroupError("the second lattice is not contained in the first")
            coords.append(y)
        X = IntegerMatrix.from_columns(coords, k) if coords else IntegerMatrix.zeros(k, 0)
        dec = smith_normal_form(X)
        diag = dec.diagonal
        torsion_idx = [i for i, d in enumerate(diag) if d > 1]
        free_idx = list(range(dec.rank, k))
        kept = torsion_idx + free_idx
        group = FpAbGroup(len(free_idx), tuple(diag[i] for i in torsion_idx))
        to_group = dec.U.select_rows(kept) if kept else IntegerMatrix.zeros(0, k)
        lift_k = dec.U_inv.select_cols(kept) if kept else IntegerMatrix.zeros(k, 0)
        lift = B @ lift_k if k else IntegerMatrix.zeros(n, len(kept))
        return cls(group, n, B, lift, to_group, bdec)

    def coordinates_in_basis(self, x: Sequence[int]) -> tuple[int, ...] | None:
        if self.basis.cols == 0:
            return () if not any(x) else None
        return self._basis_snf.solve(x)

    def contains(self, x: Sequence[int]) -> bool:
        return self.coordinates_in_basis(x) is not None

    def project(self, x: Sequence[int]) -> Element:
        """Class of the ambient vector ``x`` (which must lie in ``K``)."""
        y = self.coordinates_in_basis(x)
        if y is None:
            raise GroupError("vector does not lie in the numerator lattice")
        return self.group.reduce(self._to_group.apply(y))

    def lift_element(self, g: Sequence[int]) -> tuple[int, ...]:
        return self.lift.apply(self.group.reduce(g))

    def projection_matrix(self, vectors: IntegerMatrix) -> IntegerMatrix:
        """Group coordinates of each column of ``vectors``."""
        return IntegerMatrix.from_columns(
            [self.project(vectors.col(j)) for j in range(vectors.cols)], self.group.ngens
        )


# ---------------------------------------------------------------------------
# presentations, sums, tensors


@dataclass(frozen=True)
class Presentation:
    """Normal form of the cokernel of ``relations`` with coordinate changes.

    ``to_group`` maps raw generator coordinates to normal-form coordinates;
    ``from_group`` lifts normal-form generators back to raw coordinates.
    """

    relations: IntegerMatrix
    group: FpAbGroup
    to_group: IntegerMatrix
    from_group: IntegerMatrix

    @property
    def raw_dim(self) -> int:
        return self.relations.rows

    def projection(self) -> GroupHom:
        return GroupHom(FpAbGroup.free(self.raw_dim), self.group, self.to_group)

    def to_element(self, raw: Sequence[int]) -> Element:
        return self.group.reduce(self.to_group.apply(raw))

    def raw_hom_to(self, other: "Presentation", raw_matrix: IntegerMatrix) -> GroupHom:
        """Homomorphism induced by a raw-coordinate matrix between two presentations."""
        return GroupHom(self.group, other.group, other.to_group @ raw_matrix @ self.from_group)


def present(relations: IntegerMatrix) -> Presentation:
    """Cokernel of ``relations: Z^m -> Z^n`` in normal form."""
    dec = smith_normal_form(relations)
    n = relations.rows
    diag = dec.diagonal
    torsion_idx = [i for i, d in enumerate(diag) if d > 1]
    free_idx = list(range(dec.rank, n))
    kept = torsion_idx + free_idx
    group = FpAbGroup(len(free_idx), tuple(diag[i] for i in torsion_idx))
    to_group = dec.U.select_rows(kept) if kept else IntegerMatrix.zeros(0, n)
    from_group = dec.U_inv.select_cols(kept) if kept else IntegerMatrix.zeros(n, 0)
    return Presentation(relations, group, to_group, from_group)


def present_diagonal(orders: Sequence[int]) -> Presentation:
    """``Z/o_1 x ... x Z/o_n`` (``0`` meaning ``Z``) in normal form."""
    orders = tuple(abs(int(o)) for o in orders)
    n = len(orders)
    if all(o == 0 for o in orders) or _is_chain(orders):
        # already normal up to dropping units
        kept = [i for i, o in enumerate(orders) if o != 1]
        tors = [i for i in kept if orders[i] != 0]
        free = [i for i in kept if orders[i] == 0]
        kept = tors + free
        group = FpAbGroup(len(free), tuple(orders[i] for i in tors))
        rel_cols = [[o if j == i else 0 for j in range(n)] for i, o in enumerate(orders) if o]
        rel = IntegerMatrix.from_columns(rel_cols, n) if rel_cols else IntegerMatrix.zeros(n, 0)
        ident = IntegerMatrix.identity(n)
        return Presentation(rel, group, ident.select_rows(kept), ident.select_cols(kept))
    rel_cols = [[o if j == i else 0 for j in range(n)] for i, o in enumerate(orders) if o]
    rel = IntegerMatrix.from_columns(rel_cols, n) if rel_cols else IntegerMatrix.zeros(n, 0)
    return present(rel)


def _is_chain(orders: Sequence[int]) -> bool:
    tors = [o for o in orders if o not in (0, 1)]
    # torsion generators must precede free ones for the identity change of basis
    seen_free = False
    for o in orders:
        if o == 0:
            seen_free = True
        elif o != 1 and seen_free:
            return False
    return all(tors[i + 1] % tors[i] == 0 for i in range(len(tors) - 1))


@dataclass(frozen=True)
class DirectSum:
    presentation: Presentation
    summands: tuple[FpAbGroup, ...]
    offsets: tuple[int, ...]

    @property
    def group(self) -> FpAbGroup:
        return self.presentation.group

    def inclusion(self, i: int) -> GroupHom:
        g = self.summands[i]
        raw = IntegerMatrix.zeros(self.presentation.raw_dim, g.ngens).to_lists()
        for j in range(g.ngens):
            raw[self.offsets[i] + j][j] = 1
        m = IntegerMatrix.from_rows(raw, cols=g.ngens)
        return GroupHom(g, self.group, self.presentation.to_group @ m)

    def projection(self, i: int) -> GroupHom:
        g = self.summands[i]
        f = self.presentation.from_group
        return GroupHom(self.group, g, f.select_rows(range(self.offsets[i], self.offsets[i] + g.ngens)))

    def from_parts(self, parts: Sequence[Sequence[int]]) -> Element:
        raw = [v for p in parts for v in p]
        return self.presentation.to_element(raw)


def direct_sum(groups: Sequence[FpAbGroup]) -> DirectSum:
    orders = [o for g in groups for o in g.orders]
    offsets, off = [], 0
    for g in groups:
        offsets.append(off)
        off += g.ngens
    return DirectSum(present_diagonal(orders), tuple(groups), tuple(offsets))


def block_hom(src: DirectSum, dst: DirectSum, blocks: dict[tuple[int, int], GroupHom]) -> GroupHom:
    """Homomorphism between direct sums from blocks ``(dst_index, src_index) -> hom``."""
    raw = [[0] * src.presentation.raw_dim for _ in range(dst.presentation.raw_dim)]
    for (i, j), h in blocks.items():
        if h.source != src.summands[j] or h.target != dst.summands[i]:
            raise GroupError(f"block ({i},{j}) has the wrong source or target")
        for r in range(h.target.ngens):
            for c in range(h.source.ngens):
                raw[dst.offsets[i] + r][src.offsets[j] + c] = h.matrix[r, c]
    raw_m = IntegerMatrix.from_rows(raw, cols=src.presentation.raw_dim)
    return src.presentation.raw_hom_to(dst.presentation, raw_m)


@dataclass(frozen=True)
class TensorProduct:
    """``G (x) H`` with raw generators ``e_i (x) f_j`` indexed ``i * H.ngens + j``."""

    left: FpAbGroup
    right: FpAbGroup
    presentation: Presentation

    @property
    def group(self) -> FpAbGroup:
        return self.presentation.group

    def pure(self, x: Sequence[int], y: Sequence[int]) -> Element:
        """The element ``x (x) y``."""
        raw = [a * b for a in x for b in y]
        return self.presentation.to_element(raw)


def tensor_product(G: FpAbGroup, H: FpAbGroup) -> TensorProduct:
    orders = [gcd(a, b) for a in G.orders for b in H.orders]
    return TensorProduct(G, H, present_diagonal(orders))


def kron(a: IntegerMatrix, b: IntegerMatrix) -> IntegerMatrix:
    rows = []
    for i in range(a.rows):
        for k in range(b.rows):
            rows.append([a[i, j] * b[k, l] for j in range(a.cols) for l in range(b.cols)])
    return IntegerMatrix.from_rows(rows, cols=a.cols * b.cols)


def tensor_hom(f: GroupHom, g: GroupHom, src: TensorProduct, dst: TensorProduct) -> GroupHom:
    """``f (x) g`` between given tensor products."""
    raw = kron(f.matrix, g.matrix)
    return src.presentation.raw_hom_to(dst.presentation, raw)


def cokernel_group(A: IntegerMatrix) -> tuple[FpAbGroup, GroupHom]:
    """``coker(A: Z^cols -> Z^rows)`` and the projection from ``Z^rows``."""
    p = present(A)
    return p.group, p.projection()


# ---------------------------------------------------------------------------
# pairings and duality


@dataclass(frozen=True)
class BilinearPairing:
    """Bilinear map ``left x right -> Q/Z`` stored on generator pairs."""

    left: FpAbGroup
    right: FpAbGroup
    values: tuple[tuple[QModZ, ...], ...]

    def __post_init__(self):
        vals = tuple(tuple(QModZ.of(v) for v in row) for row in self.values)
        object.__setattr__(self, "values", vals)
        if len(vals) != self.left.ngens or any(len(r) != self.right.ngens for r in vals):
            raise GroupError("pairing table does not match the generator counts")
        for i, oi in enumerate(self.left.orders):
            for j, oj in enumerate(self.right.orders):
                v = vals[i][j]
                if oi and not (v * oi).is_zero():
                    raise GroupError(f"value {v} at ({i},{j}) is not killed by {oi}")
                if oj and not (v * oj).is_zero():
                    raise GroupError(f"value {v} at ({i},{j}) is not killed by {oj}")

    def __call__(self, x: Sequence[int], y: Sequence[int]) -> QModZ:
        total = Fraction(0)
        for i, xi in enumerate(x):
            if not xi:
                continue
            for j, yj in enumerate(y):
                if yj:
                    total += xi * yj * self.values[i][j].as_fraction()
        return QModZ.of(total)

    def table(self) -> list[list[str]]:
        return [[str(v) for v in row] for row in self.values]

    def transpose(self) -> "BilinearPairing":
        return BilinearPairing(
            self.right, self.left,
            tuple(tuple(self.values[i][j] for i in range(self.left.ngens)) for j in range(self.right.ngens)),
        )

    def is_zero(self) -> bool:
        return all(v.is_zero() for row in self.values for v in row)


def evaluation_pairing(G: FpAbGroup) -> BilinearPairing:
    """``G x G* -> Q/Z`` with ``<e_i, chi_j> = delta_ij / d_i``."""
    if not G.is_finite:
        raise GroupError("Pontryagin duality is only modelled for finite groups")
    d = G.invariant_factors
    vals = tuple(tuple(QModZ(int(i == j), d[i]) for j in range(len(d))) for i in range(len(d)))
    return BilinearPairing(G, G, vals)


def pontryagin_dual(G: FpAbGroup) -> tuple[FpAbGroup, BilinearPairing]:
    """``G* = hom(G, Q/Z)`` on the dual basis, with the evaluation pairing."""
    if not G.is_finite:
        raise GroupError(f"{G} has a free part; its character group is not finite")
    return FpAbGroup(0, G.invariant_factors), evaluation_pairing(G)


def character_coordinates(G: FpAbGroup, values: Sequence[QModZ | Fraction]) -> Element:
    """Dual-basis coordinates of the character with the given values on generators."""
    coords = []
    for v, d in zip(values, G.invariant_factors):
        f = QModZ.of(v).as_fraction() * d
        if f.denominator != 1:
            raise GroupError(f"value {v} is not killed by {d}")
        coords.append(int(f))
    return G.reduce(coords)


def pairing_adjoint(P: BilinearPairing) -> GroupHom:
    """The induced map ``left -> right*``."""
    if not (P.left.is_finite and P.right.is_finite):
        raise GroupError("adjoint needs finite groups")
    dual, _ = pontryagin_dual(P.right)
    cols = [character_coordinates(P.right, P.values[i]) for i in range(P.left.ngens)]
    return hom_from_images(P.left, dual, cols)


def is_perfect(P: BilinearPairing) -> bool:
    """Whether the adjoint ``left -> right*`` is an isomorphism."""
    if P.left.order != P.right.order:
        return False
    return pairing_adjoint(P).is_injective()


def double_dual_map(G: FpAbGroup) -> GroupHom:
    """``G -> G**`` built from two evaluation pairings."""
    Gs, ev = pontryagin_dual(G)
    _, ev2 = pontryagin_dual(Gs)
    cols = []
    for x in map(G.generator, range(G.ngens)):
        vals = [ev(x, Gs.generator(j)) for j in range(Gs.ngens)]
        cols.append(character_coordinates(Gs, vals))
    return hom_from_images(G, FpAbGroup(0, Gs.invariant_factors), cols)


# ---------------------------------------------------------------------------
# Ext^1(-, Z)


@dataclass(frozen=True)
class ExtChase:
    """``Ext^1(coker P, Z)`` for an injective presentation ``Z^n --P--> Z^m``.

    ``Ext^1 = coker(P^T)``.  For finite ``coker P`` the connecting map of
    ``0 -> Z -> Q -> Q/Z -> 0`` identifies it with the character group: a
    vector ``f in Z^n`` corresponds to ``c`` with ``P^T c = f`` and the
    character ``y -> c . y mod Z``.
    """

    presentation: IntegerMatrix
    group_data: Presentation

    @classmethod
    def from_presentation(cls, P: IntegerMatrix) -> "ExtChase":
        if P.cols and smith_normal_form(P).rank < P.cols:
            P = image_basis(P)
        return cls(P, present(P.T))

    @property
    def group(self) -> FpAbGroup:
        return self.group_data.group

    def ext_class(self, f: Sequence[int]) -> Element:
        return self.group_data.to_element(f)

    def character(self, f: Sequence[int]) -> tuple[Fraction, ...]:
        """Values in ``Q`` (to be read mod 1) on the generators of ``Z^m``."""
        P = self.presentation
        c = solve_rational(P.T, list(f))
        if c is None or P.rows != P.cols:
            raise GroupError("character chase needs a finite cokernel")
        return c

    def character_on(self, f: Sequence[int], y: Sequence[int]) -> QModZ:
        return QModZ.of(sum(ci * yi for ci, yi in zip(self.character(f), y)))


def ext1_Z(G: FpAbGroup) -> tuple[FpAbGroup, GroupHom]:
    """``Ext^1(G, Z)`` with its isomorphism to the character group of ``tors(G)``.

    The isomorphism is computed by the connecting-map chase on the standard
    presentation ``Z^k --diag(d)--> Z^k`` of the torsion part (the free part
    contributes nothing).
    """
    tors = G.torsion()
    P = IntegerMatrix.diagonal(tors.invariant_factors)
    chase = ExtChase.from_presentation(P)
    ext = chase.group
    dual, _ = pontryagin_dual(tors)
    cols = []
    for j in range(ext.ngens):
        f = chase.group_data.from_group.col(j)
        vals = chase.character(f)
        cols.append(character_coordinates(tors, vals))
    return ext, hom_from_images(ext, dual, cols)


# ---------------------------------------------------------------------------
# primary decomposition


def prime_factors(n: int) -> list[int]:
    n, out, p = abs(n), [], 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def _p_part(n: int, p: int) -> int:
    q = 1
    while n % p == 0:
        n //= p
        q *= p
    return q


def primary_component(G: FpAbGroup, p: int) -> tuple[FpAbGroup, GroupHom]:
    """The ``p``-primary part of finite ``G`` and its inclusion."""
    if not G.is_finite:
        raise GroupError("primary decomposition needs a finite group")
    parts = [(i, _p_part(d, p)) for i, d in enumerate(G.invariant_factors)]
    parts = [(i, q) for i, q in parts if q > 1]
    Gp = FpAbGroup(0, tuple(q for _, q in parts))
    cols = []
    for i, q in parts:
        col = [0] * G.ngens
        col[i] = G.invariant_factors[i] // q
        cols.append(col)
    return Gp, hom_from_images(Gp, G, cols)


def primary_decomposition(G: FpAbGroup) -> list[tuple[int, FpAbGroup]]:
    """``[(p, G_p), ...]`` for the primes dividing ``|G|`` in ascending order."""
    if not G.is_finite:
        raise GroupError("primary decomposition needs a finite group")
    return [(p, primary_component(G, p)[0]) for p in prime_factors(G.order)]


def is_isomorphic(G: FpAbGroup, H: FpAbGroup) -> bool:
    return G == H


def finite_groups(max_order: int) -> list[FpAbGroup]:
    """Every finite abelian group of order ``<= max_order``, once each, in normal form."""
    out = [TRIVIAL]

    def extend(chain: tuple[int, ...], size: int):
        # chain is built from the largest factor down; each new factor divides the previous
        for d in range(2, (chain[0] if chain else max_order) + 1):
            if chain and chain[0] % d:
                continue
            if size * d > max_order:
                break
            new = (d,) + chain
            out.append(FpAbGroup(0, new))
            extend(new, size * d)

    extend((), 1)
    return sorted(out, key=lambda G: (G.order, G.invariant_factors))

"""Exact integer linear algebra.

Everything here works on Python ints, so there is no overflow: coefficient
growth inside the normal-form algorithms is simply absorbed.

Conventions
-----------
* Smith normal form ``U @ A @ V == S`` with ``S`` diagonal, nonnegative,
  each diagonal entry dividing the next and zeros last.
* Hermite normal form is row style: ``U @ A == H`` with ``H`` in row echelon
  form, positive pivots and the entries above every pivot reduced into
  ``[0, pivot)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

__all__ = [
    "IntegerMatrix",
    "SmithDecomposition",
    "smith_normal_form",
    "hermite_normal_form",
    "solve_integer",
    "solve_rational",
    "kernel_basis",
    "image_basis",
    "xgcd",
]


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(x, y, g)`` with ``x*a + y*b == g == gcd(a, b) >= 0``."""
    x, next_x = 1, 0
    y, next_y = 0, 1
    g, next_g = a, b
    while next_g:
        q = g // next_g
        x, next_x = next_x, x - q * next_x
        y, next_y = next_y, y - q * next_y
        g, next_g = next_g, g - q * next_g
    if g < 0:
        x, y, g = -x, -y, -g
    return x, y, g


@dataclass(frozen=True)
class IntegerMatrix:
    """Immutable integer matrix stored row-major."""

    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError("matrix dimensions must be nonnegative")
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"expected {self.rows * self.cols} entries, got {len(self.entries)}"
            )
        if not all(isinstance(e, int) for e in self.entries):
            object.__setattr__(self, "entries", tuple(_as_int(e) for e in self.entries))

    # construction -------------------------------------------------------
    @classmethod
    def from_rows(cls, rows: Iterable[Sequence[int]], cols: int | None = None) -> "IntegerMatrix":
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != cols:
                raise ValueError("ragged rows")
        return cls(len(rows), cols, tuple(_as_int(e) for r in rows for e in r))

    @classmethod
    def from_columns(cls, columns: Iterable[Sequence[int]], rows: int) -> "IntegerMatrix":
        columns = [list(c) for c in columns]
        for c in columns:
            if len(c) != rows:
                raise ValueError("ragged columns")
        return cls.from_rows(
            [[c[i] for c in columns] for i in range(rows)], cols=len(columns)
        )

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntegerMatrix":
        return cls(rows, cols, (0,) * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> "IntegerMatrix":
        return cls(n, n, tuple(int(i == j) for i in range(n) for j in range(n)))

    @classmethod
    def diagonal(cls, diag: Sequence[int], rows: int | None = None, cols: int | None = None) -> "IntegerMatrix":
        rows = len(diag) if rows is None else rows
        cols = len(diag) if cols is None else cols
        out = [[0] * cols for _ in range(rows)]
        for i, d in enumerate(diag):
            out[i][i] = d
        return cls.from_rows(out, cols=cols)

    # access --------------------------------------------------------------
    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(ij)
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def col(self, j: int) -> tuple[int, ...]:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def to_lists(self) -> list[list[int]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def columns(self) -> list[tuple[int, ...]]:
        return [self.col(j) for j in range(self.cols)]

    @property
    def T(self) -> "IntegerMatrix":
        return IntegerMatrix.from_rows(
            [self.col(j) for j in range(self.cols)], cols=self.rows
        )

    # arithmetic ----------------------------------------------------------
    def __matmul__(self, other: "IntegerMatrix") -> "IntegerMatrix":
        if not isinstance(other, IntegerMatrix):
            return NotImplemented
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        a = self.to_lists()
        bt = [other.col(j) for j in range(other.cols)]
        return IntegerMatrix.from_rows(
            [[sum(x * y for x, y in zip(r, c)) for c in bt] for r in a],
            cols=other.cols,
        )

    def __add__(self, other: "IntegerMatrix") -> "IntegerMatrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return IntegerMatrix(self.rows, self.cols, tuple(x + y for x, y in zip(self.entries, other.entries)))

    def __sub__(self, other: "IntegerMatrix") -> "IntegerMatrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return IntegerMatrix(self.rows, self.cols, tuple(x - y for x, y in zip(self.entries, other.entries)))

    def __neg__(self) -> "IntegerMatrix":
        return IntegerMatrix(self.rows, self.cols, tuple(-x for x in self.entries))

    def scale(self, k: int) -> "IntegerMatrix":
        return IntegerMatrix(self.rows, self.cols, tuple(k * x for x in self.entries))

    def apply(self, v: Sequence[int]) -> tuple[int, ...]:
        """Matrix-vector product."""
        if len(v) != self.cols:
            raise ValueError(f"vector of length {len(v)} for {self.shape} matrix")
        return tuple(
            sum(self.entries[i * self.cols + j] * v[j] for j in range(self.cols))
            for i in range(self.rows)
        )

    def hstack(self, other: "IntegerMatrix") -> "IntegerMatrix":
        if self.rows != other.rows:
            raise ValueError("row count mismatch")
        return IntegerMatrix.from_rows(
            [self.row(i) + other.row(i) for i in range(self.rows)],
            cols=self.cols + other.cols,
        )

    def vstack(self, other: "IntegerMatrix") -> "IntegerMatrix":
        if self.cols != other.cols:
            raise ValueError("column count mismatch")
        return IntegerMatrix(self.rows + other.rows, self.cols, self.entries + other.entries)

    def select_rows(self, idx: Sequence[int]) -> "IntegerMatrix":
        return IntegerMatrix.from_rows([self.row(i) for i in idx], cols=self.cols)

    def select_cols(self, idx: Sequence[int]) -> "IntegerMatrix":
        return IntegerMatrix.from_rows(
            [[self[i, j] for j in idx] for i in range(self.rows)], cols=len(idx)
        )

    def is_zero(self) -> bool:
        return not any(self.entries)

    def is_diagonal(self) -> bool:
        return all(self[i, j] == 0 for i in range(self.rows) for j in range(self.cols) if i != j)

    def diagonal_entries(self) -> tuple[int, ...]:
        return tuple(self[i, i] for i in range(min(self.rows, self.cols)))

    def det(self) -> int:
        """Determinant by fraction-free (Bareiss) elimination."""
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        n = self.rows
        if n == 0:
            return 1
        a = self.to_lists()
        sign, prev = 1, 1
        for k in range(n - 1):
            if a[k][k] == 0:
                for i in range(k + 1, n):
                    if a[i][k] != 0:
                        a[k], a[i] = a[i], a[k]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            prev = a[k][k]
        return sign * a[n - 1][n - 1]

    def adjugate(self) -> "IntegerMatrix":
        """Classical adjoint, ``A @ adj(A) == det(A) * I``."""
        n = self.rows
        if n != self.cols:
            raise ValueError("adjugate of a non-square matrix")
        if n == 0:
            return self
        if n == 1:
            return IntegerMatrix.identity(1)
        rows = self.to_lists()
        out = [[0] * n for _ in range(n)]
        for i in range(n):
            for j in range(n):
                minor = [r[:j] + r[j + 1:] for k, r in enumerate(rows) if k != i]
                out[j][i] = (-1) ** (i + j) * IntegerMatrix.from_rows(minor, cols=n - 1).det()
        return IntegerMatrix.from_rows(out, cols=n)

    def rank(self) -> int:
        return smith_normal_form(self).rank

    def __str__(self) -> str:
        return format_matrix(self)


def _as_int(e) -> int:
    if isinstance(e, bool):
        raise TypeError("booleans are not matrix entries")
    if isinstance(e, int):
        return e
    if isinstance(e, Fraction) and e.denominator == 1:
        return int(e.numerator)
    try:
        i = int(e)
    except (TypeError, ValueError) as exc:
        raise TypeError(f"non-integer entry {e!r}") from exc
    if i != e:
        raise TypeError(f"non-integer entry {e!r}")
    return i


def format_matrix(m: IntegerMatrix) -> str:
    """Text form: ``"rows cols"`` then one line per row."""
    lines = [f"{m.rows} {m.cols}"]
    lines += [" ".join(str(x) for x in m.row(i)) for i in range(m.rows)]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Smith normal form


@dataclass(frozen=True)
class SmithDecomposition:
    """``U @ source @ V == S``; inverses of both transforms are kept for lifting."""

    U: IntegerMatrix
    S: IntegerMatrix
    V: IntegerMatrix
    source: IntegerMatrix
    U_inv: IntegerMatrix = field(repr=False)
    V_inv: IntegerMatrix = field(repr=False)

    @property
    def diagonal(self) -> tuple[int, ...]:
        return self.S.diagonal_entries()

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d != 0)

    def verify(self) -> bool:
        if self.U @ self.source @ self.V != self.S:
            return False
        n_u, n_v = self.U.rows, self.V.rows
        if self.U @ self.U_inv != IntegerMatrix.identity(n_u):
            return False
        if self.V @ self.V_inv != IntegerMatrix.identity(n_v):
            return False
        if not self.S.is_diagonal():
            return False
        d = self.diagonal
        if any(x < 0 for x in d):
            return False
        r = self.rank
        if any(x == 0 for x in d[:r]) or any(x != 0 for x in d[r:]):
            return False
        return all(d[i + 1] % d[i] == 0 for i in range(r - 1))

    def solve(self, b: Sequence[int]) -> tuple[int, ...] | None:
        """Some integer ``x`` with ``source @ x == b`` or ``None``."""
        if len(b) != self.source.rows:
            raise ValueError("right-hand side has the wrong length")
        c = self.U.apply(b)
        d = self.diagonal
        y = [0] * self.source.cols
        for i, ci in enumerate(c):
            di = d[i] if i < len(d) else 0
            if di == 0:
                if ci != 0:
                    return None
            else:
                if ci % di:
                    return None
                y[i] = ci // di
        return self.V.apply(y)


def smith_normal_form(A: IntegerMatrix) -> SmithDecomposition:
    """Smith normal form with unimodular transforms.

    Pivot: smallest nonzero absolute value in the working submatrix, ties
    broken by the lowest ``(row, col)``.
    """
    m, n = A.rows, A.cols
    a = A.to_lists()
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    Ui = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]
    Vi = [[int(i == j) for j in range(n)] for i in range(n)]

    def add_row(dst: int, src: int, q: int):
        # row_dst += q * row_src
        if q == 0:
            return
        ra, rs = a[dst], a[src]
        for j in range(n):
            if rs[j]:
                ra[j] += q * rs[j]
        ud, us = U[dst], U[src]
        for j in range(m):
            if us[j]:
                ud[j] += q * us[j]
        for row in Ui:
            if row[dst]:
                row[src] -= q * row[dst]

    def add_col(dst: int, src: int, q: int):
        # col_dst += q * col_src
        if q == 0:
            return
        for row in a:
            if row[src]:
                row[dst] += q * row[src]
        for row in V:
            if row[src]:
                row[dst] += q * row[src]
        vd, vs = Vi[dst], Vi[src]
        for j in range(n):
            if vd[j]:
                vs[j] -= q * vd[j]

    def swap_rows(i: int, k: int):
        if i != k:
            a[i], a[k] = a[k], a[i]
            U[i], U[k] = U[k], U[i]
            for row in Ui:
                row[i], row[k] = row[k], row[i]

    def swap_cols(j: int, k: int):
        if j != k:
            for row in a:
                row[j], row[k] = row[k], row[j]
            for row in V:
                row[j], row[k] = row[k], row[j]
            Vi[j], Vi[k] = Vi[k], Vi[j]

    def negate_row(i: int):
        a[i] = [-x for x in a[i]]
        U[i] = [-x for x in U[i]]
        for row in Ui:
            row[i] = -row[i]

    for t in range(min(m, n)):
        while True:
            best = None
            for i in range(t, m):
                ri = a[i]
                for j in range(t, n):
                    v = ri[j]
                    if v and (best is None or abs(v) < best[0]):
                        best = (abs(v), i, j)
            if best is None:
                break
            _, pi, pj = best
            swap_rows(t, pi)
            swap_cols(t, pj)
            p = a[t][t]
            clean = True
            for i in range(t + 1, m):
                if a[i][t]:
                    add_row(i, t, -(a[i][t] // p))
                    if a[i][t]:
                        clean = False
            for j in range(t + 1, n):
                if a[t][j]:
                    add_col(j, t, -(a[t][j] // p))
                    if a[t][j]:
                        clean = False
            if not clean:
                continue
            bad = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if a[i][j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(t, bad, 1)
        if a[t][t] < 0:
            negate_row(t)
        if all(a[i][j] == 0 for i in range(t, m) for j in range(t, n)):
            break

    mk = IntegerMatrix.from_rows
    return SmithDecomposition(
        U=mk(U, cols=m), S=mk(a, cols=n), V=mk(V, cols=n), source=A,
        U_inv=mk(Ui, cols=m), V_inv=mk(Vi, cols=n),
    )


# ---------------------------------------------------------------------------
# Hermite normal form


def hermite_normal_form(A: IntegerMatrix) -> tuple[IntegerMatrix, IntegerMatrix]:
    """Row-style Hermite normal form ``(H, U)`` with ``U @ A == H``."""
    m, n = A.rows, A.cols
    h = A.to_lists()
    U = [[int(i == j) for j in range(m)] for i in range(m)]

    def combine(i: int, k: int, x: int, y: int, z: int, w: int):
        # (row_i, row_k) <- (x row_i + y row_k, z row_i + w row_k)
        for mat, width in ((h, n), (U, m)):
            ri, rk = mat[i], mat[k]
            mat[i] = [x * ri[j] + y * rk[j] for j in range(width)]
            mat[k] = [z * ri[j] + w * rk[j] for j in range(width)]

    r = 0
    for c in range(n):
        if r == m:
            break
        for k in range(r + 1, m):
            if h[k][c] == 0:
                continue
            x, y, g = xgcd(h[r][c], h[k][c])
            a_g, b_g = h[r][c] // g, h[k][c] // g
            combine(r, k, x, y, -b_g, a_g)
        if h[r][c] == 0:
            continue
        if h[r][c] < 0:
            h[r] = [-v for v in h[r]]
            U[r] = [-v for v in U[r]]
        p = h[r][c]
        for i in range(r):
            q = h[i][c] // p
            if q:
                h[i] = [hi - q * hr for hi, hr in zip(h[i], h[r])]
                U[i] = [ui - q * ur for ui, ur in zip(U[i], U[r])]
        r += 1
    return IntegerMatrix.from_rows(h, cols=n), IntegerMatrix.from_rows(U, cols=m)


# ---------------------------------------------------------------------------
# solving, kernels, images


def solve_integer(A: IntegerMatrix, b: Sequence[int]) -> tuple[int, ...] | None:
    """Return an integer solution of ``A x = b`` or ``None``.

    The solution is the one produced by the Smith decomposition of ``A`` with
    all free coordinates set to zero, so it is deterministic.
    """
    if len(b) != A.rows:
        raise ValueError(f"right-hand side has length {len(b)}, matrix has {A.rows} rows")
    return smith_normal_form(A).solve(b)


def solve_rational(A: IntegerMatrix, b: Sequence[int | Fraction]) -> tuple[Fraction, ...] | None:
    """Gauss-Jordan over the rationals; ``None`` when inconsistent."""
    m, n = A.rows, A.cols
    aug = [[Fraction(x) for x in A.row(i)] + [Fraction(b[i])] for i in range(m)]
    pivots = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, m) if aug[i][c] != 0), None)
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        inv = 1 / aug[r][c]
        aug[r] = [x * inv for x in aug[r]]
        for i in range(m):
            if i != r and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    if any(aug[i][n] != 0 for i in range(r, m)):
        return None
    x = [Fraction(0)] * n
    for i, c in enumerate(pivots):
        x[c] = aug[i][n]
    return tuple(x)


def kernel_basis(A: IntegerMatrix) -> IntegerMatrix:
    """Columns form a basis of ``{x in Z^n : A x = 0}``."""
    dec = smith_normal_form(A)
    return dec.V.select_cols(range(dec.rank, A.cols))


def image_basis(gens: IntegerMatrix) -> IntegerMatrix:
    """Columns form a basis of the lattice spanned by the columns of ``gens``.

    Read off the Smith form ``gens = U^-1 S V^-1``: the image is spanned by
    ``d_i`` times the first ``rank`` columns of ``U^-1``.  (The Hermite form
    would also do, but its entries blow up on tall relation matrices.)
    """
    dec = smith_normal_form(gens)
    d = dec.diagonal
    cols = [tuple(d[i] * v for v in dec.U_inv.col(i)) for i in range(dec.rank)]
    return IntegerMatrix.from_columns(cols, gens.rows) if cols else IntegerMatrix.zeros(gens.rows, 0)


def gcd_all(values: Iterable[int]) -> int:
    g = 0
    for v in values:
        g = gcd(g, v)
    return g

"""Linear algebra over Z/p^k with numpy.

Used where the exact engine would be too slow: bar cochain groups of small
cyclic groups quickly reach several hundred generators.  Over the local ring
Z/p^k every element is a unit times a power of p, so pivoting on an entry of
minimal valuation gives a Smith form without any gcd steps.  The modulus must
be small enough that products of two residues fit in int64.
"""

from __future__ import annotations

import numpy as np


def valuation(x: np.ndarray, p: int, k: int) -> np.ndarray:
    """p-adic valuation of residues mod p^k, with 0 mapped to ``k``."""
    v = np.zeros(x.shape, dtype=np.int64)
    q = 1
    for _ in range(k):
        q *= p
        v += (x % q == 0)
    return v


def smith_mod(A: np.ndarray, p: int, k: int, track: bool = True):
    """Diagonal valuations of ``A`` over ``Z/p^k`` and the column transform ``V``.

    Returns ``(vals, V)`` where ``vals[i]`` is the valuation of the i-th
    diagonal entry (``k`` for zero entries) for ``i < min(shape)`` and ``V``
    is invertible with ``U A V`` diagonal for some invertible ``U``.
    """
    q = p ** k
    A = np.array(A, dtype=np.int64) % q
    r, c = A.shape
    V = np.eye(c, dtype=np.int64) if track else None
    vals = []
    for t in range(min(r, c)):
        sub = A[t:, t:]
        if not sub.any():
            vals.extend([k] * (min(r, c) - t))
            break
        val = valuation(sub, p, k)
        flat = int(np.argmin(val))
        i, j = divmod(flat, sub.shape[1])
        i, j = i + t, j + t
        v = int(val.flat[flat])
        if i != t:
            A[[t, i]] = A[[i, t]]
        if j != t:
            A[:, [t, j]] = A[:, [j, t]]
            if track:
                V[:, [t, j]] = V[:, [j, t]]
        pv = p ** v
        unit = int(A[t, t]) // pv
        A[t] = (A[t] * pow(unit, -1, q)) % q  # pivot becomes p^v
        # clear column t below the pivot
        factors = A[t + 1:, t] // pv
        if factors.any():
            A[t + 1:] = (A[t + 1:] - np.outer(factors, A[t])) % q
        # clear row t right of the pivot
        factors = A[t, t + 1:] // pv
        if factors.any():
            A[:, t + 1:] = (A[:, t + 1:] - np.outer(A[:, t], factors)) % q
            if track:
                V[:, t + 1:] = (V[:, t + 1:] - np.outer(V[:, t], factors)) % q
        vals.append(v)
    return vals, V


def kernel_mod(A: np.ndarray, p: int, k: int) -> np.ndarray:
    """Columns generating ``{x in (Z/p^k)^n : A x = 0}``."""
    q = p ** k
    A = np.asarray(A, dtype=np.int64)
    n = A.shape[1]
    if A.shape[0] == 0:
        return np.eye(n, dtype=np.int64)
    vals, V = smith_mod(A, p, k)
    scale = np.ones(n, dtype=np.int64)
    for i, v in enumerate(vals):
        scale[i] = p ** (k - v) % q if v < k else 1
    return (V * scale[None, :]) % q


def log_size(gens: np.ndarray, p: int, k: int) -> int:
    """``log_p`` of the order of the subgroup generated by the columns of ``gens``."""
    gens = np.asarray(gens, dtype=np.int64)
    if gens.size == 0:
        return 0
    vals, _ = smith_mod(gens, p, k, track=False)
    return sum(k - v for v in vals)


def subquotient_factors(K: np.ndarray, L: np.ndarray, p: int, k: int) -> list[int]:
    """Invariant factors of ``K / L`` for column-generated ``L <= K <= (Z/p^k)^n``.

    Uses ``|p^i (K/L)| = |p^i K + L| / |L|``: the drop between consecutive
    ``i`` counts the cyclic factors of order exceeding ``p^i``.
    """
    q = p ** k
    K = np.asarray(K, dtype=np.int64) % q
    L = np.asarray(L, dtype=np.int64) % q
    base = log_size(L, p, k)
    sizes = []
    for i in range(k + 1):
        gens = np.concatenate([(K * p ** i) % q, L], axis=1)
        sizes.append(log_size(gens, p, k) - base)
    counts = [sizes[i] - sizes[i + 1] for i in range(k)]  # #{e > i}
    factors = []
    for i in range(k):
        exact = counts[i] - (counts[i + 1] if i + 1 < k else 0)  # #{e == i+1}
        factors += [p ** (i + 1)] * exact
    return sorted(factors)

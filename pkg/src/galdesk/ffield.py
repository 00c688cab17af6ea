"""Exact linear algebra over prime fields F_p.

Everything is dense numpy int64 reduced mod p.  Matrices are small (dims
rarely above a few hundred), so plain Gaussian elimination is fine.
Subspaces are represented by matrices whose *columns* are basis vectors.
"""

from __future__ import annotations

import numpy as np


def normalize(a, p: int) -> np.ndarray:
    return np.asarray(a, dtype=np.int64) % p


def eye(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)


def zeros(shape) -> np.ndarray:
    return np.zeros(shape, dtype=np.int64)


def mat_mul(a, b, p: int) -> np.ndarray:
    return (normalize(a, p) @ normalize(b, p)) % p


def mat_pow(a, k: int, p: int) -> np.ndarray:
    n = len(a)
    result = eye(n)
    base = normalize(a, p)
    while k:
        if k & 1:
            result = (result @ base) % p
        base = (base @ base) % p
        k >>= 1
    return result


def inv_scalar(x: int, p: int) -> int:
    x %= p
    if x == 0:
        raise ZeroDivisionError(f"0 is not invertible mod {p}")
    return pow(x, p - 2, p)


def rref(a, p: int):
    """Reduced row echelon form.  Returns (R, pivot_columns)."""
    r = normalize(a, p).copy()
    m, n = r.shape
    pivots = []
    row = 0
    for col in range(n):
        if row == m:
            break
        nz = np.nonzero(r[row:, col])[0]
        if nz.size == 0:
            continue
        best = row + nz[0]
        if best != row:
            r[[row, best]] = r[[best, row]]
        r[row] = (r[row] * inv_scalar(int(r[row, col]), p)) % p
        others = np.nonzero(r[:, col])[0]
        for i in others:
            if i != row:
                r[i] = (r[i] - r[i, col] * r[row]) % p
        pivots.append(col)
        row += 1
    return r, pivots


def rank(a, p: int) -> int:
    a = normalize(a, p)
    if a.size == 0:
        return 0
    return len(rref(a, p)[1])


def nullspace(a, p: int) -> np.ndarray:
    """Basis of the right kernel, as columns of an (n x k) matrix."""
    a = normalize(a, p)
    m, n = a.shape
    r, pivots = rref(a, p)
    free = [j for j in range(n) if j not in pivots]
    basis = zeros((n, len(free)))
    for idx, j in enumerate(free):
        basis[j, idx] = 1
        for row_i, piv in enumerate(pivots):
            basis[piv, idx] = (-r[row_i, j]) % p
    return basis


def solve(a, b, p: int):
    """One solution of A x = b, or None if inconsistent.  b may be a vector."""
    a = normalize(a, p)
    b = normalize(b, p)
    vec = b.ndim == 1
    if vec:
        b = b.reshape(-1, 1)
    m, n = a.shape
    aug = np.hstack([a, b])
    r, pivots = rref(aug, p)
    # Inconsistent iff some pivot lands in the augmented block.
    main_pivots = [c for c in pivots if c < n]
    if len(main_pivots) != len(pivots):
        return None
    x = zeros((n, b.shape[1]))
    for row_i, piv in enumerate(main_pivots):
        x[piv] = r[row_i, n:]
    return x[:, 0] if vec else x


def inv(a, p: int) -> np.ndarray:
    a = normalize(a, p)
    n = len(a)
    x = solve(a, eye(n), p)
    if x is None or rank(a, p) < n:
        raise ValueError("matrix is singular mod p")
    return x


def column_space(a, p: int) -> np.ndarray:
    """Column-span basis in RREF-canonical form (columns)."""
    a = normalize(a, p)
    r, pivots = rref(a.T, p)
    return r[: len(pivots)].T % p


def in_span(basis, v, p: int) -> bool:
    basis = normalize(basis, p)
    v = normalize(v, p)
    if basis.size == 0:
        return not v.any()
    return solve(basis, v, p) is not None


def span_contains(big, small, p: int) -> bool:
    small = normalize(small, p)
    return all(in_span(big, small[:, j], p) for j in range(small.shape[1]))


def sum_spans(a, b, p: int) -> np.ndarray:
    return column_space(np.hstack([normalize(a, p), normalize(b, p)]), p)


def intersect_spans(a, b, p: int) -> np.ndarray:
    """Basis of span(a) ∩ span(b)."""
    a = normalize(a, p)
    b = normalize(b, p)
    if a.size == 0 or b.size == 0:
        return zeros((a.shape[0], 0))
    k = nullspace(np.hstack([a, -b]), p)
    vecs = (a @ k[: a.shape[1]]) % p
    return column_space(vecs, p)


def annihilator(basis, pairing, p: int) -> np.ndarray:
    """{y : <x, y> = 0 for all x in span(basis)} for <x,y> = x^T P y.

    Returns a column basis inside the right-hand space of the pairing.
    """
    basis = normalize(basis, p)
    pairing = normalize(pairing, p)
    if basis.shape[1] == 0:
        return eye(pairing.shape[1])
    return nullspace((basis.T @ pairing) % p, p)


def extend_basis(sub, vectors, p: int) -> np.ndarray:
    """Columns of `vectors` that extend span(sub) to span(sub, vectors).

    Vectors are taken in order; the result is the greedy independent
    complement, which makes the choice deterministic.
    """
    sub = normalize(sub, p)
    vectors = normalize(vectors, p)
    current = sub
    chosen = []
    r = rank(current, p) if current.size else 0
    for j in range(vectors.shape[1]):
        cand = np.hstack([current, vectors[:, j : j + 1]])
        if rank(cand, p) > r:
            current = cand
            r += 1
            chosen.append(j)
    return vectors[:, chosen]


class QuotientSpace:
    """Quotient span(numerator)/span(denominator) with canonical coordinates."""

    def __init__(self, numerator, denominator, p: int):
        self.p = p
        self.num = normalize(numerator, p)
        self.den = normalize(denominator, p)
        if self.den.size and not span_contains(self.num, self.den, p):
            raise ValueError("denominator is not contained in numerator")
        self.reps = extend_basis(self.den, self.num, p)
        self.dim = self.reps.shape[1]

    def coords(self, v) -> np.ndarray:
        """Coordinates of [v] on the representative basis."""
        v = normalize(v, self.p)
        full = np.hstack([self.den, self.reps])
        x = solve(full, v, self.p)
        if x is None:
            raise ValueError("vector is not in the numerator span")
        return x[self.den.shape[1] :]

    def coords_matrix(self, vectors) -> np.ndarray:
        vectors = normalize(vectors, self.p)
        return np.column_stack(
            [self.coords(vectors[:, j]) for j in range(vectors.shape[1])]
        ) if vectors.shape[1] else zeros((self.dim, 0))


def random_matrix(rng, m: int, n: int, p: int) -> np.ndarray:
    return np.array([[rng.randrange(p) for _ in range(n)] for _ in range(m)], dtype=np.int64)


def random_invertible(rng, n: int, p: int) -> np.ndarray:
    while True:
        a = random_matrix(rng, n, n, p)
        if rank(a, p) == n:
            return a


def random_subspace(rng, n: int, dim: int, p: int) -> np.ndarray:
    """Random dim-dimensional subspace of F_p^n (column basis)."""
    if dim == 0:
        return zeros((n, 0))
    while True:
        a = random_matrix(rng, n, dim, p)
        if rank(a, p) == dim:
            return column_space(a, p)

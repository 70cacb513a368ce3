"""Exact integer and rational linear algebra.

Matrices are numpy arrays with ``dtype=object`` holding Python ints, so every
operation is arbitrary precision.  Nothing in this module touches floats.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Optional, Sequence

import numpy as np

__all__ = [
    "DimensionMismatch",
    "Inertia",
    "NotPrimitive",
    "NotSquare",
    "NotSymmetric",
    "determinant",
    "extend_primitive_to_basis",
    "identity",
    "imat",
    "ivec",
    "inertia",
    "integer_inverse",
    "is_unimodular",
    "smith_normal_form",
    "solve_integer_linear",
]


class NotSymmetric(ValueError):
    pass


class NotSquare(ValueError):
    pass


class NotPrimitive(ValueError):
    pass


class DimensionMismatch(ValueError):
    pass


def imat(rows, shape: Optional[tuple[int, int]] = None) -> np.ndarray:
    """Build an object-dtype integer matrix.

    ``shape`` is needed to disambiguate empty inputs such as a 3x0 matrix.
    """
    if isinstance(rows, np.ndarray) and rows.ndim == 2:
        out = np.empty(rows.shape, dtype=object)
        for idx, value in np.ndenumerate(rows):
            out[idx] = int(value)
        return out
    rows = [list(r) for r in rows]
    if shape is None:
        n = len(rows)
        m = len(rows[0]) if rows else 0
    else:
        n, m = shape
    if len(rows) != n or any(len(r) != m for r in rows):
        raise DimensionMismatch(f"ragged or mis-shaped matrix, expected {n}x{m}")
    out = np.empty((n, m), dtype=object)
    for i, r in enumerate(rows):
        for j, value in enumerate(r):
            out[i, j] = int(value)
    return out


def ivec(values: Iterable[int]) -> np.ndarray:
    values = [int(v) for v in values]
    out = np.empty(len(values), dtype=object)
    out[:] = values
    return out


def identity(n: int) -> np.ndarray:
    out = np.zeros((n, n), dtype=object)
    for i in range(n):
        out[i, i] = 1
    return out


def _rows(m) -> list[list[int]]:
    return [[int(x) for x in row] for row in np.asarray(m, dtype=object)]


def determinant(m) -> int:
    """Fraction-free (Bareiss) determinant.  The 0x0 determinant is 1."""
    a = imat(_rows(m)) if not isinstance(m, np.ndarray) or m.dtype != object else m.copy()
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise NotSquare("matrix is not square")
    n = a.shape[0]
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k, k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i, k] != 0), None)
            if swap is None:
                return 0
            a[[k, swap]] = a[[swap, k]]
            sign = -sign
        block = a[k + 1:, k + 1:] * a[k, k] - np.outer(a[k + 1:, k], a[k, k + 1:])
        a[k + 1:, k + 1:] = block // prev
        prev = a[k, k]
    return sign * int(a[n - 1, n - 1])


def is_unimodular(m) -> bool:
    m = np.asarray(m, dtype=object)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise NotSquare(f"expected a square matrix, got shape {m.shape}")
    return determinant(m) in (1, -1)


def integer_inverse(m) -> np.ndarray:
    """Inverse of a matrix that is invertible over the integers.

    Raises ValueError when the inverse is not integral.
    """
    a = _rows(m)
    n = len(a)
    if any(len(r) != n for r in a):
        raise NotSquare("matrix is not square")
    aug = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(a)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if piv is None:
            raise ValueError("matrix is singular")
        aug[col], aug[piv] = aug[piv], aug[col]
        p = aug[col][col]
        aug[col] = [x / p for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                factor = aug[r][col]
                aug[r] = [x - factor * y for x, y in zip(aug[r], aug[col])]
    inv = [row[n:] for row in aug]
    if any(x.denominator != 1 for row in inv for x in row):
        raise ValueError("matrix is not invertible over the integers")
    return imat([[int(x) for x in row] for row in inv], shape=(n, n))


def smith_normal_form(m) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Return (u, s, v) with u @ m @ v == s, u and v unimodular.

    ``s`` is diagonal with nonnegative entries d1 | d2 | ... .
    """
    a = _rows(m)
    m = np.asarray(m, dtype=object)
    nrows, ncols = m.shape if m.ndim == 2 else (len(a), 0)
    u = [[int(i == j) for j in range(nrows)] for i in range(nrows)]
    v = [[int(i == j) for j in range(ncols)] for i in range(ncols)]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, q):  # row dst -= q * row src
        a[dst] = [x - q * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x - q * y for x, y in zip(u[dst], u[src])]

    def add_col(src, dst, q):  # col dst -= q * col src
        for row in a:
            row[dst] -= q * row[src]
        for row in v:
            row[dst] -= q * row[src]

    for t in range(min(nrows, ncols)):
        while True:
            best = None
            for i in range(t, nrows):
                for j in range(t, ncols):
                    if a[i][j] != 0 and (best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                break
            swap_rows(t, best[0])
            swap_cols(t, best[1])
            p = a[t][t]
            dirty = False
            for i in range(t + 1, nrows):
                if a[i][t]:
                    add_row(t, i, a[i][t] // p)
                    dirty = dirty or a[i][t] != 0
            for j in range(t + 1, ncols):
                if a[t][j]:
                    add_col(t, j, a[t][j] // p)
                    dirty = dirty or a[t][j] != 0
            if dirty:
                continue
            # pivot must divide the remaining block
            bad = next(
                (i for i in range(t + 1, nrows) for j in range(t + 1, ncols) if a[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(bad, t, -1)
        if t < nrows and t < ncols and a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
    return (
        imat(u, shape=(nrows, nrows)),
        imat(a, shape=(nrows, ncols)),
        imat(v, shape=(ncols, ncols)),
    )


def solve_integer_linear(a, b: Sequence[int]) -> Optional[np.ndarray]:
    """Integer solution x of a @ x = b, or None if there is none."""
    a = np.asarray(a, dtype=object)
    b = [int(x) for x in b]
    if a.ndim != 2 or a.shape[0] != len(b):
        raise DimensionMismatch(f"matrix has {a.shape[0] if a.ndim == 2 else '?'} rows, rhs has {len(b)}")
    nrows, ncols = a.shape
    u, s, v = smith_normal_form(a)
    ub = u.dot(ivec(b)) if nrows else ivec([])
    y = [0] * ncols
    for i in range(nrows):
        d = s[i, i] if i < ncols else 0
        if d == 0:
            if ub[i] != 0:
                return None
        else:
            if ub[i] % d:
                return None
            y[i] = ub[i] // d
    return v.dot(ivec(y)) if ncols else ivec([])


def extend_primitive_to_basis(f: Sequence[int]) -> np.ndarray:
    """Unimodular matrix whose first column is ``f``.

    When ``f`` has an entry equal to +-1 the other columns are standard basis
    vectors in their original order, so the extension of a coordinate vector
    is a permutation.
    """
    f = [int(x) for x in f]
    n = len(f)
    if not any(f):
        raise NotPrimitive("zero vector is not primitive")
    g = 0
    for x in f:
        g = gcd(g, x)
    if g != 1:
        raise NotPrimitive(f"entries of {f} have gcd {g}")
    unit = next((i for i, x in enumerate(f) if abs(x) == 1), None)
    if unit is not None:
        cols = [f] + [[int(i == j) for i in range(n)] for j in range(n) if j != unit]
        return imat(cols, shape=(n, n)).T.copy()
    # u f v = e1 with v = [+-1], so f = u^-1 e1 v
    u, s, v = smith_normal_form(imat([[x] for x in f], shape=(n, 1)))
    basis = integer_inverse(u)
    basis[:, 0] = basis[:, 0] * v[0, 0]
    return basis


@dataclass(frozen=True)
class Inertia:
    n_plus: int
    n_minus: int
    n_zero: int

    @property
    def signature(self) -> int:
        return self.n_plus - self.n_minus

    @property
    def rank(self) -> int:
        return self.n_plus + self.n_minus + self.n_zero


def inertia(g) -> Inertia:
    """Sylvester inertia by exact symmetric elimination.

    Zero diagonals are handled with 2x2 pivot blocks [[0, a], [a, 0]], which
    always contribute one positive and one negative direction.
    """
    g = np.asarray(g, dtype=object)
    if g.ndim != 2 or g.shape[0] != g.shape[1]:
        raise NotSquare(f"expected a square matrix, got shape {g.shape}")
    if any(g[i, j] != g[j, i] for i in range(g.shape[0]) for j in range(i)):
        raise NotSymmetric("matrix is not symmetric")
    a = [[Fraction(int(x)) for x in row] for row in g]
    plus = minus = zero = 0
    while a:
        n = len(a)
        piv = next((i for i in range(n) if a[i][i] != 0), None)
        if piv is not None:
            p = a[piv][piv]
            if p > 0:
                plus += 1
            else:
                minus += 1
            rest = [i for i in range(n) if i != piv]
            a = [[a[i][j] - a[i][piv] * a[piv][j] / p for j in rest] for i in rest]
            continue
        pair = next(((i, j) for i in range(n) for j in range(i + 1, n) if a[i][j] != 0), None)
        if pair is None:
            zero += n
            break
        i0, j0 = pair
        plus += 1
        minus += 1
        # block inverse of [[0, c], [c, 0]] is [[0, 1/c], [1/c, 0]]
        c = a[i0][j0]
        rest = [i for i in range(n) if i not in pair]
        a = [
            [a[i][j] - (a[i][i0] * a[j0][j] + a[i][j0] * a[i0][j]) / c for j in rest]
            for i in rest
        ]
    return Inertia(plus, minus, zero)


_INT64_SAFE = 2**62


def _max_abs(a: np.ndarray) -> int:
    if a.size == 0:
        return 0
    return max(abs(int(a.max())), abs(int(a.min())))


def exact_tensordot(a, b, axes) -> np.ndarray:
    """``np.tensordot`` on object arrays, exact.

    Uses machine integers when the entry bound proves every partial sum fits
    in int64, otherwise falls back to Python ints.
    """
    a = np.asarray(a, dtype=object)
    b = np.asarray(b, dtype=object)
    ax_a, ax_b = axes
    terms = 1
    for i in ax_a:
        terms *= a.shape[i]
    if terms * _max_abs(a) * _max_abs(b) < _INT64_SAFE:
        out = np.tensordot(a.astype(np.int64), b.astype(np.int64), axes=axes)
        return out.astype(object)
    return np.tensordot(a, b, axes=axes)

"""Independent reference implementations used only by the tests.

They share no code with the package: inertia comes from Sturm sequences of
the characteristic polynomial, isometries and automorphisms from brute-force
enumeration of bounded integer matrices.
"""

from __future__ import annotations

import itertools
import random

import numpy as np
import sympy


def _sign_changes(values) -> int:
    signs = [v > 0 for v in values if v != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def _roots_in(poly: sympy.Poly, lo, hi) -> int:
    """Distinct real roots of a squarefree polynomial in (lo, hi], via Sturm."""
    seq = sympy.sturm(poly)
    return _sign_changes([p.eval(lo) for p in seq]) - _sign_changes([p.eval(hi) for p in seq])


def sturm_inertia(gram) -> tuple[int, int, int]:
    """(n_plus, n_minus, n_zero) counted with multiplicity."""
    n = len(gram)
    if n == 0:
        return (0, 0, 0)
    x = sympy.Symbol("x")
    cp = sympy.Matrix(gram).charpoly(x)
    coeffs = [int(c) for c in cp.all_coeffs()]
    bound = 1 + max(abs(c) for c in coeffs)  # Cauchy bound, leading coefficient 1
    plus = minus = zero = 0
    _, factors = sympy.Poly(cp.as_expr(), x).sqf_list()
    for factor, mult in factors:
        # roots in (0, bound] and (-bound, 0]; 0 itself is handled separately
        z = 1 if factor.eval(0) == 0 else 0
        pos = _roots_in(factor, 0, bound)
        neg = _roots_in(factor, -bound, 0) - z
        plus += pos * mult
        minus += neg * mult
        zero += z * mult
    assert plus + minus + zero == n
    return plus, minus, zero


def _candidate_columns(gram, bound: int):
    """Vectors v with |v_i| <= bound grouped by their norm v.G.v."""
    g = np.asarray(gram, dtype=object)
    n = g.shape[0]
    out: dict = {}
    for v in itertools.product(range(-bound, bound + 1), repeat=n):
        a = np.array(v, dtype=object)
        out.setdefault(int(a.dot(g).dot(a)), []).append(a)
    return out


def brute_isometries(g1, g2, bound: int):
    """All P with entries in [-bound, bound] and P^T g1 P = g2."""
    g1 = np.asarray(g1, dtype=object)
    g2 = np.asarray(g2, dtype=object)
    n = g1.shape[0]
    if n == 0:
        return [np.zeros((0, 0), dtype=object)]
    cands = _candidate_columns(g1, bound)
    found = []

    def rec(cols):
        j = len(cols)
        if j == n:
            p = np.array(cols, dtype=object).T
            found.append(p)
            return
        for v in cands.get(int(g2[j, j]), []):
            if all(int(c.dot(g1).dot(v)) == int(g2[i, j]) for i, c in enumerate(cols)):
                rec(cols + [v])

    rec([])
    return found


def brute_automorphism_count(gram, bound: int) -> int:
    return len(brute_isometries(gram, gram, bound))


def random_unimodular(n: int, rng: random.Random, max_entry: int = 2, steps: int = 12) -> np.ndarray:
    """Random integer matrix with determinant +-1 and entries bounded by max_entry.

    Built from signed permutations and elementary row additions, each kept
    only if it respects the entry bound.
    """
    perm = list(range(n))
    rng.shuffle(perm)
    p = np.zeros((n, n), dtype=object)
    for i, j in enumerate(perm):
        p[i, j] = rng.choice((1, -1))
    if n < 2:
        return p
    for _ in range(steps):
        i, j = rng.sample(range(n), 2)
        c = rng.choice((1, -1))
        trial = p.copy()
        trial[i] = trial[i] + c * trial[j]
        if max(abs(int(x)) for x in trial.flat) <= max_entry:
            p = trial
    return p


def random_unimodular_form(n: int, rng: random.Random) -> np.ndarray:
    """P^T D P for a random diagonal +-1 form D and random unimodular P."""
    d = np.diag([rng.choice((1, -1)) for _ in range(n)]).astype(object)
    p = random_unimodular(n, rng, max_entry=3)
    return p.T.dot(d).dot(p)

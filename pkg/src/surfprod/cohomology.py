"""Finite models of graded-commutative integral cohomology rings.

A ring stores, for every degree pair (k, l) with k + l <= top degree, a dense
tensor ``cup[k, l]`` of shape ``(b_k, b_l, b_{k+l})``: entry ``[i, j]`` is
the coefficient vector of ``e_i ∪ e_j``.  Missing pairs are zero.  Top-degree
classes are evaluated on the fundamental class through ``eval``.

Basis conventions of :func:`kunneth_product` for a form of rank r and a
genus-g surface (a_1..a_g, b_1..b_g spanning H^1(F)):

====== ==================================================================
degree basis
====== ==================================================================
0      1
1      a_1..a_g, b_1..b_g                         (pulled back from F)
2      e_1..e_r, f                               (M classes, then [F])
3      a_k ∪ e_i at index k*r + i                 (k over H^1, i over H^2(M))
4      G, e_1 ∪ f, .., e_r ∪ f                   (G the top class of M)
5      G ∪ a_k
6      G ∪ f, evaluating to 1
====== ==================================================================
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from math import gcd
from typing import Optional, Sequence

import numpy as np

from .exact_linalg import (
    NotPrimitive,
    determinant,
    exact_tensordot,
    extend_primitive_to_basis,
    identity,
    imat,
    integer_inverse,
    ivec,
)
from .forms import IntegralForm, NotUnimodular, characteristic_vector

TOP = 6


class GenusZero(ValueError):
    pass


class TorsionPresent(ValueError):
    pass


class IllDefined(ValueError):
    pass


def zeros3(a: int, b: int, c: int) -> np.ndarray:
    return np.zeros((a, b, c), dtype=object)


@dataclass(frozen=True, eq=False)
class GradedRing:
    betti: tuple[int, ...]
    cup: dict = field(default_factory=dict)
    eval: np.ndarray = None
    torsion: tuple[tuple[int, ...], ...] = None
    dim: int = TOP

    def __post_init__(self):
        betti = tuple(int(b) for b in self.betti)
        if len(betti) != TOP + 1:
            raise ValueError(f"need {TOP + 1} Betti numbers, got {len(betti)}")
        object.__setattr__(self, "betti", betti)
        if self.torsion is None:
            object.__setattr__(self, "torsion", tuple(() for _ in betti))
        ev = ivec([]) if self.eval is None else ivec(self.eval)
        if len(ev) != betti[self.dim]:
            raise ValueError(f"eval has length {len(ev)}, top Betti number is {betti[self.dim]}")
        object.__setattr__(self, "eval", ev)
        cup = {}
        for (k, l), t in self.cup.items():
            t = np.asarray(t, dtype=object)
            if k + l > self.dim:
                raise ValueError(f"cup({k},{l}) exceeds the top degree")
            want = (betti[k], betti[l], betti[k + l])
            if t.shape != want:
                raise ValueError(f"cup({k},{l}) has shape {t.shape}, expected {want}")
            cup[k, l] = t
        object.__setattr__(self, "cup", cup)

    def product(self, k: int, l: int) -> np.ndarray:
        t = self.cup.get((k, l))
        if t is None:
            return zeros3(self.betti[k], self.betti[l], self.betti[k + l])
        return t

    def multiply(self, k: int, l: int, x, y) -> np.ndarray:
        """Cup product of a degree-k vector with a degree-l vector."""
        t = self.product(k, l)
        x = np.asarray(x, dtype=object)
        y = np.asarray(y, dtype=object)
        if t.shape[2] == 0:
            return ivec([])
        return exact_tensordot(exact_tensordot(x, t, axes=([0], [0])), y, axes=([0], [0]))

    def evaluate(self, x) -> int:
        return int(np.asarray(x, dtype=object).dot(self.eval)) if len(self.eval) else 0

    @property
    def euler_characteristic(self) -> int:
        return sum((-1) ** k * b for k, b in enumerate(self.betti))

    @property
    def has_torsion(self) -> bool:
        return any(d > 1 for ds in self.torsion for d in ds)


@dataclass(frozen=True, eq=False)
class ManifoldData:
    """Recognition input: cohomology ring plus the surface and bundle data.

    ``u1`` has columns u*(a_1), .., u*(b_g) in H^1(N); ``p1[i]`` is
    <e_i ∪ p1(N), [N]>; ``action`` holds one r' x r' matrix per generator of
    pi_1(F) describing its action on H_2 of the universal cover.
    """

    ring: GradedRing
    genus: int
    u1: np.ndarray
    f: np.ndarray
    w2: np.ndarray
    p1: np.ndarray
    action: tuple
    action_rank: int

    def __post_init__(self):
        b1, b2 = self.ring.betti[1], self.ring.betti[2]
        object.__setattr__(self, "u1", imat(self.u1, shape=(b1, 2 * self.genus)) if not isinstance(self.u1, np.ndarray) else self.u1)
        if self.u1.shape != (b1, 2 * self.genus):
            raise ValueError(f"u1 has shape {self.u1.shape}, expected {(b1, 2 * self.genus)}")
        for name in ("f", "w2", "p1"):
            v = ivec(getattr(self, name))
            if len(v) != b2:
                raise ValueError(f"{name} has length {len(v)}, expected b2 = {b2}")
            object.__setattr__(self, name, v)
        if any(x not in (0, 1) for x in self.w2):
            raise ValueError("w2 entries must be 0 or 1")
        n = self.action_rank
        mats = tuple(
            m if isinstance(m, np.ndarray) else imat(m, shape=(n, n)) for m in self.action
        )
        for m in mats:
            if m.shape != (n, n):
                raise ValueError(f"action matrix has shape {m.shape}, expected {(n, n)}")
        object.__setattr__(self, "action", mats)

    @property
    def is_spin(self) -> bool:
        return not any(self.w2)


@dataclass(frozen=True, eq=False)
class QuotientData:
    """H^2 modulo f: ``projection`` (r x b2) and ``lift`` (b2 x r)."""

    basis_change: np.ndarray
    projection: np.ndarray
    lift: np.ndarray

    @property
    def rank(self) -> int:
        return self.lift.shape[1]


# -- validation ------------------------------------------------------------


def _violations_commutativity(r: GradedRing) -> list[str]:
    out = []
    for k in range(r.dim + 1):
        for l in range(k, r.dim + 1 - k):
            a = r.product(k, l)
            sign = -1 if (k * l) % 2 else 1
            swapped = r.product(l, k).transpose(1, 0, 2)
            for i, j in np.argwhere((swapped != sign * a).any(axis=2)):
                if k == l and j < i:
                    continue
                out.append(f"commutativity: cup({l},{k})[{j},{i}] != {sign:+d} * cup({k},{l})[{i},{j}]")
    return out


def _violations_associativity(r: GradedRing) -> list[str]:
    out = []
    d = r.dim
    for p in range(1, d + 1):
        for q in range(1, d + 1 - p):
            for s in range(1, d + 1 - p - q):
                if 0 in (r.betti[p], r.betti[q], r.betti[s], r.betti[p + q + s]):
                    continue
                # (x y) z  and  x (y z), both indexed [i, j, k, out]
                left = exact_tensordot(r.product(p, q), r.product(p + q, s), axes=([2], [0]))
                right = exact_tensordot(r.product(q, s), r.product(p, q + s), axes=([2], [1]))
                right = right.transpose(2, 0, 1, 3)
                bad = np.argwhere((left != right).any(axis=3))
                for i, j, k in bad:
                    out.append(f"associativity: degrees ({p},{q},{s}) at basis ({i},{j},{k})")
    return out


def validate_ring(r: GradedRing) -> list[str]:
    """Names of violated ring axioms, each with witnessing basis indices."""
    out = []
    if r.betti[0] != 1:
        out.append(f"unit: b0 = {r.betti[0]}, expected 1")
    else:
        for l in range(r.dim + 1):
            for name, t in (("left", r.product(0, l)[0]), ("right", r.product(l, 0)[:, 0])):
                eye = identity(r.betti[l])
                for i in range(r.betti[l]):
                    if not np.array_equal(t[i], eye[i]):
                        out.append(f"unit: {name} multiplication by 1 moves basis {i} of degree {l}")
    out += _violations_commutativity(r)
    out += _violations_associativity(r)
    if r.betti[r.dim] != 1:
        out.append(f"orientation: top Betti number is {r.betti[r.dim]}, expected 1")
    elif abs(int(r.eval[0])) != 1:
        out.append(f"orientation: eval {int(r.eval[0])} is not surjective onto Z")
    for k, ds in enumerate(r.torsion):
        if any(d < 2 for d in ds):
            out.append(f"torsion: degree {k} invariant factors must be >= 2, got {list(ds)}")
        if any(ds[i + 1] % ds[i] for i in range(len(ds) - 1) if ds[i] > 0):
            out.append(f"torsion: degree {k} invariant factors {list(ds)} do not form a divisor chain")
    return out


# -- constructions ---------------------------------------------------------


def symplectic(g: int) -> np.ndarray:
    """omega(a_i, b_i) = 1 = -omega(b_i, a_i) in the basis a_1..a_g, b_1..b_g."""
    w = np.zeros((2 * g, 2 * g), dtype=object)
    for i in range(g):
        w[i, g + i] = 1
        w[g + i, i] = -1
    return w


def _unit_tensors(betti) -> dict:
    cup = {}
    for l in range(len(betti)):
        eye = identity(betti[l])
        cup[0, l] = eye.reshape(1, betti[l], betti[l])
        cup[l, 0] = eye.reshape(betti[l], 1, betti[l])
    return cup


def surface_ring(g: int) -> GradedRing:
    if g < 1:
        raise GenusZero("surfaces of genus 0 are excluded")
    betti = (1, 2 * g, 1, 0, 0, 0, 0)
    cup = {k: v for k, v in _unit_tensors(betti).items() if sum(k) <= 2}
    cup[1, 1] = symplectic(g).reshape(2 * g, 2 * g, 1)
    return GradedRing(betti, cup, ivec([1]), dim=2)


def product_ring(gram, g: int) -> GradedRing:
    """Cohomology ring of X x F for a 4-dimensional algebra X with pairing gram.

    Ring axioms hold for any symmetric ``gram``; duality needs it unimodular.
    """
    s = np.asarray(gram, dtype=object)
    r = s.shape[0]
    n1 = 2 * g
    betti = (1, n1, r + 1, n1 * r, r + 1, n1, 1)
    w = symplectic(g)
    cup = _unit_tensors(betti)
    f = r  # index of [F] in degree 2

    def c3(k, i):
        return k * r + i

    t = zeros3(n1, n1, r + 1)
    t[:, :, f] = w
    cup[1, 1] = t

    t12 = zeros3(n1, r + 1, n1 * r)
    for k in range(n1):
        for i in range(r):
            t12[k, i, c3(k, i)] = 1
    cup[1, 2] = t12
    cup[2, 1] = t12.transpose(1, 0, 2).copy()

    t22 = zeros3(r + 1, r + 1, r + 1)
    for i in range(r):
        for j in range(r):
            t22[i, j, 0] = s[i, j]
        t22[i, f, 1 + i] = 1
        t22[f, i, 1 + i] = 1
    cup[2, 2] = t22

    t13 = zeros3(n1, n1 * r, r + 1)
    for k in range(n1):
        for l in range(n1):
            if w[k, l]:
                for i in range(r):
                    t13[k, c3(l, i), 1 + i] = w[k, l]
    cup[1, 3] = t13
    cup[3, 1] = -t13.transpose(1, 0, 2)

    t14 = zeros3(n1, r + 1, n1)
    for k in range(n1):
        t14[k, 0, k] = 1
    cup[1, 4] = t14
    cup[4, 1] = t14.transpose(1, 0, 2).copy()

    t23 = zeros3(r + 1, n1 * r, n1)
    for j in range(r):
        for k in range(n1):
            for i in range(r):
                t23[j, c3(k, i), k] = s[i, j]
    cup[2, 3] = t23
    cup[3, 2] = t23.transpose(1, 0, 2).copy()

    t33 = zeros3(n1 * r, n1 * r, 1)
    for k in range(n1):
        for l in range(n1):
            if w[k, l]:
                for i in range(r):
                    for j in range(r):
                        t33[c3(k, i), c3(l, j), 0] = s[i, j] * w[k, l]
    cup[3, 3] = t33

    t24 = zeros3(r + 1, r + 1, 1)
    for i in range(r):
        for j in range(r):
            t24[i, 1 + j, 0] = s[i, j]
    t24[f, 0, 0] = 1
    cup[2, 4] = t24
    cup[4, 2] = t24.transpose(1, 0, 2).copy()

    t15 = zeros3(n1, n1, 1)
    t15[:, :, 0] = w
    cup[1, 5] = t15
    cup[5, 1] = -t15.transpose(1, 0, 2)
    return GradedRing(betti, cup, ivec([1]))


def product_data(gram, g: int, w2_lattice, signature: int) -> ManifoldData:
    ring = product_ring(gram, g)
    r = ring.betti[2] - 1
    f = [0] * r + [1]
    return ManifoldData(
        ring=ring,
        genus=g,
        u1=identity(2 * g),
        f=f,
        w2=list(w2_lattice) + [0],
        p1=[0] * r + [3 * signature],
        action=tuple(identity(r) for _ in range(2 * g)),
        action_rank=r,
    )


def kunneth_product(s: IntegralForm, g: int) -> ManifoldData:
    """Recognition data of M x F, M realising the unimodular form ``s``."""
    if not s.is_unimodular:
        raise NotUnimodular(f"determinant is {s.determinant}")
    if g < 1:
        raise GenusZero("surfaces of genus 0 are excluded")
    return product_data(s.gram, g, characteristic_vector(s), s.signature)


def quotient_by_f(ring: GradedRing, f) -> QuotientData:
    f = [int(x) for x in f]
    if len(f) != ring.betti[2]:
        raise ValueError(f"f has length {len(f)}, expected {ring.betti[2]}")
    basis = extend_primitive_to_basis(f)
    inv = integer_inverse(basis)
    return QuotientData(basis, inv[1:, :].copy(), basis[:, 1:].copy())


def trilinear_h2(ring: GradedRing) -> np.ndarray:
    """T[x, y, z] = <x ∪ y ∪ z, [N]> on the H^2 basis."""
    b2 = ring.betti[2]
    if b2 == 0:
        return zeros3(0, 0, 0)
    xy = ring.product(2, 2)
    top = exact_tensordot(ring.product(4, 2), ring.eval, axes=([2], [0]))  # (b4, b2)
    return exact_tensordot(xy, top, axes=([2], [0]))


def triple_form(ring: GradedRing, f, q: QuotientData) -> IntegralForm:
    f = ivec(f)
    t = trilinear_h2(ring)
    ff = exact_tensordot(exact_tensordot(t, f, axes=([0], [0])), f, axes=([0], [0]))
    bad = [i for i, x in enumerate(ff) if x != 0]
    if bad:
        raise IllDefined(f"<f ∪ f ∪ x, [N]> = {int(ff[bad[0]])} for basis x = {bad[0]}")
    fx = exact_tensordot(t, f, axes=([0], [0]))  # (b2, b2)
    return IntegralForm(q.lift.T.dot(fx).dot(q.lift))


def poincare_pairing(ring: GradedRing, k: int) -> np.ndarray:
    d = ring.dim
    if any(x > 1 for x in ring.torsion[k] + ring.torsion[d - k]):
        raise TorsionPresent(f"torsion in degree {k} or {d - k}")
    t = ring.product(k, d - k)
    if t.shape[0] == 0 or t.shape[1] == 0:
        return np.zeros(t.shape[:2], dtype=object)
    return exact_tensordot(t, ring.eval, axes=([2], [0]))


# -- basis changes ---------------------------------------------------------


def change_ring_basis(ring: GradedRing, degree: int, p) -> GradedRing:
    """Express the ring in the degree-``degree`` basis given by the columns of p."""
    p = np.asarray(p, dtype=object)
    pinv = integer_inverse(p)
    cup = {}
    for (k, l), t in ring.cup.items():
        if k == degree:
            t = exact_tensordot(p, t, axes=([0], [0]))
        if l == degree:
            t = exact_tensordot(p, t, axes=([0], [1])).transpose(1, 0, 2)
        if k + l == degree:
            t = exact_tensordot(t, pinv, axes=([2], [1]))
        cup[k, l] = t
    ev = ring.eval
    if degree == ring.dim:
        ev = p.T.dot(ev)
    return GradedRing(ring.betti, cup, ev, ring.torsion, ring.dim)


def change_basis(d: ManifoldData, degree: int, p) -> ManifoldData:
    """Re-express recognition data in a new basis of H^degree(N)."""
    p = np.asarray(p, dtype=object)
    pinv = integer_inverse(p)
    ring = change_ring_basis(d.ring, degree, p)
    kw = {}
    if degree == 1:
        kw["u1"] = pinv.dot(d.u1)
    if degree == 2:
        kw["f"] = pinv.dot(d.f)
        kw["w2"] = [int(x) % 2 for x in pinv.dot(d.w2)]
        kw["p1"] = p.T.dot(d.p1)
    return replace(d, ring=ring, **kw)


def ring_map_defects(src: GradedRing, dst: GradedRing, maps: Sequence[np.ndarray], limit: int = 20) -> list[str]:
    """Failures of ``maps`` (columns = images) to be a graded ring isomorphism.

    Checks shapes, invertibility over Z in each degree and multiplicativity on
    every pair of basis classes.  Orientation is not checked here.
    """
    out = []
    for k in range(src.dim + 1):
        m = maps[k]
        if m.shape != (dst.betti[k], src.betti[k]):
            out.append(f"degree {k}: map has shape {m.shape}, ranks are {src.betti[k]} -> {dst.betti[k]}")
        elif determinant(m) not in (1, -1):
            out.append(f"degree {k}: map is not invertible over Z (det {determinant(m)})")
    if out:
        return out
    for k in range(src.dim + 1):
        for l in range(src.dim + 1 - k):
            a = src.product(k, l)
            b = dst.product(k, l)
            if 0 in a.shape:
                continue
            lhs = exact_tensordot(a, maps[k + l], axes=([2], [1]))
            rhs = exact_tensordot(exact_tensordot(maps[k], b, axes=([0], [0])), maps[l], axes=([1], [0]))
            rhs = rhs.transpose(0, 2, 1)
            for i, j in np.argwhere((lhs != rhs).any(axis=2))[:limit]:
                out.append(f"multiplicativity: degrees ({k},{l}) at basis ({i},{j})")
    return out


def primitive(v) -> bool:
    g = 0
    for x in v:
        g = gcd(g, int(x))
    return g == 1

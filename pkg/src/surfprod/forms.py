"""Unimodular integral symmetric bilinear forms.

Covers invariants and classification, characteristic vectors, and
isometry / automorphism search.  Definite forms are searched completely by
backtracking over short vectors; indefinite forms only within an entry bound.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterator, Optional, Sequence, Union

import numpy as np

from .exact_linalg import (
    Inertia,
    NotSymmetric,
    determinant,
    identity,
    imat,
    inertia,
    integer_inverse,
)

DEFAULT_BOUND = 3

# above this many candidate vectors the bounded indefinite search falls back
# to reflections in small vectors
MAX_BOUNDED_CANDIDATES = 200_000


class NotUnimodular(ValueError):
    pass


class EvenSignatureViolation(ValueError):
    pass


class NotAnIsometry(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class IntegralForm:
    gram: np.ndarray

    def __post_init__(self):
        g = imat(self.gram) if not (isinstance(self.gram, np.ndarray) and self.gram.dtype == object) else self.gram
        if g.ndim != 2 or g.shape[0] != g.shape[1]:
            raise ValueError(f"Gram matrix must be square, got shape {g.shape}")
        if any(g[i, j] != g[j, i] for i in range(g.shape[0]) for j in range(i)):
            raise NotSymmetric("Gram matrix is not symmetric")
        object.__setattr__(self, "gram", g)

    @classmethod
    def from_rows(cls, rows, rank: Optional[int] = None) -> "IntegralForm":
        n = len(rows) if rank is None else rank
        return cls(imat(rows, shape=(n, n)))

    @property
    def rank(self) -> int:
        return self.gram.shape[0]

    @cached_property
    def determinant(self) -> int:
        return determinant(self.gram)

    @cached_property
    def inertia(self) -> Inertia:
        return inertia(self.gram)

    @property
    def signature(self) -> int:
        return self.inertia.signature

    @property
    def is_unimodular(self) -> bool:
        return self.determinant in (1, -1)

    @property
    def is_even(self) -> bool:
        return all(self.gram[i, i] % 2 == 0 for i in range(self.rank))

    @property
    def parity(self) -> str:
        return "even" if self.is_even else "odd"

    @property
    def is_definite(self) -> bool:
        n = self.rank
        return n > 0 and (self.inertia.n_plus == n or self.inertia.n_minus == n)

    def pair(self, x, y) -> int:
        return int(np.asarray(x, dtype=object).dot(self.gram).dot(np.asarray(y, dtype=object)))

    def __eq__(self, other):
        return isinstance(other, IntegralForm) and np.array_equal(self.gram, other.gram)

    def __hash__(self):
        return hash(tuple(map(tuple, self.gram)))

    def __repr__(self):
        return f"IntegralForm({[list(map(int, r)) for r in self.gram]})"

    def transform(self, p) -> "IntegralForm":
        p = np.asarray(p, dtype=object)
        return IntegralForm(p.T.dot(self.gram).dot(p))

    def __neg__(self):
        return IntegralForm(-self.gram)


def _require_unimodular(f: IntegralForm) -> None:
    if not f.is_unimodular:
        raise NotUnimodular(f"determinant is {f.determinant}, not +-1")


# -- standard forms --------------------------------------------------------

# E8 Dynkin diagram: chain 0-1-2-3-4-5-6 with node 7 attached to node 4
_E8_EDGES = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (4, 7)]


def e8_gram() -> np.ndarray:
    g = np.zeros((8, 8), dtype=object)
    for i in range(8):
        g[i, i] = 2
    for i, j in _E8_EDGES:
        g[i, j] = g[j, i] = -1
    return g


def direct_sum(*forms: IntegralForm) -> IntegralForm:
    n = sum(f.rank for f in forms)
    g = np.zeros((n, n), dtype=object)
    at = 0
    for f in forms:
        g[at:at + f.rank, at:at + f.rank] = f.gram
        at += f.rank
    return IntegralForm(g)


def empty_form() -> IntegralForm:
    return IntegralForm(np.zeros((0, 0), dtype=object))


_NAMED = {
    "<1>": lambda: IntegralForm.from_rows([[1]]),
    "<-1>": lambda: IntegralForm.from_rows([[-1]]),
    "H": lambda: IntegralForm.from_rows([[0, 1], [1, 0]]),
    "-H": lambda: IntegralForm.from_rows([[0, -1], [-1, 0]]),
    "E8": lambda: IntegralForm(e8_gram()),
    "-E8": lambda: IntegralForm(-e8_gram()),
    "0": empty_form,
    "EMPTY": empty_form,
}


def parse_form_spec(spec: str) -> IntegralForm:
    """Parse a named composition such as ``-E8+-E8+H+H+H`` or ``<1>⊕<-1>``.

    Summands may carry a multiplicity prefix, e.g. ``2E8`` or ``3H``.
    ``<n>`` denotes the rank-one form with Gram ``[n]``.
    """
    spec = spec.replace("⊕", "+").replace(" ", "")
    if not spec:
        raise ValueError("empty form specification")
    summands = []
    for token in spec.split("+"):
        if not token:
            raise ValueError(f"bad form specification {spec!r}")
        m = re.fullmatch(r"(\d+)\*?(.+)", token)
        count, name = (int(m.group(1)), m.group(2)) if m and not token.startswith("<") else (1, token)
        key = name.upper() if name.upper() in ("EMPTY", "E8", "-E8", "H", "-H") else name
        if key in _NAMED:
            summands.extend(_NAMED[key]() for _ in range(count))
            continue
        m = re.fullmatch(r"<(-?\d+)>", name)
        if m is None:
            raise ValueError(f"unknown form summand {name!r}")
        summands.extend(IntegralForm.from_rows([[int(m.group(1))]]) for _ in range(count))
    return direct_sum(*summands)


# -- classification --------------------------------------------------------


@dataclass(frozen=True, eq=False)
class FormClass:
    """Isomorphism class of a unimodular form.

    ``kind`` is one of ``empty``, ``odd-indefinite`` (params p, q meaning
    p<1> + q<-1>), ``even-indefinite`` (params a, b meaning a E8 + b H, with
    a negative for -E8 summands) or ``definite`` (``gram`` is a
    representative).
    """

    kind: str
    rank: int
    signature: int
    parity: str
    params: tuple = ()
    gram: Optional[np.ndarray] = field(default=None, repr=False)

    @property
    def name(self) -> str:
        if self.kind == "empty":
            return "Empty"
        if self.kind == "odd-indefinite":
            return "Odd-indefinite({},{})".format(*self.params)
        if self.kind == "even-indefinite":
            return "Even-indefinite({},{})".format(*self.params)
        sign = "positive" if self.signature > 0 else "negative"
        return f"Definite({sign},{self.parity},rank={self.rank})"

    def __str__(self):
        return self.name

    def __eq__(self, other):
        if not isinstance(other, FormClass):
            return NotImplemented
        same = (self.kind, self.rank, self.signature, self.parity, self.params) == (
            other.kind, other.rank, other.signature, other.parity, other.params)
        if self.kind == "definite" and same:
            # the stored Gram is only a representative of the isometry class
            a, b = IntegralForm(self.gram), IntegralForm(other.gram)
            return a == b or isinstance(isometry(a, b), IsometryMap)
        return same

    def __hash__(self):
        return hash((self.kind, self.rank, self.signature, self.parity, self.params))


def classify_unimodular(f: IntegralForm) -> FormClass:
    _require_unimodular(f)
    r, sig, parity = f.rank, f.signature, f.parity
    if r == 0:
        return FormClass("empty", 0, 0, "even")
    if parity == "even" and sig % 8:
        raise EvenSignatureViolation(f"even unimodular form with signature {sig}")
    if f.is_definite:
        return FormClass("definite", r, sig, parity, gram=f.gram.copy())
    if parity == "odd":
        return FormClass("odd-indefinite", r, sig, parity, (f.inertia.n_plus, f.inertia.n_minus))
    return FormClass("even-indefinite", r, sig, parity, (sig // 8, (r - abs(sig)) // 2))


def characteristic_vector(f: IntegralForm) -> tuple[int, ...]:
    """The unique v mod 2 with f(v, x) = f(x, x) mod 2 for all x."""
    _require_unimodular(f)
    n = f.rank
    rows = [[int(f.gram[i, j]) % 2 for j in range(n)] + [int(f.gram[i, i]) % 2] for i in range(n)]
    # Gauss-Jordan over GF(2); det odd so every column gets a pivot
    for col in range(n):
        piv = next(r for r in range(col, n) if rows[r][col])
        rows[col], rows[piv] = rows[piv], rows[col]
        for r in range(n):
            if r != col and rows[r][col]:
                rows[r] = [a ^ b for a, b in zip(rows[r], rows[col])]
    return tuple(rows[i][n] for i in range(n))


def invariant_mismatch(f1: IntegralForm, f2: IntegralForm) -> Optional[str]:
    """Name the first classical invariant on which two forms differ."""
    if f1.rank != f2.rank:
        return f"rank {f1.rank} != {f2.rank}"
    if f1.signature != f2.signature:
        return f"signature {f1.signature} != {f2.signature}"
    if f1.parity != f2.parity:
        return f"parity {f1.parity} != {f2.parity}"
    return None


# -- isometries ------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class IsometryMap:
    """Integer matrix p with p^T gram1 p == gram2 (columns are images)."""

    matrix: np.ndarray
    source: IntegralForm
    target: IntegralForm

    def __post_init__(self):
        p = np.asarray(self.matrix, dtype=object)
        if p.shape != (self.source.rank, self.target.rank):
            raise NotAnIsometry(f"shape {p.shape} does not fit ranks")
        if not np.array_equal(p.T.dot(self.source.gram).dot(p), self.target.gram):
            raise NotAnIsometry("p^T G1 p != G2")
        if determinant(p) not in (1, -1):
            raise NotAnIsometry("matrix is not invertible over the integers")

    @property
    def is_identity(self) -> bool:
        return np.array_equal(self.matrix, identity(self.matrix.shape[0]))

    def key(self) -> tuple:
        return tuple(int(x) for x in self.matrix.flat)


@dataclass(frozen=True)
class Inconclusive:
    bound: int
    reason: str = ""


def _ldl(gram) -> tuple[list[Fraction], list[list[Fraction]]]:
    """q with Q(x) = sum_i d_i (x_i + sum_{j>i} mu_ij x_j)^2 (positive definite)."""
    n = gram.shape[0]
    a = [[Fraction(int(gram[i, j])) for j in range(n)] for i in range(n)]
    d = [Fraction(0)] * n
    mu = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        d[i] = a[i][i]
        for j in range(i + 1, n):
            mu[i][j] = a[i][j] / d[i]
        for j in range(i + 1, n):
            for k in range(i + 1, n):
                a[j][k] -= mu[i][j] * a[i][k]
    return d, mu


def short_vectors(gram, max_norm: int) -> dict[int, list[tuple[int, ...]]]:
    """Nonzero lattice vectors of a positive definite form by norm.

    Fincke-Pohst style depth-first enumeration; lists are lexicographically
    sorted.
    """
    gram = np.asarray(gram, dtype=object)
    n = gram.shape[0]
    d, mu = _ldl(gram)
    found: dict[int, list[tuple[int, ...]]] = {}
    x = [0] * n

    def rec(i: int, budget: Fraction):
        if i < 0:
            if any(x):
                norm = int(sum(x[a] * x[b] * int(gram[a, b]) for a in range(n) for b in range(n)))
                found.setdefault(norm, []).append(tuple(x))
            return
        center = -sum((mu[i][j] * x[j] for j in range(i + 1, n)), Fraction(0))
        start = round(center)
        for step in (1, -1):
            v = start if step == 1 else start - 1
            while True:
                used = d[i] * (v - center) ** 2
                if used > budget:
                    break
                x[i] = v
                rec(i - 1, budget - used)
                v += step
        x[i] = 0

    rec(n - 1, Fraction(max_norm))
    for norm in found:
        found[norm].sort()
    return found


def _bounded_vectors(gram, norms, bound: int) -> dict[int, list[tuple[int, ...]]]:
    n = gram.shape[0]
    wanted = set(norms)
    found: dict[int, list[tuple[int, ...]]] = {k: [] for k in wanted}
    g = [[int(x) for x in row] for row in gram]
    for v in itertools.product(range(-bound, bound + 1), repeat=n):
        if not any(v):
            continue
        norm = sum(v[a] * sum(g[a][b] * v[b] for b in range(n)) for a in range(n))
        if norm in wanted:
            found[norm].append(v)
    return found


class _Backtracker:
    """Find p with columns in lattice 1 realising the Gram matrix of lattice 2.

    Target basis vectors are processed by increasing norm; candidates are
    pruned by inner products with the images already chosen.
    """

    def __init__(self, gram1, gram2, candidates: dict[int, list[tuple[int, ...]]]):
        self.g1 = [[int(x) for x in row] for row in gram1]
        self.g2 = [[int(x) for x in row] for row in gram2]
        n = len(self.g2)
        self.n = n
        self.order = sorted(range(n), key=lambda j: (self.g2[j][j], j))
        self.cands = {}
        for j in range(n):
            vecs = candidates.get(self.g2[j][j], [])
            self.cands[j] = [(v, self._g1v(v)) for v in vecs]

    def _g1v(self, v):
        return tuple(sum(row[b] * v[b] for b in range(len(v))) for row in self.g1)

    def consistent(self, j, w, images):
        for i, img in images.items():
            if sum(a * b for a, b in zip(w, img)) != self.g2[i][j]:
                return False
        return True

    def search(self, images: dict[int, tuple[int, ...]], budget: Optional[list[int]] = None) -> Iterator[dict]:
        """Yield complete assignments extending ``images``."""
        todo = [j for j in self.order if j not in images]
        yield from self._rec(todo, 0, dict(images), budget)

    def _rec(self, todo, k, images, budget):
        if k == len(todo):
            yield dict(images)
            return
        j = todo[k]
        for v, w in self.cands[j]:
            if budget is not None:
                budget[0] -= 1
                if budget[0] < 0:
                    return
            if self.consistent(j, w, images):
                images[j] = v
                yield from self._rec(todo, k + 1, images, budget)
                del images[j]

    def matrix(self, images) -> np.ndarray:
        cols = [images[j] for j in range(self.n)]
        return imat(cols, shape=(self.n, len(self.g1))).T.copy()


def _definite_setup(f: IntegralForm, norms) -> tuple[np.ndarray, dict]:
    g = f.gram if f.signature > 0 else -f.gram
    sign = 1 if f.signature > 0 else -1
    top = max([sign * int(x) for x in norms], default=0)
    vecs = short_vectors(g, top)
    return g, {sign * k: v for k, v in vecs.items()}


def isometry(
    f1: IntegralForm, f2: IntegralForm, bound: int = DEFAULT_BOUND, max_nodes: int = 2_000_000
) -> Union[IsometryMap, None, Inconclusive]:
    """Search for p with p^T G1 p == G2.

    Definite forms: complete search, None means no isometry exists.
    Indefinite forms: columns with entries in [-bound, bound]; exhausting the
    search (or ``max_nodes``) with equal invariants is Inconclusive, since the
    classification guarantees existence.
    """
    _require_unimodular(f1)
    _require_unimodular(f2)
    if invariant_mismatch(f1, f2) is not None:
        return None
    n = f1.rank
    if f1 == f2:
        return IsometryMap(identity(n), f1, f2)
    norms = [f2.gram[j, j] for j in range(n)]
    if f1.is_definite:
        if sum(abs(int(x)) for x in norms) > sum(abs(int(f1.gram[j, j])) for j in range(n)):
            # short vectors are cheaper to enumerate up to the smaller norms
            back = isometry(f2, f1, bound, max_nodes)
            return None if back is None else IsometryMap(integer_inverse(back.matrix), f1, f2)
        _, cands = _definite_setup(f1, norms)
        bt = _Backtracker(f1.gram, f2.gram, cands)
        for images in bt.search({}):
            return IsometryMap(bt.matrix(images), f1, f2)
        return None
    if (2 * bound + 1) ** n > MAX_BOUNDED_CANDIDATES:
        return Inconclusive(bound, "rank too large for bounded-entry search")
    cands = _bounded_vectors(f1.gram, [int(x) for x in norms], bound)
    bt = _Backtracker(f1.gram, f2.gram, cands)
    budget = [max_nodes]
    for images in bt.search({}, budget):
        return IsometryMap(bt.matrix(images), f1, f2)
    reason = "node budget exhausted" if budget[0] < 0 else "no isometry with entries in bound"
    return Inconclusive(bound, reason)


# -- automorphism groups ---------------------------------------------------


@dataclass(frozen=True)
class AutomorphismGroup:
    generators: list  # list[IsometryMap]
    order: Optional[int]  # None when unknown

    @property
    def order_label(self) -> str:
        return "unknown" if self.order is None else str(self.order)


def _definite_automorphisms(f: IntegralForm) -> AutomorphismGroup:
    """Order and generators from a pointwise stabiliser chain.

    At level t the orbit of basis vector b_t under the stabiliser of the
    earlier ones is found by testing each candidate image for a completion.
    The order is the product of orbit lengths and the completions (one per
    orbit point) generate the group.
    """
    n = f.rank
    norms = [f.gram[j, j] for j in range(n)]
    _, cands = _definite_setup(f, norms)
    bt = _Backtracker(f.gram, f.gram, cands)
    order = 1
    gens: list[IsometryMap] = []
    seen = set()
    fixed: dict[int, tuple[int, ...]] = {}
    for j in bt.order:
        e_j = tuple(int(i == j) for i in range(n))
        orbit = 0
        for v, w in bt.cands[j]:
            if not bt.consistent(j, w, fixed):
                continue
            trial = dict(fixed)
            trial[j] = v
            completion = next(bt.search(trial), None)
            if completion is None:
                continue
            orbit += 1
            if v != e_j:
                iso = IsometryMap(bt.matrix(completion), f, f)
                if iso.key() not in seen:
                    seen.add(iso.key())
                    gens.append(iso)
        order *= orbit
        fixed[j] = e_j
    return AutomorphismGroup(gens, order)


def _reflection(f: IntegralForm, v) -> Optional[np.ndarray]:
    norm = f.pair(v, v)
    if norm not in (1, -1, 2, -2):
        return None
    n = f.rank
    gv = f.gram.dot(np.asarray(v, dtype=object))
    cols = []
    for i in range(n):
        coeff = 2 * int(gv[i])
        if coeff % norm:
            return None
        cols.append([int(i == k) - (coeff // norm) * int(v[k]) for k in range(n)])
    return imat(cols, shape=(n, n)).T.copy()


def _bounded_automorphisms(f: IntegralForm, bound: int, max_nodes: int) -> list[IsometryMap]:
    n = f.rank
    if (2 * bound + 1) ** n <= MAX_BOUNDED_CANDIDATES:
        cands = _bounded_vectors(f.gram, [int(f.gram[j, j]) for j in range(n)], bound)
        bt = _Backtracker(f.gram, f.gram, cands)
        budget = [max_nodes]
        found = [IsometryMap(bt.matrix(images), f, f) for images in bt.search({}, budget)]
        return sorted(found, key=lambda m: (not m.is_identity, m.key()))
    # reflections in vectors supported on at most two basis vectors
    out = [IsometryMap(identity(n), f, f)]
    seen = {out[0].key()}
    for support in itertools.chain(itertools.combinations(range(n), 1), itertools.combinations(range(n), 2)):
        for signs in itertools.product((1, -1), repeat=len(support)):
            if signs[0] < 0:
                continue
            v = [0] * n
            for i, s in zip(support, signs):
                v[i] = s
            r = _reflection(f, v)
            if r is not None:
                iso = IsometryMap(r, f, f)
                if iso.key() not in seen:
                    seen.add(iso.key())
                    out.append(iso)
    return out


def standard_representative(f: IntegralForm) -> IntegralForm:
    """Standard block-sum form in the class of an indefinite unimodular form."""
    cls = classify_unimodular(f)
    if cls.kind == "odd-indefinite":
        p, q = cls.params
        return parse_form_spec("+".join(["<1>"] * p + ["<-1>"] * q))
    if cls.kind == "even-indefinite":
        a, b = cls.params
        e8 = "E8" if a > 0 else "-E8"
        return parse_form_spec("+".join([e8] * abs(a) + ["H"] * b))
    raise ValueError("only indefinite forms have a block-sum representative here")


def automorphism_group(f: IntegralForm, bound: int = DEFAULT_BOUND, max_nodes: int = 2_000_000) -> AutomorphismGroup:
    """Generators and order of O(f).

    Definite: exact.  Indefinite of rank 2 (H or <1>+<-1>): the group has
    order 4, every element of the standard form's group has entries in
    [-1, 1], so it is transported along an isometry found within ``bound``.
    Other indefinite forms: automorphisms found within ``bound``, order
    unknown.
    """
    _require_unimodular(f)
    n = f.rank
    if n == 0:
        return AutomorphismGroup([], 1)
    if f.is_definite:
        return _definite_automorphisms(f)
    if n == 2:
        std = standard_representative(f)
        p = isometry(std, f, bound)
        if isinstance(p, IsometryMap):
            q = integer_inverse(p.matrix)
            elems = []
            for a in _bounded_automorphisms(std, 1, max_nodes):
                elems.append(IsometryMap(q.dot(a.matrix).dot(p.matrix), f, f))
            elems.sort(key=lambda m: (not m.is_identity, m.key()))
            return AutomorphismGroup([m for m in elems if not m.is_identity], len(elems))
    found = _bounded_automorphisms(f, bound, max_nodes)
    return AutomorphismGroup([m for m in found if not m.is_identity], None)

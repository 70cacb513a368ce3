"""Decide whether recognition data describes a product M x F.

The pipeline checks the ring axioms and torsion, then the four conditions in
order, builds the candidate product ring from the form I(N) and constructs
the ring isomorphism degree by degree.  Every Recognized verdict carries
maps that have been checked exhaustively on basis pairs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union

import numpy as np

from .cohomology import (
    IllDefined,
    ManifoldData,
    kunneth_product,
    poincare_pairing,
    primitive,
    quotient_by_f,
    ring_map_defects,
    symplectic,
    trilinear_h2,
    triple_form,
    validate_ring,
)
from .exact_linalg import (
    determinant,
    exact_tensordot,
    identity,
    imat,
    integer_inverse,
    ivec,
    solve_integer_linear,
)
from .forms import (
    DEFAULT_BOUND,
    FormClass,
    Inconclusive,
    IntegralForm,
    IsometryMap,
    NotAnIsometry,
    characteristic_vector,
    classify_unimodular,
)

CONDITIONS = ("C1", "C2", "C3", "C4i", "C4ii", "C4iii", "C4iv", "RingAxioms", "Torsion", "Orientation")


@dataclass(frozen=True)
class Rejection:
    condition: str
    witness: str

    def __post_init__(self):
        if self.condition not in CONDITIONS:
            raise ValueError(f"unknown condition code {self.condition!r}")


@dataclass(frozen=True, eq=False)
class Recognized:
    form: IntegralForm
    form_class: FormClass
    genus: int
    phi: tuple  # one matrix per degree 0..6, columns are images of basis classes
    psi: IsometryMap
    lift_coeffs: tuple


Verdict = Union[Recognized, Rejection, Inconclusive]


@dataclass(eq=False)
class RecognitionReport:
    verdict: Verdict
    diagnostics: list = field(default_factory=list)

    @property
    def kind(self) -> str:
        if isinstance(self.verdict, Recognized):
            return "recognized"
        if isinstance(self.verdict, Rejection):
            return "rejected"
        return "inconclusive"

    @property
    def condition(self) -> Optional[str]:
        return self.verdict.condition if isinstance(self.verdict, Rejection) else None


def _generator_name(k: int, g: int) -> str:
    return f"a{k + 1}" if k < g else f"b{k - g + 1}"


def check_condition1(d: ManifoldData) -> Optional[Rejection]:
    """pi_1(N) is a surface group, witnessed by u* in degrees 1 and 2."""
    ring, g = d.ring, d.genus
    if ring.betti[1] != 2 * g:
        return Rejection("C1", f"b1 = {ring.betti[1]} but a genus {g} surface needs {2 * g}")
    det = determinant(d.u1)
    if det not in (1, -1):
        return Rejection("C1", f"u* not surjective on H^1 (det u1 = {det})")
    if not any(d.f):
        return Rejection("C1", "u*[F] is zero")
    if not primitive(d.f):
        return Rejection("C1", f"u*[F] = {list(map(int, d.f))} is not primitive")
    w = symplectic(g)
    for k in range(2 * g):
        for l in range(2 * g):
            prod = ring.multiply(1, 1, d.u1[:, k], d.u1[:, l])
            if not np.array_equal(prod, w[k, l] * d.f):
                return Rejection(
                    "C1",
                    f"u*({_generator_name(k, g)}) ∪ u*({_generator_name(l, g)}) != {int(w[k, l])} * u*[F]",
                )
    for k in range(2 * g):
        if any(ring.multiply(1, 2, d.u1[:, k], d.f)):
            return Rejection("C1", f"u*({_generator_name(k, g)}) ∪ u*[F] != 0")
    return None


def check_condition2(d: ManifoldData) -> Optional[Rejection]:
    """H_2 of the universal cover is a trivial module of the right rank."""
    g = d.genus
    if len(d.action) != 2 * g:
        return Rejection("C2", f"{len(d.action)} action matrices given, need {2 * g}")
    if d.action_rank != d.ring.betti[2] - 1:
        return Rejection(
            "C2", f"rank of H_2 of the cover is {d.action_rank}, the exact sequence forces b2 - 1 = {d.ring.betti[2] - 1}"
        )
    eye = identity(d.action_rank)
    for k, m in enumerate(d.action):
        if not np.array_equal(m, eye):
            return Rejection("C2", f"generator {_generator_name(k, g)} acts nontrivially")
    return None


def check_condition3(i_n: IntegralForm, w2) -> Optional[Rejection]:
    if not i_n.is_unimodular:
        return Rejection("C3", f"I(N) is not unimodular (det {i_n.determinant})")
    spin = not any(int(x) % 2 for x in w2)
    if spin and i_n.signature % 16:
        return Rejection("C3", f"N is spin but sign I(N) = {i_n.signature} is not divisible by 16")
    return None


def _extend_from_generators(ring, u1, m, f, x_top) -> tuple:
    """Images of every basis class of the product model, given images of
    a_k (columns of u1), e_i (columns of m), [F] (f) and the top class G of M.
    """
    n1 = u1.shape[1]
    r = m.shape[1]
    phi0 = identity(1)
    phi2 = np.empty((ring.betti[2], r + 1), dtype=object)
    phi2[:, :r] = m
    phi2[:, r] = f
    cols3 = [ring.multiply(1, 2, u1[:, k], m[:, i]) for k in range(n1) for i in range(r)]
    cols4 = [x_top] + [ring.multiply(2, 2, m[:, i], f) for i in range(r)]
    cols5 = [ring.multiply(4, 1, x_top, u1[:, k]) for k in range(n1)]
    cols6 = [ring.multiply(4, 2, x_top, f)]

    def stack(cols, rows):
        return imat([list(c) for c in cols], shape=(len(cols), rows)).T.copy()

    return (
        phi0,
        u1.copy(),
        phi2,
        stack(cols3, ring.betti[3]),
        stack(cols4, ring.betti[4]),
        stack(cols5, ring.betti[5]),
        stack(cols6, ring.betti[6]),
    )


def _model_form(model: ManifoldData) -> IntegralForm:
    r = model.action_rank
    return IntegralForm(model.ring.product(2, 2)[:r, :r, 0].copy())


def search_phi(model: ManifoldData, data: ManifoldData, bound: int = DEFAULT_BOUND) -> Verdict:
    """Construct the ring isomorphism H*(M x F) -> H*(N) or name the obstruction.

    phi_1 = u1 and phi(f) = f are forced.  An isometry psi of the form only
    changes a candidate by the model automorphism realising psi, which fixes
    degree 1, [F], w2 and p1, so the identity candidate succeeds exactly when
    some candidate does; it is the only one tried.
    """
    ring, mring = data.ring, model.ring
    g = data.genus
    s = _model_form(model)
    r = s.rank
    for k in range(7):
        if ring.betti[k] != mring.betti[k]:
            return Rejection("C4ii", f"b{k}(N) = {ring.betti[k]} but b{k}(M x F) = {mring.betti[k]}")
    q = quotient_by_f(ring, data.f)
    f = data.f
    sigma = s.signature

    pf = int(data.p1.dot(f))
    if pf != 3 * sigma:
        if sigma and pf == -3 * sigma:
            return Rejection(
                "Orientation",
                f"<p1 ∪ u*[F], [N]> = {pf} = -3 sign I(N): data fits the opposite orientation; re-run with negated eval",
            )
        return Rejection("C4iv", f"<p1 ∪ u*[F], [N]> = {pf} but 3 sign(M) = {3 * sigma}")

    char = ivec(characteristic_vector(s))
    pw = [int(x) % 2 for x in q.projection.dot(data.w2)] if r else []
    if pw != [int(x) for x in char]:
        return Rejection("C4iii", f"w2(N) projects to {pw} in V, characteristic vector of I(N) is {list(char)}")

    # lifts of the quotient basis on which the cubic form vanishes; the
    # correction by multiples of f is unique because r + 2 != 0
    t = trilinear_h2(ring)
    lift = q.lift
    tau = exact_tensordot(exact_tensordot(exact_tensordot(t, lift, axes=([0], [0])), lift, axes=([0], [0])), lift, axes=([0], [0]))
    if r:
        sinv = integer_inverse(s.gram)
        coeffs = []
        for k in range(r):
            num = -sum(int(sinv[i, j]) * int(tau[k, i, j]) for i in range(r) for j in range(r))
            if num % (r + 2):
                return Rejection("C4ii", f"no lift of V has vanishing triple products (coefficient {Fraction(num, r + 2)})")
            coeffs.append(num // (r + 2))
    else:
        coeffs = []
    c = ivec(coeffs)
    m = lift + np.outer(f, c) if r else lift
    cubic = exact_tensordot(exact_tensordot(exact_tensordot(t, m, axes=([0], [0])), m, axes=([0], [0])), m, axes=([0], [0]))
    bad = np.argwhere(cubic != 0)
    if len(bad):
        i, j, k = bad[0]
        return Rejection("C4ii", f"triple product of lifted classes ({i},{j},{k}) is {int(cubic[i, j, k])}, must vanish")

    p1m = data.p1.dot(m) if r else []
    bad = [i for i in range(r) if p1m[i] != 0]
    if bad:
        return Rejection("C4iv", f"<p1 ∪ phi(e_{bad[0]}), [N]> = {int(p1m[bad[0]])}, must vanish on H^2(M)")

    rest = data.w2 - (m.dot(char) if r else 0)
    if any(int(x) % 2 for x in rest):
        return Rejection("C4iii", "w2(N) differs from the image of w2(M x F) in the [F] direction")

    if r:
        i, j = next((i, j) for i in range(r) for j in range(r) if s.gram[i, j] != 0)
        y = ring.multiply(2, 2, m[:, i], m[:, j])
        sij = int(s.gram[i, j])
        if any(int(v) % sij for v in y):
            return Rejection("C4ii", f"phi(e_{i}) ∪ phi(e_{j}) is not divisible by {sij}")
        x_top = ivec(int(v) // sij for v in y)
    else:
        w = imat([[ring.evaluate(ring.multiply(4, 2, row, f)) for row in identity(ring.betti[4])]], shape=(1, ring.betti[4]))
        x_top = solve_integer_linear(w, [1])
        if x_top is None:
            return Rejection("C4ii", "no class x in H^4(N) with <x ∪ u*[F], [N]> = 1")

    phi = _extend_from_generators(ring, data.u1, m, f, x_top)
    defects = ring_map_defects(mring, ring, phi)
    if defects:
        return Rejection("C4ii", "; ".join(defects[:3]))
    orient = ring.evaluate(phi[6][:, 0])
    if orient == -1:
        return Rejection("Orientation", "phi([M] x [F]) = -[N]; re-run with negated eval")
    if orient != 1:
        return Rejection("C4i", f"phi([M] x [F]) evaluates to {orient}")
    if not (np.array_equal(phi[1], data.u1) and np.array_equal(phi[2][:, r], f)):
        return Rejection("C4ii", "phi does not restrict to u* on H*(F)")
    if any(int(x) % 2 for x in phi[2].dot(model.w2) - data.w2):
        return Rejection("C4iii", "phi(w2(M x F)) != w2(N)")
    if not np.array_equal(data.p1.dot(phi[2]), model.p1):
        return Rejection("C4iv", "p1 pairings are not preserved")
    psi = IsometryMap(identity(r), s, s)
    return Recognized(s, classify_unimodular(s), g, phi, psi, tuple(int(x) for x in c))


def diagnostics(d: ManifoldData) -> list[str]:
    ring = d.ring
    out = []
    r = ring.betti[2] - 1
    chi = ring.euler_characteristic
    want = (2 - 2 * d.genus) * (r + 2)
    status = "ok" if chi == want else "FAILED"
    out.append(f"euler: chi(N) = {chi}, chi(F)(r+2) = {want} {status}")
    for k in range(ring.dim + 1):
        try:
            pairing = poincare_pairing(ring, k)
        except Exception as exc:  # torsion or malformed tensors
            out.append(f"duality H^{k}: {exc}")
            continue
        if pairing.shape[0] != pairing.shape[1]:
            out.append(f"duality H^{k}: pairing is {pairing.shape[0]}x{pairing.shape[1]} FAILED")
            continue
        det = determinant(pairing)
        out.append(f"duality H^{k}: det = {det} {'ok' if det in (1, -1) else 'FAILED'}")
    return out


def recognize(d: ManifoldData, bound: int = DEFAULT_BOUND) -> RecognitionReport:
    diag = diagnostics(d)

    def done(verdict):
        return RecognitionReport(verdict, diag)

    violations = validate_ring(d.ring)
    if violations:
        more = f" (+{len(violations) - 1} more)" if len(violations) > 1 else ""
        return done(Rejection("RingAxioms", violations[0] + more))
    if d.ring.has_torsion:
        k = next(k for k, ds in enumerate(d.ring.torsion) if any(x > 1 for x in ds))
        return done(Rejection("Torsion", f"H^{k}(N) has torsion {list(d.ring.torsion[k])}; H*(M x F) is torsion-free"))
    for check in (check_condition1, check_condition2):
        rej = check(d)
        if rej is not None:
            return done(rej)
    q = quotient_by_f(d.ring, d.f)
    try:
        i_n = triple_form(d.ring, d.f, q)
    except IllDefined as exc:
        return done(Rejection("C1", f"u*[F] ∪ u*[F] != 0: {exc}"))
    rej = check_condition3(i_n, d.w2)
    if rej is not None:
        return done(rej)
    model = kunneth_product(i_n, d.genus)
    return done(search_phi(model, d, bound))


def realize_isometry(s: IntegralForm, g: int, psi) -> tuple:
    """Ring automorphism of H*(M x F) acting by psi on H^2(M) and fixing H*(F)."""
    matrix = psi.matrix if isinstance(psi, IsometryMap) else np.asarray(psi, dtype=object)
    IsometryMap(matrix, s, s)  # raises NotAnIsometry
    model = kunneth_product(s, g)
    ring = model.ring
    r = s.rank
    m = np.zeros((r + 1, r), dtype=object)
    m[:r, :] = matrix
    x_top = ivec([1] + [0] * r)
    phi = _extend_from_generators(ring, identity(2 * g), m, model.f, x_top)
    defects = ring_map_defects(ring, ring, phi)
    if defects:
        raise NotAnIsometry("; ".join(defects[:3]))
    if ring.evaluate(phi[6][:, 0]) != 1:
        raise NotAnIsometry("induced map reverses orientation")
    return phi

import random
from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import random_unimodular
from surfprod.cohomology import (
    GenusZero,
    IllDefined,
    TorsionPresent,
    change_basis,
    kunneth_product,
    poincare_pairing,
    quotient_by_f,
    surface_ring,
    triple_form,
    validate_ring,
)
from surfprod.exact_linalg import NotPrimitive, determinant, identity, imat, is_unimodular
from surfprod.forms import NotUnimodular, parse_form_spec

FORMS = ["<1>", "<-1>", "<1>+<-1>", "H", "H+H", "<1>+<1>+<1>", "0", "E8", "-E8+-E8+H+H+H"]


def test_surface_ring():
    for g in (1, 2, 3):
        r = surface_ring(g)
        assert r.betti[:3] == (1, 2 * g, 1)
        assert validate_ring(r) == []
    t = surface_ring(2).product(1, 1)[:, :, 0]
    assert t.tolist() == [[0, 0, 1, 0], [0, 0, 0, 1], [-1, 0, 0, 0], [0, -1, 0, 0]]
    with pytest.raises(GenusZero):
        surface_ring(0)


@pytest.mark.parametrize("spec", FORMS)
@pytest.mark.parametrize("g", [1, 2])
def test_kunneth_valid_and_dual(spec, g):
    s = parse_form_spec(spec)
    d = kunneth_product(s, g)
    assert validate_ring(d.ring) == []
    for k in range(7):
        assert is_unimodular(poincare_pairing(d.ring, k))
    r = s.rank
    assert d.ring.euler_characteristic == (2 - 2 * g) * (r + 2)
    assert d.p1[-1] == 3 * s.signature
    q = quotient_by_f(d.ring, d.f)
    assert np.array_equal(triple_form(d.ring, d.f, q).gram, s.gram)


def test_kunneth_betti_examples():
    assert kunneth_product(parse_form_spec("<1>"), 1).ring.betti == (1, 2, 2, 2, 2, 2, 1)
    assert kunneth_product(parse_form_spec("0"), 2).ring.betti == (1, 4, 1, 0, 1, 4, 1)
    assert kunneth_product(parse_form_spec("H+H"), 2).ring.betti == (1, 4, 5, 16, 5, 4, 1)


def test_kunneth_cp2_torus_by_hand():
    d = kunneth_product(parse_form_spec("<1>"), 1)
    # <f ∪ e1 ∪ e1> = 1, <f ∪ f ∪ e1> = 0
    ee = d.ring.multiply(2, 2, [1, 0], [1, 0])
    assert d.ring.evaluate(d.ring.multiply(2, 4, [0, 1], ee)) == 1
    ff = d.ring.multiply(2, 2, [0, 1], [0, 1])
    assert list(ff) == [0, 0]
    assert list(d.p1) == [0, 3]
    assert list(d.w2) == [1, 0]


def test_k3_torus_p1():
    d = kunneth_product(parse_form_spec("-E8+-E8+H+H+H"), 1)
    assert d.p1[-1] == -48


def test_kunneth_errors():
    with pytest.raises(NotUnimodular):
        kunneth_product(parse_form_spec("<2>"), 1)
    with pytest.raises(GenusZero):
        kunneth_product(parse_form_spec("<1>"), 0)


def test_anticommutativity_violation_named():
    d = kunneth_product(parse_form_spec("<1>"), 1)
    cup = dict(d.ring.cup)
    t = cup[1, 1].copy()
    t[1, 0] = t[0, 1]  # now a∪b = b∪a, wrong sign in degree 1
    cup[1, 1] = t
    bad = replace(d.ring, cup=cup)
    v = validate_ring(bad)
    assert v[0] == "commutativity: cup(1,1)[1,0] != -1 * cup(1,1)[0,1]"


def test_quotient_by_f():
    d = kunneth_product(parse_form_spec("<1>"), 1)
    q = quotient_by_f(d.ring, [2, 3])
    assert np.array_equal(q.projection.dot(q.lift), identity(1))
    assert list(q.projection.dot(np.array([2, 3], dtype=object))) == [0]
    with pytest.raises(NotPrimitive):
        quotient_by_f(d.ring, [0, 0])


def test_triple_form_ill_defined():
    d = kunneth_product(parse_form_spec("<1>"), 1)
    cup = dict(d.ring.cup)
    t = cup[2, 2].copy()
    t[1, 1] = np.array([1, 0], dtype=object)  # f ∪ f = g_M, so <f∪f∪e1> = 1
    cup[2, 2] = t
    ring = replace(d.ring, cup=cup)
    with pytest.raises(IllDefined):
        triple_form(ring, d.f, quotient_by_f(ring, d.f))


def test_poincare_pairing_degree0_and_torsion():
    d = kunneth_product(parse_form_spec("<1>"), 1)
    assert poincare_pairing(d.ring, 0).tolist() == [[1]]
    tors = list(d.ring.torsion)
    tors[3] = (2,)
    with pytest.raises(TorsionPresent):
        poincare_pairing(replace(d.ring, torsion=tuple(tors)), 3)


@given(st.sampled_from(["<1>+<-1>", "H", "<1>+<1>", "H+<1>"]), st.integers(0, 10**6))
@settings(max_examples=30, deadline=None)
def test_triple_form_natural_under_basis_change(spec, seed):
    """A basis change of H^2 fixing f transforms I(N) by congruence."""
    s = parse_form_spec(spec)
    d = kunneth_product(s, 1)
    r = s.rank
    u = random_unimodular(r, random.Random(seed))
    p = identity(r + 1)
    p[:r, :r] = u
    p[r, :r] = [random.Random(seed + 1).randint(-2, 2) for _ in range(r)]
    e = change_basis(d, 2, p)
    assert validate_ring(e.ring) == []
    got = triple_form(e.ring, e.f, quotient_by_f(e.ring, e.f))
    assert list(e.f) == [0] * r + [1]
    assert np.array_equal(got.gram, u.T.dot(s.gram).dot(u))


def test_euler_characteristic_cp2_sigma3():
    assert kunneth_product(parse_form_spec("<1>"), 3).ring.euler_characteristic == -12


def test_change_basis_roundtrip_determinants():
    d = kunneth_product(parse_form_spec("H"), 2)
    p = random_unimodular(3, random.Random(5))
    e = change_basis(d, 2, p)
    for k in range(7):
        assert abs(determinant(poincare_pairing(e.ring, k))) == 1

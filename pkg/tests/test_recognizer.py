import random
from dataclasses import replace

import numpy as np
import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from oracles import random_unimodular
from surfprod.cohomology import change_basis, kunneth_product, ring_map_defects, symplectic
from surfprod.corpus import MUTATIONS, mutate, product_fixture
from surfprod.exact_linalg import identity, imat, is_unimodular
from surfprod.forms import IsometryMap, NotAnIsometry, automorphism_group, classify_unimodular, parse_form_spec
from surfprod.recognizer import (
    Recognized,
    Rejection,
    check_condition1,
    check_condition2,
    check_condition3,
    realize_isometry,
    recognize,
)


def assert_sound(d, v: Recognized):
    """Independent re-check of a Recognized verdict against the input data."""
    model = kunneth_product(v.form, v.genus)
    assert ring_map_defects(model.ring, d.ring, list(v.phi)) == []
    assert all(is_unimodular(m) for m in v.phi)
    assert np.array_equal(v.phi[1], d.u1)
    r = v.form.rank
    # clause (ii) in degree 2: the F class goes to f
    assert list(v.phi[2][:, r]) == [int(x) for x in d.f]
    # clause (i): [M] x [F] evaluates to +1
    assert d.ring.evaluate(v.phi[6][:, 0]) == 1
    # clause (iii): w2 is a class, so phi carries w2 of the product to w2(N)
    assert [int(x) % 2 for x in v.phi[2].dot(np.array(model.w2, dtype=object))] == [int(x) % 2 for x in d.w2]
    # clause (iv)
    assert list(np.array(d.p1, dtype=object).dot(v.phi[2])) == list(model.p1)


@pytest.mark.parametrize("spec", ["<1>", "<-1>", "<1>+<-1>", "H", "<1>+<1>", "0", "E8+<-1>"])
@pytest.mark.parametrize("g", [1, 2, 3])
def test_completeness_on_products(spec, g):
    s = parse_form_spec(spec)
    d = kunneth_product(s, g)
    v = recognize(d).verdict
    assert isinstance(v, Recognized)
    assert v.form_class == classify_unimodular(s)
    assert v.genus == g
    assert v.psi.is_identity
    assert_sound(d, v)


def test_identity_case_has_zero_lift():
    v = recognize(kunneth_product(parse_form_spec("<1>+<-1>"), 2)).verdict
    assert v.lift_coeffs == (0, 0)
    assert all(np.array_equal(m, identity(m.shape[0])) for m in v.phi)


def test_condition1_witnesses():
    d = kunneth_product(parse_form_spec("<1>"), 1)
    assert check_condition1(d) is None
    rej = check_condition1(replace(d, u1=2 * identity(2)))
    assert rej.condition == "C1" and "not surjective on H^1" in rej.witness


def test_condition1_perturbed_relation():
    d = kunneth_product(parse_form_spec("<1>"), 1)
    cup = dict(d.ring.cup)
    t = cup[1, 1].copy()
    t[0, 1] = np.array([1, 1], dtype=object)
    t[1, 0] = -t[0, 1]
    cup[1, 1] = t
    bad = replace(d, ring=replace(d.ring, cup=cup))
    rej = check_condition1(bad)
    assert rej is not None and rej.condition == "C1"


def test_condition2():
    d = kunneth_product(parse_form_spec("H"), 1)
    assert check_condition2(d) is None
    rej = check_condition2(replace(d, action=(-identity(2), identity(2))))
    assert rej.condition == "C2" and "a1" in rej.witness
    rej = check_condition2(replace(d, action_rank=3, action=(identity(3), identity(3))))
    assert rej.condition == "C2"


def test_condition3():
    assert check_condition3(parse_form_spec("H"), [0, 0, 0]) is None
    assert check_condition3(parse_form_spec("E8"), [0] * 9).condition == "C3"
    assert check_condition3(parse_form_spec("E8+E8"), [0] * 17) is None
    assert check_condition3(parse_form_spec("<2>"), [0, 0]).condition == "C3"


def test_s4_bundle_example():
    d = kunneth_product(parse_form_spec("0"), 2)
    assert recognize(d).kind == "recognized"
    rep = recognize(replace(d, w2=[1]))
    assert rep.condition == "C4iii"


def test_p1_perturbed():
    d = kunneth_product(parse_form_spec("<1>"), 1)
    assert recognize(replace(d, p1=[0, 4])).condition == "C4iv"


def test_non_characteristic_w2():
    d = kunneth_product(parse_form_spec("<1>+<-1>"), 1)
    assert recognize(replace(d, w2=[1, 0, 0])).condition == "C4iii"


@pytest.mark.parametrize("kind", sorted(MUTATIONS))
def test_mutations_on_cp2_torus(kind):
    fx = mutate(product_fixture("b", "<1>", 1), kind)
    assert recognize(fx.data).condition == MUTATIONS[kind]


def test_orientation_reversal_of_signature_zero_is_a_product():
    # reversing N = M x F gives (-M) x F; for sigma = 0 the form -s is isometric to s
    fx = mutate(product_fixture("b", "H", 2), "orientation")
    v = recognize(fx.data).verdict
    assert isinstance(v, Recognized)
    assert_sound(fx.data, v)


@given(st.sampled_from(["<1>", "H", "<1>+<-1>", "<1>+<1>", "0", "H+<-1>"]),
       st.integers(1, 2), st.integers(0, 10**6))
@settings(max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])
def test_invariance_under_h2_basis_change(spec, g, seed):
    s = parse_form_spec(spec)
    d = kunneth_product(s, g)
    p = random_unimodular(s.rank + 1, random.Random(seed))
    e = change_basis(d, 2, p)
    v = recognize(e).verdict
    assert isinstance(v, Recognized)
    c0, c1 = classify_unimodular(s), v.form_class
    assert (c1.rank, c1.signature, c1.parity, v.genus) == (c0.rank, c0.signature, c0.parity, g)
    assert_sound(e, v)


@given(st.integers(0, 10**6))
@settings(max_examples=15, deadline=None)
def test_invariance_under_h1_basis_change(seed):
    d = kunneth_product(parse_form_spec("H"), 2)
    e = change_basis(d, 1, random_unimodular(4, random.Random(seed)))
    v = recognize(e).verdict
    assert isinstance(v, Recognized)
    assert_sound(e, v)


@pytest.mark.parametrize("spec", ["H", "<1>+<-1>", "<1>+<1>"])
def test_realize_isometry(spec):
    s = parse_form_spec(spec)
    for gen in automorphism_group(s).generators:
        phi = realize_isometry(s, 2, gen)
        ring = kunneth_product(s, 2).ring
        assert ring_map_defects(ring, ring, list(phi)) == []
        assert ring.evaluate(phi[6][:, 0]) == 1


def test_realize_identity():
    s = parse_form_spec("H")
    phi = realize_isometry(s, 1, identity(2))
    assert all(np.array_equal(m, identity(m.shape[0])) for m in phi)


def test_realize_rotation_of_diag11():
    s = parse_form_spec("<1>+<1>")
    phi = realize_isometry(s, 1, imat([[0, 1], [-1, 0]]))
    # H^4 = (G, d_1, d_2): the cross block carries the rotation
    assert phi[4][1:, 1:].tolist() == [[0, 1], [-1, 0]]


def test_realize_rejects_non_isometry():
    with pytest.raises(NotAnIsometry):
        realize_isometry(parse_form_spec("H"), 1, imat([[1, 1], [0, 1]]))


def test_permuted_fixture_is_recognized():
    s = parse_form_spec("H")
    d = kunneth_product(s, 1)
    swap = IsometryMap(imat([[0, 1], [1, 0]]), s, s)
    phi = realize_isometry(s, 1, swap)
    e = d
    for k in range(1, 6):
        e = change_basis(e, k, phi[k])
    v = recognize(e).verdict
    assert isinstance(v, Recognized)
    assert_sound(e, v)


def test_torsion_rejection():
    fx = mutate(product_fixture("b", "H", 1), "torsion")
    rep = recognize(fx.data)
    assert rep.condition == "Torsion"


def test_ring_axiom_rejection():
    d = kunneth_product(parse_form_spec("<1>"), 1)
    cup = dict(d.ring.cup)
    t = cup[2, 2].copy()
    t[0, 1] = t[0, 1] + np.array([0, 1], dtype=object)
    cup[2, 2] = t
    rep = recognize(replace(d, ring=replace(d.ring, cup=cup)))
    assert rep.condition == "RingAxioms"


def test_rejection_codes_validated():
    with pytest.raises(ValueError):
        Rejection("C5", "no such clause")


def test_symplectic_matrix():
    assert symplectic(1).tolist() == [[0, 1], [-1, 0]]

"""Fixtures: product manifolds and single-field mutations of them.

Negative fixtures are built by mutating product data so every axiom not
targeted by the mutation still holds.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional

from .cohomology import ManifoldData, product_data, kunneth_product
from .exact_linalg import identity
from .forms import FormClass, IntegralForm, characteristic_vector, classify_unimodular, direct_sum, parse_form_spec


class UnknownMutation(ValueError):
    pass


@dataclass(frozen=True)
class Expected:
    kind: str  # recognized | rejected
    condition: Optional[str] = None
    form_class: Optional[FormClass] = None
    genus: Optional[int] = None

    def describe(self) -> str:
        if self.kind == "recognized":
            c = self.form_class
            return f"recognized rank={c.rank} signature={c.signature} parity={c.parity} genus={self.genus}"
        return f"rejected condition={self.condition}"


@dataclass(frozen=True, eq=False)
class Fixture:
    name: str
    data: ManifoldData
    expected: Expected
    form: Optional[IntegralForm] = None  # set on product fixtures
    note: str = ""


# mutation kind -> condition expected to reject it
MUTATIONS = {
    "action": "C2",
    "det": "C3",
    "spin": "C3",
    "w2": "C4iii",
    "p1-f": "C4iv",
    "p1-lattice": "C4iv",
    "orientation": "Orientation",
    "torsion": "Torsion",
}


def product_fixture(name: str, spec: str, g: int, note: str = "") -> Fixture:
    s = parse_form_spec(spec)
    return Fixture(name, kunneth_product(s, g), Expected("recognized", form_class=classify_unimodular(s), genus=g), s, note)


def mutate(fx: Fixture, kind: str, name: Optional[str] = None) -> Fixture:
    if kind not in MUTATIONS:
        raise UnknownMutation(f"unknown mutation {kind!r}; known: {', '.join(MUTATIONS)}")
    if fx.form is None or fx.expected.kind != "recognized":
        raise ValueError("mutations apply to product fixtures only")
    d, s, g = fx.data, fx.form, fx.data.genus
    r = s.rank
    if kind == "action":
        if r == 0:
            raise ValueError("the action on a rank-0 module cannot be made nontrivial")
        out = replace(d, action=(-identity(r),) + d.action[1:])
    elif kind == "det":
        bigger = direct_sum(s, IntegralForm.from_rows([[2]]))
        out = product_data(bigger.gram, g, list(characteristic_vector(s)) + [0], bigger.signature)
    elif kind == "spin":
        bigger = s if s.signature % 16 == 8 else direct_sum(s, parse_form_spec("E8"))
        out = product_data(bigger.gram, g, [0] * bigger.rank, bigger.signature)
    elif kind == "w2":
        w2 = d.w2.copy()
        w2[-1] = 1 - w2[-1]
        out = replace(d, w2=w2)
    elif kind == "p1-f":
        p1 = d.p1.copy()
        p1[-1] += 1
        out = replace(d, p1=p1)
    elif kind == "p1-lattice":
        if r == 0:
            raise ValueError("no lattice classes to perturb")
        p1 = d.p1.copy()
        p1[0] += 1
        out = replace(d, p1=p1)
    elif kind == "orientation":
        out = replace(d, ring=replace(d.ring, eval=-d.ring.eval))
    else:  # torsion
        torsion = list(d.ring.torsion)
        torsion[3] = (2,)
        out = replace(d, ring=replace(d.ring, torsion=tuple(torsion)))
    return Fixture(name or f"{fx.name}+{kind}", out, Expected("rejected", MUTATIONS[kind]), None, f"{kind} mutation of {fx.name}")


def standard_fixtures() -> list[Fixture]:
    cp2_torus = product_fixture("cp2_torus", "<1>", 1, "CP2 x T2")
    pos = [
        cp2_torus,
        product_fixture("cp2_sigma2", "<1>", 2, "CP2 x genus 2"),
        product_fixture("cp2_sigma3", "<1>", 3, "CP2 x genus 3"),
        product_fixture("s2s2_torus", "H", 1, "S2xS2 x T2"),
        product_fixture("s2s2_sigma2", "H", 2, "S2xS2 x genus 2"),
        product_fixture("k3_torus", "-E8+-E8+H+H+H", 1, "K3 x T2"),
        product_fixture("s4_sigma2", "0", 2, "S4 x genus 2"),
    ]
    s4 = pos[-1]
    bundle = replace(s4.data, w2=[1])
    neg = [
        Fixture("s4bundle_w2", bundle, Expected("rejected", "C4iii"), None,
                "S4-bundle over genus 2 with w2 != 0: cohomology ring of S4 x F"),
        Fixture("spin_e8", kunneth_product(parse_form_spec("E8"), 1), Expected("rejected", "C3"), None,
                "E8 form, spin, signature 8"),
        mutate(cp2_torus, "action", "nontrivial_action"),
        mutate(cp2_torus, "det", "det2"),
        mutate(cp2_torus, "p1-f", "p1_perturbed"),
    ]
    return pos + neg

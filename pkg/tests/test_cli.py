import subprocess
import sys
from pathlib import Path

import pytest

from surfprod.cli import main
from surfprod.fileformat import load_manifold

ROOT = Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "fixtures"
GOLDEN = Path(__file__).resolve().parent / "golden"

MACHINE_KEYS = ["verdict", "rank", "signature", "parity", "genus", "form_class", "psi", "lift_coeffs"] + [
    f"phi_degree_{k}" for k in range(7)
]


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_recognize_cp2_torus(capsys):
    code, out, _ = run(["recognize", str(FIXTURES / "cp2_torus.m6")], capsys)
    assert code == 0
    assert out.splitlines()[0] == "verdict=recognized rank=1 signature=1 parity=odd genus=1"


def test_recognize_s4bundle(capsys):
    code, out, _ = run(["recognize", str(FIXTURES / "s4bundle_w2.m6"), "--format", "machine"], capsys)
    assert code == 1
    assert "condition=C4iii" in out.splitlines()


@pytest.mark.parametrize("name", ["cp2_torus", "s4bundle_w2", "s2s2_sigma2"])
def test_machine_output_golden(name, capsys):
    _, out, _ = run(["recognize", str(FIXTURES / f"{name}.m6"), "--format", "machine"], capsys)
    assert out == (GOLDEN / f"{name}.machine").read_text()


def test_machine_keys_stable(capsys):
    _, out, _ = run(["recognize", str(FIXTURES / "k3_torus.m6"), "--format", "machine"], capsys)
    keys = [line.split("=", 1)[0] for line in out.splitlines()]
    assert keys == MACHINE_KEYS


def test_truncated_file_exit_64(tmp_path, capsys):
    text = (FIXTURES / "cp2_torus.m6").read_text()
    bad = tmp_path / "trunc.m6"
    bad.write_text(text[: len(text) // 3])
    code, _, err = run(["recognize", str(bad)], capsys)
    assert code == 64
    assert "error" in err


def test_make_product_betti(tmp_path, capsys):
    out = tmp_path / "hh.m6"
    code, _, _ = run(["make-product", "--form", "H+H", "--genus", "2", "--out", str(out)], capsys)
    assert code == 0
    assert load_manifold(out.read_text()).ring.betti == (1, 4, 5, 16, 5, 4, 1)


def test_make_product_k3_p1(tmp_path, capsys):
    out = tmp_path / "k3.m6"
    run(["make-product", "--form=-E8+-E8+H+H+H", "--genus", "1", "--out", str(out)], capsys)
    lines = out.read_text().splitlines()
    p1 = lines[lines.index("[p1]") + 1]
    assert p1.split()[-1] == "-48"


def test_make_product_genus_zero(tmp_path, capsys):
    code, _, err = run(["make-product", "--form", "<1>", "--genus", "0", "--out", str(tmp_path / "x.m6")], capsys)
    assert code == 64 and "GenusZero" in err


def test_make_product_mutation_then_recognize(tmp_path, capsys):
    out = tmp_path / "m.m6"
    run(["make-product", "--form", "<1>", "--genus", "1", "--out", str(out), "--mutate", "p1-f"], capsys)
    code, stdout, _ = run(["recognize", str(out), "--format", "machine"], capsys)
    assert code == 1 and "condition=C4iv" in stdout


def test_make_product_unknown_mutation(tmp_path, capsys):
    code, _, err = run(["make-product", "--form", "<1>", "--genus", "1", "--out", str(tmp_path / "x"),
                        "--mutate", "bogus"], capsys)
    assert code == 64 and "UnknownMutation" in err


@pytest.mark.parametrize(
    "spec, expect",
    [
        ("H", ["parity=even", "signature=0", "class=Even-indefinite(0,1)"]),
        ("E8", ["parity=even", "signature=8", "class=Definite(positive,even,rank=8)"]),
        ("<1>+<-1>", ["parity=odd", "class=Odd-indefinite(1,1)"]),
    ],
)
def test_classify_form(spec, expect, capsys):
    code, out, _ = run(["classify-form", spec], capsys)
    assert code == 0
    for e in expect:
        assert e in out.splitlines()


def test_classify_form_gram_file(tmp_path, capsys):
    p = tmp_path / "g.txt"
    p.write_text("[gram]\n1 1\n1 2\n")
    _, out, _ = run(["classify-form", str(p)], capsys)
    assert "characteristic_vector=0,1" in out.splitlines()


def test_classify_form_not_symmetric(tmp_path, capsys):
    p = tmp_path / "g.txt"
    p.write_text("1 2\n3 4\n")
    code, _, err = run(["classify-form", str(p)], capsys)
    assert code == 64 and "NotSymmetric" in err


@pytest.mark.parametrize("spec, order", [("H", "4"), ("<1>+<1>", "8"), ("<1>", "2")])
def test_autgroup(spec, order, capsys):
    code, out, _ = run(["autgroup", spec], capsys)
    assert code == 0 and f"order={order}" in out.splitlines()


def test_autgroup_not_unimodular(capsys):
    code, _, err = run(["autgroup", "<2>"], capsys)
    assert code == 64 and "NotUnimodular" in err


def test_check_ring_ok(capsys):
    code, out, _ = run(["check-ring", str(FIXTURES / "k3_torus.m6")], capsys)
    assert code == 0 and out.splitlines()[-1] == "ok"


def test_check_ring_anticommutativity(tmp_path, capsys):
    text = (FIXTURES / "cp2_torus.m6").read_text()
    bad = tmp_path / "bad.m6"
    bad.write_text(text.replace("[cup 1 1]\n0 1 : 0 1\n", "[cup 1 1]\n0 1 : 0 1\n1 0 : 0 1\n"))
    code, out, _ = run(["check-ring", str(bad)], capsys)
    assert code == 1
    assert "violation: commutativity: cup(1,1)[1,0] != -1 * cup(1,1)[0,1]" in out


def test_check_ring_betti_off_by_one(tmp_path, capsys):
    text = (FIXTURES / "cp2_torus.m6").read_text()
    bad = tmp_path / "bad.m6"
    # an extra H^3 class that multiplies trivially
    text = text.replace("betti 1 2 2 2 2 2 1", "betti 1 2 2 3 2 2 1")
    text = text.replace("[cup 1 2]\n0 0 : 1 0\n1 0 : 0 1\n", "[cup 1 2]\n0 0 : 1 0 0\n1 0 : 0 1 0\n")
    bad.write_text(text)
    code, out, _ = run(["check-ring", str(bad)], capsys)
    assert "euler: chi(N) = -1, chi(F)(r+2) = 0 FAILED" in out


def test_console_entry_point_runs():
    proc = subprocess.run([sys.executable, "-m", "surfprod.cli", "recognize", str(FIXTURES / "cp2_torus.m6")],
                          capture_output=True, text=True)
    assert proc.returncode == 0

"""Command-line front end.

Machine report format (``--format machine``): one ``key=value`` per line.
Keys, in order of appearance:

    verdict       recognized | rejected | inconclusive
    condition     rejection code (rejected only)
    witness       human-readable witness (rejected only)
    rank, signature, parity, genus, form_class    (recognized only)
    psi           matrix of the isometry I(N) -> form
    lift_coeffs   comma-separated integers
    phi_degree_k  for k = 0..6, matrix in the basis of H^k

Matrices are written row by row, entries joined by ``,`` and rows by ``;``.
An empty matrix is written as the empty string.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .cohomology import GenusZero, kunneth_product, validate_ring
from .corpus import Expected, Fixture, UnknownMutation, mutate
from .exact_linalg import NotSymmetric, determinant
from .fileformat import dump_manifold, load_gram, load_manifold
from .forms import (
    DEFAULT_BOUND,
    Inconclusive,
    IntegralForm,
    NotUnimodular,
    automorphism_group,
    characteristic_vector,
    classify_unimodular,
    parse_form_spec,
)
from .recognizer import Recognized, Rejection, diagnostics, recognize

EXIT_RECOGNIZED = 0
EXIT_REJECTED = 1
EXIT_INCONCLUSIVE = 2
EXIT_USAGE = 64


def encode_matrix(m) -> str:
    m = np.asarray(m, dtype=object)
    return ";".join(",".join(str(int(x)) for x in row) for row in m)


def _read_form(arg: str) -> IntegralForm:
    path = Path(arg)
    if path.is_file():
        return load_gram(path.read_text(encoding="utf-8"))
    return parse_form_spec(arg)


def machine_report(report) -> list[str]:
    v = report.verdict
    lines = [f"verdict={report.kind}"]
    if isinstance(v, Rejection):
        lines += [f"condition={v.condition}", f"witness={v.witness}"]
    elif isinstance(v, Recognized):
        c = v.form_class
        lines += [
            f"rank={c.rank}",
            f"signature={c.signature}",
            f"parity={c.parity}",
            f"genus={v.genus}",
            f"form_class={c.name}",
            f"psi={encode_matrix(v.psi.matrix)}",
            f"lift_coeffs={','.join(str(x) for x in v.lift_coeffs)}",
        ]
        lines += [f"phi_degree_{k}={encode_matrix(m)}" for k, m in enumerate(v.phi)]
    else:
        lines += [f"bound={v.bound}", f"reason={v.reason}"]
    return lines


def text_report(report) -> list[str]:
    v = report.verdict
    if isinstance(v, Recognized):
        c = v.form_class
        lines = [
            f"verdict=recognized rank={c.rank} signature={c.signature} parity={c.parity} genus={v.genus}",
            f"form class: {c.name}",
            f"lift coefficients: {list(v.lift_coeffs)}",
        ]
    elif isinstance(v, Rejection):
        lines = [f"verdict=rejected condition={v.condition}", f"witness: {v.witness}"]
    else:
        lines = [f"verdict=inconclusive bound={v.bound}", f"reason: {v.reason}"]
    return lines + [f"  {d}" for d in report.diagnostics]


def cmd_recognize(args) -> int:
    try:
        data = load_manifold(Path(args.path).read_text(encoding="utf-8"))
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    report = recognize(data, bound=args.bound)
    lines = machine_report(report) if args.format == "machine" else text_report(report)
    print("\n".join(lines))
    if isinstance(report.verdict, Recognized):
        return EXIT_RECOGNIZED
    if isinstance(report.verdict, Inconclusive):
        return EXIT_INCONCLUSIVE
    return EXIT_REJECTED


def cmd_make_product(args) -> int:
    try:
        s = _read_form(args.form)
        data = kunneth_product(s, args.genus)
        expected = Expected("recognized", form_class=classify_unimodular(s), genus=args.genus)
        fx = Fixture(Path(args.out).stem, data, expected, s)
        if args.mutate:
            fx = mutate(fx, args.mutate)
    except (GenusZero, NotUnimodular, UnknownMutation, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    comment = f"form {args.form}, genus {args.genus}" + (f", mutation {args.mutate}" if args.mutate else "")
    Path(args.out).write_text(dump_manifold(fx.data, comment), encoding="utf-8")
    print(f"wrote {args.out} (expected: {fx.expected.describe()})")
    return 0


def cmd_classify_form(args) -> int:
    try:
        s = _read_form(args.form)
        s.inertia
    except (NotSymmetric, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    unimodular = s.is_unimodular
    print(f"rank={s.rank}")
    print(f"determinant={determinant(s.gram)}")
    print(f"signature={s.signature}")
    print(f"parity={s.parity}")
    print(f"unimodular={'yes' if unimodular else 'no'}")
    if unimodular:
        print(f"class={classify_unimodular(s).name}")
        print(f"characteristic_vector={','.join(map(str, characteristic_vector(s)))}")
    return 0


def cmd_autgroup(args) -> int:
    try:
        s = _read_form(args.form)
        group = automorphism_group(s, bound=args.bound)
    except (NotUnimodular, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print(f"order={group.order_label}")
    print(f"generators={len(group.generators)}")
    for gen in group.generators:
        print(f"generator={encode_matrix(gen.matrix)}")
    return 0


def cmd_check_ring(args) -> int:
    try:
        data = load_manifold(Path(args.path).read_text(encoding="utf-8"))
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    violations = validate_ring(data.ring)
    diag = diagnostics(data)
    for v in violations:
        print(f"violation: {v}")
    for d in diag:
        print(d)
    bad = bool(violations) or any("FAILED" in d for d in diag)
    print("FAILED" if bad else "ok")
    return 1 if bad else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="surfprod", description="Recognize cohomology data of products M x F.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("recognize", help="decide whether a manifold file describes a product")
    p.add_argument("path")
    p.add_argument("--bound", type=int, default=DEFAULT_BOUND)
    p.add_argument("--format", choices=("text", "machine"), default="text")
    p.set_defaults(func=cmd_recognize)

    p = sub.add_parser("make-product", help="write the data of M x F for a given form")
    p.add_argument("--form", required=True, help="named form such as 'H+<1>' or a Gram file")
    p.add_argument("--genus", type=int, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--mutate", default=None, help="apply one named violation")
    p.set_defaults(func=cmd_make_product)

    p = sub.add_parser("classify-form", help="invariants of a symmetric integer form")
    p.add_argument("form")
    p.set_defaults(func=cmd_classify_form)

    p = sub.add_parser("autgroup", help="automorphism group generators and order")
    p.add_argument("form")
    p.add_argument("--bound", type=int, default=DEFAULT_BOUND)
    p.set_defaults(func=cmd_autgroup)

    p = sub.add_parser("check-ring", help="ring axioms, duality and the Euler identity")
    p.add_argument("path")
    p.set_defaults(func=cmd_check_ring)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())

"""Line-based text format for recognition data and Gram matrices.

Manifold files (``.m6``)::

    # comment
    [manifold]
    genus 1
    betti 1 2 2 2 2 2 1
    torsion none                 # or e.g. "torsion 3:2 4:2,4"

    [cup 1 1]
    0 1 : 0 1                    # e_0 ∪ e_1 = (0, 1) in the H^2 basis
    ...
    [fundamental]
    1
    [u1]
    1 0
    0 1
    [f]
    0 1
    [w2]
    1 0
    [p1]
    0 3
    [action]
    rank 1
    1

    1

Indices are 0-based.  Each cup tensor starts from a default and the listed
lines override it: ``cup 0 L`` and ``cup L 0`` default to the unit, ``cup K L``
with K < L to zero, ``cup L K`` with K < L to the graded-commutative transpose
of ``cup K L``, and in ``cup K K`` an unlisted pair (j, i) with i < j mirrors
(i, j).  The writer lists exactly the entries that differ from the defaults,
so its output is canonical.
"""

from __future__ import annotations

import re
from typing import Optional

import numpy as np

from .cohomology import TOP, GradedRing, ManifoldData, zeros3
from .exact_linalg import identity, imat, ivec
from .forms import IntegralForm


class ParseError(ValueError):
    def __init__(self, message: str, lineno: Optional[int] = None):
        self.lineno = lineno
        super().__init__(f"line {lineno}: {message}" if lineno else message)


_HEADER = re.compile(r"\[\s*([a-z0-9]+)((?:\s+-?\d+)*)\s*\]$")


def _sections(text: str) -> list[tuple[str, tuple[int, ...], int, list[tuple[int, str]]]]:
    out = []
    current = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            if current is not None:
                current[3].append((lineno, ""))
            continue
        if line.startswith("["):
            m = _HEADER.match(line)
            if m is None:
                raise ParseError(f"bad section header {line!r}", lineno)
            current = (m.group(1), tuple(int(x) for x in m.group(2).split()), lineno, [])
            out.append(current)
            continue
        if current is None:
            raise ParseError("content before the first section", lineno)
        current[3].append((lineno, line))
    return out


def _ints(line: str, lineno: int) -> list[int]:
    try:
        return [int(x) for x in line.split()]
    except ValueError:
        raise ParseError(f"expected integers, got {line!r}", lineno) from None


def _content(lines):
    return [(n, l) for n, l in lines if l]


def _vector(lines, length: int, name: str, lineno: int) -> list[int]:
    body = _content(lines)
    values = [x for n, l in body for x in _ints(l, n)]
    if len(values) != length:
        at = body[-1][0] if body else lineno
        raise ParseError(f"[{name}] has {len(values)} entries, expected {length}", at)
    return values


def _matrix(lines, nrows: int, ncols: int, name: str, lineno: int) -> np.ndarray:
    body = _content(lines)
    if len(body) != nrows:
        raise ParseError(f"[{name}] has {len(body)} rows, expected {nrows}", body[-1][0] if body else lineno)
    rows = []
    for n, l in body:
        row = _ints(l, n)
        if len(row) != ncols:
            raise ParseError(f"[{name}] row has {len(row)} entries, expected {ncols}", n)
        rows.append(row)
    return imat(rows, shape=(nrows, ncols))


def _parse_torsion(tokens: list[str], lineno: int) -> tuple:
    torsion = [() for _ in range(TOP + 1)]
    if tokens == ["none"]:
        return tuple(torsion)
    for tok in tokens:
        m = re.fullmatch(r"(\d+):(\d+(?:,\d+)*)", tok)
        if m is None or int(m.group(1)) > TOP:
            raise ParseError(f"bad torsion entry {tok!r}", lineno)
        torsion[int(m.group(1))] = tuple(int(x) for x in m.group(2).split(","))
    return tuple(torsion)


def _default_tensor(k: int, l: int, betti, loaded: dict) -> np.ndarray:
    if k == 0 or l == 0:
        n = betti[l] if k == 0 else betti[k]
        return identity(n).reshape((1, n, n) if k == 0 else (n, 1, n))
    if k > l:
        sign = -1 if (k * l) % 2 else 1
        return sign * loaded[l, k].transpose(1, 0, 2)
    return zeros3(betti[k], betti[l], betti[k + l])


def load_manifold(text: str) -> ManifoldData:
    sections = _sections(text)
    by_name: dict = {}
    cups: dict = {}
    for name, args, lineno, lines in sections:
        if name == "cup":
            if len(args) != 2:
                raise ParseError("cup section needs two degrees", lineno)
            if args in cups:
                raise ParseError(f"duplicate section [cup {args[0]} {args[1]}]", lineno)
            cups[args] = (lineno, lines)
        else:
            if args:
                raise ParseError(f"section [{name}] takes no arguments", lineno)
            if name in by_name:
                raise ParseError(f"duplicate section [{name}]", lineno)
            by_name[name] = (lineno, lines)
    required = ("manifold", "fundamental", "u1", "f", "w2", "p1", "action")
    for name in required:
        if name not in by_name:
            raise ParseError(f"missing section [{name}]")
    unknown = set(by_name) - set(required)
    if unknown:
        raise ParseError(f"unknown section [{sorted(unknown)[0]}]", by_name[sorted(unknown)[0]][0])

    genus = betti = None
    torsion = tuple(() for _ in range(TOP + 1))
    for n, line in _content(by_name["manifold"][1]):
        key, *rest = line.split()
        if key == "genus":
            vals = _ints(" ".join(rest), n)
            if len(vals) != 1:
                raise ParseError("genus takes one integer", n)
            genus = vals[0]
        elif key == "betti":
            betti = _ints(" ".join(rest), n)
            if len(betti) != TOP + 1 or any(b < 0 for b in betti):
                raise ParseError(f"betti needs {TOP + 1} nonnegative integers", n)
        elif key == "torsion":
            torsion = _parse_torsion(rest, n)
        else:
            raise ParseError(f"unknown key {key!r} in [manifold]", n)
    if genus is None or betti is None:
        raise ParseError("[manifold] needs genus and betti", by_name["manifold"][0])
    if genus < 0:
        raise ParseError("genus must be nonnegative", by_name["manifold"][0])

    loaded: dict = {}
    explicit: dict = {}
    order = sorted(
        ((k, l) for k in range(TOP + 1) for l in range(TOP + 1 - k)),
        key=lambda kl: (kl[0] > kl[1], kl),
    )
    for k, l in order:
        t = _default_tensor(k, l, betti, loaded).copy()
        seen = set()
        if (k, l) in cups:
            lineno, lines = cups.pop((k, l))
            for n, line in _content(lines):
                if ":" not in line:
                    raise ParseError("cup line needs 'i j : coefficients'", n)
                left, right = line.split(":", 1)
                ij = _ints(left, n)
                coeffs = _ints(right, n)
                if len(ij) != 2:
                    raise ParseError("cup line needs two basis indices before ':'", n)
                i, j = ij
                if not (0 <= i < betti[k] and 0 <= j < betti[l]):
                    raise ParseError(f"basis index out of range for [cup {k} {l}]", n)
                if len(coeffs) != betti[k + l]:
                    raise ParseError(f"expected {betti[k + l]} coefficients, got {len(coeffs)}", n)
                t[i, j] = ivec(coeffs)
                seen.add((i, j))
        if k == l and k > 0:
            sign = -1 if k % 2 else 1
            for i in range(betti[k]):
                for j in range(i + 1, betti[k]):
                    if (j, i) not in seen:
                        t[j, i] = sign * t[i, j]
        loaded[k, l] = t
    if cups:
        (k, l), (lineno, _) = next(iter(cups.items()))
        raise ParseError(f"[cup {k} {l}] exceeds the top degree", lineno)

    lineno, lines = by_name["fundamental"]
    ev = _vector(lines, betti[TOP], "fundamental", lineno)
    try:
        ring = GradedRing(tuple(betti), loaded, ivec(ev), torsion)
    except ValueError as exc:
        raise ParseError(str(exc)) from None

    lineno, lines = by_name["u1"]
    u1 = _matrix(lines, betti[1], 2 * genus, "u1", lineno)
    vecs = {name: _vector(by_name[name][1], betti[2], name, by_name[name][0]) for name in ("f", "w2", "p1")}
    if any(x not in (0, 1) for x in vecs["w2"]):
        raise ParseError("w2 entries must be 0 or 1", by_name["w2"][0])

    lineno, lines = by_name["action"]
    body = _content(lines)
    if not body or not body[0][1].startswith("rank"):
        raise ParseError("[action] must start with 'rank r'", lineno)
    rank_vals = _ints(body[0][1][len("rank"):], body[0][0])
    if len(rank_vals) != 1 or rank_vals[0] < 0:
        raise ParseError("'rank' takes one nonnegative integer", body[0][0])
    rank = rank_vals[0]
    rows = body[1:]
    if len(rows) != 2 * genus * rank:
        raise ParseError(f"[action] has {len(rows)} rows, expected {2 * genus} blocks of {rank}", lineno)
    mats = []
    for b in range(2 * genus):
        mats.append(_matrix(rows[b * rank:(b + 1) * rank], rank, rank, "action", lineno))
    try:
        return ManifoldData(ring, genus, u1, vecs["f"], vecs["w2"], vecs["p1"], tuple(mats), rank)
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def _fmt(values) -> str:
    return " ".join(str(int(x)) for x in values)


def dump_manifold(d: ManifoldData, comment: Optional[str] = None) -> str:
    ring = d.ring
    betti = ring.betti
    out = []
    if comment:
        out += [f"# {line}" for line in comment.splitlines()]
    tors = [f"{k}:{','.join(map(str, ds))}" for k, ds in enumerate(ring.torsion) if ds]
    out += [
        "[manifold]",
        f"genus {d.genus}",
        f"betti {_fmt(betti)}",
        f"torsion {' '.join(tors) if tors else 'none'}",
    ]
    loaded: dict = {}
    order = sorted(
        ((k, l) for k in range(TOP + 1) for l in range(TOP + 1 - k)),
        key=lambda kl: (kl[0] > kl[1], kl),
    )
    for k, l in order:
        actual = ring.product(k, l)
        default = _default_tensor(k, l, betti, loaded)
        loaded[k, l] = actual
        lines = []
        for i in range(betti[k]):
            for j in range(betti[l]):
                if k == l and k > 0 and j < i:
                    sign = -1 if k % 2 else 1
                    want = sign * actual[j, i]
                else:
                    want = default[i, j]
                if not np.array_equal(actual[i, j], want):
                    lines.append(f"{i} {j} : {_fmt(actual[i, j])}")
        if lines:
            out += ["", f"[cup {k} {l}]"] + lines
    out += ["", "[fundamental]", _fmt(ring.eval)]
    out += ["", "[u1]"] + [_fmt(row) for row in d.u1]
    out += ["", "[f]", _fmt(d.f), "", "[w2]", _fmt(d.w2), "", "[p1]", _fmt(d.p1)]
    out += ["", "[action]", f"rank {d.action_rank}"]
    for b, m in enumerate(d.action):
        if b:
            out.append("")
        out += [_fmt(row) for row in m]
    return "\n".join(out) + "\n"


def load_gram(text: str) -> IntegralForm:
    """Gram matrix file: optional ``[gram]`` header, one row per line."""
    rows = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line or line == "[gram]":
            continue
        rows.append((lineno, _ints(line, lineno)))
    n = len(rows)
    for lineno, row in rows:
        if len(row) != n:
            raise ParseError(f"Gram row has {len(row)} entries, expected {n}", lineno)
    return IntegralForm(imat([r for _, r in rows], shape=(n, n)))


def dump_gram(form: IntegralForm) -> str:
    return "\n".join(["[gram]"] + [_fmt(row) for row in form.gram]) + "\n"

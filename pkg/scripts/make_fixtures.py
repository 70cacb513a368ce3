"""Write the standard fixture corpus to fixtures/ with a MANIFEST.

Usage: python scripts/make_fixtures.py [--out DIR] [--check]

With --check nothing is written; the script exits 1 if any shipped file
differs from what the generator produces.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from surfprod.corpus import standard_fixtures
from surfprod.fileformat import dump_manifold

ROOT = Path(__file__).resolve().parent.parent


def render() -> dict[str, str]:
    files = {}
    manifest = ["# name\texpected outcome"]
    for fx in standard_fixtures():
        comment = fx.note or fx.name
        files[f"{fx.name}.m6"] = dump_manifold(fx.data, comment)
        manifest.append(f"{fx.name}\t{fx.expected.describe()}")
    files["MANIFEST"] = "\n".join(manifest) + "\n"
    return files


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", type=Path, default=ROOT / "fixtures")
    parser.add_argument("--check", action="store_true")
    args = parser.parse_args(argv)
    files = render()
    if args.check:
        stale = [n for n, text in files.items()
                 if not (args.out / n).is_file() or (args.out / n).read_text(encoding="utf-8") != text]
        for n in stale:
            print(f"stale: {n}")
        return 1 if stale else 0
    args.out.mkdir(parents=True, exist_ok=True)
    for name, text in files.items():
        (args.out / name).write_text(text, encoding="utf-8")
    print(f"wrote {len(files)} files to {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())

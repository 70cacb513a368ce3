"""Print the outcome of every mutation on a few base products."""

import argparse

from surfprod.corpus import MUTATIONS, mutate, product_fixture
from surfprod.recognizer import recognize

BASES = [("<1>", 1), ("H", 2), ("<1>+<-1>", 1), ("-E8+-E8+H+H+H", 1)]

if __name__ == "__main__":
    parser = argparse.ArgumentParser(description=__doc__)
    parser.parse_args()
    for spec, g in BASES:
        base = product_fixture(f"{spec},g={g}", spec, g)
        for kind, want in MUTATIONS.items():
            try:
                fx = mutate(base, kind)
            except ValueError as exc:
                print(f"{base.name:22s} {kind:12s} skipped: {exc}")
                continue
            report = recognize(fx.data)
            got = report.condition or report.kind
            mark = "ok" if got == want else "MISMATCH"
            print(f"{base.name:22s} {kind:12s} expected={want:12s} got={got:12s} {mark}")

"""Count automorphisms of E8 by the stabiliser-chain backtracker and time it."""

import time

from surfprod.forms import automorphism_group, parse_form_spec

EXPECTED = 696_729_600

if __name__ == "__main__":
    t0 = time.perf_counter()
    group = automorphism_group(parse_form_spec("E8"))
    dt = time.perf_counter() - t0
    print(f"order={group.order} generators={len(group.generators)} time={dt:.2f}s")
    print("ok" if group.order == EXPECTED else f"MISMATCH: expected {EXPECTED}")

#!/usr/bin/env python3
"""Audit every shipped plan family end to end and print one line per graph.

Each line reports the exact privacy verdict at every server, the decode
spot-check verdict, the audited rate, and whether that rate sits inside
the theoretical bounds for the graph.  Exit status is nonzero if any
family fails any check.
"""

import argparse
import time

from localpir.capacity import graph_bounds
from localpir.graphs import family
from localpir.scheme import (
    bipartite_config,
    build_plan_family,
    et_config,
    fixture_config,
)
from localpir.verify import check_scheme


def battery():
    for n in range(3, 7):
        yield f"cycle{n}-t1", family("cycle", n), et_config(1)
        yield f"cycle{n}-t2", family("cycle", n), et_config(2)
    yield "complete4-t2", family("complete", 4), et_config(2)
    for n in range(3, 9):
        yield f"star{n}", family("star", n), bipartite_config()
    for n in range(3, 8):
        yield f"path{n}", family("path", n), bipartite_config()
    yield "fixture-c4", family("cycle", 4), fixture_config("c4")
    yield "fixture-k4", family("complete", 4), fixture_config("k4")


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--q", type=int, default=2, help="prime field size")
    parser.add_argument("--seeds", type=int, default=16,
                        help="decode spot checks per message")
    args = parser.parse_args()

    failures = 0
    start = time.perf_counter()
    for label, g, cfg in battery():
        plans = build_plan_family(g, cfg)
        rep = check_scheme(plans, g, q=args.q, seeds=args.seeds)
        bounds = graph_bounds(g)
        inside = bounds.lower <= rep.cost.rate and rep.cost.rate <= bounds.upper
        ok = rep.ok and inside
        failures += 0 if ok else 1
        print(f"{label:15s} {'PASS' if ok else 'FAIL'}  "
              f"rate {str(rep.cost.rate):5s}  "
              f"bounds [{bounds.lower}, {bounds.upper}]  "
              f"privacy {sum(p.ok for p in rep.privacy)}/{len(rep.privacy)}  "
              f"decode {rep.decode.trials} trials")
    elapsed = time.perf_counter() - start
    print(f"\n{failures} failures, {elapsed:.1f}s")
    return 1 if failures else 0


if __name__ == "__main__":
    raise SystemExit(main())

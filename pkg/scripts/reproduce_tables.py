#!/usr/bin/env python3
"""Print the two worked reference tables and confirm the generator matches.

The 4-cycle table (subset size 2, message length 2, rate 1/2) and the
complete-graph-on-4 table (subset size 2, message length 4, rate 2/5) are
frozen by hand in localpir.fixtures.  This script rebuilds both from the
running-count construction and prints them in the same letter notation the
CLI uses, then checks cell-for-cell agreement with the frozen copies.
"""

import sys

from localpir.cli import render_plans
from localpir.fixtures import C4_TABLE, K4_TABLE
from localpir.graphs import family
from localpir.scheme import build_plan_family, et_config


def as_multisets(queries_by_server):
    return {s: sorted(tuple(sorted(atom)) for atom in atoms)
            for s, atoms in queries_by_server.items() if atoms}


def show(name, g, table):
    plans = build_plan_family(g, et_config(2, 2))
    print(f"== {name} ==")
    print(render_plans(g, plans, list(g.messages)))
    agree = all(
        as_multisets({s: plans[t].atoms_at(s) for s in g.vertices})
        == as_multisets(table[t])
        for t in g.messages)
    print(f"matches frozen reference: {'yes' if agree else 'NO'}")
    print()
    return agree


def main() -> int:
    ok = show("4-cycle, subset size 2", family("cycle", 4), C4_TABLE)
    ok &= show("complete graph on 4, subset size 2",
               family("complete", 4), K4_TABLE)
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())

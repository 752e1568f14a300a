"""Shared test utilities: plan mutations and corpus builders.

The mutations deliberately break a plan in one specific way so the
verifier's sensitivity can be exercised; each returns a fresh plan family
with exactly one desired message's layout altered.
"""

from math import comb

from localpir.graphs import Graph, family
from localpir.scheme import (
    PlanConfig,
    SchemePlan,
    bipartite_config,
    build_plan_family,
    et_config,
    fixture_config,
)


def plan_with_queries(plan: SchemePlan, queries) -> SchemePlan:
    """Copy a plan, swapping in mutated queries but keeping the recipe."""
    return SchemePlan(plan.graph, plan.kind, plan.theta, dict(plan.lengths),
                      queries, plan.recipe, dict(plan.meta))


def strip_offset(plan: SchemePlan) -> dict:
    """Undo the second endpoint's position shift on the desired message."""
    off = comb(plan.meta["deg_i"] - 1, plan.meta["t_i"] - 1)
    j = plan.meta["role_j"]
    queries = dict(plan.queries)
    queries[j] = tuple(
        tuple((m, p - off if m == plan.theta else p) for (m, p) in atom)
        for atom in queries[j])
    return queries


def corrupt_gamma(plan: SchemePlan) -> dict:
    """Shift one interference singleton to a wrong occurrence index."""
    queries = dict(plan.queries)
    for server in sorted(queries):
        atoms = list(queries[server])
        for idx, atom in enumerate(atoms):
            (m, pos), = atom if len(atom) == 1 else ((None, None),)
            if m is not None and m != plan.theta and plan.lengths[m] > 1:
                atoms[idx] = ((m, pos % plan.lengths[m] + 1),)
                queries[server] = tuple(atoms)
                return queries
    raise AssertionError("no corruptible singleton found")


def silence_server(plan: SchemePlan, server: int) -> dict:
    """Drop every atom one server would receive for this desired message."""
    queries = dict(plan.queries)
    queries[server] = ()
    return queries


def mutated_family(plans: dict, theta: int, queries) -> dict:
    out = dict(plans)
    out[theta] = plan_with_queries(plans[theta], queries)
    return out


def shipped_corpus() -> list[tuple[str, Graph, PlanConfig]]:
    """Every (label, graph, config) triple the verification battery covers."""
    corpus = []
    for n in range(3, 7):
        corpus.append((f"cycle{n}-t1", family("cycle", n), et_config(1)))
        corpus.append((f"cycle{n}-t2", family("cycle", n), et_config(2)))
    corpus.append(("complete4-t2", family("complete", 4), et_config(2)))
    for n in range(3, 9):
        corpus.append((f"star{n}", family("star", n), bipartite_config()))
    for n in range(3, 8):
        corpus.append((f"path{n}", family("path", n), bipartite_config()))
    corpus.append(("fixture-c4", family("cycle", 4), fixture_config("c4")))
    corpus.append(("fixture-k4", family("complete", 4), fixture_config("k4")))
    return corpus


def corpus_plans():
    return [(label, g, build_plan_family(g, cfg))
            for (label, g, cfg) in shipped_corpus()]

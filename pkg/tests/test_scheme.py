"""Plan construction: t-sum, cover, union, fixtures, decoding."""

import itertools
import random
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from localpir.errors import (
    ElementAbsent,
    IncompleteAnswers,
    IndexOutOfRange,
    InvalidFamilyParams,
    MissingComponentConfig,
    NotBipartite,
    RoleConflict,
    TOutOfRange,
    UndecodablePlan,
    UnresolvableRef,
)
from localpir.field import Field
from localpir.fixtures import C4_TABLE, K4_TABLE
from localpir.graphs import build_graph, family
from localpir.scheme import (
    PlanConfig,
    answer,
    bipartite_config,
    build_bipartite_plan,
    build_et_plan,
    build_fixture_plan,
    build_plan,
    build_plan_family,
    build_union_plan,
    decode,
    default_component_config,
    default_role_rule,
    derive_recipe,
    et_config,
    et_download_cost,
    fixture_config,
    lex_subsets,
    occurrence_index,
    sample_randomness,
    subpacketization,
    to_physical,
    union_config,
)


# --- combinatorial helpers ---------------------------------------------------

def test_lex_subsets_example():
    assert lex_subsets((1, 2, 3), 2) == [(1, 2), (1, 3), (2, 3)]


def test_lex_subsets_rejects_bad_t():
    with pytest.raises(TOutOfRange):
        lex_subsets((1, 2, 3), 0)
    with pytest.raises(TOutOfRange):
        lex_subsets((1, 2, 3), 4)


@given(st.integers(1, 8), st.data())
def test_lex_subsets_matches_bitmask_oracle(n, data):
    items = tuple(range(1, n + 1))
    t = data.draw(st.integers(1, n))
    oracle = sorted(
        tuple(items[i] for i in range(n) if mask >> i & 1)
        for mask in range(1 << n)
        if bin(mask).count("1") == t)
    assert lex_subsets(items, t) == oracle


def test_occurrence_index_example():
    subsets = ((1, 2), (1, 3), (2, 3))
    assert occurrence_index(subsets, 1, 2) == 2
    assert occurrence_index(subsets, 2, 1) == 1
    assert occurrence_index(subsets, 3, 3) == 2


def test_occurrence_index_errors():
    subsets = ((1, 2), (1, 3))
    with pytest.raises(IndexOutOfRange):
        occurrence_index(subsets, 1, 3)
    with pytest.raises(ElementAbsent):
        occurrence_index(subsets, 3, 1)


@pytest.mark.parametrize("args,expected", [
    ((2, 2, 2, 2), 4),
    ((3, 3, 2, 2), 10),
    ((5, 5, 1, 1), 10),
])
def test_et_download_cost_examples(args, expected):
    assert et_download_cost(*args) == expected


@pytest.mark.parametrize("d", range(1, 7))
def test_t1_cost_is_two_d(d):
    assert et_download_cost(d, d, 1, 1) == 2 * d
    assert subpacketization(d, d, 1, 1) == 2


def test_subpacketization_examples():
    assert subpacketization(2, 2, 2, 2) == 2
    assert subpacketization(3, 3, 2, 2) == 4
    with pytest.raises(TOutOfRange):
        subpacketization(2, 2, 3, 2)


# --- role assignment ---------------------------------------------------------

def test_role_rule_prefers_smaller_degree():
    g = family("star", 5)
    i, j = default_role_rule(g, 2, 1, 2)
    assert (g.degree(i), g.degree(j)) == (1, 4)


def test_role_rule_equal_degrees_needs_equal_t():
    g = family("cycle", 4)
    assert default_role_rule(g, 1, 2, 2) == (1, 2)
    with pytest.raises(RoleConflict):
        default_role_rule(g, 1, 1, 2)


def test_et_plan_rejects_bad_theta():
    with pytest.raises(IndexOutOfRange):
        build_et_plan(family("cycle", 4), 5, 2)


# --- fixture equality --------------------------------------------------------

def as_multisets(queries):
    return {s: tuple(sorted(atoms)) for s, atoms in queries.items() if atoms}


def test_c4_plan_reproduces_reference_table():
    g = family("cycle", 4)
    for theta in g.messages:
        plan = build_et_plan(g, theta, 2)
        assert as_multisets(plan.queries) == as_multisets(C4_TABLE[theta])
        assert plan.length == 2
        assert plan.download_count() == 4


def test_k4_plan_reproduces_reference_table():
    g = family("complete", 4)
    for theta in g.messages:
        plan = build_et_plan(g, theta, 2)
        assert as_multisets(plan.queries) == as_multisets(K4_TABLE[theta])
        assert plan.length == 4
        assert plan.download_count() == 10


def test_fixture_plans_wrap_tables_verbatim():
    for theta in range(1, 5):
        plan = build_fixture_plan("c4", theta)
        assert plan.queries == C4_TABLE[theta]
    for theta in range(1, 7):
        plan = build_fixture_plan("k4", theta)
        assert plan.queries == K4_TABLE[theta]


def test_fixture_plan_validates_graph():
    with pytest.raises(InvalidFamilyParams):
        build_fixture_plan("c4", 1, family("cycle", 5))
    with pytest.raises(InvalidFamilyParams):
        build_fixture_plan("nope", 1)


def test_star_fixture_matches_generated_bipartite():
    g = family("star", 6)
    for theta in g.messages:
        fx = build_plan(g, fixture_config("star"), theta)
        bp = build_bipartite_plan(g, theta)
        assert fx.queries == bp.queries


# --- structural invariants of generated t-sum plans --------------------------

ET_CASES = [(family("cycle", n), t) for n in (3, 4, 5, 6) for t in (1, 2)]
ET_CASES += [(family("complete", n), t) for n in (3, 4, 5)
             for t in range(1, n)]


@pytest.mark.parametrize("g,t", ET_CASES)
def test_et_atom_count_matches_closed_form(g, t):
    for theta in g.messages:
        plan = build_et_plan(g, theta, t)
        d_i, d_j = plan.meta["deg_i"], plan.meta["deg_j"]
        assert plan.download_count() == et_download_cost(d_i, d_j, t, t)
        assert plan.length == subpacketization(d_i, d_j, t, t)


@pytest.mark.parametrize("g,t", ET_CASES)
def test_et_offset_discipline(g, t):
    """The two endpoints jointly cover positions 1..L, split at the offset."""
    for theta in g.messages:
        plan = build_et_plan(g, theta, t)
        i, j = plan.meta["role_i"], plan.meta["role_j"]
        offset = comb(plan.meta["deg_i"] - 1, t - 1)
        pos_i = [p for atom in plan.atoms_at(i) for (m, p) in atom
                 if m == theta]
        pos_j = [p for atom in plan.atoms_at(j) for (m, p) in atom
                 if m == theta]
        assert sorted(pos_i) == list(range(1, offset + 1))
        assert sorted(pos_j) == list(range(offset + 1, plan.length + 1))


@pytest.mark.parametrize("g,t", ET_CASES)
def test_et_atoms_are_distinct_and_refs_injective(g, t):
    for theta in g.messages:
        plan = build_et_plan(g, theta, t)
        for server, atoms in plan.queries.items():
            assert len(set(atoms)) == len(atoms)
            for atom in atoms:
                msgs = [m for (m, _) in atom]
                assert len(set(msgs)) == len(msgs)
                assert all(1 <= p <= plan.lengths[m] for (m, p) in atom)


def test_t1_plans_are_all_singletons_even_off_family():
    paw = build_graph(4, [(1, 2), (1, 3), (2, 3), (1, 4)])
    for theta in paw.messages:
        plan = build_et_plan(paw, theta, 1)
        for atoms in plan.queries.values():
            assert all(len(atom) == 1 for atom in atoms)


def test_interference_singletons_avoid_desired_endpoints():
    for g in (family("cycle", 4), family("complete", 4)):
        for theta in g.messages:
            plan = build_et_plan(g, theta, 2)
            endpoints = set(g.endpoints(theta))
            for server, atoms in plan.queries.items():
                if server in endpoints:
                    continue
                assert all(len(atom) == 1 and atom[0][0] != theta
                           for atom in atoms)


# --- bipartite cover plans ---------------------------------------------------

def test_bipartite_plan_star_contacts_one_leaf():
    g = family("star", 5)
    for theta in g.messages:
        plan = build_bipartite_plan(g, theta)
        assert list(plan.queries) == [theta]
        assert plan.queries[theta] == (((theta, 1),),)


def test_bipartite_plan_path5_costs():
    g = family("path", 5)
    # parts (1,3,5) and (2,4): squared-degree sums 6 and 8, so the odd
    # part covers and total download over all four messages is 6.
    downloads = {}
    for theta in g.messages:
        plan = build_bipartite_plan(g, theta)
        assert plan.meta["m_star"] == 1
        downloads[theta] = plan.download_count()
    assert downloads == {1: 1, 2: 2, 3: 2, 4: 1}


def test_bipartite_plan_longer_messages():
    g = family("path", 5)
    plan = build_bipartite_plan(g, 2, length=3)
    assert plan.length == 3
    assert plan.download_count() == 6


def test_bipartite_queries_do_not_depend_on_theta():
    g = family("path", 7)
    by_server = {}
    for theta in g.messages:
        plan = build_bipartite_plan(g, theta)
        for server, atoms in plan.queries.items():
            by_server.setdefault(server, set()).add(atoms)
    for server, variants in by_server.items():
        assert len(variants) == 1


def test_bipartite_rejects_odd_cycle():
    with pytest.raises(NotBipartite):
        build_bipartite_plan(family("cycle", 5), 1)


def test_bipartite_rejects_bad_partition():
    g = family("cycle", 4)
    with pytest.raises(NotBipartite):
        build_bipartite_plan(g, 1, partition=((1, 2), (3, 4)))
    with pytest.raises(NotBipartite):
        build_bipartite_plan(g, 1, partition=((1, 3), (2,)))


# --- union plans ---------------------------------------------------------

def mixed_graph():
    c4 = family("cycle", 4)
    s5 = family("star", 5)
    edges = list(c4.edges) + [(u + 4, v + 4) for (u, v) in s5.edges]
    return build_graph(9, edges)


def test_union_plan_routes_to_the_right_component():
    g = mixed_graph()
    plan_cycle = build_union_plan(g, 2)
    assert set(plan_cycle.queries) <= {1, 2, 3, 4}
    plan_star = build_union_plan(g, 6)
    assert list(plan_star.queries) == [6]
    assert plan_star.queries[6] == (((6, 1),),)


def test_union_plan_lengths_differ_per_component():
    g = mixed_graph()
    plan = build_union_plan(g, 1)
    assert plan.lengths[1] == 2      # cycle component, singleton sums
    assert plan.lengths[5] == 1      # star component, direct downloads
    assert plan.length == 2


def test_union_plan_config_count_checked():
    g = mixed_graph()
    with pytest.raises(MissingComponentConfig):
        build_union_plan(g, 1, (et_config(1),))


def test_union_config_explicit_components():
    g = mixed_graph()
    plan = build_union_plan(g, 1, (et_config(1), bipartite_config()))
    assert plan.download_count() == 4


def test_default_component_config_choices():
    assert default_component_config(family("cycle", 4)) == et_config(1, 1)
    assert default_component_config(family("star", 5)) == bipartite_config()
    assert default_component_config(family("complete", 4)) == et_config(2, 2)
    paw = build_graph(4, [(1, 2), (1, 3), (2, 3), (1, 4)])
    assert default_component_config(paw) == et_config(1, 1)


def test_build_plan_dispatch():
    g = family("cycle", 4)
    assert build_plan(g, et_config(2), 1).kind == "et"
    assert build_plan(g, bipartite_config(), 1).kind == "bipartite"
    assert build_plan(g, union_config(), 1).kind == "union"
    assert build_plan(g, fixture_config("c4"), 1).kind == "fixture"
    with pytest.raises(InvalidFamilyParams):
        build_plan(g, PlanConfig(kind="bogus"), 1)


# --- decoding ----------------------------------------------------------------

def test_derive_recipe_rejects_missing_singleton():
    queries = {1: (((1, 1), (2, 1)),)}
    with pytest.raises(UndecodablePlan):
        derive_recipe(queries, 1, 1)


def test_derive_recipe_rejects_duplicate_position():
    queries = {1: (((1, 1),),), 2: (((1, 1),),)}
    with pytest.raises(UndecodablePlan):
        derive_recipe(queries, 1, 1)


def test_derive_recipe_rejects_uncovered_position():
    queries = {1: (((1, 1),),)}
    with pytest.raises(UndecodablePlan):
        derive_recipe(queries, 1, 2)


def test_derive_recipe_rejects_double_desired_ref():
    queries = {1: (((1, 1), (1, 2)),)}
    with pytest.raises(UndecodablePlan):
        derive_recipe(queries, 1, 2)


def run_pipeline(plan, q, seed):
    fld = Field(q)
    rng = random.Random(seed)
    storage = {k: [rng.randrange(q) for _ in range(plan.lengths[k])]
               for k in plan.graph.messages}
    rnd = sample_randomness(plan, rng)
    physical = to_physical(plan, rnd)
    answers = {
        s: answer(atoms, {k: storage[k] for k in plan.graph.index_set(s)},
                  fld)
        for s, atoms in physical.items()}
    return decode(plan, answers, rnd, fld), storage


@pytest.mark.parametrize("q", [2, 3, 5])
@pytest.mark.parametrize("cfg,g", [
    (et_config(2), family("cycle", 4)),
    (et_config(2), family("complete", 4)),
    (bipartite_config(2), family("path", 6)),
    (union_config(), mixed_graph()),
])
def test_decode_round_trip(q, cfg, g):
    for theta in g.messages:
        plan = build_plan(g, cfg, theta)
        for seed in range(5):
            decoded, storage = run_pipeline(plan, q, seed)
            assert decoded == storage[theta]


def test_sample_randomness_covers_exactly_referenced_messages():
    plan = build_et_plan(family("cycle", 4), 1, 2)
    rnd = sample_randomness(plan, random.Random(0))
    assert tuple(sorted(rnd.perms)) == plan.referenced_messages()
    for m, perm in rnd.perms.items():
        assert sorted(perm) == list(range(1, plan.lengths[m] + 1))


def test_answer_rejects_unknown_refs():
    fld = Field(2)
    with pytest.raises(UnresolvableRef):
        answer((((9, 1),),), {1: [0]}, fld)
    with pytest.raises(UnresolvableRef):
        answer((((1, 3),),), {1: [0, 1]}, fld)


def test_decode_requires_complete_answers():
    plan = build_et_plan(family("cycle", 4), 1, 2)
    fld = Field(2)
    rnd = sample_randomness(plan, random.Random(0))
    with pytest.raises(IncompleteAnswers):
        decode(plan, {}, rnd, fld)
    short = {s: [0] * (len(atoms) - 1) for s, atoms in plan.queries.items()}
    with pytest.raises(IncompleteAnswers):
        decode(plan, short, rnd, fld)


def test_plan_family_covers_every_message():
    g = family("complete", 4)
    plans = build_plan_family(g, et_config(2))
    assert sorted(plans) == list(g.messages)

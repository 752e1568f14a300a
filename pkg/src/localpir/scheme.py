"""Retrieval plans: how a user queries edge-replicated servers.

A plan fixes, for one desired message, the logical query layout per server
(atoms = sums of symbol references), plus a decoding recipe.  Logical
position m of message k means the m-th symbol under the user's private
permutation of message k; the executor translates logical positions to
physical ones before anything is sent, so servers only ever see physical
indices.

Three constructions are provided.

t-sum plan (for edge-transitive storage): the two endpoint servers of the
desired edge answer one sum per t-subset of their stored messages.  Fresh
symbol positions come from a running occurrence count over the subsets in
lexicographic order; at the second endpoint the desired message's positions
are shifted past the block already covered by the first, so the two
endpoints jointly deliver all L = C(d_i-1, t_i-1) + C(d_j-1, t_j-1)
symbols.  Every other symbol entangled with the desired one is fetched as a
plain singleton from the opposite server that replicates it, which lets the
decoder cancel it.

Bipartite cover plan: pick the part with the smaller sum of squared
degrees; the desired edge's endpoint in that part sends its entire storage,
every other server stays silent.  Queries per server never depend on which
of its messages is wanted.

Union plan: route the retrieval to the connected component holding the
desired message and renumber the component plan back into global ids.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Callable, NamedTuple

from .errors import (
    ElementAbsent,
    EndpointAmbiguity,
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
from .field import Field
from .fixtures import fixture_graph, fixture_table
from .graphs import Graph, bipartition, components

Ref = tuple[int, int]          # (message, position), both 1-based
Atom = tuple[Ref, ...]         # one downloaded symbol: a sum of refs


class DecodeStep(NamedTuple):
    """Recover logical symbol `position` of the desired message.

    Take the answer at `source` and subtract the answers at `cancel`
    (each is a (server, atom_index) pair into the plan's query lists).
    """

    position: int
    source: tuple[int, int]
    cancel: tuple[tuple[int, int], ...]


@dataclass
class SchemePlan:
    """Logical query layout and decoding recipe for one desired message."""

    graph: Graph
    kind: str
    theta: int
    lengths: dict[int, int]                 # message -> symbol count
    queries: dict[int, tuple[Atom, ...]]    # server -> atoms
    recipe: tuple[DecodeStep, ...]
    meta: dict = field(default_factory=dict)

    @property
    def length(self) -> int:
        """Symbol count of the desired message."""
        return self.lengths[self.theta]

    def atoms_at(self, server: int) -> tuple[Atom, ...]:
        return self.queries.get(server, ())

    def download_count(self) -> int:
        return sum(len(atoms) for atoms in self.queries.values())

    def referenced_messages(self) -> tuple[int, ...]:
        msgs = {m for atoms in self.queries.values()
                for atom in atoms for (m, _) in atom}
        return tuple(sorted(msgs))


@dataclass(frozen=True)
class PlanConfig:
    """Which construction to run, with its parameters.

    kind is one of "et" (t-sum on edge-transitive storage), "bipartite",
    "union", or "fixture".  For unions, `component_configs` holds one
    config per connected component (ordered as `graphs.components`); None
    selects a default per component.
    """

    kind: str
    t_i: int | None = None
    t_j: int | None = None
    length: int = 1
    fixture: str | None = None
    component_configs: tuple["PlanConfig", ...] | None = None


def et_config(t_i: int, t_j: int | None = None) -> PlanConfig:
    return PlanConfig(kind="et", t_i=t_i, t_j=t_i if t_j is None else t_j)


def bipartite_config(length: int = 1) -> PlanConfig:
    return PlanConfig(kind="bipartite", length=length)


def union_config(*component_configs: PlanConfig) -> PlanConfig:
    return PlanConfig(kind="union",
                      component_configs=component_configs or None)


def fixture_config(name: str) -> PlanConfig:
    return PlanConfig(kind="fixture", fixture=name)


# --- combinatorial helpers -------------------------------------------------

def subpacketization(deg_i: int, deg_j: int, t_i: int, t_j: int) -> int:
    """Message length L used by the t-sum construction."""
    _check_t(t_i, deg_i)
    _check_t(t_j, deg_j)
    return comb(deg_i - 1, t_i - 1) + comb(deg_j - 1, t_j - 1)


def lex_subsets(index_set, t: int) -> list[tuple[int, ...]]:
    """All t-subsets in lexicographic order over the given element order."""
    items = tuple(index_set)
    if not 1 <= t <= len(items):
        raise TOutOfRange(f"t={t} outside 1..{len(items)}")
    return list(itertools.combinations(items, t))


def occurrence_index(subsets, element: int, position: int) -> int:
    """Running occurrence count of `element` after `position` subsets.

    `position` is 1-based and must point at a subset containing `element`;
    the count is how many of the first `position` subsets contain it.
    """
    subsets = list(subsets)
    if not 1 <= position <= len(subsets):
        raise IndexOutOfRange(f"position {position} outside 1..{len(subsets)}")
    if element not in subsets[position - 1]:
        raise ElementAbsent(
            f"element {element} not in subset at position {position}")
    return sum(1 for s in subsets[:position] if element in s)


def et_download_cost(deg_i: int, deg_j: int, t_i: int, t_j: int) -> int:
    """Exact symbol count a t-sum plan downloads.

    Sum atoms: C(d_i, t_i) + C(d_j, t_j).  Interference singletons: each of
    the d-1 non-desired messages at an endpoint appears in C(d-2, t-2)
    subsets together with the desired one.
    """
    _check_t(t_i, deg_i)
    _check_t(t_j, deg_j)
    total = comb(deg_i, t_i) + comb(deg_j, t_j)
    if t_i >= 2:
        total += (deg_i - 1) * comb(deg_i - 2, t_i - 2)
    if t_j >= 2:
        total += (deg_j - 1) * comb(deg_j - 2, t_j - 2)
    return total


def _check_t(t: int, deg: int) -> None:
    if not 1 <= t <= deg:
        raise TOutOfRange(f"t={t} outside 1..{deg}")


# --- role assignment -------------------------------------------------------

RoleRule = Callable[[Graph, int, int, int], tuple[int, int]]


def default_role_rule(g: Graph, k: int, t_i: int, t_j: int) -> tuple[int, int]:
    """Assign endpoint roles for the desired edge k.

    Unequal endpoint degrees: the smaller-degree endpoint takes the first
    role, so on degree-biregular storage every server always plays the same
    role.  Equal degrees: the lower-numbered endpoint takes the first role,
    which is only safe when t_i == t_j (otherwise a server would face
    different subset sizes for different desired messages, and its queries
    would give the game away); in that case the rule refuses.
    """
    u, v = g.endpoints(k)
    du, dv = g.degree(u), g.degree(v)
    if du == dv:
        if t_i != t_j:
            raise RoleConflict(
                f"equal endpoint degrees ({du}) need t_i == t_j, "
                f"got {t_i} != {t_j}")
        return (u, v) if u < v else (v, u)
    return (u, v) if du < dv else (v, u)


# --- plan constructions ----------------------------------------------------

def build_et_plan(g: Graph, theta: int, t_i: int, t_j: int | None = None,
                  role_rule: RoleRule = default_role_rule) -> SchemePlan:
    """t-sum plan for message theta.

    Both endpoint servers answer one sum per t-subset of their storage; the
    second endpoint shifts the desired message's positions past the first
    endpoint's block.  Interference singletons go to the opposite replica
    of each entangled message.
    """
    if t_j is None:
        t_j = t_i
    if not 1 <= theta <= g.K:
        raise IndexOutOfRange(f"message {theta} outside 1..{g.K}")
    i, j = role_rule(g, theta, t_i, t_j)
    d_i, d_j = g.degree(i), g.degree(j)
    length = subpacketization(d_i, d_j, t_i, t_j)
    offset = comb(d_i - 1, t_i - 1)

    set_i = g.index_set(i)
    set_j = g.index_set(j)
    subsets_i = lex_subsets(set_i, t_i)
    subsets_j = lex_subsets(set_j, t_j)

    queries: dict[int, list[Atom]] = {}

    def emit(server: int, atom: Atom) -> None:
        queries.setdefault(server, []).append(atom)

    counts: dict[int, int] = {}
    for subset in subsets_i:
        refs = []
        for msg in subset:
            counts[msg] = counts.get(msg, 0) + 1
            refs.append((msg, counts[msg]))
        emit(i, tuple(refs))

    counts = {}
    for subset in subsets_j:
        refs = []
        for msg in subset:
            counts[msg] = counts.get(msg, 0) + 1
            pos = counts[msg] + (offset if msg == theta else 0)
            refs.append((msg, pos))
        emit(j, tuple(refs))

    # Singletons that let the decoder cancel interference: message msg is
    # entangled with theta in every subset containing both; fetch exactly
    # those occurrence positions from msg's other replica.
    for endpoint, subsets in ((i, subsets_i), (j, subsets_j)):
        for msg in g.index_set(endpoint):
            if msg == theta:
                continue
            u, v = g.endpoints(msg)
            other = v if u == endpoint else u
            for p, subset in enumerate(subsets, start=1):
                if theta in subset and msg in subset:
                    emit(other, ((msg, occurrence_index(subsets, msg, p)),))

    frozen = {server: tuple(atoms) for server, atoms in queries.items()}
    lengths = {k: length for k in g.messages}
    recipe = derive_recipe(frozen, theta, length)
    meta = {"t_i": t_i, "t_j": t_j, "role_i": i, "role_j": j,
            "deg_i": d_i, "deg_j": d_j}
    return SchemePlan(g, "et", theta, lengths, frozen, recipe, meta)


def build_bipartite_plan(g: Graph, theta: int,
                         partition=None, length: int = 1) -> SchemePlan:
    """Cover plan for two-colorable storage.

    The part with the smaller sum of squared degrees (ties: part 1) is the
    covering part; the desired edge's endpoint there sends all its symbols.
    """
    if not 1 <= theta <= g.K:
        raise IndexOutOfRange(f"message {theta} outside 1..{g.K}")
    if length < 1:
        raise InvalidFamilyParams(f"message length must be >= 1, got {length}")
    if partition is None:
        partition = bipartition(g)
        if partition is None:
            raise NotBipartite("graph is not two-colorable")
    part1, part2 = tuple(partition[0]), tuple(partition[1])
    _validate_partition(g, part1, part2)
    sums = [sum(g.degree(v) ** 2 for v in part) for part in (part1, part2)]
    m_star = 1 if sums[0] <= sums[1] else 2
    cover = set(part1 if m_star == 1 else part2)

    u, v = g.endpoints(theta)
    if u in cover and v in cover:
        raise EndpointAmbiguity(
            f"both endpoints of message {theta} lie in the covering part")
    server = u if u in cover else v

    atoms = tuple(((msg, pos),)
                  for msg in g.index_set(server)
                  for pos in range(1, length + 1))
    queries = {server: atoms}
    lengths = {k: length for k in g.messages}
    recipe = derive_recipe(queries, theta, length)
    meta = {"m_star": m_star, "cover_vertex": server,
            "part1": part1, "part2": part2}
    return SchemePlan(g, "bipartite", theta, lengths, queries, recipe, meta)


def _validate_partition(g: Graph, part1, part2) -> None:
    seen = set(part1) | set(part2)
    if (len(part1) + len(part2) != g.n_vertices
            or seen != set(g.vertices)):
        raise NotBipartite("partition does not split the vertex set")
    p1 = set(part1)
    for (u, v) in g.edges:
        if (u in p1) == (v in p1):
            raise NotBipartite(f"edge ({u},{v}) does not cross the partition")


def build_union_plan(g: Graph, theta: int,
                     component_configs=None) -> SchemePlan:
    """Dispatch to the component holding theta and renumber to global ids."""
    comps = components(g)
    if component_configs is None:
        component_configs = tuple(default_component_config(c.graph)
                                  for c in comps)
    if len(component_configs) != len(comps):
        raise MissingComponentConfig(
            f"{len(comps)} components but {len(component_configs)} configs")
    if not 1 <= theta <= g.K:
        raise IndexOutOfRange(f"message {theta} outside 1..{g.K}")

    lengths: dict[int, int] = {}
    target = None
    for comp, cfg in zip(comps, component_configs):
        comp_len = _component_length(comp.graph, cfg)
        for gk in comp.edge_indices:
            lengths[gk] = comp_len
        if theta in comp.edge_indices:
            target = (comp, cfg)
    assert target is not None
    comp, cfg = target

    sub = build_plan(comp.graph, cfg, comp.local_message(theta))
    queries = {
        comp.vertices[ls - 1]: tuple(
            tuple((comp.edge_indices[m - 1], pos) for (m, pos) in atom)
            for atom in atoms)
        for ls, atoms in sub.queries.items()}
    recipe = tuple(
        DecodeStep(step.position,
                   (comp.vertices[step.source[0] - 1], step.source[1]),
                   tuple((comp.vertices[s - 1], a) for (s, a) in step.cancel))
        for step in sub.recipe)
    lengths.update({comp.edge_indices[m - 1]: sub.lengths[m]
                    for m in sub.lengths})
    meta = {"component": comps.index(comp) + 1, "sub_kind": sub.kind,
            "sub_meta": sub.meta}
    return SchemePlan(g, "union", theta, lengths, queries, recipe, meta)


def _component_length(cg: Graph, cfg: PlanConfig) -> int:
    probe = build_plan(cg, cfg, 1)
    return probe.lengths[1]


def default_component_config(cg: Graph) -> PlanConfig:
    """Pick a sensible scheme for one component.

    Prefer the t-sum plan at its best subset sizes when every edge joins
    the same degree pair and it is at least as good as the cover plan;
    otherwise cover the smaller part if two-colorable; otherwise fall back
    to singleton sums (t=1), which work on any storage graph.
    """
    from .capacity import bipartite_lower_bound, et_lower_bound

    pairs = {tuple(sorted((cg.degree(u), cg.degree(v))))
             for (u, v) in cg.edges}
    parts = bipartition(cg)
    et_choice = None
    if len(pairs) == 1:
        d_small, d_large = pairs.pop()
        value, t_i, t_j = et_lower_bound(d_small, d_large)
        et_choice = (value, et_config(t_i, t_j))
    else:
        degsq = sum(d * d for d in cg.degrees())
        et_choice = (Fraction(2 * cg.K, degsq), et_config(1, 1))
    if parts is not None:
        bip_value = bipartite_lower_bound(cg, parts)
        if bip_value > et_choice[0]:
            return bipartite_config()
    return et_choice[1]


def build_fixture_plan(name: str, theta: int,
                       g: Graph | None = None) -> SchemePlan:
    """Rebuild a frozen reference plan as a first-class SchemePlan."""
    n = g.n_vertices if (g is not None and name == "star") else None
    graph = fixture_graph(name, n)
    if g is not None and g != graph:
        raise InvalidFamilyParams(
            f"fixture {name!r} is defined on {graph}, not {g}")
    table, length = fixture_table(name, graph)
    if theta not in table:
        raise IndexOutOfRange(f"message {theta} outside 1..{graph.K}")
    queries = dict(table[theta])
    lengths = {k: length for k in graph.messages}
    recipe = derive_recipe(queries, theta, length)
    meta = {"fixture": name}
    return SchemePlan(graph, "fixture", theta, lengths, queries, recipe, meta)


def build_plan(g: Graph, config: PlanConfig, theta: int) -> SchemePlan:
    if config.kind == "et":
        return build_et_plan(g, theta, config.t_i, config.t_j)
    if config.kind == "bipartite":
        return build_bipartite_plan(g, theta, length=config.length)
    if config.kind == "union":
        return build_union_plan(g, theta, config.component_configs)
    if config.kind == "fixture":
        return build_fixture_plan(config.fixture, theta, g)
    raise InvalidFamilyParams(f"unknown plan kind {config.kind!r}")


def build_plan_family(g: Graph, config: PlanConfig) -> dict[int, SchemePlan]:
    """One plan per desired message."""
    return {theta: build_plan(g, config, theta) for theta in g.messages}


# --- decoding --------------------------------------------------------------

def derive_recipe(queries: dict[int, tuple[Atom, ...]], theta: int,
                  length: int) -> tuple[DecodeStep, ...]:
    """Read the decoding recipe off the query layout.

    Every atom containing the desired message yields one of its logical
    symbols once the remaining references are cancelled against matching
    singleton atoms.  Raises UndecodablePlan if cancellation material is
    missing or the recovered positions do not cover 1..length exactly.
    """
    singleton_at: dict[Ref, tuple[int, int]] = {}
    for server, atoms in queries.items():
        for idx, atom in enumerate(atoms):
            if len(atom) == 1 and atom[0][0] != theta:
                singleton_at.setdefault(atom[0], (server, idx))

    steps: dict[int, DecodeStep] = {}
    for server in sorted(queries):
        for idx, atom in enumerate(queries[server]):
            desired = [(m, p) for (m, p) in atom if m == theta]
            if not desired:
                continue
            if len(desired) > 1:
                raise UndecodablePlan(
                    f"atom {atom} references the desired message twice")
            pos = desired[0][1]
            cancel = []
            for ref in atom:
                if ref[0] == theta:
                    continue
                if ref not in singleton_at:
                    raise UndecodablePlan(
                        f"no singleton available to cancel {ref}")
                cancel.append(singleton_at[ref])
            if pos in steps:
                raise UndecodablePlan(f"position {pos} recovered twice")
            steps[pos] = DecodeStep(pos, (server, idx), tuple(cancel))

    if set(steps) != set(range(1, length + 1)):
        missing = sorted(set(range(1, length + 1)) - set(steps))
        raise UndecodablePlan(f"positions {missing} never recovered")
    return tuple(steps[m] for m in range(1, length + 1))


@dataclass
class Randomness:
    """The user's private per-message permutations (logical -> physical)."""

    perms: dict[int, tuple[int, ...]]
    seed: int | None = None

    def physical(self, msg: int, logical_pos: int) -> int:
        return self.perms[msg][logical_pos - 1]


def sample_randomness(plan: SchemePlan, rng: random.Random,
                      seed: int | None = None) -> Randomness:
    perms = {}
    for msg in plan.referenced_messages():
        perm = list(range(1, plan.lengths[msg] + 1))
        rng.shuffle(perm)
        perms[msg] = tuple(perm)
    return Randomness(perms, seed)


def to_physical(plan: SchemePlan, rnd: Randomness) -> dict[int, tuple[Atom, ...]]:
    """Translate the logical layout into the queries servers actually see."""
    return {
        server: tuple(
            tuple((m, rnd.physical(m, p)) for (m, p) in atom)
            for atom in atoms)
        for server, atoms in plan.queries.items()}


def answer(atoms, storage: dict[int, list[int]], fld: Field) -> list[int]:
    """Evaluate a server's atoms against its stored (physical) symbols."""
    out = []
    for atom in atoms:
        total = 0
        for (msg, pos) in atom:
            if msg not in storage:
                raise UnresolvableRef(f"message {msg} not stored here")
            vec = storage[msg]
            if not 1 <= pos <= len(vec):
                raise UnresolvableRef(
                    f"position {pos} outside message {msg} of length {len(vec)}")
            total += vec[pos - 1]
        out.append(total % fld.q)
    return out


def decode(plan: SchemePlan, answers: dict[int, list[int]],
           rnd: Randomness, fld: Field) -> list[int]:
    """Recover the desired message as stored (physical symbol order)."""
    for server, atoms in plan.queries.items():
        got = answers.get(server)
        if got is None or len(got) != len(atoms):
            raise IncompleteAnswers(
                f"server {server}: expected {len(atoms)} answers, "
                f"got {0 if got is None else len(got)}")
    def lookup(server: int, idx: int) -> int:
        got = answers.get(server, [])
        if not 0 <= idx < len(got):
            raise IncompleteAnswers(
                f"recipe needs answer {idx} from server {server}, "
                f"which sent {len(got)}")
        return got[idx]

    logical = [0] * plan.length
    for step in plan.recipe:
        value = lookup(*step.source)
        for (server, idx) in step.cancel:
            value = fld.sub(value, lookup(server, idx))
        logical[step.position - 1] = value
    physical = [0] * plan.length
    for m, value in enumerate(logical, start=1):
        physical[rnd.physical(plan.theta, m) - 1] = value
    return physical

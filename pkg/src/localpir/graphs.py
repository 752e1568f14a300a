"""Storage topologies: simple graphs whose edges are messages.

Vertices are storage servers, numbered 1..n.  Edge k (1-based position in
the edge tuple) is message k, replicated at exactly its two endpoint
servers.  The index set I_v lists the messages server v stores, so
|I_v| = deg(v) and sum(deg) = 2K.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from .errors import (
    DuplicateEdge,
    IndexOutOfRange,
    InvalidFamilyParams,
    SelfLoop,
    TooLarge,
    VertexOutOfRange,
)


@dataclass(frozen=True)
class Graph:
    n_vertices: int
    edges: tuple[tuple[int, int], ...]  # each (u, v) with u < v, 1-based

    @property
    def K(self) -> int:
        """Number of messages (= edges)."""
        return len(self.edges)

    @property
    def vertices(self) -> range:
        return range(1, self.n_vertices + 1)

    @property
    def messages(self) -> range:
        return range(1, self.K + 1)

    def endpoints(self, k: int) -> tuple[int, int]:
        if not 1 <= k <= self.K:
            raise IndexOutOfRange(f"message {k} outside 1..{self.K}")
        return self.edges[k - 1]

    def degree(self, v: int) -> int:
        return len(self.index_set(v))

    def index_set(self, v: int) -> tuple[int, ...]:
        """Messages stored at server v, ascending."""
        if not 1 <= v <= self.n_vertices:
            raise IndexOutOfRange(f"server {v} outside 1..{self.n_vertices}")
        return _index_sets(self)[v - 1]

    def index_sets(self) -> tuple[tuple[int, ...], ...]:
        return _index_sets(self)

    def degrees(self) -> tuple[int, ...]:
        return tuple(len(s) for s in _index_sets(self))


@lru_cache(maxsize=None)
def _index_sets(g: Graph) -> tuple[tuple[int, ...], ...]:
    sets: list[list[int]] = [[] for _ in range(g.n_vertices)]
    for k, (u, v) in enumerate(g.edges, start=1):
        sets[u - 1].append(k)
        sets[v - 1].append(k)
    return tuple(tuple(s) for s in sets)


def build_graph(n: int, edges) -> Graph:
    """Validate and normalize an edge list into a Graph.

    Edges may be given in either endpoint order; they are stored as
    (min, max).  Message numbering follows the given edge order.
    """
    if n < 1:
        raise InvalidFamilyParams(f"need at least one vertex, got {n}")
    seen = set()
    normalized = []
    for e in edges:
        u, v = int(e[0]), int(e[1])
        if u == v:
            raise SelfLoop(f"edge ({u},{v}) is a self-loop")
        if not (1 <= u <= n and 1 <= v <= n):
            raise VertexOutOfRange(f"edge ({u},{v}) outside 1..{n}")
        key = (min(u, v), max(u, v))
        if key in seen:
            raise DuplicateEdge(f"edge {key} listed twice")
        seen.add(key)
        normalized.append(key)
    return Graph(n, tuple(normalized))


def family(name: str, n: int | None = None, *, a: int | None = None,
           b: int | None = None, base: Graph | None = None,
           copies: int | None = None) -> Graph:
    """Construct a named family member with its conventional labeling.

    cycle(n>=3)   edges (1,2),...,(n-1,n),(n,1): server v stores messages
                  v-1 and v (mod n).
    path(n>=2)    edges (v, v+1): interior servers store two consecutive
                  messages, the two endpoint servers store one.
    star(n>=2)    server n is the center and stores everything; leaf v
                  stores only message v.
    complete(n>=2)         all pairs in lexicographic order.
    complete_bipartite(a,b) parts {1..a} and {a+1..a+b}, edges lexicographic.
    disjoint_copies(base, copies) vertex- and message-disjoint copies of a
                  base graph, relabeled block by block.
    """
    if name == "cycle":
        _need(n is not None and n >= 3, f"cycle needs n >= 3, got {n}")
        edges = [(v, v + 1) for v in range(1, n)] + [(n, 1)]
        return build_graph(n, edges)
    if name == "path":
        _need(n is not None and n >= 2, f"path needs n >= 2, got {n}")
        return build_graph(n, [(v, v + 1) for v in range(1, n)])
    if name == "star":
        _need(n is not None and n >= 2, f"star needs n >= 2, got {n}")
        return build_graph(n, [(v, n) for v in range(1, n)])
    if name == "complete":
        _need(n is not None and n >= 2, f"complete needs n >= 2, got {n}")
        return build_graph(n, list(itertools.combinations(range(1, n + 1), 2)))
    if name == "complete_bipartite":
        _need(a is not None and b is not None and a >= 1 and b >= 1,
              f"complete_bipartite needs a,b >= 1, got a={a}, b={b}")
        edges = [(u, a + w) for u in range(1, a + 1) for w in range(1, b + 1)]
        return build_graph(a + b, edges)
    if name == "disjoint_copies":
        _need(base is not None and copies is not None and copies >= 1,
              f"disjoint_copies needs a base graph and copies >= 1")
        edges = []
        for c in range(copies):
            off = c * base.n_vertices
            edges.extend((u + off, v + off) for (u, v) in base.edges)
        return build_graph(base.n_vertices * copies, edges)
    raise InvalidFamilyParams(f"unknown family {name!r}")


def _need(cond: bool, msg: str) -> None:
    if not cond:
        raise InvalidFamilyParams(msg)


# --- decomposition --------------------------------------------------------

@dataclass(frozen=True)
class Component:
    """A connected component with back-maps to the parent graph.

    vertices[i-1] and edge_indices[j-1] give the global ids of local
    vertex i and local message j.
    """

    graph: Graph
    vertices: tuple[int, ...]
    edge_indices: tuple[int, ...]

    def local_vertex(self, global_v: int) -> int:
        return self.vertices.index(global_v) + 1

    def local_message(self, global_k: int) -> int:
        return self.edge_indices.index(global_k) + 1


def components(g: Graph) -> list[Component]:
    """Connected components ordered by their smallest vertex."""
    adjacency: dict[int, list[int]] = {v: [] for v in g.vertices}
    for (u, v) in g.edges:
        adjacency[u].append(v)
        adjacency[v].append(u)
    seen: set[int] = set()
    result = []
    for start in g.vertices:
        if start in seen:
            continue
        stack, verts = [start], {start}
        seen.add(start)
        while stack:
            u = stack.pop()
            for w in adjacency[u]:
                if w not in seen:
                    seen.add(w)
                    verts.add(w)
                    stack.append(w)
        vlist = tuple(sorted(verts))
        vpos = {v: i + 1 for i, v in enumerate(vlist)}
        elist = tuple(k for k, (u, v) in enumerate(g.edges, start=1)
                      if u in verts)
        local_edges = [(vpos[g.edges[k - 1][0]], vpos[g.edges[k - 1][1]])
                       for k in elist]
        result.append(Component(build_graph(len(vlist), local_edges),
                                vlist, elist))
    return result


def bipartition(g: Graph) -> tuple[tuple[int, ...], tuple[int, ...]] | None:
    """Two-color the graph, or return None if impossible.

    Deterministic: the smallest vertex of each component lands in part 1.
    """
    color: dict[int, int] = {}
    adjacency: dict[int, list[int]] = {v: [] for v in g.vertices}
    for (u, v) in g.edges:
        adjacency[u].append(v)
        adjacency[v].append(u)
    for start in g.vertices:
        if start in color:
            continue
        color[start] = 0
        queue = [start]
        while queue:
            u = queue.pop()
            for w in adjacency[u]:
                if w not in color:
                    color[w] = 1 - color[u]
                    queue.append(w)
                elif color[w] == color[u]:
                    return None
    part1 = tuple(v for v in g.vertices if color[v] == 0)
    part2 = tuple(v for v in g.vertices if color[v] == 1)
    return part1, part2


@dataclass(frozen=True)
class LocalSubgraph:
    """Everything a retrieval of message k can touch.

    messages = union of the two endpoint index sets; servers = every vertex
    storing at least one of those messages.
    """

    desired: int
    endpoint_i: int
    endpoint_j: int
    servers: tuple[int, ...]
    messages: tuple[int, ...]


def local_subgraph(g: Graph, k: int) -> LocalSubgraph:
    i, j = g.endpoints(k)
    msgs = sorted(set(g.index_set(i)) | set(g.index_set(j)))
    msgset = set(msgs)
    servers = tuple(v for v in g.vertices
                    if msgset & set(g.index_set(v)))
    return LocalSubgraph(k, i, j, servers, tuple(msgs))


def is_edge_transitive(g: Graph, max_vertices: int = 8) -> bool:
    """Brute-force test over all vertex permutations.

    True iff the automorphism group acts transitively on edges.  Guarded by
    max_vertices because the search is factorial.
    """
    if g.n_vertices > max_vertices:
        raise TooLarge(
            f"{g.n_vertices} vertices exceeds brute-force cap {max_vertices}")
    if g.K <= 1:
        return True
    edge_set = {frozenset(e) for e in g.edges}
    reachable = {frozenset(g.edges[0])}
    for perm in itertools.permutations(g.vertices):
        mapping = {v: perm[v - 1] for v in g.vertices}
        images = [frozenset((mapping[u], mapping[v])) for (u, v) in g.edges]
        if all(img in edge_set for img in images):
            reachable.add(images[0])
            if len(reachable) == g.K:
                return True
    return len(reachable) == g.K


# --- serialization --------------------------------------------------------

def graph_to_json(g: Graph) -> dict:
    return {"n": g.n_vertices, "edges": [[u, v] for (u, v) in g.edges]}


def graph_from_json(obj: dict) -> Graph:
    try:
        n = int(obj["n"])
        edges = obj["edges"]
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidFamilyParams(f"malformed graph object: {exc}") from exc
    return build_graph(n, edges)


def detect_family(g: Graph) -> tuple[str, dict] | None:
    """Recognize a connected graph as a named family member, if possible.

    Detection is by isomorphism class (degree profile plus structure), so a
    relabeled member is still recognized.  Returns (name, params) or None.
    """
    if len(components(g)) != 1:
        return None
    n = g.n_vertices
    degs = sorted(g.degrees())
    if n >= 3 and degs == [2] * n:
        return "cycle", {"n": n}
    if n >= 2 and degs == [1] * (n - 1) + [n - 1]:
        return "star", {"n": n}
    if n >= 2 and degs == [1, 1] + [2] * (n - 2):
        return "path", {"n": n}
    if n >= 2 and degs == [n - 1] * n:
        return "complete", {"n": n}
    parts = bipartition(g)
    if parts is not None:
        a, b = len(parts[0]), len(parts[1])
        if g.K == a * b:
            return "complete_bipartite", {"a": a, "b": b}
    return None

"""Finite simple undirected graphs with dense integer vertex ids.

All other modules evaluate over these; graphs are immutable after
construction and every operation here is a pure function.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional, Sequence


class GraphFormatError(ValueError):
    """Raised on malformed graph input (bad vertex, loop, duplicate edge)."""


def _normalize_edge(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices 0..n-1."""

    n: int
    edges: frozenset[tuple[int, int]]
    _adj: tuple[frozenset[int], ...] = field(
        init=False, repr=False, compare=False, hash=False
    )

    def __post_init__(self) -> None:
        if self.n < 0:
            raise GraphFormatError(f"negative vertex count {self.n}")
        adj: list[set[int]] = [set() for _ in range(self.n)]
        for u, v in self.edges:
            if u == v:
                raise GraphFormatError(f"loop at vertex {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise GraphFormatError(f"edge ({u},{v}) out of range for n={self.n}")
            if u > v:
                raise GraphFormatError(f"edge ({u},{v}) not normalized (u<v required)")
            adj[u].add(v)
            adj[v].add(u)
        object.__setattr__(self, "_adj", tuple(frozenset(s) for s in adj))

    @staticmethod
    def from_edges(n: int, edges: Iterable[Sequence[int]]) -> "Graph":
        seen: set[tuple[int, int]] = set()
        for e in edges:
            u, v = e
            if u == v:
                raise GraphFormatError(f"loop at vertex {u}")
            key = _normalize_edge(u, v)
            if key in seen:
                raise GraphFormatError(f"duplicate edge {key}")
            seen.add(key)
        return Graph(n, frozenset(seen))

    # -- basic accessors ------------------------------------------------

    @property
    def num_vertices(self) -> int:
        return self.n

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def vertices(self) -> range:
        return range(self.n)

    def neighbors(self, v: int) -> frozenset[int]:
        self._check_vertex(v)
        return self._adj[v]

    def degree(self, v: int) -> int:
        return len(self.neighbors(v))

    def has_edge(self, u: int, v: int) -> bool:
        self._check_vertex(u)
        self._check_vertex(v)
        return u != v and v in self._adj[u]

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def _check_vertex(self, v: int) -> None:
        if not (0 <= v < self.n):
            raise GraphFormatError(f"vertex {v} out of range for n={self.n}")

    # -- derived graphs -------------------------------------------------

    def induced_subgraph(self, vertices: Iterable[int]) -> tuple["Graph", dict[int, int]]:
        """Induced subgraph on `vertices`, relabelled 0..m-1 in sorted order.

        Returns the subgraph and the map from old ids to new ids.
        """
        vs = sorted(set(vertices))
        for v in vs:
            self._check_vertex(v)
        relabel = {v: i for i, v in enumerate(vs)}
        edges = frozenset(
            (relabel[u], relabel[v])
            for u, v in self.edges
            if u in relabel and v in relabel
        )
        return Graph(len(vs), edges), relabel

    def disjoint_union(self, other: "Graph") -> "Graph":
        shifted = frozenset((u + self.n, v + self.n) for u, v in other.edges)
        return Graph(self.n + other.n, self.edges | shifted)

    # -- constructors ---------------------------------------------------

    @staticmethod
    def complete(n: int) -> "Graph":
        return Graph(n, frozenset(itertools.combinations(range(n), 2)))

    @staticmethod
    def empty(n: int) -> "Graph":
        return Graph(n, frozenset())

    @staticmethod
    def path(n: int) -> "Graph":
        return Graph(n, frozenset((i, i + 1) for i in range(n - 1)))

    @staticmethod
    def cycle(n: int) -> "Graph":
        if n < 3:
            raise GraphFormatError(f"cycle needs >= 3 vertices, got {n}")
        edges = {(i, i + 1) for i in range(n - 1)}
        edges.add((0, n - 1))
        return Graph(n, frozenset(edges))

    @staticmethod
    def complete_bipartite(a: int, b: int) -> "Graph":
        return Graph(a + b, frozenset((i, a + j) for i in range(a) for j in range(b)))


def common_neighbors(g: Graph, tuple_vertices: Sequence[int]) -> frozenset[int]:
    """All vertices adjacent to every vertex of the tuple, excluding the tuple.

    For an empty tuple returns all vertices of the graph.
    """
    for v in tuple_vertices:
        g._check_vertex(v)
    if not tuple_vertices:
        return frozenset(g.vertices())
    result = set(g.neighbors(tuple_vertices[0]))
    for v in tuple_vertices[1:]:
        result &= g.neighbors(v)
    return frozenset(result - set(tuple_vertices))


def enumerate_embeddings(
    pattern: Graph,
    host: Graph,
    induced: bool = False,
    limit: Optional[int] = None,
) -> list[tuple[int, ...]]:
    """All injective adjacency-preserving maps pattern -> host.

    Each embedding is a tuple (image of pattern vertex 0, 1, ...).  A full
    enumeration is sorted lexicographically on the image tuple.  With
    `induced`, non-adjacency must be preserved too.  `limit` stops the
    search after that many embeddings (used for containment checks with
    early exit; the truncated list follows the search order instead).
    """
    if limit is None:
        return sorted(iter_embeddings(pattern, host, induced))
    return list(itertools.islice(iter_embeddings(pattern, host, induced), limit))


def iter_embeddings(
    pattern: Graph, host: Graph, induced: bool = False
) -> Iterator[tuple[int, ...]]:
    if pattern.n == 0:
        yield ()
        return
    if pattern.n > host.n:
        return

    # Order pattern vertices so each (after the first) touches earlier ones
    # when possible; plain index order already works for our small patterns,
    # but connecting early prunes much harder.
    order = _search_order(pattern)
    position = {v: i for i, v in enumerate(order)}
    # Earlier-ordered pattern neighbors of each vertex, for pruning.
    back_adj = [
        [u for u in pattern.neighbors(v) if position[u] < position[v]] for v in order
    ]
    back_non = [
        [
            u
            for u in range(pattern.n)
            if u != v and position[u] < position[v] and not pattern.has_edge(u, v)
        ]
        for v in order
    ]
    deg = [pattern.degree(v) for v in order]

    image: dict[int, int] = {}
    used: set[int] = set()

    def extend(idx: int) -> Iterator[tuple[int, ...]]:
        if idx == pattern.n:
            yield tuple(image[v] for v in range(pattern.n))
            return
        pv = order[idx]
        if back_adj[idx]:
            # Intersecting neighbor sets of already-placed neighbors keeps
            # the candidate pool tiny on sparse hosts.
            pool = set(host.neighbors(image[back_adj[idx][0]]))
            for u in back_adj[idx][1:]:
                pool &= host.neighbors(image[u])
            candidates: Iterable[int] = sorted(pool)
        else:
            candidates = range(host.n)
        for hv in candidates:
            if hv in used:
                continue
            if host.degree(hv) < deg[idx]:
                continue
            if induced and any(host.has_edge(image[u], hv) for u in back_non[idx]):
                continue
            image[pv] = hv
            used.add(hv)
            yield from extend(idx + 1)
            used.discard(hv)
            del image[pv]

    yield from extend(0)


def _search_order(pattern: Graph) -> list[int]:
    order: list[int] = []
    placed: set[int] = set()
    remaining = set(pattern.vertices())
    while remaining:
        best = max(
            remaining,
            key=lambda v: (len(pattern.neighbors(v) & placed), pattern.degree(v), -v),
        )
        order.append(best)
        placed.add(best)
        remaining.discard(best)
    return order


def contains_subgraph(pattern: Graph, host: Graph) -> bool:
    """True iff host has at least one (not necessarily induced) copy of pattern."""
    for _ in iter_embeddings(pattern, host):
        return True
    return False


def automorphism_count(g: Graph) -> int:
    """Exact |Aut(g)| by backtracking over degree-compatible permutations."""
    if g.n == 0:
        return 1
    return sum(1 for _ in iter_embeddings(g, g, induced=True))


def count_copies(pattern: Graph, host: Graph) -> int:
    """Number of subgraphs of host isomorphic to pattern: embeddings / |Aut|."""
    embeddings = sum(1 for _ in iter_embeddings(pattern, host))
    return embeddings // automorphism_count(pattern)


def is_partial_isomorphism(
    g1: Graph, g2: Graph, pairs: Iterable[tuple[int, int]]
) -> bool:
    """Check the pebble-game survival condition on a list of vertex pairs.

    True iff the pairing is a well-defined partial bijection preserving
    equality and adjacency in both directions.
    """
    pair_list = list(pairs)
    for a, b in pair_list:
        g1._check_vertex(a)
        g2._check_vertex(b)
    for (a1, b1), (a2, b2) in itertools.combinations(pair_list, 2):
        if (a1 == a2) != (b1 == b2):
            return False
        if g1.has_edge(a1, a2) != g2.has_edge(b1, b2):
            return False
    return True


def are_isomorphic(g1: Graph, g2: Graph) -> bool:
    if g1.n != g2.n or g1.num_edges != g2.num_edges:
        return False
    for _ in iter_embeddings(g1, g2, induced=True):
        return True
    return g1.n == 0


# -- serialization -----------------------------------------------------


def graph_to_json(g: Graph) -> str:
    return json.dumps({"n": g.n, "edges": [list(e) for e in g.sorted_edges()]})


def graph_from_json(obj: dict) -> Graph:
    if not isinstance(obj, dict) or "n" not in obj or "edges" not in obj:
        raise GraphFormatError("graph JSON must have 'n' and 'edges' fields")
    n = obj["n"]
    if not isinstance(n, int):
        raise GraphFormatError(f"'n' must be an integer, got {n!r}")
    return Graph.from_edges(n, obj["edges"])


def read_graph(text: str) -> Graph:
    """Parse a graph from JSON or the plain edge-list format.

    Edge-list format: vertex count on line 1, then one "u v" pair per line.
    """
    stripped = text.strip()
    if stripped.startswith("{"):
        try:
            obj = json.loads(stripped)
        except json.JSONDecodeError as exc:
            raise GraphFormatError(f"invalid graph JSON: {exc}") from exc
        return graph_from_json(obj)
    lines = [ln for ln in stripped.splitlines() if ln.strip()]
    if not lines:
        raise GraphFormatError("empty graph input")
    try:
        n = int(lines[0])
    except ValueError as exc:
        raise GraphFormatError(f"bad vertex count line: {lines[0]!r}") from exc
    edges = []
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != 2:
            raise GraphFormatError(f"bad edge line: {ln!r}")
        edges.append((int(parts[0]), int(parts[1])))
    return Graph.from_edges(n, edges)


def write_graph(g: Graph) -> str:
    return graph_to_json(g)

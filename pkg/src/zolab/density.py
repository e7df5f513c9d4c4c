"""Exact-rational density calculus on graphs and rooted pairs.

Densities rho = e/v, their maxima over subgraphs, strictly-balanced
verdicts, and the sparse/dense classification of rooted pairs at a given
exponent alpha.  Everything here is exact Fraction arithmetic; the
boundary cases of interest sit exactly at equality.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional

from .graphs import Graph


class DensityDomainError(ValueError):
    """Raised when a density is requested of an empty vertex set."""


@dataclass(frozen=True)
class RootedPair:
    """A host graph G with a designated root subgraph H.

    Root edges default to all host edges inside the root set; an explicit
    subset may be supplied for non-induced roots.
    """

    host: Graph
    root_vertices: frozenset[int]
    root_edges: frozenset[tuple[int, int]]

    @staticmethod
    def induced(host: Graph, roots: Iterable[int]) -> "RootedPair":
        root_set = frozenset(roots)
        for v in root_set:
            host._check_vertex(v)
        edges = frozenset(
            (u, v) for u, v in host.edges if u in root_set and v in root_set
        )
        return RootedPair(host, root_set, edges)

    @staticmethod
    def with_edges(
        host: Graph, roots: Iterable[int], edges: Iterable[tuple[int, int]]
    ) -> "RootedPair":
        root_set = frozenset(roots)
        edge_set = frozenset(tuple(sorted(e)) for e in edges)
        for u, v in edge_set:
            if (u, v) not in host.edges:
                raise ValueError(f"root edge ({u},{v}) not an edge of the host")
            if u not in root_set or v not in root_set:
                raise ValueError(f"root edge ({u},{v}) leaves the root set")
        return RootedPair(host, root_set, edge_set)

    @property
    def num_root_vertices(self) -> int:
        return len(self.root_vertices)

    @property
    def num_extension_vertices(self) -> int:
        return self.host.n - len(self.root_vertices)


@dataclass(frozen=True)
class PairVerdict:
    classification: str  # "sparse" | "dense" | "neutral"
    gap: Fraction


def pair_to_json(pair: RootedPair) -> dict:
    from .graphs import graph_to_json
    import json as _json

    obj = {
        "graph": _json.loads(graph_to_json(pair.host)),
        "roots": sorted(pair.root_vertices),
    }
    induced = frozenset(
        e for e in pair.host.edges
        if e[0] in pair.root_vertices and e[1] in pair.root_vertices
    )
    if pair.root_edges != induced:
        obj["rootEdges"] = sorted(list(e) for e in pair.root_edges)
    return obj


def pair_from_json(obj: dict) -> RootedPair:
    from .graphs import graph_from_json

    host = graph_from_json(obj["graph"])
    roots = obj["roots"]
    if "rootEdges" in obj:
        return RootedPair.with_edges(host, roots, map(tuple, obj["rootEdges"]))
    return RootedPair.induced(host, roots)


def density(g: Graph) -> Fraction:
    """rho(G) = e(G)/v(G)."""
    if g.n == 0:
        raise DensityDomainError("density of the empty graph is undefined")
    return Fraction(g.num_edges, g.n)


def _induced_edge_count(g: Graph, subset: frozenset[int]) -> int:
    return sum(1 for u, v in g.edges if u in subset and v in subset)


def max_density(g: Graph) -> tuple[Fraction, frozenset[int]]:
    """Maximum of rho over non-empty induced subgraphs, with one witness.

    Deleting edges at fixed vertices only lowers rho, so induced subgraphs
    suffice.  Ties break to the smallest subset, then lexicographic.
    """
    if g.n == 0:
        raise DensityDomainError("max density of the empty graph is undefined")
    best: Optional[Fraction] = None
    best_subset: Optional[tuple[int, ...]] = None
    for size in range(1, g.n + 1):
        for subset in itertools.combinations(range(g.n), size):
            fs = frozenset(subset)
            rho = Fraction(_induced_edge_count(g, fs), size)
            if best is None or rho > best:
                best = rho
                best_subset = subset
    assert best is not None and best_subset is not None
    return best, frozenset(best_subset)


def is_strictly_balanced(g: Graph) -> tuple[bool, Optional[frozenset[int]]]:
    """True iff every proper induced subgraph is strictly less dense than g.

    On failure returns a violating vertex subset (smallest, then lexicographic).
    """
    if g.n == 0:
        raise DensityDomainError("balance of the empty graph is undefined")
    rho = density(g)
    for size in range(1, g.n):
        for subset in itertools.combinations(range(g.n), size):
            fs = frozenset(subset)
            if Fraction(_induced_edge_count(g, fs), size) >= rho:
                return False, fs
    return True, None


def pair_gap(pair: RootedPair, alpha: Fraction) -> Fraction:
    """[v(G) - v(H)] - alpha * [e(G) - e(H)]."""
    dv = pair.host.n - len(pair.root_vertices)
    de = pair.host.num_edges - len(pair.root_edges)
    return Fraction(dv) - alpha * de


def classify_pair(pair: RootedPair, alpha: Fraction) -> PairVerdict:
    gap = pair_gap(pair, alpha)
    if gap > 0:
        cls = "sparse"
    elif gap < 0:
        cls = "dense"
    else:
        cls = "neutral"
    return PairVerdict(cls, gap)


def is_safe_pair(
    pair: RootedPair, alpha: Fraction, strict: bool = True
) -> tuple[bool, Optional[frozenset[int]]]:
    """Safety sweep over every intermediate induced subgraph.

    For every vertex set U with roots <= U < V(G), forms S as the induced
    subgraph on U and requires (G, S) to have positive gap (strict) or
    non-negative gap (weak).  Returns the first violating U otherwise
    (smallest subset, then lexicographic).
    """
    roots = pair.root_vertices
    if not roots < frozenset(pair.host.vertices()):
        raise ValueError("roots must be a proper subset of the host vertices")
    others = sorted(set(pair.host.vertices()) - roots)
    host_e = pair.host.num_edges
    for extra in range(0, len(others)):
        for chosen in itertools.combinations(others, extra):
            subset = roots | frozenset(chosen)
            gap = Fraction(pair.host.n - len(subset)) - alpha * (
                host_e - _induced_edge_count(pair.host, subset)
            )
            if (strict and gap <= 0) or (not strict and gap < 0):
                return False, subset
    return True, None

"""Strategy trees and the tree-following Duplicator.

Extension-property checkers, strategy trees enumerating Spoiler's
common-neighbor moves, canonical codes for pebble-label-only tree
isomorphism, refinement to one representative per class, the derived
pattern graph and its root pair, generic-extension search, and a complete
Duplicator agent that plays the strategy against any Spoiler.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .density import RootedPair, classify_pair
from .graphs import Graph, common_neighbors
from .pebble import (
    LEFT,
    GameState,
    ResignError,
    ResourceBudgetError,
    SpoilerMove,
)

FRESH = "fresh_k_minus_1"
FULL = "full_k"

EXT_MISSING = "EXT_MISSING"
TREE_MISMATCH = "TREE_MISMATCH"
INVARIANT_VIOLATION = "INVARIANT_VIOLATION"


class AgentInvariantError(ResignError):
    """A condition the construction guarantees was violated; always a bug.

    Carries the INVARIANT_VIOLATION reason code so referees and harnesses
    can count these separately from legitimate resignations."""

    def __init__(self, detail: str = ""):
        super().__init__(INVARIANT_VIOLATION, detail)


@dataclass
class StrategyNode:
    """One anticipated Spoiler move: non-moved pebbles R, their vertices S
    (in ascending pebble order), and the newly pebbled vertex v."""

    R: frozenset[int]
    S: tuple[int, ...]
    v: int
    children: list["StrategyNode"] = field(default_factory=list)


@dataclass
class StrategyTree:
    k: int
    children: list[StrategyNode] = field(default_factory=list)


# -- construction ------------------------------------------------------


def build_strategy_tree(
    g: Graph,
    pebbled: Sequence[int],
    k: int,
    depth: int,
    mode: str,
    node_budget: int = 200_000,
) -> StrategyTree:
    """All anticipated common-neighbor moves to the given depth.

    Pebble ids are the positions in `pebbled`.  In fresh mode (k-1
    vertices) only the one unplaced pebble can move first; in full mode
    (k vertices) any pebble can.
    """
    if mode == FRESH:
        expected = k - 1
    elif mode == FULL:
        expected = k
    else:
        raise ValueError(f"unknown mode {mode!r}")
    if len(pebbled) != expected:
        raise ValueError(
            f"mode {mode} needs {expected} pebbled vertices, got {len(pebbled)}"
        )
    config = dict(enumerate(pebbled))
    counter = [0]
    children = _build_children(g, config, k, depth, node_budget, counter)
    return StrategyTree(k, children)


def _build_children(
    g: Graph,
    config: dict[int, int],
    k: int,
    depth: int,
    budget: int,
    counter: list[int],
) -> list[StrategyNode]:
    if depth <= 0:
        return []
    if len(config) < k:
        drops = [i for i in range(k) if i not in config]
    else:
        drops = sorted(config)
    children = []
    for beta in drops:
        keep = sorted(q for q in config if q != beta)
        if len(keep) != k - 1:
            continue
        s_tuple = tuple(config[q] for q in keep)
        for v in sorted(common_neighbors(g, s_tuple)):
            counter[0] += 1
            if counter[0] > budget:
                raise ResourceBudgetError(
                    f"strategy tree exceeds the {budget}-node budget"
                )
            child_config = {q: config[q] for q in keep}
            child_config[beta] = v
            node = StrategyNode(
                frozenset(keep),
                s_tuple,
                v,
                _build_children(g, child_config, k, depth - 1, budget, counter),
            )
            children.append(node)
    return children


# -- canonical codes and refinement ------------------------------------


def _node_code(node: StrategyNode) -> bytes:
    label = ",".join(map(str, sorted(node.R))).encode()
    inner = b"".join(sorted(_node_code(c) for c in node.children))
    return b"(" + label + b"[" + inner + b"])"


def iso1_code(tree: StrategyTree | StrategyNode) -> bytes:
    """Canonical code equal for two trees iff they are isomorphic as rooted
    trees respecting only the pebble-set labels R."""
    if isinstance(tree, StrategyNode):
        return _node_code(tree)
    inner = b"".join(sorted(_node_code(c) for c in tree.children))
    return b"[" + inner + b"]"


def tree_depth(tree: StrategyTree | StrategyNode) -> int:
    children = tree.children
    if not children:
        return 0
    return 1 + max(tree_depth(c) for c in children)


def tree_size(tree: StrategyTree | StrategyNode) -> int:
    """Vertex count including the root."""
    return 1 + sum(tree_size(c) for c in tree.children)


def _refine_children(children: list[StrategyNode]) -> list[StrategyNode]:
    refined = [
        StrategyNode(c.R, c.S, c.v, _refine_children(c.children)) for c in children
    ]
    best: dict[bytes, StrategyNode] = {}
    for c in refined:
        key = _node_code(c)
        cur = best.get(key)
        if cur is None or (c.S, c.v) < (cur.S, cur.v):
            best[key] = c
    return [best[key] for key in sorted(best)]


def refine(tree: StrategyTree) -> StrategyTree:
    """Keep one canonical representative per label-isomorphism class of
    sibling pendant subtrees, bottom-up.  Idempotent and size-nonincreasing."""
    return StrategyTree(tree.k, _refine_children(tree.children))


def mu_bound(k: int, n_rounds: int) -> int:
    """Certified upper bound on the vertex count of any refined strategy
    tree of depth <= n_rounds - 1 with k pebbles."""
    if k < 2:
        raise ValueError(f"k must be >= 2, got {k}")
    if n_rounds < 1:
        raise ValueError(f"round count must be >= 1, got {n_rounds}")
    classes = [k]
    sizes = [1]
    for _ in range(1, n_rounds):
        total = sum(classes)
        sizes.append(1 + total * sizes[-1])
        classes.append(k * 2**total)
    return sizes[n_rounds - 1]


# -- the derived pattern graph -----------------------------------------


def tree_to_graph(
    tree: StrategyTree,
    base_graph: Graph,
    pebbled: Sequence[int],
    k: int,
    mode: str,
) -> tuple[RootedPair, dict[int, object]]:
    """The pattern graph defined by a refined tree: base vertices carry the
    induced adjacency of the pebbled tuple, and every tree node adds one
    new vertex adjacent to exactly its S-image.

    The root pair designates the first k-2 (fresh) or k-1 (full) pebbled
    vertices.  Returns the pair and a role map from pattern vertex to
    either ("pebble", position) or ("tree", node).
    """
    m = len(pebbled)
    expected = k - 1 if mode == FRESH else k
    if m != expected:
        raise ValueError(f"mode {mode} needs {expected} pebbled vertices, got {m}")
    edges: set[tuple[int, int]] = set()
    for i, j in itertools.combinations(range(m), 2):
        if base_graph.has_edge(pebbled[i], pebbled[j]):
            edges.add((i, j))
    roles: dict[int, object] = {i: ("pebble", i) for i in range(m)}
    counter = [m]

    def add_nodes(nodes: list[StrategyNode], config: dict[int, int]) -> None:
        # config maps pebble position -> pattern vertex id
        for node in nodes:
            beta_candidates = [q for q in range(k) if q not in node.R]
            if len(beta_candidates) != 1:
                raise ValueError(f"node {node.R} is not a (k-1)-subset for k={k}")
            beta = beta_candidates[0]
            new_id = counter[0]
            counter[0] += 1
            roles[new_id] = ("tree", node)
            for q in sorted(node.R):
                if q not in config:
                    raise ValueError("tree node references an unpebbled position")
                edges.add(tuple(sorted((config[q], new_id))))
            child_config = {q: config[q] for q in node.R}
            child_config[beta] = new_id
            add_nodes(node.children, child_config)

    root_config = dict(enumerate(range(m)))
    add_nodes(tree.children, root_config)
    host = Graph(counter[0], frozenset(edges))
    roots_count = k - 2 if mode == FRESH else k - 1
    return RootedPair.induced(host, range(roots_count)), roles


# -- extension properties ----------------------------------------------


def has_extension_property(
    g: Graph, t: int
) -> tuple[bool, Optional[tuple[frozenset[int], frozenset[int]]]]:
    """The t-extension property: for every U within W with |W| < t, some
    vertex outside W is adjacent to all of U and to none of W minus U.
    Exhaustive; returns a counterexample (U, W) on failure."""
    if t < 1:
        raise ValueError(f"t must be >= 1, got {t}")
    for size in range(t):
        for w_set in itertools.combinations(range(g.n), size):
            w_fs = frozenset(w_set)
            for u_size in range(size + 1):
                for u_set in itertools.combinations(w_set, u_size):
                    u_fs = frozenset(u_set)
                    avoid = w_fs - u_fs
                    found = False
                    for z in range(g.n):
                        if z in w_fs:
                            continue
                        if all(g.has_edge(z, u) for u in u_fs) and not any(
                            g.has_edge(z, w) for w in avoid
                        ):
                            found = True
                            break
                    if not found:
                        return False, (u_fs, w_fs)
    return True, None


def find_generic_extension(
    g: Graph,
    roots: Sequence[int],
    pattern: RootedPair,
    k: int,
) -> Optional[dict[int, int]]:
    """Search for a copy of the pattern extending the given roots.

    The pattern roots (ascending vertex order) correspond positionally to
    `roots`.  Extension vertices must be distinct, realize the pattern
    adjacency exactly (induced on the extension side, exact bipartite
    adjacency to the roots), and no k-1 image vertices with at least one
    outside the roots may have a common neighbor outside the image.
    Returns the first embedding (pattern vertex -> host vertex) in
    ascending candidate order, or None.
    """
    pat = pattern.host
    pat_roots = sorted(pattern.root_vertices)
    if len(roots) != len(pat_roots):
        raise ValueError(
            f"{len(roots)} roots given for {len(pat_roots)} pattern roots"
        )
    if len(pat_roots) > k - 1:
        raise ValueError(f"at most {k - 1} roots allowed, got {len(pat_roots)}")
    verdict = classify_pair(pattern, Fraction(1, k - 1))
    if pattern.host.n > len(pat_roots) and verdict.classification != "sparse":
        raise ValueError(
            f"pattern pair must be 1/(k-1)-sparse, got {verdict.classification}"
        )
    ext = [v for v in pat.vertices() if v not in pattern.root_vertices]
    assignment: dict[int, int] = dict(zip(pat_roots, roots))
    used: set[int] = set(roots)
    root_images = frozenset(roots)

    def no_extra_common_neighbors() -> bool:
        image = frozenset(assignment.values())
        for subset in itertools.combinations(sorted(image), k - 1):
            if all(s in root_images for s in subset):
                continue
            if common_neighbors(g, subset) - image:
                return False
        return True

    def place(idx: int) -> bool:
        if idx == len(ext):
            return no_extra_common_neighbors()
        pv = ext[idx]
        nbrs = pat.neighbors(pv)
        placed_nbrs = [assignment[u] for u in sorted(nbrs) if u in assignment]
        placed_non = [
            assignment[u]
            for u in pat.vertices()
            if u in assignment and u != pv and u not in nbrs
        ]
        if placed_nbrs:
            candidates: Sequence[int] = sorted(
                set.intersection(*(set(g.neighbors(x)) for x in placed_nbrs))
            )
        else:
            candidates = range(g.n)
        for c in candidates:
            if c in used:
                continue
            if any(g.has_edge(c, x) for x in placed_non):
                continue
            assignment[pv] = c
            used.add(c)
            if place(idx + 1):
                return True
            used.discard(c)
            del assignment[pv]
        return False

    if place(0):
        return dict(assignment)
    return None


# -- the Duplicator agent ----------------------------------------------


class DuplicatorAgent:
    """Plays the strategy-tree Duplicator.

    Early rounds are answered through the (k-1)-extension pattern.  When
    the opposing pebbles reach k-1 and Spoiler plays a fresh vertex, the
    agent anticipates all future common-neighbor moves as a refined
    strategy tree, realizes its pattern graph in the other graph through a
    generic extension, and answers through that embedding.  Later
    common-neighbor moves are answered by matching refined subtree classes
    between the two sides' trees, rebuilt from the current configuration
    each round (the pendant subtree at the realized path equals the tree
    built from the updated configuration, so nothing is lost).

    Resigns with EXT_MISSING when the host graph lacks the required
    extension and with TREE_MISMATCH when the two sides' trees disagree;
    conditions the construction outright guarantees raise
    AgentInvariantError instead.
    """

    def __init__(
        self,
        k: int,
        n_rounds: int,
        mu: Optional[int] = None,
        node_budget: int = 200_000,
    ):
        if k < 3:
            raise ValueError(f"the strategy needs k >= 3, got {k}")
        self.k = k
        self.n_rounds = n_rounds
        self.mu = mu if mu is not None else mu_bound(k, max(n_rounds, 1))
        self.node_budget = node_budget

    # strategy-object protocol
    def duplicator_reply(
        self, state: GameState, move: SpoilerMove, rng: random.Random
    ) -> int:
        k = self.k
        if move.side == LEFT:
            g_s, g_o = state.left, state.right
            oriented = [
                (p[0], p[1]) if p is not None else None for p in state.placements
            ]
        else:
            g_s, g_o = state.right, state.left
            oriented = [
                (p[1], p[0]) if p is not None else None for p in state.placements
            ]
        v = move.vertex

        # Mirror a move onto an already-pebbled vertex.
        for p in oriented:
            if p is not None and p[0] == v:
                return p[1]

        others = sorted(
            {p for i, p in enumerate(oriented) if p is not None and i != move.pebble}
        )
        if len(others) <= k - 3:
            return self._simple_reply(g_s, g_o, others, v)
        if len(others) == k - 2:
            return self._rebuild_reply(state, g_s, g_o, others, v, FRESH)
        if len(others) != k - 1:
            raise AgentInvariantError(
                f"{len(others)} distinct opposing pairs with k={k}"
            )
        others_s = tuple(a for a, _ in others)
        if v in common_neighbors(g_s, others_s):
            return self._navigate_reply(state, g_s, g_o, others, move.pebble, v, oriented)
        return self._rebuild_reply(state, g_s, g_o, others, v, FULL)

    def _simple_reply(
        self,
        g_s: Graph,
        g_o: Graph,
        others: list[tuple[int, int]],
        v: int,
    ) -> int:
        """Exact-pattern answer backed by the (k-1)-extension property."""
        want = [b for a, b in others if g_s.has_edge(a, v)]
        avoid = [b for a, b in others if not g_s.has_edge(a, v)]
        for w in g_o.vertices():
            if w in want or w in avoid:
                continue
            if all(g_o.has_edge(w, b) for b in want) and not any(
                g_o.has_edge(w, b) for b in avoid
            ):
                return w
        raise ResignError(EXT_MISSING, "no matching fresh vertex")

    def _rebuild_reply(
        self,
        state: GameState,
        g_s: Graph,
        g_o: Graph,
        others: list[tuple[int, int]],
        v: int,
        mode: str,
    ) -> int:
        depth = self.n_rounds - state.round - 1
        pebbled = tuple(a for a, _ in others) + (v,)
        tree = build_strategy_tree(
            g_s, pebbled, self.k, max(depth, 0), mode, self.node_budget
        )
        refined = refine(tree)
        if tree_size(refined) > self.mu:
            raise AgentInvariantError(
                f"refined tree size {tree_size(refined)} exceeds mu={self.mu}"
            )
        pattern, _roles = tree_to_graph(refined, g_s, pebbled, self.k, mode)
        if pattern.host.n > len(pattern.root_vertices):
            verdict = classify_pair(pattern, Fraction(1, self.k - 1))
            if verdict.classification != "sparse":
                raise AgentInvariantError(
                    f"derived pair is {verdict.classification}, not sparse"
                )
        roots_o = tuple(b for _, b in others)
        embedding = find_generic_extension(g_o, roots_o, pattern, self.k)
        if embedding is None:
            raise ResignError(EXT_MISSING, "no generic extension in the host")
        return embedding[len(pebbled) - 1]

    def _navigate_reply(
        self,
        state: GameState,
        g_s: Graph,
        g_o: Graph,
        others: list[tuple[int, int]],
        pebble: int,
        v: int,
        oriented: list,
    ) -> int:
        depth = self.n_rounds - state.round
        config = list(others)
        old = oriented[pebble]
        if old is not None and old not in others:
            config = sorted(config + [old])
        mode = FRESH if len(config) == self.k - 1 else FULL
        pebbled_s = tuple(a for a, _ in config)
        pebbled_o = tuple(b for _, b in config)
        tree_s = build_strategy_tree(
            g_s, pebbled_s, self.k, depth, mode, self.node_budget
        )
        tree_o = build_strategy_tree(
            g_o, pebbled_o, self.k, depth, mode, self.node_budget
        )
        target_r = frozenset(i for i, p in enumerate(config) if p in others)
        played = None
        for child in tree_s.children:
            if child.R == target_r and child.v == v:
                played = child
                break
        if played is None:
            raise AgentInvariantError(
                "Spoiler's common-neighbor move is missing from its own tree"
            )
        target_code = _node_code(_refine_node(played))
        best: Optional[StrategyNode] = None
        for child in tree_o.children:
            if child.R != target_r:
                continue
            if _node_code(_refine_node(child)) == target_code:
                if best is None or (child.S, child.v) < (best.S, best.v):
                    best = child
        if best is None:
            raise ResignError(
                TREE_MISMATCH, "no matching subtree class in the other graph"
            )
        return best.v


def _refine_node(node: StrategyNode) -> StrategyNode:
    return StrategyNode(node.R, node.S, node.v, _refine_children(node.children))


# -- serialization -----------------------------------------------------


def tree_to_json(tree: StrategyTree) -> dict:
    def encode(n: StrategyNode) -> dict:
        return {
            "R": sorted(n.R),
            "S": list(n.S),
            "v": n.v,
            "children": [encode(c) for c in n.children],
        }

    return {"k": tree.k, "children": [encode(c) for c in tree.children]}


def tree_from_json(obj: dict) -> StrategyTree:
    def decode(d: dict) -> StrategyNode:
        return StrategyNode(
            frozenset(d["R"]),
            tuple(d["S"]),
            d["v"],
            [decode(c) for c in d.get("children", [])],
        )

    return StrategyTree(obj["k"], [decode(c) for c in obj.get("children", [])])

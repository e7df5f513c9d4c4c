"""Shared helpers: the small-graph atlas and a bounded-sentence corpus."""

from __future__ import annotations

import itertools
import random
from functools import lru_cache

from zolab.graphs import Graph
from zolab.logic import Adj, And, Eq, Exists, Forall, Formula, Iff, Implies, Not, Or


def _canonical(n: int, edges: frozenset[tuple[int, int]]) -> frozenset:
    best = None
    for perm in itertools.permutations(range(n)):
        mapped = frozenset(tuple(sorted((perm[u], perm[v]))) for u, v in edges)
        key = tuple(sorted(mapped))
        if best is None or key < best:
            best = key
    return frozenset(best)


@lru_cache(maxsize=None)
def atlas(max_n: int = 5) -> tuple[Graph, ...]:
    """One representative per isomorphism class of graphs on 1..max_n vertices."""
    out = []
    for n in range(1, max_n + 1):
        seen = set()
        all_pairs = list(itertools.combinations(range(n), 2))
        for bits in range(2 ** len(all_pairs)):
            edges = frozenset(p for i, p in enumerate(all_pairs) if bits >> i & 1)
            canon = _canonical(n, edges)
            if (n, canon) not in seen:
                seen.add((n, canon))
                out.append(Graph(n, canon))
    return tuple(out)


def random_sentence(rng: random.Random, variables: list[str], max_rank: int) -> Formula:
    """A random closed sentence over the given variable pool with quantifier
    rank at most max_rank."""

    def formula(rank: int, bound: list[str], depth: int) -> Formula:
        choices = []
        if rank > 0:
            choices += ["forall", "exists"] * 2
        if bound and depth < 6:
            choices += ["atom"] * 2
        if depth < 6:
            choices += ["not", "and", "or", "implies", "iff"]
        if not choices:
            choices = ["atom"] if bound else ["forall"]
        kind = rng.choice(choices)
        if kind in ("forall", "exists"):
            var = rng.choice(variables)
            body = formula(rank - 1 if rank else 0, sorted(set(bound) | {var}), depth + 1)
            return Forall(var, body) if kind == "forall" else Exists(var, body)
        if kind == "atom":
            a, b = rng.choice(bound), rng.choice(bound)
            return Eq(a, b) if rng.random() < 0.5 else Adj(a, b)
        if kind == "not":
            return Not(formula(rank, bound, depth + 1))
        left = formula(rank, bound, depth + 1)
        right = formula(rank, bound, depth + 1)
        op = {"and": And, "or": Or, "implies": Implies, "iff": Iff}[kind]
        return op(left, right)

    var = rng.choice(variables)
    quant = rng.choice([Forall, Exists])
    return quant(var, formula(max_rank - 1, [var], 1))

import random
from collections import deque

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_sentence
from test_graphs import small_graphs
from zolab.graphs import Graph
from zolab.logic import (
    Adj,
    And,
    Eq,
    Exists,
    Forall,
    FormulaScopeError,
    FormulaSyntaxError,
    Not,
    Or,
    build_diameter_sentence,
    build_phi_chain,
    evaluate,
    evaluate_naive,
    free_variables,
    parse,
    quantifier_rank,
    render,
    variable_count,
)


class TestParser:
    def test_simple(self):
        f = parse("E x. A y. (x=y | x~y)")
        assert isinstance(f, Exists)
        assert variable_count(f) == 2
        assert quantifier_rank(f) == 2

    def test_render_parse_round_trip(self):
        texts = [
            "E x. A y. (x=y | x~y)",
            "A x. !E y. (x~y & !x=y)",
            "E x. (x=x -> A y. (y~x <-> y=x))",
        ]
        for t in texts:
            f = parse(t)
            assert parse(render(f)) == f

    @given(st.integers(0, 2**32))
    @settings(max_examples=60, deadline=None)
    def test_round_trip_random(self, seed):
        f = random_sentence(random.Random(seed), ["x", "y"], 3)
        assert parse(render(f)) == f

    def test_syntax_error_position(self):
        with pytest.raises(FormulaSyntaxError):
            parse("E x. (x=x |")

    def test_unbound_variable(self):
        with pytest.raises(FormulaScopeError):
            parse("E x. x~y")

    def test_open_formula_rejected(self):
        with pytest.raises(FormulaScopeError):
            parse("x=x")

    def test_whitespace_insensitive(self):
        assert parse("E x.x=x") == parse("E x . x = x")


class TestMetrics:
    def test_variable_reuse_counts_once(self):
        f = parse("E x. (x~x | E x. x=x)")
        assert variable_count(f) == 1

    def test_rank_nested_vs_sibling(self):
        f = parse("(E x. E y. x~y & E x. x=x)")
        assert quantifier_rank(f) == 2

    def test_free_variables(self):
        inner = Adj("x", "y")
        assert free_variables(inner) == frozenset({"x", "y"})
        assert free_variables(Exists("y", inner)) == frozenset({"x"})


class TestEvaluate:
    def test_fixed_values(self):
        c4 = Graph.cycle(4)
        assert evaluate(c4, parse("A x. E y. x~y"))
        assert not evaluate(c4, parse("E x. A y. (x=y | x~y)"))
        assert evaluate(Graph.complete(3), parse("A x. A y. (x=y | x~y)"))

    def test_empty_graph(self):
        g = Graph.empty(0)
        assert evaluate(g, parse("A x. x~x"))
        assert not evaluate(g, parse("E x. x=x"))

    @given(st.integers(0, 2**32), small_graphs(5))
    @settings(max_examples=120, deadline=None)
    def test_memoized_matches_naive(self, seed, g):
        f = random_sentence(random.Random(seed), ["x", "y"], 3)
        assert evaluate(g, f) == evaluate_naive(g, f)


def bfs_diameter(g: Graph):
    if g.n == 0:
        return 0
    worst = 0
    for src in g.vertices():
        dist = {src: 0}
        queue = deque([src])
        while queue:
            u = queue.popleft()
            for w in g.neighbors(u):
                if w not in dist:
                    dist[w] = dist[u] + 1
                    queue.append(w)
        if len(dist) < g.n:
            return None  # disconnected
        worst = max(worst, max(dist.values()))
    return worst


class TestDiameterSentence:
    def test_uses_three_variables(self):
        for d in (1, 2, 3, 4):
            f = build_diameter_sentence(d)
            assert variable_count(f) <= 3
            assert quantifier_rank(f) <= d + 1

    @given(small_graphs(6), st.integers(1, 4))
    @settings(max_examples=100, deadline=None)
    def test_matches_bfs(self, g, d):
        diam = bfs_diameter(g)
        expected = diam is not None and diam <= d
        assert evaluate(g, build_diameter_sentence(d)) == expected


class TestChainSentence:
    def test_variable_budget(self):
        for k in (3, 4):
            for ell in (1, 2, 3):
                f = build_phi_chain(k, ell)
                assert variable_count(f) == k

    def test_k3_length1_is_triangle_detection(self):
        f = build_phi_chain(3, 1)
        assert evaluate(Graph.complete(3), f)
        assert not evaluate(Graph.cycle(5), f)
        assert not evaluate(Graph.complete_bipartite(2, 3), f)

    def test_k3_degenerate_above_length1(self):
        # The variable-reuse trick that binds the terminator leaves the
        # original first root available as a witness when k=3, so every
        # minimality conjunct fails: the sentence is unsatisfiable.
        for ell in (2, 3):
            f = build_phi_chain(3, ell)
            for g in (Graph.complete(6), Graph.complete_bipartite(3, 3)):
                assert not evaluate(g, f)

    def test_k4_detects_exact_lengths(self):
        from zolab.chains import build_terminated_chain, chain_spectrum

        for ell in (1, 2, 3):
            g, _ = build_terminated_chain(4, ell)
            spectrum = chain_spectrum(g, 4, 4)
            for j in (1, 2, 3):
                assert evaluate(g, build_phi_chain(4, j)) == (j in spectrum)

from fractions import Fraction

import pytest

from zolab.chains import (
    ChainParameterError,
    alpha_for,
    build_terminated_chain,
    chain_density,
    chain_property_holds,
    chain_spectrum,
    min_chain_length,
    min_ell_strictly_balanced,
    pick_alpha,
)
from zolab.density import density, is_strictly_balanced, max_density
from zolab.graphs import Graph, automorphism_count


class TestConstruction:
    def test_counts(self):
        for k in (3, 4, 5):
            for ell in (1, 2, 5):
                g, roles = build_terminated_chain(k, ell)
                assert g.n == k + ell
                assert g.num_edges == (k - 2) + (k - 1) * (ell + 1)
                assert len(roles.roots) == k - 2
                assert len(roles.spine) == ell + 1

    def test_structure(self):
        g, roles = build_terminated_chain(4, 3)
        r1, r2 = roles.roots
        assert not g.has_edge(r1, r2)
        for x in roles.spine:
            assert g.has_edge(r1, x) and g.has_edge(r2, x)
        for a, b in zip(roles.spine, roles.spine[1:]):
            assert g.has_edge(a, b)
        t = roles.terminator
        assert g.has_edge(t, roles.spine[-1]) and g.has_edge(t, roles.spine[-2])
        assert g.has_edge(t, r1) and not g.has_edge(t, r2)

    def test_parameter_errors(self):
        with pytest.raises(ChainParameterError):
            build_terminated_chain(2, 1)
        with pytest.raises(ChainParameterError):
            build_terminated_chain(3, 0)

    def test_density_closed_form(self):
        for k in (3, 4, 5):
            for ell in range(1, 11):
                g, _ = build_terminated_chain(k, ell)
                assert density(g) == chain_density(k, ell)
        assert chain_density(4, 5) == Fraction(20, 9)
        assert alpha_for(4, 5) == Fraction(9, 20)


class TestBalanceSweep:
    def test_k4_all_balanced_to_8(self):
        ell0, verdicts = min_ell_strictly_balanced(4, 8)
        assert ell0 == 1
        assert all(verdicts.values())
        # no pass-fail-pass anomaly by construction of ell0
        seen_fail = False
        for ell in sorted(verdicts, reverse=True):
            if not verdicts[ell]:
                seen_fail = True
            assert not (seen_fail and verdicts[ell] and ell >= ell0)

    def test_k3_empirically_balanced(self):
        ell0, verdicts = min_ell_strictly_balanced(3, 8)
        assert ell0 == 1
        assert all(verdicts.values())

    def test_cross_check_max_density(self):
        for ell in (1, 4, 8):
            g, _ = build_terminated_chain(4, ell)
            assert is_strictly_balanced(g)[0] == (
                max_density(g) == (density(g), frozenset(range(g.n)))
            )

    def test_budget_guard(self):
        with pytest.raises(ResourceWarning):
            min_ell_strictly_balanced(3, 25, max_vertices=12)


class TestPickAlpha:
    def test_k3(self):
        assert pick_alpha(3, Fraction(1, 10)) == (7, Fraction(10, 17))

    def test_k4(self):
        assert pick_alpha(4, Fraction(1, 10)) == (7, Fraction(11, 26))

    def test_alpha_in_window(self):
        for k in (3, 4):
            ell, alpha = pick_alpha(k, Fraction(1, 10))
            lo = Fraction(1, k - 1)
            assert lo < alpha < lo + Fraction(1, 10)
            assert alpha == alpha_for(k, ell)

    def test_bad_epsilon(self):
        with pytest.raises(ValueError):
            pick_alpha(3, Fraction(0))


class TestOracle:
    def test_clean_chain_spectrum_is_full_range(self):
        # every chain contains shorter chains rooted at later spine vertices
        for k in (3, 4):
            for ell in (1, 2, 3):
                g, _ = build_terminated_chain(k, ell)
                assert chain_spectrum(g, k, ell + 1) == frozenset(range(1, ell + 1))

    def test_global_min_collapses_to_one(self):
        # consequence of the above: the global minimum is 1 whenever any
        # chain exists at all
        g, _ = build_terminated_chain(3, 3)
        assert min_chain_length(g, 3) == 1
        u = g.disjoint_union(build_terminated_chain(3, 5)[0])
        assert min_chain_length(u, 3) == 1

    def test_chain_free_graphs(self):
        for g in (Graph.cycle(7), Graph.path(6), Graph.complete_bipartite(3, 3)):
            assert min_chain_length(g, 3, ell_max=4) is None
            assert chain_spectrum(g, 3, 4) == frozenset()

    def test_diamond_is_the_minimal_chain(self):
        diamond, _ = build_terminated_chain(3, 1)
        assert min_chain_length(diamond, 3) == 1
        assert not chain_property_holds(diamond, 3, 2)
        assert chain_property_holds(diamond, 3, 1)

    def test_property_holds_per_configuration(self):
        g, _ = build_terminated_chain(3, 3)
        for ell in (1, 2, 3):
            assert chain_property_holds(g, 3, ell)
        assert not chain_property_holds(g, 3, 4)

    def test_k4_oracle(self):
        g, _ = build_terminated_chain(4, 2)
        assert chain_spectrum(g, 4, 3) == frozenset({1, 2})
        assert chain_property_holds(g, 4, 2)
        assert not chain_property_holds(g, 4, 3)

    def test_too_small_graph(self):
        assert min_chain_length(Graph.complete(3), 3, ell_max=3) is None


class TestFrozenAutomorphisms:
    def test_chain_automorphisms(self):
        # brute-force counts frozen before the Monte Carlo harness was built
        assert automorphism_count(build_terminated_chain(3, 3)[0]) == 2
        assert automorphism_count(build_terminated_chain(3, 7)[0]) == 1
        # (4,1): spine swap times first-root/terminator swap
        assert automorphism_count(build_terminated_chain(4, 1)[0]) == 4

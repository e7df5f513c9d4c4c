"""Terminated (k-1)-chains: construction, closed-form density, strictly
balanced sweeps, the semantic minimum-chain-length oracle, and the choice
of the exponent alpha just above 1/(k-1).

The chain on parameters (k, ell) has k-2 pairwise non-adjacent roots, a
spine x_0..x_ell of root-common-neighbors with consecutive spine vertices
adjacent, and one terminator adjacent to the first k-3 roots and the last
two spine vertices.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .density import is_strictly_balanced
from .graphs import Graph, common_neighbors


class ChainParameterError(ValueError):
    """Raised for k < 3 or ell < 1."""


@dataclass(frozen=True)
class ChainRoles:
    roots: tuple[int, ...]  # v_1..v_(k-2)
    spine: tuple[int, ...]  # x_0..x_ell
    terminator: int


def _check_params(k: int, ell: int) -> None:
    if k < 3:
        raise ChainParameterError(f"k must be >= 3, got {k}")
    if ell < 1:
        raise ChainParameterError(f"ell must be >= 1, got {ell}")


def build_terminated_chain(k: int, ell: int) -> tuple[Graph, ChainRoles]:
    """The chain graph with deterministic numbering: roots, then spine,
    then terminator."""
    _check_params(k, ell)
    roots = tuple(range(k - 2))
    spine = tuple(range(k - 2, k - 2 + ell + 1))
    terminator = k - 1 + ell
    edges: set[tuple[int, int]] = set()
    for r in roots:
        edges.add((r, spine[0]))
    for i in range(1, ell + 1):
        edges.add((spine[i - 1], spine[i]))
        for r in roots:
            edges.add((r, spine[i]))
    for r in roots[: k - 3]:
        edges.add((r, terminator))
    edges.add((spine[ell - 1], terminator))
    edges.add((spine[ell], terminator))
    return Graph(k + ell, frozenset(edges)), ChainRoles(roots, spine, terminator)


def chain_density(k: int, ell: int) -> Fraction:
    """Closed form (k-2 + (k-1)(ell+1)) / (k+ell)."""
    _check_params(k, ell)
    return Fraction((k - 2) + (k - 1) * (ell + 1), k + ell)


def alpha_for(k: int, ell: int) -> Fraction:
    """Sampling exponent 1/rho for the (k, ell) chain."""
    return 1 / chain_density(k, ell)


def min_ell_strictly_balanced(
    k: int, ell_max: int, max_vertices: int = 22
) -> tuple[Optional[int], dict[int, bool]]:
    """Sweep ell = 1..ell_max for strict balance; returns the least ell0
    such that all ell0 <= ell <= ell_max pass, plus per-ell verdicts.

    Strict balance is only guaranteed asymptotically for k >= 4; k = 3
    runs are still allowed and report empirical verdicts.
    """
    _check_params(k, 1)
    verdicts: dict[int, bool] = {}
    for ell in range(1, ell_max + 1):
        g, _ = build_terminated_chain(k, ell)
        if g.n > max_vertices:
            raise ResourceWarning(
                f"chain on {g.n} vertices exceeds the sweep budget of {max_vertices}"
            )
        verdicts[ell] = is_strictly_balanced(g)[0]
    ell0: Optional[int] = None
    for ell in range(ell_max, 0, -1):
        if not verdicts[ell]:
            break
        ell0 = ell
    return ell0, verdicts


def pick_alpha(
    k: int, epsilon: Fraction, ell_max: int = 12
) -> tuple[int, Fraction]:
    """Least ell with the chain strictly balanced and alpha strictly inside
    (1/(k-1), 1/(k-1) + epsilon); returns (ell, alpha)."""
    if epsilon <= 0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    lo = Fraction(1, k - 1)
    ell0, verdicts = min_ell_strictly_balanced(k, ell_max)
    if ell0 is None:
        raise ResourceWarning(
            f"no strictly balanced chain found for k={k} up to ell={ell_max}"
        )
    for ell in range(ell0, ell_max + 1):
        alpha = alpha_for(k, ell)
        if lo < alpha < lo + epsilon and verdicts[ell]:
            return ell, alpha
    # alpha decreases toward 1/(k-1) as ell grows; report the needed range.
    raise ResourceWarning(
        f"no ell <= {ell_max} puts alpha inside ({lo}, {lo + epsilon}); "
        f"increase the sweep range"
    )


def min_chain_length(g: Graph, k: int, ell_max: Optional[int] = None) -> Optional[int]:
    """Least ell such that g contains a terminated chain (as a subgraph,
    roots pairwise non-adjacent) rooted at some k-2 tuple; None if no
    chain of length <= ell_max exists.

    Backtracking over root tuples, then spines of root-common-neighbors,
    with a final terminator check.
    """
    if k < 3:
        raise ChainParameterError(f"k must be >= 3, got {k}")
    if ell_max is None:
        ell_max = g.n  # spine length is bounded by the vertex count
    for ell in range(1, ell_max + 1):
        if g.n < k + ell:
            return None
        if _has_chain(g, k, ell):
            return ell
    return None


def _has_chain(g: Graph, k: int, ell: int) -> bool:
    for roots in itertools.combinations(range(g.n), k - 2):
        if any(g.has_edge(a, b) for a, b in itertools.combinations(roots, 2)):
            continue
        pool = common_neighbors(g, roots)
        if _extend_spine(g, roots, pool, [], ell):
            return True
    return False


def _extend_spine(
    g: Graph,
    roots: tuple[int, ...],
    pool: frozenset[int],
    spine: list[int],
    ell: int,
) -> bool:
    if len(spine) == ell + 1:
        return _find_terminator(g, roots, spine)
    for v in sorted(pool):
        if v in spine:
            continue
        if spine and not g.has_edge(spine[-1], v):
            continue
        spine.append(v)
        if _extend_spine(g, roots, pool, spine, ell):
            spine.pop()
            return True
        spine.pop()
    return False


def _root_configs(g: Graph, k: int):
    """Pairwise non-adjacent root sets with their common-neighbor pools."""
    for combo in itertools.combinations(range(g.n), k - 2):
        if any(g.has_edge(a, b) for a, b in itertools.combinations(combo, 2)):
            continue
        yield combo, common_neighbors(g, combo)


def _config_min(
    g: Graph,
    roots: tuple[int, ...],
    pool: list[int],
    x0: int,
    cap: int,
) -> Optional[int]:
    """Least ell <= cap with a genuine chain from the fixed (roots, x0)."""
    best: list[Optional[int]] = [None]
    spine = [x0]

    def dfs() -> None:
        ell = len(spine) - 1
        if ell >= 1 and (best[0] is None or ell < best[0]):
            if _find_terminator(g, roots, spine):
                best[0] = ell
                return
        if best[0] is not None and ell + 1 >= best[0]:
            return
        if ell + 1 > cap:
            return
        for v in pool:
            if v in spine or not g.has_edge(spine[-1], v):
                continue
            spine.append(v)
            dfs()
            spine.pop()
            if best[0] == 1:
                return

    dfs()
    return best[0]


def chain_spectrum(g: Graph, k: int, cap: int) -> frozenset[int]:
    """All per-configuration minimum chain lengths up to cap.

    A configuration is an ordered root tuple (the terminator skips the
    last root) together with a spine start x_0; its minimum is the least
    length of a genuine chain realizing it.
    """
    if k < 3:
        raise ChainParameterError(f"k must be >= 3, got {k}")
    if cap < 1:
        raise ChainParameterError(f"cap must be >= 1, got {cap}")
    found: set[int] = set()
    full = set(range(1, cap + 1))
    for combo, pool_set in _root_configs(g, k):
        if len(pool_set) < 2:
            continue
        pool = sorted(pool_set)
        for roots in itertools.permutations(combo) if k > 3 else (combo,):
            for x0 in pool:
                m = _config_min(g, roots, pool, x0, cap)
                if m is not None:
                    found.add(m)
            if found == full:
                return frozenset(found)
    return frozenset(found)


def chain_property_holds(g: Graph, k: int, ell: int) -> bool:
    """True iff some configuration has minimum chain length exactly ell.

    This is the semantic reading of the chain sentence: the spine needs
    ell edges inside the root pool, which prunes almost every root tuple
    on sparse graphs before any search starts.
    """
    _check_params(k, ell)
    for combo, pool_set in _root_configs(g, k):
        if len(pool_set) < ell + 1:
            continue
        pool = sorted(pool_set)
        pool_edges = sum(len(g.neighbors(u) & pool_set) for u in pool) // 2
        if pool_edges < ell:
            continue
        for roots in itertools.permutations(combo) if k > 3 else (combo,):
            for x0 in pool:
                if _config_min(g, roots, pool, x0, ell) == ell:
                    return True
    return False


def _find_terminator(g: Graph, roots: tuple[int, ...], spine: list[int]) -> bool:
    needed = list(roots[: len(roots) - 1]) + [spine[-2], spine[-1]]
    candidates = set(g.neighbors(needed[0]))
    for b in needed[1:]:
        candidates &= g.neighbors(b)
    used = set(roots) | set(spine)
    return any(x not in used for x in candidates)

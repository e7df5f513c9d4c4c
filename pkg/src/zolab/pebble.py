"""The k-pebble Ehrenfeucht-Fraissé game on two finite graphs.

Exact solver by backward induction over the configuration space,
pluggable-strategy match runner, and a soundness cross-check against the
model checker: a Duplicator win in N rounds means no k-variable sentence
of quantifier rank <= N distinguishes the graphs.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field, replace
from typing import Optional, Protocol, Sequence

import numpy as np

from .graphs import Graph, is_partial_isomorphism
from .logic import Formula, evaluate, quantifier_rank, render, variable_count

SPOILER = "Spoiler"
DUPLICATOR = "Duplicator"

LEFT = "left"
RIGHT = "right"


class ResourceBudgetError(RuntimeError):
    """Raised when a configuration-space sweep would exceed its budget."""


@dataclass(frozen=True)
class SpoilerMove:
    pebble: int  # 0-based pebble index
    side: str  # LEFT or RIGHT
    vertex: int


@dataclass(frozen=True)
class GameState:
    left: Graph
    right: Graph
    k: int
    n_rounds: int
    round: int = 0
    placements: tuple[Optional[tuple[int, int]], ...] = ()

    def __post_init__(self) -> None:
        if not self.placements:
            object.__setattr__(self, "placements", (None,) * self.k)

    def placed_pairs(self) -> list[tuple[int, int]]:
        return [p for p in self.placements if p is not None]

    def alive(self) -> bool:
        return is_partial_isomorphism(self.left, self.right, self.placed_pairs())


class Solver:
    """Exact backward induction, vectorized over pebble configurations.

    A configuration assigns each pebble either "unplaced" (code 0) or a
    pair (a, b), coded 1 + a*v(G2) + b.  survive[t] is a boolean array
    over all configurations: can Duplicator last t more rounds from here?
    Since a Spoiler move overwrites a slot, the per-slot transition is
    independent of that slot's current value, which makes each round a
    handful of any/all reductions.
    """

    def __init__(
        self, g1: Graph, g2: Graph, k: int, n_rounds: int, budget: int = 5 * 10**7
    ):
        if k < 1:
            raise ValueError(f"k must be >= 1, got {k}")
        if n_rounds < 0:
            raise ValueError(f"round count must be >= 0, got {n_rounds}")
        side = g1.n * g2.n + 1
        if side**k * (n_rounds + 1) > budget:
            raise ResourceBudgetError(
                f"{side ** k} configurations x {n_rounds + 1} rounds "
                f"exceed the budget of {budget}"
            )
        self.g1 = g1
        self.g2 = g2
        self.k = k
        self.n_rounds = n_rounds
        self._side = side
        shape = (side,) * k

        compat = self._pair_compatibility()
        alive = np.ones(shape, dtype=bool)
        for i in range(k):
            for j in range(i + 1, k):
                # Broadcast the 2-d compatibility table onto axes (i, j).
                alive &= np.expand_dims(
                    compat, axis=tuple(t for t in range(k) if t not in (i, j))
                )
        self.survive: list[np.ndarray] = [alive]
        for _ in range(n_rounds):
            self.survive.append(self._step(self.survive[-1], alive))

    def _pair_compatibility(self) -> np.ndarray:
        """compat[p, q]: may pair codes p and q coexist in a partial
        isomorphism?  Code 0 (unplaced) is compatible with everything."""
        n1, n2 = self.g1.n, self.g2.n
        side = self._side
        compat = np.ones((side, side), dtype=bool)
        adj1 = np.zeros((n1, n1), dtype=bool)
        for u, v in self.g1.edges:
            adj1[u, v] = adj1[v, u] = True
        adj2 = np.zeros((n2, n2), dtype=bool)
        for u, v in self.g2.edges:
            adj2[u, v] = adj2[v, u] = True
        if n1 and n2:
            a = np.arange(n1 * n2) // n2
            b = np.arange(n1 * n2) % n2
            eq_a = a[:, None] == a[None, :]
            eq_b = b[:, None] == b[None, :]
            edge_a = adj1[a[:, None], a[None, :]]
            edge_b = adj2[b[:, None], b[None, :]]
            compat[1:, 1:] = (eq_a == eq_b) & (edge_a == edge_b)
        return compat

    def _step(self, prev: np.ndarray, alive: np.ndarray) -> np.ndarray:
        n1, n2 = self.g1.n, self.g2.n
        result = alive.copy()
        for slot in range(self.k):
            rows = np.moveaxis(prev, slot, 0)[1:]  # drop the unplaced code
            rows = rows.reshape((n1, n2) + rows.shape[1:])
            # Spoiler plays v in G1, Duplicator needs some w in G2 -- and
            # the mirror-image demand.
            left_demand = rows.any(axis=1).all(axis=0)
            right_demand = rows.any(axis=0).all(axis=0)
            demand = left_demand & right_demand
            result &= np.expand_dims(demand, axis=slot)
        return result

    def config_index(
        self, placements: Sequence[Optional[tuple[int, int]]]
    ) -> tuple[int, ...]:
        codes = []
        for p in placements:
            codes.append(0 if p is None else 1 + p[0] * self.g2.n + p[1])
        return tuple(codes)

    def survives(
        self, placements: Sequence[Optional[tuple[int, int]]], rounds_left: int
    ) -> bool:
        return bool(self.survive[rounds_left][self.config_index(placements)])

    def winner_at(self, rounds: int) -> str:
        empty = (0,) * self.k
        return DUPLICATOR if self.survive[rounds][empty] else SPOILER

    def winner(self) -> str:
        return self.winner_at(self.n_rounds)


def solve_game(
    g1: Graph, g2: Graph, k: int, n_rounds: int, budget: int = 5 * 10**7
) -> str:
    """Winner of the k-pebble game in n_rounds rounds, SPOILER or DUPLICATOR."""
    return Solver(g1, g2, k, n_rounds, budget).winner()


# -- strategies --------------------------------------------------------


class SpoilerStrategy(Protocol):
    def spoiler_move(self, state: GameState, rng: random.Random) -> SpoilerMove: ...


class DuplicatorStrategy(Protocol):
    def duplicator_reply(
        self, state: GameState, move: SpoilerMove, rng: random.Random
    ) -> int: ...


def _other_graph(state: GameState, side: str) -> Graph:
    return state.right if side == LEFT else state.left


class RandomSpoiler:
    def spoiler_move(self, state: GameState, rng: random.Random) -> SpoilerMove:
        side = rng.choice([LEFT, RIGHT])
        graph = state.left if side == LEFT else state.right
        pebble = rng.randrange(state.k)
        return SpoilerMove(pebble, side, rng.randrange(graph.n))


class GreedySpoiler:
    """Prefers pebbling a common neighbor of k-1 already-placed vertices,
    the adversarial pattern the strategy-tree Duplicator defends against.
    Falls back to a random move when no such vertex exists."""

    def spoiler_move(self, state: GameState, rng: random.Random) -> SpoilerMove:
        placed = state.placed_pairs()
        candidates: list[SpoilerMove] = []
        for side, graph, coord in ((LEFT, state.left, 0), (RIGHT, state.right, 1)):
            anchors = {p[coord] for p in placed}
            if len(anchors) < state.k - 1:
                continue
            for v in graph.vertices():
                hits = sum(1 for a in anchors if graph.has_edge(a, v))
                if hits >= state.k - 1:
                    free = [i for i, p in enumerate(state.placements) if p is None]
                    pebble = free[0] if free else rng.randrange(state.k)
                    candidates.append(SpoilerMove(pebble, side, v))
        if candidates:
            return rng.choice(candidates)
        return RandomSpoiler().spoiler_move(state, rng)


class OptimalSpoiler:
    """Plays the solver's winning strategy when Spoiler wins; otherwise the
    first legal move."""

    def __init__(self, solver: Solver):
        self.solver = solver

    def spoiler_move(self, state: GameState, rng: random.Random) -> SpoilerMove:
        rounds_after = state.n_rounds - state.round - 1
        for pebble in range(state.k):
            rest = list(state.placements)
            for side, graph, other in (
                (LEFT, state.left, state.right),
                (RIGHT, state.right, state.left),
            ):
                for v in graph.vertices():
                    ok = False
                    for w in other.vertices():
                        pair = (v, w) if side == LEFT else (w, v)
                        rest[pebble] = pair
                        if self.solver.survives(rest, rounds_after):
                            ok = True
                            break
                    rest[pebble] = state.placements[pebble]
                    if not ok:
                        return SpoilerMove(pebble, side, v)
        return SpoilerMove(0, LEFT, 0)


class OptimalDuplicator:
    """Replies with any vertex keeping a surviving configuration; when none
    exists (Spoiler already forced the loss), answers vertex 0."""

    def __init__(self, solver: Solver):
        self.solver = solver

    def duplicator_reply(
        self, state: GameState, move: SpoilerMove, rng: random.Random
    ) -> int:
        rounds_after = state.n_rounds - state.round - 1
        rest = list(state.placements)
        other = _other_graph(state, move.side)
        for w in other.vertices():
            pair = (move.vertex, w) if move.side == LEFT else (w, move.vertex)
            rest[move.pebble] = pair
            if self.solver.survives(rest, rounds_after):
                return w
        return 0


class MirrorDuplicator:
    """Answers through a fixed isomorphism left -> right (identity by default)."""

    def __init__(self, mapping: Optional[dict[int, int]] = None):
        self.mapping = mapping

    def duplicator_reply(
        self, state: GameState, move: SpoilerMove, rng: random.Random
    ) -> int:
        if self.mapping is None:
            return move.vertex
        if move.side == LEFT:
            return self.mapping[move.vertex]
        inverse = {v: u for u, v in self.mapping.items()}
        return inverse[move.vertex]


class ResignError(Exception):
    """Raised by a duplicator strategy to resign with a machine reason code."""

    def __init__(self, code: str, detail: str = ""):
        super().__init__(detail or code)
        self.code = code


# -- referee -----------------------------------------------------------


@dataclass
class Transcript:
    winner: str = ""
    reason: str = ""
    resign_code: str = ""
    moves: list[dict] = field(default_factory=list)


def play_game(
    g1: Graph,
    g2: Graph,
    k: int,
    n_rounds: int,
    spoiler: SpoilerStrategy,
    duplicator: DuplicatorStrategy,
    seed: int = 0,
) -> Transcript:
    """Referee a match; enforces legality, the partial-isomorphism loss
    condition after every round, and the round limit."""
    rng = random.Random(seed)
    state = GameState(g1, g2, k, n_rounds)
    transcript = Transcript()
    for rnd in range(1, n_rounds + 1):
        try:
            move = spoiler.spoiler_move(state, rng)
            graph = state.left if move.side == LEFT else state.right
            if not (0 <= move.pebble < k) or not (0 <= move.vertex < graph.n):
                raise ValueError(f"illegal spoiler move {move}")
        except Exception as exc:
            transcript.winner = DUPLICATOR
            transcript.reason = f"spoiler forfeit: {exc}"
            return transcript
        transcript.moves.append(
            {"round": rnd, "side": SPOILER, "pebble": move.pebble,
             "graph": move.side, "vertex": move.vertex}
        )
        try:
            reply = duplicator.duplicator_reply(state, move, rng)
            other = _other_graph(state, move.side)
            if not (0 <= reply < other.n):
                raise ValueError(f"illegal duplicator reply {reply}")
        except ResignError as exc:
            transcript.winner = SPOILER
            transcript.reason = f"duplicator resigned: {exc.code}"
            transcript.resign_code = exc.code
            return transcript
        except Exception as exc:
            transcript.winner = SPOILER
            transcript.reason = f"duplicator forfeit: {exc}"
            transcript.resign_code = "FORFEIT"
            return transcript
        other_side = RIGHT if move.side == LEFT else LEFT
        transcript.moves.append(
            {"round": rnd, "side": DUPLICATOR, "pebble": move.pebble,
             "graph": other_side, "vertex": reply}
        )
        pair = (move.vertex, reply) if move.side == LEFT else (reply, move.vertex)
        placements = list(state.placements)
        placements[move.pebble] = pair
        state = replace(state, placements=tuple(placements), round=rnd)
        if not state.alive():
            transcript.winner = SPOILER
            transcript.reason = "partial isomorphism broken"
            return transcript
    transcript.winner = DUPLICATOR
    transcript.reason = f"survived {n_rounds} rounds"
    return transcript


# -- soundness ---------------------------------------------------------


def soundness_check(
    g1: Graph, g2: Graph, k: int, n_rounds: int, sentences: Sequence[Formula]
) -> dict:
    """Cross-check the solver against direct model checking.

    When Duplicator wins the N-round game, no sentence with at most k
    variables and quantifier rank at most N may distinguish the graphs.
    Any violation signals an implementation bug.
    """
    for f in sentences:
        if variable_count(f) > k:
            raise ValueError(f"sentence exceeds {k} variables: {render(f)}")
        if quantifier_rank(f) > n_rounds:
            raise ValueError(f"sentence exceeds rank {n_rounds}: {render(f)}")
    winner = solve_game(g1, g2, k, n_rounds)
    distinguishers = [f for f in sentences if evaluate(g1, f) != evaluate(g2, f)]
    violations = distinguishers if winner == DUPLICATOR else []
    return {
        "winner": winner,
        "distinguishers": distinguishers,
        "violations": violations,
    }

"""Seeded G(n,p) sampling and the Monte Carlo harness.

Poisson limits for small-subgraph counts, appearance-threshold sweeps,
satisfaction-frequency estimation for chain targets against the analytic
limit, and Duplicator-survival matches on independent random graph pairs.
Every run is fully determined by its plan and seed; per-trial RNG streams
derive from (seed, trial) so trial order and parallelism cannot change
results.
"""

from __future__ import annotations

import csv
import io
import math
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .chains import build_terminated_chain, chain_property_holds
from .density import density, is_strictly_balanced
from .graphs import (
    Graph,
    automorphism_count,
    enumerate_embeddings,
    iter_embeddings,
)
from .logic import evaluate, parse, variable_count
from .pebble import (
    DUPLICATOR,
    GreedySpoiler,
    OptimalSpoiler,
    RandomSpoiler,
    ResourceBudgetError,
    Solver,
    play_game,
)
from .strategy import DuplicatorAgent, INVARIANT_VIOLATION

MODEL_CHECK_BUDGET = 10**7  # n^k configuration ceiling for formula mode


@dataclass(frozen=True)
class ExperimentPlan:
    """One fully reproducible experiment: (plan, seed) determines every byte
    of output."""

    id: str
    target: str  # "satisfaction" | "poisson" | "threshold" | "ef-game"
    n_grid: tuple[int, ...]
    trials: int
    seed: int
    alpha: Optional[Fraction] = None
    p: Optional[float] = None
    params: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if self.target not in {"satisfaction", "poisson", "threshold", "ef-game"}:
            raise ValueError(f"unknown target {self.target!r}")


def plan_to_json(plan: ExperimentPlan) -> dict:
    obj = {
        "id": plan.id,
        "target": plan.target,
        "nGrid": list(plan.n_grid),
        "trials": plan.trials,
        "seed": plan.seed,
        "params": dict(plan.params),
    }
    if plan.alpha is not None:
        obj["alpha"] = f"{plan.alpha.numerator}/{plan.alpha.denominator}"
    if plan.p is not None:
        obj["p"] = plan.p
    return obj


def plan_from_json(obj: dict) -> ExperimentPlan:
    alpha = None
    if "alpha" in obj and obj["alpha"] is not None:
        alpha = parse_rational(obj["alpha"])
    return ExperimentPlan(
        id=obj["id"],
        target=obj["target"],
        n_grid=tuple(obj.get("nGrid", [])),
        trials=obj["trials"],
        seed=obj["seed"],
        alpha=alpha,
        p=obj.get("p"),
        params=dict(obj.get("params", {})),
    )


def parse_rational(text) -> Fraction:
    """Rationals are written p/q; a bare integer means q=1."""
    if isinstance(text, int):
        return Fraction(text)
    s = str(text).strip()
    if "/" in s:
        num, den = s.split("/", 1)
        return Fraction(int(num), int(den))
    return Fraction(int(s))


@dataclass(frozen=True)
class Estimate:
    n: int
    m: Optional[int]
    alpha: Optional[Fraction]
    trials: int
    successes: int
    analytic_reference: Optional[float] = None

    @property
    def frequency(self) -> float:
        return self.successes / self.trials

    @property
    def ci_halfwidth(self) -> float:
        f = self.frequency
        return 1.96 * math.sqrt(f * (1 - f) / self.trials)


# -- sampling ----------------------------------------------------------


def trial_rng(seed: int, label) -> random.Random:
    """Independent per-trial stream keyed on (seed, label)."""
    return random.Random(f"{seed}:{label}")


def _pair_from_index(t: int, n: int) -> tuple[int, int]:
    # Lexicographic rank over pairs u < v.
    total = n * (n - 1) // 2
    rem = total - t - 1
    w = (math.isqrt(8 * rem + 1) - 1) // 2
    u = n - 2 - w
    row_start = u * n - u * (u + 1) // 2
    return u, u + 1 + (t - row_start)


def sample_gnp(n: int, p: float, seed) -> Graph:
    """G(n,p): every pair an edge independently with probability p.

    `seed` is an integer or an already-positioned random.Random.  Small p
    uses geometric edge-skipping over the lexicographic pair ranks, which
    has the same distribution as per-pair coin flips.
    """
    if not 0 <= p <= 1:
        raise ValueError(f"p must lie in [0,1], got {p}")
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    if p == 0 or n < 2:
        return Graph(n, frozenset())
    if p == 1:
        return Graph.complete(n)
    total = n * (n - 1) // 2
    edges: list[tuple[int, int]] = []
    if p > 0.3:
        for u in range(n - 1):
            for v in range(u + 1, n):
                if rng.random() < p:
                    edges.append((u, v))
        return Graph(n, frozenset(edges))
    log_q = math.log1p(-p)
    t = -1
    while True:
        r = rng.random()
        t += 1 + int(math.log1p(-r) / log_q)
        if t >= total:
            break
        edges.append(_pair_from_index(t, n))
    return Graph(n, frozenset(edges))


# -- Poisson limit -----------------------------------------------------


def poisson_pmf(lam: float, j: int) -> float:
    return math.exp(-lam + j * math.log(lam) - math.lgamma(j + 1)) if lam > 0 else float(j == 0)


def poisson_check(
    h: Graph, c: Fraction, n: int, trials: int, seed: int
) -> dict:
    """Copy counts of a strictly balanced pattern at p = c * n^(-1/rho),
    against the Poisson law with parameter c^e / a."""
    balanced, witness = is_strictly_balanced(h)
    if not balanced:
        raise ValueError(
            f"pattern is not strictly balanced; violating subset {sorted(witness)}"
        )
    a = automorphism_count(h)
    rho = density(h)
    lam = float(c) ** h.num_edges / a
    p = float(c) * n ** float(-1 / rho)
    counts: dict[int, int] = {}
    for t in range(trials):
        g = sample_gnp(n, p, trial_rng(seed, t))
        copies = len(enumerate_embeddings(h, g)) // a
        counts[copies] = counts.get(copies, 0) + 1
    mean = sum(j * c_ for j, c_ in counts.items()) / trials
    top = max(counts)
    tv = 0.0
    for j in range(0, top + 1):
        tv += abs(counts.get(j, 0) / trials - poisson_pmf(lam, j))
    tail = 1.0 - sum(poisson_pmf(lam, j) for j in range(top + 1))
    tv = 0.5 * (tv + max(tail, 0.0))
    return {
        "parameter": lam,
        "p": p,
        "mean": mean,
        "tv_distance": tv,
        "distribution": {j: counts[j] / trials for j in sorted(counts)},
        "trials": trials,
    }


# -- appearance thresholds ---------------------------------------------


def threshold_check(
    h: Graph,
    exponents: Sequence[Fraction],
    n: int,
    trials: int,
    seed: int,
) -> list[Estimate]:
    """Containment frequency of the pattern at p = n^(-alpha) per exponent."""
    if h.n == 0:
        raise ValueError("pattern must be non-empty")
    out = []
    for ai, alpha in enumerate(exponents):
        p = n ** float(-alpha)
        successes = 0
        for t in range(trials):
            g = sample_gnp(n, p, trial_rng(seed, f"{ai}:{t}"))
            if next(iter_embeddings(h, g), None) is not None:
                successes += 1
        out.append(Estimate(n, None, alpha, trials, successes))
    return out


# -- satisfaction frequency --------------------------------------------


def limit_probability(k: int, ell: int) -> float:
    """The non-convergence limit 1 - exp(-1/a) for the (k, ell) chain."""
    g, _ = build_terminated_chain(k, ell)
    return 1.0 - math.exp(-1.0 / automorphism_count(g))


def estimate_satisfaction(plan: ExperimentPlan) -> list[Estimate]:
    """Per-n satisfaction frequency of the plan's target property.

    Chain targets ({"kind": "chain", "k", "ell", "mode"}) run either the
    semantic oracle (any n) or the model checker on the chain sentence
    (budget-limited).  Formula targets ({"formula": text}) always model
    check.
    """
    params = plan.params
    analytic: Optional[float] = None
    if params.get("kind") == "chain":
        k = params["k"]
        ell = params["ell"]
        mode = params.get("mode", "oracle")
        analytic = limit_probability(k, ell)
        if mode == "oracle":
            def holds(g: Graph) -> bool:
                return chain_property_holds(g, k, ell)
        elif mode == "formula":
            from .logic import build_phi_chain

            sentence = build_phi_chain(k, ell)

            def holds(g: Graph) -> bool:
                _check_model_budget(g.n, k)
                return evaluate(g, sentence)
        else:
            raise ValueError(f"unknown chain mode {mode!r}")
    elif "formula" in params:
        sentence = parse(params["formula"])
        k = variable_count(sentence)

        def holds(g: Graph) -> bool:
            _check_model_budget(g.n, max(k, 1))
            return evaluate(g, sentence)
    else:
        raise ValueError("plan params need a chain target or a formula")

    out = []
    for n in plan.n_grid:
        p = plan.p if plan.p is not None else n ** float(-plan.alpha)
        successes = 0
        for t in range(plan.trials):
            g = sample_gnp(n, p, trial_rng(plan.seed, f"{n}:{t}"))
            if holds(g):
                successes += 1
        out.append(Estimate(n, None, plan.alpha, plan.trials, successes, analytic))
    return out


def _check_model_budget(n: int, k: int) -> None:
    if n**k > MODEL_CHECK_BUDGET:
        raise ResourceBudgetError(
            f"model checking at n={n}, k={k} exceeds the {MODEL_CHECK_BUDGET} "
            f"configuration budget; switch to the semantic oracle (mode=oracle)"
        )


# -- Duplicator survival -----------------------------------------------


SOLVER_BUDGET = 5 * 10**7


def ef_montecarlo(
    n_range: tuple[int, int],
    m_range: tuple[int, int],
    alpha: Fraction,
    k: int,
    n_rounds: int,
    trials: int,
    spoiler_kinds: Sequence[str],
    seed: int,
) -> dict:
    """Duplicator-agent survival over independent G(n, n^-alpha) pairs.

    Per spoiler kind: survival frequency plus a breakdown of resignations
    by reason code.  Invariant violations are counted separately and must
    be zero.  The solver-optimal spoiler is skipped (and reported so) on
    pairs exceeding the solver budget.
    """
    report: dict = {"kinds": {}, "trials": trials}
    for kind in spoiler_kinds:
        report["kinds"][kind] = {
            "survived": 0,
            "played": 0,
            "skipped": 0,
            "resignations": {},
            "invariant_violations": 0,
        }
    for t in range(trials):
        rng = trial_rng(seed, t)
        n = rng.randint(*n_range)
        m = rng.randint(*m_range)
        g1 = sample_gnp(n, n ** float(-alpha), rng)
        g2 = sample_gnp(m, m ** float(-alpha), rng)
        for kind in spoiler_kinds:
            bucket = report["kinds"][kind]
            if kind == "random":
                spoiler = RandomSpoiler()
            elif kind == "greedy":
                spoiler = GreedySpoiler()
            elif kind == "optimal":
                side = g1.n * g2.n + 1
                if side**k * (n_rounds + 1) > SOLVER_BUDGET:
                    bucket["skipped"] += 1
                    continue
                spoiler = OptimalSpoiler(Solver(g1, g2, k, n_rounds))
            else:
                raise ValueError(f"unknown spoiler kind {kind!r}")
            agent = DuplicatorAgent(k, n_rounds)
            transcript = play_game(
                g1, g2, k, n_rounds, spoiler, agent, seed=f"{seed}:{kind}:{t}"
            )
            bucket["played"] += 1
            if transcript.winner == DUPLICATOR:
                bucket["survived"] += 1
            elif transcript.resign_code:
                code = transcript.resign_code
                bucket["resignations"][code] = bucket["resignations"].get(code, 0) + 1
                if code == INVARIANT_VIOLATION:
                    bucket["invariant_violations"] += 1
    for kind in spoiler_kinds:
        bucket = report["kinds"][kind]
        played = bucket["played"]
        bucket["survival"] = bucket["survived"] / played if played else None
    return report


# -- CSV output --------------------------------------------------------


CSV_COLUMNS = [
    "plan_id",
    "n",
    "m",
    "alpha",
    "trials",
    "successes",
    "frequency",
    "ci_halfwidth",
    "analytic_reference",
    "seconds",
]


def estimates_to_csv(plan_id: str, estimates: Sequence[Estimate]) -> str:
    """Deterministic CSV: identical plans and seeds yield identical bytes.

    The seconds column is therefore left empty; wall-clock timing lives in
    the run manifest instead.
    """
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for e in estimates:
        writer.writerow(
            [
                plan_id,
                e.n,
                "" if e.m is None else e.m,
                "" if e.alpha is None else f"{e.alpha.numerator}/{e.alpha.denominator}",
                e.trials,
                e.successes,
                f"{e.frequency:.6f}",
                f"{e.ci_halfwidth:.6f}",
                "" if e.analytic_reference is None else f"{e.analytic_reference:.6f}",
                "",
            ]
        )
    return buf.getvalue()


def run_plan(plan: ExperimentPlan) -> tuple[list[Estimate], dict, float]:
    """Dispatch a plan; returns (per-n estimates, raw report, seconds)."""
    start = time.monotonic()
    report: dict = {}
    if plan.target == "poisson":
        h = _plan_pattern(plan)
        c = parse_rational(plan.params.get("c", 1))
        estimates = []
        for n in plan.n_grid:
            rep = poisson_check(h, c, n, plan.trials, plan.seed)
            report[str(n)] = rep
            # successes = trials with at least one copy; the analytic
            # reference column carries the Poisson parameter.
            at_least_one = int(
                round((1 - rep["distribution"].get(0, 0.0)) * plan.trials)
            )
            estimates.append(
                Estimate(n, None, plan.alpha, plan.trials, at_least_one,
                         rep["parameter"])
            )
    elif plan.target == "threshold":
        h = _plan_pattern(plan)
        exponents = [parse_rational(a) for a in plan.params.get("exponents", [])]
        if plan.alpha is not None and not exponents:
            exponents = [plan.alpha]
        estimates = []
        for n in plan.n_grid:
            for e in threshold_check(h, exponents, n, plan.trials, plan.seed):
                estimates.append(e)
        report["exponents"] = [str(a) for a in exponents]
    elif plan.target == "satisfaction":
        estimates = estimate_satisfaction(plan)
    elif plan.target == "ef-game":
        params = plan.params
        rep = ef_montecarlo(
            tuple(params["nRange"]),
            tuple(params["mRange"]),
            plan.alpha if plan.alpha is not None else parse_rational(params["alpha"]),
            params["k"],
            params["N"],
            plan.trials,
            params.get("spoilers", ["random", "greedy"]),
            plan.seed,
        )
        report = rep
        estimates = []
        for kind in sorted(rep["kinds"]):
            bucket = rep["kinds"][kind]
            if bucket["played"]:
                estimates.append(
                    Estimate(
                        params["nRange"][0],
                        params["mRange"][1],
                        plan.alpha,
                        bucket["played"],
                        bucket["survived"],
                    )
                )
    else:
        raise ValueError(f"unknown target {plan.target!r}")
    return estimates, report, time.monotonic() - start


def _plan_pattern(plan: ExperimentPlan) -> Graph:
    from .graphs import graph_from_json

    params = plan.params
    if "pattern" in params:
        return graph_from_json(params["pattern"])
    name = params.get("patternName", "K3")
    if name.startswith("K") and name[1:].isdigit():
        return Graph.complete(int(name[1:]))
    if name.startswith("C") and name[1:].isdigit():
        return Graph.cycle(int(name[1:]))
    raise ValueError(f"unknown pattern {name!r}")

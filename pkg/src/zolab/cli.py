"""Command line entry point.

Thin adapters only: parse arguments, route to the owning module,
serialize results.  Exit codes: 0 success, 2 input error, 3 resource
budget exceeded, 4 internal invariant violation.
"""

from __future__ import annotations

import argparse
import datetime
import hashlib
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Optional

from . import __version__
from .chains import (
    ChainParameterError,
    alpha_for,
    build_terminated_chain,
    chain_density,
    min_ell_strictly_balanced,
    pick_alpha,
)
from .density import (
    DensityDomainError,
    classify_pair,
    density,
    is_safe_pair,
    is_strictly_balanced,
    pair_from_json,
    pair_to_json,
)
from .experiments import (
    estimates_to_csv,
    plan_from_json,
    run_plan,
)
from .graphs import Graph, GraphFormatError, graph_to_json, read_graph
from .logic import (
    FormulaScopeError,
    FormulaSyntaxError,
    build_diameter_sentence,
    build_phi_chain,
    evaluate,
    parse,
    render,
)
from .pebble import (
    GreedySpoiler,
    MirrorDuplicator,
    OptimalDuplicator,
    OptimalSpoiler,
    RandomSpoiler,
    ResourceBudgetError,
    Solver,
    play_game,
    solve_game,
)
from .strategy import (
    FRESH,
    FULL,
    AgentInvariantError,
    DuplicatorAgent,
    build_strategy_tree,
    refine,
    tree_from_json,
    tree_to_graph,
    tree_to_json,
)

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_BUDGET = 3
EXIT_INVARIANT = 4


def _frac(text: str) -> Fraction:
    from .experiments import parse_rational

    return parse_rational(text)


def _load_graph(path: str) -> Graph:
    return read_graph(Path(path).read_text())


def _emit(text: str, path: Optional[str]) -> None:
    if path:
        Path(path).write_text(text)
    else:
        print(text)


def _out(args, payload: dict, text: str) -> None:
    if getattr(args, "json_out", False):
        print(json.dumps(payload, sort_keys=True))
    else:
        print(text)


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="zolab")
    top.add_argument("--json-out", action="store_true", dest="json_out")
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("density", help="edge/vertex density of a graph")
    p.add_argument("graph")

    p = sub.add_parser("balanced", help="strictly-balanced verdict")
    p.add_argument("graph")

    p = sub.add_parser("pair", help="classify a rooted pair at an exponent")
    p.add_argument("pair")
    p.add_argument("--alpha", required=True)
    p.add_argument("--safe", choices=["strict", "weak"])

    p = sub.add_parser("chain", help="terminated-chain constructions")
    chain_sub = p.add_subparsers(dest="chain_cmd")
    p.add_argument("--k", type=int)
    p.add_argument("--ell", type=int)
    p.add_argument("--emit")
    ps = chain_sub.add_parser("sweep")
    ps.add_argument("--k", type=int, required=True)
    ps.add_argument("--max-ell", type=int, required=True, dest="max_ell")
    pa = chain_sub.add_parser("alpha")
    pa.add_argument("--k", type=int, required=True)
    pa.add_argument("--epsilon", required=True)

    p = sub.add_parser("phi", help="the minimum-chain-length sentence")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--emit")

    p = sub.add_parser("diameter", help="the diameter-at-most-d sentence")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--emit")

    p = sub.add_parser("eval", help="model check a sentence on a graph")
    p.add_argument("--graph", required=True)
    p.add_argument("--formula", required=True)

    p = sub.add_parser("game", help="pebble games")
    game_sub = p.add_subparsers(dest="game_cmd", required=True)
    gs = game_sub.add_parser("solve")
    gs.add_argument("--left", required=True)
    gs.add_argument("--right", required=True)
    gs.add_argument("--k", type=int, required=True)
    gs.add_argument("--n", type=int, required=True)
    gs.add_argument("--strategy-out", dest="strategy_out")
    gp = game_sub.add_parser("play")
    gp.add_argument("--left", required=True)
    gp.add_argument("--right", required=True)
    gp.add_argument("--k", type=int, required=True)
    gp.add_argument("--n", type=int, required=True)
    gp.add_argument("--spoiler", choices=["optimal", "random", "greedy"],
                    required=True)
    gp.add_argument("--duplicator", choices=["optimal", "mirror", "tree"],
                    required=True)
    gp.add_argument("--seed", required=True)

    p = sub.add_parser("tree", help="strategy trees")
    tree_sub = p.add_subparsers(dest="tree_cmd", required=True)
    tb = tree_sub.add_parser("build")
    tb.add_argument("--graph", required=True)
    tb.add_argument("--pebbled", required=True, help="comma-separated vertices")
    tb.add_argument("--k", type=int, required=True)
    tb.add_argument("--depth", type=int, required=True)
    tb.add_argument("--refine", action="store_true")
    tb.add_argument("--emit")
    tg = tree_sub.add_parser("graph")
    tg.add_argument("--tree", required=True)
    tg.add_argument("--emit")

    p = sub.add_parser("exp", help="experiment plans")
    exp_sub = p.add_subparsers(dest="exp_cmd", required=True)
    for kind in ("poisson", "threshold", "satisfaction", "efgame"):
        pe = exp_sub.add_parser(kind)
        pe.add_argument("--plan", required=True)
        pe.add_argument("--csv")
        pe.add_argument("--json", dest="json_path")

    return top


def _cmd_density(args) -> int:
    rho = density(_load_graph(args.graph))
    _out(args, {"density": str(rho)}, str(rho))
    return EXIT_OK


def _cmd_balanced(args) -> int:
    ok, witness = is_strictly_balanced(_load_graph(args.graph))
    if ok:
        _out(args, {"strictlyBalanced": True}, "strictly balanced")
    else:
        w = sorted(witness)
        _out(
            args,
            {"strictlyBalanced": False, "witness": w},
            f"not strictly balanced; witness {w}",
        )
    return EXIT_OK


def _cmd_pair(args) -> int:
    pair = pair_from_json(json.loads(Path(args.pair).read_text()))
    alpha = _frac(args.alpha)
    verdict = classify_pair(pair, alpha)
    payload = {"classification": verdict.classification, "gap": str(verdict.gap)}
    text = f"{verdict.classification} (gap {verdict.gap})"
    if args.safe:
        ok, witness = is_safe_pair(pair, alpha, strict=(args.safe == "strict"))
        payload["safe"] = ok
        if witness is not None:
            payload["witness"] = sorted(witness)
        text += f"; {args.safe} safe: {ok}"
        if not ok:
            text += f" (witness {sorted(witness)})"
    _out(args, payload, text)
    return EXIT_OK


def _cmd_chain(args) -> int:
    if args.chain_cmd == "sweep":
        ell0, verdicts = min_ell_strictly_balanced(args.k, args.max_ell)
        payload = {"ell0": ell0, "verdicts": {str(e): v for e, v in verdicts.items()}}
        text = f"ell0={ell0}; " + " ".join(
            f"{e}:{'ok' if v else 'fail'}" for e, v in sorted(verdicts.items())
        )
        _out(args, payload, text)
        return EXIT_OK
    if args.chain_cmd == "alpha":
        ell, alpha = pick_alpha(args.k, _frac(args.epsilon))
        _out(args, {"ell": ell, "alpha": str(alpha)}, f"ell={ell} alpha={alpha}")
        return EXIT_OK
    if args.k is None or args.ell is None:
        raise ValueError("chain needs --k and --ell")
    g, roles = build_terminated_chain(args.k, args.ell)
    if args.emit:
        Path(args.emit).write_text(graph_to_json(g))
    payload = {
        "n": g.n,
        "edges": g.num_edges,
        "density": str(chain_density(args.k, args.ell)),
        "alpha": str(alpha_for(args.k, args.ell)),
        "roots": list(roles.roots),
        "spine": list(roles.spine),
        "terminator": roles.terminator,
    }
    _out(
        args,
        payload,
        f"n={g.n} edges={g.num_edges} density={payload['density']}",
    )
    return EXIT_OK


def _cmd_phi(args) -> int:
    text = render(build_phi_chain(args.k, args.ell))
    _emit(text, args.emit)
    return EXIT_OK


def _cmd_diameter(args) -> int:
    text = render(build_diameter_sentence(args.d))
    _emit(text, args.emit)
    return EXIT_OK


def _cmd_eval(args) -> int:
    g = _load_graph(args.graph)
    sentence = parse(Path(args.formula).read_text())
    value = evaluate(g, sentence)
    _out(args, {"value": value}, "true" if value else "false")
    return EXIT_OK


def _cmd_game(args) -> int:
    g1 = _load_graph(args.left)
    g2 = _load_graph(args.right)
    if args.game_cmd == "solve":
        solver = Solver(g1, g2, args.k, args.n)
        payload = {
            "winner": solver.winner(),
            "winnerByRounds": [solver.winner_at(r) for r in range(args.n + 1)],
        }
        if args.strategy_out:
            Path(args.strategy_out).write_text(json.dumps(payload, sort_keys=True))
        _out(args, payload, payload["winner"])
        return EXIT_OK
    # play
    solver = None
    if args.spoiler == "optimal" or args.duplicator == "optimal":
        solver = Solver(g1, g2, args.k, args.n)
    spoiler = {
        "random": lambda: RandomSpoiler(),
        "greedy": lambda: GreedySpoiler(),
        "optimal": lambda: OptimalSpoiler(solver),
    }[args.spoiler]()
    duplicator = {
        "mirror": lambda: MirrorDuplicator(),
        "optimal": lambda: OptimalDuplicator(solver),
        "tree": lambda: DuplicatorAgent(args.k, args.n),
    }[args.duplicator]()
    transcript = play_game(g1, g2, args.k, args.n, spoiler, duplicator,
                           seed=int(args.seed))
    payload = {
        "winner": transcript.winner,
        "reason": transcript.reason,
        "resignCode": transcript.resign_code,
        "moves": transcript.moves,
    }
    _out(args, payload, f"{transcript.winner}: {transcript.reason}")
    return EXIT_OK


def _cmd_tree(args) -> int:
    if args.tree_cmd == "build":
        g = _load_graph(args.graph)
        pebbled = tuple(int(x) for x in args.pebbled.split(","))
        mode = FRESH if len(pebbled) == args.k - 1 else FULL
        tree = build_strategy_tree(g, pebbled, args.k, args.depth, mode)
        if args.refine:
            tree = refine(tree)
        obj = tree_to_json(tree)
        obj["mode"] = mode
        obj["pebbledCount"] = len(pebbled)
        obj["pebbledEdges"] = [
            [i, j]
            for i in range(len(pebbled))
            for j in range(i + 1, len(pebbled))
            if g.has_edge(pebbled[i], pebbled[j])
        ]
        _emit(json.dumps(obj, sort_keys=True), args.emit)
        return EXIT_OK
    # tree graph
    obj = json.loads(Path(args.tree).read_text())
    tree = tree_from_json(obj)
    m = obj["pebbledCount"]
    base = Graph(m, frozenset(tuple(e) for e in obj.get("pebbledEdges", [])))
    pair, _roles = tree_to_graph(tree, base, tuple(range(m)), tree.k, obj["mode"])
    _emit(json.dumps(pair_to_json(pair), sort_keys=True), args.emit)
    return EXIT_OK


def _cmd_exp(args, argv: list[str]) -> int:
    plan_bytes = Path(args.plan).read_bytes()
    plan = plan_from_json(json.loads(plan_bytes))
    wanted = {"poisson": "poisson", "threshold": "threshold",
              "satisfaction": "satisfaction", "efgame": "ef-game"}[args.exp_cmd]
    if plan.target != wanted:
        raise ValueError(
            f"plan target {plan.target!r} does not match subcommand {args.exp_cmd}"
        )
    start = datetime.datetime.now(datetime.timezone.utc)
    estimates, report, seconds = run_plan(plan)
    end = datetime.datetime.now(datetime.timezone.utc)
    outputs: dict[str, str] = {}
    if args.csv:
        text = estimates_to_csv(plan.id, estimates)
        Path(args.csv).write_text(text)
        outputs[args.csv] = hashlib.sha256(text.encode()).hexdigest()
    if args.json_path:
        payload = {
            "plan": plan.id,
            "report": report,
            "estimates": [
                {
                    "n": e.n,
                    "m": e.m,
                    "alpha": None if e.alpha is None else str(e.alpha),
                    "trials": e.trials,
                    "successes": e.successes,
                    "frequency": e.frequency,
                    "ciHalfwidth": e.ci_halfwidth,
                    "analyticReference": e.analytic_reference,
                }
                for e in estimates
            ],
            "seconds": seconds,
        }
        text = json.dumps(payload, sort_keys=True, default=str)
        Path(args.json_path).write_text(text)
        outputs[args.json_path] = hashlib.sha256(text.encode()).hexdigest()
    for path in outputs:
        manifest = {
            "commandLine": argv,
            "planHash": hashlib.sha256(plan_bytes).hexdigest(),
            "seed": plan.seed,
            "codeVersion": __version__,
            "start": start.isoformat(),
            "end": end.isoformat(),
            "seconds": seconds,
            "outputs": outputs,
        }
        Path(path + ".manifest.json").write_text(
            json.dumps(manifest, sort_keys=True)
        )
    summary = "; ".join(
        f"n={e.n} freq={e.frequency:.4f}+-{e.ci_halfwidth:.4f}" for e in estimates
    )
    _out(args, {"estimates": len(estimates), "seconds": seconds},
         summary or "done")
    return EXIT_OK


def main(argv: Optional[list[str]] = None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        handler = {
            "density": _cmd_density,
            "balanced": _cmd_balanced,
            "pair": _cmd_pair,
            "chain": _cmd_chain,
            "phi": _cmd_phi,
            "diameter": _cmd_diameter,
            "eval": _cmd_eval,
            "game": _cmd_game,
            "tree": _cmd_tree,
        }.get(args.command)
        if args.command == "exp":
            return _cmd_exp(args, list(argv))
        return handler(args)
    except AgentInvariantError as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except (ResourceBudgetError, ResourceWarning) as exc:
        print(f"resource budget: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (
        GraphFormatError,
        FormulaSyntaxError,
        FormulaScopeError,
        ChainParameterError,
        DensityDomainError,
        ValueError,
        KeyError,
        OSError,
        json.JSONDecodeError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end: validate, convert, evaluate, and sample from JSON files.

Inputs are JSON documents (see the README for the formats); output is JSON
on stdout, or an aligned two-column table with ``--format table`` carrying
exactly the same numbers.  Exit codes: 0 success, 1 validation or domain
error (a structured message names the violated invariant), 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import montecarlo
from .convert import TARGET_TYPES, convert
from .errors import FormatError, StopwrightError
from .games import (
    best_response_value,
    check_epsilon_equilibrium,
    game_payoff,
    zero_sum_value,
)
from .payoffs import check_epsilon_optimal, payoff, snell_value
from .serialize import (
    game_from_doc,
    measure_to_doc,
    parse_rational,
    process_from_doc,
    rational_str,
    space_from_doc,
    stopping_time_from_doc,
    stopping_time_to_doc,
    time_label,
)
from .stopping import detailed_distribution, equivalent, require_valid

DEFAULT_SAMPLES = 100_000
SEED_ENV_VAR = "STOPWRIGHT_SEED"


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be a positive integer, got {text}")
    return value


def _nonnegative_int(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be nonnegative, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stopwright",
        description="Stopping rules on finite scenario trees: validation, "
        "conversion, equivalence, optimal stopping, stopping games, and "
        "seeded Monte-Carlo sampling.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text, *, st=False, st2=False, problem=False, game=False):
        p = sub.add_parser(name, help=help_text, description=help_text)
        p.add_argument("--space", required=True, help="scenario-tree JSON file")
        if st:
            p.add_argument("--st", required=True, help="stopping-rule JSON file")
        if st2:
            p.add_argument("--st2", required=True, help="second stopping-rule JSON file")
        if problem:
            p.add_argument("--problem", required=True, help="payoff-process JSON file")
        if game:
            p.add_argument("--game", required=True, help="stopping-game JSON file")
        p.add_argument(
            "--format", choices=("json", "table"), default="json", help="output format"
        )
        return p

    p = add("validate", "Check a space (and optionally a stopping rule) against every invariant.")
    p.add_argument("--st", help="stopping-rule JSON file to validate on the space")

    p = add("convert", "Rewrite a stopping rule as an equivalent rule of another type.", st=True)
    p.add_argument("--to", required=True, choices=TARGET_TYPES, help="target representation")

    add("dist", "Print the exact joint law of (outcome, stop index) for a rule.", st=True)
    add("equiv", "Decide whether two rules have identical detailed distributions.", st=True, st2=True)

    p = add("payoff", "Expected payoff of a stopping problem under a rule.", st=True, problem=True)
    p.add_argument("--epsilon", help="also report whether the rule is epsilon-optimal")

    add("snell", "Optimal stopping value and an optimal pure rule.", problem=True)
    add("game-payoff", "Expected payoff pair of a two-player stopping game.", st=True, st2=True, game=True)
    add("game-value", "Exact value and optimal behavior profile of a zero-sum game.", game=True)

    p = add(
        "br",
        "Best-response value and strategy against a fixed opponent rule. "
        "Convention: if the opponent stops strictly first at time n, the "
        "responder banks their opponent-stops-alone payoff at n; stopping "
        "together pays the both-stop process, and if nobody ever stops the "
        "both-stop process's terminal slot applies.",
        st=True,
        game=True,
    )
    p.add_argument("--player", required=True, type=int, choices=(1, 2), help="responding player")

    p = add("eq-check", "Check a profile for epsilon-equilibrium.", st=True, st2=True, game=True)
    p.add_argument("--epsilon", default="0", help="slack as a rational string (default 0)")

    p = add("sample", "Seeded Monte-Carlo frequencies of (outcome, stop index).", st=True)
    p.add_argument("--samples", type=_positive_int, default=DEFAULT_SAMPLES)
    p.add_argument(
        "--seed",
        type=_nonnegative_int,
        default=None,
        help=f"RNG seed (default: ${SEED_ENV_VAR} if set, else 0)",
    )
    return parser


def _load_json(path: str):
    with open(path, "r", encoding="utf-8") as handle:
        return json.load(handle)


def _flatten(doc, prefix=()):
    if isinstance(doc, dict):
        for key in doc:
            yield from _flatten(doc[key], prefix + (str(key),))
    elif isinstance(doc, list):
        for i, item in enumerate(doc):
            yield from _flatten(item, prefix + (str(i),))
    else:
        rendered = doc if isinstance(doc, str) else json.dumps(doc)
        yield ".".join(prefix), rendered


def render_table(doc) -> str:
    rows = list(_flatten(doc))
    if not rows:
        return ""
    width = max(len(path) for path, _ in rows)
    return "\n".join(f"{path:<{width}}  {value}" for path, value in rows)


def _emit(doc, fmt: str) -> None:
    if fmt == "table":
        print(render_table(doc))
    else:
        print(json.dumps(doc, indent=2, sort_keys=True))


def _resolve_seed(seed) -> int:
    if seed is not None:
        return seed
    env = os.environ.get(SEED_ENV_VAR)
    if not env:
        return 0
    try:
        value = int(env)
    except ValueError:
        raise FormatError(f"{SEED_ENV_VAR} must be an integer, got {env!r}") from None
    if value < 0:
        raise FormatError(f"{SEED_ENV_VAR} must be nonnegative, got {value}")
    return value


def _dispatch(args) -> dict:
    space = space_from_doc(_load_json(args.space))

    if args.command == "validate":
        if getattr(args, "st", None):
            require_valid(stopping_time_from_doc(_load_json(args.st)), space)
        return {"valid": True}

    if args.command == "convert":
        eta = stopping_time_from_doc(_load_json(args.st))
        return stopping_time_to_doc(convert(eta, args.to, space))

    if args.command == "dist":
        eta = stopping_time_from_doc(_load_json(args.st))
        return measure_to_doc(detailed_distribution(eta, space))

    if args.command == "equiv":
        eta1 = stopping_time_from_doc(_load_json(args.st))
        eta2 = stopping_time_from_doc(_load_json(args.st2))
        return {"equivalent": equivalent(eta1, eta2, space)}

    if args.command == "payoff":
        eta = stopping_time_from_doc(_load_json(args.st))
        problem = process_from_doc(_load_json(args.problem))
        doc = {"payoff": rational_str(payoff(eta, problem, space))}
        if args.epsilon is not None:
            epsilon = parse_rational(args.epsilon)
            doc["epsilon"] = rational_str(epsilon)
            doc["epsilon_optimal"] = check_epsilon_optimal(eta, problem, epsilon, space)
        return doc

    if args.command == "snell":
        problem = process_from_doc(_load_json(args.problem))
        result = snell_value(problem, space)
        return {
            "value": rational_str(result.value),
            "strategy": stopping_time_to_doc(result.strategy),
        }

    if args.command == "game-payoff":
        eta1 = stopping_time_from_doc(_load_json(args.st))
        eta2 = stopping_time_from_doc(_load_json(args.st2))
        game = game_from_doc(_load_json(args.game), space)
        one, two = game_payoff(eta1, eta2, game, space)
        return {"player1": rational_str(one), "player2": rational_str(two)}

    if args.command == "game-value":
        game = game_from_doc(_load_json(args.game), space)
        result = zero_sum_value(game, space)
        return {
            "value": rational_str(result.value),
            "profile": {
                "player1": stopping_time_to_doc(result.strategies[0]),
                "player2": stopping_time_to_doc(result.strategies[1]),
            },
        }

    if args.command == "br":
        opponent = stopping_time_from_doc(_load_json(args.st))
        game = game_from_doc(_load_json(args.game), space)
        result = best_response_value(opponent, game, args.player, space)
        return {
            "player": args.player,
            "value": rational_str(result.value),
            "strategy": stopping_time_to_doc(result.strategy),
        }

    if args.command == "eq-check":
        eta1 = stopping_time_from_doc(_load_json(args.st))
        eta2 = stopping_time_from_doc(_load_json(args.st2))
        game = game_from_doc(_load_json(args.game), space)
        epsilon = parse_rational(args.epsilon)
        return {
            "epsilon": rational_str(epsilon),
            "equilibrium": check_epsilon_equilibrium(eta1, eta2, game, epsilon, space),
        }

    if args.command == "sample":
        eta = stopping_time_from_doc(_load_json(args.st))
        seed = _resolve_seed(args.seed)
        result = montecarlo.empirical_detailed_distribution(eta, space, args.samples, seed)
        return {
            "samples": args.samples,
            "seed": seed,
            "counts": {
                atom: {time_label(t): c for t, c in row.items()}
                for atom, row in result.counts.items()
            },
            "frequencies": {
                atom: {time_label(t): f for t, f in row.items()}
                for atom, row in result.frequencies.items()
            },
        }

    raise AssertionError(f"unhandled command {args.command}")


def run(argv) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        doc = _dispatch(args)
    except StopwrightError as exc:
        print(
            json.dumps({"error": type(exc).__name__, "message": str(exc)}),
            file=sys.stderr,
        )
        return 1
    except FileNotFoundError as exc:
        print(
            json.dumps({"error": "FileNotFound", "message": str(exc)}), file=sys.stderr
        )
        return 1
    except json.JSONDecodeError as exc:
        print(
            json.dumps({"error": "InvalidJSON", "message": str(exc)}), file=sys.stderr
        )
        return 1
    _emit(doc, args.format)
    return 0


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()

"""JSON document formats for spaces, rules, processes, games, and measures.

All rationals travel as strings "a/b" in lowest terms (bare integers are
accepted as shorthand); the time index "inf" denotes the never-stop slot.
These formats are the package's wire contract: the CLI reads and writes
nothing else.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import FormatError, ValidationError
from .games import BOTH, ONLY_1, ONLY_2, StoppingGame, is_zero_sum, stopping_game
from .space import (
    INFINITY,
    AdaptedProcess,
    FilteredSpace,
    Time,
    adapted_process,
    as_fraction,
    build_space,
    time_label,
)
from .stopping import (
    BehaviorStoppingTime,
    MixedStoppingTime,
    PureStoppingTime,
    RandomStoppingTime,
    RandomizedStoppingTime,
    StoppingMeasure,
    behavior,
    mixed,
    pure,
    randomized,
    stopping_measure,
)


def rational_str(x: Fraction) -> str:
    """Lowest-terms string; integers come out bare ('3', not '3/1')."""
    return str(x)


def parse_rational(value) -> Fraction:
    try:
        return as_fraction(value)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise FormatError(f"bad rational {value!r}: {exc}") from exc


def parse_time(key) -> Time:
    if key == "inf" or key == INFINITY:
        return INFINITY
    try:
        return int(key)
    except (TypeError, ValueError) as exc:
        raise FormatError(f"bad time index {key!r} (expected an integer or 'inf')") from exc


def _require(doc, key, context):
    if not isinstance(doc, dict) or key not in doc:
        raise FormatError(f"{context} document is missing {key!r}")
    return doc[key]


# -- spaces ---------------------------------------------------------------------


def space_from_doc(doc) -> FilteredSpace:
    """Accepts {"nodes": [...]} or a bare node list."""
    nodes = doc.get("nodes") if isinstance(doc, dict) else doc
    if not isinstance(nodes, list):
        raise FormatError("space document must be a node list or contain a 'nodes' list")
    return build_space(nodes)


# -- block tables -----------------------------------------------------------------


def _block_table_from_doc(table, context) -> dict[int, dict[str, Fraction]]:
    if not isinstance(table, dict):
        raise FormatError(f"{context} must map times to block tables")
    out = {}
    for key, level in table.items():
        t = parse_time(key)
        if t == INFINITY or not isinstance(level, dict):
            raise FormatError(f"{context} has a bad entry at time {key!r}")
        out[t] = {block: parse_rational(v) for block, v in level.items()}
    return out


def _block_table_to_doc(table) -> dict:
    return {
        str(n): {block: rational_str(v) for block, v in level.items()}
        for n, level in sorted(table.items())
    }


# -- stopping rules -----------------------------------------------------------------


def _pure_from_doc(doc) -> PureStoppingTime:
    stop = _require(doc, "stop", "pure rule")
    if not isinstance(stop, dict):
        raise FormatError("pure rule 'stop' must map atoms to times")
    return pure({atom: parse_time(t) for atom, t in stop.items()})


def stopping_time_from_doc(doc) -> RandomStoppingTime:
    kind = _require(doc, "type", "stopping rule")
    if kind == "pure":
        return _pure_from_doc(doc)
    if kind == "randomized":
        return randomized(
            rho=_block_table_from_doc(_require(doc, "rho", "randomized rule"), "rho"),
            rho_inf={
                atom: parse_rational(v)
                for atom, v in _require(doc, "rho_inf", "randomized rule").items()
            },
        )
    if kind == "behavior":
        return behavior(
            beta=_block_table_from_doc(_require(doc, "beta", "behavior rule"), "beta")
        )
    if kind == "mixed":
        sections = _require(doc, "sections", "mixed rule")
        if not isinstance(sections, list):
            raise FormatError("mixed rule 'sections' must be a list")
        return mixed(
            breakpoints=[
                parse_rational(r) for r in _require(doc, "breakpoints", "mixed rule")
            ],
            sections=[_pure_from_doc(s) for s in sections],
        )
    raise FormatError(f"unknown stopping-rule type {kind!r}")


def _time_doc_value(t: Time):
    return "inf" if t == INFINITY else int(t)


def stopping_time_to_doc(eta: RandomStoppingTime) -> dict:
    if isinstance(eta, PureStoppingTime):
        return {"type": "pure", "stop": {a: _time_doc_value(t) for a, t in eta.stop.items()}}
    if isinstance(eta, RandomizedStoppingTime):
        return {
            "type": "randomized",
            "rho": _block_table_to_doc(eta.rho),
            "rho_inf": {a: rational_str(v) for a, v in eta.rho_inf.items()},
        }
    if isinstance(eta, BehaviorStoppingTime):
        return {"type": "behavior", "beta": _block_table_to_doc(eta.beta)}
    if isinstance(eta, MixedStoppingTime):
        return {
            "type": "mixed",
            "breakpoints": [rational_str(r) for r in eta.breakpoints],
            "sections": [stopping_time_to_doc(s) for s in eta.sections],
        }
    raise TypeError(f"not a stopping rule: {type(eta).__name__}")


# -- processes and measures -----------------------------------------------------------


def process_from_doc(doc) -> AdaptedProcess:
    return adapted_process(
        values=_block_table_from_doc(_require(doc, "values", "process"), "values"),
        infinity={
            atom: parse_rational(v) for atom, v in _require(doc, "infinity", "process").items()
        },
    )


def process_to_doc(process: AdaptedProcess) -> dict:
    return {
        "values": _block_table_to_doc(process.values),
        "infinity": {a: rational_str(v) for a, v in process.infinity.items()},
    }


def measure_to_doc(nu: StoppingMeasure) -> dict:
    return {
        "mass": {
            atom: {time_label(t): rational_str(m) for t, m in row.items()}
            for atom, row in nu.mass.items()
        }
    }


def measure_from_doc(doc, space: FilteredSpace) -> StoppingMeasure:
    mass_doc = _require(doc, "mass", "measure")
    mass = {
        atom: {parse_time(k): parse_rational(v) for k, v in row.items()}
        for atom, row in mass_doc.items()
    }
    return stopping_measure(mass, space)


# -- games ----------------------------------------------------------------------------

_COALITION_KEYS = {"{1}": ONLY_1, "{2}": ONLY_2, "{12}": BOTH}
_COALITION_LABELS = {ONLY_1: "{1}", ONLY_2: "{2}", BOTH: "{12}"}


def game_from_doc(doc, space: FilteredSpace) -> StoppingGame:
    players = _require(doc, "players", "game")
    if players != 2:
        raise FormatError(f"only 2-player games are supported, got players={players!r}")
    payoff_docs = _require(doc, "payoffs", "game")
    table = {}
    for key, proc_doc in payoff_docs.items():
        try:
            player_part, coalition_part = key.split("|", 1)
            player = int(player_part)
            coalition = _COALITION_KEYS[coalition_part]
        except (ValueError, KeyError) as exc:
            raise FormatError(f"bad payoff key {key!r} (expected e.g. '1|{{12}}')") from exc
        if player not in (1, 2):
            raise FormatError(f"bad player in payoff key {key!r}")
        table[(player, coalition)] = process_from_doc(proc_doc)
    game = stopping_game(table)
    if doc.get("zero_sum") and not is_zero_sum(game, space):
        raise ValidationError("game declares zero_sum but player payoffs do not cancel")
    return game


def game_to_doc(game: StoppingGame, space: FilteredSpace) -> dict:
    return {
        "players": 2,
        "payoffs": {
            f"{player}|{_COALITION_LABELS[coalition]}": process_to_doc(proc)
            for (player, coalition), proc in sorted(
                game.payoffs.items(), key=lambda kv: (kv[0][0], _COALITION_LABELS[kv[0][1]])
            )
        },
        "zero_sum": is_zero_sum(game, space),
    }

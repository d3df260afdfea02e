"""Two-player stopping games on a shared scenario tree.

Each player picks a stopping rule; the game ends at the earlier stop index
and pays each player according to *who* stopped (player 1 alone, player 2
alone, or both at once, the last also covering the case where nobody ever
stops).  External randomizations are independent, so the joint law of
(outcome, both stop indices) is the product of the players' densities atom
by atom.

Best responses never need the opponent's external coin: folding the
opponent's hazard into survival-weighted payoffs turns the game into an
ordinary stopping problem on the same tree, solved by backward induction.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, NamedTuple

from .convert import convert
from .errors import ConsistencyFailure, NotZeroSum, ValidationError
from .payoffs import SnellResult, snell_value
from .space import (
    INFINITY,
    AdaptedProcess,
    FilteredSpace,
    Time,
    as_fraction,
    check_process,
)
from .stopping import (
    BehaviorStoppingTime,
    RandomStoppingTime,
    StoppingMeasure,
    detailed_distribution,
    equivalent,
)

PLAYERS = (1, 2)
ONLY_1 = frozenset({1})
ONLY_2 = frozenset({2})
BOTH = frozenset({1, 2})
COALITIONS = (ONLY_1, ONLY_2, BOTH)


@dataclass(frozen=True)
class StoppingGame:
    """Six adapted payoff processes: one per (player, stopping coalition)."""

    payoffs: Mapping[tuple[int, frozenset], AdaptedProcess]

    def process(self, player: int, coalition) -> AdaptedProcess:
        return self.payoffs[(player, frozenset(coalition))]


def stopping_game(payoffs) -> StoppingGame:
    """Build a StoppingGame from {(player, coalition): AdaptedProcess}."""
    table = {(int(j), frozenset(c)): proc for (j, c), proc in payoffs.items()}
    missing = [(j, set(c)) for j in PLAYERS for c in COALITIONS if (j, c) not in table]
    if missing:
        raise ValidationError(f"game is missing payoff processes for {missing}")
    return StoppingGame(payoffs=table)


def check_game(space: FilteredSpace, game: StoppingGame) -> None:
    for j in PLAYERS:
        for c in COALITIONS:
            check_process(space, game.process(j, c))


def is_zero_sum(game: StoppingGame, space: FilteredSpace) -> bool:
    """True iff the players' payoffs cancel for every coalition, time, and atom."""
    check_game(space, game)
    for c in COALITIONS:
        one, two = game.process(1, c), game.process(2, c)
        for n in range(1, space.horizon + 1):
            for b in space.blocks(n):
                if one.values[n][b] + two.values[n][b] != 0:
                    return False
        for a in space.atoms:
            if one.infinity[a] + two.infinity[a] != 0:
                return False
    return True


@dataclass(frozen=True)
class JointStoppingMeasure:
    """Mass table over (atom, stop index of player 1, stop index of player 2)."""

    mass: Mapping[str, Mapping[tuple[Time, Time], Fraction]]

    def marginal(self, space: FilteredSpace, player: int) -> StoppingMeasure:
        """Integrate out the other player's stop index."""
        table = {}
        for atom in space.atoms:
            row = {t: Fraction(0) for t in space.times}
            for (t1, t2), m in self.mass[atom].items():
                row[t1 if player == 1 else t2] += m
            table[atom] = row
        return StoppingMeasure(mass=table)


def joint_detailed_distribution(
    eta1: RandomStoppingTime, eta2: RandomStoppingTime, space: FilteredSpace
) -> JointStoppingMeasure:
    """Product of the two rules' densities: independent external randomness."""
    nu1 = detailed_distribution(eta1, space)
    nu2 = detailed_distribution(eta2, space)
    mass = {}
    for atom in space.atoms:
        p = space.prob[atom]
        row = {}
        for t1 in space.times:
            d1 = nu1.density(space, atom, t1)
            for t2 in space.times:
                row[(t1, t2)] = p * d1 * nu2.density(space, atom, t2)
        mass[atom] = row
    return JointStoppingMeasure(mass=mass)


def _coalition(t1: Time, t2: Time) -> frozenset:
    if t1 < t2:
        return ONLY_1
    if t2 < t1:
        return ONLY_2
    return BOTH  # includes the nobody-stops case t1 = t2 = INFINITY


def game_payoff(
    eta1: RandomStoppingTime,
    eta2: RandomStoppingTime,
    game: StoppingGame,
    space: FilteredSpace,
) -> tuple[Fraction, Fraction]:
    """Expected payoff pair: pair the joint mass table with the coalition payoffs."""
    check_game(space, game)
    joint = joint_detailed_distribution(eta1, eta2, space)
    totals = [Fraction(0), Fraction(0)]
    for atom in space.atoms:
        for (t1, t2), m in joint.mass[atom].items():
            if m == 0:
                continue
            c = _coalition(t1, t2)
            stop_at = min(t1, t2)
            for i, j in enumerate(PLAYERS):
                totals[i] += m * game.process(j, c).value_at(space, stop_at, atom)
    return totals[0], totals[1]


def game_equivalent(
    eta1: RandomStoppingTime,
    eta1_alt: RandomStoppingTime,
    space: FilteredSpace,
    probes: Iterable[RandomStoppingTime] = (),
) -> bool:
    """Equality of joint laws against every opponent.

    Decided exactly by comparing the rules' own detailed distributions;
    every supplied probe opponent is also checked directly, and any
    disagreement with the marginal answer is an internal bug.
    """
    answer = equivalent(eta1, eta1_alt, space)
    for probe in probes:
        probed = (
            joint_detailed_distribution(eta1, probe, space)
            == joint_detailed_distribution(eta1_alt, probe, space)
        )
        if probed != answer:
            raise ConsistencyFailure(
                "probe joint distributions disagree with marginal equivalence"
            )
    return answer


def auxiliary_problem(
    opponent: RandomStoppingTime,
    game: StoppingGame,
    space: FilteredSpace,
    player: int = 1,
) -> AdaptedProcess:
    """The single-player stopping problem a player faces against a fixed opponent.

    The opponent is reduced to hazard form. Walking down the tree,
    ``survival`` is the chance the opponent has not stopped yet and
    ``collected`` the payoff already banked from the opponent stopping
    first.  Stopping now wins the both-stop payoff if the opponent stops
    too, else the stop-alone payoff; never stopping ends in the
    both-players slot at INFINITY.  For every rule the player could use,
    the payoff in this problem equals the game payoff, so optimizing it is
    exactly best-responding.
    """
    if player not in PLAYERS:
        raise ValidationError(f"player must be 1 or 2, got {player!r}")
    check_game(space, game)
    other = 2 if player == 1 else 1
    hazard = convert(opponent, "behavior", space)
    solo = game.process(player, frozenset({player}))
    opp_stops = game.process(player, frozenset({other}))
    both = game.process(player, BOTH)

    values: dict[int, dict[str, Fraction]] = {n: {} for n in range(1, space.horizon + 1)}
    infinity: dict[str, Fraction] = {}

    def walk(n: int, block_id: str, collected: Fraction, survival: Fraction) -> None:
        q = hazard.beta[n][block_id]
        values[n][block_id] = collected + survival * (
            q * both.values[n][block_id] + (1 - q) * solo.values[n][block_id]
        )
        collected = collected + survival * q * opp_stops.values[n][block_id]
        survival = survival * (1 - q)
        if n == space.horizon:
            atom = space.members(n, block_id)[0]
            infinity[atom] = collected + survival * both.infinity[atom]
        else:
            for child in space.children(n, block_id):
                walk(n + 1, child, collected, survival)

    for block_id in space.blocks(1):
        walk(1, block_id, Fraction(0), Fraction(1))
    return AdaptedProcess(values=values, infinity=infinity)


def best_response_value(
    opponent: RandomStoppingTime,
    game: StoppingGame,
    player: int,
    space: FilteredSpace,
) -> SnellResult:
    """Best payoff the player can secure against ``opponent``, with a pure rule attaining it."""
    return snell_value(auxiliary_problem(opponent, game, space, player), space)


class StageSolution(NamedTuple):
    value: Fraction
    row_stop: Fraction
    col_stop: Fraction


def solve_stage_game(
    both_stop: Fraction, row_stop: Fraction, col_stop: Fraction, neither: Fraction
) -> StageSolution:
    """Exact value of the 2x2 zero-sum stage game, row maximizing.

    Rows are the maximizer's stop/continue, columns the minimizer's; the
    cell names say who stops.  Pure saddle points are scanned first (stop
    preferred on ties), otherwise the closed-form mixed solution applies
    and is interior.
    """
    a, b, c, d = both_stop, row_stop, col_stop, neither
    one, zero = Fraction(1), Fraction(0)
    saddles = (
        (a >= c and a <= b, a, one, one),
        (b >= d and b <= a, b, one, zero),
        (c >= a and c <= d, c, zero, one),
        (d >= b and d <= c, d, zero, zero),
    )
    for is_saddle, value, p, q in saddles:
        if is_saddle:
            return StageSolution(value=value, row_stop=p, col_stop=q)
    denom = a + d - b - c
    if denom == 0:
        raise ConsistencyFailure("2x2 game without saddle must have nonzero denominator")
    return StageSolution(
        value=(a * d - b * c) / denom,
        row_stop=(d - c) / denom,
        col_stop=(d - b) / denom,
    )


class ZeroSumResult(NamedTuple):
    value: Fraction
    strategies: tuple[BehaviorStoppingTime, BehaviorStoppingTime]


def zero_sum_value(game: StoppingGame, space: FilteredSpace) -> ZeroSumResult:
    """Value and optimal behavior profile of a zero-sum game, by backward induction.

    Each block hosts a 2x2 stage game in player 1's payoffs whose
    continuation cell is the conditional expectation of the next level's
    values (the both-players INFINITY payoff at the horizon).  The stage
    solutions assemble into behavior rules that are exactly optimal: the
    profile passes the equilibrium check with epsilon = 0.
    """
    if not is_zero_sum(game, space):
        raise NotZeroSum("player payoffs do not cancel; zero-sum value undefined")
    both = game.process(1, BOTH)
    solo1 = game.process(1, ONLY_1)
    solo2 = game.process(1, ONLY_2)

    T = space.horizon
    value: dict[int, dict[str, Fraction]] = {n: {} for n in range(1, T + 1)}
    beta1: dict[int, dict[str, Fraction]] = {n: {} for n in range(1, T + 1)}
    beta2: dict[int, dict[str, Fraction]] = {n: {} for n in range(1, T + 1)}
    for n in range(T, 0, -1):
        for block_id in space.blocks(n):
            if n == T:
                atom = space.members(T, block_id)[0]
                continuation = both.infinity[atom]
            else:
                continuation = sum(
                    (
                        space.block_prob(n + 1, c) * value[n + 1][c]
                        for c in space.children(n, block_id)
                    ),
                    start=Fraction(0),
                ) / space.block_prob(n, block_id)
            stage = solve_stage_game(
                both.values[n][block_id],
                solo1.values[n][block_id],
                solo2.values[n][block_id],
                continuation,
            )
            value[n][block_id] = stage.value
            beta1[n][block_id] = stage.row_stop
            beta2[n][block_id] = stage.col_stop

    total = sum(
        (space.block_prob(1, b) * value[1][b] for b in space.blocks(1)), start=Fraction(0)
    )
    return ZeroSumResult(
        value=total,
        strategies=(BehaviorStoppingTime(beta=beta1), BehaviorStoppingTime(beta=beta2)),
    )


def check_epsilon_equilibrium(
    eta1: RandomStoppingTime,
    eta2: RandomStoppingTime,
    game: StoppingGame,
    epsilon,
    space: FilteredSpace,
) -> bool:
    """True iff no player can gain more than ``epsilon`` by deviating alone.

    Deviations over every rule type are covered: a player's payoff against
    a fixed opponent depends only on the deviation's detailed distribution,
    and the pure optimum of the auxiliary problem bounds them all.
    """
    epsilon = as_fraction(epsilon)
    if epsilon < 0:
        raise ValidationError("epsilon must be nonnegative")
    got1, got2 = game_payoff(eta1, eta2, game, space)
    best1 = best_response_value(eta2, game, 1, space).value
    best2 = best_response_value(eta1, game, 2, space).value
    return got1 >= best1 - epsilon and got2 >= best2 - epsilon

import random
from fractions import Fraction as F

import pytest

from stopwright import (
    BOTH,
    INFINITY,
    ONLY_1,
    ONLY_2,
    NotZeroSum,
    ValidationError,
    adapted_process,
    auxiliary_problem,
    behavior,
    best_response_value,
    check_epsilon_equilibrium,
    constant_process,
    convert,
    detailed_distribution,
    enumerate_pure_stopping_times,
    game_equivalent,
    game_payoff,
    is_zero_sum,
    joint_detailed_distribution,
    pure,
    solve_stage_game,
    stopping_game,
    zero_sum_value,
)
from stopwright.games import StoppingGame

from fuzz import (
    make_r1,
    negate_process,
    random_game,
    random_space,
    random_stopping_time,
    random_zero_sum_game,
)


def singleton_game(space, both_stop, p1_stops, p2_stops, nobody, zero_sum=True):
    """One-period game from player 1's four cells; player 2 mirrors if zero-sum."""

    def proc(at_one, at_inf=0):
        return adapted_process(values={1: {"w": at_one}}, infinity={"w": at_inf})

    table = {
        (1, BOTH): proc(both_stop, nobody),
        (1, ONLY_1): proc(p1_stops),
        (1, ONLY_2): proc(p2_stops),
    }
    for c in (BOTH, ONLY_1, ONLY_2):
        table[(2, c)] = (
            negate_process(table[(1, c)]) if zero_sum else constant_process(space, 0)
        )
    return stopping_game(table)


class TestJointDistribution:
    def test_pure_opponent_places_mass_on_one_column(self, e1, r1):
        probe = pure({a: 1 for a in e1.atoms})
        joint = joint_detailed_distribution(r1, probe, e1)
        nu = detailed_distribution(r1, e1)
        for a in e1.atoms:
            for t1 in e1.times:
                for t2 in e1.times:
                    expected = nu.mass[a][t1] if t2 == 1 else F(0)
                    assert joint.mass[a][(t1, t2)] == expected

    def test_never_stopping_pair(self, e1):
        never = pure({a: INFINITY for a in e1.atoms})
        joint = joint_detailed_distribution(never, never, e1)
        for a in e1.atoms:
            assert joint.mass[a][(INFINITY, INFINITY)] == e1.prob[a]
            assert sum(joint.mass[a].values()) == e1.prob[a]

    def test_product_with_pure_time_two(self, e1, r1):
        probe = pure({a: 2 for a in e1.atoms})
        joint = joint_detailed_distribution(r1, probe, e1)
        assert joint.mass["w1"][(1, 2)] == F(1, 8)
        assert joint.mass["w1"][(2, 2)] == F(1, 8)
        assert joint.mass["w4"][(2, 2)] == F(3, 16)
        assert joint.mass["w2"][(INFINITY, 2)] == F(1, 8)

    def test_marginals_match_individual_distributions(self):
        rng = random.Random(101)
        for _ in range(10):
            space = random_space(rng, max_depth=3)
            eta1 = random_stopping_time(rng, space)
            eta2 = random_stopping_time(rng, space)
            joint = joint_detailed_distribution(eta1, eta2, space)
            assert joint.marginal(space, 1) == detailed_distribution(eta1, space)
            assert joint.marginal(space, 2) == detailed_distribution(eta2, space)


class TestGamePayoff:
    def test_constant_game(self, e1, r1, b1):
        game = stopping_game(
            {(j, c): constant_process(e1, 3) for j in (1, 2) for c in (ONLY_1, ONLY_2, BOTH)}
        )
        assert game_payoff(r1, b1, game, e1) == (3, 3)

    def test_lone_stopper_coalition(self, singleton):
        game = singleton_game(singleton, both_stop=7, p1_stops=2, p2_stops=-4, nobody=1)
        sigma1 = pure({"w": 1})
        never = pure({"w": INFINITY})
        assert game_payoff(sigma1, never, game, singleton)[0] == 2
        assert game_payoff(never, sigma1, game, singleton)[0] == -4
        assert game_payoff(sigma1, sigma1, game, singleton)[0] == 7
        assert game_payoff(never, never, game, singleton)[0] == 1

    def test_half_half_expansion(self, singleton):
        game = singleton_game(singleton, both_stop=2, p1_stops=0, p2_stops=0, nobody=1)
        coin = behavior(beta={1: {"w": "1/2"}})
        got = game_payoff(coin, coin, game, singleton)
        assert got[0] == F(1, 4) * 2 + F(1, 4) * 0 + F(1, 4) * 0 + F(1, 4) * 1

    def test_equivalent_rules_earn_identical_payoffs(self, e1, r1, b1):
        rng = random.Random(103)
        for _ in range(8):
            game = random_game(rng, e1)
            probe = random_stopping_time(rng, e1)
            assert game_payoff(r1, probe, game, e1) == game_payoff(b1, probe, game, e1)


class TestGameEquivalent:
    def test_r1_b1_with_probes(self, e1, r1, b1):
        probes = [pure({a: 1 for a in e1.atoms}), pure({a: INFINITY for a in e1.atoms})]
        assert game_equivalent(r1, b1, e1, probes)

    def test_distinct_rules(self, e1, r1):
        assert not game_equivalent(r1, pure({a: 1 for a in e1.atoms}), e1, [make_r1()])

    def test_self_equivalence(self, e1, b1):
        assert game_equivalent(b1, b1, e1, [b1])


class TestAuxiliaryProblem:
    def test_absent_opponent_reduces_to_solo_problem(self, e1):
        rng = random.Random(107)
        game = random_game(rng, e1)
        never = pure({a: INFINITY for a in e1.atoms})
        reduced = auxiliary_problem(never, game, e1, player=1)
        assert reduced.values == game.process(1, ONLY_1).values
        assert reduced.infinity == game.process(1, BOTH).infinity

    def test_instant_opponent_leaves_two_choices(self, singleton):
        game = singleton_game(singleton, both_stop=3, p1_stops=9, p2_stops=5, nobody=0)
        sigma1 = pure({"w": 1})
        result = best_response_value(sigma1, game, 1, singleton)
        stop_now = game_payoff(pure({"w": 1}), sigma1, game, singleton)[0]
        wait = game_payoff(pure({"w": INFINITY}), sigma1, game, singleton)[0]
        assert result.value == max(stop_now, wait) == 5

    def test_value_matches_exhaustive_enumeration(self, e1):
        rng = random.Random(109)
        rules = enumerate_pure_stopping_times(e1)
        for _ in range(6):
            game = random_game(rng, e1)
            opponent = random_stopping_time(rng, e1)
            for player in (1, 2):
                best = max(
                    game_payoff(sigma, opponent, game, e1)[player - 1]
                    if player == 1
                    else game_payoff(opponent, sigma, game, e1)[player - 1]
                    for sigma in rules
                )
                assert best_response_value(opponent, game, player, e1).value == best


class TestBestResponse:
    def test_constant_game(self, e1, b1):
        game = stopping_game(
            {(j, c): constant_process(e1, "3/2") for j in (1, 2) for c in (ONLY_1, ONLY_2, BOTH)}
        )
        assert best_response_value(b1, game, 1, e1).value == F(3, 2)

    def test_two_branch_hand_computation(self, singleton):
        game = singleton_game(singleton, both_stop=2, p1_stops=0, p2_stops=0, nobody=1)
        coin = behavior(beta={1: {"w": "1/2"}})
        result = best_response_value(coin, game, 1, singleton)
        assert result.value == 1
        assert result.strategy.stop == {"w": 1}

    def test_never_stopping_payout(self, singleton):
        game = singleton_game(singleton, both_stop=0, p1_stops=0, p2_stops=0, nobody=5)
        never = pure({"w": INFINITY})
        result = best_response_value(never, game, 1, singleton)
        assert result.value == 5
        assert result.strategy.stop == {"w": INFINITY}

    def test_invariant_under_opponent_representation(self, e1):
        rng = random.Random(113)
        for _ in range(6):
            game = random_game(rng, e1)
            opponent = random_stopping_time(rng, e1)
            base = best_response_value(opponent, game, 1, e1).value
            for target in ("randomized", "behavior", "mixed"):
                twin = convert(opponent, target, e1)
                assert best_response_value(twin, game, 1, e1).value == base

    def test_rejects_unknown_player(self, e1, r1):
        rng = random.Random(127)
        with pytest.raises(ValidationError):
            best_response_value(r1, random_game(rng, e1), 3, e1)


class TestStageSolver:
    def test_saddle_point_cells(self):
        sol = solve_stage_game(F(0), F(1), F(-1), F(0))
        assert sol.value == 0
        assert sol.row_stop == 1
        assert sol.col_stop == 1

    def test_mixed_closed_form(self):
        sol = solve_stage_game(F(2), F(0), F(0), F(1))
        assert sol.value == F(2, 3)
        assert sol.row_stop == F(1, 3)
        assert sol.col_stop == F(1, 3)

    def test_matches_pure_enumeration_on_saddles(self):
        rng = random.Random(131)
        for _ in range(200):
            a, b, c, d = (F(rng.randint(-4, 4), rng.choice((1, 2))) for _ in range(4))
            maximin = max(min(a, b), min(c, d))
            minimax = min(max(a, c), max(b, d))
            sol = solve_stage_game(a, b, c, d)
            if maximin == minimax:
                assert sol.value == maximin
            # either way the solution is optimal for both sides:
            row = (sol.row_stop, 1 - sol.row_stop)
            col = (sol.col_stop, 1 - sol.col_stop)
            matrix = ((a, b), (c, d))
            guarantees = [
                sum(row[i] * matrix[i][j] for i in range(2)) for j in range(2)
            ]
            exposures = [
                sum(col[j] * matrix[i][j] for j in range(2)) for i in range(2)
            ]
            assert min(guarantees) == sol.value
            assert max(exposures) == sol.value


class TestZeroSum:
    def test_constant_zero_sum(self, e1):
        table = {}
        for c in (ONLY_1, ONLY_2, BOTH):
            table[(1, c)] = constant_process(e1, 4)
            table[(2, c)] = constant_process(e1, -4)
        game = stopping_game(table)
        assert zero_sum_value(game, e1).value == 4

    def test_saddle_game(self, singleton):
        game = singleton_game(singleton, both_stop=0, p1_stops=1, p2_stops=-1, nobody=0)
        result = zero_sum_value(game, singleton)
        assert result.value == 0
        assert result.strategies[0].beta[1]["w"] == 1
        assert result.strategies[1].beta[1]["w"] == 1

    def test_mixed_game_value_two_thirds(self, singleton):
        game = singleton_game(singleton, both_stop=2, p1_stops=0, p2_stops=0, nobody=1)
        result = zero_sum_value(game, singleton)
        assert result.value == F(2, 3)
        assert result.strategies[0].beta[1]["w"] == F(1, 3)
        assert result.strategies[1].beta[1]["w"] == F(1, 3)
        for player, expected in ((1, F(2, 3)), (2, F(-2, 3))):
            side = best_response_value(result.strategies[2 - player], game, player, singleton)
            assert side.value == expected

    def test_profile_is_exact_equilibrium(self):
        rng = random.Random(137)
        for _ in range(8):
            space = random_space(rng, max_depth=3)
            game = random_zero_sum_game(rng, space)
            result = zero_sum_value(game, space)
            assert check_epsilon_equilibrium(
                result.strategies[0], result.strategies[1], game, 0, space
            )
            realized = game_payoff(result.strategies[0], result.strategies[1], game, space)
            assert realized == (result.value, -result.value)

    def test_value_between_pure_maximin_and_minimax(self, e1):
        rng = random.Random(139)
        rules = enumerate_pure_stopping_times(e1)
        for _ in range(4):
            game = random_zero_sum_game(rng, e1)
            value = zero_sum_value(game, e1).value
            maximin = max(
                min(game_payoff(s1, s2, game, e1)[0] for s2 in rules) for s1 in rules
            )
            minimax = min(
                max(game_payoff(s1, s2, game, e1)[0] for s1 in rules) for s2 in rules
            )
            assert maximin <= value <= minimax

    def test_swapping_players_negates_value(self, e1):
        rng = random.Random(149)
        swap = {ONLY_1: ONLY_2, ONLY_2: ONLY_1, BOTH: BOTH}
        for _ in range(4):
            game = random_zero_sum_game(rng, e1)
            mirrored = StoppingGame(
                payoffs={
                    (3 - j, swap[c]): proc for (j, c), proc in game.payoffs.items()
                }
            )
            assert zero_sum_value(mirrored, e1).value == -zero_sum_value(game, e1).value

    def test_rejects_non_zero_sum(self, e1):
        rng = random.Random(151)
        game = random_game(rng, e1)
        assert not is_zero_sum(game, e1)
        with pytest.raises(NotZeroSum):
            zero_sum_value(game, e1)


class TestEquilibriumCheck:
    def test_constant_game_any_profile(self, e1, r1, b1):
        game = stopping_game(
            {(j, c): constant_process(e1, 2) for j in (1, 2) for c in (ONLY_1, ONLY_2, BOTH)}
        )
        assert check_epsilon_equilibrium(r1, b1, game, 0, e1)

    def test_dominated_stop_needs_exact_slack(self, singleton):
        # stopping together pays player 1 nothing; deferring to the opponent pays 2
        game = singleton_game(
            singleton, both_stop=0, p1_stops=0, p2_stops=2, nobody=0, zero_sum=False
        )
        stopper = pure({"w": 1})
        assert best_response_value(stopper, game, 1, singleton).value == 2
        assert not check_epsilon_equilibrium(stopper, stopper, game, 0, singleton)
        assert not check_epsilon_equilibrium(stopper, stopper, game, "199/100", singleton)
        assert check_epsilon_equilibrium(stopper, stopper, game, 2, singleton)

    def test_negative_epsilon_rejected(self, singleton):
        game = singleton_game(singleton, 0, 0, 0, 0)
        with pytest.raises(ValidationError):
            check_epsilon_equilibrium(pure({"w": 1}), pure({"w": 1}), game, -1, singleton)

    def test_equilibrium_survives_equivalent_replacement(self):
        rng = random.Random(157)
        done = 0
        while done < 5:
            space = random_space(rng, max_depth=2)
            game = random_zero_sum_game(rng, space)
            profile = zero_sum_value(game, space).strategies
            for target in ("randomized", "behavior", "mixed"):
                replaced = (
                    convert(profile[0], target, space),
                    convert(profile[1], target, space),
                )
                assert check_epsilon_equilibrium(replaced[0], replaced[1], game, 0, space)
            done += 1

"""Two-player stopping games: joint laws, best responses, values, equilibria.

Run with:  python demos/04_stopping_games.py
"""

from stopwright import (
    BOTH,
    INFINITY,
    ONLY_1,
    ONLY_2,
    adapted_process,
    behavior,
    best_response_value,
    build_space,
    check_epsilon_equilibrium,
    game_payoff,
    joint_detailed_distribution,
    pure,
    stopping_game,
    zero_sum_value,
)

# One period, one outcome: the cleanest place to watch the machinery.
space = build_space([{"id": "r", "parent": None}, {"id": "w", "parent": "r", "prob": "1"}])


def proc(at_one, at_never=0):
    return adapted_process(values={1: {"w": at_one}}, infinity={"w": at_never})


# Payoffs depend on who stops: both at once, player 1 alone, player 2
# alone; the never-stop outcome uses the both-players process at infinity.
# This one is zero-sum: player 2's processes mirror player 1's.
table = {
    (1, BOTH): proc(2, 1),
    (1, ONLY_1): proc(0),
    (1, ONLY_2): proc(0),
}
for c in (BOTH, ONLY_1, ONLY_2):
    p = table[(1, c)]
    table[(2, c)] = adapted_process(
        values={1: {"w": -p.values[1]["w"]}}, infinity={"w": -p.infinity["w"]}
    )
game = stopping_game(table)

# Independent coins: the joint law of the two stop indices is a product.
coin = behavior(beta={1: {"w": "1/2"}})
joint = joint_detailed_distribution(coin, coin, space)
print("joint law at the single outcome:")
for cell, mass in joint.mass["w"].items():
    if mass:
        print("  stop times", tuple(str(t) for t in cell), "mass", mass)

print("\npayoffs for coin vs coin:", game_payoff(coin, coin, game, space))

# Fixing the opponent turns the game into an ordinary stopping problem on
# the same tree (the opponent's hazard is folded into the payoffs), so a
# best response is just backward induction.
reply = best_response_value(coin, game, 1, space)
print("player 1 best response vs coin:", reply.value,
      "by", {a: str(t) for a, t in reply.strategy.stop.items()})

# The zero-sum value solves a 2x2 stage game per information set; here the
# cells are stop/continue for each player, and the closed-form mixed
# solution gives value 2/3 with both players stopping w.p. 1/3.
result = zero_sum_value(game, space)
print("\nzero-sum value:", result.value)
print("optimal stop probabilities:",
      result.strategies[0].beta[1]["w"], "and", result.strategies[1].beta[1]["w"])
print("profile is an exact equilibrium:",
      check_epsilon_equilibrium(result.strategies[0], result.strategies[1], game, 0, space))

# Pure profiles live in the same framework.
print("\nstop-vs-never payoffs:",
      game_payoff(pure({"w": 1}), pure({"w": INFINITY}), game, space))

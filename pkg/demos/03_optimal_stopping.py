"""Optimal stopping: payoffs, backward induction, and separating problems.

Run with:  python demos/03_optimal_stopping.py
"""

from stopwright import (
    adapted_process,
    build_space,
    check_epsilon_optimal,
    distinguish,
    enumerate_pure_stopping_times,
    payoff,
    pure,
    randomized,
    snell_value,
    witness_problem,
)

space = build_space(
    [
        {"id": "root", "parent": None},
        {"id": "A", "parent": "root"},
        {"id": "B", "parent": "root"},
        {"id": "w1", "parent": "A", "prob": "1/4"},
        {"id": "w2", "parent": "A", "prob": "1/4"},
        {"id": "w3", "parent": "B", "prob": "1/4"},
        {"id": "w4", "parent": "B", "prob": "1/4"},
    ]
)

# A stopping problem: what you collect if you stop at time n (or never).
problem = adapted_process(
    values={1: {"A": 1, "B": 0}, 2: {"w1": 0, "w2": 2, "w3": 1, "w4": 1}},
    infinity={a: 0 for a in space.atoms},
)

rho = randomized(
    rho={
        1: {"A": "1/2", "B": "1/4"},
        2: {"w1": "1/2", "w2": "0", "w3": "1/4", "w4": "3/4"},
    },
    rho_inf={"w1": "0", "w2": "1/2", "w3": "1/2", "w4": "0"},
)
print("payoff of the randomized rule:", payoff(rho, problem, space))

# Backward induction finds the optimal value and a pure rule attaining it;
# brute force over all pure rules agrees (and randomization cannot help,
# because the payoff is linear in the rule's mass table).
result = snell_value(problem, space)
print("optimal value:", result.value)
print("optimal rule:", {a: str(t) for a, t in result.strategy.stop.items()})
rules = enumerate_pure_stopping_times(space)
print("brute-force maximum over", len(rules), "pure rules:",
      max(payoff(s, problem, space) for s in rules))

print("rho within 1/2 of optimal:", check_epsilon_optimal(rho, problem, "1/2", space))
print("rho within 2/5 of optimal:", check_epsilon_optimal(rho, problem, "2/5", space))

# Two rules with different mass tables can always be told apart by an
# explicit stopping problem: pay the conditional probability of a chosen
# event at one chosen time, zero elsewhere.
stop_now = pure({a: 1 for a in space.atoms})
witness = distinguish(rho, stop_now, space)
print("\nseparating witness:", set(witness.event), "at time", witness.time,
      "payoff gap", witness.payoff_gap)
problem_w = witness_problem(witness.event, witness.time, space)
print("payoffs on the witness problem:",
      payoff(rho, problem_w, space), "vs", payoff(stop_now, problem_w, space))

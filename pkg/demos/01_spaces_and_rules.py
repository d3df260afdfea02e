"""Tour of the basic objects: a scenario tree and the four kinds of stopping rule.

Run with:  python demos/01_spaces_and_rules.py
"""

from stopwright import (
    INFINITY,
    behavior,
    build_space,
    detailed_distribution,
    equivalent,
    is_stopping_measure,
    mixed,
    pure,
    randomized,
    validate,
)

# A two-period tree: at time 1 we learn whether we are in branch A or B,
# at time 2 the exact outcome.  Four equally likely leaves.
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
print("space:", space)
print("time-1 information:", {b: space.members(1, b) for b in space.blocks(1)})

# A pure rule stops at a fixed index per outcome, but may only use what is
# known at the moment of stopping: {stop = n} must respect the time-n blocks.
sigma = pure({"w1": 1, "w2": 1, "w3": 2, "w4": INFINITY})
print("\npure rule valid?", validate(sigma, space) is None)

bad = pure({"w1": 1, "w2": 2, "w3": 1, "w4": 1})
print("clairvoyant rule rejected:", validate(bad, space))

# A randomized rule spreads stop mass over times; mass tables are adapted by
# construction because each time-n entry is keyed by a time-n block.
rho = randomized(
    rho={
        1: {"A": "1/2", "B": "1/4"},
        2: {"w1": "1/2", "w2": "0", "w3": "1/4", "w4": "3/4"},
    },
    rho_inf={"w1": "0", "w2": "1/2", "w3": "1/2", "w4": "0"},
)

# A behavior rule gives the conditional chance of stopping now, given
# survival so far (a discrete hazard).
haz = behavior(beta={1: {"A": "1/2", "B": "1/4"}, 2: {"w1": 1, "w2": 0, "w3": "1/3", "w4": 1}})

# A mixed rule draws one number up front and commits to a pure rule.
mix = mixed(
    breakpoints=["0", "1/4", "1/2", "1"],
    sections=[
        pure({a: 1 for a in space.atoms}),
        pure({"w1": 1, "w2": 1, "w3": 2, "w4": 2}),
        pure({"w1": 2, "w2": INFINITY, "w3": INFINITY, "w4": 2}),
    ],
)

# What any observer of (outcome, stop index) could ever measure is the
# detailed distribution: a mass table over outcomes and stop times.
table = detailed_distribution(rho, space)
print("\ndetailed distribution of the randomized rule:")
for atom in space.atoms:
    print(" ", atom, {str(t): str(m) for t, m in table.mass[atom].items()})
print("qualifies as a stopping measure:", is_stopping_measure(table, space))

# The three randomized descriptions above were chosen to induce the same
# table, so they are interchangeable in any stopping problem.
print("\nrandomized ~ behavior:", equivalent(rho, haz, space))
print("randomized ~ mixed:   ", equivalent(rho, mix, space))
print("randomized ~ pure:    ", equivalent(rho, sigma, space))

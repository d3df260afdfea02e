"""Monte-Carlo execution of stopping rules from explicit external randomness.

This is the package's independent cross-check: rules are *run*, sample by
sample, from uniform draws, and the resulting frequencies are compared
against the exact tables computed elsewhere.  Nothing here reuses the
exact layer's arithmetic beyond reading the rule's parameters.

Reproducibility contract
------------------------
Sampling is chunked: chunk ``i`` covers samples ``[i*CHUNK_SIZE, ...)`` and
draws from ``numpy.random.default_rng((seed, i))`` (PCG64 seeded through
``SeedSequence``).  Within a chunk the draw order is fixed: outcome
uniforms first, then the rule's stop draws (for two players, three
generators spawned from the chunk's SeedSequence in the order outcome,
player 1, player 2).  Totals are sums of per-chunk counts, so any split of
whole chunks across workers reproduces the single-worker result bit for
bit, and identical seeds always give identical output.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

import numpy as np

from .space import INFINITY, FilteredSpace, Time
from .stopping import (
    BehaviorStoppingTime,
    PureStoppingTime,
    RandomStoppingTime,
    RandomizedStoppingTime,
    require_valid,
)
from .games import StoppingGame, _coalition, check_game

CHUNK_SIZE = 4096


def sample_stop_time(
    eta: RandomStoppingTime, space: FilteredSpace, atom: str, uniforms: Iterable[float]
) -> Time:
    """Run one realization of the rule at ``atom`` from explicit uniform draws.

    Pure rules consume no draws; randomized and mixed rules consume one;
    behavior rules consume one per period until they stop (at most T).
    Draws are compared against exact rationals, so thresholds are hit
    exactly.
    """
    require_valid(eta, space)
    draws = iter(uniforms)
    if isinstance(eta, PureStoppingTime):
        return eta.stop[atom]
    if isinstance(eta, RandomizedStoppingTime):
        r = next(draws)
        cumulative = Fraction(0)
        for n in range(1, space.horizon + 1):
            cumulative += eta.rho[n][space.block_of(n, atom)]
            if cumulative >= r:
                return n
        return INFINITY
    if isinstance(eta, BehaviorStoppingTime):
        for n in range(1, space.horizon + 1):
            r = next(draws)
            if r <= eta.beta[n][space.block_of(n, atom)]:
                return n
        return INFINITY
    r = next(draws)
    for k in range(1, len(eta.breakpoints)):
        if eta.breakpoints[k] >= r:
            return eta.sections[k - 1].stop[atom]
    return eta.sections[-1].stop[atom]


# -- vectorized chunk sampling -------------------------------------------------


def _atom_cumprobs(space: FilteredSpace) -> np.ndarray:
    c = np.cumsum([float(space.prob[a]) for a in space.atoms])
    c[-1] = 1.0
    return c


def _stop_columns(eta: RandomStoppingTime, space: FilteredSpace, rng, atom_idx: np.ndarray):
    """Column indices of realized stop times: 0..T-1 for times 1..T, T for never."""
    T = space.horizon
    atoms = space.atoms
    if isinstance(eta, PureStoppingTime):
        table = np.array(
            [T if eta.stop[a] == INFINITY else int(eta.stop[a]) - 1 for a in atoms]
        )
        return table[atom_idx]
    if isinstance(eta, RandomizedStoppingTime):
        cum = np.empty((len(atoms), T))
        for i, a in enumerate(atoms):
            running = Fraction(0)
            for n in range(1, T + 1):
                running += eta.rho[n][space.block_of(n, a)]
                cum[i, n - 1] = float(running)
        r = rng.random(len(atom_idx))
        reached = cum[atom_idx] >= r[:, None]
        return np.where(reached.any(axis=1), reached.argmax(axis=1), T)
    if isinstance(eta, BehaviorStoppingTime):
        hazard = np.array(
            [
                [float(eta.beta[n][space.block_of(n, a)]) for n in range(1, T + 1)]
                for a in atoms
            ]
        )
        draws = rng.random((len(atom_idx), T))
        stopped = draws <= hazard[atom_idx]
        return np.where(stopped.any(axis=1), stopped.argmax(axis=1), T)
    # mixed: one draw selects the section, the section decides per atom
    cuts = np.array([float(r) for r in eta.breakpoints[1:]])
    section_cols = np.array(
        [
            [T if s.stop[a] == INFINITY else int(s.stop[a]) - 1 for a in atoms]
            for s in eta.sections
        ]
    )
    r = rng.random(len(atom_idx))
    k = np.searchsorted(cuts, r, side="left")
    return section_cols[k, atom_idx]


def detailed_counts_chunk(
    eta: RandomStoppingTime, space: FilteredSpace, size: int, seed: int, chunk_index: int
) -> np.ndarray:
    """Stop-time counts (atoms x times) for one chunk of the sample stream."""
    rng = np.random.default_rng(np.random.SeedSequence((seed, chunk_index)))
    atom_idx = np.searchsorted(_atom_cumprobs(space), rng.random(size), side="left")
    cols = _stop_columns(eta, space, rng, atom_idx)
    counts = np.zeros((len(space.atoms), space.horizon + 1), dtype=np.int64)
    np.add.at(counts, (atom_idx, cols), 1)
    return counts


def joint_counts_chunk(
    eta1: RandomStoppingTime,
    eta2: RandomStoppingTime,
    space: FilteredSpace,
    size: int,
    seed: int,
    chunk_index: int,
) -> np.ndarray:
    """Joint stop-time counts (atoms x times x times) for one chunk."""
    root = np.random.SeedSequence((seed, chunk_index))
    rng_omega, rng1, rng2 = (np.random.default_rng(s) for s in root.spawn(3))
    atom_idx = np.searchsorted(_atom_cumprobs(space), rng_omega.random(size), side="left")
    cols1 = _stop_columns(eta1, space, rng1, atom_idx)
    cols2 = _stop_columns(eta2, space, rng2, atom_idx)
    T = space.horizon
    counts = np.zeros((len(space.atoms), T + 1, T + 1), dtype=np.int64)
    np.add.at(counts, (atom_idx, cols1, cols2), 1)
    return counts


def chunk_plan(samples: int) -> list[tuple[int, int]]:
    """(chunk_index, chunk_size) pairs covering ``samples`` draws."""
    plan = []
    index, remaining = 0, samples
    while remaining > 0:
        size = min(CHUNK_SIZE, remaining)
        plan.append((index, size))
        index += 1
        remaining -= size
    return plan


def _check_sampling_args(samples: int, seed: int) -> None:
    if samples < 1:
        raise ValueError(f"samples must be >= 1, got {samples}")
    if seed < 0:
        raise ValueError(f"seed must be nonnegative, got {seed}")


@dataclass(frozen=True)
class EmpiricalDistribution:
    """Counts of realized (outcome, stop index) pairs from seeded sampling."""

    samples: int
    counts: Mapping[str, Mapping[Time, int]]

    @property
    def frequencies(self) -> dict[str, dict[Time, float]]:
        return {
            atom: {t: c / self.samples for t, c in row.items()}
            for atom, row in self.counts.items()
        }


def empirical_detailed_distribution(
    eta: RandomStoppingTime, space: FilteredSpace, samples: int, seed: int
) -> EmpiricalDistribution:
    """Relative frequencies over (outcome, stop index), deterministic per seed."""
    require_valid(eta, space)
    _check_sampling_args(samples, seed)
    total = np.zeros((len(space.atoms), space.horizon + 1), dtype=np.int64)
    for index, size in chunk_plan(samples):
        total += detailed_counts_chunk(eta, space, size, seed, index)
    counts = {
        atom: {t: int(total[i, j]) for j, t in enumerate(space.times)}
        for i, atom in enumerate(space.atoms)
    }
    return EmpiricalDistribution(samples=samples, counts=counts)


@dataclass(frozen=True)
class EmpiricalJointDistribution:
    """Counts of realized (outcome, stop index 1, stop index 2) triples."""

    samples: int
    counts: Mapping[str, Mapping[tuple[Time, Time], int]]

    @property
    def frequencies(self) -> dict[str, dict[tuple[Time, Time], float]]:
        return {
            atom: {cell: c / self.samples for cell, c in row.items()}
            for atom, row in self.counts.items()
        }


def empirical_joint_distribution(
    eta1: RandomStoppingTime,
    eta2: RandomStoppingTime,
    space: FilteredSpace,
    samples: int,
    seed: int,
) -> EmpiricalJointDistribution:
    """Joint frequencies for two rules run on independent draw streams."""
    require_valid(eta1, space)
    require_valid(eta2, space)
    _check_sampling_args(samples, seed)
    T = space.horizon
    total = np.zeros((len(space.atoms), T + 1, T + 1), dtype=np.int64)
    for index, size in chunk_plan(samples):
        total += joint_counts_chunk(eta1, eta2, space, size, seed, index)
    counts = {
        atom: {
            (t1, t2): int(total[i, j1, j2])
            for j1, t1 in enumerate(space.times)
            for j2, t2 in enumerate(space.times)
        }
        for i, atom in enumerate(space.atoms)
    }
    return EmpiricalJointDistribution(samples=samples, counts=counts)


def empirical_game_payoff(
    eta1: RandomStoppingTime,
    eta2: RandomStoppingTime,
    game: StoppingGame,
    space: FilteredSpace,
    samples: int,
    seed: int,
) -> tuple[float, float]:
    """Average realized payoffs over seeded sample runs of both rules."""
    check_game(space, game)
    joint = empirical_joint_distribution(eta1, eta2, space, samples, seed)
    means = [0.0, 0.0]
    for atom in space.atoms:
        for (t1, t2), count in joint.counts[atom].items():
            if count == 0:
                continue
            c = _coalition(t1, t2)
            stop_at = min(t1, t2)
            for i, player in enumerate((1, 2)):
                means[i] += count * float(game.process(player, c).value_at(space, stop_at, atom))
    return means[0] / samples, means[1] / samples

"""Constructive conversions between stopping measures and the three random rule types.

Every conversion preserves the detailed distribution exactly, so a rule of
any type can be rewritten in any other type without changing what an
observer of (outcome, stop index) could ever see.  The hazard quotient,
the survival products, and the cumulative-sum threshold construction used
here are the entire computational content of that equivalence.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import NotAStoppingMeasure
from .space import INFINITY, FilteredSpace, as_fraction
from .stopping import (
    BehaviorStoppingTime,
    MixedStoppingTime,
    PureStoppingTime,
    RandomStoppingTime,
    RandomizedStoppingTime,
    StoppingMeasure,
    detailed_distribution,
    is_stopping_measure,
    require_valid,
)

TARGET_TYPES = ("randomized", "behavior", "mixed")


def measure_to_randomized(nu: StoppingMeasure, space: FilteredSpace) -> RandomizedStoppingTime:
    """Read per-time densities off a stopping measure.

    The time-``n`` density is constant on time-``n`` blocks (that is what
    makes ``nu`` a stopping measure), so one member atom per block
    determines it.
    """
    if not is_stopping_measure(nu, space):
        raise NotAStoppingMeasure("mass table fails the stopping-measure conditions")
    rho = {
        n: {
            block_id: nu.density(space, space.members(n, block_id)[0], n)
            for block_id in space.blocks(n)
        }
        for n in range(1, space.horizon + 1)
    }
    rho_inf = {a: nu.density(space, a, INFINITY) for a in space.atoms}
    return RandomizedStoppingTime(rho=rho, rho_inf=rho_inf)


def randomized_to_behavior(
    eta: RandomizedStoppingTime, space: FilteredSpace
) -> BehaviorStoppingTime:
    """Stop masses to hazards: divide by the mass not yet spent.

    Once the surviving mass hits zero the quotient is 0/0; any convention
    gives the same detailed distribution and we pick 0, so a rule that has
    surely stopped never "stops again".
    """
    require_valid(eta, space)
    beta: dict[int, dict[str, Fraction]] = {}
    for n in range(1, space.horizon + 1):
        beta[n] = {}
        for block_id in space.blocks(n):
            witness = space.members(n, block_id)[0]
            spent = sum(
                (eta.rho[j][space.block_of(j, witness)] for j in range(1, n)),
                start=Fraction(0),
            )
            surviving = 1 - spent
            if surviving == 0:
                beta[n][block_id] = Fraction(0)
            else:
                beta[n][block_id] = eta.rho[n][block_id] / surviving
    return BehaviorStoppingTime(beta=beta)


def behavior_to_randomized(
    eta: BehaviorStoppingTime, space: FilteredSpace
) -> RandomizedStoppingTime:
    """Hazards to stop masses: survive past 1..n-1, then stop at n."""
    require_valid(eta, space)
    rho: dict[int, dict[str, Fraction]] = {n: {} for n in range(1, space.horizon + 1)}
    for n in range(1, space.horizon + 1):
        for block_id in space.blocks(n):
            witness = space.members(n, block_id)[0]
            survival = Fraction(1)
            for j in range(1, n):
                survival *= 1 - eta.beta[j][space.block_of(j, witness)]
            rho[n][block_id] = survival * eta.beta[n][block_id]
    rho_inf = {}
    for atom in space.atoms:
        survival = Fraction(1)
        for j in range(1, space.horizon + 1):
            survival *= 1 - eta.beta[j][space.block_of(j, atom)]
        rho_inf[atom] = survival
    return RandomizedStoppingTime(rho=rho, rho_inf=rho_inf)


def randomized_to_mixed(eta: RandomizedStoppingTime, space: FilteredSpace) -> MixedStoppingTime:
    """Threshold the cumulative stop masses with one shared external draw.

    The draw r selects the first time whose cumulative mass reaches r.
    Cutting the unit interval at every cumulative sum seen on any atom
    (plus 1) makes the selected rule constant on each piece, so finitely
    many pure sections carry the whole mixture.  Each section is adapted
    because cumulative masses are.
    """
    require_valid(eta, space)
    cumulative = {}
    for atom in space.atoms:
        sums = []
        running = Fraction(0)
        for n in range(1, space.horizon + 1):
            running += eta.rho[n][space.block_of(n, atom)]
            sums.append(running)
        cumulative[atom] = sums
    cuts = {c for sums in cumulative.values() for c in sums if c > 0}
    cuts.add(Fraction(1))
    breakpoints = (Fraction(0),) + tuple(sorted(cuts))
    sections = []
    for right in breakpoints[1:]:
        stop = {}
        for atom in space.atoms:
            stop[atom] = next(
                (n + 1 for n, c in enumerate(cumulative[atom]) if c >= right), INFINITY
            )
        sections.append(PureStoppingTime(stop=stop))
    return MixedStoppingTime(breakpoints=breakpoints, sections=tuple(sections))


def mixed_to_measure(eta: MixedStoppingTime, space: FilteredSpace) -> StoppingMeasure:
    """Integrate the sections against their interval lengths."""
    return detailed_distribution(eta, space)


def convert(eta: RandomStoppingTime, target_type: str, space: FilteredSpace) -> RandomStoppingTime:
    """Rewrite ``eta`` as an equivalent rule of ``target_type``.

    Route: detailed distribution -> densities -> target construction.  The
    result always has the same detailed distribution; its syntactic form is
    canonical for the target type, not necessarily minimal.
    """
    if target_type not in TARGET_TYPES:
        raise ValueError(f"target_type must be one of {TARGET_TYPES}, got {target_type!r}")
    base = measure_to_randomized(detailed_distribution(eta, space), space)
    if target_type == "randomized":
        return base
    if target_type == "behavior":
        return randomized_to_behavior(base, space)
    return randomized_to_mixed(base, space)


def repair_densities(candidate, space: FilteredSpace) -> RandomizedStoppingTime:
    """Force an externally supplied density table into a valid randomized rule.

    Running forward in time, each value is clipped into [0, mass still
    unspent] and the never-stop slot absorbs the remainder.  On densities
    coming from an actual stopping measure this is a no-op; it only changes
    tables that were inconsistent to begin with.
    """
    table = {
        int(n): {b: as_fraction(v) for b, v in level.items()} for n, level in candidate.items()
    }
    rho: dict[int, dict[str, Fraction]] = {n: {} for n in range(1, space.horizon + 1)}
    for n in range(1, space.horizon + 1):
        level = table.get(n, {})
        for block_id in space.blocks(n):
            witness = space.members(n, block_id)[0]
            spent = sum(
                (rho[j][space.block_of(j, witness)] for j in range(1, n)), start=Fraction(0)
            )
            raw = level.get(block_id, Fraction(0))
            rho[n][block_id] = max(Fraction(0), min(raw, 1 - spent))
    rho_inf = {}
    for atom in space.atoms:
        spent = sum(
            (rho[n][space.block_of(n, atom)] for n in range(1, space.horizon + 1)),
            start=Fraction(0),
        )
        rho_inf[atom] = 1 - spent
    return RandomizedStoppingTime(rho=rho, rho_inf=rho_inf)

"""Two-pole reduction and the cut criterion for transshipment feasibility.

A problem with capacities scaled by a factor z is solvable exactly when no
cut's deficiency exceeds z times its capacity. Instead of enumerating cuts,
attach a super source feeding every producer and a super sink draining every
consumer: the scaled problem is solvable iff the max flow of that two-pole
network saturates the total supply, and a failing min cut hands back a
violated cut as a witness.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Literal

from .maxflow import FlowNetwork, max_flow
from .model import Cut, CutStats, Problem, cut_stats

CutSide = Literal["source", "sink"]


@dataclass(frozen=True)
class TwoPole:
    """Auxiliary s-t network whose max flow decides feasibility.

    Original node i keeps index i; the super source is index n and the super
    sink n+1. Producer u gets arc (s, u) with capacity d_u, consumer w gets
    (w, t) with capacity -d_w, and every original arc keeps z times its
    capacity. All capacities are multiplied by one integerizing `scale` so
    the flow engine can stay integer-only. For any cut (V', V'') of the
    problem, the matching two-pole cut has capacity
    scale * (D + z*capacity - deficiency), D being the total supply.
    """

    problem: Problem
    z: Fraction
    network: FlowNetwork
    arc_position: dict[str, int]
    total_supply: Fraction
    scale: int


@dataclass(frozen=True)
class FeasibilityReport:
    """Outcome of one feasibility test at capacity factor z.

    When infeasible, `witness_cut` is a cut violating the criterion at the
    tested capacities; it maximizes deficiency - z*capacity over all cuts
    (which need not maximize the deficiency/capacity ratio). Its stats are
    taken at the original, unscaled capacities.
    """

    feasible: bool
    z: Fraction
    witness_cut: Cut | None = None
    witness_stats: CutStats | None = None


@dataclass(frozen=True)
class FatalCutReport:
    """Whether some cut has positive deficiency and no outgoing arcs."""

    fatal: bool
    witness_cut: Cut | None = None
    witness_stats: CutStats | None = None


def build_two_pole(problem: Problem, z: Fraction) -> TwoPole:
    """Build the scaled two-pole network for capacity factor z > 0."""
    if z <= 0:
        raise ValueError("capacity factor z must be positive")
    n = len(problem.node_ids)
    s, t = n, n + 1
    position = problem.node_position

    ends: list[tuple[int, int]] = []
    caps: list[Fraction] = []
    for v in problem.node_ids:
        d = problem.balances[v]
        if d > 0:
            ends.append((s, position[v]))
            caps.append(d)
        elif d < 0:
            ends.append((position[v], t))
            caps.append(-d)
    arc_position: dict[str, int] = {}
    for arc in problem.arcs:
        arc_position[arc.arc_id] = len(ends)
        ends.append((position[arc.tail], position[arc.head]))
        caps.append(z * arc.capacity)

    scale = math.lcm(*(c.denominator for c in caps)) if caps else 1
    arcs = tuple(
        (tail, head, int(c * scale)) for (tail, head), c in zip(ends, caps)
    )
    network = FlowNetwork(n + 2, arcs, s, t)
    return TwoPole(problem, z, network, arc_position, problem.total_supply, scale)


def is_feasible(
    problem: Problem, z: Fraction, *, cut_side: CutSide = "source"
) -> FeasibilityReport:
    """Test solvability of the problem with every capacity scaled by z.

    Feasible iff the two-pole max flow saturates the scaled total supply.
    On failure the min cut, restricted to the original nodes, is a proper
    bipartition (the trivial all-source and all-sink cuts both carry the
    full supply, so neither can be minimal) and is returned as the witness.
    `cut_side` selects the inclusion-minimal ("source") or -maximal ("sink")
    min cut; the alternative exists for cross-checking only.
    """
    if problem.total_supply == 0:
        return FeasibilityReport(True, z)
    two_pole = build_two_pole(problem, z)
    result = max_flow(two_pole.network)
    if result.value == two_pole.total_supply * two_pole.scale:
        return FeasibilityReport(True, z)

    side = (
        result.min_cut_source_side
        if cut_side == "source"
        else result.alt_min_cut_source_side
    )
    n = len(problem.node_ids)
    cut = Cut.from_source_side(
        problem, (problem.node_ids[i] for i in side if i < n)
    )
    return FeasibilityReport(False, z, cut, cut_stats(problem, cut))


def has_fatal_cut(problem: Problem) -> FatalCutReport:
    """Detect a positive-deficiency cut with no outgoing arcs.

    Tests feasibility at M = total supply / minimum capacity: with that much
    slack, any cut with at least one outgoing arc is satisfied, so only an
    arcless cut can still be violated and any witness must be fatal.
    """
    if problem.total_supply == 0:
        return FatalCutReport(False)
    if problem.arcs:
        factor = problem.total_supply / min(a.capacity for a in problem.arcs)
    else:
        factor = Fraction(1)  # no arcs: the factor is irrelevant
    report = is_feasible(problem, factor)
    if report.feasible:
        return FatalCutReport(False)
    assert report.witness_stats is not None
    assert report.witness_stats.capacity == 0, (
        "witness at the fatal-test factor must have an empty arc set"
    )
    return FatalCutReport(True, report.witness_cut, report.witness_stats)


def total_integer_capacity(problem: Problem) -> int:
    """Total capacity once balances and capacities sit on an integer grid.

    Distinct cut ratios differ by at least one over the square of this
    value; the exact reconstruction in the ratio search and the epsilon
    probes in certificate verification rely on that separation. Returns 1
    for arcless problems so callers can still form positive epsilons.
    """
    denominators = [a.capacity.denominator for a in problem.arcs]
    denominators += [d.denominator for d in problem.balances.values()]
    scale = math.lcm(*denominators) if denominators else 1
    total = sum((a.capacity for a in problem.arcs), Fraction(0)) * scale
    return max(int(total), 1)

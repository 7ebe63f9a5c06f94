"""Shared fixtures and seeded random instance generators."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from lexflow import Problem, validate_problem


def diamond_problem(supply: int = 4) -> Problem:
    """Four-node diamond: one producer, one consumer, two parallel routes."""
    return validate_problem(
        [("s", supply), ("a", 0), ("b", 0), ("t", -supply)],
        [
            ("sa", "s", "a", 1),
            ("sb", "s", "b", 3),
            ("at", "a", "t", 2),
            ("bt", "b", "t", 2),
        ],
    )


def single_arc_problem() -> Problem:
    return validate_problem([("u", 5), ("w", -5)], [("uw", "u", "w", 2)])


def two_cycle_problem() -> Problem:
    return validate_problem(
        [("u", 3), ("w", -3)],
        [("uw", "u", "w", 1), ("wu", "w", "u", 1)],
    )


def random_rational(
    rng: random.Random, max_num: int = 12, max_den: int = 12
) -> Fraction:
    return Fraction(rng.randint(1, max_num), rng.randint(1, max_den))


def random_problem(
    rng: random.Random,
    max_nodes: int = 10,
    max_arcs: int = 14,
    max_num: int = 12,
    max_den: int = 12,
) -> Problem:
    """Random instance; balances are sums of bounded transfers, so they are
    exactly zero in total. May contain fatal or deficient cuts."""
    n = rng.randint(2, max_nodes)
    ids = [f"n{i}" for i in range(n)]
    balances = {v: Fraction(0) for v in ids}
    for _ in range(rng.randint(0, n)):
        u, w = rng.sample(ids, 2)
        t = random_rational(rng, max_num, max_den)
        balances[u] += t
        balances[w] -= t
    arcs = []
    for j in range(rng.randint(1, max_arcs)):
        tail, head = rng.sample(ids, 2)
        arcs.append((f"e{j}", tail, head, random_rational(rng, max_num, max_den)))
    return validate_problem([(v, balances[v]) for v in ids], arcs)


def random_solvable_problem(
    rng: random.Random,
    max_nodes: int = 7,
    max_arcs: int = 12,
    max_num: int = 12,
    max_den: int = 12,
) -> Problem:
    """Random weakly solvable instance: balances are induced by a random
    nonnegative flow on the generated arcs, so a weak solution exists by
    construction."""
    n = rng.randint(2, max_nodes)
    ids = [f"n{i}" for i in range(n)]
    arcs = []
    balances = {v: Fraction(0) for v in ids}
    for j in range(rng.randint(1, max_arcs)):
        tail, head = rng.sample(ids, 2)
        arcs.append((f"e{j}", tail, head, random_rational(rng, max_num, max_den)))
        if rng.random() < 0.7:
            carried = Fraction(rng.randint(0, max_num), rng.randint(1, max_den))
            balances[tail] += carried
            balances[head] -= carried
    return validate_problem([(v, balances[v]) for v in ids], arcs)


@pytest.fixture
def d4() -> Problem:
    return diamond_problem()

"""Cop-side adversaries for strategy simulations.

An adversary sees the full position (perfect information) and returns new
labelled cop positions. Every returned move is checked by ``validate_move``.
"""

from __future__ import annotations

import random

from .errors import AdversaryFaultError, InvalidInputError
from .solver import CopWinSolver


def _closed_out(g, v):
    return g.closed_out_neighborhood(v) if hasattr(g, "closed_out_neighborhood") else g.closed_neighborhood(v)


def validate_move(g, old, new) -> tuple[int, ...]:
    new = tuple(int(x) for x in new)
    if len(new) != len(old):
        raise AdversaryFaultError(f"adversary moved {len(new)} cops, expected {len(old)}")
    for c, x in zip(old, new):
        if x not in _closed_out(g, c):
            raise AdversaryFaultError(f"illegal cop move {c} -> {x}")
    return new


class Adversary:
    name = "base"
    deterministic = True

    def __init__(self, g):
        self.g = g

    def move(self, cops: tuple[int, ...], robber: int) -> tuple[int, ...]:
        raise NotImplementedError

    def __call__(self, cops, robber):
        return self.move(tuple(cops), robber)


class GreedyCops(Adversary):
    """Each cop steps to the closed out-neighbour nearest the robber (lowest id on ties)."""

    name = "greedy"

    def move(self, cops, robber):
        to_robber = self.g.reverse_distances(robber)
        return tuple(min(_closed_out(self.g, c), key=lambda x: (to_robber[x], x)) for c in cops)


class RandomCops(Adversary):
    """Each cop independently takes a greedy step with probability ``bias``,
    otherwise a uniformly random closed out-neighbour."""

    name = "random"
    deterministic = False

    def __init__(self, g, seed: int = 0, bias: float = 0.5):
        super().__init__(g)
        self.rng = random.Random(seed)
        self.bias = bias
        self._greedy = GreedyCops(g)

    def move(self, cops, robber):
        greedy = self._greedy.move(cops, robber)
        return tuple(gx if self.rng.random() < self.bias else self.rng.choice(_closed_out(self.g, c))
                     for c, gx in zip(cops, greedy))


class OptimalCops(Adversary):
    """Plays from the exact win table; in robber-win positions (where no move
    forces capture) it falls back to greedy pursuit."""

    name = "optimal"

    def __init__(self, g, k: int, solver: CopWinSolver | None = None, budget: int | None = None):
        super().__init__(g)
        self.solver = solver if solver is not None else CopWinSolver(g, k, budget)
        self._greedy = GreedyCops(g)

    def move(self, cops, robber):
        if not cops:
            return cops
        best = self.solver.best_cop_move(cops, robber)
        return best if best is not None else self._greedy.move(cops, robber)


def make_adversary(name: str, g, k: int, seed: int = 0, budget: int | None = None) -> Adversary:
    if name == "greedy":
        return GreedyCops(g)
    if name == "random":
        return RandomCops(g, seed)
    if name == "optimal":
        if k == 0:
            return GreedyCops(g)
        return OptimalCops(g, k, budget=budget)
    raise InvalidInputError(f"unknown adversary {name!r}")

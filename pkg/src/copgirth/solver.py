"""Exact cops-and-robber solver by retrograde analysis.

Positions are (cop multiset, robber vertex, side to move). Cop multisets are
stored sorted, which quotients out cop relabelling. The win table is the least
fixed point of the usual attractor iteration; anything outside it is a robber
win (a repeated position counts for the robber).
"""

from __future__ import annotations

import itertools
import math
import os
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .errors import BoundExceededError, InvalidInputError, PreconditionError, ResourceError

DEFAULT_STATE_BUDGET = 10 ** 8
UNSOLVED = -1


def state_budget() -> int:
    return int(os.environ.get("COPGIRTH_STATE_BUDGET", DEFAULT_STATE_BUDGET))


def count_states(n: int, k: int) -> int:
    """Number of (multiset, robber, side) positions for k cops on n vertices."""
    return 2 * math.comb(n + k - 1, k) * n


def _closed_out(g, v):
    return g.closed_out_neighborhood(v) if hasattr(g, "closed_out_neighborhood") else g.closed_neighborhood(v)


@dataclass(frozen=True)
class GameState:
    cops: tuple[int, ...]
    robber: int
    cops_to_move: bool

    @property
    def captured(self) -> bool:
        return self.robber in self.cops


class CopWinSolver:
    """Win table for ``k`` cops on ``g`` (a Graph or a Digraph).

    ``cop_depth[m, r]`` is the number of cop moves needed to force capture from
    the cops-to-move position (multiset m, robber r), or UNSOLVED. Likewise
    ``robber_depth`` for robber-to-move positions.
    """

    def __init__(self, g, k: int, budget: int | None = None):
        if k < 1:
            raise InvalidInputError("need at least one cop")
        if g.n < 1:
            raise InvalidInputError("empty graph")
        if not g.is_connected:
            raise PreconditionError("the game is defined on connected (di)graphs")
        self.g, self.k, self.n = g, k, g.n
        budget = state_budget() if budget is None else budget
        required = count_states(g.n, k)
        if required > budget:
            raise ResourceError(f"{k} cops on n={g.n} needs {required} states, budget is {budget}",
                                required=required, budget=budget)
        self.states = required
        self._nbhd = [tuple(_closed_out(g, v)) for v in range(g.n)]
        self.multisets = list(itertools.combinations_with_replacement(range(g.n), k))
        self.index = {m: i for i, m in enumerate(self.multisets)}
        self._solve()

    # -- construction ---------------------------------------------------------

    def _successor_matrix(self) -> sp.csr_matrix:
        rows, cols = [], []
        for i, m in enumerate(self.multisets):
            targets = {self.index[tuple(sorted(p))] for p in itertools.product(*(self._nbhd[c] for c in m))}
            rows.extend([i] * len(targets))
            cols.extend(targets)
        M = len(self.multisets)
        return sp.csr_matrix((np.ones(len(rows), dtype=np.float32), (rows, cols)), shape=(M, M))

    def _solve(self):
        n, M = self.n, len(self.multisets)
        occupied = np.zeros((M, n), dtype=bool)
        for i, m in enumerate(self.multisets):
            occupied[i, list(m)] = True
        # robber_moves[x, r] = 1 when x is in the robber's closed out-neighbourhood of r
        rr, xx = zip(*((r, x) for r in range(n) for x in self._nbhd[r]))
        robber_moves = sp.csr_matrix((np.ones(len(rr), dtype=np.float32), (xx, rr)), shape=(n, n))
        S = self._successor_matrix()

        cop_depth = np.where(occupied, 0, UNSOLVED).astype(np.int32)
        rob_depth = np.where(occupied, 0, UNSOLVED).astype(np.int32)
        cop_win = occupied.copy()
        it = 0
        while True:
            it += 1
            # robber to move loses iff every reachable vertex is a cop win
            escapes = (robber_moves.T @ (~cop_win).astype(np.float32).T).T
            rob_win_now = occupied | (escapes == 0)
            new_r = rob_win_now & (rob_depth == UNSOLVED)
            rob_depth[new_r] = it
            cop_new = (S @ rob_win_now.astype(np.float32)) > 0
            fresh = cop_new & ~cop_win
            if not fresh.any() and not new_r.any():
                break
            cop_depth[fresh] = it
            cop_win |= cop_new
        self.iterations = it
        self.cop_depth = cop_depth
        self.robber_depth = rob_depth
        self.cop_depth.flags.writeable = False
        self.robber_depth.flags.writeable = False
        win_rows = np.flatnonzero(cop_win.all(axis=1))
        self.cops_win = bool(len(win_rows))
        if self.cops_win:
            depths = cop_depth[win_rows].max(axis=1)
            best = win_rows[np.argmin(depths)]
            self.start = self.multisets[best]
            self.capture_depth = int(depths.min())
        else:
            self.start = None
            self.capture_depth = None

    # -- queries --------------------------------------------------------------

    def _row(self, cops) -> int:
        key = tuple(sorted(cops))
        if len(key) != self.k:
            raise InvalidInputError(f"expected {self.k} cop positions, got {len(key)}")
        try:
            return self.index[key]
        except KeyError:
            raise InvalidInputError(f"invalid cop positions {cops}") from None

    def depth(self, state: GameState) -> int:
        table = self.cop_depth if state.cops_to_move else self.robber_depth
        return int(table[self._row(state.cops), state.robber])

    def is_cop_win(self, state: GameState) -> bool:
        return self.depth(state) != UNSOLVED

    def best_cop_move(self, cops, robber: int) -> tuple[int, ...] | None:
        """Labelled cop move minimizing the robber-to-move depth, or None when
        the position is a robber win. Ties go to the lexicographically least move."""
        best, best_key = None, None
        for move in itertools.product(*(self._nbhd[c] for c in cops)):
            d = int(self.robber_depth[self.index[tuple(sorted(move))], robber])
            if d == UNSOLVED:
                continue
            key = (d, move)
            if best_key is None or key < best_key:
                best, best_key = move, key
        return best

    def best_robber_move(self, cops, robber: int) -> int:
        """Robber reply after the cops moved: avoid capture as long as possible,
        stay out of the win region when he can."""
        row = self._row(cops)
        best, best_key = None, None
        for x in self._nbhd[robber]:
            d = int(self.cop_depth[row, x])
            key = (0, 0, x) if d == UNSOLVED else (1, -d, x)
            if best_key is None or key < best_key:
                best, best_key = x, key
        return best

    def best_robber_start(self, cops) -> int:
        row = self._row(cops)
        depths = self.cop_depth[row]
        free = np.flatnonzero(depths == UNSOLVED)
        if len(free):
            return int(free[0])
        return int(np.argmax(depths))


def k_cop_win(g, k: int, budget: int | None = None) -> CopWinSolver:
    return CopWinSolver(g, k, budget)


@dataclass
class CopNumberResult:
    cop_number: int
    states_explored: int
    capture_depth: int
    solver: CopWinSolver

    def as_dict(self) -> dict:
        return {"k": self.cop_number, "cop_win": True, "states_explored": self.states_explored,
                "capture_depth": self.capture_depth}


def cop_number(g, k_max: int | None = None, budget: int | None = None) -> CopNumberResult:
    """Least k for which k cops win. Raises BoundExceededError past ``k_max``."""
    k_max = g.n if k_max is None else k_max
    if k_max < 1:
        raise InvalidInputError("k_max must be >= 1")
    explored = 0
    for k in range(1, k_max + 1):
        solver = CopWinSolver(g, k, budget)
        explored += solver.states
        if solver.cops_win:
            return CopNumberResult(k, explored, solver.capture_depth, solver)
    raise BoundExceededError(k_max)

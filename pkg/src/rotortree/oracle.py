"""Brute-force references: plain simulation and exhaustive strategy enumeration.

Nothing here calls the return-flow machinery; everything is decided by
running rotor walks.
"""
from __future__ import annotations

import itertools
import math
from collections import deque
from dataclasses import dataclass
from typing import Mapping

from .graph import Config, RotorGraph
from .instance import Instance
from .returnflow import return_flow_oracle
from .walk import ParticleState, run_maximal_walk


@dataclass(frozen=True)
class EnumerationBudget:
    max_strategy_count: int = 4096
    max_steps: int | None = None

    def __post_init__(self):
        if self.max_strategy_count <= 0 or (self.max_steps is not None and self.max_steps <= 0):
            raise ValueError("budget values must be positive")


class BudgetExceeded(RuntimeError):
    pass


def exit_by_simulation(g: RotorGraph, cfg: Config, u: int, budget: EnumerationBudget | None = None):
    """Exit sink of u, or the string ``"cap_hit"`` / ``"trapped"``."""
    cap = budget.max_steps if budget else None
    out = run_maximal_walk(g, ParticleState(tuple(cfg), u), cap=cap)
    if out.status == "cap":
        return "cap_hit"
    return out.exit if out.status == "sink" else "trapped"


def exit_pattern_by_simulation(g: RotorGraph, cfg: Config) -> list:
    return [exit_by_simulation(g, cfg, u) for u in range(g.n)]


def _play(inst: Instance, choice: Mapping[int, int], u0: int, graph: RotorGraph | None = None) -> int:
    g = graph or inst.graph
    cfg = list(inst.full_config())
    for v, a in choice.items():
        cfg[v] = a
    out = run_maximal_walk(g, ParticleState(tuple(cfg), u0))
    return inst.value[out.exit] if out.status == "sink" else 0


def _space(inst: Instance, who: str, budget: EnumerationBudget) -> tuple[list[int], list[tuple[int, ...]]]:
    vs = inst.owned(who)
    size = math.prod(len(inst.graph.rotor[v]) for v in vs)
    if size > budget.max_strategy_count:
        raise BudgetExceeded(f"{who} strategy space {size} exceeds budget {budget.max_strategy_count}")
    return vs, list(itertools.product(*(inst.graph.rotor[v] for v in vs)))


def enumerate_one_player(inst: Instance, u0: int, budget: EnumerationBudget | None = None):
    """Optimal value and every optimal MAX strategy, by trying all of them."""
    budget = budget or EnumerationBudget()
    vs, space = _space(inst, "max", budget)
    best, arg = -1, []
    for combo in space:
        s = dict(zip(vs, combo))
        x = _play(inst, s, u0)
        if x > best:
            best, arg = x, [s]
        elif x == best:
            arg.append(s)
    return best, arg


def enumerate_two_player(inst: Instance, u0: int, budget: EnumerationBudget | None = None) -> tuple[int, int]:
    """(max over sigma of min over tau, min over tau of max over sigma)."""
    budget = budget or EnumerationBudget(1024)
    vmax, smax = _space(inst, "max", budget)
    vmin, smin = _space(inst, "min", budget)
    grid = [[_play(inst, {**dict(zip(vmax, a)), **dict(zip(vmin, b))}, u0) for b in smin] for a in smax]
    maximin = max(min(row) for row in grid)
    minimax = min(max(grid[i][j] for i in range(len(smax))) for j in range(len(smin)))
    return maximin, minimax


def value_grid(inst: Instance, u0: int, budget: EnumerationBudget | None = None):
    """Full payoff matrix, rows indexed by MAX strategies and columns by MIN strategies."""
    budget = budget or EnumerationBudget(1024)
    vmax, smax = _space(inst, "max", budget)
    vmin, smin = _space(inst, "min", budget)
    rows = [dict(zip(vmax, a)) for a in smax]
    cols = [dict(zip(vmin, b)) for b in smin]
    return rows, cols, [[_play(inst, {**r, **c}, u0) for c in cols] for r in rows]


def return_flow_reference(g: RotorGraph, cfg: Config, u: int, v: int):
    return return_flow_oracle(g, cfg, u, v)


def enumerate_free_rotor_order(inst: Instance, u0: int, budget: EnumerationBudget | None = None) -> int:
    """Optimum when MAX picks a rotor order and a start arc at each owned vertex."""
    budget = budget or EnumerationBudget()
    g = inst.graph
    vs = inst.owned("max")
    perms = [list(itertools.permutations(g.rotor[v])) for v in vs]
    if math.prod(len(p) for p in perms) > budget.max_strategy_count:
        raise BudgetExceeded("rotor-order space exceeds budget")
    best = 0
    for combo in itertools.product(*perms):
        h = g
        for v, order in zip(vs, combo):
            h = h.with_rotor(v, order)
        best = max(best, _play(inst, {v: order[0] for v, order in zip(vs, combo)}, u0, graph=h))
    return best


def per_visit_value(inst: Instance, u0: int, max_states: int = 10**6) -> int:
    """Optimum when MAX picks any out-arc at every visit of an owned vertex.

    Search over states (position, rotors of unowned vertices); the answer is
    the best sink value reachable at all.
    """
    g = inst.graph
    owned = set(inst.owned("max"))
    free = [u for u in range(g.n) if not g.sink[u] and u not in owned]
    slot = {u: i for i, u in enumerate(free)}
    cfg0 = inst.full_config()
    start = (u0, tuple(cfg0[u] for u in free))
    seen = {start}
    todo = deque([start])
    best = 0
    while todo:
        u, rot = todo.popleft()
        if g.sink[u]:
            best = max(best, inst.value[u])
            continue
        if u in owned:
            nxt = [(g.head[a], rot) for a in g.rotor[u]]
        else:
            a = rot[slot[u]]
            r2 = list(rot)
            r2[slot[u]] = g.succ[a]
            nxt = [(g.head[a], tuple(r2))]
        for st in nxt:
            if st not in seen:
                if len(seen) >= max_states:
                    raise BudgetExceeded("state space too large")
                seen.add(st)
                todo.append(st)
    return best

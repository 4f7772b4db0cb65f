"""Rotor walks with move-then-turn semantics, cycle pushing and exit patterns."""
from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Callable, NamedTuple, Sequence

from .graph import Config, RotorGraph, reaches_sink, validate_config


class ParticleState(NamedTuple):
    config: Config
    position: int


class NonStoppingError(ValueError):
    pass


class CapExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class WalkOutcome:
    final_config: Config
    position: int
    exit: int | None  # sink reached, or None
    steps: int
    status: str  # "sink", "trapped" (no sink reachable any more) or "cap"
    flows: list[int] | None = None  # per arc
    trace: list[int] | None = None  # visited vertices, start included


def routing_step(g: RotorGraph, state: ParticleState) -> ParticleState:
    """Move along rho(u), then turn rho(u) to its successor."""
    cfg, u = state
    if g.sink[u]:
        raise ValueError(f"particle is on sink {g.names[u]}")
    a = cfg[u]
    new = list(cfg)
    new[u] = g.succ[a]
    return ParticleState(tuple(new), g.head[a])


def step_bound(g: RotorGraph) -> int:
    """Coarse bound on walk length in a stopping graph."""
    return math.prod(len(g.rotor[u]) for u in g.plain()) * g.n


def run_maximal_walk(
    g: RotorGraph,
    state: ParticleState,
    *,
    cap: int | None = None,
    record_trace: bool = False,
    record_flows: bool = False,
    on_visit: Callable[[int], None] | None = None,
) -> WalkOutcome:
    """Route the particle until it reaches a sink.

    A particle that can no longer reach any sink is reported as
    ``trapped``: a walk visiting some vertex forever visits all its
    out-neighbors forever, so it cannot escape once it enters such a region.
    """
    cfg, u = state
    errs = validate_config(g, cfg)
    if errs:
        raise ValueError("; ".join(errs))
    rho = list(cfg)
    ok = reaches_sink(g)
    succ, head, sink = g.succ, g.head, g.sink
    flows = [0] * g.m if record_flows else None
    trace = [u] if record_trace else None
    if on_visit is not None:
        on_visit(u)
    steps = 0
    limit = cap if cap is not None else -1
    status = "sink"
    # the fast loop covers the common case without hooks
    if flows is None and trace is None and on_visit is None:
        while not sink[u]:
            if not ok[u]:
                status = "trapped"
                break
            if steps == limit:
                status = "cap"
                break
            a = rho[u]
            rho[u] = succ[a]
            u = head[a]
            steps += 1
    else:
        while not sink[u]:
            if not ok[u]:
                status = "trapped"
                break
            if steps == limit:
                status = "cap"
                break
            a = rho[u]
            rho[u] = succ[a]
            u = head[a]
            steps += 1
            if flows is not None:
                flows[a] += 1
            if trace is not None:
                trace.append(u)
            if on_visit is not None:
                on_visit(u)
    return WalkOutcome(tuple(rho), u, u if status == "sink" else None, steps, status, flows, trace)


# -- cycle pushing ------------------------------------------------------

def all_cycles(g: RotorGraph, cfg: Sequence[int]) -> list[tuple[int, ...]]:
    """Every cycle of G(rho), each listed from its lowest vertex, ordered by discovery from vertex 0 up."""
    color = [0] * g.n  # 0 new, 1 on current path, 2 done
    cycles = []
    for s in range(g.n):
        if color[s]:
            continue
        path = []
        u = s
        while not g.sink[u] and color[u] == 0:
            color[u] = 1
            path.append(u)
            u = g.head[cfg[u]]
        if not g.sink[u] and color[u] == 1:
            cyc = path[path.index(u):]
            k = cyc.index(min(cyc))
            cycles.append(tuple(cyc[k:] + cyc[:k]))
        for x in path:
            color[x] = 2
    return cycles


def find_cycle(g: RotorGraph, cfg: Sequence[int]) -> tuple[int, ...] | None:
    cs = all_cycles(g, cfg)
    return cs[0] if cs else None


def cycle_push(g: RotorGraph, cfg: Sequence[int], cycle: Sequence[int]) -> Config:
    k = len(cycle)
    for i, u in enumerate(cycle):
        if g.sink[u] or g.head[cfg[u]] != cycle[(i + 1) % k]:
            raise ValueError("cycle is not in G(rho)")
    new = list(cfg)
    for u in cycle:
        new[u] = g.succ[cfg[u]]
    return tuple(new)


def destination_forest_by_pushing(
    g: RotorGraph,
    cfg: Sequence[int],
    order_policy: str = "first-found",
    seed: int | None = None,
    cap: int | None = None,
) -> Config:
    """Push cycles until G(rho) is acyclic.

    ``order_policy`` is ``first-found``, ``lowest-vertex`` or ``random``.
    Non-stopping graphs are refused up front; ``cap`` bounds the number of
    pushes and defaults to the walk-step bound.
    """
    if not all(reaches_sink(g)):
        raise NonStoppingError("cycle pushing does not terminate on a non-stopping graph")
    if cap is None:
        cap = step_bound(g)
    rng = random.Random(seed)
    cur = tuple(cfg)
    pushes = 0
    while True:
        cs = all_cycles(g, cur)
        if not cs:
            return cur
        if pushes >= cap:
            raise CapExceeded(f"push cap {cap} exceeded")
        if order_policy == "first-found":
            c = cs[0]
        elif order_policy == "lowest-vertex":
            c = min(cs)
        elif order_policy == "random":
            c = rng.choice(cs)
        else:
            raise ValueError(f"unknown order policy {order_policy!r}")
        cur = cycle_push(g, cur, c)
        pushes += 1


def exit_pattern_from_acyclic(g: RotorGraph, cfg: Sequence[int]) -> list[int]:
    """Per vertex, the sink at the end of its rho-path."""
    out = [-1] * g.n
    state = [0] * g.n
    for s in range(g.n):
        if out[s] >= 0:
            continue
        path = []
        u = s
        while out[u] < 0 and not g.sink[u]:
            if state[u]:
                raise ValueError("configuration is not acyclic")
            state[u] = 1
            path.append(u)
            u = g.head[cfg[u]]
        end = u if g.sink[u] else out[u]
        for x in path:
            out[x] = end
        out[u] = end
    return out


def exit_pattern(g: RotorGraph, cfg: Sequence[int]) -> list[int]:
    return exit_pattern_from_acyclic(g, destination_forest_by_pushing(g, cfg))

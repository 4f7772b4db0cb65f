"""Return flows on tree-like multigraphs and the linear destination algorithm.

The return flow r(u,v) counts the crossings of u->v in the walk started at
u inside the (u,v)-subtree, where u keeps a single arc to v. Routines at a
vertex turn the return flows of its neighbours into the vertex's last arc
in the Destination Forest and the per-neighbour flows.

Conventions used throughout:

* tables are dicts keyed by shadow edges (u, v) with :data:`~rotortree.counts.INF`
  for infinite entries;
* ``RoutineResult.flows`` includes the final crossing, so
  ``flows[dest] == r[dest]``.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Mapping, Sequence

from .counts import INF, Count
from .graph import Config, RotorGraph, SubGraph, is_stopping, is_tree_like
from .walk import ParticleState, run_maximal_walk

Table = dict[tuple[int, int], Count]


class NotTreeLike(ValueError):
    pass


@dataclass(frozen=True)
class RoutineResult:
    last_arc: int
    flows: dict[int, Count]  # neighbour -> crossings, final crossing included


# -- subtrees and the simulation oracle ---------------------------------

def subtree_vertices(g: RotorGraph, u: int, v: int) -> list[int]:
    """Vertices of the shadow component of v once u is removed."""
    seen = {u, v}
    todo = [v]
    while todo:
        x = todo.pop()
        for y in g.neighbors(x):
            if y not in seen:
                seen.add(y)
                todo.append(y)
    seen.discard(u)
    return sorted(seen)


def build_subtree(g: RotorGraph, u: int, v: int) -> SubGraph:
    """The (u,v)-subtree: v's side of the tree plus u holding one arc to v."""
    if not g.has_edge(u, v):
        raise ValueError(f"({g.names[u]},{g.names[v]}) is not an arc of the shadow")
    side = subtree_vertices(g, u, v)
    keep = set(side)
    vs = [u] + side
    vmap = {x: i for i, x in enumerate(vs)}
    kept = g.arcs_between(u, v)[0]
    tail, head, anames, amap = [], [], [], {}
    for a in range(g.m):
        t, h = g.tail[a], g.head[a]
        if a == kept or (t in keep and h in vmap):
            amap[a] = len(tail)
            tail.append(vmap[t])
            head.append(vmap[h])
            anames.append(g.arc_names[a])
    rotor = [tuple(amap[a] for a in g.rotor[x] if a in amap) for x in vs]
    sub = RotorGraph([g.names[x] for x in vs], [g.sink[x] for x in vs], tail, head, rotor, anames)
    return SubGraph(sub, vmap, amap)


def return_flow_oracle(g: RotorGraph, cfg: Sequence[int], u: int, v: int, cap: int | None = None) -> Count:
    """r(u,v) by simulating the walk from u in the (u,v)-subtree."""
    if g.sink[u]:
        return 0
    sub = build_subtree(g, u, v)
    h = sub.graph
    if not is_stopping(h):
        return INF
    c = [-1] * h.n
    for x, i in sub.vmap.items():
        if not h.sink[i]:
            c[i] = sub.amap[cfg[x]] if cfg[x] in sub.amap else h.rotor[i][0]
    out = run_maximal_walk(h, ParticleState(tuple(c), 0), cap=cap, record_flows=True)
    if out.status != "sink":
        raise RuntimeError("walk in a stopping subtree did not reach a sink")
    return out.flows[sub.amap[g.arcs_between(u, v)[0]]]


# -- routines -------------------------------------------------------------

def _check_r(g: RotorGraph, u: int, r: Mapping[int, Count]) -> None:
    nb = g.out_nbrs[u]
    missing = [w for w in nb if w not in r]
    if missing:
        raise ValueError(f"return flows missing for neighbours {missing} of {g.names[u]}")
    if all(r[w] == INF for w in nb):
        raise ValueError(f"all return flows at {g.names[u]} are infinite")
    if any(r[w] < 1 for w in nb):
        raise ValueError("return flows at a plain vertex must be at least 1")


def revolving_routine(g: RotorGraph, u: int, r: Mapping[int, Count], start_arc: int | None = None,
                      counters: Counter | None = None) -> RoutineResult:
    """Literal revolving routine: one arc at a time until a head with r = 1."""
    _check_r(g, u, r)
    if counters is not None:
        counters["routine"] += 1
    a = start_arc if start_arc is not None else g.rotor[u][0]
    rem = dict(r)
    flows = {w: 0 for w in g.out_nbrs[u]}
    while rem[g.head[a]] != 1:
        w = g.head[a]
        if rem[w] != INF:
            rem[w] -= 1
        flows[w] += 1
        a = g.succ[a]
    flows[g.head[a]] += 1
    return RoutineResult(a, flows)


def improved_revolving_routine(g: RotorGraph, u: int, r: Mapping[int, Count], start_arc: int | None = None,
                               counters: Counter | None = None) -> RoutineResult:
    """Revolving routine that skips whole turns by integer division.

    With m(v) arcs toward v, at most floor((r(v)-1)/m(v)) full turns can be
    taken before v is exhausted, so the minimum of these quotients over
    finite neighbours is skipped in one go. Every remaining return flow is
    then at least 1 and the finish takes less than one more turn.
    """
    _check_r(g, u, r)
    if counters is not None:
        counters["routine"] += 1
    a = start_arc if start_arc is not None else g.rotor[u][0]
    nb = g.out_nbrs[u]
    m = {w: g.mult[(u, w)] for w in nb}
    q = min((r[w] - 1) // m[w] for w in nb if r[w] != INF)
    rem = {w: (r[w] - q * m[w] if r[w] != INF else INF) for w in nb}
    flows: dict[int, Count] = {w: q * m[w] for w in nb}
    while rem[g.head[a]] != 1:
        w = g.head[a]
        if rem[w] != INF:
            rem[w] -= 1
        flows[w] += 1
        a = g.succ[a]
    flows[g.head[a]] += 1
    return RoutineResult(a, flows)


# -- propagation --------------------------------------------------------

def propagate_return_flow(g: RotorGraph, cfg: Sequence[int], table: Mapping[tuple[int, int], Count],
                          u: int, v: int, counters: Counter | None = None) -> Count:
    """r(u,v) from the return flows r(v,w) of v's other neighbours.

    The unknown r(v,u) is replaced by a placeholder large enough never to
    be exhausted within the final partial turn, which is the same as
    treating it as infinite.
    """
    if g.sink[v] or not g.has_edge(v, u):
        return 1
    kids = [w for w in g.out_nbrs[v] if w != u]
    try:
        rs = {w: table[(v, w)] for w in kids}
    except KeyError as e:
        raise ValueError(f"table lacks return flow {e.args[0]}") from None
    if all(x == INF for x in rs.values()):
        return INF
    q = min((x - 1) // g.mult[(v, w)] for w, x in rs.items() if x != INF)
    rs[u] = (q + 1) * g.mult[(v, u)] + 1
    res = improved_revolving_routine(g, v, rs, cfg[v], counters)
    if counters is not None:
        counters[("routine", v)] += 1
    return res.flows[u] + 1


def retropropagate(g: RotorGraph, cfg: Sequence[int], table: Mapping[tuple[int, int], Count], u: int,
                   counters: Counter | None = None) -> tuple[int, dict[tuple[int, int], Count]]:
    """Run the routine at u once; return D(rho)(u) and r(w,u) for all w in in-neighbours."""
    if g.sink[u]:
        return -1, {(w, u): 1 for w in g.in_nbrs[u]}
    try:
        rs = {v: table[(u, v)] for v in g.out_nbrs[u]}
    except KeyError as e:
        raise ValueError(f"table lacks return flow {e.args[0]}") from None
    res = improved_revolving_routine(g, u, rs, cfg[u], counters)
    if counters is not None:
        counters[("routine", u)] += 1
    v0 = g.head[res.last_arc]
    out = {}
    for w in g.in_nbrs[u]:
        if not g.has_edge(u, w):
            out[(w, u)] = 1
        elif w != v0:
            out[(w, u)] = res.flows[w] + 1
        else:
            out[(w, u)] = propagate_return_flow(g, cfg, table, w, u, counters)
    return res.last_arc, out


def bfs_tree(g: RotorGraph, root: int) -> tuple[list[int], list[int], list[tuple[int, int]]]:
    """BFS order, parent array and (parent, child) edges in discovery order."""
    parent = [-1] * g.n
    order = [root]
    seen = [False] * g.n
    seen[root] = True
    edges = []
    i = 0
    while i < len(order):
        x = order[i]
        i += 1
        for y in sorted(g.neighbors(x), key=lambda y: g.edge_arc_id(x, y)):
            if not seen[y]:
                seen[y] = True
                parent[y] = x
                order.append(y)
                edges.append((x, y))
    return order, parent, edges


@dataclass
class DestinationResult:
    destination: Config  # D(rho); -1 at sinks
    table: Table  # return flows on every shadow arc
    root: int
    counters: Counter

    def exits(self, g: RotorGraph) -> list[int]:
        from .walk import exit_pattern_from_acyclic
        return exit_pattern_from_acyclic(g, self.destination)


def _require_tree(g: RotorGraph, need_stopping: bool = True) -> None:
    if not is_tree_like(g):
        raise NotTreeLike("graph is not tree-like")
    if need_stopping and not is_stopping(g):
        from .walk import NonStoppingError
        raise NonStoppingError("graph is not stopping")


def compute_destination_forest(g: RotorGraph, cfg: Sequence[int], root: int | None = None) -> DestinationResult:
    """Destination Forest and all return flows in linear time on a stopping tree-like graph.

    Phase 1 fills edges directed away from the root, deepest first; phase 2
    walks the BFS order and retropropagates, which also yields D(rho)(u).
    """
    _require_tree(g)
    if root is None:
        root = next(u for u in range(g.n) if not g.sink[u]) if g.plain() else 0
    counters: Counter = Counter()
    order, parent, edges = bfs_tree(g, root)
    table: Table = {}
    for (p, c) in reversed(edges):
        if g.has_edge(p, c):
            table[(p, c)] = propagate_return_flow(g, cfg, table, p, c, counters)
    dest = [-1] * g.n
    for u in order:
        a, upd = retropropagate(g, cfg, table, u, counters)
        dest[u] = a
        for e, x in upd.items():
            table.setdefault(e, x)
    return DestinationResult(tuple(dest), table, root, counters)


def routine_calls_per_vertex(res: DestinationResult) -> dict[int, int]:
    return {k[1]: v for k, v in res.counters.items() if isinstance(k, tuple) and k[0] == "routine"}


def flows_from_start(g: RotorGraph, cfg: Sequence[int], start: int, table: Mapping[tuple[int, int], Count]) -> Table:
    """Arc-class flows F(u,w) of the full walk started at ``start``.

    Top-down from ``start``: a vertex entered N times from its parent runs
    its routine with N standing in for the parent's return flow.
    """
    if g.sink[start]:
        return {}
    order, parent, _ = bfs_tree(g, start)
    flow: Table = {}
    for u in order:
        if g.sink[u]:
            continue
        p = parent[u]
        if p >= 0:
            n_in = flow.get((p, u), 0)
            if n_in == 0:
                continue
        rs = {}
        for w in g.out_nbrs[u]:
            rs[w] = n_in if w == p else table[(u, w)]
        res = improved_revolving_routine(g, u, rs, cfg[u])
        for w, f in res.flows.items():
            flow[(u, w)] = f
    return flow

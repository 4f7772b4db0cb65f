"""Fast paths for simple tree-like graphs, where each neighbour has one arc.

Return flows follow from minima instead of routines: the destination of u
is the first neighbour of minimal return flow in rotor order, and
r(u,v) = min over w != u of r(v,w) + B_v(rho(v), (v,u), (v,w)).
Neighbours stand in for arcs throughout.
"""
from __future__ import annotations

from collections import Counter
from typing import Iterable, Mapping, Sequence

from .counts import INF, Count
from .games import Prepared, Summary, _check_binary, prepare
from .graph import RotorGraph, is_simple, is_stopping, is_tree_like
from .instance import Instance
from .returnflow import DestinationResult, NotTreeLike, RoutineResult, Table, bfs_tree
from .walk import NonStoppingError


def rotor_distance(g: RotorGraph, u: int, a: int, b: int) -> int:
    """Number of turns from arc a to arc b at u."""
    if g.tail[a] != u or g.tail[b] != u:
        raise ValueError("arcs must leave u")
    return (g.pos[b] - g.pos[a]) % len(g.rotor[u])


def b_operator(g: RotorGraph, u: int, a: int, b: int, c: int) -> int:
    """1 iff b is met no later than c when turning from a."""
    return int(rotor_distance(g, u, a, b) <= rotor_distance(g, u, a, c))


def _arc(g: RotorGraph, u: int, w: int) -> int:
    return g.arcs_between(u, w)[0]


def first_min(g: RotorGraph, u: int, start_arc: int, vals: Mapping[int, Count], among: Iterable[int] | None = None):
    """First neighbour of minimal value, turning from start_arc."""
    allowed = set(vals) if among is None else set(among)
    best = None
    a = start_arc
    for _ in range(len(g.rotor[u])):
        w = g.head[a]
        if w in allowed and (best is None or vals[w] < vals[best]):
            best = w
        a = g.succ[a]
    return best


def flows_from_return_flows_simple(g: RotorGraph, u: int, start_arc: int, r: Mapping[int, Count]) -> RoutineResult:
    """Destination and flows at a simple vertex without running the routine.

    Counts include the final crossing, as for the routines.
    """
    nb = g.out_nbrs[u]
    if all(r[w] == INF for w in nb):
        raise ValueError(f"all return flows at {g.names[u]} are infinite")
    v = first_min(g, u, start_arc, r, nb)
    av = _arc(g, u, v)
    flows = {w: r[v] - b_operator(g, u, start_arc, av, _arc(g, u, w)) for w in nb}
    flows[v] = r[v]
    return RoutineResult(av, flows)


def eq1(g: RotorGraph, cfg: Sequence[int], table: Mapping[tuple[int, int], Count], u: int, v: int,
        counters: Counter | None = None, tag: str = "eq1") -> Count:
    """r(u,v) from the return flows of v's other neighbours by the min formula."""
    if g.sink[v] or not g.has_edge(v, u):
        return 1
    if counters is not None:
        counters[(tag, v)] += 1
    rho = cfg[v]
    avu = _arc(g, v, u)
    best = INF
    for w in g.out_nbrs[v]:
        if w == u:
            continue
        x = table[(v, w)]
        if x != INF:
            best = min(best, x + b_operator(g, v, rho, avu, _arc(g, v, w)))
    return best


propagate_return_flow_simple = eq1


def retropropagate_simple(g: RotorGraph, cfg: Sequence[int], table: Mapping[tuple[int, int], Count], v: int,
                          counters: Counter | None = None) -> tuple[int, dict[tuple[int, int], Count]]:
    """D(rho)(v) and r(w,v) for every in-neighbour w, with two min evaluations."""
    if g.sink[v]:
        return -1, {(w, v): 1 for w in g.in_nbrs[v]}
    rho = cfg[v]
    rs = {w: table[(v, w)] for w in g.out_nbrs[v]}
    if counters is not None:
        counters[("eq1", v)] += 1
    w0 = first_min(g, v, rho, rs)
    a0 = _arc(g, v, w0)
    out = {}
    for w in g.in_nbrs[v]:
        if not g.has_edge(v, w):
            out[(w, v)] = 1
        elif w != w0:
            out[(w, v)] = rs[w0] + b_operator(g, v, rho, _arc(g, v, w), a0) if rs[w0] != INF else INF
        else:
            out[(w, v)] = eq1(g, cfg, table, w, v, counters)
    return a0, out


def _require_simple_tree(g: RotorGraph, stopping: bool = True) -> None:
    if not is_simple(g):
        raise ValueError("graph is not simple")
    if not is_tree_like(g):
        raise NotTreeLike("graph is not tree-like")
    if stopping and not is_stopping(g):
        raise NonStoppingError("graph is not stopping")


def destination_forest_simple(g: RotorGraph, cfg: Sequence[int], root: int | None = None) -> DestinationResult:
    """Destination Forest of a stopping simple tree-like graph in O(|V|)."""
    _require_simple_tree(g)
    if root is None:
        root = next(u for u in range(g.n) if not g.sink[u]) if g.plain() else 0
    counters: Counter = Counter()
    order, parent, edges = bfs_tree(g, root)
    table: Table = {}
    for (p, c) in reversed(edges):
        if g.has_edge(p, c):
            table[(p, c)] = eq1(g, cfg, table, p, c, counters, "eq1_forward")
    dest = [-1] * g.n
    for u in order:
        a, upd = retropropagate_simple(g, cfg, table, u, counters)
        dest[u] = a
        for e, x in upd.items():
            table.setdefault(e, x)
    return DestinationResult(tuple(dest), table, root, counters)


def eq1_calls_per_vertex(res: DestinationResult) -> dict[int, int]:
    """Min-formula evaluations made while retropropagating, per vertex."""
    return {k[1]: v for k, v in res.counters.items() if isinstance(k, tuple) and k[0] == "eq1"}


# -- one-player games on simple graphs ------------------------------------

def _summary(g: RotorGraph, cfg, owner, value, u: int | None, v: int, summ: Mapping) -> Summary:
    """Optimal (val, r) of the (u,v)-subtree from the children's summaries.

    A random vertex ends at its first minimal child. An owned vertex takes
    its preferred value if some child of minimal return flow has it, pointing
    at that child so that nothing returns to u early; otherwise it points
    at u to return as often as possible.
    """
    if g.sink[v]:
        return Summary(value[v], 1)
    back = u is not None and g.has_edge(v, u)
    kids = [w for w in g.out_nbrs[v] if w != u]
    rs = {w: summ[(v, w)].r for w in kids}
    if not kids or all(x == INF for x in rs.values()):
        return Summary(0, INF if back else 1, None if owner[v] == "rand" else g.rotor[v][0])
    if owner[v] == "rand":
        wf = first_min(g, v, cfg[v], rs)
        r = rs[wf] + b_operator(g, v, cfg[v], _arc(g, v, u), _arc(g, v, wf)) if back else 1
        return Summary(summ[(v, wf)].val, r)
    good = 1 if owner[v] == "max" else 0
    low = min(rs.values())
    start = g.rotor[v][0]
    hit = first_min(g, v, start, {w: (0 if rs[w] == low and summ[(v, w)].val == good else 1) for w in kids})
    if rs[hit] == low and summ[(v, hit)].val == good:
        return Summary(good, low if back else 1, _arc(g, v, hit))
    w0 = first_min(g, v, start, rs)
    return Summary(1 - good, low + 1 if back else 1, _arc(g, v, u) if back else _arc(g, v, w0))


def _root_value(g: RotorGraph, cfg, owner, value, u0: int, summ: Mapping) -> int:
    if g.sink[u0]:
        return value[u0]
    return _summary(g, cfg, owner, value, None, u0, summ).val


def one_player_binary_all_vertices(inst: Instance) -> dict[int, int]:
    """Optimal value from every vertex of a simple tree-like binary game.

    Summaries for both orientations of every edge are filled by one pass
    away from an arbitrary root and one pass back, after which each start
    vertex is evaluated locally. Games with MIN vertices are handled with
    the roles swapped.
    """
    _check_binary(inst)
    g = inst.graph
    _require_simple_tree(g)
    cfg, owner, value = inst.full_config(), inst.owner, inst.value
    root = 0
    order, parent, edges = bfs_tree(g, root)
    summ: dict[tuple[int, int], Summary] = {}
    for (p, c) in reversed(edges):
        if g.has_edge(p, c):
            summ[(p, c)] = _summary(g, cfg, owner, value, p, c, summ)
    for v in order:
        if g.sink[v]:
            continue
        _retro_summaries(g, cfg, owner, value, v, summ)
    return {u: _root_value(g, cfg, owner, value, u, summ) for u in range(g.n)}


def _retro_summaries(g, cfg, owner, value, v: int, summ: dict) -> None:
    """Fill (w,v) for every in-neighbour w of v, knowing (v,x) for all out-neighbours x.

    One global scan picks the candidate minimum; only the in-neighbour that
    coincides with it needs a second scan without it.
    """
    rs = {x: summ[(v, x)].r for x in g.out_nbrs[v]}
    finite = any(x != INF for x in rs.values())
    if owner[v] == "rand":
        w0 = first_min(g, v, cfg[v], rs) if finite else None
    else:
        good = 1 if owner[v] == "max" else 0
        low = min(rs.values())
        key = {x: (0 if rs[x] == low and summ[(v, x)].val == good else 1) for x in rs}
        w0 = first_min(g, v, g.rotor[v][0], key) if finite else None
        if w0 is not None and key[w0] == 1:
            w0 = first_min(g, v, g.rotor[v][0], rs)
    for w in g.in_nbrs[v]:
        if (w, v) in summ:
            continue
        if not g.has_edge(v, w):
            summ[(w, v)] = _summary(g, cfg, owner, value, w, v, summ)
        elif w == w0 or w0 is None:
            summ[(w, v)] = _summary(g, cfg, owner, value, w, v, summ)
        else:
            summ[(w, v)] = _summary_excluding_known_min(g, cfg, owner, value, w, v, summ, w0)


def _summary_excluding_known_min(g, cfg, owner, value, u: int, v: int, summ: Mapping, w0: int) -> Summary:
    """Summary of (u,v) when the global candidate w0 differs from u, in O(1)."""
    rs0 = summ[(v, w0)].r
    if owner[v] == "rand":
        return Summary(summ[(v, w0)].val, rs0 + b_operator(g, v, cfg[v], _arc(g, v, u), _arc(g, v, w0)))
    good = 1 if owner[v] == "max" else 0
    if summ[(v, w0)].val == good:
        return Summary(good, rs0, _arc(g, v, w0))
    return Summary(1 - good, rs0 + 1, _arc(g, v, u))


# -- sigma_max and access flows ------------------------------------------

def sigma_max(inst: Instance, u0: int) -> dict[int, int]:
    """Owned vertices point toward u0 when they can, else at their first arc."""
    g = inst.graph
    _, parent, _ = bfs_tree(g, u0)
    out = {}
    for v in inst.owned("max"):
        p = parent[v]
        out[v] = _arc(g, v, p) if p >= 0 and g.has_edge(v, p) else g.rotor[v][0]
    return out


def return_flows_away(inst: Instance, u0: int, strategy: Mapping[int, int]) -> Table:
    """r(u,v) on every edge directed away from u0 under the given strategy."""
    g = inst.graph
    cfg = list(inst.full_config())
    for v, a in strategy.items():
        cfg[v] = a
    _, _, edges = bfs_tree(g, u0)
    table: Table = {}
    for (p, c) in reversed(edges):
        if g.has_edge(p, c):
            table[(p, c)] = eq1(g, cfg, table, p, c)
    return table


def access_flows(inst: Instance, u0: int) -> Table:
    """acc(u,v) on every edge directed away from u0.

    acc(u,v) is the largest number of crossings of u->v over MAX strategies
    when v bounces the particle straight back. Branches other than the
    target use the sigma_max return flows; the parent side of a vertex acts
    as one more branch whose budget is its own access flow.
    """
    g = inst.graph
    _require_simple_tree(g, stopping=False)
    if inst.owned("min"):
        raise ValueError("access flows are defined for one-player games")
    cfg = list(inst.full_config())
    sig = sigma_max(inst, u0)
    for v, a in sig.items():
        cfg[v] = a
    r = return_flows_away(inst, u0, sig)
    order, parent, _ = bfs_tree(g, u0)
    acc: Table = {}
    for v in order:
        if g.sink[v]:
            continue
        kids = [w for w in g.out_nbrs[v] if w != parent[v]]
        if not kids:
            continue
        p = parent[v]
        if p < 0:
            branch = {w: r[(v, w)] for w in kids}
        else:
            a_in = acc.get((p, v), 0)
            if a_in == 0:
                for w in kids:
                    acc[(v, w)] = 0
                continue
            branch = {w: r[(v, w)] for w in kids}
            if g.has_edge(v, p):
                branch[p] = a_in
        owned = inst.owner[v] == "max"
        rho = cfg[v]

        def term(x: int, target: int) -> Count:
            if branch[x] == INF:
                return INF
            return branch[x] if owned else branch[x] - b_operator(g, v, rho, _arc(g, v, x), _arc(g, v, target))

        x0 = first_min(g, v, rho, branch)
        for w in kids:
            if w != x0:
                acc[(v, w)] = term(x0, w)
            else:
                acc[(v, w)] = min((term(x, w) for x in branch if x != w), default=INF)
    return acc


def one_player_integer_simple(inst: Instance, u0: int) -> int:
    """Best sink value among sinks with positive access flow."""
    p: Prepared = prepare(inst, u0)
    if p.graph.sink[p.root]:
        return p.value[p.root]
    sub = Instance(p.graph, p.cfg, p.owner, tuple(p.value[i] if p.graph.sink[i] else None for i in range(p.graph.n)), p.root)
    acc = access_flows(sub, p.root)
    g = p.graph
    return max((p.value[s] for (x, s), a in acc.items() if g.sink[s] and a > 0), default=0)

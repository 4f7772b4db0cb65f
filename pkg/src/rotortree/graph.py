"""Rotor multigraphs: data model, validation and structural predicates.

Vertices and arcs are dense integer ids; names only matter at the I/O
boundary. A configuration is a tuple indexed by vertex holding the
current arc of every plain vertex and -1 at sinks.
"""
from __future__ import annotations

from collections import deque
from typing import Iterable, Mapping, NamedTuple, Sequence

import networkx as nx

Config = tuple[int, ...]


class RotorGraph:
    """Directed multigraph with a cyclic rotor order at every plain vertex.

    Instances are treated as immutable. Construction only checks that arc
    endpoints exist; every other invariant is reported by :func:`validate`.
    """

    def __init__(
        self,
        names: Sequence[str],
        sink: Sequence[bool],
        tail: Sequence[int],
        head: Sequence[int],
        rotor: Sequence[Sequence[int]] | None = None,
        arc_names: Sequence[str] | None = None,
    ):
        n, m = len(names), len(tail)
        if len(sink) != n or len(head) != m:
            raise ValueError("length mismatch in graph data")
        for a in range(m):
            if not (0 <= tail[a] < n and 0 <= head[a] < n):
                raise ValueError(f"arc {a} has an endpoint outside the vertex set")
        self.names = tuple(names)
        self.sink = tuple(bool(s) for s in sink)
        self.tail = tuple(tail)
        self.head = tuple(head)
        self.arc_names = tuple(arc_names) if arc_names is not None else tuple(f"a{a}" for a in range(m))
        if len(self.arc_names) != m:
            raise ValueError("length mismatch in arc names")
        declared: list[list[int]] = [[] for _ in range(n)]
        for a in range(m):
            declared[tail[a]].append(a)
        self.declared_out = tuple(tuple(x) for x in declared)
        if rotor is None:
            rotor = self.declared_out
        if len(rotor) != n:
            raise ValueError("rotor order needs one entry per vertex")
        self.rotor = tuple(tuple(r) for r in rotor)
        self.index = {name: i for i, name in enumerate(self.names)}
        self.arc_index = {name: a for a, name in enumerate(self.arc_names)}

        # succ/pos are only meaningful when the rotor order is a permutation of A+(u)
        self.succ = [-1] * m
        self.pos = [-1] * m
        for r in self.rotor:
            k = len(r)
            for i, a in enumerate(r):
                if 0 <= a < m:
                    self.succ[a] = r[(i + 1) % k]
                    self.pos[a] = i
        out_nbrs: list[list[int]] = [[] for _ in range(n)]
        in_nbrs: list[list[int]] = [[] for _ in range(n)]
        self.mult: dict[tuple[int, int], int] = {}
        for u in range(n):
            order = self.rotor[u] if set(self.rotor[u]) == set(declared[u]) else declared[u]
            for a in order:
                e = (u, head[a])
                if e not in self.mult:
                    self.mult[e] = 0
                    out_nbrs[u].append(head[a])
                self.mult[e] += 1
        for (u, v) in self.mult:
            in_nbrs[v].append(u)
        self.out_nbrs = tuple(tuple(x) for x in out_nbrs)
        self.in_nbrs = tuple(tuple(sorted(x)) for x in in_nbrs)

    # -- basic views --------------------------------------------------
    @property
    def n(self) -> int:
        return len(self.names)

    @property
    def m(self) -> int:
        return len(self.tail)

    def vertex(self, name: str | int) -> int:
        return name if isinstance(name, int) else self.index[name]

    def arc(self, name: str | int) -> int:
        return name if isinstance(name, int) else self.arc_index[name]

    def plain(self) -> list[int]:
        return [u for u in range(self.n) if not self.sink[u]]

    def sinks(self) -> list[int]:
        return [u for u in range(self.n) if self.sink[u]]

    def has_edge(self, u: int, v: int) -> bool:
        """(u,v) in the simple directed shadow."""
        return (u, v) in self.mult

    def multiplicity(self, u: int, v: int) -> int:
        return self.mult.get((u, v), 0)

    def neighbors(self, u: int) -> list[int]:
        """Neighbors in the undirected shadow, sorted."""
        return sorted(set(self.out_nbrs[u]) | set(self.in_nbrs[u]))

    def arcs_between(self, u: int, v: int) -> list[int]:
        return [a for a in self.rotor[u] if self.head[a] == v]

    def edge_arc_id(self, u: int, v: int) -> int:
        """Smallest arc id joining u and v in either direction (tie-break key)."""
        ids = [a for a in self.declared_out[u] if self.head[a] == v]
        ids += [a for a in self.declared_out[v] if self.head[a] == u]
        return min(ids)

    def initial_config(self) -> Config:
        return tuple(self.rotor[u][0] if not self.sink[u] and self.rotor[u] else -1 for u in range(self.n))

    def config_from_names(self, assign: Mapping[str, str]) -> Config:
        cfg = list(self.initial_config())
        for u, a in assign.items():
            cfg[self.vertex(u)] = self.arc(a)
        return tuple(cfg)

    def config_by_heads(self, assign: Mapping[str, str]) -> Config:
        """Config given as vertex -> head name (first matching arc in rotor order)."""
        cfg = list(self.initial_config())
        for u, v in assign.items():
            ui, vi = self.vertex(u), self.vertex(v)
            cfg[ui] = self.arcs_between(ui, vi)[0]
        return tuple(cfg)

    def with_rotor(self, u: int, order: Sequence[int]) -> RotorGraph:
        rotor = list(self.rotor)
        rotor[u] = tuple(order)
        return RotorGraph(self.names, self.sink, self.tail, self.head, rotor, self.arc_names)

    def __repr__(self) -> str:
        return f"RotorGraph(n={self.n}, m={self.m}, sinks={len(self.sinks())})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, RotorGraph):
            return NotImplemented
        return (self.names, self.sink, self.tail, self.head, self.rotor, self.arc_names) == (
            other.names, other.sink, other.tail, other.head, other.rotor, other.arc_names)

    def __hash__(self) -> int:
        return hash((self.names, self.tail, self.head, self.rotor))


def build_graph(
    vertices: Iterable[tuple[str, bool]],
    arcs: Iterable[tuple[str, str]],
    rotor: Mapping[str, Sequence[int]] | None = None,
    arc_names: Sequence[str] | None = None,
) -> RotorGraph:
    """Build a graph from names. ``vertices`` holds (name, is_sink) pairs."""
    vs = list(vertices)
    names = [v for v, _ in vs]
    idx = {v: i for i, v in enumerate(names)}
    if len(idx) != len(names):
        raise ValueError("duplicate vertex name")
    arcs = list(arcs)
    tail = [idx[t] for t, _ in arcs]
    head = [idx[h] for _, h in arcs]
    rot = None
    if rotor is not None:
        declared = [[a for a in range(len(arcs)) if tail[a] == u] for u in range(len(names))]
        rot = [tuple(rotor[v]) if v in rotor else tuple(declared[i]) for i, v in enumerate(names)]
    return RotorGraph(names, [s for _, s in vs], tail, head, rot, arc_names)


class SubGraph(NamedTuple):
    graph: RotorGraph
    vmap: dict[int, int]  # old vertex -> new vertex
    amap: dict[int, int]  # old arc -> new arc


# -- validation -------------------------------------------------------

def validate(g: RotorGraph) -> list[str]:
    """Every violated invariant, as readable strings. Empty list means ok."""
    out = []
    if not any(g.sink):
        out.append("no sink vertex (S0 is empty)")
    for a in range(g.m):
        if g.tail[a] == g.head[a]:
            out.append(f"loop arc {g.arc_names[a]} at {g.names[g.tail[a]]}")
    for u in range(g.n):
        declared = g.declared_out[u]
        if g.sink[u]:
            if declared:
                out.append(f"sink {g.names[u]} has outgoing arcs")
            if g.rotor[u]:
                out.append(f"sink {g.names[u]} has a rotor order")
            continue
        if not declared:
            out.append(f"plain vertex {g.names[u]} has no outgoing arc")
        r = g.rotor[u]
        if len(set(r)) != len(r) or set(r) != set(declared):
            out.append(f"rotor order at {g.names[u]}: orbit does not cover A+({g.names[u]})")
    return out


def check_valid(g: RotorGraph) -> None:
    errs = validate(g)
    if errs:
        raise ValueError("invalid rotor graph: " + "; ".join(errs))


def validate_config(g: RotorGraph, cfg: Sequence[int]) -> list[str]:
    out = []
    if len(cfg) != g.n:
        return [f"configuration has {len(cfg)} entries for {g.n} vertices"]
    for u in range(g.n):
        if g.sink[u]:
            continue
        a = cfg[u]
        if not (0 <= a < g.m) or g.tail[a] != u:
            out.append(f"configuration at {g.names[u]} is not an outgoing arc")
    return out


def theta(g: RotorGraph, u: int, a: int) -> int:
    if not (0 <= a < g.m) or g.tail[a] != u:
        raise ValueError(f"arc {a} is not outgoing from vertex {u}")
    return g.succ[a]


# -- predicates -------------------------------------------------------

def is_simple(g: RotorGraph) -> bool:
    return all(c == 1 for c in g.mult.values())


def is_tree_like(g: RotorGraph) -> bool:
    if g.n == 0:
        return False
    adj = [g.neighbors(u) for u in range(g.n)]
    edges = sum(len(x) for x in adj) // 2
    if edges != g.n - 1:
        return False
    seen = {0}
    todo = [0]
    while todo:
        u = todo.pop()
        for w in adj[u]:
            if w not in seen:
                seen.add(w)
                todo.append(w)
    if len(seen) != g.n:
        return False
    return all(len(adj[s]) <= 1 for s in g.sinks()) if g.n > 1 else True


def reaches_sink(g: RotorGraph) -> list[bool]:
    """Per vertex: is there a directed path to some sink."""
    ok = [False] * g.n
    todo = deque(g.sinks())
    for s in todo:
        ok[s] = True
    while todo:
        v = todo.popleft()
        for u in g.in_nbrs[v]:
            if not ok[u]:
                ok[u] = True
                todo.append(u)
    return ok


def is_stopping(g: RotorGraph) -> bool:
    return all(reaches_sink(g))


def sink_components(g: RotorGraph) -> list[list[int]]:
    """Strongly connected sets of plain vertices with no escaping arc."""
    d = nx.DiGraph()
    d.add_nodes_from(u for u in range(g.n) if not g.sink[u])
    d.add_edges_from((u, v) for (u, v) in g.mult if not g.sink[u] and not g.sink[v])
    comps = []
    for c in nx.strongly_connected_components(d):
        if all(v in c for u in c for v in g.out_nbrs[u]):
            comps.append(sorted(c))
    comps.sort()
    return comps


def contract_sink_components(g: RotorGraph, cfg: Sequence[int], split: bool = False):
    """Replace every sink component by a fresh sink.

    Returns ``(graph, config, vertex_map)``. With ``split=True`` each tail
    vertex entering a component gets its own copy of the fresh sink, so a
    tree-like input stays a forest whose sinks are leaves; vertex_map then
    sends component members to the first copy.
    """
    comps = sink_components(g)
    if not comps:
        return g, tuple(cfg), {u: u for u in range(g.n)}
    comp_of = {}
    for k, c in enumerate(comps):
        for u in c:
            comp_of[u] = k
    names, sink, vmap = [], [], {}
    for u in range(g.n):
        if u not in comp_of:
            vmap[u] = len(names)
            names.append(g.names[u])
            sink.append(g.sink[u])
    fresh: dict[tuple[int, int], int] = {}

    def fresh_sink(k: int, t: int) -> int:
        key = (k, t if split else -1)
        if key not in fresh:
            base = "sc(" + g.names[comps[k][0]] + ")"
            name = base if not split else f"{base}@{g.names[t]}"
            while name in g.index or name in names:
                name += "'"
            fresh[key] = len(names)
            names.append(name)
            sink.append(True)
        return fresh[key]

    tail, head, anames, amap = [], [], [], {}
    for a in range(g.m):
        t, h = g.tail[a], g.head[a]
        if t in comp_of:
            continue
        amap[a] = len(tail)
        tail.append(vmap[t])
        head.append(fresh_sink(comp_of[h], t) if h in comp_of else vmap[h])
        anames.append(g.arc_names[a])
    for k, c in enumerate(comps):
        first = min((v for (kk, _), v in fresh.items() if kk == k), default=None)
        if first is None:
            first = fresh_sink(k, c[0])
        for u in c:
            vmap[u] = first
    rotor = [() for _ in names]
    for u in range(g.n):
        if u in comp_of:
            continue
        rotor[vmap[u]] = tuple(amap[a] for a in g.rotor[u])
    g2 = RotorGraph(names, sink, tail, head, rotor, anames)
    cfg2 = [-1] * len(names)
    for u in range(g.n):
        if u not in comp_of and not g.sink[u]:
            cfg2[vmap[u]] = amap[cfg[u]]
    return g2, tuple(cfg2), vmap


def induced(g: RotorGraph, vertices: Iterable[int]) -> SubGraph:
    """Subgraph on the given vertices, keeping arcs with both ends inside."""
    vs = sorted(set(vertices))
    vmap = {u: i for i, u in enumerate(vs)}
    tail, head, anames, amap = [], [], [], {}
    for a in range(g.m):
        if g.tail[a] in vmap and g.head[a] in vmap:
            amap[a] = len(tail)
            tail.append(vmap[g.tail[a]])
            head.append(vmap[g.head[a]])
            anames.append(g.arc_names[a])
    rotor = [tuple(amap[a] for a in g.rotor[u] if a in amap) for u in vs]
    sub = RotorGraph([g.names[u] for u in vs], [g.sink[u] for u in vs], tail, head, rotor, anames)
    return SubGraph(sub, vmap, amap)


def restrict_config(cfg: Sequence[int], sub: SubGraph) -> Config:
    out = [-1] * sub.graph.n
    for u, i in sub.vmap.items():
        if cfg[u] >= 0 and cfg[u] in sub.amap:
            out[i] = sub.amap[cfg[u]]
        elif not sub.graph.sink[i] and sub.graph.rotor[i]:
            out[i] = sub.graph.rotor[i][0]
    return tuple(out)


def shadow_components(g: RotorGraph) -> list[list[int]]:
    seen = [False] * g.n
    comps = []
    for s in range(g.n):
        if seen[s]:
            continue
        seen[s] = True
        comp, todo = [s], [s]
        while todo:
            u = todo.pop()
            for w in g.neighbors(u):
                if not seen[w]:
                    seen[w] = True
                    comp.append(w)
                    todo.append(w)
        comps.append(sorted(comp))
    return comps


def split_components(g: RotorGraph) -> list[SubGraph]:
    """One sub-rotor-graph per connected component of the undirected shadow."""
    return [induced(g, c) for c in shadow_components(g)]

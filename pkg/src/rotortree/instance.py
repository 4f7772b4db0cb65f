"""Line-oriented instance format.

::

    # comment
    vertex u0 plain owner=max
    vertex s sink value=1
    arc a0 u0 s
    rotor u0 a0 a1
    config u0 a0
    start u0

Owners are ``rand`` (default), ``max`` or ``min``; sink values default to 0.
A missing rotor line defaults to arc declaration order, a missing config
line at a random vertex defaults to the first arc of its rotor order; both
emit warnings.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import NamedTuple

from .graph import Config, RotorGraph, validate, validate_config

OWNERS = ("rand", "max", "min")


class Diagnostic(NamedTuple):
    line: int  # 1-based; 0 when not tied to a line
    message: str
    severity: str = "error"

    def __str__(self) -> str:
        where = f"line {self.line}: " if self.line else ""
        return f"{self.severity}: {where}{self.message}"


class InstanceError(ValueError):
    def __init__(self, diagnostics: list[Diagnostic]):
        self.diagnostics = diagnostics
        super().__init__("\n".join(str(d) for d in diagnostics))


@dataclass(frozen=True)
class Instance:
    """A rotor graph plus configuration and optional game data."""
    graph: RotorGraph
    config: Config  # -1 where unset (sinks, possibly owned vertices)
    owner: tuple[str, ...]  # "" at sinks
    value: tuple[int | None, ...]  # sink values, None at plain vertices
    start: int | None = None
    warnings: tuple[Diagnostic, ...] = field(default=(), compare=False)

    @classmethod
    def zero_player(cls, g: RotorGraph, cfg: Config, start: int | None = None) -> Instance:
        own = tuple("" if s else "rand" for s in g.sink)
        val = tuple(0 if s else None for s in g.sink)
        return cls(g, tuple(cfg), own, val, start)

    def full_config(self) -> Config:
        g = self.graph
        return tuple(c if c >= 0 or g.sink[u] else g.rotor[u][0] for u, c in enumerate(self.config))

    def owned(self, who: str) -> list[int]:
        return [u for u, o in enumerate(self.owner) if o == who]

    @property
    def is_game(self) -> bool:
        return any(o in ("max", "min") for o in self.owner)

    def with_start(self, start: int) -> Instance:
        return replace(self, start=start)


def _bad(line: int, msg: str) -> Diagnostic:
    return Diagnostic(line, msg)


def parse_instance(text: str) -> Instance:
    """Parse the text format; raises :class:`InstanceError` with line-numbered diagnostics."""
    diags: list[Diagnostic] = []
    warns: list[Diagnostic] = []
    vertices: dict[str, tuple[int, bool, str, int]] = {}  # name -> (line, sink, owner, value)
    vorder: list[str] = []
    arcs: dict[str, tuple[int, str, str]] = {}
    aorder: list[str] = []
    rotors: dict[str, tuple[int, list[str]]] = {}
    configs: dict[str, tuple[int, str]] = {}
    start: tuple[int, str] | None = None

    for ln, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        kw = tok[0].lower()
        if kw == "vertex":
            if len(tok) < 3 or tok[2] not in ("plain", "sink"):
                diags.append(_bad(ln, "expected: vertex NAME plain|sink [owner=..] [value=..]"))
                continue
            name, is_sink = tok[1], tok[2] == "sink"
            owner, value = ("" if is_sink else "rand"), 0
            for opt in tok[3:]:
                k, _, v = opt.partition("=")
                if k == "owner" and not is_sink:
                    if v not in OWNERS:
                        diags.append(_bad(ln, f"unknown owner {v!r}"))
                    owner = v
                elif k == "value" and is_sink:
                    try:
                        value = int(v)
                    except ValueError:
                        diags.append(_bad(ln, f"value must be an integer, got {v!r}"))
                        continue
                    if value < 0:
                        diags.append(_bad(ln, "sink values must be nonnegative"))
                else:
                    diags.append(_bad(ln, f"unexpected attribute {opt!r}"))
            if name in vertices:
                diags.append(_bad(ln, f"duplicate vertex {name!r}"))
                continue
            vertices[name] = (ln, is_sink, owner, value)
            vorder.append(name)
        elif kw == "arc":
            if len(tok) != 4:
                diags.append(_bad(ln, "expected: arc ID TAIL HEAD"))
                continue
            if tok[1] in arcs:
                diags.append(_bad(ln, f"duplicate arc id {tok[1]!r} (first declared on line {arcs[tok[1]][0]})"))
                continue
            arcs[tok[1]] = (ln, tok[2], tok[3])
            aorder.append(tok[1])
        elif kw == "rotor":
            if len(tok) < 2:
                diags.append(_bad(ln, "expected: rotor VERTEX ARC..."))
                continue
            if tok[1] in rotors:
                diags.append(_bad(ln, f"second rotor line for {tok[1]!r}"))
                continue
            rotors[tok[1]] = (ln, tok[2:])
        elif kw == "config":
            if len(tok) != 3:
                diags.append(_bad(ln, "expected: config VERTEX ARC"))
                continue
            configs[tok[1]] = (ln, tok[2])
        elif kw == "start":
            if len(tok) != 2:
                diags.append(_bad(ln, "expected: start VERTEX"))
                continue
            start = (ln, tok[1])
        else:
            diags.append(_bad(ln, f"unknown keyword {tok[0]!r}"))

    for a in aorder:
        ln, t, h = arcs[a]
        for x in (t, h):
            if x not in vertices:
                diags.append(_bad(ln, f"arc {a} refers to undeclared vertex {x!r}"))
    if diags:
        raise InstanceError(diags)

    vidx = {v: i for i, v in enumerate(vorder)}
    aidx = {a: i for i, a in enumerate(aorder)}
    tail = [vidx[arcs[a][1]] for a in aorder]
    head = [vidx[arcs[a][2]] for a in aorder]
    rotor: list[tuple[int, ...]] = []
    for v in vorder:
        out = [i for i, a in enumerate(aorder) if tail[i] == vidx[v]]
        if v in rotors:
            ln, ids = rotors[v]
            bad = [x for x in ids if x not in aidx]
            if bad:
                diags.append(_bad(ln, f"rotor of {v} names unknown arcs {bad}"))
                rotor.append(tuple(out))
                continue
            r = [aidx[x] for x in ids]
            if len(set(r)) != len(r) or set(r) != set(out):
                diags.append(_bad(ln, f"rotor of {v} must list every outgoing arc of {v} exactly once"))
            rotor.append(tuple(r))
        else:
            if out:
                warns.append(Diagnostic(vertices[v][0], f"no rotor line for {v}; using arc declaration order", "warning"))
            rotor.append(tuple(out))
    for v in rotors:
        if v not in vertices:
            diags.append(_bad(rotors[v][0], f"rotor line for undeclared vertex {v!r}"))
    if diags:
        raise InstanceError(diags)

    g = RotorGraph(vorder, [vertices[v][1] for v in vorder], tail, head, rotor, aorder)
    for msg in validate(g):
        diags.append(_bad(0, msg))
    if diags:
        raise InstanceError(diags)

    cfg = [-1] * g.n
    for v, (ln, a) in configs.items():
        if v not in vidx:
            diags.append(_bad(ln, f"config for undeclared vertex {v!r}"))
        elif a not in aidx or tail[aidx[a]] != vidx[v]:
            diags.append(_bad(ln, f"config arc {a!r} is not outgoing from {v}"))
        else:
            cfg[vidx[v]] = aidx[a]
    owner = tuple(vertices[v][2] for v in vorder)
    for i, v in enumerate(vorder):
        if cfg[i] < 0 and not g.sink[i] and owner[i] == "rand":
            warns.append(Diagnostic(vertices[v][0], f"no config line for {v}; using first rotor arc", "warning"))
            cfg[i] = g.rotor[i][0]
    s = None
    if start is not None:
        if start[1] not in vidx:
            diags.append(_bad(start[0], f"start vertex {start[1]!r} undeclared"))
        else:
            s = vidx[start[1]]
    if diags:
        raise InstanceError(diags)
    value = tuple(vertices[v][3] if vertices[v][1] else None for v in vorder)
    return Instance(g, tuple(cfg), owner, value, s, tuple(warns))


def serialize_instance(inst: Instance) -> str:
    g = inst.graph
    lines = []
    for u in range(g.n):
        if g.sink[u]:
            val = inst.value[u] or 0
            lines.append(f"vertex {g.names[u]} sink" + (f" value={val}" if val else ""))
        else:
            own = inst.owner[u]
            lines.append(f"vertex {g.names[u]} plain" + (f" owner={own}" if own != "rand" else ""))
    for a in range(g.m):
        lines.append(f"arc {g.arc_names[a]} {g.names[g.tail[a]]} {g.names[g.head[a]]}")
    for u in range(g.n):
        if g.rotor[u]:
            lines.append(f"rotor {g.names[u]} " + " ".join(g.arc_names[a] for a in g.rotor[u]))
    for u in range(g.n):
        if inst.config[u] >= 0:
            lines.append(f"config {g.names[u]} {g.arc_names[inst.config[u]]}")
    if inst.start is not None:
        lines.append(f"start {g.names[inst.start]}")
    return "\n".join(lines) + "\n"


def check_instance(inst: Instance) -> list[str]:
    g = inst.graph
    errs = validate(g)
    if not errs:
        errs += validate_config(g, inst.full_config())
    for u in range(g.n):
        if g.sink[u] and (inst.value[u] is None or inst.value[u] < 0):
            errs.append(f"sink {g.names[u]} needs a nonnegative value")
    return errs

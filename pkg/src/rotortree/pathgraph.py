"""Closed forms on the simple path s0, u_1, ..., u_n, s1.

Each interior vertex points toward s0 or toward s1. The number n1 of
vertices pointing toward s1 is a complete invariant of the cycle-push
class, and routing a particle acts on classes by addition modulo n+1.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .graph import RotorGraph
from .instance import Instance


@dataclass(frozen=True)
class PathInstance:
    n: int
    toward_s1: tuple[bool, ...]  # entry i-1 is the direction of u_i

    def __post_init__(self):
        if self.n < 1 or len(self.toward_s1) != self.n:
            raise ValueError("path needs n >= 1 and one direction per vertex")

    @classmethod
    def canonical(cls, n: int, k: int) -> PathInstance:
        """Acyclic member of class k: the last k vertices point toward s1."""
        if not 0 <= k <= n:
            raise ValueError("class must lie in 0..n")
        return cls(n, tuple(i > n - k for i in range(1, n + 1)))

    def to_instance(self) -> Instance:
        from .generators import simple_path
        return simple_path(self.n, self.toward_s1)

    @classmethod
    def from_graph(cls, g: RotorGraph, cfg) -> PathInstance:
        """Read directions back from a graph built by :func:`simple_path`."""
        n = g.n - 2
        return cls(n, tuple(g.head[cfg[i]] == i + 1 for i in range(1, n + 1)))


def _n(path: PathInstance | int) -> int:
    return path if isinstance(path, int) else path.n


def n1(path: PathInstance) -> int:
    return sum(path.toward_s1)


def exit_pattern_path(path: PathInstance) -> dict[int, int]:
    """u_i exits at s0 (0) iff i <= n - n1, else at s1 (1)."""
    cut = path.n - n1(path)
    return {i: 0 if i <= cut else 1 for i in range(1, path.n + 1)}


def class_after_routing(path: PathInstance | int, k: int, i: int) -> int:
    n = _n(path)
    if not (0 <= k <= n and 1 <= i <= n):
        raise ValueError("need 0 <= k <= n and 1 <= i <= n")
    return (k + i) % (n + 1)


def multi_particle_outcome(path: PathInstance | int, k: int, starts: Iterable[int] | Mapping[int, int]) -> tuple[int, int]:
    """Final class and number of particles reaching s1.

    ``starts`` is a list of start indices or a map index -> particle count,
    so huge particle numbers stay cheap.
    """
    n = _n(path)
    if not 0 <= k <= n:
        raise ValueError("class must lie in 0..n")
    items = starts.items() if isinstance(starts, Mapping) else ((i, 1) for i in starts)
    total = k
    for i, c in items:
        if not 1 <= i <= n:
            raise ValueError("start indices must lie in 1..n")
        total += i * c
    return total % (n + 1), total // (n + 1)


def r0_r1(path: PathInstance, i: int) -> tuple[int, int]:
    """Vertices pointing toward u_i on its s0 side and on its s1 side."""
    if not 1 <= i <= path.n:
        raise ValueError("index out of range")
    d = path.toward_s1
    r0 = sum(1 for j in range(1, i) if d[j - 1])
    r1 = sum(1 for j in range(i + 1, path.n + 1) if not d[j - 1])
    return r0, r1


def exit_by_r(path: PathInstance, i: int) -> int:
    """Exit of u_i from the two counts: s1 iff r1 < r0, or a tie with u_i toward s1."""
    r0, r1 = r0_r1(path, i)
    if r1 < r0 or (r1 == r0 and path.toward_s1[i - 1]):
        return 1
    return 0

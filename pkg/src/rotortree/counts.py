"""Nonnegative integers extended with +inf.

Finite values are plain Python ints (arbitrary precision). The infinite
value is ``math.inf`` so that comparisons against ints work natively;
the helpers below keep arithmetic from ever producing floats.
"""
from __future__ import annotations

import math

INF = math.inf

Count = int | float  # int, or INF


def is_inf(x) -> bool:
    return x == INF


def sub(x: Count, k: int) -> Count:
    """x - k with inf - k = inf."""
    return INF if x == INF else x - k


def floordiv(x: Count, k: int) -> Count:
    """x // k with inf // k = inf, for finite positive k."""
    return INF if x == INF else x // k


def fmt(x: Count) -> str:
    return "inf" if x == INF else str(int(x))


def to_json(x: Count):
    return "inf" if x == INF else int(x)


def parse(s: str) -> Count:
    s = s.strip().lower()
    if s in ("inf", "+inf", "infinity", "+infinity"):
        return INF
    v = int(s)
    if v < 0:
        raise ValueError(f"negative count {s!r}")
    return v

"""Half-open integer interval sets.

All coverage computations run on sets of half-open tick intervals
``[start, end)`` kept as sorted, pairwise-disjoint tuples.  Everything here
is exact integer arithmetic; linear merges keep the operations O(n).
"""

from __future__ import annotations

from bisect import bisect_right
from typing import Iterable, Sequence

Span = tuple[int, int]


def normalize(spans: Iterable[Span]) -> tuple[Span, ...]:
    """Sort, drop empty spans and merge overlapping or touching ones."""
    items = sorted((a, b) for a, b in spans if b > a)
    out: list[Span] = []
    for a, b in items:
        if out and a <= out[-1][1]:
            if b > out[-1][1]:
                out[-1] = (out[-1][0], b)
        else:
            out.append((a, b))
    return tuple(out)


def measure(spans: Sequence[Span]) -> int:
    return sum(b - a for a, b in spans)


def union(xs: Sequence[Span], ys: Sequence[Span]) -> tuple[Span, ...]:
    return normalize(list(xs) + list(ys))


def intersect(xs: Sequence[Span], ys: Sequence[Span]) -> tuple[Span, ...]:
    out: list[Span] = []
    i = j = 0
    while i < len(xs) and j < len(ys):
        a = max(xs[i][0], ys[j][0])
        b = min(xs[i][1], ys[j][1])
        if b > a:
            out.append((a, b))
        if xs[i][1] <= ys[j][1]:
            i += 1
        else:
            j += 1
    return tuple(out)


def subtract(xs: Sequence[Span], ys: Sequence[Span]) -> tuple[Span, ...]:
    """Set difference ``xs - ys`` for normalized inputs."""
    out: list[Span] = []
    j = 0
    for a, b in xs:
        cur = a
        while j < len(ys) and ys[j][1] <= cur:
            j += 1
        k = j
        while k < len(ys) and ys[k][0] < b:
            if ys[k][0] > cur:
                out.append((cur, ys[k][0]))
            cur = max(cur, ys[k][1])
            if cur >= b:
                break
            k += 1
        if cur < b:
            out.append((cur, b))
    return tuple(out)


def complement(xs: Sequence[Span], period: int) -> tuple[Span, ...]:
    return subtract(((0, period),), xs)


def contains(xs: Sequence[Span], x: int) -> bool:
    """Point membership; ``xs`` must be normalized."""
    i = bisect_right(xs, (x, float("inf"))) - 1
    return i >= 0 and xs[i][0] <= x < xs[i][1]


def shift_mod(spans: Sequence[Span], shift: int, period: int) -> tuple[Span, ...]:
    """Shift every span *left* by ``shift`` ticks and wrap into [0, period)."""
    out: list[Span] = []
    for a, b in spans:
        length = b - a
        if length >= period:
            return ((0, period),)
        s = (a - shift) % period
        if s + length <= period:
            out.append((s, s + length))
        else:
            out.append((s, period))
            out.append((0, s + length - period))
    return normalize(out)


def reflect_mod(spans: Sequence[Span], c: int, period: int) -> tuple[Span, ...]:
    """Map every tick x to (c - x) mod period."""
    out: list[Span] = []
    for a, b in spans:
        length = b - a
        if length >= period:
            return ((0, period),)
        s = (c - b + 1) % period
        if s + length <= period:
            out.append((s, s + length))
        else:
            out.append((s, period))
            out.append((0, s + length - period))
    return normalize(out)

"""Front-quality measures for bi-objective point sets.

Points are (makespan, maintenance cost) pairs, both minimized.  The
distance-based measures work on normalized points in the unit square.
"""

from __future__ import annotations

import math


def normalize(points, bounds):
    """Scale points into [0, 1]^2 given ((min_x, min_y), (max_x, max_y)).

    Raises ValueError when an axis has zero spread.
    """
    (lx, ly), (hx, hy) = bounds
    if not (hx > lx) or not (hy > ly):
        raise ValueError(f"degenerate bounds {bounds}")
    return [((x - lx) / (hx - lx), (y - ly) / (hy - ly)) for x, y in points]


def bounds_of(*point_sets):
    """Joint axis-aligned bounds of several point sets."""
    xs = [x for ps in point_sets for x, _ in ps]
    ys = [y for ps in point_sets for _, y in ps]
    if not xs:
        raise ValueError("no points")
    return ((min(xs), min(ys)), (max(xs), max(ys)))


def igd(reference, approx) -> float:
    """Mean distance from each reference point to its nearest neighbour
    in the approximation (lower is better)."""
    if not reference or not approx:
        raise ValueError("empty point set")
    total = 0.0
    for rx, ry in reference:
        best = math.inf
        for ax, ay in approx:
            d = math.hypot(rx - ax, ry - ay)
            if d < best:
                best = d
        total += best
    return total / len(reference)


def hypervolume(points, ref=(1.0, 1.0)) -> float:
    """Area dominated by the set and bounded by ref (both axes minimized).

    Points that fail to dominate ref contribute nothing; dominated
    members are absorbed by the staircase sweep.
    """
    rx, ry = ref
    use = sorted((p for p in points if p[0] < rx and p[1] < ry))
    hv = 0.0
    prev_y = ry
    for x, y in use:
        if y < prev_y:
            hv += (rx - x) * (prev_y - y)
            prev_y = y
    return hv


def rpd(value: float, best: float) -> float:
    """Relative percentage deviation from the per-case best."""
    if best <= 0:
        raise ValueError(f"best must be positive, got {best}")
    return 100.0 * (value - best) / best

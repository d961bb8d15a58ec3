"""Box-counting slopes and field-ratio reconstruction."""

from __future__ import annotations

import itertools
import math
from typing import Sequence

import numpy as np

from ..exactfield import RealAlgebraicField


def box_count(points: np.ndarray, eps: float) -> int:
    x = np.asarray(points, dtype=float)
    return len(np.unique(np.floor((x - x.min()) / eps)))


def auto_scales(points: Sequence[float], n: int = 16) -> np.ndarray:
    """Scales between half the spread and the point where boxes stop merging.

    Scales at which N(eps) exceeds a quarter of the sample are dropped: there
    the count measures the sample size, not the set.
    """
    x = np.unique(np.asarray(points, dtype=float))
    if len(x) < 2:
        return np.array([1.0, 0.5])
    span = x[-1] - x[0]
    gaps = np.diff(x)
    lo = max(float(np.median(gaps)), span * 1e-12)
    grid = np.geomspace(span / 2, lo, 4 * n)
    keep = [e for e in grid if box_count(x, e) <= max(4, len(x) // 4)]
    if len(keep) < 2:
        keep = list(grid[:2])
    return np.geomspace(keep[0], keep[-1], n)


def box_counting_dimension(points: Sequence[float], scales: Sequence[float] | None = None) -> float:
    """Least-squares slope of ln N(eps) against ln(1/eps)."""
    x = np.asarray(points, dtype=float)
    if scales is None:
        scales = auto_scales(x)
    scales = np.asarray(scales, dtype=float)
    if len(scales) < 2:
        raise ValueError("need at least two scales")
    counts = np.array([box_count(x, e) for e in scales])
    slope = np.polyfit(np.log(1 / scales), np.log(counts), 1)[0]
    return float(max(slope, 0.0)) if np.all(counts == counts[0]) else float(slope)


def middle_thirds(depth: int) -> np.ndarray:
    """Left endpoints of the 2^depth intervals of the middle-thirds construction."""
    pts = np.zeros(1)
    for k in range(1, depth + 1):
        pts = np.concatenate([pts, pts + 2 * 3.0 ** -k])
    return np.sort(pts)


def field_ratio_check(nu1: float, nu2: float, field: RealAlgebraicField, H: int = 10,
                      tol: float = 1e-9) -> tuple[tuple[int, ...], int] | None:
    """Smallest-height c = (a_0 + a_1 th + ... ) / b with |nu1/nu2 - c| < tol.

    Coefficients |a_i| <= H and denominators 1 <= b <= H, scanned by height.
    Returns (numerators, denominator) or None.
    """
    if nu2 == 0:
        raise ValueError("nu2 must be nonzero")
    target = nu1 / nu2
    d = field.degree
    th = field.float_roots()[field.identity]
    powers = th ** np.arange(d)
    rng = np.arange(-H, H + 1)
    grid = np.array(list(itertools.product(rng, repeat=d)))
    vals = grid @ powers
    height = np.abs(grid).max(axis=1)
    best = None
    for b in range(1, H + 1):
        hit = np.nonzero(np.abs(vals / b - target) < tol)[0]
        for i in hit:
            h = max(int(height[i]), b)
            if best is None or h < best[0]:
                best = (h, tuple(int(c) for c in grid[i]), b)
    if best is None:
        return None
    return best[1], best[2]

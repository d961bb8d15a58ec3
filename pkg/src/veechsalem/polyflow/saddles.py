"""Saddle connections by unfolding wedges of directions from every corner."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .surface import PolygonSurface, cross

ANG_EPS = 1e-12


@dataclass(frozen=True)
class SaddleConnection:
    holonomy: tuple[float, float]
    start: int  # vertex class
    end: int
    start_corner: tuple[int, int]

    @property
    def length(self) -> float:
        return math.hypot(*self.holonomy)

    @property
    def vector(self) -> np.ndarray:
        return np.array(self.holonomy)


def _in_wedge(r: np.ndarray, l: np.ndarray, v: np.ndarray, closed_right: bool) -> bool:
    """Is v in the wedge swept counterclockwise from r to l (angle < pi)?"""
    sc = ANG_EPS * np.linalg.norm(v)
    a = cross(r, v) / np.linalg.norm(r)
    b = cross(v, l) / np.linalg.norm(l)
    if closed_right and abs(a) <= sc and np.dot(r, v) > 0:
        return True
    return a > sc and b > sc


def _dist_to_segment(a: np.ndarray, b: np.ndarray) -> float:
    """Distance from the origin to segment ab."""
    e = b - a
    t = np.clip(-np.dot(a, e) / np.dot(e, e), 0.0, 1.0)
    return float(np.linalg.norm(a + t * e))


def saddle_connections(S: PolygonSurface, L_max: float) -> list[SaddleConnection]:
    """All oriented saddle connections with |holonomy| <= L_max.

    From each corner the directions inside the polygon form a wedge whose
    right edge is included; together these wedges cover every outgoing
    direction at each cone point exactly once.  Each wedge is pushed
    through the sides it meets, polygon by polygon, and every vertex seen
    strictly inside the current wedge ends a saddle connection.
    """
    out: list[SaddleConnection] = []
    n = S.n
    for p in range(S.n_polygons):
        V = S.polygons[p]
        for k in range(n):
            O = V[k]
            src = S.corner_class[(p, k)]
            # vertices of the starting polygon: the two sides and the diagonals
            for j in range(n):
                if j == k:
                    continue
                v = V[j] - O
                if j == (k - 1) % n:
                    continue  # left edge belongs to the neighbouring wedge
                if np.linalg.norm(v) <= L_max:
                    out.append(SaddleConnection((float(v[0]), float(v[1])), src,
                                                S.corner_class[(p, j)], (p, k)))
            # sub-wedges through the far sides k+1 .. k-2
            for j in range(k + 1, k + n - 1):
                s = j % n
                a, b = V[s] - O, V[(s + 1) % n] - O
                _push(S, p, s, a, b, a, b, L_max, src, (p, k), out, 0)
    return out


def _push(S: PolygonSurface, p: int, side: int, a: np.ndarray, b: np.ndarray,
          r: np.ndarray, l: np.ndarray, L_max: float, src: int, corner, out, depth: int) -> None:
    """Carry the open wedge (r, l) through side (p, side), whose ends are a, b
    in coordinates centred at the source corner."""
    if _dist_to_segment(a, b) > L_max or depth > 10_000:
        return
    p2, k2 = S.pairing[(p, side)]
    V2 = S.polygons[p2]
    n = len(V2)
    # develop polygon p2 so that side k2 lands on side (p, side): the partner's
    # start is the image of b, so place V2 with V2[k2] at b
    off = b - V2[k2]
    W = V2 + off
    inside = []
    for j in range(n):
        if j == k2 or j == (k2 + 1) % n:
            continue
        v = W[j]
        if _in_wedge(r, l, v, closed_right=False):
            inside.append(j)
            if np.linalg.norm(v) <= L_max:
                out.append(SaddleConnection((float(v[0]), float(v[1])), src,
                                            S.corner_class[(p2, j)], corner))
    # split the wedge at the vertices it contains; each piece leaves through one side
    rays = sorted([r, l] + [W[j] for j in inside], key=lambda v: _angle_from(r, v))
    for lo, hi in zip(rays, rays[1:]):
        mid = lo / np.linalg.norm(lo) + hi / np.linalg.norm(hi)
        s = _far_side(W, k2, mid)
        if s is None:
            continue
        _push(S, p2, s, W[s], W[(s + 1) % n], lo, hi, L_max, src, corner, out, depth + 1)


def _angle_from(r: np.ndarray, v: np.ndarray) -> float:
    return math.atan2(cross(r, v), float(np.dot(r, v)))


def _far_side(W: np.ndarray, entry: int, d: np.ndarray) -> int | None:
    """Side of the developed polygon W (other than entry) hit by the ray t*d from the origin."""
    n = len(W)
    best, bt = None, math.inf
    for s in range(n):
        if s == entry:
            continue
        a, b = W[s], W[(s + 1) % n]
        e = b - a
        den = cross(d, e)
        if abs(den) < 1e-300:
            continue
        t = cross(a, e) / den
        u = cross(a, d) / den
        if t > 0 and -1e-12 <= u <= 1 + 1e-12 and t < bt:
            best, bt = s, t
    return best


def systole(S: PolygonSurface, L_max: float | None = None) -> float:
    L = S.side_length * 1.01 if L_max is None else L_max
    while True:
        sc = saddle_connections(S, L)
        if sc:
            return min(c.length for c in sc)
        L *= 2


def no_small_triangle_check(S: PolygonSurface, L_max: float, parallel_tol: float = 1e-9) -> float:
    """Smallest |z ^ z'| over non-parallel pairs of saddle connections of length <= L_max."""
    sc = saddle_connections(S, L_max)
    H = np.array([c.holonomy for c in sc])
    if len(H) < 2:
        raise ValueError("need at least two saddle connections")
    lens = np.linalg.norm(H, axis=1)
    W = np.abs(H[:, 0][:, None] * H[:, 1][None, :] - H[:, 1][:, None] * H[:, 0][None, :])
    par = W <= parallel_tol * lens[:, None] * lens[None, :]
    kappa = float(np.where(par, np.inf, W).min())
    if not kappa > 0:
        raise AssertionError("no-small-triangle constant is not positive")
    return kappa

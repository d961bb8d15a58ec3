"""Regular-polygon translation surfaces and straight-line flow."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

EPS = 1e-12


def regular_polygon(n: int) -> np.ndarray:
    """Unit-circumradius n-gon, counterclockwise, with a horizontal bottom side."""
    k = np.arange(n)
    ang = -math.pi / 2 - math.pi / n + 2 * math.pi * k / n
    return np.stack([np.cos(ang), np.sin(ang)], axis=1)


def cross(a, b) -> float:
    return a[0] * b[1] - a[1] * b[0]


class _UnionFind:
    def __init__(self, n: int):
        self.p = list(range(n))

    def find(self, i: int) -> int:
        while self.p[i] != i:
            self.p[i] = self.p[self.p[i]]
            i = self.p[i]
        return i

    def union(self, a: int, b: int) -> None:
        self.p[self.find(a)] = self.find(b)


@dataclass
class PolygonSurface:
    """S_n: one polygon glued to itself (n even) or P_n and -P_n (n odd).

    Side k of a polygon runs from vertex k to vertex k+1.  pairing maps
    (polygon, side) to its partner, and shift[(polygon, side)] is the
    translation carrying that side onto the partner.
    """
    n: int
    polygons: list[np.ndarray]
    pairing: dict[tuple[int, int], tuple[int, int]]
    shift: dict[tuple[int, int], np.ndarray]
    corner_class: dict[tuple[int, int], int]
    cone_angles: list[float]  # per vertex class, in multiples of 2*pi
    genus: int
    stratum: tuple[int, ...]  # orders of the cone points, marked points (order 0) kept

    @property
    def n_polygons(self) -> int:
        return len(self.polygons)

    def edge(self, p: int, k: int) -> tuple[np.ndarray, np.ndarray]:
        V = self.polygons[p]
        return V[k], V[(k + 1) % len(V)]

    @property
    def side_length(self) -> float:
        return 2 * math.sin(math.pi / self.n)

    @property
    def area(self) -> float:
        one = 0.5 * self.n * math.sin(2 * math.pi / self.n)
        return one * self.n_polygons

    @property
    def diameter(self) -> float:
        """Diameter of a single polygon; a distance scale for search radii."""
        V = self.polygons[0]
        return float(np.max(np.linalg.norm(V[:, None] - V[None], axis=2)))

    def stratum_label(self) -> str:
        orders = [k for k in self.stratum if k > 0] or [0]
        return f"M{self.genus}({','.join(str(k) for k in orders)})"

    def contains(self, p: int, x: np.ndarray, eps: float = EPS) -> bool:
        V = self.polygons[p]
        m = len(V)
        return all(cross(V[(k + 1) % m] - V[k], x - V[k]) >= -eps for k in range(m))

    def to_json(self) -> dict:
        return {"n": self.n, "genus": self.genus, "stratum": self.stratum_label(),
                "cone_angles": self.cone_angles,
                "polygons": [[[f"{x:.17g}", f"{y:.17g}"] for x, y in V] for V in self.polygons],
                "pairing": [[list(a), list(b)] for a, b in sorted(self.pairing.items())]}


def build_surface(n: int) -> PolygonSurface:
    if n < 3:
        raise ValueError("n must be at least 3")
    P = regular_polygon(n)
    pairing: dict[tuple[int, int], tuple[int, int]] = {}
    if n % 2 == 0:
        polys = [P]
        for k in range(n):
            pairing[(0, k)] = (0, (k + n // 2) % n)
    else:
        polys = [P, -P]
        for k in range(n):
            pairing[(0, k)] = (1, k)
            pairing[(1, k)] = (0, k)
    shift = {}
    for (p, k), (p2, k2) in pairing.items():
        a, b = polys[p][k], polys[p][(k + 1) % n]
        a2, b2 = polys[p2][k2], polys[p2][(k2 + 1) % n]
        if np.linalg.norm((b - a) + (b2 - a2)) > 1e-9:
            raise AssertionError("paired sides are not opposite translates")
        shift[(p, k)] = b2 - a
    # corners: vertex k of polygon p is glued to the end of the partner side
    idx = {(p, k): i for i, (p, k) in enumerate((p, k) for p in range(len(polys)) for k in range(n))}
    uf = _UnionFind(len(idx))
    for (p, k), (p2, k2) in pairing.items():
        uf.union(idx[(p, k)], idx[(p2, (k2 + 1) % n)])
        uf.union(idx[(p, (k + 1) % n)], idx[(p2, k2)])
    roots: dict[int, int] = {}
    corner_class = {}
    for c, i in idx.items():
        corner_class[c] = roots.setdefault(uf.find(i), len(roots))
    interior = Fraction(n - 2, 2 * n)  # interior angle in units of 2*pi
    counts = [0] * len(roots)
    for c in corner_class.values():
        counts[c] += 1
    angles = [interior * m for m in counts]
    if any(a.denominator != 1 for a in angles):
        raise AssertionError("cone angles are not multiples of 2*pi")
    V, E, F = len(roots), len(polys) * n // 2, len(polys)
    chi = V - E + F
    genus = (2 - chi) // 2
    orders = tuple(sorted((int(a) - 1 for a in angles), reverse=True))
    if sum(orders) != 2 * genus - 2:
        raise AssertionError("Gauss-Bonnet check failed")
    return PolygonSurface(n, polys, pairing, shift, corner_class, [float(a) for a in angles],
                          genus, orders)


def expected_genus(n: int) -> int:
    return (n - 1) // 2 if n % 2 else n // 4


def expected_stratum(n: int) -> tuple[int, ...] | None:
    """Cone orders by the closed formulas (None when n is odd and the census decides)."""
    if n % 4 == 0:
        return ((n - 4) // 2,)
    if n % 4 == 2:
        return ((n - 6) // 4, (n - 6) // 4)
    return None


# ---------------------------------------------------------------------------
# flow


@dataclass
class Segment:
    polygon: int
    start: np.ndarray
    end: np.ndarray
    t0: float
    t1: float


@dataclass
class OrbitSegment:
    segments: list[Segment]
    direction: np.ndarray
    time: float
    singular: bool = False
    hit_time: float | None = None
    hit_corner: tuple[int, int] | None = None
    crossings: list[tuple[int, int]] = field(default_factory=list)

    @property
    def end(self) -> tuple[int, np.ndarray]:
        s = self.segments[-1]
        return s.polygon, s.end

    def displacement(self) -> np.ndarray:
        return sum((s.end - s.start for s in self.segments), np.zeros(2))


def unit(theta: float) -> np.ndarray:
    return np.array([math.cos(theta), math.sin(theta)])


def exit_side(S: PolygonSurface, p: int, x: np.ndarray, u: np.ndarray,
              skip: int | None = None) -> tuple[int, float]:
    """Side through which the ray x + t u leaves polygon p, and the time."""
    V = S.polygons[p]
    m = len(V)
    best, bt = -1, math.inf
    for k in range(m):
        if k == skip:
            continue
        a, b = V[k], V[(k + 1) % m]
        e = b - a
        den = cross(u, e)
        if den <= 0:  # only sides the ray leaves through: outward normal . u > 0
            continue
        t = cross(a - x, e) / den
        if -EPS < t < bt:
            best, bt = k, t
    if best < 0:
        raise ArithmeticError("ray does not leave the polygon")
    return best, max(bt, 0.0)


def flow_orbit(S: PolygonSurface, theta: float | np.ndarray, start: tuple[int, np.ndarray],
               T: float, corner_tol: float = EPS, max_crossings: int | None = None) -> OrbitSegment:
    """Orbit of the straight-line flow in direction theta up to time T.

    A corner hit (within corner_tol of a vertex along the side) ends the
    orbit as a singularity hit; every vertex counts, marked points included.
    """
    u = unit(theta) if np.ndim(theta) == 0 else np.asarray(theta, dtype=float) / np.linalg.norm(theta)
    p, x = start
    x = np.asarray(x, dtype=float)
    if not S.contains(p, x, 1e-9):
        raise ValueError("start point is outside its polygon")
    for V in S.polygons[p:p + 1]:
        if np.min(np.linalg.norm(V - x, axis=1)) < corner_tol:
            raise ValueError("start point is a singularity")
    t = 0.0
    segs: list[Segment] = []
    cr: list[tuple[int, int]] = []
    skip = None
    limit = max_crossings if max_crossings is not None else int(10 * T / (S.side_length * 0.1) + 100)
    while True:
        k, dt = exit_side(S, p, x, u, skip)
        if t + dt >= T:
            y = x + (T - t) * u
            segs.append(Segment(p, x, y, t, T))
            return OrbitSegment(segs, u, T, crossings=cr)
        y = x + dt * u
        segs.append(Segment(p, x, y, t, t + dt))
        t += dt
        a, b = S.edge(p, k)
        L = np.linalg.norm(b - a)
        if np.linalg.norm(y - a) < corner_tol * L or np.linalg.norm(y - b) < corner_tol * L:
            corner = (p, k) if np.linalg.norm(y - a) < np.linalg.norm(y - b) else (p, (k + 1) % S.n)
            return OrbitSegment(segs, u, t, True, t, corner, cr)
        p2, k2 = S.pairing[(p, k)]
        cr.append((p, k))
        x = y + S.shift[(p, k)]
        p, skip = p2, k2
        if len(cr) > limit:
            raise ArithmeticError("crossing budget exceeded")

"""Cylinder decompositions in periodic directions."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .surface import PolygonSurface


class NonPeriodicDirection(ValueError):
    """The direction did not split into cylinders: the flow there is minimal."""


@dataclass(frozen=True)
class Cylinder:
    direction: float  # angle of the core curves
    width: float  # circumference
    height: float
    pieces: tuple[tuple[int, int], ...]

    @property
    def modulus(self) -> float:
        return self.width / self.height

    @property
    def area(self) -> float:
        return self.width * self.height


def direction_angle(S: PolygonSurface, direction) -> float:
    """Accepts an angle, a 2-vector, or 'side:k' (side k of the first polygon)."""
    if isinstance(direction, str):
        kind, _, arg = direction.partition(":")
        if kind != "side":
            raise ValueError(f"unknown direction spec {direction!r}")
        a, b = S.edge(0, int(arg))
        d = b - a
        return math.atan2(d[1], d[0])
    if np.ndim(direction) == 1:
        return math.atan2(direction[1], direction[0])
    return float(direction)


def _rotated(S: PolygonSurface, phi: float):
    c, s = math.cos(-phi), math.sin(-phi)
    R = np.array([[c, -s], [s, c]])
    polys = [V @ R.T for V in S.polygons]
    shift = {k: R @ v for k, v in S.shift.items()}
    return polys, shift


def _side_at(W: np.ndarray, y: float, right: bool) -> tuple[int, float]:
    """Side of the rotated polygon W crossing height y on its right (or left) boundary, and x there."""
    n = len(W)
    for k in range(n):
        a, b = W[k], W[(k + 1) % n]
        ey = b[1] - a[1]
        if (ey > 0) if right else (ey < 0):
            lo, hi = min(a[1], b[1]), max(a[1], b[1])
            if lo <= y <= hi:
                x = a[0] + (y - a[1]) / ey * (b[0] - a[0])
                return k, x
    raise ArithmeticError("height outside the polygon")


def cylinder_decomposition(S: PolygonSurface, direction, tol: float = 1e-9,
                           max_cuts: int = 20_000) -> list[Cylinder]:
    """Cylinders whose core curves run in the given direction.

    In coordinates where the direction is horizontal, every polygon is cut
    along the horizontal lines through its vertices and through the points
    where those leaves cross sides; the cut heights are carried across the
    gluings until nothing new appears.  The strips between consecutive cuts
    then glue end to end into cycles, one per cylinder.
    """
    phi = direction_angle(S, direction)
    polys, shift = _rotated(S, phi)
    P = len(polys)
    ylo = [float(W[:, 1].min()) for W in polys]
    yhi = [float(W[:, 1].max()) for W in polys]
    cuts: list[list[float]] = [sorted(set(np.round(W[:, 1], 14).tolist())) for W in polys]

    def add(p: int, y: float) -> bool:
        cs = cuts[p]
        i = np.searchsorted(cs, y)
        for j in (i - 1, i):
            if 0 <= j < len(cs) and abs(cs[j] - y) <= tol:
                return False
        cs.insert(int(i), y)
        return True

    work = [(p, y) for p in range(P) for y in cuts[p]]
    total = sum(len(c) for c in cuts)
    while work:
        p, y = work.pop()
        if y <= ylo[p] + tol or y >= yhi[p] - tol:
            continue
        for right in (True, False):
            k, x = _side_at(polys[p], y, right)
            W = polys[p]
            a, b = W[k], W[(k + 1) % len(W)]
            if min(abs(a[1] - y), abs(b[1] - y)) <= tol:
                continue  # the leaf ends at a vertex
            p2, _ = S.pairing[(p, k)]
            y2 = y + shift[(p, k)][1]
            if add(p2, y2):
                total += 1
                work.append((p2, y2))
                if total > max_cuts:
                    raise NonPeriodicDirection(
                        f"direction {phi:.15g} did not close up after {max_cuts} cuts; "
                        "no cylinder decomposition (the flow in this direction is minimal)")
    # strips and their right neighbours
    pieces = [(p, i) for p in range(P) for i in range(len(cuts[p]) - 1)]
    right_of: dict[tuple[int, int], tuple[int, int]] = {}
    width: dict[tuple[int, int], float] = {}
    for p, i in pieces:
        lo, hi = cuts[p][i], cuts[p][i + 1]
        mid = 0.5 * (lo + hi)
        kr, xr = _side_at(polys[p], mid, True)
        _, xl = _side_at(polys[p], mid, False)
        width[(p, i)] = xr - xl
        p2, _ = S.pairing[(p, kr)]
        d = shift[(p, kr)][1]
        cs = cuts[p2]
        j = int(np.searchsorted(cs, lo + d - tol))
        if j + 1 >= len(cs) or abs(cs[j] - (lo + d)) > 10 * tol or abs(cs[j + 1] - (hi + d)) > 10 * tol:
            raise NonPeriodicDirection(f"strip refinement failed to close in direction {phi:.15g}")
        right_of[(p, i)] = (p2, j)
    seen = set()
    cyls = []
    for start in pieces:
        if start in seen:
            continue
        cyc = []
        cur = start
        while cur not in seen:
            seen.add(cur)
            cyc.append(cur)
            cur = right_of[cur]
        if cur != start:
            raise NonPeriodicDirection("strip map is not a permutation")
        p, i = start
        h = cuts[p][i + 1] - cuts[p][i]
        cyls.append(Cylinder(phi, sum(width[c] for c in cyc), h, tuple(cyc)))
    return cyls


def rational_approx(x: float, max_den: int = 10**6) -> Fraction:
    return Fraction(x).limit_denominator(max_den)


@dataclass
class CommensurabilityReport:
    moduli: list[float]
    ratios: list[Fraction]  # modulus_i / modulus_0
    max_residual: float
    commensurable: bool
    twist: float  # smallest common multiple of the moduli


def commensurability(cyls: list[Cylinder], max_den: int = 10**6, tol: float = 1e-9
                     ) -> CommensurabilityReport:
    mods = [c.modulus for c in cyls]
    ratios, res = [], 0.0
    for m in mods:
        r = rational_approx(m / mods[0], max_den)
        ratios.append(r)
        res = max(res, abs(m / mods[0] - float(r)))
    ok = res <= tol
    num = 1
    den = 0
    for r in ratios:
        num = num * r.numerator // math.gcd(num, r.numerator)
        den = math.gcd(den, r.denominator)
    return CommensurabilityReport(mods, ratios, res, ok, mods[0] * num / den)

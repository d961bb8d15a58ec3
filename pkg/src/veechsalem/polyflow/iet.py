"""First-return interval exchanges on a straight transversal."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .cylinders import direction_angle
from .surface import EPS, PolygonSurface, cross, exit_side, unit


@dataclass(frozen=True)
class Transversal:
    polygon: int
    a: np.ndarray
    b: np.ndarray

    @property
    def length(self) -> float:
        return float(np.linalg.norm(self.b - self.a))

    def point(self, s: float) -> np.ndarray:
        return self.a + (s / self.length) * (self.b - self.a)


def orthogonal_transversal(S: PolygonSurface, direction, length: float | None = None,
                           polygon: int = 0, center=(0.0, 0.0)) -> Transversal:
    """Segment centred at `center`, perpendicular to the flow; default length is the inradius."""
    u = unit(direction_angle(S, direction))
    L = math.cos(math.pi / S.n) if length is None else length
    c = np.asarray(center, dtype=float)
    nrm = np.array([-u[1], u[0]])
    return Transversal(polygon, c - 0.5 * L * nrm, c + 0.5 * L * nrm)


@dataclass
class IETData:
    lengths: np.ndarray
    permutation: list[int]  # permutation[i] = position of interval i after the map
    translations: np.ndarray  # T(x) = x + translations[i] on interval i
    return_times: np.ndarray
    transversal_length: float
    degenerate: bool = False
    notes: list[str] | None = None

    @property
    def n_intervals(self) -> int:
        return len(self.lengths)

    @property
    def discontinuities(self) -> np.ndarray:
        return np.cumsum(self.lengths)[:-1]

    def __call__(self, x: float) -> float:
        i = int(np.searchsorted(np.cumsum(self.lengths), x, side="right"))
        return x + self.translations[min(i, len(self.lengths) - 1)]

    def to_json(self) -> dict:
        return {"lengths": [float(x) for x in self.lengths], "permutation": self.permutation,
                "translations": [float(x) for x in self.translations],
                "return_times": [float(x) for x in self.return_times],
                "transversal_length": self.transversal_length, "degenerate": self.degenerate,
                "notes": self.notes or []}


class NonRecurrent(ValueError):
    """The flow did not come back to the transversal within the time budget."""


def _hit_transversal(x: np.ndarray, y: np.ndarray, tr: Transversal) -> float | None:
    """Parameter s along the transversal where segment x->y crosses it (excluding x itself)."""
    d = y - x
    e = tr.b - tr.a
    den = cross(d, e)
    if abs(den) < 1e-300:
        return None
    t = cross(tr.a - x, e) / den
    s = cross(tr.a - x, d) / den
    if 1e-12 < t <= 1 + 1e-12 and -1e-12 <= s <= 1 + 1e-12:
        return t, min(max(s, 0.0), 1.0) * tr.length
    return None


def _flow_to(S: PolygonSurface, p: int, x: np.ndarray, u: np.ndarray, tr: Transversal,
             t_max: float, corner_tol: float = EPS):
    """Flow until the transversal or a corner; ('hit', s, t) or ('corner', (p, k), t)."""
    t = 0.0
    skip = None
    while t < t_max:
        k, dt = exit_side(S, p, x, u, skip)
        y = x + dt * u
        if p == tr.polygon:
            h = _hit_transversal(x, y, tr)
            if h is not None:
                return "hit", h[1], t + h[0] * dt
        t += dt
        a, b = S.edge(p, k)
        L = np.linalg.norm(b - a)
        if np.linalg.norm(y - a) < corner_tol * L:
            return "corner", (p, k), t
        if np.linalg.norm(y - b) < corner_tol * L:
            return "corner", (p, (k + 1) % S.n), t
        p2, k2 = S.pairing[(p, k)]
        x = y + S.shift[(p, k)]
        p, skip = p2, k2
    raise NonRecurrent(f"no return to the transversal within time {t_max}")


def _enters(V: np.ndarray, k: int, d: np.ndarray) -> bool:
    n = len(V)
    e_out = V[(k + 1) % n] - V[k]
    e_in = V[(k - 1) % n] - V[k]
    sc = 1e-12 * np.linalg.norm(d)
    return cross(e_out, d) > sc * np.linalg.norm(e_out) and cross(d, e_in) > sc * np.linalg.norm(e_in)


def first_return_iet(S: PolygonSurface, direction, transversal: Transversal | None = None,
                     t_max: float = 1e4, merge_tol: float = 1e-10) -> IETData:
    """Lengths and permutation of the first-return map of the flow to the transversal.

    The map is continuous away from the first backward hits of the
    singularities and of the transversal's endpoints; those cut points are
    found by flowing backward, and one forward flow per piece gives its
    translation.  Neighbouring pieces with equal translation (cuts caused by
    marked points) are merged.
    """
    theta = direction_angle(S, direction)
    u = unit(theta)
    tr = orthogonal_transversal(S, theta) if transversal is None else transversal
    L = tr.length
    if abs(cross(u, tr.b - tr.a)) < 1e-9 * L:
        raise ValueError("transversal is parallel to the flow")
    notes: list[str] = []
    degenerate = False
    cuts = [0.0, L]
    for p in range(S.n_polygons):
        V = S.polygons[p]
        for k in range(S.n):
            if not _enters(V, k, -u):
                continue
            kind, val, _ = _flow_to(S, p, V[k].copy(), -u, tr, t_max)
            if kind == "corner":
                degenerate = True
                notes.append(f"backward separatrix from corner {(p, k)} ends at corner {val}")
            else:
                cuts.append(val)
    for end in (tr.a, tr.b):
        kind, val, _ = _flow_to(S, tr.polygon, end.copy(), -u, tr, t_max)
        if kind == "hit":
            cuts.append(val)
    cuts = np.unique(np.clip(np.round(np.array(cuts) / merge_tol) * merge_tol, 0.0, L))
    # one forward flow from each piece's midpoint
    pieces = []
    for lo, hi in zip(cuts, cuts[1:]):
        if hi - lo <= merge_tol:
            continue
        mid = 0.5 * (lo + hi)
        kind, val, t = _flow_to(S, tr.polygon, tr.point(mid), u, tr, t_max)
        if kind == "corner":
            raise ArithmeticError("midpoint orbit hit a corner; cut points are inconsistent")
        pieces.append([lo, hi, val - mid, t])
    merged = [pieces[0]]
    for pc in pieces[1:]:
        last = merged[-1]
        if abs(pc[0] - last[1]) <= merge_tol and abs(pc[2] - last[2]) <= 1e-9 and abs(pc[3] - last[3]) <= 1e-9:
            last[1] = pc[1]
        else:
            merged.append(pc)
    lengths = np.array([hi - lo for lo, hi, _, _ in merged])
    trans = np.array([m[2] for m in merged])
    starts = np.array([m[0] for m in merged]) + trans
    perm_order = np.argsort(starts)
    permutation = [0] * len(merged)
    for pos, i in enumerate(perm_order):
        permutation[int(i)] = pos
    # images must tile the transversal
    img = sorted(zip(starts, starts + lengths))
    gap = max([abs(img[0][0])] + [abs(b0 - a1) for (_, b0), (a1, _) in zip(img, img[1:])]
              + [abs(img[-1][1] - L)])
    if gap > 1e-8:
        raise ArithmeticError(f"first-return images do not tile the transversal (gap {gap:.3g})")
    return IETData(lengths, permutation, trans, np.array([m[3] for m in merged]), L, degenerate, notes)


def keane_check(iet: IETData, depth: int = 1000, tol: float = 1e-9) -> tuple[bool, float]:
    """Do the discontinuity orbits avoid the discontinuities for `depth` steps?

    Returns (holds, closest approach).
    """
    beta = iet.discontinuities
    if len(beta) == 0:
        return True, math.inf
    ends = np.cumsum(iet.lengths)
    x = beta.copy()
    closest = math.inf
    for _ in range(depth):
        idx = np.minimum(np.searchsorted(ends, x, side="right"), len(ends) - 1)
        x = x + iet.translations[idx]
        dist = np.abs(x[:, None] - beta[None, :]).min()
        closest = min(closest, float(dist))
    return closest > tol, closest

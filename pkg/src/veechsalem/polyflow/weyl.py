"""Weyl sums along straight-line flow orbits.

For a region indicator f and a frequency nu the harness returns the sample
mean of |(1/T) int_0^T exp(-2 pi i nu t) f(phi_t x) dt|.  Orbits are
integrated exactly: the times each orbit spends in the region form a list
of intervals, and every interval contributes a closed-form term.  All
samples advance together, one side crossing per numpy step.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .cylinders import direction_angle
from .surface import PolygonSurface, unit

log = logging.getLogger(__name__)

Rect = tuple[int, float, float, float, float]  # polygon, xmin, xmax, ymin, ymax


@dataclass
class Segments:
    """Straight pieces of a batch of orbits."""
    sid: np.ndarray
    polygon: np.ndarray
    start: np.ndarray  # (m, 2)
    t0: np.ndarray
    dt: np.ndarray
    ok: np.ndarray  # per sample: False if the orbit hit a singularity


class RectRegion:
    """Finite union of axis-parallel rectangles in polygon coordinates."""

    def __init__(self, rects: Sequence[Rect]):
        self.rects = [tuple(r) for r in rects]

    def intervals(self, seg: Segments, u: np.ndarray):
        out = []
        for (rp, x0, x1, y0, y1) in self.rects:
            sel = seg.polygon == rp
            if not sel.any():
                continue
            xs, lo, hi = seg.start[sel], np.zeros(sel.sum()), seg.dt[sel].copy()
            for ax, (a, b) in enumerate(((x0, x1), (y0, y1))):
                if abs(u[ax]) < 1e-300:
                    hi = np.where((xs[:, ax] >= a) & (xs[:, ax] <= b), hi, -1.0)
                    continue
                ta, tb = (a - xs[:, ax]) / u[ax], (b - xs[:, ax]) / u[ax]
                lo = np.maximum(lo, np.minimum(ta, tb))
                hi = np.minimum(hi, np.maximum(ta, tb))
            g = hi > lo
            out.append((seg.sid[sel][g], seg.t0[sel][g] + lo[g], seg.t0[sel][g] + hi[g]))
        return _cat(out)

    def to_json(self) -> dict:
        return {"type": "rectangles", "rects": [list(r) for r in self.rects]}


class GridRegion:
    """Union of square cells: mask[p, i, j] is the cell [x0 + i h, x0 + (i+1) h) x [y0 + j h, ...)
    of polygon p."""

    def __init__(self, origin: Sequence[float], h: float, mask: np.ndarray):
        self.origin = np.asarray(origin, dtype=float)
        self.h = float(h)
        self.mask = np.asarray(mask, dtype=bool)

    @property
    def G(self) -> int:
        return self.mask.shape[1]

    def intervals(self, seg: Segments, u: np.ndarray, chunk: int = 200_000):
        out = []
        for c in range(0, len(seg.sid), chunk):
            sl = slice(c, c + chunk)
            out.append(self._chunk(seg.sid[sl], seg.polygon[sl], seg.start[sl], seg.t0[sl],
                                   seg.dt[sl], u))
        return _merge(*_cat(out))

    def _chunk(self, sid, poly, x0, t0, dt, u):
        """Split each segment at the grid lines it crosses and keep the pieces in masked cells."""
        m = len(sid)
        idx, par = [np.arange(m), np.arange(m)], [np.zeros(m), dt]
        for ax in range(2):
            if abs(u[ax]) < 1e-300:
                continue
            a = (x0[:, ax] - self.origin[ax]) / self.h
            b = a + dt * u[ax] / self.h
            first = np.floor(np.minimum(a, b)).astype(int) + 1
            count = np.maximum(np.floor(np.maximum(a, b)).astype(int) - first + 1, 0)
            rep = np.repeat(np.arange(m), count)
            off = np.arange(count.sum()) - np.repeat(np.cumsum(count) - count, count)
            idx.append(rep)
            par.append(((first[rep] + off) * self.h + self.origin[ax] - x0[rep, ax]) / u[ax])
        idx = np.concatenate(idx)
        par = np.clip(np.concatenate(par), 0.0, dt[idx])
        order = np.lexsort((par, idx))
        idx, par = idx[order], par[order]
        same = idx[1:] == idx[:-1]
        a, b, k = par[:-1][same], par[1:][same], idx[:-1][same]
        keep = b > a
        a, b, k = a[keep], b[keep], k[keep]
        mid = x0[k] + (0.5 * (a + b))[:, None] * u
        ij = np.floor((mid - self.origin) / self.h).astype(int)
        inside = (ij >= 0).all(axis=1) & (ij < self.G).all(axis=1)
        ij = ij.clip(0, self.G - 1)
        hit = inside & self.mask[poly[k], ij[:, 0], ij[:, 1]]
        return sid[k][hit], t0[k][hit] + a[hit], t0[k][hit] + b[hit]

    def to_json(self) -> dict:
        return {"type": "grid", "origin": self.origin.tolist(), "h": self.h,
                "mask": self.mask.astype(int).tolist()}


def _cat(parts):
    parts = [p for p in parts if len(p[0])]
    if not parts:
        return np.zeros(0, dtype=int), np.zeros(0), np.zeros(0)
    return tuple(np.concatenate([p[i] for p in parts]) for i in range(3))


def _merge(sid, ta, tb, gap: float = 1e-12):
    """Fuse intervals of the same sample that touch."""
    if len(sid) == 0:
        return sid, ta, tb
    order = np.lexsort((ta, sid))
    sid, ta, tb = sid[order], ta[order], tb[order]
    new = np.ones(len(sid), dtype=bool)
    new[1:] = (sid[1:] != sid[:-1]) | (ta[1:] - tb[:-1] > gap)
    start = np.nonzero(new)[0]
    end = np.append(start[1:], len(sid)) - 1
    return sid[start], ta[start], tb[end]


def as_region(region):
    if region is None or isinstance(region, (RectRegion, GridRegion)):
        return region
    return RectRegion(region)


def polygon_region(S: PolygonSurface, p: int = 0) -> RectRegion:
    """The whole of polygon p, as its bounding box."""
    V = S.polygons[p]
    return RectRegion([(p, float(V[:, 0].min()), float(V[:, 0].max()),
                        float(V[:, 1].min()), float(V[:, 1].max()))])


def random_points(S: PolygonSurface, k: int, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """k points uniform on the surface (polygons have equal area)."""
    P = rng.integers(0, S.n_polygons, size=k)
    X = np.empty((k, 2))
    for i in range(k):
        V = S.polygons[P[i]]
        lo, hi = V.min(axis=0), V.max(axis=0)
        while True:
            x = lo + (hi - lo) * rng.random(2)
            if S.contains(int(P[i]), x, -1e-9):
                X[i] = x
                break
    return P, X


class _Geometry:
    def __init__(self, S: PolygonSurface, u: np.ndarray):
        m = S.n
        self.A = np.stack(S.polygons)  # (P, m, 2)
        self.E = np.roll(self.A, -1, axis=1) - self.A
        self.den = u[0] * self.E[..., 1] - u[1] * self.E[..., 0]
        self.out = self.den > 0
        self.partner = np.zeros((S.n_polygons, m, 2), dtype=int)
        self.shift = np.zeros((S.n_polygons, m, 2))
        for (p, k), (p2, k2) in S.pairing.items():
            self.partner[p, k] = (p2, k2)
            self.shift[p, k] = S.shift[(p, k)]
        self.len = np.linalg.norm(self.E, axis=2)


def flow_segments(S: PolygonSurface, u: np.ndarray, P: np.ndarray, X: np.ndarray, T: float,
                  corner_tol: float = 1e-12) -> Segments:
    """Flow every sample to time T; orbits that meet a corner stop there and are flagged."""
    g = _Geometry(S, u)
    k = len(P)
    P, X = np.asarray(P).copy(), np.asarray(X, dtype=float).copy()
    t = np.zeros(k)
    skip = np.full(k, -1)
    alive = np.ones(k, dtype=bool)
    ok = np.ones(k, dtype=bool)
    rec: list[tuple] = []
    while alive.any():
        i = np.nonzero(alive)[0]
        p, x = P[i], X[i]
        A, E = g.A[p], g.E[p]
        num = (A[..., 0] - x[:, None, 0]) * E[..., 1] - (A[..., 1] - x[:, None, 1]) * E[..., 0]
        with np.errstate(divide="ignore", invalid="ignore"):
            s = num / g.den[p]
        s = np.where(g.out[p] & (s > -1e-12), s, np.inf)
        has = skip[i] >= 0
        s[np.nonzero(has)[0], skip[i][has]] = np.inf  # the side just entered through
        side = np.argmin(s, axis=1)
        dt = np.minimum(np.maximum(s[np.arange(len(i)), side], 0.0), T - t[i])
        rec.append((i, p, x, t[i].copy(), dt))
        t[i] += dt
        done = t[i] >= T - 1e-15
        alive[i[done]] = False
        j = ~done
        if not j.any():
            continue
        ii, pp, sd = i[j], p[j], side[j]
        y = x[j] + dt[j, None] * u
        L = g.len[pp, sd]
        frac = ((y - g.A[pp, sd]) * g.E[pp, sd]).sum(axis=1) / (L * L)
        hit = (frac < corner_tol) | (1 - frac < corner_tol)
        if hit.any():
            ok[ii[hit]] = False
            alive[ii[hit]] = False
        keep = ~hit
        ii, pp, sd, y = ii[keep], pp[keep], sd[keep], y[keep]
        X[ii] = y + g.shift[pp, sd]
        P[ii] = g.partner[pp, sd, 0]
        skip[ii] = g.partner[pp, sd, 1]
    return Segments(*(np.concatenate([r[c] for r in rec]) for c in range(5)), ok)


def _integrals(sid: np.ndarray, ta: np.ndarray, tb: np.ndarray, k: int, nus: np.ndarray,
               T: float, chunk: int = 2 * 10**7) -> np.ndarray:
    """(len(nus), k) array of (1/T) int exp(-2 pi i nu t) over each sample's intervals."""
    order = np.argsort(sid, kind="stable")
    sid, ta, tb = sid[order], ta[order], tb[order]
    out = np.zeros((len(nus), k), dtype=complex)
    if len(sid) == 0:
        return out
    present, starts = np.unique(sid, return_index=True)
    step = max(1, chunk // len(sid))
    for c in range(0, len(nus), step):
        nu = nus[c:c + step]
        zero = nu == 0
        w = -2j * math.pi * nu[:, None]
        terms = np.exp(w * ta[None, :]) - np.exp(w * tb[None, :])
        terms /= (2j * math.pi * np.where(zero, 1.0, nu))[:, None]
        if zero.any():
            terms[zero] = (tb - ta)[None, :]
        out[c:c + step][:, present] = np.add.reduceat(terms, starts, axis=1)
    return out / T


def weyl_sweep(S: PolygonSurface, theta, nus: Sequence[float], region=None,
               T: float = 1e5, n_samples: int = 32, seed: int = 1, starts=None) -> np.ndarray:
    """Mean magnitude over samples for every frequency in nus (region None means f = 1)."""
    nus = np.atleast_1d(np.asarray(nus, dtype=float))
    if T <= 0:
        raise ValueError("T must be positive")
    region = as_region(region)
    if region is None:  # f = 1: closed form
        den = np.where(nus == 0, 1.0, math.pi * np.abs(nus) * T)
        return np.where(nus == 0, 1.0, np.abs(np.sin(math.pi * nus * T)) / den)
    u = unit(direction_angle(S, theta))
    rng = np.random.default_rng(seed)
    if starts is None:
        P, X = random_points(S, n_samples, rng)
    else:
        P, X = np.asarray(starts[0]), np.asarray(starts[1], dtype=float)
    target = len(P)
    mags = np.zeros(len(nus))
    got = 0
    for _ in range(20):
        seg = flow_segments(S, u, P, X, T)
        sid, ta, tb = region.intervals(seg, u)
        if not seg.ok.all():
            log.info("resampling %d orbits that hit a singularity", int((~seg.ok).sum()))
        vals = np.abs(_integrals(sid, ta, tb, len(P), nus, T))[:, seg.ok]
        mags += vals.sum(axis=1)
        got += int(seg.ok.sum())
        if got >= target:
            break
        P, X = random_points(S, target - got, rng)
    return mags / got


def weyl_average(S: PolygonSurface, theta, nu: float, region=None,
                 T: float = 1e5, n_samples: int = 32, seed: int = 1) -> float:
    """Sample mean of |(1/T) int_0^T exp(-2 pi i nu t) f(phi_t x) dt|."""
    return float(weyl_sweep(S, theta, [nu], region, T, n_samples, seed)[0])


@dataclass
class CalibrationSweep:
    scales: np.ndarray
    magnitudes: np.ndarray
    nu: float
    T: float

    @property
    def best(self) -> tuple[float, float]:
        i = int(np.argmax(self.magnitudes))
        return float(self.scales[i]), float(self.magnitudes[i])

    def rows(self) -> list[tuple[float, float, float]]:
        return [(float(s), float(m), self.T) for s, m in zip(self.scales, self.magnitudes)]


def calibration_sweep(S: PolygonSurface, theta, nu: float, scales: Sequence[float],
                      region=None, T: float = 1e5, n_samples: int = 32,
                      seed: int = 1) -> CalibrationSweep:
    """Magnitudes at frequencies c * nu for every scale c."""
    scales = np.asarray(scales, dtype=float)
    mags = weyl_sweep(S, theta, scales * nu, region, T, n_samples, seed)
    return CalibrationSweep(scales, mags, nu, T)


# ---------------------------------------------------------------------------
# eigenfunction portraits


@dataclass
class Portrait:
    """Cell averages of exp(2 pi i nu t) along one orbit.

    If nu is an eigenvalue with a continuous eigenfunction, the average over
    a small cell approximates the eigenfunction there (up to one global
    phase) and has modulus near 1; for other frequencies the averages cancel.
    """
    origin: np.ndarray
    h: float
    sums: np.ndarray  # complex, (n_polygons, G, G)
    counts: np.ndarray

    def averages(self, min_count: int = 20) -> np.ndarray:
        with np.errstate(invalid="ignore", divide="ignore"):
            a = self.sums / self.counts
        return np.where(self.counts >= min_count, a, 0)

    def coherence(self, min_count: int = 20) -> float:
        """Visit-weighted mean modulus of the cell averages."""
        a = self.averages(min_count)
        w = np.where(self.counts >= min_count, self.counts, 0)
        return float((np.abs(a) * w).sum() / max(w.sum(), 1))


def eigenfunction_portrait(S: PolygonSurface, theta, nu: float, T: float = 2e4, G: int = 16,
                           dt: float = 0.02, start=None, seed: int = 0) -> Portrait:
    u = unit(direction_angle(S, theta))
    if start is None:
        P, X = random_points(S, 1, np.random.default_rng(seed))
    else:
        P, X = np.array([start[0]]), np.array([start[1]], dtype=float)
    seg = flow_segments(S, u, P, X, T)
    if not seg.ok.all():
        raise ArithmeticError("portrait orbit hit a singularity; choose another start")
    lo = np.min([V.min(axis=0) for V in S.polygons], axis=0)
    hi = np.max([V.max(axis=0) for V in S.polygons], axis=0)
    h = float((hi - lo).max()) / G * (1 + 1e-9)
    m = np.maximum(1, (seg.dt / dt).astype(int))
    k = np.repeat(np.arange(len(m)), m)
    tau = seg.dt[k] * (np.arange(m.sum()) - np.repeat(np.cumsum(m) - m, m) + 0.5) / m[k]
    xy = seg.start[k] + tau[:, None] * u
    z = np.exp(2j * math.pi * nu * (seg.t0[k] + tau))
    ij = np.clip(np.floor((xy - lo) / h).astype(int), 0, G - 1)
    key = (seg.polygon[k] * G + ij[:, 0]) * G + ij[:, 1]
    size = S.n_polygons * G * G
    sums = (np.bincount(key, z.real, size) + 1j * np.bincount(key, z.imag, size)).reshape(-1, G, G)
    counts = np.bincount(key, minlength=size).reshape(-1, G, G)
    return Portrait(lo, h, sums, counts)


def matched_region(portrait: Portrait, n_phases: int = 64, min_count: int = 20) -> GridRegion:
    """Cells where Re(exp(-i alpha) * average) > 0, for the alpha maximizing the total."""
    a = portrait.averages(min_count)
    best, mask = -1.0, None
    for alpha in 2 * math.pi * np.arange(n_phases) / n_phases:
        r = (a * np.exp(-1j * alpha)).real
        tot = r[r > 0].sum()
        if tot > best:
            best, mask = tot, r > 0
    return GridRegion(portrait.origin, portrait.h, mask)

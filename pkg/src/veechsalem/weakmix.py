"""From a tracking run on the Hecke side to a frequency test on the polygon surface.

A constructed boundary point x* is a flow direction of S_n through the
normalizing matrix N: the model vector (x*, 1) is N u for the unit flow
direction u.  The holonomy lattice of S_n becomes kappa * Z[lam]^2 in model
coordinates, so integral cohomology classes have identity parts
v / (kappa * f'(lam)) with v in Z[lam]^2 and f the minimal polynomial of
lam (its derivative generates the different).  The frequency attached to
v is the pairing of that covector with N u.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .conjdyn.cantor import DirectionConstruction, calibration_grid, cantor_direction
from .conjdyn.cocycle import LatticeVector
from .conjdyn.coding import HeckeSystem, hecke_system
from .conjdyn.tracking import default_dictionary, tracking_run
from .polyflow.normalize import normalize_to_standard_group
from .polyflow.surface import build_surface
from .polyflow.weyl import (CalibrationSweep, calibration_sweep, eigenfunction_portrait,
                            matched_region, weyl_average)


def _in_ring(x: float, lam: float, degree: int, H: int = 12, tol: float = 1e-9) -> bool:
    powers = lam ** np.arange(degree)
    for c in itertools.product(range(-H, H + 1), repeat=degree):
        if abs(np.dot(c, powers) - x) < tol:
            return True
    return False


@dataclass
class LatticeScale:
    n: int
    N: np.ndarray
    kappa: float
    different: float  # f'(lam) in the identity embedding


def lattice_scale(n: int) -> LatticeScale:
    """Scale kappa with N * (holonomy lattice of S_n) inside kappa * Z[lam]^2, odd n only."""
    if n % 2 == 0:
        raise ValueError("the Hecke-side coding is set up for odd n")
    system = hecke_system("2qinf", n)
    F = system.field
    lam = system.lam_float()
    Z = normalize_to_standard_group(n)
    S = build_surface(n)
    kappa = Z.N[0, 0] * S.side_length
    V = S.polygons[0]
    H = (Z.N @ (np.roll(V, -1, axis=0) - V).T).T / kappa
    for x in H.ravel():
        if not _in_ring(float(x), lam, F.degree):
            raise ArithmeticError(f"holonomy coordinate {x!r} is not in Z[lam] at scale {kappa}")
    return LatticeScale(n, Z.N, kappa, F.minpoly.derivative().eval_float(lam))


@dataclass
class SurfaceCandidate:
    n: int
    theta: float
    nu: float
    x_star: float

    def to_json(self) -> dict:
        return {"n": self.n, "theta": self.theta, "nu": self.nu, "x_star": self.x_star}


def surface_direction(construction: DirectionConstruction, v: LatticeVector, n: int) -> SurfaceCandidate:
    sc = lattice_scale(n)
    xs = float(construction.x_star)
    w = np.array([xs, 1.0])
    u = np.linalg.solve(sc.N, w)
    v_id = v.embedded(construction.system.field.identity)
    nu = float(v_id @ w / (sc.kappa * sc.different * np.linalg.norm(u)))
    return SurfaceCandidate(n, math.atan2(u[1], u[0]), nu, xs)


@dataclass
class ContrastReport:
    candidate: SurfaceCandidate
    coherence: float
    sweep: CalibrationSweep = field(repr=False)
    best_scale: float
    best_magnitude: float
    random_directions: list[float]
    random_magnitudes: list[float]
    T: float

    def passed(self, hi: float = 0.05, lo: float = 0.02) -> bool:
        return self.best_magnitude >= hi and max(self.random_magnitudes) <= lo

    def to_json(self) -> dict:
        return {"candidate": self.candidate.to_json(), "coherence": self.coherence,
                "best_scale": self.best_scale, "best_magnitude": self.best_magnitude,
                "random_directions": self.random_directions,
                "random_magnitudes": self.random_magnitudes, "T": self.T}


def constructed_candidate(n: int = 5, v: LatticeVector | None = None, K: int = 40, rate: float = 0.3,
                          bits: str | None = None, system: HeckeSystem | None = None):
    """Tracking run with log-targets falling by `rate` per step, and its direction on S_n."""
    system = hecke_system("2qinf", n) if system is None else system
    F = system.field
    if v is None:
        v = LatticeVector((system.lam * system.lam, F.zero))
    D = default_dictionary(system)
    w = v.w_vector(D.embeddings)
    bits = "01" * (K // 2) + "0" * (K % 2) if bits is None else bits
    targets = [w.norm() * math.exp(-rate * k) for k in range(len(bits) + 1)]
    run = tracking_run(w, targets, bits, D)
    con = cantor_direction(run, system)
    return run, con, surface_direction(con, v, n)


def weak_mixing_contrast(n: int = 5, v: LatticeVector | None = None, T: float = 1e5,
                         n_samples: int = 8, n_random: int = 20, seed: int = 1, G: int = 16,
                         scales=None, portrait_T: float = 2e4) -> ContrastReport:
    """Weyl magnitudes for a constructed direction against Lebesgue-random ones.

    The test function is the indicator of the grid cells where a portrait
    of the candidate eigenfunction, taken from one independent orbit, has
    positive real part.  The random directions are tested with the same
    function at the best (scale, nu) of the constructed direction.
    """
    _, _, cand = constructed_candidate(n, v)
    S = build_surface(n)
    por = eigenfunction_portrait(S, cand.theta, cand.nu, portrait_T, G, seed=seed + 1000)
    region = matched_region(por)
    scales = calibration_grid() if scales is None else np.asarray(scales)
    sw = calibration_sweep(S, cand.theta, cand.nu, scales, region, T, n_samples, seed)
    c, m = sw.best
    rng = np.random.default_rng(seed)
    dirs = [float(x) for x in rng.uniform(0, 2 * math.pi, n_random)]
    mags = [weyl_average(S, th, c * cand.nu, region, T, n_samples, seed) for th in dirs]
    return ContrastReport(cand, por.coherence(), sw, c, m, dirs, mags, T)

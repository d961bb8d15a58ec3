"""Conjugating the polygon's own Veech generators into the triangle-group model."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from ..trigroup import Family, TriangleFamily, build_group
from .cylinders import commensurability, cylinder_decomposition
from .surface import build_surface


class NormalizationError(ArithmeticError):
    def __init__(self, msg: str, residuals: dict):
        super().__init__(f"{msg}: {residuals}")
        self.residuals = residuals


def rotation(phi: float) -> np.ndarray:
    c, s = math.cos(phi), math.sin(phi)
    return np.array([[c, -s], [s, c]])


def fixed_point(M: np.ndarray) -> complex:
    """Fixed point in the upper half-plane of an elliptic matrix."""
    a, b, c, d = M.ravel()
    disc = (d - a) ** 2 + 4 * b * c
    if disc >= 0 or c == 0:
        raise ValueError("matrix is not elliptic")
    z = complex(a - d, math.sqrt(-disc)) / (2 * c)
    return z if z.imag > 0 else z.conjugate()


@dataclass
class Normalization:
    n: int
    model: TriangleFamily
    N: np.ndarray
    rotation: np.ndarray  # the polygon's rotation generator
    shear: np.ndarray  # the horizontal parabolic, shear by the twist
    elliptic: np.ndarray  # model elliptic E
    parabolic: np.ndarray  # model parabolic T
    twist: float
    exponents: tuple[int, int]  # powers of (rotation, shear) that matched
    residual_rotation: float
    residual_shear: float

    def to_json(self) -> dict:
        return {"n": self.n, "model": str(self.model), "N": self.N.tolist(),
                "twist": self.twist, "exponents": list(self.exponents),
                "residual_rotation": self.residual_rotation, "residual_shear": self.residual_shear}


def _model(n: int):
    """(family, elliptic, parabolic) matching S_n's rotation and horizontal shear."""
    if n == 4:
        G = build_group(Family.TWO_Q_INF, 3)
        return G.family, G.s, G.s * G.t
    if n % 2:
        G = build_group(Family.TWO_Q_INF, n)
        return G.family, G.t, G.s * G.t
    G = build_group(Family.Q_INF_INF, n // 2)
    return G.family, G.s, G.t


def normalize_to_standard_group(n: int, tol: float = 1e-9) -> Normalization:
    """Upper-triangular N with N r N^-1 = E and N P N^-1 = +-T.

    r is the rotation by pi/n (odd n) or 2pi/n (even n); P is the shear
    [[1, L], [0, 1]] with L the least common multiple of the horizontal
    cylinder moduli.  Because N fixes infinity it carries the horizontal
    parabolic to the model's; its diagonal and shear part move i, the
    rotation centre, onto the fixed point of E.
    """
    if n < 4 or n == 6:
        raise ValueError("n must be 4, 5, or at least 7")
    S = build_surface(n)
    cyl = cylinder_decomposition(S, 0.0)
    rep = commensurability(cyl)
    if not rep.commensurable:
        raise NormalizationError("horizontal moduli are not commensurable",
                                 {"max_residual": rep.max_residual})
    L = rep.twist
    r = rotation(math.pi / n if n % 2 else 2 * math.pi / n)
    P = np.array([[1.0, L], [0.0, 1.0]])
    fam, E_ex, T_ex = _model(n)
    E = np.array(E_ex.to_floats())
    T = np.array(T_ex.to_floats())
    z = fixed_point(E)
    a = math.sqrt(z.imag)
    N = np.array([[a, z.real / a], [0.0, 1 / a]])
    Ni = np.linalg.inv(N)
    best = None
    for e1, e2 in itertools.product((1, -1), repeat=2):
        R = N @ np.linalg.matrix_power(r, e1) @ Ni
        Q = N @ np.linalg.matrix_power(P, e2) @ Ni
        res_r = min(np.abs(R - E).max(), np.abs(R + E).max())
        res_p = min(np.abs(Q - T).max(), np.abs(Q + T).max())
        if best is None or max(res_r, res_p) < max(best[2], best[3]):
            best = (e1, e2, res_r, res_p)
    e1, e2, res_r, res_p = best
    if max(res_r, res_p) >= tol:
        raise NormalizationError("no generator pairing conjugates into the model",
                                 {"rotation": res_r, "shear": res_p})
    return Normalization(n, fam, N, r, P, E, T, L, (e1, e2), float(res_r), float(res_p))

"""Nearest-multiple boundary expansion for Hecke groups.

A point x in [-lam/2, lam/2) is sent to x' = -1/x - r*lam with
r = floor(-1/(x*lam) + 1/2), so that x = Q_r(x') for the Moebius map of
Q_r = [[0, -1], [1, r*lam]].  Digits with |r| >= 2 are full branches once
lam^2 > 4/3, which is the case for q >= 4.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from ..exactfield import FieldElement, RealAlgebraicField
from ..trigroup import Family, FieldMatrix2, GroupPresentation, TriangleFamily, build_group


def trace_field_embeddings(F: RealAlgebraicField, tol: float = 1e-9) -> list[int]:
    """One field embedding per embedding of Q(theta^2), identity first.

    Embeddings that agree on theta^2 give cocycles that differ by a sign
    conjugation, so only one representative of each class is kept.
    """
    roots = F.float_roots()
    reps: list[int] = []
    for i in F.embedding_order():
        if all(abs(roots[i] ** 2 - roots[j] ** 2) > tol for j in reps):
            reps.append(i)
    return reps


@dataclass(frozen=True)
class HeckeSystem:
    """Coding data for the Hecke group containing the given triangle group.

    Delta(q, inf, inf) sits with index 2 in Delta(2, 2q, inf), so its
    dynamics run in the latter.
    """
    family: TriangleFamily
    hecke_q: int

    @property
    def group(self) -> GroupPresentation:
        return build_group(Family.TWO_Q_INF, self.hecke_q)

    @property
    def field(self) -> RealAlgebraicField:
        return self.group.field

    @property
    def lam(self) -> FieldElement:
        return self.group.lam

    @property
    def embeddings(self) -> list[int]:
        return trace_field_embeddings(self.field)

    @property
    def conjugate_embeddings(self) -> list[int]:
        return self.embeddings[1:]

    def lam_float(self, sigma: int | None = None) -> float:
        return self.lam.embed_float(self.field.identity if sigma is None else sigma)

    def digit_matrix(self, r: int) -> FieldMatrix2:
        return digit_matrix(self.lam, r)


@lru_cache(maxsize=None)
def hecke_system(family: Family | str, q: int) -> HeckeSystem:
    family = Family.parse(family) if isinstance(family, str) else family
    fam = TriangleFamily(family, q)
    return HeckeSystem(fam, q if family is Family.TWO_Q_INF else 2 * q)


def digit_matrix(lam: FieldElement, r: int) -> FieldMatrix2:
    F = lam.field
    return FieldMatrix2(F.zero, F(-1), F.one, lam * r)


def digit_matrix_float(lam: float, r) -> np.ndarray:
    return np.array([[0.0, -1.0], [1.0, r * lam]])


def mobius(M, x):
    """(a x + b) / (c x + d) for an exact or float 2x2 matrix."""
    if isinstance(M, FieldMatrix2):
        return (M.a * x + M.b) / (M.c * x + M.d)
    (a, b), (c, d) = M
    return (a * x + b) / (c * x + d)


@dataclass(frozen=True)
class CodingStep:
    r: int
    x_next: object
    Q: FieldMatrix2 | None
    terminated: bool = False


def _floor_exact(z: FieldElement) -> int:
    F = z.field
    r = math.floor(float(z))
    while (z - r).sign(F.identity) < 0:
        r -= 1
    while (z - (r + 1)).sign(F.identity) >= 0:
        r += 1
    return r


def coding_step(x, lam) -> CodingStep:
    """One step of the expansion.  Exact when x and lam are field elements.

    x = 0 is a vertical saddle connection: the step is flagged terminated.
    """
    if isinstance(x, (int, Fraction)) and isinstance(lam, FieldElement):
        x = lam.field(x)
    if isinstance(x, FieldElement):
        if x.is_zero():
            return CodingStep(0, None, None, True)
        y = -x.inv()
        r = _floor_exact(y / lam + Fraction(1, 2))
        return CodingStep(r, y - lam * r, digit_matrix(lam, r))
    if x == 0:
        return CodingStep(0, None, None, True)
    lam_f = float(lam)
    y = -1.0 / x
    r = math.floor(y / lam_f + 0.5)
    Q = digit_matrix(lam, r) if isinstance(lam, FieldElement) else None
    return CodingStep(r, y - r * lam_f, Q)


def code(x, lam, n: int) -> tuple[list[int], object]:
    """First n digits of x and the remainder point; stops early on termination."""
    digits = []
    for _ in range(n):
        st = coding_step(x, lam)
        if st.terminated:
            break
        digits.append(st.r)
        x = st.x_next
    return digits, x


def code_mp(x, lam, n: int) -> list[int]:
    """Digits of an mpmath number; the working precision is the caller's."""
    import mpmath

    digits = []
    for _ in range(n):
        if x == 0:
            break
        y = -1 / x
        r = int(mpmath.floor(y / lam + mpmath.mpf(1) / 2))
        digits.append(r)
        x = y - r * lam
    return digits


def digits_product(lam: FieldElement, digits) -> FieldMatrix2:
    """Exact Q_{r1} Q_{r2} ... Q_{rn}."""
    P = FieldMatrix2.identity(lam.field)
    for r in digits:
        P = P * digit_matrix(lam, r)
    return P


@dataclass
class CodingTrajectory:
    """Digits of x0 with renormalized float products in each embedding.

    products[i] * exp(log_scale[i]) is Q_{r1}...Q_{rn} in embedding
    embeddings[i]; the cocycle itself is its transpose.
    """
    x0: float
    digits: list[int]
    embeddings: list[int]
    products: np.ndarray
    log_scale: np.ndarray
    log_norms: np.ndarray  # (n_steps, n_embeddings)
    exact: FieldMatrix2 | None = None
    terminated: bool = False


def trajectory(system: HeckeSystem, x0: float, n: int, exact_shadow: bool = False,
               embeddings: list[int] | None = None) -> CodingTrajectory:
    emb = system.embeddings if embeddings is None else embeddings
    lam_id = system.lam_float()
    lams = np.array([system.lam_float(s) for s in emb])
    P = np.broadcast_to(np.eye(2), (len(emb), 2, 2)).copy()
    scale = np.zeros(len(emb))
    logs = np.empty((n, len(emb)))
    digits: list[int] = []
    exact = FieldMatrix2.identity(system.field) if exact_shadow else None
    x = float(x0)
    terminated = False
    for k in range(n):
        if x == 0.0:
            terminated = True
            logs = logs[:k]
            break
        y = -1.0 / x
        r = math.floor(y / lam_id + 0.5)
        x = y - r * lam_id
        digits.append(r)
        c0 = P[:, :, 1].copy()
        c1 = -P[:, :, 0] + (r * lams)[:, None] * P[:, :, 1]
        P[:, :, 0], P[:, :, 1] = c0, c1
        m = np.abs(P).max(axis=(1, 2))
        P /= m[:, None, None]
        scale += np.log(m)
        logs[k] = scale + np.log(np.linalg.norm(P, 2, axis=(1, 2)))
        if exact is not None:
            exact = exact * system.digit_matrix(r)
    return CodingTrajectory(float(x0), digits, list(emb), P, scale, logs, exact, terminated)

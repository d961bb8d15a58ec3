"""Directions coded by tracking runs, and their eigenvalue candidates."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import mpmath
import numpy as np

from ..trigroup import FieldMatrix2
from .coding import HeckeSystem, code_mp, digit_matrix, mobius
from .cocycle import LatticeVector
from .tracking import TrackingRun


def calibration_grid(n: int = 1000, lo: float = -2.0, hi: float = 2.0) -> np.ndarray:
    """Log-spaced scales 10^(lo + (hi-lo) k / n), k = 0..n-1 (contains 1 when n is even)."""
    return 10.0 ** (lo + (hi - lo) * np.arange(n) / n)


def _bits_needed(P: FieldMatrix2) -> int:
    F = P.field
    big = max(max(abs(c) for c in x.nums) for x in P.entries())
    return 2 * max(big.bit_length(), 1) + 4 * F.degree + 64


def _to_mpf(x: Fraction) -> mpmath.mpf:
    return mpmath.mpf(x.numerator) / x.denominator


@dataclass
class DirectionConstruction:
    bits: str
    digits: list[int]
    checkpoints: list[int]
    intervals: list[tuple[mpmath.mpf, mpmath.mpf]]  # image of the base interval at each checkpoint
    x_star: mpmath.mpf
    precision: int
    system: HeckeSystem = field(repr=False)
    product: FieldMatrix2 = field(repr=False)
    longest_word: int = 0

    def __float__(self) -> float:
        return float(self.x_star)

    def recode(self, n: int | None = None) -> list[int]:
        """Digits of x* recomputed from scratch at the construction's precision."""
        n = len(self.digits) if n is None else n
        with mpmath.workprec(self.precision):
            lo, hi = self.system.lam.embed(self.system.field.identity, self.precision + 16)
            lam = _to_mpf((lo + hi) / 2)
            return code_mp(mpmath.mpf(self.x_star), lam, n)

    def consistency(self, n: int = 200) -> tuple[int, bool]:
        """(number of leading digits dropped, agreement) for the first n recoded digits.

        Agreement means recoded[p:n] == digits[p:n] with p <= the longest
        dictionary word.
        """
        n = min(n, len(self.digits))
        rec = self.recode(n)
        for p in range(self.longest_word + 1):
            if rec[p:n] == self.digits[p:n]:
                return p, True
        return self.longest_word, False

    def to_json(self) -> dict:
        with mpmath.workprec(self.precision):
            return {"bits": self.bits, "digits": self.digits, "checkpoints": self.checkpoints,
                    "intervals": [[mpmath.nstr(a, 40), mpmath.nstr(b, 40)] for a, b in self.intervals],
                    "x_star": mpmath.nstr(self.x_star, 60), "precision_bits": self.precision}


def cantor_direction(run: TrackingRun, system: HeckeSystem | None = None) -> DirectionConstruction:
    """Nested images of the base interval under the run's digit prefixes.

    Products are exact in Z[lam]; endpoints are evaluated with enough bits to
    resolve the final interval, and x* is its midpoint.
    """
    if not run.steps:
        raise ValueError("empty run has no direction")
    system = run.dictionary.system if system is None else system
    lam = system.lam
    F = system.field
    sg = F.identity
    half = lam * Fraction(1, 2)
    digits = run.digits
    P = FieldMatrix2.identity(F)
    prods = []
    m = 0
    for w, b in run.steps:
        for r in w + b:
            P = P * digit_matrix(lam, r)
        prods.append(P)
    prec = _bits_needed(P)
    intervals = []
    with mpmath.workprec(prec):
        for Pk in prods:
            ends = []
            for e in (-half, half):
                lo, hi = mobius(Pk, e).embed(sg, prec)
                ends.append(_to_mpf((lo + hi) / 2))
            intervals.append((min(ends), max(ends)))
        for (a0, b0), (a1, b1) in zip(intervals, intervals[1:]):
            if not (a0 <= a1 and b1 <= b0 and b1 - a1 < b0 - a0):
                raise ArithmeticError("nested intervals did not shrink; raise the precision")
        x_star = (intervals[-1][0] + intervals[-1][1]) / 2
    return DirectionConstruction(run.bits, digits, list(run.checkpoints), intervals, x_star, prec,
                                 system, P, run.longest_word)


@dataclass
class EigenvalueCandidate:
    nu: float
    eta: float
    e_u: np.ndarray
    e_s: np.ndarray
    depth: int
    trivial: bool
    scales: np.ndarray

    def to_json(self) -> dict:
        return {"nu": self.nu, "eta": self.eta, "e_u": self.e_u.tolist(), "e_s": self.e_s.tolist(),
                "depth": self.depth, "trivial": self.trivial,
                "scales": [float(s) for s in self.scales]}


def eigenvalue_candidate(v: LatticeVector, construction: DirectionConstruction,
                         tol: float = 1e-12, scales: np.ndarray | None = None) -> EigenvalueCandidate:
    """Coordinates (nu, eta) of the identity block of v along the expanding and
    contracting directions of the identity cocycle A_n = (Q_{r1}...Q_{rn})^T.

    The expanding direction is the leading right singular vector of A_n, read
    off at successive checkpoints until two consecutive depths agree to tol.
    """
    system = construction.system
    sg = system.field.identity
    lam = system.lam_float()
    P = np.eye(2)
    prev = None
    e_u = None
    depth = 0
    marks = set(construction.checkpoints)
    for n, r in enumerate(construction.digits, 1):
        P = P @ np.array([[0.0, -1.0], [1.0, r * lam]])
        P /= np.abs(P).max()
        if n in marks:
            u = np.linalg.svd(P.T)[2][0]
            u = u if u[1] > 0 else -u
            if prev is not None and np.linalg.norm(u - prev) < tol:
                e_u, depth = u, n
                break
            prev = u
    if e_u is None:
        raise ArithmeticError("expanding direction did not converge within the construction")
    e_s = np.array([-e_u[1], e_u[0]])
    vid = v.embedded(sg)
    nu, eta = float(vid @ e_u), float(vid @ e_s)
    scale_norm = max(1.0, float(np.linalg.norm(vid)))
    return EigenvalueCandidate(nu, eta, e_u, e_s, depth, abs(nu) <= 1e-12 * scale_norm,
                               calibration_grid() if scales is None else scales)

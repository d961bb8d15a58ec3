"""Target tracking along the boundary expansion.

Each step appends a correction word (contracting or expanding the conjugate
part of the cocycle) followed by one of two branch digits chosen by a bit.
The correction is picked before the bit is read, so different bit strings
give different digit strings from the first differing bit on.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from ..exactfield import FieldElement
from .coding import HeckeSystem, digit_matrix, digits_product, hecke_system, mobius
from .cocycle import BudgetExhausted, WVector


def branch_image(system: HeckeSystem, digits: Sequence[int]) -> tuple[FieldElement, FieldElement]:
    """Exact endpoints (sorted) of the image of [-lam/2, lam/2] under the digit word."""
    P = digits_product(system.lam, digits)
    half = system.lam * Fraction(1, 2)
    a, b = mobius(P, -half), mobius(P, half)
    sg = system.field.identity
    return (a, b) if (b - a).sign(sg) > 0 else (b, a)


def disjoint_branches(system: HeckeSystem, u: Sequence[int], w: Sequence[int]) -> bool:
    """Closures of both images are disjoint and inside the open base interval."""
    sg = system.field.identity
    half = system.lam * Fraction(1, 2)
    (a0, a1), (b0, b1) = branch_image(system, u), branch_image(system, w)
    inside = all((x + half).sign(sg) > 0 and (half - x).sign(sg) > 0 for x in (a0, a1, b0, b1))
    apart = (b0 - a1).sign(sg) > 0 or (a0 - b1).sign(sg) > 0
    return inside and apart


def _cocycle_mats(lams: np.ndarray, digits: Sequence[int]) -> np.ndarray:
    """(Q_{r1}...Q_{rn})^T in each embedding, shape (k, 2, 2)."""
    P = np.broadcast_to(np.eye(2), (len(lams), 2, 2)).copy()
    for r in digits:
        Q = np.zeros((len(lams), 2, 2))
        Q[:, 0, 1] = -1.0
        Q[:, 1, 0] = 1.0
        Q[:, 1, 1] = r * lams
        P = P @ Q
    return np.transpose(P, (0, 2, 1))


@dataclass
class DigitDictionary:
    """Finite set of correction words, each paired with both branch words."""
    system: HeckeSystem
    embeddings: tuple[int, ...]
    words: list[tuple[int, ...]]
    branches: tuple[tuple[int, ...], tuple[int, ...]]
    mats: np.ndarray  # (n_words, 2, k, 2, 2): cocycle of word+branch on each conjugate block
    cost: np.ndarray  # (n_words,): largest identity log-norm over both branches
    C1: float

    @classmethod
    def build(cls, system: HeckeSystem, max_len: int = 4, max_digit: int = 5,
              branches: tuple[tuple[int, ...], tuple[int, ...]] = ((2,), (-2,)),
              embeddings: Sequence[int] | None = None) -> "DigitDictionary":
        if not disjoint_branches(system, branches[0], branches[1]):
            raise ValueError("branch words must have disjoint images inside the base interval")
        emb = tuple(system.conjugate_embeddings if embeddings is None else embeddings)
        lams = np.array([system.lam_float(s) for s in emb])
        lam_id = np.array([system.lam_float()])
        alphabet = [r for k in range(2, max_digit + 1) for r in (k, -k)]
        words = [w for n in range(max_len + 1) for w in itertools.product(alphabet, repeat=n)]
        mats = np.empty((len(words), 2, len(emb), 2, 2))
        cost = np.empty(len(words))
        c1 = 0.0
        for i, w in enumerate(words):
            cs = []
            for j, b in enumerate(branches):
                M = _cocycle_mats(lams, w + b)
                mats[i, j] = M
                s = np.linalg.svd(M, compute_uv=False)
                c1 = max(c1, float(np.log(s[:, 0]).max()), float(-np.log(s[:, -1]).min()))
                cs.append(np.log(np.linalg.norm(_cocycle_mats(lam_id, w + b)[0], 2)))
            cost[i] = max(cs)
        return cls(system, emb, words, tuple(branches), mats, cost, c1)

    @property
    def longest(self) -> int:
        return max(len(w) for w in self.words) + max(len(b) for b in self.branches)

    def choose(self, v: np.ndarray, margin: float, contract: bool) -> int:
        """Cheapest correction word moving ||v|| by the margin for both branches."""
        out = np.einsum("wbkij,kj->wbki", self.mats, v)
        norms = np.linalg.norm(out, axis=3).max(axis=2)  # (word, branch)
        base = np.linalg.norm(v, axis=1).max()
        ratio = np.log(norms / base)
        ok = ratio.max(axis=1) < -margin if contract else ratio.min(axis=1) > margin
        idx = np.nonzero(ok)[0]
        if len(idx) == 0:
            best = ratio.max(axis=1).min() if contract else ratio.min(axis=1).max()
            kind = "contraction" if contract else "expansion"
            raise BudgetExhausted(f"dictionary has no {kind} word for this vector "
                                  f"(best log ratio {best:.3f}, margin {margin})", float(best))
        return int(idx[np.argmin(self.cost[idx])])


_DEFAULT: dict = {}


def default_dictionary(system: HeckeSystem) -> DigitDictionary:
    d = _DEFAULT.get(system)
    if d is None:
        d = _DEFAULT[system] = DigitDictionary.build(system)
    return d


@dataclass
class TrackingRun:
    v: WVector
    targets: list[float]
    C0: float  # largest step between consecutive log-targets
    margin: float
    C1: float
    bits: str
    steps: list[tuple[tuple[int, ...], tuple[int, ...]]]  # (correction, branch) per step
    checkpoints: list[int]  # m_1 < m_2 < ...
    errors: list[float]  # e_k at the checkpoints
    norms: list[float]
    longest_word: int
    dictionary: DigitDictionary = field(repr=False)

    @property
    def digits(self) -> list[int]:
        return [r for w, b in self.steps for r in w + b]

    @property
    def delta0(self) -> float:
        return math.log(self.v.norm()) - math.log(self.targets[0])

    @property
    def bound(self) -> float:
        """|ln||v|| - ln a_0| + C1."""
        return abs(self.delta0) + self.C1

    @property
    def guaranteed_bound(self) -> float:
        """What the step rule forces for arbitrary targets: max(|delta0|, C1 + C0)."""
        return max(abs(self.delta0), self.C1 + self.C0)

    def to_json(self) -> dict:
        return {"bits": self.bits, "digits": self.digits, "checkpoints": self.checkpoints,
                "errors": self.errors, "C0": self.C0, "C1": self.C1, "margin": self.margin,
                "bound": self.bound, "steps": [[list(w), list(b)] for w, b in self.steps]}


def tracking_run(v: WVector, targets: Sequence[float], bits: str,
                 dictionary: DigitDictionary | None = None, system: HeckeSystem | None = None,
                 min_margin: float = 0.25) -> TrackingRun:
    """Steer ||A_m v|| along the targets a_k while the bits choose the branches.

    At step k: contract if ||v_k|| > a_k, otherwise expand, then append the
    branch word selected by bit k.  targets needs len(bits) + 1 entries
    (a_0 ... a_K); a single value is repeated.
    """
    if dictionary is None:
        dictionary = default_dictionary(system if system is not None else hecke_system("2qinf", 5))
    if tuple(v.embeddings) != dictionary.embeddings:
        raise ValueError("vector and dictionary use different embeddings")
    K = len(bits)
    a = list(targets)
    if len(a) == 1:
        a = a * (K + 1)
    if len(a) < K + 1:
        raise ValueError("need one target per checkpoint plus a_0")
    la = np.log(np.asarray(a[:K + 1], dtype=float))
    C0 = float(np.abs(np.diff(la)).max()) if K else 0.0
    margin = max(C0, min_margin)
    cur = v.blocks.copy()
    steps, checkpoints, errors, norms = [], [], [], []
    m = 0
    for k, bit in enumerate(bits):
        nrm = np.linalg.norm(cur, axis=1).max()
        i = dictionary.choose(cur, margin, contract=math.log(nrm) > la[k])
        j = 0 if bit == "0" else 1
        cur = np.einsum("kij,kj->ki", dictionary.mats[i, j], cur)
        w, b = dictionary.words[i], dictionary.branches[j]
        steps.append((w, b))
        m += len(w) + len(b)
        checkpoints.append(m)
        nrm = float(np.linalg.norm(cur, axis=1).max())
        norms.append(nrm)
        errors.append(abs(math.log(nrm) - la[k + 1]))
    return TrackingRun(v, [float(x) for x in a[:K + 1]], C0, margin, dictionary.C1, bits,
                       steps, checkpoints, errors, norms, dictionary.longest, dictionary)

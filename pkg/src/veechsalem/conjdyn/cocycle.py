"""Conjugate cocycles: vectors in the sum of conjugate planes, Lyapunov ratios,
and contraction / expansion words built from a Salem element."""

from __future__ import annotations

import logging
import math
from functools import lru_cache
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from ..exactfield import FieldElement
from ..trigroup import (Family, FieldMatrix2, GroupPresentation, GroupWord, build_group,
                        evaluate_word)
from .coding import hecke_system, trace_field_embeddings

log = logging.getLogger(__name__)


class BudgetExhausted(RuntimeError):
    """No word in the search budget achieved the requested margin."""

    def __init__(self, msg: str, best_log_ratio: float):
        super().__init__(msg)
        self.best_log_ratio = best_log_ratio


@dataclass
class WVector:
    """One 2-vector per conjugate embedding; the norm is the largest block norm."""
    blocks: np.ndarray
    embeddings: tuple[int, ...]
    identity_block: np.ndarray | None = None

    def __post_init__(self):
        self.blocks = np.asarray(self.blocks, dtype=float).reshape(len(self.embeddings), 2)

    def norm(self) -> float:
        return float(np.linalg.norm(self.blocks, axis=1).max()) if len(self.blocks) else 0.0

    def is_zero(self) -> bool:
        return not np.any(self.blocks)

    def scaled(self, c: float) -> "WVector":
        idb = None if self.identity_block is None else self.identity_block * c
        return WVector(self.blocks * c, self.embeddings, idb)

    def apply(self, mats: np.ndarray) -> "WVector":
        """Blockwise action of per-embedding matrices of shape (k, 2, 2)."""
        return WVector(np.einsum("kij,kj->ki", mats, self.blocks), self.embeddings)

    @classmethod
    def random_unit(cls, embeddings: Sequence[int], rng: np.random.Generator) -> "WVector":
        b = rng.standard_normal((len(embeddings), 2))
        v = cls(b, tuple(embeddings))
        return v.scaled(1.0 / v.norm())


@dataclass(frozen=True)
class LatticeVector:
    """A pair (u1, u2) in Z[lam]^2."""
    u: tuple[FieldElement, FieldElement]

    def __post_init__(self):
        for x in self.u:
            if x.den != 1:
                raise ValueError("lattice vectors need integral power-basis coefficients")

    def __mul__(self, m: int) -> "LatticeVector":
        return LatticeVector((self.u[0] * m, self.u[1] * m))

    __rmul__ = __mul__

    def embedded(self, sigma: int) -> np.ndarray:
        return np.array([self.u[0].embed_float(sigma), self.u[1].embed_float(sigma)])

    def w_vector(self, embeddings: Sequence[int]) -> WVector:
        F = self.u[0].field
        conj = [s for s in embeddings if s != F.identity]
        return WVector(np.array([self.embedded(s) for s in conj]), tuple(conj),
                       self.embedded(F.identity))


def embedded_matrices(M: FieldMatrix2, embeddings: Sequence[int]) -> np.ndarray:
    return np.array([[[M.a.embed_float(s), M.b.embed_float(s)],
                      [M.c.embed_float(s), M.d.embed_float(s)]] for s in embeddings])


@dataclass
class EmbeddedCocycle:
    """Float images of group words in a fixed list of embeddings (identity first)."""
    group: GroupPresentation
    embeddings: list[int]

    @classmethod
    def of(cls, G: GroupPresentation) -> "EmbeddedCocycle":
        return cls(G, trace_field_embeddings(G.field))

    @property
    def conjugates(self) -> list[int]:
        return self.embeddings[1:]

    def matrices(self, w: GroupWord | FieldMatrix2, conjugates_only: bool = True) -> np.ndarray:
        M = w if isinstance(w, FieldMatrix2) else evaluate_word(self.group, w)
        return embedded_matrices(M, self.conjugates if conjugates_only else self.embeddings)


# ---------------------------------------------------------------------------
# Lyapunov ratio


def lyapunov_ratio(family: Family | str, q: int, sigma: int, n_steps: int, n_samples: int,
                   seed: int, renorm_every: int = 4) -> tuple[float, float]:
    """Mean and standard error of ln||A_n^sigma|| / ln||A_n^id|| over random x0.

    sigma is a 0-based embedding index of the coding field.  The starting
    points are uniform in the base interval; the float orbit is a numerical
    pseudo-orbit, which has the same statistics.
    """
    system = hecke_system(family, q)
    F = system.field
    lam_id = system.lam_float()
    lam_s = system.lam_float(sigma)
    rng = np.random.default_rng(seed)
    x = rng.uniform(-lam_id / 2, lam_id / 2, n_samples)
    P = np.zeros((2, n_samples, 2, 2))
    P[:, :, 0, 0] = P[:, :, 1, 1] = 1.0
    lams = np.array([lam_id, lam_s])[:, None]
    scale = np.zeros((2, n_samples))
    for k in range(n_steps):
        zero = x == 0.0
        if zero.any():
            log.info("resampling %d starting points that hit a saddle connection", zero.sum())
            x[zero] = rng.uniform(-lam_id / 2, lam_id / 2, zero.sum())
        y = -1.0 / x
        r = np.floor(y / lam_id + 0.5)
        x = y - r * lam_id
        c0 = P[:, :, :, 1].copy()
        P[:, :, :, 1] = -P[:, :, :, 0] + (r[None, :] * lams)[:, :, None] * c0
        P[:, :, :, 0] = c0
        if k % renorm_every == renorm_every - 1:
            m = np.abs(P).max(axis=(2, 3))
            P /= m[:, :, None, None]
            scale += np.log(m)
    L = scale + np.log(np.linalg.norm(P, 2, axis=(2, 3)))
    if sigma == F.identity:
        ratio = np.ones(n_samples)
    else:
        ratio = L[1] / L[0]
    mean = float(ratio.mean())
    stderr = float(ratio.std(ddof=1) / math.sqrt(n_samples)) if n_samples > 1 else 0.0
    return mean, stderr


def log_norm_series(family: Family | str, q: int, n_steps: int, n_samples: int, seed: int
                    ) -> tuple[list[int], np.ndarray]:
    """Sample means of ln||A_k^sigma|| for k = 1..n_steps in every embedding.

    Returns (embeddings, array of shape (n_steps, len(embeddings))).  Uses
    the same starting points as lyapunov_ratio for the same seed.
    """
    system = hecke_system(family, q)
    emb = system.embeddings
    lam_id = system.lam_float()
    lams = np.array([system.lam_float(s) for s in emb])[:, None]
    rng = np.random.default_rng(seed)
    x = rng.uniform(-lam_id / 2, lam_id / 2, n_samples)
    P = np.zeros((len(emb), n_samples, 2, 2))
    P[:, :, 0, 0] = P[:, :, 1, 1] = 1.0
    scale = np.zeros((len(emb), n_samples))
    out = np.empty((n_steps, len(emb)))
    for k in range(n_steps):
        zero = x == 0.0
        if zero.any():
            log.info("resampling %d starting points that hit a saddle connection", zero.sum())
            x[zero] = rng.uniform(-lam_id / 2, lam_id / 2, zero.sum())
        y = -1.0 / x
        r = np.floor(y / lam_id + 0.5)
        x = y - r * lam_id
        c0 = P[:, :, :, 1].copy()
        P[:, :, :, 1] = -P[:, :, :, 0] + (r[None, :] * lams)[:, :, None] * c0
        P[:, :, :, 0] = c0
        m = np.abs(P).max(axis=(2, 3))
        P /= m[:, :, None, None]
        scale += np.log(m)
        out[k] = (scale + np.log(np.linalg.norm(P, 2, axis=(2, 3)))).mean(axis=1)
    return list(emb), out


# ---------------------------------------------------------------------------
# growth family and contraction words


def growth_family(G: GroupPresentation, k_max: int | None = None
                  ) -> Iterator[tuple[int, GroupWord, float]]:
    """Powers (s.t)^k with the smallest conjugate operator norm.

    The conjugates of a parabolic are parabolic with translation length
    scaled by the conjugate of lam, so the norms grow linearly in k.
    """
    coc = EmbeddedCocycle.of(G)
    if not coc.conjugates:
        raise ValueError("growth needs a field of degree >= 2")
    base = GroupWord((("s", 1), ("t", 1)))
    B = coc.matrices(base)
    M = np.broadcast_to(np.eye(2), B.shape).copy()
    k = 0
    while k_max is None or k <= k_max:
        norms = np.linalg.norm(M, 2, axis=(1, 2))
        yield k, base ** k if k else GroupWord(()), float(norms.min())
        M = M @ B
        k += 1


@dataclass
class CorrectionWord:
    word: GroupWord
    n: int
    k: int
    log_ratio: float  # ln(||A v|| / ||v||)


def salem_word(family: Family | str, q: int) -> GroupWord:
    """The Salem element used for the family: the tabled one, or t^2.s at q = 5."""
    from .. import tables

    family = Family.parse(family) if isinstance(family, str) else family
    try:
        return GroupWord.parse(tables.row(family, q).word)
    except KeyError:
        pass
    if family is Family.TWO_Q_INF and q == 5:
        return GroupWord.parse("t^2.s")
    from ..salem import Budget, search

    rep = search((family, q), Budget(4, 8, 10**6), certify_limit=1)
    if not rep.found:
        raise LookupError(f"no Salem element found for {family.value} q={q}")
    return rep.found[0].word


@lru_cache(maxsize=256)
def _embedded_word(fam, w: GroupWord, embeddings: tuple[int, ...]) -> np.ndarray:
    G = build_group(fam.variant, fam.q)
    return embedded_matrices(evaluate_word(G, w), embeddings)


def _growth_exponents(k_max: int) -> list[int]:
    return [e for k in range(1, k_max + 1) for e in (k, -k)]


def _correction(v: WVector, G: GroupPresentation, g: GroupWord, C0: float, n_max: int,
                k_max: int, expand: bool) -> CorrectionWord:
    parabolic = GroupWord((("s", 1), ("t", 1)))
    Mg = _embedded_word(G.family, g, tuple(v.embeddings))
    base = _embedded_word(G.family, parabolic, tuple(v.embeddings))
    inv = np.linalg.inv(base)
    exps = _growth_exponents(k_max)
    Mk = np.empty((len(exps),) + base.shape)
    fwd, bwd = base.copy(), inv.copy()
    for i in range(0, len(exps), 2):
        Mk[i], Mk[i + 1] = fwd, bwd
        fwd, bwd = fwd @ base, bwd @ inv
    vn = np.empty((n_max + 1,) + v.blocks.shape)
    vn[0] = v.blocks
    for n in range(1, n_max + 1):
        vn[n] = np.einsum("kij,kj->ki", Mg, vn[n - 1])
    out = np.einsum("Kbij,nbj->nKbi", Mk, vn)
    norms = np.linalg.norm(out, axis=3).max(axis=2)  # (n, K)
    ratio = np.log(norms) - math.log(v.norm())
    ok = ratio > C0 if expand else ratio < -C0
    hits = np.argwhere(ok)
    if len(hits) == 0:
        best = ratio.max() if expand else ratio.min()
        kind = "expansion" if expand else "contraction"
        raise BudgetExhausted(f"no {kind} word with n <= {n_max}, |k| <= {k_max} "
                              f"(best log ratio {best:.3f}, need {C0})", float(best))
    n, i = (int(c) for c in hits[0])
    k = exps[i]
    word = parabolic ** k * (g ** n) if n else parabolic ** k
    return CorrectionWord(word, n, k, float(ratio[n, i]))


def contraction_word(v: WVector, C0: float, G: GroupPresentation, g: GroupWord,
                     n_max: int = 500, k_max: int = 50) -> CorrectionWord:
    """First word g_k . g^n with ||A v|| < exp(-C0) ||v||.

    g_k = (s.t)^k runs over 0 < |k| <= k_max; the search scans n upward and,
    for each n, k in the order 1, -1, 2, -2, ...

    g is a Salem element: its conjugates are elliptic with rationally
    independent angles, so g^n eventually aligns every block with the
    contracted direction of the parabolic power g_k.
    """
    if v.is_zero():
        raise ValueError("v must be nonzero")
    return _correction(v, G, g, C0, n_max, k_max, expand=False)


def expansion_word(v: WVector, C0: float, G: GroupPresentation, g: GroupWord,
                   n_max: int = 500, k_max: int = 50) -> CorrectionWord:
    if v.is_zero():
        raise ValueError("v must be nonzero")
    return _correction(v, G, g, C0, n_max, k_max, expand=True)

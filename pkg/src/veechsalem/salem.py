"""Salem certification of triangle-group elements, budgeted search, and table reproduction."""

from __future__ import annotations

import itertools
import json
import logging
import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .exactfield import (INF, IsolatingInterval, RatPoly, element_minpoly, isolate_real_roots,
                         sturm_count)
from .trigroup import (Family, FieldMatrix2, GroupPresentation, GroupWord, Kind, TriangleFamily,
                       build_group, classify, evaluate_word, exponent_range)
from . import tables

log = logging.getLogger(__name__)


def _flip(p: RatPoly) -> RatPoly:
    """Monic polynomial of -x for the roots of p."""
    q = p.scale_arg(-1)
    return q.monic()


def _dominant_is_negative(p: RatPoly, roots: list[IsolatingInterval]) -> bool:
    hi, lo = roots[0], roots[-1]
    if hi is lo:
        return hi.mid < 0
    if all(c == 0 for c in p.coeffs[p.degree - 1::-2]):
        return False  # p even: |largest| == |smallest|, tie goes to +1
    bits = 64
    while True:
        a, b = hi.refined(bits), lo.refined(bits)
        # compare |max root| with |min root| using the interval bounds
        if abs(a.lo) > max(abs(b.lo), abs(b.hi)) and a.lo > 0:
            return False
        if max(abs(b.lo), abs(b.hi)) < a.lo:
            return False
        if min(abs(b.lo), abs(b.hi)) > max(abs(a.lo), abs(a.hi)):
            return True
        bits *= 2


def half_trace_data(M: FieldMatrix2) -> tuple[RatPoly, list[IsolatingInterval], int]:
    """Sign-normalized minimal polynomial of +-trace(M)/2 and its isolated roots.

    Returns (poly, roots sorted descending, epsilon) where x0 = epsilon*trace/2 and
    epsilon makes the conjugate of largest absolute value positive.
    """
    x0 = M.trace() * Fraction(1, 2)
    p = element_minpoly(x0)
    roots = isolate_real_roots(p)
    eps = 1
    if _dominant_is_negative(p, roots):
        eps = -1
        p = _flip(p)
        roots = isolate_real_roots(p)
    return p, roots, eps


def trace_poly_from_half(p: RatPoly) -> RatPoly:
    """Monic polynomial of y = 2x."""
    return p.scale_arg(Fraction(1, 2)).monic()


@dataclass
class SalemCertificate:
    word: GroupWord
    family: TriangleFamily
    half_trace_minpoly: RatPoly
    trace_minpoly: RatPoly
    degree: int
    conjugates: list[IsolatingInterval]
    dominant: float
    checks: dict[str, bool]
    sign: int = 1

    @property
    def conjugate_values(self) -> list[float]:
        return [float(iv) for iv in self.conjugates]

    @property
    def inner_conjugates(self) -> list[float]:
        return [float(iv) for iv in self.conjugates[1:]]

    def to_json(self) -> dict:
        return {
            "word": str(self.word),
            "family": self.family.variant.value,
            "q": self.family.q,
            "degree": self.degree,
            "half_trace_minpoly": self.half_trace_minpoly.to_json(),
            "half_trace_minpoly_text": str(self.half_trace_minpoly),
            "trace_minpoly": self.trace_minpoly.to_json(),
            "conjugates": [iv.to_json() for iv in self.conjugates],
            "conjugates_approx": [f"{v:.10g}" for v in self.conjugate_values],
            "dominant": f"{self.dominant:.15g}",
            "checks": self.checks,
            "sign": self.sign,
        }


@dataclass
class Rejection:
    reason: str
    detail: str = ""

    def __bool__(self) -> bool:
        return False


def is_salem(M: FieldMatrix2, word: GroupWord | None = None,
             family: TriangleFamily | None = None) -> SalemCertificate | Rejection:
    """Certify that the dominant eigenvalue of M is a Salem number.

    Conditions, in order: hyperbolic; half-trace degree >= 2; exactly one
    conjugate outside [-1, 1]; +-1 not a root; trace polynomial integral.
    """
    kind = classify(M)
    if kind is not Kind.HYPERBOLIC:
        return Rejection("not hyperbolic", kind.value)
    p, roots, eps = half_trace_data(M)
    checks = {"degree_ge_2": p.degree >= 2}
    if not checks["degree_ge_2"]:
        return Rejection("degree 1", str(p))
    above = sturm_count(p, 1, INF)
    below = sturm_count(p, -INF, -1) - (1 if p(-1) == 0 else 0)
    checks["unique_outside"] = above == 1 and below == 0
    if not checks["unique_outside"]:
        return Rejection("conjugates outside [-1,1]", f"{above} above 1, {below} below -1")
    checks["endpoints_nonroot"] = p(1) != 0 and p(-1) != 0
    if not checks["endpoints_nonroot"]:
        return Rejection("root at +-1", str(p))
    tp = trace_poly_from_half(p)
    checks["integral"] = tp.is_integral()
    if not checks["integral"]:
        return Rejection("not an algebraic integer", str(tp))
    return SalemCertificate(word=word if word is not None else GroupWord(()),
                            family=family, half_trace_minpoly=p, trace_minpoly=tp,
                            degree=p.degree, conjugates=roots, dominant=float(roots[0]),
                            checks=checks, sign=eps)


def certify_word(G: GroupPresentation, w: GroupWord | str) -> SalemCertificate | Rejection:
    if isinstance(w, str):
        w = GroupWord.parse(w)
    return is_salem(evaluate_word(G, w), w, G.family)


# ---------------------------------------------------------------------------
# search


@dataclass(frozen=True)
class Budget:
    max_blocks: int = 6
    max_abs_exp: int = 12
    max_words: int = 10_000_000

    def to_json(self) -> dict:
        return {"max_blocks": self.max_blocks, "max_abs_exp": self.max_abs_exp,
                "max_words": self.max_words}


REFERENCE_BUDGET = Budget(6, 12, 10_000_000)


@dataclass
class SearchReport:
    family: TriangleFamily
    budget: Budget
    found: list[SalemCertificate]
    scanned: int
    elapsed: float = 0.0
    candidates: int = 0

    def to_json(self, timing: bool = False) -> dict:
        out = {"family": self.family.variant.value, "q": self.family.q,
               "budget": self.budget.to_json(), "scanned": self.scanned,
               "candidates": self.candidates,
               "found": [c.to_json() for c in self.found]}
        if timing:
            out["elapsed"] = self.elapsed
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True)


def _embedded(G: GroupPresentation, M: FieldMatrix2) -> np.ndarray:
    """Array of shape (d, 2, 2): M in every real embedding."""
    d = G.field.degree
    out = np.empty((d, 2, 2))
    for sg in range(d):
        out[sg] = [[M.a.embed_float(sg), M.b.embed_float(sg)],
                   [M.c.embed_float(sg), M.d.embed_float(sg)]]
    return out


def _salem_like(h: np.ndarray, tol: float = 1e-6) -> np.ndarray:
    """Float prefilter on half-traces h of shape (n, d); permissive near +-1."""
    a = np.abs(h)
    j = a.argmax(axis=1)
    hd = h[np.arange(len(h)), j]
    big = np.abs(hd)
    same = np.abs(h - hd[:, None]) <= tol * np.maximum(big, 1.0)[:, None]
    inside = a < 1 + tol
    ok = (big > 1 + 1e-9) & np.all(same | inside, axis=1) & ~np.all(same, axis=1)
    return ok


def _signature(hrow: np.ndarray) -> tuple:
    j = np.abs(hrow).argmax()
    v = np.sort(hrow * np.sign(hrow[j]))
    return tuple(np.round(v, 6).tolist())


def _rotation_minimal(cols: list[np.ndarray], P: int) -> np.ndarray:
    m = len(cols)
    codes = []
    for r in range(m):
        c = np.zeros_like(cols[0], dtype=np.int64)
        for k in range(m):
            c = c * P + cols[(k + r) % m]
        codes.append(c)
    ok = np.ones(len(cols[0]), dtype=bool)
    for r in range(1, m):
        ok &= codes[0] <= codes[r]
    return ok


class _PairTable:
    """All blocks t^a.s^b of the enumeration, exact and embedded."""

    def __init__(self, G: GroupPresentation, max_abs_exp: int):
        t_exps = exponent_range(G, "t", max_abs_exp)
        s_exps = exponent_range(G, "s", max_abs_exp)
        if G.order("s") is None:
            raise NotImplementedError("enumeration assumes s has finite order")
        self.pairs = [(a, b) for a in t_exps for b in s_exps]
        self.P = len(self.pairs)
        mats = [G.power("t", a) * G.power("s", b) for a, b in self.pairs]
        self.emb = np.stack([_embedded(G, M) for M in mats])  # (P, d, 2, 2)

    def word(self, idx: Sequence[int]) -> GroupWord:
        return GroupWord(tuple(b for i in idx for b in (("t", self.pairs[i][0]), ("s", self.pairs[i][1]))))


def _iter_chunks(table: _PairTable, max_pairs: int):
    """Yield (index columns, half-traces) in enumeration order, rotation-minimal only."""
    P = table.P
    E = table.emb
    for m in range(1, max_pairs + 1):
        if m == 1:
            idx = np.arange(P)
            tr = np.trace(E, axis1=2, axis2=3)
            yield [idx], tr / 2
            continue
        for prefix in itertools.product(range(P), repeat=m - 2):
            if prefix and any(p < prefix[0] for p in prefix):
                continue  # rotation-minimal words start with their smallest pair
            pre = np.broadcast_to(np.eye(2), E.shape[1:]).copy()
            for p in prefix:
                pre = pre @ E[p]
            lo = prefix[0] if prefix else 0
            X = np.einsum("dij,ndjk->ndik", pre, E)  # (P, d, 2, 2)
            tr = np.einsum("adjk,bdkj->abd", X, E)  # (P, P, d)
            ii, jj = np.meshgrid(np.arange(P), np.arange(P), indexing="ij")
            cols = [np.full(P * P, p) for p in prefix] + [ii.ravel(), jj.ravel()]
            h = tr.reshape(P * P, -1) / 2
            keep = _rotation_minimal(cols, P)
            if not prefix:
                keep &= cols[0] >= lo
            else:
                keep &= (cols[-2] >= lo) & (cols[-1] >= lo)
            yield [c[keep] for c in cols], h[keep]


def search(family: TriangleFamily | tuple, budget: Budget = REFERENCE_BUDGET,
           certify_limit: int | None = None) -> SearchReport:
    """Scan enumerated words for Salem elements, deduplicated by half-trace polynomial.

    A float prefilter over all embeddings selects candidates; each new float
    signature is then certified exactly.  Deterministic for a given budget.
    """
    if isinstance(family, tuple):
        family = TriangleFamily(Family.parse(family[0]) if isinstance(family[0], str) else family[0],
                                family[1])
    t0 = time.perf_counter()
    G = build_group(family.variant, family.q)
    table = _PairTable(G, budget.max_abs_exp)
    seen_sig: set[tuple] = set()
    seen_poly: set[RatPoly] = set()
    found: list[SalemCertificate] = []
    scanned = 0
    n_cand = 0
    done = False
    for cols, h in _iter_chunks(table, budget.max_blocks // 2):
        n = len(h)
        if scanned + n > budget.max_words:
            n = budget.max_words - scanned
            cols = [c[:n] for c in cols]
            h = h[:n]
            done = True
        scanned += n
        hits = np.nonzero(_salem_like(h))[0]
        for k in hits:
            sig = _signature(h[k])
            if sig in seen_sig:
                continue
            seen_sig.add(sig)
            n_cand += 1
            w = table.word([int(c[k]) for c in cols])
            cert = is_salem(evaluate_word(G, w), w, family)
            if cert and cert.half_trace_minpoly not in seen_poly:
                seen_poly.add(cert.half_trace_minpoly)
                found.append(cert)
                if certify_limit is not None and len(found) >= certify_limit:
                    done = True
                    break
        if done:
            break
    return SearchReport(family, budget, found, scanned, time.perf_counter() - t0, n_cand)


# ---------------------------------------------------------------------------
# table reproduction


class RowMismatchError(AssertionError):
    def __init__(self, row: tables.TableRow, computed: RatPoly):
        super().__init__(f"{row.family.value} q={row.q} word {row.word}: "
                         f"printed {row.poly} but computed {computed}")
        self.row = row
        self.computed = computed


@dataclass
class ReproducedRow:
    row: tables.TableRow
    certificate: SalemCertificate | Rejection
    poly: RatPoly
    conjugates: list[IsolatingInterval]
    conjugates_ok: list[bool]

    def to_json(self) -> dict:
        return {"q": self.row.q, "degree": self.poly.degree, "word": self.row.word,
                "minpoly": self.poly.to_json(), "minpoly_text": str(self.poly),
                "conjugates": [f"{float(iv):.4g}" for iv in self.conjugates],
                "printed_conjugates": list(self.row.conjugates),
                "conjugates_ok": self.conjugates_ok,
                "salem": bool(self.certificate)}


def printed_value_matches(printed: str, iv: IsolatingInterval, rel: float = 5e-4) -> bool:
    """Does the isolating interval meet [p - rel|p|, p + rel|p|]?"""
    p = Fraction(printed)
    slack = abs(p) * Fraction(rel).limit_denominator(10**9)
    return iv.lo <= p + slack and iv.hi >= p - slack


def reproduce_row(row: tables.TableRow) -> ReproducedRow:
    G = build_group(row.family, row.q)
    w = GroupWord.parse(row.word)
    M = evaluate_word(G, w)
    p, roots, _ = half_trace_data(M)
    if p != row.poly:
        raise RowMismatchError(row, p)
    ok = [printed_value_matches(c, iv) for c, iv in zip(row.conjugates, roots)]
    cert = is_salem(M, w, G.family)
    return ReproducedRow(row, cert, p, roots, ok)


def reproduce_table(family: Family | str, q_list: Iterable[int] | None = None) -> list[ReproducedRow]:
    family = Family.parse(family) if isinstance(family, str) else family
    rows = tables.rows(family)
    if q_list is not None:
        wanted = set(q_list)
        rows = [r for r in rows if r.q in wanted]
    return [reproduce_row(r) for r in rows]


def sig4(x: float) -> str:
    """Four significant figures with trailing zeros kept: 0.5550, 227.0, 21560."""
    if x == 0:
        return "0.000"
    e = math.floor(math.log10(abs(x)))
    r = round(x, 3 - e)
    if r != 0 and math.floor(math.log10(abs(r))) != e:  # rounding carried into a new digit
        e += 1
        r = round(x, 3 - e)
    if 3 - e >= 0:
        return f"{r:.{3 - e}f}"
    return f"{int(r)}."


def format_table(reproduced: Sequence[ReproducedRow]) -> str:
    """Plain-text table laid out like the published appendix."""
    lines = []
    sep = "+-----+--------+" + "-" * 60 + "+"
    lines.append(sep)
    lines.append(f"| {'q':>3} | {'degree':>6} | {'matrix m':<58} |")
    lines.append(f"|     | {'minimal polynomial of trace(m)/2':<67} |")
    lines.append(f"|     | {'approximate conjugates of trace(m)/2':<67} |")
    lines.append(sep.replace("-", "="))
    for r in reproduced:
        conj = ", ".join(sig4(float(iv)) for iv in r.conjugates)
        lines.append(f"| {r.row.q:>3} | {r.poly.degree:>6} | {r.row.word:<58} |")
        lines.append(f"|     | {str(r.poly):<67} |")
        lines.append(f"|     | {conj:<67} |")
        lines.append(sep)
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# Galois conjugate groups


def conjugate_matrices(M: FieldMatrix2, prec: int = 53) -> list[np.ndarray]:
    """M under each real embedding (field order: descending generator roots)."""
    out = []
    for sg in range(M.field.degree):
        if prec <= 53:
            out.append(np.array([[M.a.embed_float(sg), M.b.embed_float(sg)],
                                 [M.c.embed_float(sg), M.d.embed_float(sg)]]))
        else:
            vals = [x.embed(sg, prec) for x in M.entries()]
            out.append(np.array([[float((lo + hi) / 2) for lo, hi in vals[:2]],
                                 [float((lo + hi) / 2) for lo, hi in vals[2:]]]))
    return out


@dataclass
class AngleReport:
    angles: list[float]
    bound: int
    min_residual: float
    relation: tuple[int, ...] | None
    red_flag: bool


def irrational_angle_check(cert: SalemCertificate, B: int = 20, tol: float = 1e-9) -> AngleReport:
    """Scan integer relations sum n_i*alpha_i in 2*pi*Z with 0 < max|n_i| <= B.

    alpha_i = arccos of the conjugates inside (-1, 1).  A residual below tol
    would contradict the rational independence of the angles.
    """
    import mpmath

    angles = [float(mpmath.acos(mpmath.mpf(float(iv.refined(80).mid)))) for iv in cert.conjugates
              if -1 < iv.mid < 1]
    k = len(angles)
    if k == 0:
        return AngleReport([], B, math.inf, None, False)
    rng = np.arange(-B, B + 1)
    two_pi = 2 * math.pi

    def dist(x):
        r = np.mod(x, two_pi)
        return np.minimum(r, two_pi - r)

    half = k // 2
    first = np.zeros(1)
    first_idx = np.zeros((1, 0), dtype=int)
    for a in angles[:max(half, 1)]:
        first = (first[:, None] + rng[None, :] * a).ravel()
        first_idx = np.concatenate([np.repeat(first_idx, len(rng), axis=0),
                                    np.tile(rng, len(first_idx))[:, None]], axis=1)
    rest_angles = angles[max(half, 1):]
    second = np.zeros(1)
    second_idx = np.zeros((1, 0), dtype=int)
    for a in rest_angles:
        second = (second[:, None] + rng[None, :] * a).ravel()
        second_idx = np.concatenate([np.repeat(second_idx, len(rng), axis=0),
                                     np.tile(rng, len(second_idx))[:, None]], axis=1)
    best = math.inf
    best_rel = None
    chunk = max(1, 2_000_000 // max(1, len(second)))
    for s in range(0, len(first), chunk):
        tot = first[s:s + chunk, None] + second[None, :]
        d = dist(tot)
        nz = np.any(first_idx[s:s + chunk] != 0, axis=1)[:, None] | np.any(second_idx != 0, axis=1)[None, :]
        d = np.where(nz, d, np.inf)
        j = np.unravel_index(np.argmin(d), d.shape)
        if d[j] < best:
            best = float(d[j])
            best_rel = tuple(int(x) for x in np.concatenate([first_idx[s + j[0]], second_idx[j[1]]]))
    return AngleReport(angles, B, best, best_rel if best < tol else None, best < tol)


def nondiscreteness_witness(family: TriangleFamily, sigma: int, eps: float,
                            budget: Budget) -> GroupWord | None:
    """First enumerated word M != +-I with ||M^sigma -+ I|| < eps (operator norm).

    sigma is a 0-based field embedding index different from the identity.
    """
    from .trigroup import enumerate_words

    G = build_group(family.variant, family.q)
    if sigma == G.field.identity:
        raise ValueError("sigma must be a non-identity embedding")
    if budget.max_words <= 0:
        return None
    I2 = np.eye(2)
    for n, w in enumerate(enumerate_words(G, budget.max_blocks, budget.max_abs_exp)):
        if n >= budget.max_words:
            break
        M = evaluate_word(G, w)
        Ms = conjugate_matrices(M)[sigma]
        near = min(np.linalg.norm(Ms - I2, 2), np.linalg.norm(Ms + I2, 2))
        if near < eps and not M.is_pm_identity():
            return w
    return None

"""Exact matrix models of the triangle groups Delta(2,q,inf) and Delta(q,inf,inf)."""

from __future__ import annotations

import enum
import itertools
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator

from .exactfield import FieldElement, RealAlgebraicField, field_create


class Family(str, enum.Enum):
    TWO_Q_INF = "2qinf"
    Q_INF_INF = "qinfinf"

    @classmethod
    def parse(cls, text: str) -> "Family":
        t = text.lower().replace("_", "").replace("-", "")
        aliases = {"2qinf": cls.TWO_Q_INF, "twoqinf": cls.TWO_Q_INF, "hecke": cls.TWO_Q_INF,
                   "qinfinf": cls.Q_INF_INF}
        try:
            return aliases[t]
        except KeyError:
            raise ValueError(f"unknown triangle family {text!r}") from None


@dataclass(frozen=True)
class TriangleFamily:
    variant: Family
    q: int

    def __post_init__(self):
        if self.q < 3:
            raise ValueError("q must be at least 3")

    def __str__(self) -> str:
        if self.variant is Family.TWO_Q_INF:
            return f"Delta(2,{self.q},inf)"
        return f"Delta({self.q},inf,inf)"


class Kind(str, enum.Enum):
    CENTRAL = "central"
    ELLIPTIC = "elliptic"
    PARABOLIC = "parabolic"
    HYPERBOLIC = "hyperbolic"


class FieldMatrix2:
    """2x2 matrix over a RealAlgebraicField (determinant one in practice)."""

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a: FieldElement, b: FieldElement, c: FieldElement, d: FieldElement):
        self.a, self.b, self.c, self.d = a, b, c, d

    @classmethod
    def identity(cls, field: RealAlgebraicField) -> "FieldMatrix2":
        return cls(field.one, field.zero, field.zero, field.one)

    @property
    def field(self) -> RealAlgebraicField:
        return self.a.field

    def entries(self) -> tuple[FieldElement, ...]:
        return (self.a, self.b, self.c, self.d)

    def __mul__(self, o: "FieldMatrix2") -> "FieldMatrix2":
        return FieldMatrix2(self.a * o.a + self.b * o.c, self.a * o.b + self.b * o.d,
                            self.c * o.a + self.d * o.c, self.c * o.b + self.d * o.d)

    def __neg__(self) -> "FieldMatrix2":
        return FieldMatrix2(-self.a, -self.b, -self.c, -self.d)

    def __eq__(self, o) -> bool:
        return isinstance(o, FieldMatrix2) and self.entries() == o.entries()

    def __hash__(self) -> int:
        return hash(self.entries())

    def det(self) -> FieldElement:
        return self.a * self.d - self.b * self.c

    def trace(self) -> FieldElement:
        return self.a + self.d

    def inverse(self) -> "FieldMatrix2":
        det = self.det()
        if det == 1:
            return FieldMatrix2(self.d, -self.b, -self.c, self.a)
        di = det.inv()
        return FieldMatrix2(self.d * di, -self.b * di, -self.c * di, self.a * di)

    def transpose(self) -> "FieldMatrix2":
        return FieldMatrix2(self.a, self.c, self.b, self.d)

    def __pow__(self, e: int) -> "FieldMatrix2":
        if e < 0:
            return self.inverse() ** (-e)
        result = FieldMatrix2.identity(self.field)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def is_identity(self) -> bool:
        return self.a == 1 and self.d == 1 and self.b.is_zero() and self.c.is_zero()

    def is_pm_identity(self) -> bool:
        return self.b.is_zero() and self.c.is_zero() and self.a == self.d and (self.a == 1 or self.a == -1)

    def to_floats(self, sigma: int | None = None) -> list[list[float]]:
        s = self.field.identity if sigma is None else sigma
        return [[self.a.embed_float(s), self.b.embed_float(s)],
                [self.c.embed_float(s), self.d.embed_float(s)]]

    def __repr__(self) -> str:
        return f"FieldMatrix2([[{self.a}, {self.b}], [{self.c}, {self.d}]])"


def classify(M: FieldMatrix2) -> Kind:
    """Projective type of M from the exact sign of trace^2 - 4 in the identity embedding."""
    tr = M.trace()
    disc = tr * tr - 4
    s = disc.sign(M.field.identity)
    if s < 0:
        return Kind.ELLIPTIC
    if s > 0:
        return Kind.HYPERBOLIC
    return Kind.CENTRAL if M.is_pm_identity() else Kind.PARABOLIC


@dataclass(frozen=True)
class GroupWord:
    """Word in the generators s, t as ((generator, exponent), ...) blocks."""

    blocks: tuple[tuple[str, int], ...] = ()

    def __post_init__(self):
        for g, e in self.blocks:
            if g not in ("s", "t") or e == 0:
                raise ValueError(f"bad block {g}^{e}")
        for (g1, _), (g2, _) in zip(self.blocks, self.blocks[1:]):
            if g1 == g2:
                raise ValueError("adjacent blocks must use different generators")

    @classmethod
    def parse(cls, text: str) -> "GroupWord":
        text = text.strip().replace("{", "").replace("}", "").replace("*", ".").replace(" ", "")
        if text in ("", "1", "id", "e"):
            return cls(())
        blocks: list[tuple[str, int]] = []
        for tok in text.split("."):
            m = re.fullmatch(r"([st])(?:\^(-?\d+))?", tok)
            if not m:
                raise ValueError(f"cannot parse word block {tok!r}")
            g, e = m.group(1), int(m.group(2) or 1)
            if e == 0:
                continue
            if blocks and blocks[-1][0] == g:
                e += blocks.pop()[1]
                if e == 0:
                    continue
            blocks.append((g, e))
        return cls(tuple(blocks))

    def __str__(self) -> str:
        if not self.blocks:
            return "1"
        return ".".join(g if e == 1 else f"{g}^{e}" for g, e in self.blocks)

    def __len__(self) -> int:
        return len(self.blocks)

    def inverse(self) -> "GroupWord":
        return GroupWord(tuple((g, -e) for g, e in reversed(self.blocks)))

    def __mul__(self, other: "GroupWord") -> "GroupWord":
        return _concat(self, other)

    def __pow__(self, n: int) -> "GroupWord":
        if n < 0:
            return self.inverse() ** (-n)
        out = GroupWord(())
        for _ in range(n):
            out = out * self
        return out

    def rotate(self, k: int) -> "GroupWord":
        k %= max(1, len(self.blocks))
        return GroupWord(self.blocks[k:] + self.blocks[:k])


def _concat(u: GroupWord, v: GroupWord) -> GroupWord:
    blocks = list(u.blocks)
    for g, e in v.blocks:
        if blocks and blocks[-1][0] == g:
            e += blocks.pop()[1]
            if e == 0:
                continue
        blocks.append((g, e))
    return GroupWord(tuple(blocks))


INF = None  # order of an infinite-order generator


@dataclass
class GroupPresentation:
    family: TriangleFamily
    field: RealAlgebraicField
    s: FieldMatrix2
    t: FieldMatrix2
    order_s: int | None
    order_t: int | None

    def __post_init__(self):
        self._powers: dict[tuple[str, int], FieldMatrix2] = {}

    @property
    def q(self) -> int:
        return self.family.q

    def order(self, g: str) -> int | None:
        return self.order_s if g == "s" else self.order_t

    def generator(self, g: str) -> FieldMatrix2:
        return self.s if g == "s" else self.t

    def power(self, g: str, e: int) -> FieldMatrix2:
        key = (g, e)
        m = self._powers.get(key)
        if m is None:
            m = self.generator(g) ** e
            self._powers[key] = m
        return m

    def canonical(self, w: GroupWord) -> GroupWord:
        """Projective normal form: finite-order exponents reduced to 1..order-1."""
        blocks: list[tuple[str, int]] = []
        for g, e in w.blocks:
            n = self.order(g)
            if n is not None:
                e %= n
                if e == 0:
                    continue
            if blocks and blocks[-1][0] == g:
                e += blocks.pop()[1]
                if n is not None:
                    e %= n
                if e == 0:
                    continue
            blocks.append((g, e))
        return GroupWord(tuple(blocks))

    def is_canonical(self, w: GroupWord) -> bool:
        return self.canonical(w) == w

    @property
    def parabolic_word(self) -> GroupWord:
        """s.t for Delta(2,q,inf), t for Delta(q,inf,inf)."""
        if self.family.variant is Family.TWO_Q_INF:
            return GroupWord((("s", 1), ("t", 1)))
        return GroupWord((("t", 1),))

    @property
    def lam(self) -> FieldElement:
        """Translation length of the parabolic fixing infinity."""
        if self.family.variant is Family.TWO_Q_INF:
            return self.field.gen
        return self.t.b


def chebyshev_twocos(theta: FieldElement, kmax: int) -> list[FieldElement]:
    """p_0 = 2, p_1 = theta, p_{k+1} = theta p_k - p_{k-1}; p_k = 2cos(k*angle)."""
    p = [theta.field(2), theta]
    for _ in range(2, kmax + 1):
        p.append(theta * p[-1] - p[-2])
    return p


@lru_cache(maxsize=None)
def build_group(variant: Family | str, q: int) -> GroupPresentation:
    variant = Family.parse(variant) if isinstance(variant, str) else variant
    fam = TriangleFamily(variant, q)
    if variant is Family.TWO_Q_INF:
        F = field_create(2 * q)
        lam = F.gen
        s = FieldMatrix2(F.zero, F(-1), F.one, F.zero)
        t = FieldMatrix2(F.zero, F(-1), F.one, lam)
        G = GroupPresentation(fam, F, s, t, 2, q)
        minus_i = -FieldMatrix2.identity(F)
        assert s * s == minus_i, "s^2 != -I"
        tq = t ** q
        assert tq.is_pm_identity(), "t^q != +-I"
        assert all(not (t ** k).is_pm_identity() for k in range(1, q)), "t has smaller order"
        st = s * t
        assert st.trace() == 2 or st.trace() == -2, "s.t not parabolic"
        assert not st.is_pm_identity()
    else:
        F = field_create(4 * q)
        theta = F.gen
        p = chebyshev_twocos(theta, q)
        c = p[2] * F(1) / 2
        ss = p[q - 2] * F(1) / 2
        mu = F(-2) * (1 + c) / ss
        s = FieldMatrix2(c, -ss, ss, c)
        t = FieldMatrix2(F.one, mu, F.zero, F.one)
        G = GroupPresentation(fam, F, s, t, q, None)
        assert s.det() == 1 and t.det() == 1
        assert (s ** q).is_pm_identity(), "s^q != +-I"
        assert all(not (s ** k).is_pm_identity() for k in range(1, q)), "s has smaller order"
        st = s * t
        assert st.trace() == 2 or st.trace() == -2, "s.t not parabolic"
        assert not st.is_pm_identity()
    return G


def evaluate_word(G: GroupPresentation, w: GroupWord) -> FieldMatrix2:
    """Exact product, leftmost printed block is the leftmost matrix factor."""
    M = FieldMatrix2.identity(G.field)
    for g, e in w.blocks:
        n = G.order(g)
        if n is not None:
            e %= 2 * n  # generator^(2n) = I exactly
        M = M * G.power(g, e)
    return M


# ---------------------------------------------------------------------------
# enumeration


def _exp_key(e: int) -> tuple[int, int]:
    return (abs(e), e < 0)


def exponent_range(G: GroupPresentation, g: str, max_abs_exp: int) -> list[int]:
    n = G.order(g)
    if n is not None:
        return list(range(1, min(n - 1, max_abs_exp) + 1))
    return sorted([e for k in range(1, max_abs_exp + 1) for e in (k, -k)], key=_exp_key)


def word_key(w: GroupWord) -> tuple:
    return (len(w.blocks), tuple(_exp_key(e) for _, e in w.blocks))


def _class_members(w: GroupWord) -> list[GroupWord]:
    n = len(w.blocks)
    members = []
    for base in (w, w.inverse()):
        for k in range(n):
            r = base.rotate(k)
            if r.blocks and r.blocks[0][0] == "t":
                members.append(r)
    return members


def enumerate_words(G: GroupPresentation, max_blocks: int, max_abs_exp: int) -> Iterator[GroupWord]:
    """Cyclically reduced words t^a1.s^b1...t^am.s^bm, one per rotation/inversion class.

    Odd block counts are skipped: a cyclically reduced alternating word has an
    even number of blocks once its first and last blocks are merged.  A class
    member is only eligible if it lies in the enumerated exponent ranges, so
    (with finite-order exponents kept in 1..order-1) inversion identifies words
    only through infinite-order generators.
    """
    if max_blocks < 1:
        raise ValueError("max_blocks must be >= 1")
    t_exps = exponent_range(G, "t", max_abs_exp)
    s_exps = exponent_range(G, "s", max_abs_exp)
    allowed = {"t": set(t_exps), "s": set(s_exps)}
    for m in range(1, max_blocks // 2 + 1):
        for combo in itertools.product(itertools.product(t_exps, s_exps), repeat=m):
            blocks = tuple(b for a, c in combo for b in (("t", a), ("s", c)))
            w = GroupWord(blocks)
            key = word_key(w)
            ok = True
            for u in _class_members(w):
                if all(e in allowed[g] for g, e in u.blocks) and word_key(u) < key:
                    ok = False
                    break
            if ok:
                yield w


def trace_float(G: GroupPresentation, w: GroupWord, sigma: int | None = None) -> float:
    return float(evaluate_word(G, w).trace().embed_float(G.field.identity if sigma is None else sigma))

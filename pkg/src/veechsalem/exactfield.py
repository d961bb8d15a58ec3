"""Exact arithmetic in the totally real fields Q(2cos(2*pi/N)).

Rationals are :class:`fractions.Fraction`; polynomials are immutable
ascending coefficient tuples.  Real roots are isolated with Sturm sequences
and refined by exact bisection, so every comparison that matters (for
instance ``|trace| < 2`` in some embedding) is decided by the sign of an
exact quantity, never by floating point.
"""

from __future__ import annotations

import json
import math
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

Rational = Fraction

INF = math.inf


def _frac(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, str):
        return Fraction(c)
    if isinstance(c, float):
        raise TypeError("floats are not exact; pass a Fraction or a string")
    return Fraction(c)


class RatPoly:
    """Univariate polynomial with rational coefficients, ascending degree."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [_frac(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)

    # construction helpers
    @classmethod
    def x(cls) -> "RatPoly":
        return cls((0, 1))

    @classmethod
    def const(cls, c) -> "RatPoly":
        return cls((c,))

    @classmethod
    def from_roots_numeric(cls, roots):  # pragma: no cover - debugging aid
        raise NotImplementedError

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lc(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, RatPoly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == RatPoly.const(other).coeffs
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __len__(self) -> int:
        return len(self.coeffs)

    def __getitem__(self, k: int) -> Fraction:
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return Fraction(0)

    def __neg__(self) -> "RatPoly":
        return RatPoly(-c for c in self.coeffs)

    def __add__(self, other) -> "RatPoly":
        other = _as_poly(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return RatPoly(self[k] + other[k] for k in range(n))

    __radd__ = __add__

    def __sub__(self, other) -> "RatPoly":
        return self + (-_as_poly(other))

    def __rsub__(self, other) -> "RatPoly":
        return _as_poly(other) - self

    def __mul__(self, other) -> "RatPoly":
        other = _as_poly(other)
        if not self.coeffs or not other.coeffs:
            return RatPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return RatPoly(out)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "RatPoly":
        result = RatPoly.const(1)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def divmod(self, other: "RatPoly") -> tuple["RatPoly", "RatPoly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return RatPoly(), self
        quo = [Fraction(0)] * (dq + 1)
        lc = other.lc
        for k in range(dq, -1, -1):
            c = rem[k + other.degree] / lc
            quo[k] = c
            if c:
                for j, b in enumerate(other.coeffs):
                    rem[k + j] -= c * b
        return RatPoly(quo), RatPoly(rem[: other.degree])

    def __floordiv__(self, other) -> "RatPoly":
        return self.divmod(_as_poly(other))[0]

    def __mod__(self, other) -> "RatPoly":
        return self.divmod(_as_poly(other))[1]

    def exact_div(self, other: "RatPoly") -> "RatPoly":
        q, r = self.divmod(other)
        if r:
            raise ArithmeticError("polynomial division is not exact")
        return q

    def monic(self) -> "RatPoly":
        if not self.coeffs:
            return self
        lc = self.lc
        return RatPoly(c / lc for c in self.coeffs)

    def derivative(self) -> "RatPoly":
        return RatPoly(k * c for k, c in enumerate(self.coeffs) if k)

    def __call__(self, x):
        acc = 0 * x if not isinstance(x, (int, Fraction)) else Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def eval_float(self, x: float) -> float:
        acc = 0.0
        for c in reversed(self.coeffs):
            acc = acc * x + float(c)
        return acc

    def sign_at(self, x) -> int:
        """Exact sign at a rational point or at +-infinity."""
        if not self.coeffs:
            return 0
        if x == INF:
            return 1 if self.lc > 0 else -1
        if x == -INF:
            s = 1 if self.lc > 0 else -1
            return s if self.degree % 2 == 0 else -s
        v = self(_frac(x))
        return (v > 0) - (v < 0)

    def scale_arg(self, a) -> "RatPoly":
        """Return p(a*x)."""
        a = _frac(a)
        return RatPoly(c * a**k for k, c in enumerate(self.coeffs))

    def compose(self, other: "RatPoly") -> "RatPoly":
        out = RatPoly()
        for c in reversed(self.coeffs):
            out = out * other + c
        return out

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs)

    def content_primitive(self) -> "RatPoly":
        """Integer multiple with coprime integer coefficients, positive lc."""
        if not self.coeffs:
            return self
        den = math.lcm(*(c.denominator for c in self.coeffs))
        ints = [int(c * den) for c in self.coeffs]
        g = math.gcd(*ints)
        if ints[-1] < 0:
            g = -g
        return RatPoly(Fraction(i // g) for i in ints)

    # serialization
    def to_json(self) -> list[str]:
        return [f"{c.numerator}/{c.denominator}" for c in self.coeffs]

    @classmethod
    def from_json(cls, data: Sequence[str]) -> "RatPoly":
        return cls(Fraction(s) for s in data)

    def __repr__(self) -> str:
        return f"RatPoly({self})"

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for k in range(self.degree, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if k == 0:
                body = str(a)
            else:
                mon = "x" if k == 1 else f"x^{k}"
                body = mon if a == 1 else f"{a}*{mon}"
            terms.append((sign, body))
        first_sign, first = terms[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in terms[1:]:
            out += f" {sign} {body}"
        return out


def _as_poly(p) -> RatPoly:
    if isinstance(p, RatPoly):
        return p
    return RatPoly.const(p)


def poly_gcd(a: RatPoly, b: RatPoly) -> RatPoly:
    """Monic gcd by the Euclidean algorithm over Q."""
    while b:
        a, b = b, a % b
    return a.monic()


def squarefree_part(p: RatPoly) -> RatPoly:
    if p.degree <= 0:
        return p.monic()
    g = poly_gcd(p, p.derivative())
    return p.exact_div(g).monic()


def parse_poly(text: str) -> RatPoly:
    """Parse ``x^3 - 39/2*x^2 + 5`` style strings (the ``__str__`` format)."""
    s = text.replace(" ", "").replace("**", "^")
    if not s:
        raise ValueError("empty polynomial")
    if s[0] not in "+-":
        s = "+" + s
    coeffs: dict[int, Fraction] = {}
    i = 0
    while i < len(s):
        sign = -1 if s[i] == "-" else 1
        j = i + 1
        while j < len(s) and s[j] not in "+-":
            j += 1
        term = s[i + 1 : j]
        if "x" in term:
            head, _, tail = term.partition("x")
            head = head.rstrip("*")
            c = Fraction(head) if head else Fraction(1)
            k = int(tail[1:]) if tail.startswith("^") else 1
        else:
            c, k = Fraction(term), 0
        coeffs[k] = coeffs.get(k, Fraction(0)) + sign * c
        i = j
    deg = max(coeffs)
    return RatPoly(coeffs.get(k, 0) for k in range(deg + 1))


# ---------------------------------------------------------------------------
# cyclotomic polynomials and the real subfield generators


def _divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def euler_phi(n: int) -> int:
    return sum(1 for k in range(1, n + 1) if math.gcd(k, n) == 1)


@lru_cache(maxsize=None)
def cyclotomic_poly(N: int) -> RatPoly:
    """The N-th cyclotomic polynomial, by dividing x^N - 1 by the smaller ones."""
    if N < 1:
        raise ValueError("N must be positive")
    p = RatPoly([-1] + [0] * (N - 1) + [1])
    for d in _divisors(N)[:-1]:
        p = p.exact_div(cyclotomic_poly(d))
    return p


@lru_cache(maxsize=None)
def two_cos_minpoly(N: int) -> RatPoly:
    """Minimal polynomial of 2cos(2*pi/N).

    Uses the palindromic structure of the cyclotomic polynomial:
    Phi_N(z) = z^m * Psi(z + 1/z) with m = phi(N)/2.
    """
    if N < 1:
        raise ValueError("N must be positive")
    if N == 1:
        return RatPoly((-2, 1))
    if N == 2:
        return RatPoly((2, 1))
    phi = cyclotomic_poly(N)
    m = phi.degree // 2
    x = RatPoly.x()
    # D_k(x) = z^k + z^-k as a polynomial in x = z + 1/z
    dickson = [RatPoly.const(2), x]
    for _ in range(2, m + 1):
        dickson.append(x * dickson[-1] - dickson[-2])
    psi = RatPoly.const(phi[m])
    for k in range(1, m + 1):
        psi = psi + phi[m + k] * dickson[k]
    return psi


# ---------------------------------------------------------------------------
# Sturm sequences and root isolation


def sturm_chain(p: RatPoly) -> list[RatPoly]:
    chain = [p, p.derivative()]
    while chain[-1].degree > 0:
        r = chain[-2] % chain[-1]
        if r.is_zero():
            break
        chain.append(-r)
    return chain


def _variations(signs: Iterable[int]) -> int:
    prev = 0
    v = 0
    for s in signs:
        if s == 0:
            continue
        if prev and s != prev:
            v += 1
        prev = s
    return v


def sturm_count(p: RatPoly, a=-INF, b=INF) -> int:
    """Number of distinct real roots of p in the half-open interval (a, b]."""
    if p.degree <= 0:
        return 0
    p = squarefree_part(p)
    if not (a < b):
        raise ValueError("need a < b")
    chain = sturm_chain(p)
    va = _variations(q.sign_at(a) for q in chain)
    vb = _variations(q.sign_at(b) for q in chain)
    return va - vb


def cauchy_bound(p: RatPoly) -> Fraction:
    """All real roots lie strictly inside (-B, B)."""
    lc = abs(p.lc)
    return 1 + max((abs(c) / lc for c in p.coeffs[:-1]), default=Fraction(0))


class IsolatingInterval:
    """Interval (lo, hi] holding exactly one root of a squarefree polynomial.

    Either ``lo == hi`` (an exact rational root) or the polynomial changes
    sign strictly between the endpoints, neither of which is a root.
    """

    __slots__ = ("lo", "hi", "poly")

    def __init__(self, lo: Fraction, hi: Fraction, poly: RatPoly):
        self.lo = lo
        self.hi = hi
        self.poly = poly

    @property
    def exact(self) -> bool:
        return self.lo == self.hi

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def __float__(self) -> float:
        return float(self.mid)

    def contains(self, x) -> bool:
        if self.exact:
            return x == self.lo
        return self.lo < x <= self.hi

    def refined(self, bits: int) -> "IsolatingInterval":
        """A new interval of width <= 2**-bits around the same root."""
        if self.exact:
            return self
        target = Fraction(1, 2**bits)
        lo, hi = self.lo, self.hi
        p = self.poly
        slo = p.sign_at(lo)
        while hi - lo > target:
            m = (lo + hi) / 2
            sm = p.sign_at(m)
            if sm == 0:
                return IsolatingInterval(m, m, p)
            if sm == slo:
                lo = m
            else:
                hi = m
        return IsolatingInterval(lo, hi, p)

    def to_json(self) -> list[str]:
        return [f"{self.lo.numerator}/{self.lo.denominator}",
                f"{self.hi.numerator}/{self.hi.denominator}"]

    def __repr__(self) -> str:
        return f"IsolatingInterval(~{float(self.mid):.12g}, width={float(self.width):.3g})"


def isolate_real_roots(p: RatPoly, bits: int = 64) -> list[IsolatingInterval]:
    """Isolate all distinct real roots of p, sorted by descending value."""
    if p.degree <= 0:
        return []
    sq = squarefree_part(p)
    chain = sturm_chain(sq)

    def count(a, b):
        return (_variations(q.sign_at(a) for q in chain)
                - _variations(q.sign_at(b) for q in chain))

    B = cauchy_bound(sq)
    out: list[IsolatingInterval] = []
    stack = [(-B, B)]
    while stack:
        a, b = stack.pop()
        n = count(a, b)
        if n == 0:
            continue
        if n == 1:
            if sq.sign_at(b) == 0:
                out.append(IsolatingInterval(b, b, sq))
            else:
                # (a, b] with a not a root (a is -B or a bisection point whose
                # root, if any, belongs to the left half and was kept there)
                if sq.sign_at(a) == 0:
                    # nudge a to the right without losing the root
                    lo = a
                    hi = b
                    while True:
                        m = (lo + hi) / 2
                        if count(a, m) == 0 and sq.sign_at(m) != 0:
                            a = m
                            break
                        hi = m
                out.append(IsolatingInterval(a, b, sq))
            continue
        m = (a + b) / 2
        stack.append((a, m))
        stack.append((m, b))
    out = [iv.refined(bits) for iv in out]
    out.sort(key=lambda iv: iv.mid, reverse=True)
    return out


def is_integral(p: RatPoly) -> bool:
    """True iff every coefficient of the (monic) polynomial is an integer."""
    return p.is_integral()


# ---------------------------------------------------------------------------
# the fields Q(2cos(2pi/N))


class RealAlgebraicField:
    """Q(theta) with theta = 2cos(2*pi/N), in the power basis of theta."""

    def __init__(self, N: int, bits: int = 64):
        if N < 3:
            raise ValueError("field_create needs N >= 3")
        self.N = N
        self.minpoly = two_cos_minpoly(N)
        self.degree = self.minpoly.degree
        self.embeddings: list[IsolatingInterval] = isolate_real_roots(self.minpoly, bits)
        if len(self.embeddings) != self.degree:
            raise ArithmeticError("field is not totally real")
        target = 2 * math.cos(2 * math.pi / N)
        self.identity = min(range(self.degree),
                            key=lambda i: abs(float(self.embeddings[i]) - target))
        # reduction table: theta^(d+j) in the power basis, j = 0..d-2
        d = self.degree
        mono = [-c for c in self.minpoly.coeffs[:-1]]  # theta^d
        table = [mono]
        for _ in range(d - 2):
            prev = table[-1]
            nxt = [Fraction(0)] + prev[:-1]
            top = prev[-1]
            if top:
                nxt = [u + top * v for u, v in zip(nxt, mono)]
            table.append(nxt)
        self._reduce = table
        self._root_cache: dict[tuple[int, int], IsolatingInterval] = {}
        self._float_roots = [float(iv) for iv in self.embeddings]
        self._int_reduce = None
        if self.minpoly.is_integral():
            self._int_reduce = [[int(c) for c in row] for row in table]

    def __repr__(self) -> str:
        return f"RealAlgebraicField(N={self.N}, degree={self.degree})"

    def __eq__(self, other) -> bool:
        return isinstance(other, RealAlgebraicField) and other.N == self.N

    def __hash__(self) -> int:
        return hash(("RealAlgebraicField", self.N))

    # element constructors
    def __call__(self, value) -> "FieldElement":
        if isinstance(value, FieldElement):
            return value
        if isinstance(value, (list, tuple)):
            return FieldElement.from_coeffs(self, value)
        return FieldElement.from_coeffs(self, [value])

    @property
    def zero(self) -> "FieldElement":
        return FieldElement.from_coeffs(self, [0])

    @property
    def one(self) -> "FieldElement":
        return FieldElement.from_coeffs(self, [1])

    @property
    def gen(self) -> "FieldElement":
        if self.degree == 1:
            return FieldElement.from_coeffs(self, [-self.minpoly[0]])
        return FieldElement.from_coeffs(self, [0, 1])

    def root_interval(self, sigma: int, bits: int) -> IsolatingInterval:
        """Isolating interval of the sigma-th embedding (0-based) of theta."""
        key = (sigma, bits)
        iv = self._root_cache.get(key)
        if iv is None:
            iv = self.embeddings[sigma].refined(bits)
            self._root_cache[key] = iv
        return iv

    def float_roots(self) -> list[float]:
        return list(self._float_roots)

    def embedding_order(self) -> list[int]:
        """Embedding indices with the identity first, then descending roots."""
        return [self.identity] + [i for i in range(self.degree) if i != self.identity]

    def to_json(self) -> dict:
        return {"N": self.N, "minpoly": self.minpoly.to_json(),
                "embeddings": [iv.to_json() for iv in self.embeddings]}


@lru_cache(maxsize=None)
def field_create(N: int) -> RealAlgebraicField:
    return RealAlgebraicField(N)


class FieldElement:
    """Element of a RealAlgebraicField stored as (integer numerators, denominator)."""

    __slots__ = ("field", "nums", "den")

    def __init__(self, field: RealAlgebraicField, nums: tuple[int, ...], den: int = 1):
        self.field = field
        self.nums = nums
        self.den = den

    @classmethod
    def from_coeffs(cls, field: RealAlgebraicField, coeffs) -> "FieldElement":
        cs = [_frac(c) for c in coeffs]
        if len(cs) > field.degree:
            # reduce a longer polynomial modulo the minimal polynomial
            r = RatPoly(cs) % field.minpoly
            cs = list(r.coeffs)
        cs = cs + [Fraction(0)] * (field.degree - len(cs))
        den = math.lcm(*(c.denominator for c in cs)) if cs else 1
        return cls._normalized(field, [int(c * den) for c in cs], den)

    @staticmethod
    def _normalized(field, nums, den) -> "FieldElement":
        g = math.gcd(den, *nums)
        if den < 0:
            g = -g
        if g != 1:
            nums = [n // g for n in nums]
            den //= g
        return FieldElement(field, tuple(nums), den)

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(n, self.den) for n in self.nums)

    def is_zero(self) -> bool:
        return not any(self.nums)

    def is_rational(self) -> bool:
        return not any(self.nums[1:])

    def is_integral_in_basis(self) -> bool:
        return self.den == 1

    def __eq__(self, other) -> bool:
        if isinstance(other, FieldElement):
            return self.field == other.field and self.nums == other.nums and self.den == other.den
        if isinstance(other, (int, Fraction)):
            return self == self.field(other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.field.N, self.nums, self.den))

    def _coerce(self, other) -> "FieldElement":
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise ValueError("elements of different fields")
            return other
        return self.field(other)

    def __add__(self, other) -> "FieldElement":
        o = self._coerce(other)
        if self.den == o.den:
            return FieldElement._normalized(self.field, [a + b for a, b in zip(self.nums, o.nums)], self.den)
        return FieldElement._normalized(
            self.field, [a * o.den + b * self.den for a, b in zip(self.nums, o.nums)], self.den * o.den)

    __radd__ = __add__

    def __neg__(self) -> "FieldElement":
        return FieldElement(self.field, tuple(-a for a in self.nums), self.den)

    def __sub__(self, other) -> "FieldElement":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "FieldElement":
        return self._coerce(other) - self

    def __mul__(self, other) -> "FieldElement":
        if isinstance(other, (int, Fraction)):
            other = _frac(other)
            return FieldElement._normalized(
                self.field, [a * other.numerator for a in self.nums], self.den * other.denominator)
        o = self._coerce(other)
        d = self.field.degree
        prod = [0] * (2 * d - 1)
        for i, a in enumerate(self.nums):
            if a:
                for j, b in enumerate(o.nums):
                    if b:
                        prod[i + j] += a * b
        den = self.den * o.den
        red = self.field._int_reduce
        if red is not None:
            out = prod[:d]
            for j in range(d - 1):
                c = prod[d + j]
                if c:
                    row = red[j]
                    for k in range(d):
                        out[k] += c * row[k]
            return FieldElement._normalized(self.field, out, den)
        return FieldElement.from_coeffs(self.field, [Fraction(c, den) for c in prod])

    __rmul__ = __mul__

    def __truediv__(self, other) -> "FieldElement":
        return self * self._coerce(other).inv()

    def __rtruediv__(self, other) -> "FieldElement":
        return self._coerce(other) * self.inv()

    def __pow__(self, e: int) -> "FieldElement":
        if e < 0:
            return self.inv() ** (-e)
        result = self.field.one
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def as_poly(self) -> RatPoly:
        return RatPoly(self.coeffs)

    def inv(self) -> "FieldElement":
        """Inverse via the extended Euclidean algorithm on (rep, minpoly)."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in a number field")
        a, b = self.as_poly(), self.field.minpoly
        # invariant: s0*a0 + t0*m = r0
        r0, r1 = a, b
        s0, s1 = RatPoly.const(1), RatPoly()
        while r1:
            q, r = r0.divmod(r1)
            r0, r1 = r1, r
            s0, s1 = s1, s0 - q * s1
        # r0 is a nonzero constant since the minpoly is irreducible
        if r0.degree != 0:
            raise ArithmeticError("minimal polynomial is reducible")
        inv = s0 * (1 / r0.coeffs[0])
        return FieldElement.from_coeffs(self.field, (inv % b).coeffs)

    # embeddings
    def embed(self, sigma: int, prec: int = 64) -> tuple[Fraction, Fraction]:
        """Rational interval of width <= 2**-prec containing the sigma-th
        real embedding (0-based, descending root order)."""
        coeffs = self.coeffs
        if self.is_rational():
            return coeffs[0], coeffs[0]
        target = Fraction(1, 2**prec)
        bits = prec + 8
        while True:
            iv = self.field.root_interval(sigma, bits)
            if iv.exact:
                v = RatPoly(coeffs)(iv.lo)
                return v, v
            m = iv.mid
            R = max(abs(iv.lo), abs(iv.hi))
            # |a(t) - a(m)| <= sup|a'| * |t - m| on the interval
            dbound = sum(abs(k * c) * R ** (k - 1) for k, c in enumerate(coeffs) if k)
            err = dbound * iv.width / 2
            v = RatPoly(coeffs)(m)
            if 2 * err <= target:
                return v - err, v + err
            bits += max(8, int(math.log2(float(dbound) + 1)) + 8)

    def embed_float(self, sigma: int) -> float:
        roots = self.field._float_roots
        if self.field.degree > 1 and (self.den > 2**40 or max(map(abs, self.nums)) > 2**40):
            lo, hi = self.embed(sigma, 60)
            return float((lo + hi) / 2)
        t = roots[sigma]
        acc = 0.0
        for c in reversed(self.nums):
            acc = acc * t + c
        return acc / self.den

    def sign(self, sigma: int) -> int:
        """Exact sign in the sigma-th embedding."""
        if self.is_zero():
            return 0
        prec = 32
        while True:
            lo, hi = self.embed(sigma, prec)
            if lo > 0:
                return 1
            if hi < 0:
                return -1
            prec *= 2

    def __float__(self) -> float:
        return self.embed_float(self.field.identity)

    def __repr__(self) -> str:
        return f"FieldElement(N={self.field.N}, {self})"

    def __str__(self) -> str:
        terms = []
        for k, c in enumerate(self.coeffs):
            if c:
                mon = "" if k == 0 else ("th" if k == 1 else f"th^{k}")
                terms.append(f"{c}{'*' if mon else ''}{mon}")
        return " + ".join(terms) if terms else "0"


def embed(a: FieldElement, sigma: int, prec: int = 64) -> tuple[Fraction, Fraction]:
    return a.embed(sigma, prec)


def add(a: FieldElement, b: FieldElement) -> FieldElement:
    return a + b


def mul(a: FieldElement, b: FieldElement) -> FieldElement:
    return a * b


def neg(a: FieldElement) -> FieldElement:
    return -a


def inv(a: FieldElement) -> FieldElement:
    return a.inv()


def _rational_kernel_vector(rows: list[list[Fraction]]) -> list[Fraction] | None:
    """A nonzero c with sum_i c_i rows[i] = 0, or None if rows are independent."""
    n = len(rows)
    d = len(rows[0])
    # column-reduce the transpose: solve M^T c = 0 where M has the rows as rows
    mat = [[rows[i][j] for i in range(n)] for j in range(d)]
    pivots: list[int] = []
    r = 0
    for col in range(n):
        piv = next((i for i in range(r, d) if mat[i][col] != 0), None)
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        pv = mat[r][col]
        mat[r] = [x / pv for x in mat[r]]
        for i in range(d):
            if i != r and mat[i][col] != 0:
                f = mat[i][col]
                mat[i] = [x - f * y for x, y in zip(mat[i], mat[r])]
        pivots.append(col)
        r += 1
        if r == d:
            break
    free = [c for c in range(n) if c not in pivots]
    if not free:
        return None
    f = free[0]
    c = [Fraction(0)] * n
    c[f] = Fraction(1)
    for i, pc in enumerate(pivots):
        c[pc] = -mat[i][f]
    return c


def element_minpoly(a: FieldElement) -> RatPoly:
    """Monic minimal polynomial over Q: the first linear dependency among powers of a."""
    powers = [a.field.one.coeffs]
    p = a.field.one
    for k in range(1, a.field.degree + 1):
        p = p * a
        powers.append(p.coeffs)
        c = _rational_kernel_vector(powers)
        if c is not None:
            # the dependency must involve the top power since lower ones were independent
            return RatPoly(c).monic()
    raise ArithmeticError("no dependency found up to the field degree")


def poly_to_json(p: RatPoly) -> str:
    return json.dumps(p.to_json())

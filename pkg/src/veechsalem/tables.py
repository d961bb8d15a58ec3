"""Golden rows of the published Salem tables for the two triangle families.

Each row: q, degree, word, half-trace minimal polynomial, printed conjugates.
"""

from __future__ import annotations

from dataclasses import dataclass

from .exactfield import RatPoly, parse_poly
from .trigroup import Family


@dataclass(frozen=True)
class TableRow:
    family: Family
    q: int
    degree: int
    word: str
    poly_text: str
    conjugates: tuple[str, ...]

    @property
    def poly(self) -> RatPoly:
        return parse_poly(self.poly_text)

    @property
    def conjugate_values(self) -> tuple[float, ...]:
        return tuple(float(c) for c in self.conjugates)


_F2 = Family.TWO_Q_INF
_FQ = Family.Q_INF_INF

TWO_Q_INF_ROWS: tuple[TableRow, ...] = (
    TableRow(_F2, 7, 3, "t^3.s", "x^3 - 2*x^2 - x + 1", ("2.247", "0.5550", "-0.8019")),
    TableRow(_F2, 9, 3, "t^4.s", "x^3 - 3*x^2 + 1", ("2.879", "0.6527", "-0.5321")),
    TableRow(_F2, 11, 5, "t^5.s.t^4.s",
             "x^5 - 39/2*x^4 - 47*x^3 - 243/8*x^2 - 17/16*x + 89/32",
             ("21.73", "0.2425", "-0.6156", "-0.8781", "-0.9764")),
    TableRow(_F2, 13, 6, "t^7.s.t^7.s.t^4.s",
             "x^6 - 227*x^5 - 11*x^4 + 318*x^3 + 41*x^2 - 110*x - 25",
             ("227.0", "0.9072", "0.8412", "-0.2464", "-0.6697", "-0.8746")),
    TableRow(_F2, 15, 4, "t^7.s", "x^4 - 4*x^3 - 4*x^2 + x + 1",
             ("4.783", "0.5112", "-0.5473", "-0.7472")),
)

Q_INF_INF_ROWS: tuple[TableRow, ...] = (
    TableRow(_FQ, 7, 3, "t.s^3", "x^3 - 3*x^2 - 4*x - 1", ("4.049", "-0.3569", "-0.6920")),
    TableRow(_FQ, 8, 4, "t.s^2.t.s^3", "x^4 - 24*x^3 + 15*x^2 + 4*x + 1/8",
             ("23.35", "0.8571", "-0.03655", "-0.1709")),
    TableRow(_FQ, 9, 3, "t.s^2", "x^3 - 3*x^2 + 1", ("2.879", "0.6527", "-0.5321")),
    TableRow(_FQ, 10, 4, "t.s^3.t.s^7", "x^4 - 49*x^3 - 441/4*x^2 - 291/4*x - 199/16",
             ("51.18", "-0.2644", "-0.9504", "-0.9672")),
    TableRow(_FQ, 11, 5, "t.s^4.t.s^7",
             "x^5 - 155/2*x^4 - 122*x^3 - 459/8*x^2 - 173/16*x - 23/32",
             ("79.05", "-0.1907", "-0.2214", "-0.2388", "-0.9015")),
    TableRow(_FQ, 12, 4, "t.s^2.t.s^3", "x^4 - 24*x^3 - 61*x^2 - 48*x - 191/16",
             ("26.38", "-0.5254", "-0.9096", "-0.9468")),
    TableRow(_FQ, 13, 6, "t.s^4.t.s^5.t^-1.s^4.t^-1.s^5",
             "x^6 - 43107/2*x^5 - 188297/4*x^4 - 26514*x^3 + 53979/8*x^2 + 304515/32*x + 124175/64",
             ("21560.", "0.5373", "-0.3375", "-0.7022", "-0.8374", "-0.8440")),
    TableRow(_FQ, 14, 6, "t.s^5.t.s^9",
             "x^6 - 125*x^5 - 955/4*x^4 - 45/4*x^3 + 1653/8*x^2 + 967/8*x + 1009/64",
             ("126.9", "0.9692", "-0.1912", "-0.6930", "-0.9794", "-0.9879")),
    TableRow(_FQ, 15, 4, "t.s^3", "x^4 - 4*x^3 - 4*x^2 + x + 1",
             ("4.783", "0.5112", "-0.5473", "-0.7472")),
)

# q values at which the published search came up empty
NEGATIVE_Q = {_F2: 17, _FQ: 16}


def rows(family: Family) -> tuple[TableRow, ...]:
    return TWO_Q_INF_ROWS if family is _F2 else Q_INF_INF_ROWS


def row(family: Family, q: int) -> TableRow:
    for r in rows(family):
        if r.q == q:
            return r
    raise KeyError(f"no tabled row for {family.value} q={q}")

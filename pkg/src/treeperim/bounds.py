"""Closed-form bounds on the isoperimetric peak of complete q-ary trees."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Iterable

GUARD = 1e-9


def log_q(x: float, q: int) -> float:
    return math.log(x) / math.log(q)


def ilog_floor(x: int, q: int) -> int:
    """Exact ``floor(log_q x)`` for integers ``x >= 1``."""
    if x < 1 or q < 2:
        raise ValueError("need x >= 1 and q >= 2")
    k, p = 0, q
    while p <= x:
        k += 1
        p *= q
    return k


def ilog_ceil(x: int, q: int) -> int:
    """Exact ``ceil(log_q x)`` for integers ``x >= 1``."""
    k = ilog_floor(x, q)
    return k if q**k == x else k + 1


def guarded_ceil(x: float) -> int:
    return math.ceil(x - GUARD)


def guarded_floor(x: float) -> int:
    return math.floor(x + GUARD)


@dataclass(frozen=True)
class BoundReport:
    q: int
    d: int
    source: str
    lower_real: float
    upper_real: float | None

    @property
    def lower_int(self) -> int:
        return guarded_ceil(self.lower_real)

    @property
    def upper_int(self) -> int | None:
        return None if self.upper_real is None else guarded_floor(self.upper_real)

    def contains(self, value: int) -> bool:
        up = self.upper_int
        return self.lower_int <= value and (up is None or value <= up)

    def row(self) -> list:
        up = "" if self.upper_real is None else repr(float(self.upper_real))
        upi = "" if self.upper_int is None else self.upper_int
        return [self.q, self.d, self.source, repr(float(self.lower_real)), self.lower_int, up, upi]


CSV_HEADER = ["q", "d", "source", "lower_real", "lower_int", "upper_real", "upper_int"]


def bounds_csv(reports: Iterable[BoundReport]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in reports:
        w.writerow(r.row())
    return buf.getvalue()


def _check(q: int, d: int, dmin: int = 1) -> None:
    if q < 2:
        raise ValueError(f"q must be at least 2, got {q}")
    if d < dmin:
        raise ValueError(f"d must be at least {dmin}, got {d}")


def prior_bounds(q: int, d: int, c: float | None = None, log_base: float = math.e) -> list[BoundReport]:
    """The three earlier lower bounds, tagged prior-1..prior-3.

    The first bound's logarithm base is a free parameter; natural log is the
    default. The second needs its constant ``c`` from the caller.
    """
    _check(q, d)
    if c is None:
        raise ValueError("the c*d/sqrt(q) bound needs an explicit constant c")
    lg = lambda x: math.log(x) / math.log(log_base)
    X = q + 6 + 2 * lg(d)
    p1 = BoundReport(q, d, "prior-1", (d * lg(q) - X) / X, None)
    p2_low = c * d if q == 2 else c * d / math.sqrt(q)
    p2 = BoundReport(q, d, "prior-2", p2_low, float(d))
    p3 = BoundReport(q, d, "prior-3", 3 / 40 * (d - 2), float(d))
    return [p1, p2, p3]


def peak_bounds(q: int, d: int) -> BoundReport:
    _check(q, d)
    if q >= 5:
        return BoundReport(q, d, "q>=5", float(d), float(d))
    if q in (3, 4):
        lower = d - log_q(d, q) - (log_q(2, q) + 1)
        upper = d - ilog_floor(d, q) + 2
        return BoundReport(q, d, "q=3,4", lower, float(upper))
    lower = (d - ilog_ceil(3 * d, 2)) // 2
    return BoundReport(q, d, "q=2", float(lower), float(-(-d // 2)))


def peak_bounds_q2_real(d: int) -> float:
    """The weaker real-valued form ``(d - log2 d - 3 - log2 3) / 2`` for binary trees."""
    _check(2, d)
    return (d - math.log2(d) - 3 - math.log2(3)) / 2


def pathwidth_formula(q: int, d: int) -> int:
    _check(q, d, dmin=0)
    return d if q >= 3 else -(-d // 2)


def epsilon_window(q: int) -> tuple[float, float]:
    """Admissible range of ``peak - (d - log_q d)`` for q in {3, 4}."""
    if q not in (3, 4):
        raise ValueError("the epsilon window is stated for q in {3, 4}")
    return 1 - log_q(2, q), 3.0

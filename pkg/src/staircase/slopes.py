"""Slopes r = p/q in Q u {inf} and the primitive directions (p, q) behind them."""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Union

INF = math.inf

Slope = Union[Fraction, float]


def canonical_direction(p: int, q: int) -> tuple[int, int]:
    """Representative of +-(p, q) with q > 0, or (1, 0)."""
    p, q = int(p), int(q)
    if (p, q) == (0, 0):
        raise ValueError("(0, 0) is not a direction")
    if math.gcd(p, q) != 1:
        raise ValueError(f"direction ({p}, {q}) is not primitive")
    if q < 0 or (q == 0 and p < 0):
        p, q = -p, -q
    return p, q


def slope_of(p: int, q: int) -> Slope:
    p, q = canonical_direction(p, q)
    return INF if q == 0 else Fraction(p, q)


def direction_of(r: Slope) -> tuple[int, int]:
    if r == INF or r == -INF:
        return (1, 0)
    r = Fraction(r)
    return r.numerator, r.denominator


def as_slope(r) -> Slope:
    """Coerce ints, Fractions, 'p/q' strings and 'inf' to a slope."""
    if isinstance(r, str):
        t = r.strip().lower()
        if t in ("inf", "infinity", "oo", "∞", "-inf"):
            return INF
        return Fraction(t)
    if isinstance(r, float):
        if math.isinf(r):
            return INF
        return Fraction(r)
    return Fraction(r)


def det(r: Slope, rp: Slope) -> int:
    """Torus intersection p q' - p' q of the two directions."""
    p, q = direction_of(r)
    pp, qp = direction_of(rp)
    return p * qp - pp * q


def fmt_slope(r: Slope) -> str:
    if r == INF:
        return "inf"
    r = Fraction(r)
    return str(r.numerator) if r.denominator == 1 else f"{r.numerator}/{r.denominator}"


def farey_slopes(bound: int, include_inf: bool = True) -> list[Slope]:
    """All slopes p/q with |p| <= bound and 1 <= q <= bound, plus inf, sorted."""
    out = {Fraction(p, q) for q in range(1, bound + 1) for p in range(-bound, bound + 1) if math.gcd(p, q) == 1}
    res: list[Slope] = sorted(out)
    if include_inf:
        res.append(INF)
    return res

"""The Veech group of St(2s-1): Gamma = <T, R> with T = [[1, 2], [0, 1]], R = [[0, -1], [1, 0]].

Gamma is the index-3 subgroup of SL2(Z) of matrices congruent mod 2 to the
identity or to [[0, 1], [1, 0]].  It has two orbits on primitive directions:
(p, q) with p != q mod 2 (the orbit of (1, 0), slopes equivalent to inf) and
p, q both odd (the orbit of (1, 1), slopes equivalent to 1).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction

from staircase.hyper import DiskPoint, _pt
from staircase.slopes import INF, Slope, as_slope, direction_of

_MATS = {
    "T": (1, 2, 0, 1),
    "t": (1, -2, 0, 1),  # T^-1
    "R": (0, -1, 1, 0),
}


def _mul(m, n):
    a, b, c, d = m
    e, f, g, h = n
    return (a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)


def in_gamma(m) -> bool:
    a, b, c, d = m
    if a * d - b * c != 1:
        return False
    return (a % 2, b % 2, c % 2, d % 2) in ((1, 0, 0, 1), (0, 1, 1, 0))


@dataclass(frozen=True)
class GroupElement:
    """Matrix (a, b, c, d) of Gamma with a word in T, t = T^-1 and R evaluating to it."""

    m: tuple[int, int, int, int]
    word: str = ""

    def __post_init__(self):
        if not in_gamma(self.m):
            raise ValueError(f"{self.m} is not in the Veech group")

    @classmethod
    def identity(cls) -> GroupElement:
        return cls((1, 0, 0, 1), "")

    @classmethod
    def from_word(cls, word: str) -> GroupElement:
        m = (1, 0, 0, 1)
        for ch in word:
            m = _mul(m, _MATS[ch])
        return cls(m, word)

    def __matmul__(self, other: GroupElement) -> GroupElement:
        return GroupElement(_mul(self.m, other.m), self.word + other.word)

    def inverse(self) -> GroupElement:
        a, b, c, d = self.m
        inv = {"T": "t", "t": "T", "R": "RRR"}
        return GroupElement((d, -b, -c, a), "".join(inv[ch] for ch in reversed(self.word)))

    def evaluate_word(self) -> tuple[int, int, int, int]:
        return GroupElement.from_word(self.word).m

    def __call__(self, obj):
        if isinstance(obj, DiskPoint) or isinstance(obj, complex):
            return act_on_point(self, obj)
        return act_on_slope(self, obj)


T = GroupElement.from_word("T")
T_INV = GroupElement.from_word("t")
R = GroupElement.from_word("R")


def act_on_slope(g: GroupElement, r: Slope) -> Slope:
    a, b, c, d = g.m
    if r == INF:
        return INF if c == 0 else Fraction(a, c)
    r = Fraction(r)
    den = c * r + d
    if den == 0:
        return INF
    return (a * r + b) / den


def act_on_direction(g: GroupElement, p: int, q: int) -> tuple[int, int]:
    a, b, c, d = g.m
    return a * p + b * q, c * p + d * q


def act_on_point(g: GroupElement, z) -> DiskPoint:
    """Moebius action; exact for rational coordinates."""
    z = _pt(z)
    a, b, c, d = g.m
    x, y = z.x, z.y
    den = (c * x + d) ** 2 + (c * y) ** 2
    nx = ((a * x + b) * (c * x + d) + a * c * y * y) / den
    ny = y / den
    return DiskPoint(nx, ny)


class SlopeClass(enum.Enum):
    EVEN = "even"  # orbit of inf = (1, 0): p != q mod 2
    ODD = "odd"  # orbit of 1 = (1, 1): p, q odd


def orbit_class(p: int, q: int) -> SlopeClass:
    if math.gcd(p, q) != 1:
        raise ValueError(f"({p}, {q}) is not primitive")
    return SlopeClass.EVEN if (p - q) % 2 else SlopeClass.ODD


def slope_class(r: Slope) -> SlopeClass:
    return orbit_class(*direction_of(r))


def reduce_to_fundamental_domain(z, max_steps: int = 10_000) -> tuple[DiskPoint, GroupElement]:
    """Move z into |x| <= 1, x^2 + y^2 >= 1; returns (z', g) with g z = z'.

    Boundary copies are chosen with x' >= 0 (x' = -1 goes to 1, points of the
    unit circle with x' < 0 go to their mirror image via R).
    """
    z = _pt(z)
    g = GroupElement.identity()
    for _ in range(max_steps):
        x = z.x
        k = 0
        if x > 1 or x < -1:
            k = -math.floor((x + 1) / 2)
            if x + 2 * k == -1:
                k += 1
        elif x == -1:
            k = 1
        if k:
            step = GroupElement((1, 2 * k, 0, 1), ("T" if k > 0 else "t") * abs(k))
            z = act_on_point(step, z)
            g = step @ g
            continue
        n2 = z.x * z.x + z.y * z.y
        if n2 < 1 or (n2 == 1 and z.x < 0):
            z = act_on_point(R, z)
            g = R @ g
            continue
        return z, g
    raise RuntimeError("fundamental domain reduction did not terminate")


def in_fundamental_domain(z, tol: float = 0.0) -> bool:
    z = _pt(z)
    return abs(z.x) <= 1 + tol and z.x * z.x + z.y * z.y >= 1 - tol


def slope_to_cusp(r: Slope) -> GroupElement:
    """V in Gamma with V(r) = inf (even class) or V(r) = 1 (odd class).

    Even continued-fraction descent: translate by an even integer to
    |r| <= 1, stop at 0 (one more R) or +-1, otherwise invert by R, which
    strictly lowers the denominator.
    """
    r = as_slope(r)
    g = GroupElement.identity()
    while True:
        if r == INF:
            return g
        if r == 1:
            return g
        if r.denominator == 1 and r.numerator % 2:
            k = (1 - r.numerator) // 2
        else:
            # r/2 is never a half-integer here, so the nearest even integer is unique
            k = -round(r / 2)
        if k:
            step = GroupElement((1, 2 * k, 0, 1), ("T" if k > 0 else "t") * abs(k))
            r = act_on_slope(step, r)
            g = step @ g
            continue
        # |r| < 1 here; R lowers the denominator strictly, and R(0) = inf
        r = act_on_slope(R, r)
        g = R @ g


def _in_cusp_family(v: Fraction, period: int) -> bool:
    """v in Z or v = period*k + 1/j for integers k, j != 0."""
    if v.denominator == 1:
        return True
    base = math.floor(v / period) * period
    for k in (base, base + period):
        u = v - k
        if u != 0 and u.numerator in (1, -1) and abs(u) <= 1:
            return True
    return False


def is_end_of_Z_group(r: Slope, rp: Slope) -> bool:
    """Group-theoretic membership of (r, r') in End(Z).

    End(Z) is the Gamma-orbit of pairs of points of Z u {inf}.  Pairs through
    inf are (inf, x) with x in Z u {2k + 1/j}; pairs through 1 are (1, x) with
    1/(1 - x) in Z u {k + 1/j}.  One endpoint is moved to inf or 1 by
    slope_to_cusp and the other is tested.
    """
    r, rp = as_slope(r), as_slope(rp)
    if r == rp:
        raise ValueError("need two distinct endpoints")
    if slope_class(r) != SlopeClass.EVEN and slope_class(rp) == SlopeClass.EVEN:
        r, rp = rp, r
    V = slope_to_cusp(r)
    w = act_on_slope(V, rp)
    if act_on_slope(V, r) == INF:
        return w == INF or _in_cusp_family(Fraction(w), 2)
    # cusp at 1: conjugate to inf by z -> 1/(1 - z)
    if w == INF:
        return True
    u = Fraction(1) / (1 - w)
    return _in_cusp_family(u, 1)


def is_end_of_Z(s: int, r: Slope, rp: Slope, diagnostic: bool = False) -> bool:
    """(r, r') in End(Z), decided by I_{r,r'} = 1 exactly.

    With ``diagnostic=True`` the group-theoretic test is run as well and any
    disagreement raises.
    """
    from staircase.saddle import intersection_ratio

    r, rp = as_slope(r), as_slope(rp)
    if r == rp:
        raise ValueError("need two distinct slopes")
    val = intersection_ratio(s, r, rp).value == 1
    if diagnostic:
        grp = is_end_of_Z_group(r, rp)
        if grp != val:
            raise AssertionError(f"End(Z) tests disagree on ({r}, {rp}): I-test {val}, group test {grp}")
    return val

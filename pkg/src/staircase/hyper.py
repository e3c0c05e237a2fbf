"""Upper half-plane geometry for the Teichmueller disk.

A direction slope r = p/q gives the torus length
l_r(x, y) = sqrt((p + q x)^2 + (q y)^2) and

    K_{r,r'}(z) = y |p q' - p' q| / (l_r(z) l_{r'}(z)),

which equals sech of the hyperbolic distance from z to the geodesic with
endpoints -r and -r' (the locus where the two directions are orthogonal).
Geodesics here are always labelled by their actual endpoints.

Everything below accepts floats or Fractions; with rational input the
"squared" helpers stay exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from staircase.slopes import INF, Slope, det, direction_of

#: sech of the distance from the minimizer k to the three nearest Z-geodesics
MIN_K = math.sqrt(143 / 144)
MIN_K_SQUARED = Fraction(143, 144)


@dataclass(frozen=True)
class DiskPoint:
    x: float | Fraction
    y: float | Fraction

    def __post_init__(self):
        if not self.y > 0:
            raise ValueError(f"point ({self.x}, {self.y}) is not in the upper half-plane")

    @property
    def exact(self) -> bool:
        return isinstance(self.x, (int, Fraction)) and isinstance(self.y, (int, Fraction))

    def as_float(self) -> DiskPoint:
        return DiskPoint(float(self.x), float(self.y))

    @property
    def complex(self) -> complex:
        return complex(float(self.x), float(self.y))


def _pt(z) -> DiskPoint:
    if isinstance(z, DiskPoint):
        return z
    if isinstance(z, complex):
        return DiskPoint(z.real, z.imag)
    return DiskPoint(*z)


@dataclass(frozen=True)
class Geodesic:
    """Geodesic with endpoints a < b; b = inf means the vertical line x = a."""

    a: Fraction | float
    b: Fraction | float

    def __post_init__(self):
        a, b = (Fraction(t) if isinstance(t, int) else t for t in (self.a, self.b))
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        if a == b:
            raise ValueError("a geodesic needs two distinct endpoints")
        if a == INF or (b != INF and b < a):
            object.__setattr__(self, "a", b)
            object.__setattr__(self, "b", a)

    @classmethod
    def vertical(cls, c) -> Geodesic:
        return cls(c, INF)

    @property
    def is_vertical(self) -> bool:
        return self.b == INF

    @property
    def center(self):
        return (self.a + self.b) / 2

    @property
    def radius(self):
        return (self.b - self.a) / 2

    def __str__(self):
        from staircase.slopes import fmt_slope

        return f"gamma({fmt_slope(self.a)}, {fmt_slope(self.b)})"


def geodesic_of_directions(r: Slope, rp: Slope) -> Geodesic:
    """Geodesic where directions r and r' are orthogonal: endpoints -r, -r'."""
    neg = lambda t: INF if t == INF else -t  # noqa: E731
    return Geodesic(neg(r), neg(rp))


def length_l(r: Slope, z) -> float:
    z = _pt(z)
    p, q = direction_of(r)
    return math.sqrt((p + q * z.x) ** 2 + (q * z.y) ** 2)


def length_squared(r: Slope, z):
    z = _pt(z)
    p, q = direction_of(r)
    return (p + q * z.x) ** 2 + (q * z.y) ** 2


def K(r: Slope, rp: Slope, z) -> float:
    z = _pt(z)
    d = det(r, rp)
    if d == 0:
        raise ValueError("K needs two distinct slopes")
    return float(z.y) * abs(d) / (length_l(r, z) * length_l(rp, z))


def K_squared(r: Slope, rp: Slope, z):
    """K^2, exact when z has rational coordinates."""
    z = _pt(z)
    d = det(r, rp)
    if d == 0:
        raise ValueError("K needs two distinct slopes")
    return z.y ** 2 * d * d / (length_squared(r, z) * length_squared(rp, z))


def signed_sinh_distance(z, g: Geodesic):
    """sinh of the distance from z to g, signed by side (+ above/right of g)."""
    z = _pt(z)
    if g.is_vertical:
        return (z.x - g.a) / z.y
    c, rho = g.center, g.radius
    return ((z.x - c) ** 2 + z.y ** 2 - rho ** 2) / (2 * rho * z.y)


def sinh_distance(z, g: Geodesic):
    return abs(signed_sinh_distance(z, g))


def dist_to_geodesic(z, g: Geodesic) -> float:
    return math.asinh(float(sinh_distance(z, g)))


def geodesic_K(g: Geodesic, z) -> float:
    """sech of the distance from z to g."""
    t = float(sinh_distance(z, g))
    return 1.0 / math.sqrt(1.0 + t * t)


def geodesic_K_squared(g: Geodesic, z):
    t = sinh_distance(z, g)
    return 1 / (1 + t * t)


def K_via_distance(r: Slope, rp: Slope, z) -> float:
    if det(r, rp) == 0:
        raise ValueError("K needs two distinct slopes")
    return 1.0 / math.cosh(dist_to_geodesic(z, geodesic_of_directions(r, rp)))


def J(r: Slope, z):
    """Same-direction term y / l_r^2; exact for rational z."""
    z = _pt(z)
    return z.y / length_squared(r, z)


@dataclass(frozen=True)
class Horodisk:
    p: int
    q: int

    def __post_init__(self):
        if math.gcd(self.p, self.q) != 1:
            raise ValueError(f"({self.p}, {self.q}) is not primitive")

    @property
    def center(self):
        return (Fraction(-self.p, self.q), Fraction(1, 2 * self.q ** 2))

    @property
    def radius(self):
        return Fraction(1, 2 * self.q ** 2)

    def contains(self, z) -> bool:
        z = _pt(z)
        if self.q == 0:
            return z.y > 1
        cx, cy = self.center
        return (z.x - cx) ** 2 + (z.y - cy) ** 2 < self.radius ** 2


def in_horodisk(z, p: int, q: int) -> bool:
    """Membership in the horodisk tangent at -p/q; same as J_{p/q}(z) > 1."""
    return Horodisk(p, q).contains(z)


@dataclass(frozen=True)
class Circle:
    cx: float
    cy: float
    radius: float

    def power(self, z) -> float:
        z = _pt(z)
        return (z.x - self.cx) ** 2 + (z.y - self.cy) ** 2 - self.radius ** 2


@dataclass(frozen=True)
class BananaNeighborhood:
    """Points at distance < arcsech(k0) from ``geodesic``."""

    geodesic: Geodesic
    k0: float = MIN_K

    def __post_init__(self):
        if not 0 < self.k0 <= 1:
            raise ValueError("threshold must lie in (0, 1]")

    def contains(self, z) -> bool:
        return geodesic_K(self.geodesic, z) > self.k0

    def margin(self, z) -> float:
        return geodesic_K(self.geodesic, z) - self.k0


def banana_circles(n: int) -> tuple[Circle, Circle]:
    """Circles C_n (lower centre) and C^n (upper centre) bounding V_{-n,1}."""
    if n < 1:
        raise ValueError("n must be >= 1")
    cx = (1 - n) / 2
    off = (1 + n) / 2 / math.sqrt(143)
    rad = (1 + n) / 2 * math.sqrt(144 / 143)
    return Circle(cx, -off, rad), Circle(cx, off, rad)


def banana_lines_half_inf() -> tuple[tuple[float, float], tuple[float, float]]:
    """Boundary lines of V_{1/2,inf} as (slope, intercept): y = +-sqrt(143) (x - 1/2)."""
    m = math.sqrt(143)
    return (m, -m / 2), (-m, m / 2)


def geodesic_intersection(g1: Geodesic, g2: Geodesic):
    """Intersection point in H^2 (x, y^2) of two geodesics, or None."""
    if g1.is_vertical and g2.is_vertical:
        return None
    if g1.is_vertical:
        g1, g2 = g2, g1
    c1, r1 = g1.center, g1.radius
    if g2.is_vertical:
        x = g2.a
    else:
        c2, r2 = g2.center, g2.radius
        if c1 == c2:
            return None
        x = ((r1 ** 2 - r2 ** 2) - (c1 ** 2 - c2 ** 2)) / (2 * (c2 - c1))
    y2 = r1 ** 2 - (x - c1) ** 2
    if y2 <= 0:
        return None
    return x, y2


def _side_numerator(g: Geodesic, v):
    """Sign-carrying part of signed_sinh_distance at a vertex, ideal vertices allowed."""
    if v == INF:
        if g.is_vertical:
            raise ValueError("degenerate triangle")
        return 1
    x, y2 = v
    if g.is_vertical:
        return x - g.a
    return (x - g.center) ** 2 + y2 - g.radius ** 2


def _vertex(g1: Geodesic, g2: Geodesic):
    """Common point of two sides: interior point (x, y^2), shared endpoint (e, 0) or INF."""
    v = geodesic_intersection(g1, g2)
    if v is not None:
        return v
    e1 = {g1.a, g1.b}
    common = e1 & {g2.a, g2.b}
    if not common:
        raise ValueError(f"{g1} and {g2} do not meet")
    e = common.pop()
    return INF if e == INF else (e, 0)


def incenter_xy2(g1: Geodesic, g2: Geodesic, g3: Geodesic):
    """Point equidistant from three geodesics bounding a triangle, as (x, y^2).

    With u = x^2 + y^2, y * (signed sinh distance) to a semicircle is
    (u - 2 c x + c^2 - rho^2) / (2 rho) and to a vertical line x - c, both
    affine in (u, x).  Equating them for the three sides, each oriented
    towards the triangle, is a 2x2 linear system; the solution is exact when
    the endpoints are rational.
    """
    sides = (g1, g2, g3)
    verts = (_vertex(g2, g3), _vertex(g1, g3), _vertex(g1, g2))
    rows = []
    for g, v in zip(sides, verts):
        sign = _side_numerator(g, v)
        if sign == 0:
            raise ValueError("degenerate triangle")
        sigma = 1 if sign > 0 else -1
        if g.is_vertical:
            rows.append((0, sigma, -sigma * g.a))
        else:
            c, rho = g.center, g.radius
            k = sigma / (2 * rho)
            rows.append((k, -2 * c * k, (c * c - rho * rho) * k))
    (a1, b1, c1), (a2, b2, c2), (a3, b3, c3) = rows
    # (a1 - a2) u + (b1 - b2) x = c2 - c1, and the same for sides 2, 3
    A, B, C = a1 - a2, b1 - b2, c2 - c1
    D, E, F = a2 - a3, b2 - b3, c3 - c2
    dt = A * E - B * D
    if dt == 0:
        raise ValueError("sides do not bound a triangle")
    u = (C * E - B * F) / dt
    x = (A * F - C * D) / dt
    y2 = u - x * x
    if not y2 > 0:
        raise ValueError("sides do not bound a triangle")
    return x, y2


def incenter(g1: Geodesic, g2: Geodesic, g3: Geodesic) -> DiskPoint:
    x, y2 = incenter_xy2(g1, g2, g3)
    if isinstance(y2, Fraction):
        r = _exact_sqrt(y2)
        if r is not None:
            return DiskPoint(x, r)
    # x stays exact; only y needs a square root
    return DiskPoint(x, math.sqrt(y2))


def _exact_sqrt(q: Fraction):
    n, d = q.numerator, q.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None

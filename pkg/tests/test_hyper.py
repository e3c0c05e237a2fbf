import math
import random
from fractions import Fraction

import pytest

from staircase.hyper import (
    MIN_K,
    MIN_K_SQUARED,
    BananaNeighborhood,
    DiskPoint,
    Geodesic,
    Horodisk,
    J,
    K,
    K_squared,
    K_via_distance,
    banana_circles,
    banana_lines_half_inf,
    dist_to_geodesic,
    geodesic_K,
    geodesic_K_squared,
    geodesic_of_directions,
    in_horodisk,
    incenter,
    incenter_xy2,
    length_l,
    sinh_distance,
)
from staircase.slopes import INF

KX, KY = 9 / 14, math.sqrt(143) / 14


def test_disk_point_needs_positive_y():
    with pytest.raises(ValueError):
        DiskPoint(0, 0)
    assert DiskPoint(Fraction(1, 2), 1).exact
    assert not DiskPoint(0.5, 1).exact


def test_geodesic_normalisation():
    g = Geodesic(2, -1)
    assert (g.a, g.b) == (-1, 2) and g.center == Fraction(1, 2) and g.radius == Fraction(3, 2)
    v = Geodesic(INF, 3)
    assert v.is_vertical and v.a == 3
    with pytest.raises(ValueError):
        Geodesic(1, 1)


@pytest.mark.parametrize("r, z, want", [
    (INF, (0.3, 2.0), 1.0),
    (0, (0, 1), 1.0),
    (1, (0, 1), math.sqrt(2)),
])
def test_length_l(r, z, want):
    assert length_l(r, z) == pytest.approx(want, abs=1e-15)


def test_K_examples():
    assert K(0, INF, (0, 1)) == pytest.approx(1)
    assert K(-1, 1, (0, 1)) == pytest.approx(1)
    assert K(-1, 1, (KX, KY)) == pytest.approx(MIN_K, abs=1e-15)
    with pytest.raises(ValueError):
        K(1, 1, (0, 1))


def test_K_squared_exact_at_k():
    # y^2 is rational at k even though y is not
    z = (Fraction(9, 14), Fraction(143, 196))
    x, y2 = z
    # K^2 = y^2 det^2 / (l^2 l'^2) with l^2 = (p + q x)^2 + q^2 y^2
    l1 = (-1 + x) ** 2 + y2
    l2 = (1 + x) ** 2 + y2
    assert y2 * 4 / (l1 * l2) == MIN_K_SQUARED


def test_distance_examples():
    assert dist_to_geodesic((0, 1), Geodesic(-1, 1)) == 0
    for t in (1.5, 2.0, 7.0):
        assert dist_to_geodesic((0, t), Geodesic(-1, 1)) == pytest.approx(math.log(t), abs=1e-14)
    x, y = 0.3, 0.7
    assert K(0, INF, (x, y)) == pytest.approx(1 / math.cosh(dist_to_geodesic((x, y), Geodesic.vertical(0))))


def test_K_via_distance_examples():
    for z in [(0.2, 0.9), (-1.3, 2.2)]:
        assert K_via_distance(0, INF, z) == pytest.approx(z[1] / math.hypot(*z), abs=1e-14)
    assert K_via_distance(-1, 1, (0, 1)) == pytest.approx(1)
    assert K_via_distance(-1, 1, (KX, KY)) == pytest.approx(MIN_K, abs=1e-14)


def test_K_is_sech_of_distance_to_negated_endpoints():
    rng = random.Random(3)
    for _ in range(500):
        r = Fraction(rng.randint(-7, 7), rng.randint(1, 7))
        rp = Fraction(rng.randint(-7, 7), rng.randint(1, 7))
        if r == rp:
            continue
        z = (rng.uniform(-3, 3), rng.uniform(0.1, 3))
        assert K(r, rp, z) == pytest.approx(geodesic_K(geodesic_of_directions(r, rp), z), abs=1e-12)


def test_K_squared_exact_matches_geometric():
    z = DiskPoint(Fraction(1, 3), Fraction(5, 4))
    for r, rp in [(0, INF), (Fraction(1, 2), 3), (-2, Fraction(-1, 5))]:
        assert K_squared(r, rp, z) == geodesic_K_squared(geodesic_of_directions(r, rp), z)


def test_J_examples():
    assert J(1, (0, 1)) == Fraction(1, 2)
    assert J(0, (0, 1)) == 1
    assert max(J(1, (KX, KY)), J(-1, (KX, KY))) == pytest.approx(MIN_K, abs=1e-15)


def test_horodisk_examples():
    assert in_horodisk((-1, 0.25), 1, 1)
    assert not in_horodisk((0, 1), 1, 1)
    assert Horodisk(0, 1).contains((0, 0.5))
    assert not Horodisk(0, 1).contains((0, 1.5))
    assert Horodisk(1, 0).contains((5, 1.5))


def test_horodisk_iff_J_exact():
    rng = random.Random(5)
    for _ in range(1000):
        z = DiskPoint(Fraction(rng.randint(-300, 300), 100), Fraction(rng.randint(1, 300), 100))
        p, q = rng.randint(-3, 3), rng.randint(0, 3)
        if math.gcd(p, q) != 1:
            continue
        r = INF if q == 0 else Fraction(p, q)
        hd = Horodisk(1, 0) if q == 0 else Horodisk(p, q)
        assert hd.contains(z) == (J(r, z) > 1)


def test_banana_circles_n1():
    lo, hi = banana_circles(1)
    assert lo.cx == 0 and hi.cx == 0
    assert hi.cy == pytest.approx(1 / math.sqrt(143)) and lo.cy == pytest.approx(-1 / math.sqrt(143))
    assert hi.radius == pytest.approx(math.sqrt(144 / 143))
    with pytest.raises(ValueError):
        banana_circles(0)


@pytest.mark.parametrize("n", [1, 2, 5, 12])
def test_banana_boundary_has_threshold_K(n):
    _, hi = banana_circles(n)
    g = Geodesic(-n, 1)
    for th in (0.3, 0.9, 1.5, 2.5):
        x = hi.cx + hi.radius * math.cos(th)
        y = hi.cy + hi.radius * math.sin(th)
        if y > 0:
            assert geodesic_K(g, (x, y)) == pytest.approx(MIN_K, abs=1e-10)


def test_banana_lines_half_inf():
    g = Geodesic(Fraction(1, 2), INF)
    for (m, c) in banana_lines_half_inf():
        for x in (0.6, 0.9, 0.3):
            y = m * x + c
            if y > 0:
                assert geodesic_K(g, (x, y)) == pytest.approx(MIN_K, abs=1e-12)


def test_banana_neighborhood():
    b = BananaNeighborhood(Geodesic(Fraction(1, 2), INF))
    assert b.contains((0.5, 40.0)) and b.contains((0.6, 10.0))
    assert not b.contains((KX, KY))
    with pytest.raises(ValueError):
        BananaNeighborhood(Geodesic(0, 1), 0)


def test_incenter_k_exact():
    x, y2 = incenter_xy2(Geodesic(-1, 1), Geodesic(-2, 1), Geodesic(0, 2))
    assert (x, y2) == (Fraction(9, 14), Fraction(143, 196))
    z = incenter(Geodesic(-1, 1), Geodesic(-2, 1), Geodesic(0, 2))
    assert z.x == Fraction(9, 14) and z.y == pytest.approx(KY, abs=1e-15)
    ds = [float(sinh_distance(z, g)) for g in (Geodesic(-1, 1), Geodesic(-2, 1), Geodesic(0, 2))]
    assert max(ds) - min(ds) < 1e-12


def test_incenter_symmetric_ideal_triangle():
    z = incenter(Geodesic(-1, 1), Geodesic.vertical(-1), Geodesic.vertical(1))
    assert z.x == 0
    ds = [float(sinh_distance(z, g)) for g in (Geodesic(-1, 1), Geodesic.vertical(-1), Geodesic.vertical(1))]
    assert max(ds) - min(ds) < 1e-12


def test_incenter_no_triangle():
    with pytest.raises(ValueError):
        incenter(Geodesic(0, 1), Geodesic(2, 3), Geodesic(4, 5))

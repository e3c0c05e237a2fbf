import math
from fractions import Fraction

from hypothesis import assume, given, settings
from hypothesis import strategies as st

from staircase import kvol as kv
from staircase.hyper import Geodesic, Horodisk, J, K, K_via_distance, geodesic_K
from staircase.origami import HomologyClass, coords_from_pairings
from staircase.saddle import intersection_ratio, sum_rule_check
from staircase.slopes import INF, det
from staircase.veech import GroupElement, act_on_point, act_on_slope, is_end_of_Z, is_end_of_Z_group

xs = st.floats(-3, 3, allow_nan=False)
ys = st.floats(0.05, 4, allow_nan=False)


@st.composite
def slopes(draw, h=8):
    q = draw(st.integers(0, h))
    if q == 0:
        return INF
    p = draw(st.integers(-h, h))
    assume(math.gcd(p, q) == 1)
    return Fraction(p, q)


words = st.text(alphabet="TtR", min_size=0, max_size=6)


@given(slopes(), slopes(), xs, ys)
def test_K_is_sech_distance(r, rp, x, y):
    assume(det(r, rp) != 0)
    assert abs(K(r, rp, (x, y)) - K_via_distance(r, rp, (x, y))) <= 1e-12


@given(slopes(), slopes(), st.floats(-2, 2), st.floats(0.2, 3), words)
def test_K_invariant_under_gamma(a, b, x, y, w):
    assume(det(a, b) != 0)
    g = GroupElement.from_word(w)
    gz = act_on_point(g, (x, y))
    ga = Geodesic(act_on_slope(g, a), act_on_slope(g, b))
    assert abs(geodesic_K(Geodesic(a, b), (x, y)) - geodesic_K(ga, gz)) <= 1e-9


@given(st.integers(-3, 3), st.integers(0, 3), st.integers(-300, 300), st.integers(1, 300))
def test_horodisk_iff_J(p, q, a, b):
    assume(math.gcd(p, q) == 1)
    z = (Fraction(a, 100), Fraction(b, 100))
    r = INF if q == 0 else Fraction(p, q)
    hd = Horodisk(1, 0) if q == 0 else Horodisk(p, q)
    assert hd.contains(z) == (J(r, z) > 1)


@settings(max_examples=60, deadline=None)
@given(slopes(6), slopes(6), words, st.sampled_from([2, 3]))
def test_I_and_end_invariant(r, rp, w, s):
    assume(det(r, rp) != 0)
    g = GroupElement.from_word(w)
    gr, grp = act_on_slope(g, r), act_on_slope(g, rp)
    assert intersection_ratio(s, r, rp).value == intersection_ratio(s, gr, grp).value
    assert is_end_of_Z(s, r, rp) == is_end_of_Z(s, gr, grp)
    assert is_end_of_Z_group(r, rp) == is_end_of_Z_group(gr, grp)


@settings(max_examples=60, deadline=None)
@given(slopes(6), slopes(6), st.sampled_from([2, 3, 4]))
def test_sum_rule(r, rp, s):
    assume(det(r, rp) != 0)
    assert sum_rule_check(s, r, rp)


@settings(max_examples=60, deadline=None)
@given(slopes(6), slopes(6), st.sampled_from([2, 3]))
def test_gap(r, rp, s):
    assume(det(r, rp) != 0)
    v = intersection_ratio(s, r, rp).value
    assert v == 1 if is_end_of_Z_group(r, rp) else v <= Fraction(9, 10)


@given(st.integers(2, 6).flatmap(lambda s: st.tuples(
    st.just(s), st.lists(st.integers(-5, 5), min_size=s, max_size=s),
    st.lists(st.integers(-5, 5), min_size=s, max_size=s))))
def test_homology_round_trip(data):
    s, eps, phi = data
    h = HomologyClass(tuple(eps), tuple(phi))
    assert HomologyClass(*coords_from_pairings(h, s)) == h


@settings(max_examples=25, deadline=None)
@given(st.floats(-1, 1), st.floats(0.3, 3), words)
def test_kvol_gamma_invariant(x, y, w):
    z = act_on_point(GroupElement.from_word(w), (x, y))
    assume(z.y > 0.05)
    assert abs(kv.kvol_at(2, (x, y)).value - kv.kvol_at(2, (float(z.x), float(z.y))).value) <= 1e-8

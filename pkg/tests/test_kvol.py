import math
import random
from fractions import Fraction

import pytest

from staircase import kvol as kv
from staircase.hyper import MIN_K, Geodesic, geodesic_K
from staircase.saddle import intersection_ratio
from staircase.slopes import INF
from staircase.veech import is_end_of_Z, is_end_of_Z_group

K_PT = (9 / 14, math.sqrt(143) / 14)


def test_config_validation():
    with pytest.raises(ValueError):
        kv.CandidateConfig(base_endpoint_bound=0)
    with pytest.raises(ValueError):
        kv.CandidateConfig(tolerance=0)


def test_kvol_at_i():
    for s in (2, 3):
        r = kv.kvol_at(s, (0, 1))
        assert r.value == 2 * s - 1
        ends = {w.endpoints for w in r.witnesses}
        assert (-1, 1) in ends and (0, INF) in ends


def test_kvol_at_k():
    r = kv.kvol_at(2, K_PT)
    assert r.value == pytest.approx(3 * MIN_K, abs=1e-12)
    ends = {w.endpoints for w in r.witnesses}
    assert ends == {(-2, 1), (-1, 1), (0, 2)}


def test_sup_on_vertical():
    k, wits, diag = kv.sup_K_over_Z((0, 5))
    assert k == 1.0
    assert any(w.endpoints == (0, INF) for w in wits)
    assert diag["stability_rounds"] >= 2


def test_witnesses_sorted_and_in_end():
    rng = random.Random(4)
    for _ in range(40):
        x = rng.uniform(-1, 1)
        y = rng.uniform(math.sqrt(max(0, 1 - x * x)) + 0.01, 4)
        r = kv.kvol_at(2, (x, y))
        keys = [w.endpoints for w in r.witnesses]
        assert keys == sorted(keys)
        for w in r.witnesses:
            a, b = w.endpoints
            assert is_end_of_Z_group(a, b)
            # directions are the negated endpoints; End(Z) is symmetric under negation
            na, nb = (INF if t == INF else -t for t in (a, b))
            assert intersection_ratio(2, na, nb).value == 1
            assert is_end_of_Z(2, na, nb)


def test_search_dominates_brute_force():
    # the cusp search sees every End(Z) pair of small height, and no non-End pair wins
    rng = random.Random(8)
    for _ in range(15):
        x = rng.uniform(-1, 1)
        y = rng.uniform(math.sqrt(max(0, 1 - x * x)) + 0.01, 2.5)
        k, _, _ = kv.sup_K_over_Z((x, y))
        assert kv.brute_force_sup(2, (x, y), 5, end_only=True) <= k + 1e-12
        assert kv.brute_force_sup(2, (x, y), 5, end_only=False) < MIN_K
    assert kv.brute_force_sup(2, K_PT, 5, end_only=True) == pytest.approx(MIN_K, abs=1e-12)


def test_instability_reported():
    cfg = kv.CandidateConfig(word_depth=1)
    with pytest.raises(kv.SearchInstability) as exc:
        kv.sup_K_over_Z((0.3, 1.2), cfg)
    assert exc.value.diagnostics["rounds"] == 1


def test_reduction_and_mirror_invariance():
    rng = random.Random(9)
    for _ in range(30):
        x, y = rng.uniform(-1, 1), rng.uniform(0.3, 3)
        base = kv.kvol_at(2, (x, y)).value
        assert kv.kvol_at(2, (-x, y)).value == pytest.approx(base, abs=1e-10)
        assert kv.kvol_at(2, (x + 4, y)).value == pytest.approx(base, abs=1e-10)
        zz = complex(x, y)
        w = -1 / zz
        assert kv.kvol_at(2, (w.real, w.imag)).value == pytest.approx(base, abs=1e-10)


def test_bounds_outside_V():
    rng = random.Random(10)
    n = 0
    while n < 100:
        x, y = rng.uniform(-1, 1), rng.uniform(0.05, 4)
        if x * x + y * y < 1 or kv.classify_region((x, y)) == "InsideV":
            continue
        n += 1
        v = kv.kvol_at(2, (x, y)).value
        assert 3 * MIN_K - 1e-10 <= v <= 3 + 1e-10


def test_scaling_in_s():
    for z in [(0.2, 1.3), (0.7, 0.8), (0.95, 0.3)]:
        b2 = kv.kvol_at(2, z).bracket
        for s in (3, 5):
            assert kv.kvol_at(s, z).bracket == pytest.approx(b2, abs=1e-12)


@pytest.mark.parametrize("z, want", [
    ((1, 0.25), "InsideV"), ((-1, 0.25), "InsideV"), ((0, 1), "Outside"), ((0.99, 0.45), "InsideV"),
])
def test_classify_region(z, want):
    assert kv.classify_region(z) == want


def test_inside_V_exceeds():
    assert kv.kvol_at(2, (0.9, 0.46)).value > 3


def test_cusp_limit_increasing():
    vals = [kv.kvol_at(2, (0.99, t)).value for t in (0.4, 0.3, 0.2, 0.1)]
    assert all(a < b for a, b in zip(vals, vals[1:]))


def test_scan_coarse():
    rows = kv.scan(2, (-1, 1), (1, 2), 1.0, ystep=0.5)
    assert len(rows) == 9
    assert [(r.x, r.y) for r in rows][:3] == [(-1.0, 1.0), (0.0, 1.0), (1.0, 1.0)]
    for r in rows:
        assert 3 * MIN_K - 1e-12 <= r.kvol <= 3 + 1e-12
    assert kv.CSV_HEADER == "x,y,kvol,witness_kind,r,rp,K"


def test_scan_high_rows():
    for r in kv.scan(2, (-1, 1), (10, 10), 0.5):
        assert abs(r.kvol - 3) < 0.2


def test_scan_empty_and_bad_step():
    assert kv.scan(2, (0.5, 0.2), (1, 2), 0.1) == []
    with pytest.raises(ValueError):
        kv.scan(2, (0, 1), (1, 2), 0)


def test_scan_parallel_matches_serial():
    a = kv.scan(2, (-1, 1), (1, 1.5), 0.25)
    b = kv.scan(2, (-1, 1), (1, 1.5), 0.25, workers=2)
    assert [r.csv_fields() for r in a] == [r.csv_fields() for r in b]


def test_scan_row_error_column():
    row = kv._row((2, 0.3, 1.2, kv.CandidateConfig(word_depth=1)))
    assert row.kvol is None and row.csv_fields()[3].startswith("error:")


def test_find_minimum_s3():
    pt, val = kv.find_minimum(3)
    assert val == pytest.approx(5 * MIN_K, abs=1e-9)
    assert float(pt.x) == pytest.approx(K_PT[0], abs=1e-6)


def test_covering_k_not_covered():
    fam = kv.covering_family(12)
    assert max(geodesic_K(g, K_PT) for g in fam) == pytest.approx(MIN_K, abs=1e-12)
    assert max(geodesic_K(g, K_PT) for g in fam) <= MIN_K + 1e-12


def test_covering_high_on_half_line():
    g = Geodesic(Fraction(1, 2), INF)
    assert geodesic_K(g, (0.5, 50.0)) > MIN_K


def test_covering_finite_family_gap_near_x1():
    # (1, y) lies in V_{-n,1} iff y < (n+1)/sqrt(143)
    rep = kv.verify_covering(0.01, 12)
    assert rep.uncovered and rep.lowest_uncovered > 13 / math.sqrt(143) - 0.02
    assert all(x > 0.7 for x, _ in rep.uncovered)
    assert kv.verify_covering(0.01, 12, y_max=1.08).ok


def test_general_cover_bound():
    rep = kv.general_cover_bound(2, step=0.25, y_max=2.5)
    assert rep.ok, rep.violations
    assert max(rep.z_errors) < 1e-9


def test_near_integer_real_part():
    # a subnormal offset from a cusp used to produce endpoints with huge denominators
    r = kv.kvol_at(2, (7.3e-259, 1.0))
    assert r.value == pytest.approx(3, abs=1e-12)
    assert all(abs(w.geodesic.a) < 10**10 for w in r.witnesses)

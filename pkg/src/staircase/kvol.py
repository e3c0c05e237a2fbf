"""KVol on the Teichmueller disk of St(2s-1).

For z in the fundamental domain,

    KVol(X_s(z)) = (2s-1) * max(J_1(z), J_-1(z), sup K(gamma, z))

with the sup over geodesics gamma whose endpoints are in End(Z) and
K(gamma, z) = sech d(z, gamma).  Pairs outside End(Z) carry I <= 9/10, which is
below the smallest value the End(Z) sup takes on the domain, so they never win.

The sup is computed cusp by cusp.  Every geodesic of Z has a cusp endpoint
zeta.  Moving zeta to inf (even orbit, via slope_to_cusp) the Z-geodesics
through it become the vertical lines at Z u {2k +- 1/j}; for the odd orbit,
after z -> 1/(1 - z), the vertical lines at Z u {k +- 1/j}.  In that chart
the closest one is found in O(1) and its distance is |u - v| / h.  Cusps are
enumerated by increasing denominator until the sup is stable.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import lru_cache

import numpy as np

from staircase.hyper import (
    MIN_K,
    DiskPoint,
    Geodesic,
    J,
    _pt,
    geodesic_K,
    sinh_distance,
)
from staircase.slopes import INF, fmt_slope
from staircase.veech import (
    SlopeClass,
    in_fundamental_domain,
    reduce_to_fundamental_domain,
    slope_class,
    slope_to_cusp,
)

log = logging.getLogger(__name__)

_ODD_CHART = (0, 1, -1, 1)  # z -> 1 / (1 - z), sends 1 to inf


class SearchInstability(RuntimeError):
    def __init__(self, msg, diagnostics=None):
        super().__init__(msg)
        self.diagnostics = diagnostics


@dataclass(frozen=True)
class CandidateConfig:
    """Search parameters.

    base_endpoint_bound: cusp denominators start at this bound and double
    each round.  word_depth: maximal number of doubling rounds.
    stability_rounds: consecutive rounds with an unchanged sup needed to stop.
    tolerance: what "unchanged" means, on sech d.
    """

    base_endpoint_bound: int = 8
    word_depth: int = 12
    stability_rounds: int = 2
    tolerance: float = 1e-10

    def __post_init__(self):
        if min(self.base_endpoint_bound, self.word_depth, self.stability_rounds) < 1 or not self.tolerance > 0:
            raise ValueError(f"all candidate parameters must be positive: {self}")


@dataclass
class Witness:
    geodesic: Geodesic
    K: float

    @property
    def endpoints(self):
        return self.geodesic.a, self.geodesic.b


@dataclass
class KVolResult:
    value: float
    s: int
    point: DiskPoint
    reduced: DiskPoint
    j_terms: tuple[float, float]
    best_K: float
    witnesses: list[Witness]
    witness_kind: str  # "J-term" or "geodesic-pair"
    diagnostics: dict = field(default_factory=dict)

    @property
    def bracket(self) -> float:
        return self.value / (2 * self.s - 1)

    @property
    def best_geodesic(self):
        if not self.witnesses:
            return None
        w = self.witnesses[0]
        return (w.geodesic.a, w.geodesic.b, w.K)


# ---------------------------------------------------------------- cusp tables


@dataclass(frozen=True)
class _CuspTable:
    slopes: tuple  # exact cusps
    mats: np.ndarray  # (n, 4) floats, chart sending the cusp to inf
    period: np.ndarray  # 2 for the even orbit, 1 for the odd one
    values: np.ndarray  # float position of the cusp (inf allowed)


def _chart(zeta) -> tuple[tuple[int, int, int, int], int]:
    V = slope_to_cusp(zeta)
    if slope_class(zeta) == SlopeClass.EVEN:
        return V.m, 2
    a, b, c, d = _ODD_CHART
    e, f, g, h = V.m
    return (a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h), 1


@lru_cache(maxsize=32)
def _cusp_table(max_den: int, width: int) -> _CuspTable:
    slopes = [INF]
    for q in range(1, max_den + 1):
        for p in range(-width * q, width * q + 1):
            if math.gcd(p, q) == 1:
                slopes.append(Fraction(p, q))
    mats, per = [], []
    for z in slopes:
        m, P = _chart(z)
        mats.append(m)
        per.append(P)
    vals = np.array([math.inf if z == INF else float(z) for z in slopes])
    return _CuspTable(tuple(slopes), np.array(mats, dtype=float), np.array(per), vals)


def _family_offset(u: np.ndarray, period: np.ndarray) -> np.ndarray:
    """Distance from u to Z u {period*k +- 1/j}, vectorised."""
    best = np.abs(u - np.round(u))
    # period 2: nearest even integer e, remainder in [-1, 1]
    e = 2.0 * np.round(u / 2.0)
    v2 = np.abs(u - e)
    # period 1: remainder from the floor, and its complement
    v1a = u - np.floor(u)
    v1b = 1.0 - v1a
    for v in (np.where(period == 2, v2, v1a), np.where(period == 2, v2, v1b)):
        with np.errstate(divide="ignore", invalid="ignore"):
            j = np.floor(1.0 / np.maximum(v, 1e-300))
        for jj in (j, j + 1):
            cand = np.abs(v - 1.0 / np.maximum(jj, 1.0))
            best = np.minimum(best, cand)
    return best


_MAX_J = 10**9


def _family_members(u: float, period: int, slack: float) -> list[Fraction]:
    """Exact members of Z u {period*k +- 1/j} within the best offset + slack of u."""
    cands = {Fraction(math.floor(u)), Fraction(math.ceil(u))}
    if period == 2:
        bases = {2 * math.floor(u / 2), 2 * math.floor(u / 2) + 2}
    else:
        bases = {math.floor(u), math.floor(u) + 1}
    for b in bases:
        v = u - b
        if v == 0:
            cands.add(Fraction(b))
            continue
        if abs(v) < 1 / _MAX_J:
            # b +- 1/j is then indistinguishable from b in binary64
            continue
        j0 = math.floor(1 / abs(v))
        for j in (j0, j0 + 1):
            if j >= 1:
                cands.add(Fraction(b) + Fraction(1 if v > 0 else -1, j))
    dists = sorted((abs(u - float(c)), c) for c in cands)
    top = dists[0][0]
    return [c for d, c in dists if d <= top + slack]


def _mobius_inv(a, b, c, d, w):
    # inverse matrix (d, -b, -c, a)
    if w == INF:
        return INF if c == 0 else Fraction(d, -c)
    den = -c * w + a
    if den == 0:
        return INF
    return (d * w - b) / den


def _sup_K_round(z: complex, table: _CuspTable, window: float):
    m = table.mats
    mask = np.abs(table.values - z.real) <= window
    mask |= np.isinf(table.values)
    idx = np.nonzero(mask)[0]
    a, b, c, d = m[idx, 0], m[idx, 1], m[idx, 2], m[idx, 3]
    w = (a * z + b) / (c * z + d)
    h = w.imag
    u = w.real
    off = _family_offset(u, table.period[idx])
    t = off / h
    K = 1.0 / np.sqrt(1.0 + t * t)
    return idx, K, u


def sup_K_over_Z(z, cfg: CandidateConfig | None = None):
    """(K*, witnesses, diagnostics) for z in the fundamental domain.

    K* is the sup of sech d(z, gamma) over the Z-geodesics; witnesses are all
    geodesics within the tolerance of K*, sorted by endpoints.
    """
    cfg = cfg or CandidateConfig()
    zp = _pt(z)
    zc = complex(float(zp.x), float(zp.y))
    window = 1.1 * zc.imag + 1.5
    width = max(2, 2 ** math.ceil(math.log2(abs(zc.real) + window + 1)))
    history = []
    stable = 0
    best = -1.0
    den = cfg.base_endpoint_bound
    examined = 0
    for rnd in range(cfg.word_depth):
        table = _cusp_table(den, width)
        idx, K, u = _sup_K_round(zc, table, window)
        examined = len(idx)
        kmax = float(K.max())
        history.append((den, kmax))
        if rnd and abs(kmax - best) <= cfg.tolerance:
            stable += 1
        else:
            stable = 0
        best = max(best, kmax)
        if stable >= cfg.stability_rounds:
            break
        den *= 2
    diagnostics = {
        "candidates_examined": examined,
        "max_denominator": den,
        "window": window,
        "rounds": len(history),
        "stability_rounds": stable,
        "history": history,
    }
    if stable < cfg.stability_rounds:
        raise SearchInstability(f"sup over Z not stable at {zp}: {history}", diagnostics)
    # witnesses from the last table
    slack = max(cfg.tolerance, 1e-12)
    order = np.nonzero(K >= kmax - slack)[0]
    found = {}
    for o in order:
        i = idx[o]
        zeta = table.slopes[i]
        mat = tuple(int(v) for v in table.mats[i])
        h = ((mat[0] * zc + mat[1]) / (mat[2] * zc + mat[3])).imag
        for v in _family_members(float(u[o]), int(table.period[i]), slack * h):
            other = _mobius_inv(*mat, v)
            if other == zeta:
                continue
            g = Geodesic(zeta, other)
            k = geodesic_K(g, zp)
            if k >= kmax - slack:
                found[(g.a, g.b)] = Witness(g, k)
    wits = sorted(found.values(), key=lambda w: (w.geodesic.a, w.geodesic.b))
    if not wits:
        raise SearchInstability(f"no witness reconstructed at {zp}", diagnostics)
    return max(w.K for w in wits), wits, diagnostics


# ---------------------------------------------------------------------- KVol


def kvol_at(s: int, z, cfg: CandidateConfig | None = None) -> KVolResult:
    if s < 2:
        raise ValueError("s must be >= 2")
    z0 = _pt(z)
    zr, _ = reduce_to_fundamental_domain(z0)
    zf = zr.as_float()
    j1, jm1 = float(J(1, zf)), float(J(-1, zf))
    kstar, wits, diag = sup_K_over_Z(zf, cfg)
    jmax = max(j1, jm1)
    br = max(jmax, kstar)
    kind = "J-term" if jmax >= kstar else "geodesic-pair"
    return KVolResult(
        value=(2 * s - 1) * br,
        s=s,
        point=z0,
        reduced=zr,
        j_terms=(j1, jm1),
        best_K=kstar,
        witnesses=wits,
        witness_kind=kind,
        diagnostics=diag,
    )


def kvol_value(s: int, z, cfg: CandidateConfig | None = None) -> float:
    return kvol_at(s, z, cfg).value


def brute_force_sup(s: int, z, bound: int = 6, end_only: bool | None = None) -> float:
    """max I(r, r') K(r, r', z) over slopes of height <= bound, straight from the formula.

    ``end_only=True`` keeps End(Z) pairs, ``False`` keeps the others, None all.
    Slow; meant for debugging and tests.
    """
    from staircase.hyper import K
    from staircase.saddle import intersection_ratio
    from staircase.slopes import farey_slopes

    slopes = farey_slopes(bound)
    best = 0.0
    for i, r in enumerate(slopes):
        for rp in slopes[i + 1:]:
            v = intersection_ratio(s, r, rp).value
            if end_only is not None and (v == 1) != end_only:
                continue
            best = max(best, float(v) * K(r, rp, z))
    return best


def classify_region(z) -> str:
    """'InsideV' when z is in the open horodisk neighbourhood V_{+-1} of the lower cusp."""
    z = _pt(z)
    for c in (1, -1):
        if (z.x + c) ** 2 + (z.y - Fraction(1, 2)) ** 2 < Fraction(1, 4):
            return "InsideV"
    return "Outside"


# ---------------------------------------------------------------------- scans


@dataclass
class ScanRow:
    x: float
    y: float
    kvol: float | None
    witness_kind: str
    r: str
    rp: str
    K: float | None
    error: str | None = None

    def csv_fields(self) -> list[str]:
        num = lambda v: "" if v is None else f"{v:.12g}"  # noqa: E731
        kind = self.witness_kind if self.error is None else f"error: {self.error}"
        return [num(self.x), num(self.y), num(self.kvol), kind, self.r, self.rp, num(self.K)]


CSV_HEADER = "x,y,kvol,witness_kind,r,rp,K"


def _row(args) -> ScanRow:
    s, x, y, cfg = args
    try:
        res = kvol_at(s, (x, y), cfg)
    except (SearchInstability, ValueError) as exc:
        return ScanRow(x, y, None, "", "", "", None, str(exc).splitlines()[0])
    if res.witness_kind == "J-term":
        j1, jm1 = res.j_terms
        r = "1" if j1 >= jm1 else "-1"
        return ScanRow(x, y, res.value, "J-term", r, "", max(j1, jm1))
    w = res.witnesses[0]
    return ScanRow(x, y, res.value, "geodesic-pair", fmt_slope(w.geodesic.a), fmt_slope(w.geodesic.b), w.K)


def _grid(lo: float, hi: float, step: float) -> list[float]:
    if step <= 0:
        raise ValueError("step must be positive")
    if hi < lo:
        return []
    n = int(math.floor((hi - lo) / step + 1e-9))
    return [round(lo + i * step, 12) for i in range(n + 1)]


def scan(s: int, x_range, y_range, step: float, cfg: CandidateConfig | None = None,
         workers: int = 1, domain_only: bool = True, ystep: float | None = None) -> list[ScanRow]:
    """Row-major grid (y outer, x inner) of KVol values over the given box.

    With ``domain_only`` grid points outside the closed fundamental domain are
    skipped.
    """
    xs = _grid(*x_range, step)
    ys = _grid(*y_range, step if ystep is None else ystep)
    jobs = [(s, x, y, cfg) for y in ys for x in xs if y > 0 and (not domain_only or in_fundamental_domain((x, y), 1e-12))]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(workers) as ex:
            return list(ex.map(_row, jobs, chunksize=16))
    return [_row(j) for j in jobs]


# ------------------------------------------------------------------- minimum


def _bracket(x: float, y: float, cfg) -> float:
    if y <= 0:
        return math.inf
    z = DiskPoint(x, y)
    k, _, _ = sup_K_over_Z(reduce_to_fundamental_domain(z)[0], cfg)
    zr = reduce_to_fundamental_domain(z)[0]
    return max(k, float(J(1, zr)), float(J(-1, zr)))


def find_minimum(s: int, cfg: CandidateConfig | None = None, step: float = 0.02):
    """Minimizer of KVol over the domain (x >= 0 copy) and the value there.

    Coarse grid, Nelder-Mead refinement, then an exact polish: the three
    geodesics active at the refined point are intersected through their
    incenter, which is kept if it is no worse.
    """
    from scipy.optimize import minimize

    from staircase.hyper import incenter

    cfg = cfg or CandidateConfig()
    best = (math.inf, None)
    for x in _grid(0.0, 1.0, step):
        y0 = math.sqrt(max(0.0, 1 - x * x))
        for y in _grid(max(step, y0), 2.0, step):
            if classify_region((x, y)) == "InsideV":
                continue
            v = _bracket(x, y, cfg)
            if v < best[0]:
                best = (v, (x, y))
    x0 = np.array(best[1])
    res = minimize(lambda p: _bracket(p[0], p[1], cfg), x0, method="Nelder-Mead",
                   options={"xatol": 1e-10, "fatol": 1e-13, "maxiter": 4000, "initial_simplex": [x0, x0 + [step, 0], x0 + [0, step]]})
    if not res.success:
        raise SearchInstability(f"Nelder-Mead did not converge: {res.message}")
    pt = DiskPoint(float(res.x[0]), float(res.x[1]))
    val = float(res.fun)
    # polish with the incenter of the active geodesics
    _, wits, _ = sup_K_over_Z(pt, replace(cfg, tolerance=1e-4))
    wits = sorted(wits, key=lambda w: -w.K)
    if len(wits) >= 3:
        try:
            zc = incenter(*(w.geodesic for w in wits[:3]))
            v2 = _bracket(float(zc.x), float(zc.y), cfg)
            if v2 <= val + 1e-12:
                pt, val = zc, v2
        except ValueError:
            pass
    return pt, (2 * s - 1) * val


# ------------------------------------------------------------ covering check


@dataclass
class CoveringReport:
    samples: int
    uncovered: list[tuple[float, float]]
    min_margin: float
    excluded_radius: float
    n_max: int
    y_max: float

    @property
    def ok(self) -> bool:
        return not self.uncovered

    @property
    def lowest_uncovered(self) -> float | None:
        return min((y for _, y in self.uncovered), default=None)


def covering_family(n_max: int) -> list[Geodesic]:
    return [Geodesic(0, 2), Geodesic(Fraction(1, 2), INF)] + [Geodesic(-n, 1) for n in range(1, n_max + 1)]


K_POINT = (9 / 14, math.sqrt(143) / 14)


def _sinh_dist_array(g: Geodesic, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    if g.is_vertical:
        return np.abs(x - float(g.a)) / y
    c, rho = float(g.center), float(g.radius)
    return np.abs((x - c) ** 2 + y * y - rho * rho) / (2 * rho * y)


def verify_covering(grid_step: float = 0.01, n_max: int = 12, y_max: float = 8.0) -> CoveringReport:
    """Check that V_{0,2}, V_{1/2,inf} and V_{-n,1} (n <= n_max) cover the region A.

    A lies between x = 1/2, x = 1 and above the unit half-circle, cut at
    y_max; samples within ``grid_step`` of k are left out.  Above
    y = sqrt(143)/2 the strip lies inside V_{1/2,inf}, so y_max = 8 loses
    nothing.  On x = 1 the point (1, y) is in V_{-n,1} iff y < (n+1)/sqrt(143),
    so a finite n_max leaves uncovered samples near x = 1 between those
    heights; they are reported, not hidden.
    """
    if grid_step <= 0 or y_max <= 0:
        raise ValueError("grid_step and y_max must be positive")
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    xs = np.arange(0.5, 1.0 + 1e-12, grid_step)
    ys = np.arange(grid_step, y_max + 1e-12, grid_step)
    X, Y = np.meshgrid(xs, ys)
    keep = (X * X + Y * Y >= 1) & (np.hypot(X - K_POINT[0], Y - K_POINT[1]) >= grid_step)
    x, y = X[keep], Y[keep]
    # K > K0 iff sinh d < 1/sqrt(143)
    t = np.full(x.shape, np.inf)
    for g in covering_family(n_max):
        t = np.minimum(t, _sinh_dist_array(g, x, y))
    margin = 1.0 / np.sqrt(1.0 + t * t) - MIN_K
    bad = margin <= 0
    unc = [(float(a), float(b)) for a, b in zip(x[bad], y[bad])]
    return CoveringReport(int(x.size), unc, float(margin.min()), grid_step, n_max, y_max)


# ------------------------------------------------------ KVol <= 2s-1 outside V

Z_POINTS = [
    ((0.0, 1.0), Geodesic(-1, 1)),
    ((0.0, 2.0), Geodesic.vertical(0)),
    ((0.5, math.sqrt(3) / 2), Geodesic(-1, 1)),
    ((0.5, 3.0), Geodesic.vertical(Fraction(1, 2))),
    ((1 / 3, 2.0), Geodesic.vertical(Fraction(1, 3))),
    ((0.6, 0.8), Geodesic(-1, 1)),
    ((1.0, math.sqrt(2)), Geodesic(-1, 2)),
    ((0.5, math.sqrt(1.25)), Geodesic(-2, 1)),
    ((0.25, 2.0), Geodesic.vertical(Fraction(1, 4))),
    ((-1 / 3, 1.5), Geodesic.vertical(Fraction(-1, 3))),
]


@dataclass
class BoundReport:
    s: int
    grid_points: int
    max_excess: float
    z_errors: list[float]
    violations: list[str]

    @property
    def ok(self) -> bool:
        return not self.violations


def general_cover_bound(s: int, step: float = 0.1, y_max: float = 3.0, tol: float = 1e-9,
                        cfg: CandidateConfig | None = None) -> BoundReport:
    """KVol <= 2s-1 on the domain outside V_{+-1}, and = 2s-1 on listed points of Z."""
    n = 2 * s - 1
    viol = []
    max_excess = -math.inf
    count = 0
    for row in scan(s, (-1.0, 1.0), (step, y_max), step, cfg):
        if classify_region((row.x, row.y)) == "InsideV":
            continue
        count += 1
        if row.kvol is None:
            viol.append(f"({row.x}, {row.y}): {row.error}")
            continue
        max_excess = max(max_excess, row.kvol - n)
        if row.kvol > n + tol:
            viol.append(f"({row.x}, {row.y}): KVol {row.kvol} > {n}")
    errs = []
    for (x, y), g in Z_POINTS:
        if float(sinh_distance((x, y), g)) > 1e-12:
            viol.append(f"({x}, {y}) is not on {g}")
        e = abs(kvol_at(s, (x, y), cfg).value - n)
        errs.append(e)
        if e > tol:
            viol.append(f"({x}, {y}): |KVol - {n}| = {e}")
    return BoundReport(s, count, max_excess, errs, viol)

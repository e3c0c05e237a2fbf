"""Acceptance checks, shared by ``staircase verify`` and the test-suite.

Each check returns a CheckResult with the claim, what was computed, the
tolerance and the wall time.  Reference values are closed forms or
independent oracles (the group-theoretic End(Z) test, the geometric distance
formula), never the code path under test.
"""

from __future__ import annotations

import contextlib
import math
import random
import time
from dataclasses import dataclass
from fractions import Fraction

from staircase import kvol as kv
from staircase import saddle
from staircase.hyper import (
    Geodesic,
    K,
    K_via_distance,
    geodesic_K,
    incenter,
    sinh_distance,
)
from staircase.origami import (
    HomologyClass,
    IntersectionForm,
    build_staircase,
    coords_from_pairings,
    cycles,
    named_class,
)
from staircase.slopes import INF, det, farey_slopes, fmt_slope, slope_of
from staircase.veech import (
    GroupElement,
    act_on_point,
    act_on_slope,
    is_end_of_Z,
    is_end_of_Z_group,
)

SQRT_RATIO = math.sqrt(143 / 144)
K_X, K_Y = 9 / 14, math.sqrt(143) / 14


@dataclass
class CheckResult:
    number: str
    name: str
    claim: str
    computed: str
    tolerance: str
    passed: bool
    seconds: float = 0.0

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        return f"[{tag}] {self.number} {self.name}: claim {self.claim}; computed {self.computed}; tol {self.tolerance} ({self.seconds:.1f}s)"


def _timed(fn):
    def run(*args, **kwargs):
        t = time.perf_counter()
        res = fn(*args, **kwargs)
        res.seconds = time.perf_counter() - t
        return res

    run.__name__ = fn.__name__
    run.__doc__ = fn.__doc__
    return run


@_timed
def check_exact_values(s_values=(2, 3, 4, 5)) -> CheckResult:
    errs, ok = [], True
    for s in s_values:
        r = kv.kvol_at(s, (0, 1))
        e = abs(r.value - (2 * s - 1))
        errs.append(e)
        g = r.witnesses[0].geodesic
        ok &= e <= 1e-10 and r.best_K == 1.0 and sinh_distance((0, 1), g) == 0
        ok &= is_end_of_Z_group(g.a, g.b)
    return CheckResult("1", "KVol(St(2s-1)) = 2s-1", f"2s-1 for s in {list(s_values)}",
                       f"max error {max(errs):.1e}", "1e-10", ok)


@_timed
def check_minimum(s: int = 2) -> CheckResult:
    pt, val = kv.find_minimum(s)
    target = (2 * s - 1) * SQRT_RATIO
    dv = abs(val - target)
    dz = math.hypot(float(pt.x) - K_X, float(pt.y) - K_Y)
    mirror = kv.kvol_at(s, (-K_X, K_Y)).value
    dm = abs(mirror - target)
    ok = dv <= 1e-6 and dz <= 1e-4 and dm <= 1e-6
    return CheckResult("2", "minimum at (+-9/14, sqrt(143)/14)", f"{target:.9f} at ({K_X:.6f}, {K_Y:.6f})",
                       f"{val:.9f} at ({float(pt.x):.6f}, {float(pt.y):.6f}), mirror {mirror:.9f}",
                       "1e-6 value, 1e-4 point", ok)


@_timed
def check_incenter() -> CheckResult:
    gs = (Geodesic(-1, 1), Geodesic(-2, 1), Geodesic(0, 2))
    z = incenter(*gs)
    dz = math.hypot(float(z.x) - K_X, float(z.y) - K_Y)
    ds = [math.asinh(float(sinh_distance(z, g))) for g in gs]
    spread = max(ds) - min(ds)
    return CheckResult("3", "incenter of the triangle", "(9/14, sqrt(143)/14)",
                       f"({z.x}, {float(z.y):.12f}), distance spread {spread:.1e}",
                       "1e-9 point, 1e-12 distances", dz <= 1e-9 and spread <= 1e-12)


@_timed
def check_gap_law(s_values=(2, 3), bound: int = 12) -> CheckResult:
    slopes = farey_slopes(bound)
    bad, n, mx = [], 0, Fraction(0)
    for s in s_values:
        for i, a in enumerate(slopes):
            for b in slopes[i + 1:]:
                v = saddle.intersection_ratio(s, a, b).value
                n += 1
                if is_end_of_Z_group(a, b):
                    if v != 1:
                        bad.append((s, a, b, v))
                else:
                    mx = max(mx, v)
                    if v > Fraction(9, 10):
                        bad.append((s, a, b, v))
    return CheckResult("4", "gap law", "I = 1 on End(Z), I <= 9/10 elsewhere",
                       f"{n} pairs, {len(bad)} exceptions, max off End(Z) {mx}", "exact", not bad)


def remark_values(s: int = 2, max_den: int = 30) -> dict:
    """I(r, inf) for r off End(Z), |r| <= 2, denominator <= max_den."""
    out = {}
    for q in range(1, max_den + 1):
        for p in range(-2 * q, 2 * q + 1):
            if math.gcd(p, q) != 1:
                continue
            r = Fraction(p, q)
            if not is_end_of_Z_group(r, INF):
                out[r] = saddle.intersection_ratio(s, r, INF).value
    return out


def _three_sevenths_orbit(r: Fraction) -> bool:
    # symmetries fixing inf: r -> r + 2k and r -> -r
    return (r - Fraction(3, 7)) % 2 == 0 or (r + Fraction(3, 7)) % 2 == 0


@_timed
def check_remark_max(s: int = 2, max_den: int = 30) -> CheckResult:
    vals = remark_values(s, max_den)
    top = max(vals.values())
    at = sorted(r for r, v in vals.items() if v == top)
    ok = top == Fraction(5, 7) and all(_three_sevenths_orbit(r) for r in at)
    return CheckResult("5a", f"remark: max off End(Z), s={s}", "5/7, only at 3/7 up to symmetry",
                       f"{top} at {', '.join(fmt_slope(r) for r in at)}", "exact", ok)


@_timed
def check_remark_bound(s: int = 2, max_den: int = 30) -> CheckResult:
    vals = remark_values(s, max_den)
    over = sorted((r for r, v in vals.items() if v > Fraction(2, 3) and not _three_sevenths_orbit(r)),
                  key=lambda r: (r.denominator, r))
    shown = ", ".join(f"I({fmt_slope(r)}) = {vals[r]}" for r in over[:4])
    return CheckResult("5b", f"remark: all others <= 2/3, s={s}", "<= 2/3",
                       f"{len(over)} above 2/3" + (f", e.g. {shown}" if over else ""), "exact", not over)


def _dichotomy_grid(n: int = 50, y_max: float = 3.0):
    for j in range(n):
        y = y_max * (j + 1) / n
        for i in range(n):
            x = -1 + 2 * i / (n - 1)
            if x * x + y * y >= 1:
                yield x, y


def _v_power(x: float, y: float) -> float:
    return min((x + c) ** 2 + (y - 0.5) ** 2 - 0.25 for c in (1, -1))


@_timed
def check_dichotomy(s: int = 2, n: int = 50) -> CheckResult:
    N = 2 * s - 1
    bad, count, skipped = [], 0, 0
    for x, y in _dichotomy_grid(n):
        pw = _v_power(x, y)
        if abs(pw) < 1e-9:
            skipped += 1
            continue
        count += 1
        v = kv.kvol_at(s, (x, y)).value
        if pw < 0 and not v > N:
            bad.append((x, y, v))
        if pw > 0 and v > N + 1e-9:
            bad.append((x, y, v))
    zerr = []
    for (x, y), g in kv.Z_POINTS:
        if float(sinh_distance((x, y), g)) > 1e-12:
            bad.append((x, y, "not on " + str(g)))
            continue
        zerr.append(abs(kv.kvol_at(s, (x, y)).value - N))
    if max(zerr) > 1e-9:
        bad.append(("Z points", max(zerr)))
    return CheckResult("6", "region dichotomy", f"KVol > {N} iff inside V, = {N} on Z",
                       f"{count} grid points ({skipped} on the boundary skipped), {len(bad)} violations, "
                       f"max |KVol - {N}| on Z {max(zerr):.1e}", "1e-9", not bad)


@_timed
def check_limits(s: int = 2) -> CheckResult:
    N = 2 * s - 1
    down = [kv.kvol_at(s, (0.98, t)).value for t in (0.4, 0.3, 0.2, 0.15, 0.12)]
    up = [abs(kv.kvol_at(s, (0.3, t)).value - N) for t in (5, 10, 20)]
    ok = all(a < b for a, b in zip(down, down[1:]))
    ok &= all(a > b for a, b in zip(up, up[1:])) and all(e < c for e, c in zip(up, (0.35, 0.18, 0.09)))
    return CheckResult("7", "limits", "increasing near the cusp at 1, -> 2s-1 as y grows",
                       f"x=0.98: {', '.join(f'{v:.4f}' for v in down)}; x=0.3: {', '.join(f'{v:.2e}' for v in up)}",
                       "monotone; 0.35, 0.18, 0.09", ok)


@_timed
def check_covering(grid_step: float = 0.01, n_max: int = 12, number: str = "8") -> CheckResult:
    rep = kv.verify_covering(grid_step, n_max)
    extra = f", lowest uncovered y {rep.lowest_uncovered:.2f}" if rep.uncovered else ""
    return CheckResult(number, f"covering with n <= {n_max}", "no uncovered sample in A minus the k-disk",
                       f"{rep.samples} samples, {len(rep.uncovered)} uncovered{extra}, min margin {rep.min_margin:.2e}",
                       f"grid {grid_step}", rep.ok)


def _rand_slope(rng: random.Random, h: int = 9):
    while True:
        p, q = rng.randint(-h, h), rng.randint(0, h)
        if (p, q) != (0, 0) and math.gcd(p, q) == 1:
            return slope_of(p, q)


def _rand_gamma(rng: random.Random, length: int = 6) -> GroupElement:
    return GroupElement.from_word("".join(rng.choice("TtR") for _ in range(length)))


def _conj(g: GroupElement) -> GroupElement:
    a, b, c, d = g.m
    return GroupElement((a, -b, -c, d))


@_timed
def check_identities(seed: int = 0, n_k: int = 10_000, n_inv: int = 500, n_sum: int = 200,
                     s_values=(2, 3, 4), max_s: int = 8) -> CheckResult:
    rng = random.Random(seed)
    notes, ok = [], True
    # K in slope form against sech of the geometric distance
    err = 0.0
    for _ in range(n_k):
        r, rp = _rand_slope(rng), _rand_slope(rng)
        if det(r, rp) == 0:
            continue
        z = (rng.uniform(-3, 3), rng.uniform(0.05, 5))
        err = max(err, abs(K(r, rp, z) - K_via_distance(r, rp, z)))
    ok &= err <= 1e-12
    notes.append(f"K-sech {err:.1e}")
    # invariance under the Veech group
    kerr, ibad, ebad = 0.0, 0, 0
    for _ in range(n_inv):
        r, rp = _rand_slope(rng, 6), _rand_slope(rng, 6)
        if det(r, rp) == 0:
            continue
        g = _rand_gamma(rng)
        z = (rng.uniform(-2, 2), rng.uniform(0.2, 3))
        gz = act_on_point(g, z)
        gam = Geodesic(r, rp)
        ga = Geodesic(act_on_slope(g, r), act_on_slope(g, rp))
        kerr = max(kerr, abs(geodesic_K(gam, z) - geodesic_K(ga, gz)))
        h = _conj(g)
        kerr = max(kerr, abs(K(r, rp, z) - K(act_on_slope(h, r), act_on_slope(h, rp), gz)))
        s = rng.choice(s_values)
        gr, grp = act_on_slope(g, r), act_on_slope(g, rp)
        if saddle.intersection_ratio(s, r, rp).value != saddle.intersection_ratio(s, gr, grp).value:
            ibad += 1
        if is_end_of_Z(s, r, rp) != is_end_of_Z(s, gr, grp) or is_end_of_Z_group(r, rp) != is_end_of_Z_group(gr, grp):
            ebad += 1
    ok &= kerr <= 1e-9 and ibad == 0 and ebad == 0
    notes.append(f"invariance K {kerr:.1e}, I {ibad} bad, End(Z) {ebad} bad")
    # covering degree
    sbad = 0
    for _ in range(n_sum):
        r, rp = _rand_slope(rng), _rand_slope(rng)
        if det(r, rp) == 0:
            continue
        s = rng.choice(s_values)
        table = saddle.pairing_table(s, r, rp)
        if abs(sum(map(sum, table))) != (2 * s - 1) * abs(det(r, rp)):
            sbad += 1
    ok &= sbad == 0
    notes.append(f"sum rule {sbad} bad")
    # homology round trip and the traced g-classes
    hbad = 0
    for s in range(2, max_s + 1):
        names = [f"{k}_{i}" for k in ("e", "f", "g") for i in range(1, s + 1)] + [f"g'_{i}" for i in range(1, s)]
        for nm in names:
            h = named_class(nm, s)
            if HomologyClass(*coords_from_pairings(h, s)) != h:
                hbad += 1
        traced = sorted(map(str, saddle.saddle_classes(s, Fraction(1))))
        named = sorted(str(named_class(f"g_{i}", s)) for i in range(1, s + 1))
        named += [str(named_class(f"g'_{i}", s)) for i in range(1, s)]
        if traced != sorted(named):
            hbad += 1
    cbad = 0
    for s in range(2, 11):
        surf = build_staircase(s)
        cyc = cycles(surf.commutator())
        cbad += len(cyc) != 1 or len(cyc[0]) != surf.n
    ok &= hbad == 0 and cbad == 0
    notes.append(f"round trip {hbad} bad, commutator {cbad} bad")
    return CheckResult("9", "identity suite", "all identities hold", "; ".join(notes), "1e-12", ok)


@contextlib.contextmanager
def perturbed_form():
    """Swap in a wrong intersection form, for the harness self-test."""
    orig = saddle._form

    def bad(s):
        m = orig(s).m.copy()
        m[0, 1] += 1
        return IntersectionForm(m)

    saddle._form = bad
    saddle._ratio.cache_clear()
    try:
        yield
    finally:
        saddle._form = orig
        saddle._ratio.cache_clear()


def _guard(number: str, name: str, fn) -> CheckResult:
    t = time.perf_counter()
    try:
        return fn()
    except Exception as exc:  # a crash is a failed check, not a crashed report
        return CheckResult(number, name, "runs", f"{type(exc).__name__}: {exc}", "-", False,
                           time.perf_counter() - t)


def run(level: str = "quick", inject_fault: bool = False) -> list[CheckResult]:
    """Run the acceptance checks; 'quick' is the s = 2 suite on smaller samples."""
    if level not in ("quick", "full"):
        raise ValueError(f"unknown level {level!r}")
    full = level == "full"
    checks = [
        ("1", "KVol(St(2s-1)) = 2s-1", lambda: check_exact_values((2, 3, 4, 5) if full else (2,))),
        ("3", "incenter of the triangle", check_incenter),
        ("4", "gap law", lambda: check_gap_law((2, 3) if full else (2,), 12 if full else 8)),
        ("5a", "remark: max off End(Z)", check_remark_max),
        ("5b", "remark: all others <= 2/3", check_remark_bound),
        ("6", "region dichotomy", lambda: check_dichotomy(2, 50 if full else 20)),
        ("7", "limits", check_limits),
        ("9", "identity suite", lambda: check_identities(
            n_k=10_000 if full else 1000, n_inv=500 if full else 100, n_sum=200 if full else 50,
            s_values=(2, 3, 4) if full else (2,), max_s=8 if full else 4)),
    ]
    if full:
        checks += [
            ("2", "minimum", check_minimum),
            ("8", "covering with n <= 12", check_covering),
            ("8*", "covering with n <= 80", lambda: check_covering(0.01, 80, "8*")),
        ]
    ctx = perturbed_form() if inject_fault else contextlib.nullcontext()
    with ctx:
        return [_guard(num, name, fn) for num, name, fn in checks]

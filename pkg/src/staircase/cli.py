"""Command line interface: ``staircase <command> ...``.

Exit codes: 0 success, 2 invalid input, 3 search instability, 1 failed checks.
Search defaults can be overridden with STAIRCASE_ENDPOINT_BOUND,
STAIRCASE_WORD_DEPTH, STAIRCASE_STABILITY_ROUNDS and STAIRCASE_TOLERANCE.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from fractions import Fraction

from staircase import kvol as kv
from staircase import verify as vf
from staircase.saddle import intersection_ratio, saddles_json
from staircase.slopes import as_slope, canonical_direction, farey_slopes, fmt_slope
from staircase.veech import is_end_of_Z, is_end_of_Z_group

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_UNSTABLE = 0, 1, 2, 3


class InputError(ValueError):
    pass


def _num(text: str):
    """Rational ('9/14', '2') stays exact, decimals become floats."""
    try:
        if "/" in text or text.lstrip("+-").isdigit():
            return Fraction(text)
        v = float(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"cannot parse number {text!r}") from exc
    if not math.isfinite(v):
        raise InputError(f"not a finite number: {text!r}")
    return v


def _slope(text: str):
    try:
        return as_slope(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"cannot parse slope {text!r}") from exc


def config_from_env(env=None) -> kv.CandidateConfig:
    env = os.environ if env is None else env
    kw = {}
    for key, field, cast in (
        ("STAIRCASE_ENDPOINT_BOUND", "base_endpoint_bound", int),
        ("STAIRCASE_WORD_DEPTH", "word_depth", int),
        ("STAIRCASE_STABILITY_ROUNDS", "stability_rounds", int),
        ("STAIRCASE_TOLERANCE", "tolerance", float),
    ):
        if key in env:
            try:
                kw[field] = cast(env[key])
            except ValueError as exc:
                raise InputError(f"bad {key}={env[key]!r}") from exc
    try:
        return kv.CandidateConfig(**kw)
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def _g(v) -> str:
    return "" if v is None else f"{float(v):.12g}"


def _emit(rows: list[dict], fmt: str, out) -> None:
    if fmt == "json":
        out.write(json.dumps(rows, indent=2) + "\n")
        return
    if not rows:
        return
    w = csv.DictWriter(out, fieldnames=list(rows[0]), lineterminator="\n")
    w.writeheader()
    w.writerows(rows)


def _check_s(s: int) -> None:
    if s < 2:
        raise InputError("s must be >= 2")


# ----------------------------------------------------------------- commands


def cmd_at(a, out) -> int:
    _check_s(a.s)
    x, y = _num(a.x), _num(a.y)
    if not y > 0:
        raise InputError(f"y must be positive, got {a.y}")
    res = kv.kvol_at(a.s, (x, y), config_from_env())
    wit = [{"r": fmt_slope(w.geodesic.a), "rp": fmt_slope(w.geodesic.b), "K": _g(w.K)} for w in res.witnesses]
    d = res.diagnostics
    row = {
        "x": _g(x), "y": _g(y),
        "reduced_x": _g(res.reduced.x), "reduced_y": _g(res.reduced.y),
        "kvol": _g(res.value),
        "witness_kind": res.witness_kind,
        "J_1": _g(res.j_terms[0]), "J_-1": _g(res.j_terms[1]),
        "best_K": _g(res.best_K),
        "candidates_examined": d["candidates_examined"],
        "max_denominator": d["max_denominator"],
        "stability_rounds": d["stability_rounds"],
    }
    if a.format == "json":
        row["witnesses"] = wit
        _emit([row], "json", out)
    else:
        row["witnesses"] = ";".join(f"({w['r']},{w['rp']})" for w in wit)
        _emit([row], "csv", out)
    return EXIT_OK


def cmd_scan(a, out) -> int:
    _check_s(a.s)
    ystep = a.step if a.ystep is None else a.ystep
    if not (a.step > 0 and ystep > 0):
        raise InputError("step must be positive")
    if a.xmax < a.xmin or a.ymax < a.ymin:
        raise InputError("empty range")
    rows = kv.scan(a.s, (a.xmin, a.xmax), (a.ymin, a.ymax), a.step, config_from_env(), ystep=ystep,
                   workers=a.workers, domain_only=not a.all_points)
    if a.format == "json":
        keys = kv.CSV_HEADER.split(",")
        _emit([dict(zip(keys, r.csv_fields())) for r in rows], "json", out)
    else:
        out.write(kv.CSV_HEADER + "\n")
        w = csv.writer(out, lineterminator="\n")
        for r in rows:
            w.writerow(r.csv_fields())
    return EXIT_OK


def cmd_saddles(a, out) -> int:
    _check_s(a.s)
    try:
        canonical_direction(a.p, a.q)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    recs = json.loads(saddles_json(a.s, a.p, a.q))
    if a.format == "json":
        _emit(recs, "json", out)
    else:
        flat = [{
            "start_square": r["start_square"], "end_square": r["end_square"], "class": r["class"],
            "eps": " ".join(map(str, r["homology"]["eps"])), "phi": " ".join(map(str, r["homology"]["phi"])),
            "e_word": " ".join(r["e_word"] or []), "g_word": " ".join(r["g_word"] or []),
        } for r in recs]
        _emit(flat, "csv", out)
    return EXIT_OK


def _frac(v: Fraction) -> str:
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def cmd_itable(a, out) -> int:
    _check_s(a.s)
    if a.bound < 1:
        raise InputError("bound must be >= 1")
    slopes = farey_slopes(a.bound)
    rows = []
    for i, r in enumerate(slopes):
        for rp in slopes[i + 1:]:
            v = intersection_ratio(a.s, r, rp).value
            rows.append({"r": fmt_slope(r), "rp": fmt_slope(rp), "I": _frac(v),
                         "end": "true" if v == 1 else "false"})
    _emit(rows, a.format, out)
    return EXIT_OK


def cmd_endz(a, out) -> int:
    _check_s(a.s)
    r, rp = _slope(a.r), _slope(a.rp)
    if r == rp:
        raise InputError("need two distinct slopes")
    v = intersection_ratio(a.s, r, rp).value
    row = {"r": fmt_slope(r), "rp": fmt_slope(rp), "I": _frac(v),
           "end": "true" if is_end_of_Z(a.s, r, rp) else "false",
           "group_test": "true" if is_end_of_Z_group(r, rp) else "false"}
    _emit([row], a.format, out)
    return EXIT_OK


def cmd_min(a, out) -> int:
    _check_s(a.s)
    pt, val = kv.find_minimum(a.s, config_from_env())
    rows = [{"x": _g(sx * float(pt.x)), "y": _g(pt.y), "kvol": _g(val),
             "closed_form": _g((2 * a.s - 1) * math.sqrt(143 / 144))} for sx in (1, -1)]
    _emit(rows, a.format, out)
    return EXIT_OK


def cmd_cover(a, out) -> int:
    if not a.step > 0 or a.n_max < 1:
        raise InputError("step must be positive and n-max >= 1")
    rep = kv.verify_covering(a.step, a.n_max, a.y_max)
    row = {"samples": rep.samples, "uncovered": len(rep.uncovered), "min_margin": _g(rep.min_margin),
           "lowest_uncovered_y": _g(rep.lowest_uncovered), "n_max": a.n_max, "y_max": _g(a.y_max)}
    if a.format == "json":
        row["uncovered_points"] = [[_g(x), _g(y)] for x, y in rep.uncovered]
    _emit([row], a.format, out)
    return EXIT_OK if rep.ok else EXIT_FAIL


def cmd_verify(a, out) -> int:
    results = vf.run(a.level, inject_fault=a.inject_fault)
    if a.format == "json":
        _emit([{"criterion": r.number, "name": r.name, "claim": r.claim, "computed": r.computed,
                "tolerance": r.tolerance, "passed": r.passed, "seconds": round(r.seconds, 2)} for r in results],
              "json", out)
    else:
        for r in results:
            out.write(r.line() + "\n")
    return EXIT_OK if all(r.passed for r in results) else EXIT_FAIL


# ------------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="staircase", description="KVol on the Teichmueller disk of St(2s-1)")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--format", choices=("json", "csv"), default="csv")
        sp.set_defaults(fn=fn)
        return sp

    sp = add("at", cmd_at, "KVol at one point")
    sp.add_argument("--s", type=int, default=2)
    sp.add_argument("--x", required=True)
    sp.add_argument("--y", required=True)

    sp = add("scan", cmd_scan, "KVol on a grid")
    sp.add_argument("--s", type=int, default=2)
    sp.add_argument("--xmin", type=float, default=-1.0)
    sp.add_argument("--xmax", type=float, default=1.0)
    sp.add_argument("--ymin", type=float, default=0.1)
    sp.add_argument("--ymax", type=float, default=2.0)
    sp.add_argument("--step", type=float, default=0.1)
    sp.add_argument("--ystep", type=float, default=None, help="y spacing, defaults to --step")
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--all-points", action="store_true", help="do not skip points outside the fundamental domain")

    sp = add("saddles", cmd_saddles, "saddle connections in direction (p, q)")
    sp.add_argument("--s", type=int, default=2)
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--q", type=int, required=True)

    sp = add("itable", cmd_itable, "table of I(r, r')")
    sp.add_argument("--s", type=int, default=2)
    sp.add_argument("--bound", type=int, default=4)

    sp = add("endz", cmd_endz, "is (r, r') in End(Z)")
    sp.add_argument("--s", type=int, default=2)
    sp.add_argument("--r", required=True)
    sp.add_argument("--rp", required=True)

    sp = add("min", cmd_min, "minimum of KVol")
    sp.add_argument("--s", type=int, default=2)

    sp = add("cover", cmd_cover, "covering check of the region A")
    sp.add_argument("--step", type=float, default=0.01)
    sp.add_argument("--n-max", type=int, default=12)
    sp.add_argument("--y-max", type=float, default=8.0)

    sp = add("verify", cmd_verify, "run the acceptance checks")
    sp.add_argument("level", nargs="?", choices=("quick", "full"), default="quick")
    sp.add_argument("--inject-fault", action="store_true", help="perturb the intersection form (self-test)")
    return p


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    buf = io.StringIO()
    try:
        code = a.fn(a, buf)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except kv.SearchInstability as exc:
        print(f"search instability: {exc}", file=sys.stderr)
        if exc.diagnostics:
            print(json.dumps(exc.diagnostics, default=str), file=sys.stderr)
        return EXIT_UNSTABLE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    out.write(buf.getvalue())
    return code


if __name__ == "__main__":
    sys.exit(main())

"""Saddle connections of St(2s-1) by exact tracing of the linear flow.

Traces are done on the square-tiled surface itself (the point (0, 1) of the
disk).  A separatrix in direction (p, q), q > 0, leaves the cone point from
the bottom-left corner of a square when p > 0 and from the bottom-right corner
when p < 0, so every square launches exactly one.  Along the segment
t -> t (p, q), 0 < t <= 1, it meets vertical edges at t = a/|p|, horizontal
edges at t = b/q and comes back to the cone point at t = 1.

Homology is read off from signed crossings with the cylinder core curves:
eps_i counts crossings of the vertical midlines of column cylinder i (with the
sign of p), phi_i counts upward crossings of the horizontal midlines of row
cylinder i.  These equal Int(h, beta_i) and -Int(h, alpha_i).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from staircase.origami import (
    HomologyClass,
    StaircaseSurface,
    build_staircase,
    intersection_form,
    pair,
)
from staircase.slopes import Slope, canonical_direction, det, direction_of, fmt_slope


@dataclass(frozen=True)
class Direction:
    p: int
    q: int

    def __post_init__(self):
        if canonical_direction(self.p, self.q) != (self.p, self.q):
            raise ValueError(f"direction ({self.p}, {self.q}) is not canonical (need gcd 1 and q > 0, or (1, 0))")

    @classmethod
    def of(cls, p: int, q: int) -> Direction:
        return cls(*canonical_direction(p, q))


@dataclass(frozen=True)
class SaddleConnection:
    direction: Direction
    start_square: int
    end_square: int
    crossings: tuple[tuple[str, int], ...]
    homology: HomologyClass


@dataclass(frozen=True)
class IntersectionRatio:
    value: Fraction
    witness: tuple[int, int]


def _sign(v: int) -> int:
    return (v > 0) - (v < 0)


def _events(p: int, q: int, extra: int = 0):
    """Sorted (t, kind) events on 0 < t <= 1 for the segment t (p, q).

    Kinds: 'right' (vertical edge), 'top' (horizontal edge), 'col' and 'row'
    (column/row midlines) and, when ``extra`` is nonzero, 'diag' for the lines
    x - y in Z, met at t = m / |extra|.
    """
    ap = abs(p)
    ev = []
    ev += [(Fraction(a, ap), "right") for a in range(1, ap + 1)]
    ev += [(Fraction(b, q), "top") for b in range(1, q + 1)]
    ev += [(Fraction(2 * c + 1, 2 * ap), "col") for c in range(ap)]
    ev += [(Fraction(2 * d + 1, 2 * q), "row") for d in range(q)]
    if extra:
        ev += [(Fraction(m, abs(extra)), "diag") for m in range(1, abs(extra))]
    order = {"col": 0, "row": 0, "diag": 0, "right": 1, "top": 2}
    ev.sort(key=lambda e: (e[0], order[e[1]]))
    return ev


def _trace_one(surface: StaircaseSurface, p: int, q: int, start: int, diag: bool = False):
    """Follow one separatrix; returns (end square, crossings, eps, phi, diagonal labels)."""
    s = surface.s
    eps = [0] * s
    phi = [0] * s
    crossings = []
    diag_labels = []
    sq = start
    ev = _events(p, q, p - q if diag else 0)
    for t, kind in ev:
        if kind == "col":
            eps[surface.column_of(sq) - 1] += _sign(p)
        elif kind == "row":
            phi[surface.row_of(sq) - 1] += 1
        elif kind == "diag":
            diag_labels.append(surface.diagonal_label(sq))
        elif t == 1:
            # final corner: record both exits, stay put (this is the cone point)
            crossings.append(("right" if p > 0 else "left", sq))
            crossings.append(("top", sq))
            break
        elif kind == "right":
            crossings.append(("right" if p > 0 else "left", sq))
            sq = surface.right(sq) if p > 0 else surface.left(sq)
        else:
            crossings.append(("top", sq))
            sq = surface.up(sq)
    return sq, tuple(crossings), eps, phi, diag_labels


def trace_direction(surface: StaircaseSurface, d: Direction) -> list[SaddleConnection]:
    """The 2s-1 saddle connections in direction ``d``, one per starting square."""
    if not isinstance(d, Direction):
        d = Direction(*d)
    p, q = d.p, d.q
    s, n = surface.s, surface.n
    out = []
    for j in range(1, n + 1):
        if (p, q) == (1, 0):
            # bottom edge of square j
            eps = [0] * s
            eps[surface.column_of(j) - 1] = 1
            h = HomologyClass(tuple(eps), (0,) * s)
            out.append(SaddleConnection(d, j, j, (("right", j),), h))
        elif (p, q) == (0, 1):
            # left edge of square j
            phi = [0] * s
            phi[surface.row_of(j) - 1] = 1
            h = HomologyClass((0,) * s, tuple(phi))
            out.append(SaddleConnection(d, j, j, (("top", j),), h))
        else:
            end, cr, eps, phi, _ = _trace_one(surface, p, q, j)
            out.append(SaddleConnection(d, j, end, cr, HomologyClass(tuple(eps), tuple(phi))))
    return out


def homology_of_trace(surface: StaircaseSurface, crossings) -> HomologyClass:
    """Homology class of a closed trace given as its crossing record.

    The record lists (kind, square) exits with kind in right/left/top and
    must end with a simultaneous horizontal and vertical exit (the cone point).
    A single right (top) exit is a horizontal (vertical) unit edge.
    """
    crossings = tuple(crossings)
    s = surface.s
    if len(crossings) == 1:
        kind, sq = crossings[0]
        if kind == "right":
            eps = [0] * s
            eps[surface.column_of(sq) - 1] = 1
            return HomologyClass(tuple(eps), (0,) * s)
        if kind == "top":
            phi = [0] * s
            phi[surface.row_of(sq) - 1] = 1
            return HomologyClass((0,) * s, tuple(phi))
        raise ValueError(f"bad crossing record {crossings!r}")
    if len(crossings) < 2 or crossings[-1][0] != "top" or crossings[-2][0] not in ("right", "left") \
            or crossings[-1][1] != crossings[-2][1]:
        raise ValueError("trace is not closed at the cone point")
    horiz = [k for k, _ in crossings if k in ("right", "left")]
    if len(set(horiz)) != 1:
        raise ValueError("trace mixes left and right exits")
    p = len(horiz) * (1 if horiz[0] == "right" else -1)
    q = sum(1 for k, _ in crossings if k == "top")
    if canonical_direction(p, q) != (p, q):
        raise ValueError(f"crossing counts ({p}, {q}) are not a primitive direction")
    start = crossings[0][1]
    end, cr, eps, phi, _ = _trace_one(surface, p, q, start)
    if cr != crossings:
        raise ValueError("crossing record is not a straight-line trace on this surface")
    return HomologyClass(tuple(eps), tuple(phi))


@lru_cache(maxsize=None)
def _classes(s: int, p: int, q: int) -> tuple[HomologyClass, ...]:
    surf = build_staircase(s)
    return tuple(c.homology for c in trace_direction(surf, Direction(p, q)))


def saddle_classes(s: int, r: Slope) -> tuple[HomologyClass, ...]:
    """Homology classes of the 2s-1 saddle connections with slope ``r``."""
    return _classes(s, *direction_of(r))


@lru_cache(maxsize=None)
def _form(s: int):
    return intersection_form(s)


def pairing_table(s: int, r: Slope, rp: Slope) -> list[list[int]]:
    form = _form(s)
    A = saddle_classes(s, r)
    B = saddle_classes(s, rp)
    return [[pair(form, a, b) for b in B] for a in A]


@lru_cache(maxsize=None)
def _ratio(s: int, r: Slope, rp: Slope) -> IntersectionRatio:
    dd = det(r, rp)
    table = pairing_table(s, r, rp)
    best, wit = -1, (0, 0)
    for i, row in enumerate(table):
        for j, v in enumerate(row):
            if abs(v) > best:
                best, wit = abs(v), (i + 1, j + 1)
    value = Fraction(best, abs(dd))
    if not 0 <= value <= 1:
        raise AssertionError(f"I({fmt_slope(r)}, {fmt_slope(rp)}) = {value} outside [0, 1]")
    return IntersectionRatio(value, wit)


def intersection_ratio(s: int, r: Slope, rp: Slope) -> IntersectionRatio:
    """Exact I_{r,r'}: max |Int| between saddle connections over |p q' - p' q|."""
    if det(r, rp) == 0:
        raise ValueError("intersection ratio needs two distinct slopes")
    return _ratio(s, r, rp)


def sum_rule_check(s: int, r: Slope, rp: Slope) -> bool:
    """Total pairing of the two full preimages equals (2s-1)(p q' - p' q)."""
    dd = det(r, rp)
    if dd == 0:
        raise ValueError("sum rule needs two distinct slopes")
    total = sum(sum(row) for row in pairing_table(s, r, rp))
    return total == (2 * s - 1) * dd


def crossing_word(surface: StaircaseSurface, connection: SaddleConnection, family: str) -> list[str]:
    """Labels of the e- or g-curves crossed in order, the cone point left out.

    ``family='e'`` lists the horizontal saddle connections e_1, e_i, e'_i met
    in the interior; it needs q >= 2.  ``family='g'`` lists the (1,1) saddle
    connections g_i, g'_i; it needs |p - q| >= 2.
    """
    p, q = connection.direction.p, connection.direction.q
    if family == "e":
        if q < 2:
            raise ValueError(f"direction ({p}, {q}) meets no e-curve away from the cone point")
        words = []
        sq = connection.start_square
        for kind, at in connection.crossings[:-2]:
            if kind == "top":
                sq = surface.up(at)
                words.append(surface.bottom_label(sq))
        return words
    if family == "g":
        if abs(p - q) < 2 or q == 0:
            raise ValueError(f"direction ({p}, {q}) meets no g-curve away from the cone point")
        *_, labels = _trace_one(surface, p, q, connection.start_square, diag=True)
        return labels
    raise ValueError(f"unknown family {family!r}")


def connection_record(surface: StaircaseSurface, c: SaddleConnection) -> dict:
    rec = {
        "direction": [c.direction.p, c.direction.q],
        "start_square": c.start_square,
        "end_square": c.end_square,
        "homology": {"eps": list(c.homology.eps), "phi": list(c.homology.phi)},
        "class": str(c.homology),
        "crossings": [[k, sq] for k, sq in c.crossings],
    }
    for fam in ("e", "g"):
        try:
            rec[f"{fam}_word"] = crossing_word(surface, c, fam)
        except ValueError:
            rec[f"{fam}_word"] = None
    return rec


def saddles_json(s: int, p: int, q: int) -> str:
    surf = build_staircase(s)
    conns = trace_direction(surf, Direction.of(p, q))
    return json.dumps([connection_record(surf, c) for c in conns], indent=2)

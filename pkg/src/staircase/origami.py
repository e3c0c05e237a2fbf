"""Combinatorics of the staircase origami St(2s-1).

Squares are numbered 1..2s-1 row by row, bottom to top and left to right.
Row k (k < s) holds squares 2k-1 and 2k, the top row holds square 2s-1 alone,
and square 2k+1 sits directly above square 2k.

Homology is written in the basis e_1, f_1, ..., e_s, f_s where e_i (f_i) are
horizontal (vertical) unit saddle connections:

* bottom edge of square 1 is e_1, of square 2k is e_{k+1}, of square 2k+1 is e'_{k+1}
* left edge of square 1 is f_1, of square 2k is f'_k, of square 2k+1 is f_{k+1}

e'_i is homologous to e_i and f'_i to f_i.
"""

from __future__ import annotations

import re
from fractions import Fraction
from dataclasses import dataclass, field

import numpy as np


def _check_s(s: int) -> None:
    if not isinstance(s, (int, np.integer)) or isinstance(s, bool) or s < 2:
        raise ValueError(f"staircase parameter s must be an integer >= 2, got {s!r}")


def cycles(perm: tuple[int, ...]) -> list[tuple[int, ...]]:
    """Cycle decomposition of a 1-based permutation tuple (perm[i-1] is the image of i)."""
    seen = set()
    out = []
    for start in range(1, len(perm) + 1):
        if start in seen:
            continue
        cyc = [start]
        seen.add(start)
        j = perm[start - 1]
        while j != start:
            cyc.append(j)
            seen.add(j)
            j = perm[j - 1]
        out.append(tuple(cyc))
    return out


def compose(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    """a after b."""
    return tuple(a[b[i] - 1] for i in range(len(b)))


def inverse(a: tuple[int, ...]) -> tuple[int, ...]:
    inv = [0] * len(a)
    for i, j in enumerate(a, start=1):
        inv[j - 1] = i
    return tuple(inv)


@dataclass(frozen=True)
class StaircaseSurface:
    s: int
    n: int
    sigma_right: tuple[int, ...]
    sigma_up: tuple[int, ...]
    row_cylinders: tuple[frozenset[int], ...]
    column_cylinders: tuple[frozenset[int], ...]

    def right(self, square: int) -> int:
        return self.sigma_right[square - 1]

    def left(self, square: int) -> int:
        return self.sigma_right.index(square) + 1

    def up(self, square: int) -> int:
        return self.sigma_up[square - 1]

    def down(self, square: int) -> int:
        return self.sigma_up.index(square) + 1

    def row_of(self, square: int) -> int:
        """Index (1..s) of the horizontal cylinder containing ``square``."""
        return (square + 1) // 2

    def column_of(self, square: int) -> int:
        """Index (1..s) of the vertical cylinder containing ``square``."""
        return square // 2 + 1

    def commutator(self) -> tuple[int, ...]:
        r, u = self.sigma_right, self.sigma_up
        return compose(r, compose(u, compose(inverse(r), inverse(u))))

    def volume(self) -> int:
        return self.n

    def bottom_label(self, square: int) -> str:
        """Name of the horizontal saddle connection on the bottom edge of ``square``."""
        if square == 1:
            return "e_1"
        k = square // 2 + 1
        return f"e_{k}" if square % 2 == 0 else f"e'_{k}"

    def left_label(self, square: int) -> str:
        """Name of the vertical saddle connection on the left edge of ``square``."""
        if square == 1:
            return "f_1"
        k = square // 2
        return f"f'_{k}" if square % 2 == 0 else f"f_{k + 1}"

    def diagonal_label(self, square: int) -> str:
        """Name of the (1,1) saddle connection crossing ``square`` diagonally."""
        if square == 1:
            return "g_1"
        k = square // 2
        return f"g'_{k}" if square % 2 == 0 else f"g_{k + 1}"


def build_staircase(s: int) -> StaircaseSurface:
    _check_s(s)
    n = 2 * s - 1
    right = list(range(1, n + 1))
    up = list(range(1, n + 1))
    for a in range(1, n, 2):  # (1 2)(3 4)...
        right[a - 1], right[a] = a + 1, a
    for a in range(2, n, 2):  # (2 3)(4 5)...
        up[a - 1], up[a] = a + 1, a
    rows = tuple(frozenset({2 * k - 1, 2 * k}) for k in range(1, s)) + (frozenset({n}),)
    cols = (frozenset({1}),) + tuple(frozenset({2 * k, 2 * k + 1}) for k in range(1, s))
    surf = StaircaseSurface(s, n, tuple(right), tuple(up), rows, cols)
    comm = cycles(surf.commutator())
    if len(comm) != 1 or len(comm[0]) != n:
        raise AssertionError(f"commutator of St({n}) is not a single {n}-cycle: {comm}")
    return surf


@dataclass(frozen=True)
class HomologyClass:
    """Integer coordinates on e_1..e_s (``eps``) and f_1..f_s (``phi``)."""

    eps: tuple[int, ...]
    phi: tuple[int, ...]

    def __post_init__(self):
        if len(self.eps) != len(self.phi):
            raise ValueError("eps and phi must have the same length")
        object.__setattr__(self, "eps", tuple(int(v) for v in self.eps))
        object.__setattr__(self, "phi", tuple(int(v) for v in self.phi))

    @classmethod
    def zero(cls, s: int) -> HomologyClass:
        return cls((0,) * s, (0,) * s)

    @property
    def s(self) -> int:
        return len(self.eps)

    def __add__(self, other: HomologyClass) -> HomologyClass:
        if self.s != other.s:
            raise ValueError("classes live on different surfaces")
        return HomologyClass(
            tuple(a + b for a, b in zip(self.eps, other.eps)),
            tuple(a + b for a, b in zip(self.phi, other.phi)),
        )

    def __neg__(self) -> HomologyClass:
        return HomologyClass(tuple(-a for a in self.eps), tuple(-a for a in self.phi))

    def __sub__(self, other: HomologyClass) -> HomologyClass:
        return self + (-other)

    def __rmul__(self, k: int) -> HomologyClass:
        return HomologyClass(tuple(k * a for a in self.eps), tuple(k * a for a in self.phi))

    def vector(self) -> np.ndarray:
        """Coordinates interleaved in the basis order e_1, f_1, ..., e_s, f_s."""
        v = np.empty(2 * self.s, dtype=np.int64)
        v[0::2] = self.eps
        v[1::2] = self.phi
        return v

    @classmethod
    def from_vector(cls, v) -> HomologyClass:
        v = np.asarray(v)
        return cls(tuple(v[0::2]), tuple(v[1::2]))

    def __str__(self) -> str:
        terms = []
        for name, coords in (("e", self.eps), ("f", self.phi)):
            for i, c in enumerate(coords, start=1):
                if c:
                    coef = "" if c == 1 else "-" if c == -1 else f"{c}*"
                    terms.append(f"{coef}{name}_{i}")
        return " + ".join(terms).replace("+ -", "- ") or "0"


@dataclass(frozen=True)
class IntersectionForm:
    m: np.ndarray = field(repr=False)

    @property
    def s(self) -> int:
        return self.m.shape[0] // 2

    def __eq__(self, other):
        return isinstance(other, IntersectionForm) and np.array_equal(self.m, other.m)

    def __hash__(self):
        return hash(self.m.tobytes())


def intersection_form(s: int) -> IntersectionForm:
    """Int(e_i, f_j) = (-1)^(j-i) for j >= i, 0 for j < i; e's and f's pair trivially."""
    _check_s(s)
    m = np.zeros((2 * s, 2 * s), dtype=np.int64)
    for i in range(s):
        for j in range(i, s):
            v = (-1) ** (j - i)
            m[2 * i, 2 * j + 1] = v
            m[2 * j + 1, 2 * i] = -v
    assert np.array_equal(m, -m.T)
    if _int_det(m) == 0:
        raise AssertionError("intersection matrix is degenerate")
    return IntersectionForm(m)


def _int_det(m: np.ndarray) -> int:
    a = [[Fraction(int(x)) for x in row] for row in m]
    n = len(a)
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c] != 0), None)
        if piv is None:
            return 0
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            det = -det
        det *= a[c][c]
        for r in range(c + 1, n):
            f = a[r][c] / a[c][c]
            if f:
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return int(det)


def pair(form: IntersectionForm, a: HomologyClass, b: HomologyClass) -> int:
    """Algebraic intersection Int(a, b)."""
    if a.s != form.s or b.s != form.s:
        raise ValueError(f"dimension mismatch: form s={form.s}, classes s={a.s}, {b.s}")
    return int(a.vector() @ form.m @ b.vector())


_NAME = re.compile(r"^(e|f|alpha|beta|g)(')?_?(\d+)$")


def named_class(name: str, s: int) -> HomologyClass:
    """Homology class of a named curve: e_i, f_i, alpha_i, beta_i, g_i or g'_i."""
    _check_s(s)
    m = _NAME.match(name.replace("α", "alpha").replace("β", "beta").strip())
    if m is None:
        raise ValueError(f"unknown curve name {name!r}")
    kind, prime, idx = m.group(1), m.group(2), int(m.group(3))
    top = s - 1 if prime else s
    if prime and kind != "g":
        raise ValueError(f"unknown curve name {name!r}")
    if not 1 <= idx <= top:
        raise ValueError(f"index {idx} out of range for {name!r} with s={s}")

    def e(i):
        v = [0] * s
        v[i - 1] = 1
        return HomologyClass(tuple(v), (0,) * s)

    def f(i):
        v = [0] * s
        v[i - 1] = 1
        return HomologyClass((0,) * s, tuple(v))

    if kind == "e":
        return e(idx)
    if kind == "f":
        return f(idx)
    if kind == "alpha":
        return e(idx) + e(idx + 1) if idx < s else e(s)
    if kind == "beta":
        return f(1) if idx == 1 else f(idx - 1) + f(idx)
    if prime:
        return e(idx + 1) + f(idx)
    return e(idx) + f(idx)


def coords_from_pairings(h: HomologyClass, s: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Recover (eps, phi) as eps_i = Int(h, beta_i), phi_i = -Int(h, alpha_i)."""
    form = intersection_form(s)
    eps = tuple(pair(form, h, named_class(f"beta_{i}", s)) for i in range(1, s + 1))
    phi = tuple(-pair(form, h, named_class(f"alpha_{i}", s)) for i in range(1, s + 1))
    return eps, phi

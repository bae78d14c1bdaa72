"""Exact reduced coordinates (s, t, x, z) for Eisenstein circles.

A circle with reduced coordinates (s, t, x, z) has curvature s*sqrt(3),
co-curvature t*sqrt(3) and curvature-centre (x*sqrt(3) + (x - 2z) i) / 2.
Integral solutions of x^2 - xz + z^2 - 1 = 3st are exactly the Eisenstein
circles with one of their two orientations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .errors import EmptyWindow, InvalidResidue, NotOnSheet, WrongCoset, ZeroCurvature

SQRT3 = math.sqrt(3.0)

# (s, t, x, z) mod 2, concatenated as a bit word, for each coset 0..9
COSET_PATTERNS: dict[int, str] = {
    0: "0001",
    1: "0101",
    2: "1010",
    3: "0111",
    4: "1001",
    5: "1100",
    6: "1011",
    7: "0010",
    8: "0011",
    9: "0110",
}
_PATTERN_TO_COSET = {p: c for c, p in COSET_PATTERNS.items()}

EISENPINT_COSETS = frozenset({0, 4})


class ReducedCoords(NamedTuple):
    s: int
    t: int
    x: int
    z: int

    @property
    def y(self) -> int:
        return self.x - 2 * self.z

    def sheet_defect(self) -> int:
        s, t, x, z = self
        return x * x - x * z + z * z - 1 - 3 * s * t

    def on_sheet(self) -> bool:
        return self.sheet_defect() == 0

    @property
    def orientation(self) -> int:
        """+1 for the orientation in the orbit of the real line, -1 otherwise."""
        return 1 if (self.x + self.z) % 3 == 2 else -1

    def __neg__(self) -> "ReducedCoords":
        return ReducedCoords(-self.s, -self.t, -self.x, -self.z)

    def real_vector(self) -> np.ndarray:
        """(u, v, p, q) in the real coordinates of the geometry module."""
        s, t, x, z = self
        return np.array([s * SQRT3, t * SQRT3, x * SQRT3 / 2, (x - 2 * z) / 2])


def as_coords(rc: Sequence[int]) -> ReducedCoords:
    c = ReducedCoords(*(int(v) for v in rc))
    if not c.on_sheet():
        raise NotOnSheet(f"{tuple(c)} is off the sheet (defect {c.sheet_defect()})")
    return c


def curvature_real(rc: Sequence[int]) -> float:
    return rc[0] * SQRT3


def center_real(rc: Sequence[int]) -> tuple[float, float]:
    s, _, x, z = rc
    if s == 0:
        raise ZeroCurvature(f"{tuple(rc)} is a line and has no centre")
    return (x / (2 * s), (x - 2 * z) / (2 * s * SQRT3))


def _center_exact(rc: ReducedCoords) -> tuple[Fraction, Fraction]:
    # real part, and imaginary part times sqrt(3)
    return Fraction(rc.x, 2 * rc.s), Fraction(rc.y, 2 * rc.s)


def classify_coset(rc: Sequence[int]) -> int:
    word = "".join(str(v % 2) for v in rc)
    try:
        return _PATTERN_TO_COSET[word]
    except KeyError:
        raise InvalidResidue(f"residue pattern {word} of {tuple(rc)} is not a coset") from None


def translate(rc: Sequence[int], e: int, f: int) -> ReducedCoords:
    """Image under translation by e + f*omega."""
    s, t, x, z = rc
    return ReducedCoords(
        s,
        t + (e * e + e * f + f * f) * s + (e + f) * x - f * z,
        x + (2 * e + f) * s,
        z + (e - f) * s,
    )


def invert(rc: Sequence[int]) -> ReducedCoords:
    """Image under the matrix [[0, -1], [1, 0]]."""
    s, t, x, z = rc
    return ReducedCoords(t, s, -x, z - x)


def rotate_pi(rc: Sequence[int]) -> ReducedCoords:
    s, t, x, z = rc
    return ReducedCoords(s, t, -x, -z)


def reflect(rc: Sequence[int]) -> ReducedCoords:
    """Reflection across the imaginary axis."""
    s, t, x, z = rc
    return ReducedCoords(s, t, -x, z - x)


def dilate_half(rc: Sequence[int]) -> ReducedCoords:
    """Dilation by 1/2 about the origin; needs t even."""
    s, t, x, z = rc
    if t % 2:
        raise WrongCoset(f"dilation by 1/2 needs even t, got {tuple(rc)}")
    return ReducedCoords(2 * s, t // 2, x, z)


def dilate_two(rc: Sequence[int]) -> ReducedCoords:
    """Dilation by 2 about the origin; needs s even."""
    s, t, x, z = rc
    if s % 2:
        raise WrongCoset(f"dilation by 2 needs even s, got {tuple(rc)}")
    return ReducedCoords(s // 2, 2 * t, x, z)


def inversive_product_exact(rc1: Sequence[int], rc2: Sequence[int]) -> Fraction:
    s1, t1, x1, z1 = rc1
    s2, t2, x2, z2 = rc2
    return Fraction(-3 * s1 * t2 - 3 * s2 * t1 - x1 * z2 - x2 * z1, 2) + x1 * x2 + z1 * z2


def _product_twice(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    # 2 <a, b> for rows of a against rows of b, as exact int64
    s1, t1, x1, z1 = (a[:, i : i + 1] for i in range(4))
    s2, t2, x2, z2 = (b[:, i] for i in range(4))
    return -3 * s1 * t2 - 3 * s2 * t1 - x1 * z2 - x2 * z1 + 2 * (x1 * x2 + z1 * z2)


# base 4-wheel: the real line, the line y = sqrt(3), and two circles of
# curvature sqrt(3) touching at 0 and sqrt(3) i
BASE_WHEEL: tuple[ReducedCoords, ...] = (
    ReducedCoords(0, 0, 0, 1),
    ReducedCoords(0, 2, 0, -1),
    ReducedCoords(1, 2, 2, -1),
    ReducedCoords(1, 0, 0, -1),
)


# -- coset motions ---------------------------------------------------------


def _coset_image(coset: int, move) -> int:
    bits = tuple(int(ch) for ch in COSET_PATTERNS[coset])
    return classify_coset(tuple(v % 2 for v in move(bits)))


def coset_permutation(move) -> dict[int, int]:
    """Permutation of the 10 cosets induced by a map on reduced coordinates.

    The map must act on coordinates mod 2 consistently (translations by
    Z[omega], inversion and rotation by pi all do).
    """
    return {c: _coset_image(c, move) for c in COSET_PATTERNS}


UNIT_TRANSLATION = coset_permutation(lambda rc: translate(rc, 1, 0))
OMEGA_TRANSLATION = coset_permutation(lambda rc: translate(rc, 0, 1))
INVERSION = coset_permutation(invert)


# -- reduction to the real line --------------------------------------------


@dataclass(frozen=True)
class LineReduction:
    """Move log taking a circle to a line, with the terminal pattern."""

    start: ReducedCoords
    moves: tuple[tuple, ...]
    terminal: ReducedCoords
    sign: int

    @property
    def rounds(self) -> int:
        return sum(1 for m in self.moves if m[0] == "invert")


TERMINAL_XZ = ((1, 1), (-1, 0), (0, -1))


def reduce_to_line(rc: Sequence[int]) -> LineReduction:
    """Translate and invert until the curvature vanishes.

    Each round moves the centre into the parallelogram with corners
    -1, 0, omega, -1 + omega by a Z[omega] translation and then inverts;
    the reduced curvature strictly drops. ``sign`` is -1 when the input
    had to be negated to land on one of the three terminal patterns.
    """
    start = as_coords(rc)
    cur = start
    moves: list[tuple] = []
    sign = 1
    if cur.s < 0:
        cur, sign = -cur, -sign
        moves.append(("negate",))
    while cur.s > 0:
        s = cur.s
        # centre = -alpha + beta * omega with alpha = -(x+z)/3s, beta = (x-2z)/3s
        e = (-(cur.x + cur.z)) // (3 * s)
        f = -((cur.x - 2 * cur.z) // (3 * s))
        if e or f:
            cur = translate(cur, e, f)
            moves.append(("translate", e, f))
        nxt = invert(cur)
        if not 0 <= nxt.s < s:
            raise ArithmeticError(f"reduction of {tuple(start)} stalled at {tuple(cur)}")
        cur = nxt
        moves.append(("invert",))
    if (cur.x, cur.z) not in TERMINAL_XZ:
        cur, sign = -cur, -sign
        moves.append(("negate",))
    if (cur.x, cur.z) not in TERMINAL_XZ:
        raise NotOnSheet(f"{tuple(start)} reduced to the non-terminal {tuple(cur)}")
    return LineReduction(start, tuple(moves), cur, sign)


# -- window enumeration ----------------------------------------------------


@dataclass(frozen=True)
class Window:
    xmin: float
    xmax: float
    ymin: float
    ymax: float

    def __post_init__(self):
        if not (self.xmin < self.xmax and self.ymin < self.ymax):
            raise EmptyWindow(f"window {self} has no interior")

    @classmethod
    def centred(cls, width: float, height: float | None = None) -> "Window":
        h = width if height is None else height
        return cls(-width / 2, width / 2, -h / 2, h / 2)

    @classmethod
    def parse(cls, text: str) -> "Window":
        vals = [float(v) for v in text.split(",")]
        if len(vals) != 4:
            raise EmptyWindow(f"window needs xmin,xmax,ymin,ymax, got {text!r}")
        return cls(*vals)


def _z_roots_by_x(s: int) -> list[list[int]]:
    # for each x mod 3s, the z mod 3s with 3s | x^2 - xz + z^2 - 1
    m = 3 * s
    zs = np.arange(m, dtype=np.int64)
    out = []
    for x in range(m):
        vals = (x * x - x * zs + zs * zs - 1) % m
        out.append(zs[vals == 0].tolist())
    return out


def enumerate_window(
    max_s: int,
    window: Window,
    cosets: Iterable[int] | None = EISENPINT_COSETS,
) -> list[ReducedCoords]:
    """All circles with 1 <= s <= max_s centred in ``window``.

    Circles are returned with s > 0, sorted by (s, x, z). ``cosets=None``
    keeps every coset.
    """
    if max_s < 1:
        raise ValueError(f"max_s must be at least 1, got {max_s}")
    keep = None if cosets is None else frozenset(cosets)
    out: list[ReducedCoords] = []
    for s in range(1, max_s + 1):
        m = 3 * s
        table = _z_roots_by_x(s)
        xlo = math.ceil(2 * s * window.xmin)
        xhi = math.floor(2 * s * window.xmax)
        ylo = 2 * s * SQRT3 * window.ymin
        yhi = 2 * s * SQRT3 * window.ymax
        for x in range(xlo, xhi + 1):
            # x - 2z in [ylo, yhi]
            zlo = math.ceil((x - yhi) / 2)
            zhi = math.floor((x - ylo) / 2)
            for z0 in table[x % m]:
                first = zlo + (z0 - zlo) % m
                for z in range(first, zhi + 1, m):
                    num = x * x - x * z + z * z - 1
                    c = ReducedCoords(s, num // m, x, z)
                    if keep is None or classify_coset(c) in keep:
                        out.append(c)
    out.sort()
    return out


def pairwise_products(circles: Sequence[Sequence[int]]) -> np.ndarray:
    """Matrix of 2 <c_i, c_j> as exact integers."""
    arr = np.asarray(circles, dtype=np.int64).reshape(-1, 4)
    return _product_twice(arr, arr)


def _proportional(u: Sequence[int], v: Sequence[int]) -> bool:
    return all(u[i] * v[j] == u[j] * v[i] for i in range(4) for j in range(i + 1, 4))


def tangent_triples(circles: Sequence[Sequence[int]]) -> list[tuple[int, int, int]]:
    """Index triples that are pairwise tangent at three distinct points."""
    twice = pairwise_products(circles)
    n = len(circles)
    adj = [set(np.flatnonzero(twice[i] == -2).tolist()) - {i} for i in range(n)]
    found = []
    for i in range(n):
        for j in (j for j in adj[i] if j > i):
            for k in (k for k in adj[i] & adj[j] if k > j):
                ci, cj, ck = (np.asarray(circles[v], dtype=object) for v in (i, j, k))
                p_ij, p_ik, p_jk = ci + cj, ci + ck, cj + ck
                if not (_proportional(p_ij, p_ik) or _proportional(p_ij, p_jk) or _proportional(p_ik, p_jk)):
                    found.append((i, j, k))
    return found


# -- fundamental domain ----------------------------------------------------


def _shift(rc: ReducedCoords, m: int, n: int) -> ReducedCoords:
    # translation by 2m + 2n omega
    return translate(rc, 2 * m, 2 * n)


def canonicalize(rc: Sequence[int]) -> ReducedCoords:
    """Unique representative under 2Z[omega] translations, rotation by pi
    and reflection in the imaginary axis.

    Positive curvature circles end with centre in the rectangle spanned by
    0, 1 and omega - 1/2, where the top edge keeps only real parts in
    [0, 1/2]. Lines reduce to the real axis (0, 0, 0, 1).
    """
    c = as_coords(rc)
    if c.x % 2:
        raise WrongCoset(f"{tuple(c)} lies in coset {classify_coset(c)}, not 0 or 4")
    if c.s < 0:
        c = -c
    if c.s == 0:
        # horizontal line y = -t sqrt(3) / (2 z) with z = +-1 and t even
        c = _shift(c, 0, c.t // (2 * c.z))
        return c if c.z == 1 else rotate_pi(c)

    a, b = _center_exact(c)  # b is the imaginary part times sqrt(3)
    c = _shift(c, 0, -math.floor(b / 3))
    a, b = _center_exact(c)
    c = _shift(c, -math.floor((a - b / 3) / 2), 0)
    a, b = _center_exact(c)
    if b >= Fraction(3, 2):
        c = translate(rotate_pi(c), 2, 2)
        a, b = _center_exact(c)
    if 1 < a < 2:
        c = translate(reflect(c), 2, 0)
    elif a >= 2:
        c = _shift(c, -1, 0)
    a, b = _center_exact(c)
    if b == Fraction(3, 2) and Fraction(1, 2) < a <= 1:
        c = translate(rotate_pi(c), 0, 2)
    return c


def in_fundamental_domain(rc: Sequence[int]) -> bool:
    c = ReducedCoords(*rc)
    if c.s <= 0:
        return c == ReducedCoords(0, 0, 0, 1)
    a, b = _center_exact(c)
    if not (0 <= a <= 1 and 0 <= b <= Fraction(3, 2)):
        return False
    return not (b == Fraction(3, 2) and a > Fraction(1, 2))


def window_csv_rows(circles: Iterable[ReducedCoords]) -> Iterable[list[int]]:
    for c in circles:
        yield [c.s, c.t, c.x, c.z, classify_coset(c)]

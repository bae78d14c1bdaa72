"""Oriented circles in real coordinates and geometric 4-wheels.

A circle is the vector (u, v, p, q): curvature u, co-curvature v and
curvature-centre w = p + iq, normalised so that -uv + p^2 + q^2 = 1.
Lines have u = 0, unit normal w, and satisfy p x + q y = v / 2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .errors import DegenerateQuadruple, NotTangent
from .quadruples import as_quadruple, is_strip

TOL = 1e-9

M_INV = np.array(
    [[0.0, -0.5, 0.0, 0.0], [-0.5, 0.0, 0.0, 0.0], [0.0, 0.0, 1.0, 0.0], [0.0, 0.0, 0.0, 1.0]]
)

R_EIS = np.array(
    [[1, -1, -2, -1], [-1, 1, -1, -2], [-2, -1, 1, -1], [-1, -2, -1, 1]], dtype=float
)

SWAP = {
    1: np.array([[-1, 0, 0, 0], [2, 1, 0, 0], [0, 0, 1, 0], [2, 0, 0, 1]]),
    2: np.array([[1, 2, 0, 0], [0, -1, 0, 0], [0, 2, 1, 0], [0, 0, 0, 1]]),
    3: np.array([[1, 0, 0, 0], [0, 1, 2, 0], [0, 0, -1, 0], [0, 0, 2, 1]]),
    4: np.array([[1, 0, 0, 2], [0, 1, 0, 0], [0, 0, 1, 2], [0, 0, 0, -1]]),
}


@dataclass(frozen=True)
class OrientedCircleReal:
    u: float
    v: float
    p: float
    q: float

    @classmethod
    def from_vector(cls, vec: Sequence[float]) -> "OrientedCircleReal":
        return cls(*(float(x) for x in vec))

    def vector(self) -> np.ndarray:
        return np.array([self.u, self.v, self.p, self.q])

    def __neg__(self) -> "OrientedCircleReal":
        return OrientedCircleReal(-self.u, -self.v, -self.p, -self.q)

    def norm_defect(self) -> float:
        return -self.u * self.v + self.p**2 + self.q**2 - 1.0

    @property
    def is_line(self) -> bool:
        return abs(self.u) < TOL

    @property
    def center(self) -> tuple[float, float]:
        return (self.p / self.u, self.q / self.u)

    @property
    def radius(self) -> float:
        return 1.0 / abs(self.u)

    @classmethod
    def from_center(cls, curvature: float, x: float, y: float) -> "OrientedCircleReal":
        u = float(curvature)
        p, q = u * x, u * y
        v = (p * p + q * q - 1.0) / u
        return cls(u, v, p, q)


@dataclass(frozen=True)
class ProjectivePoint:
    coords: tuple[float, float, float, float]

    def vector(self) -> np.ndarray:
        return np.array(self.coords)

    def affine(self) -> complex | None:
        """The point as a complex number, or None for infinity."""
        u, _, p, q = self.coords
        if abs(u) < TOL * max(1.0, float(np.abs(self.coords).max())):
            return None
        return complex(p / u, q / u)

    @classmethod
    def from_complex(cls, z: complex | None) -> "ProjectivePoint":
        if z is None:
            return cls((0.0, 1.0, 0.0, 0.0))
        return cls((1.0, abs(z) ** 2, z.real, z.imag))

    def same_as(self, other: "ProjectivePoint", tol: float = 1e-7) -> bool:
        a, b = self.vector(), other.vector()
        a = a / np.abs(a).max()
        b = b / np.abs(b).max()
        return bool(np.allclose(a, b, atol=tol) or np.allclose(a, -b, atol=tol))


def _vec(x) -> np.ndarray:
    if isinstance(x, (OrientedCircleReal, ProjectivePoint)):
        return x.vector()
    return np.asarray(x, dtype=float)


def inversive_product(c1, c2) -> float:
    a, b = _vec(c1), _vec(c2)
    return float(a @ M_INV @ b)


def tangency_point(c1: OrientedCircleReal, c2: OrientedCircleReal, tol: float = TOL) -> ProjectivePoint:
    prod = inversive_product(c1, c2)
    if abs(prod + 1.0) > tol:
        raise NotTangent(f"inversive product {prod} is not -1")
    s = _vec(c1) + _vec(c2)
    if np.abs(s).max() < tol:
        raise NotTangent("the two inputs are one circle with opposite orientations")
    return ProjectivePoint(tuple(float(x) for x in s))


@dataclass(frozen=True)
class Wheel:
    """Four oriented circles stored as the columns of a 4x4 matrix."""

    matrix: np.ndarray

    @classmethod
    def from_circles(cls, circles: Sequence[OrientedCircleReal]) -> "Wheel":
        return cls(np.column_stack([c.vector() for c in circles]))

    @property
    def circles(self) -> tuple[OrientedCircleReal, ...]:
        return tuple(OrientedCircleReal.from_vector(self.matrix[:, j]) for j in range(4))

    @property
    def curvatures(self) -> np.ndarray:
        return self.matrix[0].copy()

    def gram(self) -> np.ndarray:
        return self.matrix.T @ M_INV @ self.matrix

    def gram_defect(self) -> float:
        return float(np.abs(self.gram() - R_EIS).max())

    def is_valid(self, tol: float = TOL) -> bool:
        return self.gram_defect() <= tol * max(1.0, float(np.abs(self.matrix).max()) ** 2) and (
            self.curvatures.sum() > 0
        )


def swap_wheel(w: Wheel, i: int) -> Wheel:
    return Wheel(w.matrix @ SWAP[i])


def _solve_on_quadric(rows, rhs, u):
    """Points (v, p, q) on two planes and the sheet -u v + p^2 + q^2 = 1."""
    A = np.asarray(rows, dtype=float)
    b = np.asarray(rhs, dtype=float)
    x0, *_ = np.linalg.lstsq(A, b, rcond=None)
    _, sv, vt = np.linalg.svd(A)
    if sv.min() < 1e-12 * max(1.0, sv.max()):
        raise DegenerateQuadruple("placement constraints are singular")
    n = vt[-1]

    def g(x):
        return -u * x[0] + x[1] ** 2 + x[2] ** 2 - 1.0

    # g(x0 + t n) is quadratic in t
    c0 = g(x0)
    c1 = -u * n[0] + 2 * (x0[1] * n[1] + x0[2] * n[2])
    c2 = n[1] ** 2 + n[2] ** 2
    disc = c1 * c1 - 4 * c2 * c0
    if disc < -1e-9 * max(1.0, c1 * c1):
        raise DegenerateQuadruple("no real placement exists")
    r = math.sqrt(max(disc, 0.0))
    if r < 1e-6 * max(1.0, abs(c1)):
        r = 0.0
    return [x0 + ((-c1 + s * r) / (2 * c2)) * n for s in (1.0, -1.0)]


def _row(K: np.ndarray, u: float, target: float):
    # <K, X> = -u_K v / 2 - u v_K / 2 + p_K p + q_K q
    uk, vk, pk, qk = K
    return [-0.5 * uk, pk, qk], target + 0.5 * u * vk


def _first_pair(a: float, b: float, c: float) -> tuple[np.ndarray, np.ndarray]:
    if a != 0:
        c1 = np.array([a, -1.0 / a, 0.0, 0.0])
        c2 = np.array([b, (2 * a + b) / (a * a), (a + b) / abs(a), 0.0])
        return c1, c2
    c1 = np.array([0.0, 0.0, 0.0, -1.0])
    if b != 0:
        return c1, np.array([b, 0.0, 0.0, 1.0])
    # two parallel lines; the gap is fixed by the third curvature
    return c1, np.array([0.0, 6.0 / c, 0.0, 1.0])


def _imag_or_inf(vec: np.ndarray) -> float:
    z = ProjectivePoint(tuple(float(x) for x in vec)).affine()
    return math.inf if z is None else z.imag


def _real_or_inf(vec: np.ndarray) -> float:
    z = ProjectivePoint(tuple(float(x) for x in vec)).affine()
    return math.inf if z is None else z.real


def realize_wheel(q: Sequence[int]) -> Wheel:
    """Canonical geometric wheel with curvatures exactly ``q``.

    C1 is centred at 0 (or is the real axis, oriented upward, when a = 0),
    C2 touches it on the non-negative real axis, and of the two mirror
    placements of C3 the one whose tangency point with C2 lies in the closed
    upper half plane is kept.
    """
    qq = as_quadruple(q)
    a, b, c, d = (float(x) for x in qq)
    C1, C2 = _first_pair(a, b, c)

    r1, t1 = _row(C1, c, -2.0)
    r2, t2 = _row(C2, c, -1.0)
    if a == 0 and b == 0:
        # parallel lines: put C3 on the imaginary axis
        q3 = t1 / r1[2]
        C3 = np.array([c, (q3 * q3 - 1.0) / c, 0.0, q3])
    else:
        C3 = max(
            (np.array([c, *sol]) for sol in _solve_on_quadric([r1, r2], [t1, t2], c)),
            key=lambda X: _imag_or_inf(C2 + X),
        )

    r1, t1 = _row(C1, d, -1.0)
    r3, t3 = _row(C3, d, -1.0)
    cands = [np.array([d, *sol]) for sol in _solve_on_quadric([r1, r3], [t1, t3], d)]
    # keep the placement opposite C2; break mirror ties by the C3-C4 contact
    cands.sort(key=lambda X: (round(abs(inversive_product(C2, X) + 2.0), 7), -_real_or_inf(C3 + X)))
    C4 = cands[0]
    w = Wheel(np.column_stack([C1, C2, C3, C4]))
    if w.gram_defect() > 1e-6 * max(1.0, float(np.abs(w.matrix).max()) ** 2):
        raise DegenerateQuadruple(f"placement of {qq} failed the Gram check")
    return w


def packing_circles(q: Sequence[int], N: int) -> Iterator[tuple[int, int, OrientedCircleReal]]:
    """Yield (curvature, position, circle) for each circle of curvature <= N.

    Uses the same traversal and counting rules as the integer enumeration,
    so the number of yielded circles equals ``count_circles(q, N)``.
    """
    qq = as_quadruple(q)
    w = realize_wheel(qq)
    allow_stationary = not is_strip(qq)
    for j, circ in enumerate(w.circles):
        if qq[j] <= N:
            yield qq[j], j + 1, circ
    stack = [(w.matrix, tuple(qq), 0, True)]
    while stack:
        mat, cur, last, counted = stack.pop()
        if last and counted:
            yield cur[last - 1], last, OrientedCircleReal.from_vector(mat[:, last - 1])
        for i in range(1, 5):
            if i == last or (last == 3 and i == 1) or (last == 4 and i == 2):
                continue
            j = i - 1
            new = 2 * (cur[(j - 1) % 4] + cur[(j + 1) % 4]) - cur[j]
            if new < cur[j] or new > N or (new == cur[j] and not allow_stationary):
                continue
            nxt = list(cur)
            nxt[j] = new
            dup = (last == 1 and i == 3) or (last == 2 and i == 4)
            stack.append((mat @ SWAP[i], tuple(nxt), i, not dup))

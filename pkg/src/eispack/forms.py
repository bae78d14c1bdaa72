"""First-odd binary quadratic forms and their link to Eisenstein quadruples.

Forms ``[A, B, C]`` stand for ``A x^2 + B x y + C y^2``. Matrices act by
substitution, ``(m . f)(x, y) = f(a x + b y, c x + d y)``, so that
``act(m2, act(m1, f)) == act(m1 @ m2, f)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from .arith import kronecker, omega, prime_divisors
from .errors import (
    DegenerateQuadruple,
    DiscriminantMismatch,
    InvalidDiscriminant,
    NotPrimitive,
    NotSemidefinite,
    NotStandardPosition,
)
from .quadruples import EisensteinQuadruple, is_primitive, normalize_root

Matrix2 = tuple[tuple[int, int], tuple[int, int]]

IDENTITY: Matrix2 = ((1, 0), (0, 1))
FLIP: Matrix2 = ((1, 0), (0, -1))
UPPER: Matrix2 = ((1, 1), (0, 1))
LOWER2: Matrix2 = ((1, 0), (2, 1))

# images of S2, S3, S4 under phi
SWAP_MATRICES: dict[int, Matrix2] = {
    2: ((1, 1), (0, -1)),
    3: ((1, 0), (0, -1)),
    4: ((1, 0), (-2, -1)),
}


@dataclass(frozen=True, order=True)
class FirstOddForm:
    A: int
    B: int
    C: int

    @property
    def disc(self) -> int:
        return self.B * self.B - 4 * self.A * self.C

    def __call__(self, x: int, y: int) -> int:
        return self.A * x * x + self.B * x * y + self.C * y * y

    def is_first_odd(self) -> bool:
        return self.A % 2 == 1 and math.gcd(self.A, self.B, self.C) == 1

    def is_reduced(self) -> bool:
        return 0 <= self.B <= self.A and self.B <= 2 * self.C

    def as_list(self) -> list[int]:
        return [self.A, self.B, self.C, self.disc]

    def __str__(self) -> str:
        return f"[{self.A},{self.B},{self.C}]"


def matmul(m: Matrix2, n: Matrix2) -> Matrix2:
    (a, b), (c, d) = m
    (e, f), (g, h) = n
    return ((a * e + b * g, a * f + b * h), (c * e + d * g, c * f + d * h))


def det(m: Matrix2) -> int:
    return m[0][0] * m[1][1] - m[0][1] * m[1][0]


def in_gamma0(m: Matrix2) -> bool:
    return det(m) in (1, -1) and m[1][0] % 2 == 0


def act(m: Matrix2, f: FirstOddForm) -> FirstOddForm:
    (a, b), (c, d) = m
    A, B, C = f.A, f.B, f.C
    return FirstOddForm(
        A * a * a + B * a * c + C * c * c,
        2 * A * a * b + B * (a * d + b * c) + 2 * C * c * d,
        A * b * b + B * b * d + C * d * d,
    )


def _reduce_degenerate(f: FirstOddForm) -> tuple[FirstOddForm, Matrix2]:
    # f = (p x + q y)^2 with p odd; send (p, q) to (1, 0) inside Gamma_0
    p = math.isqrt(f.A)
    q = math.isqrt(f.C)
    if p * p != f.A or q * q != f.C:
        raise NotSemidefinite(f"{f} is not a square of a linear form")
    if f.B < 0:
        q = -q
    if 2 * p * q != f.B:
        raise NotSemidefinite(f"{f} is not a square of a linear form")
    g, u, v = _ext_gcd(p, 2 * q)
    if g != 1:
        raise NotPrimitive(f"{f} is not primitive")
    m: Matrix2 = ((u, -q), (2 * v, p))
    out = act(m, f)
    return out, m


def _ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    if b == 0:
        return (abs(a), 1 if a >= 0 else -1, 0)
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        qt, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - qt * x1
        y0, y1 = y1, y0 - qt * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def reduce_form(f: FirstOddForm) -> tuple[FirstOddForm, Matrix2]:
    """Reduce under Gamma_0^PGL(2) by walking the principal root.

    Returns ``(g, m)`` with ``act(m, f) == g``. The loop translates the root
    into Re in [-1/2, 1/2), reflects it to Re <= 0, and applies
    ``z -> z/(2z+1)`` while that raises Im(z). In form terms these tests are
    ``-A < B <= A``, ``B >= 0`` and ``B > 2C`` respectively.
    """
    D = f.disc
    if D > 0 or f.A < 0 or (f.A == 0 and f.C < 0):
        raise NotSemidefinite(f"{f} is not positive semidefinite")
    if f.A % 2 == 0:
        raise NotPrimitive(f"{f} is not first-odd")
    if D == 0:
        return _reduce_degenerate(f)
    m = IDENTITY
    cur = f
    while True:
        # root z -> z + n is the substitution [[1, -n], [0, 1]]
        A, B = cur.A, cur.B
        n = (A - B) // (2 * A)
        if n:
            t: Matrix2 = ((1, n), (0, 1))
            cur, m = act(t, cur), matmul(m, t)
        if cur.B < 0:
            cur, m = act(FLIP, cur), matmul(m, FLIP)
        if cur.B > 2 * cur.C:
            step: Matrix2 = ((1, 0), (-2, 1))
            cur, m = act(step, cur), matmul(m, step)
            continue
        return cur, m


def _validate_standard(q: Sequence[int]) -> EisensteinQuadruple:
    q = EisensteinQuadruple(*q)
    if (q.a - q.b) % 2 or (q.c - q.d) % 2:
        raise NotStandardPosition(f"{q} is not in standard position")
    return q


def phi(q: Sequence[int]) -> FirstOddForm:
    a, b, c, d = _validate_standard(q)
    return FirstOddForm(a + d, b + d - c, (a + b) // 2)


def theta(f: FirstOddForm, a: int) -> EisensteinQuadruple:
    if f.disc != -3 * a * a:
        raise DiscriminantMismatch(f"disc({f}) = {f.disc} but -3a^2 = {-3 * a * a}")
    A, B, C = f.A, f.B, f.C
    return EisensteinQuadruple(a, 2 * C - a, A - B + 2 * C - 2 * a, A - a)


def enumerate_reduced_forms(D: int) -> list[FirstOddForm]:
    """All reduced primitive positive semidefinite first-odd forms of disc D."""
    if D > 0 or D % 4 not in (0, 1):
        raise InvalidDiscriminant(f"discriminant {D} must be <= 0 and 0 or 1 mod 4")
    if D == 0:
        return [FirstOddForm(1, 0, 0)]
    out = []
    for B in range(D % 2, math.isqrt(-D) + 1, 2):
        ac = (B * B - D) // 4
        for A in _divisors(ac):
            if A % 2 == 0 or A < B:
                continue
            C = ac // A
            if B <= 2 * C and math.gcd(A, B, C) == 1:
                out.append(FirstOddForm(A, B, C))
    out.sort()
    return out


def _divisors(n: int) -> Iterator[int]:
    small = []
    large = []
    for i in range(1, math.isqrt(n) + 1):
        if n % i == 0:
            small.append(i)
            if i * i != n:
                large.append(n // i)
    yield from small
    yield from reversed(large)


def _kron_m3(p: int) -> int:
    return kronecker(-3, p)


def count_packings(n: int) -> int:
    """Closed-form number of primitive packings with outer curvature -n."""
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    prod = Fraction(1)
    for p in prime_divisors(n):
        prod *= 1 - Fraction(_kron_m3(p), p)
    if n % 2:
        val = Fraction(n, 2) * prod + Fraction(2) ** (omega(3 * n) - 2)
    else:
        val = Fraction(n, 3) * prod + Fraction(2) ** (omega(3 * n // 2) - 1)
    if val.denominator != 1:
        raise ArithmeticError(f"count formula gave non-integer {val} at n={n}")
    return int(val)


STRIP_ROOT = EisensteinQuadruple(0, 0, 1, 1)


def roots_with_outer_curvature(n: int) -> list[EisensteinQuadruple]:
    if n < 0:
        raise ValueError(f"n must be non-negative, got {n}")
    if n == 0:
        return [STRIP_ROOT]
    roots = [normalize_root(theta(f, -n)) for f in enumerate_reduced_forms(-3 * n * n)]
    return sorted(roots)


@dataclass(frozen=True)
class TangentCurvatures:
    same_parity: list[int]
    opposite_parity: list[int]


def primitive_vectors_below(f: FirstOddForm, bound: int) -> Iterator[tuple[int, int]]:
    """Coprime (x, y) up to sign with f(x, y) <= bound, for definite f."""
    D = f.disc
    if D >= 0:
        raise DegenerateQuadruple(f"{f} is not definite; the value set is infinite")
    if bound < 0:
        return
    A, B = f.A, f.B
    # f >= (-D / 4A) y^2
    ymax = math.isqrt(4 * A * bound // (-D)) + 1
    for y in range(0, ymax + 1):
        disc = D * y * y + 4 * A * bound
        if disc < 0:
            continue
        r = math.isqrt(disc) + 1
        lo = (-B * y - r) // (2 * A) - 1
        hi = (-B * y + r) // (2 * A) + 1
        for x in range(lo, hi + 1):
            if y == 0 and x <= 0:
                continue
            if math.gcd(x, y) != 1:
                continue
            if f(x, y) <= bound:
                yield x, y


def tangent_curvatures(q: Sequence[int], N: int) -> TangentCurvatures:
    """Curvatures <= N of circles tangent to the first circle of ``q``."""
    q = EisensteinQuadruple(*q)
    if not is_primitive(q):
        raise NotPrimitive(f"{q} is not primitive")
    f = phi(q)
    a = q.a
    same = []
    opp = []
    # 2 f - a <= N and f - a <= N respectively
    for x, y in primitive_vectors_below(f, (N + a) // 2):
        if y % 2:
            same.append(2 * f(x, y) - a)
    for x, y in primitive_vectors_below(f, N + a):
        if y % 2 == 0:
            opp.append(f(x, y) - a)
    return TangentCurvatures(sorted(same), sorted(opp))

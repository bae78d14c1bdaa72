"""The chi_2 invariant, obstruction families and sporadic curvatures."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal, Sequence

import numpy as np

from .arith import kronecker
from .enumeration import CurvatureSieve, enumerate_packing
from .errors import InconsistentChi2, NotAdmissible, NotCoprime
from .forms import tangent_curvatures
from .quadruples import (
    EisensteinQuadruple,
    admissible_residues,
    as_quadruple,
    packing_type,
    standard_position,
)

__all__ = [
    "kronecker",
    "chi2",
    "chi2_from_rho",
    "ExtendedType",
    "packing_chi2",
    "moiety_extended_type",
    "is_obstructed",
    "obstructed_mask",
    "SporadicReport",
    "sporadic",
    "sporadic_from_sieve",
]


def chi2_from_rho(n: int, rho: int, t: int) -> int:
    """chi_2 from a form value rho coprime to n (the defining expression)."""
    if n % 2:
        return kronecker(2 * rho, n)
    if t == 1:
        return kronecker(rho + n, n // 2)
    return -kronecker(-rho + n, n // 2)


def _rho_from_tangent(n: int, b: int, t: int) -> int:
    rho = (b + n) // 2 if (n % 2 and b % 2) else b + n
    if n == 0:
        return 1
    m = 2 * abs(n)
    rho %= m
    if rho == 0:
        rho = m
    if n < 0 and n % 2 == 0 and t == 1:
        while rho <= abs(n):
            rho += m
    return rho


def chi2(n: int, b: int, t: int) -> int:
    """chi_2 of a circle of curvature n with a tangent coprime curvature b.

    Positive n uses the tangent-curvature formulas directly. Non-positive n
    goes through a positive representative rho, which is where the sign of
    the Kronecker symbol at a negative modulus enters.
    """
    if t not in (1, 3):
        raise ValueError(f"type residue must be 1 or 3, got {t}")
    if math.gcd(n, b) != 1:
        raise NotCoprime(f"curvatures {n} and {b} are not coprime")
    if n <= 0:
        return chi2_from_rho(n, _rho_from_tangent(n, b, t), t)
    if n % 2:
        return kronecker(b, n) if b % 2 else kronecker(2 * b, n)
    if t == 1:
        return kronecker(b, n // 2)
    return -kronecker(-b, n // 2)


@dataclass(frozen=True)
class ExtendedType:
    t: int
    chi: int

    @property
    def three(self) -> int:
        return 3

    def __str__(self) -> str:
        return f"(3,{self.t},{self.chi})"


def _neighbour_chi(q: EisensteinQuadruple, i: int, t: int) -> int:
    n = q[i]
    nbrs = [q[(i - 1) % 4], q[(i + 1) % 4]]
    coprime = [b for b in nbrs if math.gcd(n, b) == 1]
    odd = [b for b in coprime if b % 2]
    if odd:
        return chi2(n, odd[0], t)
    if coprime:
        return chi2(n, coprime[0], t)
    # fall back to the tangent-circle value sets of this circle
    rot = EisensteinQuadruple(*(q[(i + k) % 4] for k in range(4)))
    rot = standard_position(rot)
    bound = 64 * (abs(n) + max(abs(x) for x in q) + 1)
    while True:
        tc = tangent_curvatures(rot, bound)
        for b in tc.opposite_parity + tc.same_parity:
            if math.gcd(n, b) == 1:
                return chi2(n, b, t)
        bound *= 4


def packing_chi2(root: Sequence[int]) -> tuple[int, int]:
    """(chi_O, chi_E) for the moieties at positions {1,3} and {2,4}."""
    q = as_quadruple(root)
    t = packing_type(q)
    vals = [_neighbour_chi(q, i, t) for i in range(4)]
    chi_o, chi_e = vals[0], vals[1]
    if vals[2] != chi_o or vals[3] != chi_e:
        raise InconsistentChi2(f"chi_2 values {vals} on {q} are not constant per moiety")
    if (t == 1 and chi_o != chi_e) or (t == 3 and chi_o != -chi_e):
        raise InconsistentChi2(f"chi_2 values {vals} on {q} break the (3,{t}) pattern")
    return chi_o, chi_e


def moiety_extended_type(root: Sequence[int], moiety: Literal["O", "E"]) -> ExtendedType:
    q = as_quadruple(root)
    chi_o, chi_e = packing_chi2(q)
    return ExtendedType(packing_type(q), chi_o if moiety == "O" else chi_e)


def _is_square(n: int) -> bool:
    return n >= 0 and math.isqrt(n) ** 2 == n


def is_obstructed(m: int, et: ExtendedType) -> bool:
    if m <= 0:
        raise NotAdmissible(f"{m} is not a positive integer")
    if m % 4 not in admissible_residues(et.t):
        raise NotAdmissible(f"{m} is not admissible for type (3,{et.t})")
    two_sq = m % 2 == 0 and _is_square(m // 2)
    six_sq = m % 6 == 0 and _is_square(m // 6)
    if et.t == 1 and et.chi == 1:
        return False
    if et.t == 1:
        return (m % 2 == 1 and _is_square(m)) or two_sq or six_sq
    if et.chi == 1:
        return two_sq or (m % 3 == 0 and (m // 3) % 2 == 1 and _is_square(m // 3))
    return six_sq


def _mark(mask: np.ndarray, values: np.ndarray) -> None:
    values = values[(values > 0) & (values < mask.size)]
    mask[values] = True


def obstructed_mask(N: int, et: ExtendedType) -> np.ndarray:
    """Boolean mask over [0, N] of the obstruction family for ``et``."""
    mask = np.zeros(N + 1, dtype=bool)
    if et.t == 1 and et.chi == 1:
        return mask
    k = np.arange(1, math.isqrt(N) + 2, dtype=np.int64)
    if et.t == 1:
        _mark(mask, (2 * k - 1) ** 2)
        _mark(mask, 2 * k * k)
        _mark(mask, 6 * k * k)
    elif et.chi == 1:
        _mark(mask, 2 * k * k)
        _mark(mask, 3 * (2 * k - 1) ** 2)
    else:
        _mark(mask, 6 * k * k)
    return mask


@dataclass(frozen=True)
class SporadicReport:
    root: EisensteinQuadruple
    moiety: str
    N: int
    extended_type: ExtendedType
    values: list[int] = field(repr=False)

    @property
    def count(self) -> int:
        return len(self.values)

    @property
    def max(self) -> int | None:
        return self.values[-1] if self.values else None

    def as_dict(self) -> dict:
        return {
            "root": list(self.root),
            "moiety": self.moiety,
            "type": str(self.extended_type),
            "N": self.N,
            "count": self.count,
            "max": self.max,
            "values": list(self.values),
        }

    def table_row(self) -> list[str]:
        ratio = f"{self.N / self.max:.2f}" if self.max else ""
        return [
            "(" + ", ".join(str(x) for x in self.root) + ")",
            self.moiety,
            str(self.extended_type),
            str(self.N),
            str(self.count),
            "" if self.max is None else str(self.max),
            ratio,
        ]


def sporadic_from_sieve(sieve: CurvatureSieve, moiety: Literal["O", "E"]) -> SporadicReport:
    if sieve.root is None:
        raise ValueError("sieve carries no root quadruple; pass one when loading")
    et = moiety_extended_type(sieve.root, moiety)
    N = sieve.N
    m = np.arange(N + 1)
    admissible = np.isin(m % 4, sorted(admissible_residues(et.t)))
    admissible[0] = False
    cand = admissible & ~sieve.present(moiety) & ~obstructed_mask(N, et)
    values = [int(v) for v in np.flatnonzero(cand)]
    return SporadicReport(sieve.root, moiety, N, et, values)


def sporadic(root: Sequence[int], moiety: Literal["O", "E"], N: int, **kw) -> SporadicReport:
    return sporadic_from_sieve(enumerate_packing(root, N, **kw), moiety)

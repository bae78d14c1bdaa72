"""Integer Eisenstein quadruples, swaps, reduction and congruence checks.

A quadruple ``(a, b, c, d)`` lists the curvatures of a 4-wheel in cyclic
order, so ``a`` is tangent to ``b`` and ``d`` and sits opposite ``c``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

from .errors import IntegerOverflow, NonPositiveSum, NotEisenstein, NotPrimitive

INT_LIMIT = 1 << 62


class EisensteinQuadruple(NamedTuple):
    a: int
    b: int
    c: int
    d: int

    @property
    def total(self) -> int:
        return self.a + self.b + self.c + self.d

    def __str__(self) -> str:
        return f"({self.a},{self.b},{self.c},{self.d})"


Quadruple = EisensteinQuadruple


class SwapKind(enum.Enum):
    DECREASING = "decreasing"
    STATIONARY = "stationary"
    INCREASING = "increasing"


def eisenstein_defect(a: int, b: int, c: int, d: int) -> int:
    """Left side minus right side of the Eisenstein equation."""
    return a * a + b * b + c * c + d * d - 2 * (a + c) * (b + d)


def _check_range(values: Iterable[int]) -> None:
    for v in values:
        if not -INT_LIMIT < v < INT_LIMIT:
            raise IntegerOverflow(f"entry {v} exceeds the 62-bit working range")


def validate(a: int, b: int, c: int, d: int) -> EisensteinQuadruple:
    vals = tuple(int(x) for x in (a, b, c, d))
    _check_range(vals)
    if eisenstein_defect(*vals) != 0:
        raise NotEisenstein(f"{vals} does not satisfy a^2+b^2+c^2+d^2 = 2(a+c)(b+d)")
    if sum(vals) <= 0:
        raise NonPositiveSum(f"{vals} has non-positive curvature sum")
    return EisensteinQuadruple(*vals)


def as_quadruple(q: Sequence[int]) -> EisensteinQuadruple:
    if isinstance(q, EisensteinQuadruple):
        return q
    if len(q) != 4:
        raise NotEisenstein(f"expected four entries, got {len(q)}")
    return validate(*q)


def swap_value(q: Sequence[int], i: int) -> int:
    """Curvature that replaces entry ``i`` (1-based) under the swap S_i."""
    j = i - 1
    return 2 * (q[(j - 1) % 4] + q[(j + 1) % 4]) - q[j]


def apply_swap(q: Sequence[int], i: int) -> EisensteinQuadruple:
    if i not in (1, 2, 3, 4):
        raise ValueError(f"swap index must be 1..4, got {i}")
    vals = list(q)
    vals[i - 1] = swap_value(q, i)
    return EisensteinQuadruple(*vals)


def apply_word(q: Sequence[int], word: Iterable[int]) -> EisensteinQuadruple:
    out = EisensteinQuadruple(*q)
    for i in word:
        out = apply_swap(out, i)
    return out


def swap_classification(q: Sequence[int], i: int) -> SwapKind:
    delta = swap_value(q, i) - q[i - 1]
    if delta < 0:
        return SwapKind.DECREASING
    if delta == 0:
        return SwapKind.STATIONARY
    return SwapKind.INCREASING


def is_reduced_word(word: Sequence[int]) -> bool:
    """Reduced-word rules in the presented swap group."""
    for prev, nxt in zip(word, word[1:]):
        if prev == nxt or (prev == 3 and nxt == 1) or (prev == 4 and nxt == 2):
            return False
    return True


def is_reduced(q: Sequence[int]) -> bool:
    return all(swap_classification(q, i) is not SwapKind.DECREASING for i in range(1, 5))


def content(q: Sequence[int]) -> int:
    return math.gcd(*(int(x) for x in q))


def is_primitive(q: Sequence[int]) -> bool:
    return content(q) == 1


def standard_position(q: Sequence[int]) -> EisensteinQuadruple:
    if not is_primitive(q):
        raise NotPrimitive(f"{tuple(q)} is not primitive")
    a, b, c, d = q
    if (a - b) % 2:
        b, d = d, b
    return EisensteinQuadruple(a, b, c, d)


def dihedral_images(q: Sequence[int]) -> list[EisensteinQuadruple]:
    """The eight relabellings of a wheel that preserve the cyclic order."""
    out = []
    vals = list(q)
    for r in range(4):
        rot = vals[r:] + vals[:r]
        out.append(EisensteinQuadruple(*rot))
        out.append(EisensteinQuadruple(rot[0], rot[3], rot[2], rot[1]))
    return out


def _in_standard_position(q: Sequence[int]) -> bool:
    return (q[0] - q[1]) % 2 == 0 and (q[2] - q[3]) % 2 == 0


def normalize_root(q: Sequence[int]) -> EisensteinQuadruple:
    """Relabel a reduced quadruple as a root: min first, standard position."""
    g = content(q)
    prim = [x // g for x in q]
    m = min(prim)
    cands = [
        im for im in dihedral_images(prim)
        if im[0] == m and _in_standard_position(im)
    ]
    if not cands:
        raise NotPrimitive(f"{tuple(q)} admits no standard-position labelling")
    best = min(cands)
    return EisensteinQuadruple(*(g * x for x in best))


def reduce(q: Sequence[int]) -> tuple[EisensteinQuadruple, tuple[int, ...]]:
    """Greedy descent to the reduced quadruple, then root relabelling.

    The returned word lists the decreasing swaps in the order applied, so
    applying it to ``q`` gives the reduced quadruple before relabelling.
    """
    cur = EisensteinQuadruple(*(int(x) for x in q))
    _check_range(cur)
    word: list[int] = []
    while True:
        best_i, best_delta = 0, 0
        for i in range(1, 5):
            delta = swap_value(cur, i) - cur[i - 1]
            if delta < best_delta:
                best_i, best_delta = i, delta
        if best_i == 0:
            break
        cur = apply_swap(cur, best_i)
        word.append(best_i)
    return normalize_root(cur), tuple(word)


def root_of(q: Sequence[int]) -> EisensteinQuadruple:
    return reduce(q)[0]


def has_stationary_symmetry(q: Sequence[int]) -> bool:
    a, b, c, d = q
    return a == b + d or c == b + d or b == a + c or d == a + c


def stationary_swaps(q: Sequence[int]) -> tuple[int, ...]:
    return tuple(i for i in range(1, 5) if swap_value(q, i) == q[i - 1])


def is_strip(q: Sequence[int]) -> bool:
    """True for the packing with two parallel lines (two stationary swaps)."""
    return 0 in tuple(q) and len(stationary_swaps(q)) >= 2


def packing_type(q: Sequence[int]) -> int:
    """Residue ``t`` in {1, 3} shared by the odd curvatures modulo 4."""
    odd = {x % 4 for x in q if x % 2}
    if len(odd) != 1:
        raise NotPrimitive(f"{tuple(q)} has odd entries with mixed residues mod 4")
    return odd.pop()


def admissible_residues(t: int) -> frozenset[int]:
    return frozenset({0, 1, 2}) if t == 1 else frozenset({0, 2, 3})


def v2(n: int) -> int:
    if n == 0:
        raise ValueError("v2(0) is undefined")
    n = abs(n)
    return (n & -n).bit_length() - 1


_FORBIDDEN_MOD3 = {(1, 2, 1, 2), (2, 1, 2, 1)}


def tangent_sums(q: Sequence[int]) -> tuple[int, int, int, int]:
    a, b, c, d = q
    return (a + b, b + c, c + d, d + a)


def mod6_sum_ok(s: int) -> bool:
    return s % 6 not in (4, 5)


def v2_sum_ok(s: int) -> bool:
    if s == 0:
        return True
    k = v2(s)
    return k == 0 or k % 2 == 1


@dataclass(frozen=True)
class CongruenceReport:
    type_t: int
    residues_mod4: tuple[int, int, int, int]
    residues_mod3: tuple[int, int, int, int]
    no_1212_mod3: bool
    tangent_sums_mod6_ok: bool
    tangent_sums_v2_ok: bool

    @property
    def all_ok(self) -> bool:
        return self.no_1212_mod3 and self.tangent_sums_mod6_ok and self.tangent_sums_v2_ok


def congruence_predicates(q: Sequence[int]) -> CongruenceReport:
    if not is_primitive(q):
        raise NotPrimitive(f"{tuple(q)} is not primitive")
    sums = tangent_sums(q)
    mod3 = tuple(x % 3 for x in q)
    return CongruenceReport(
        type_t=packing_type(q),
        residues_mod4=tuple(x % 4 for x in q),
        residues_mod3=mod3,
        no_1212_mod3=mod3 not in _FORBIDDEN_MOD3,
        tangent_sums_mod6_ok=all(mod6_sum_ok(s) for s in sums),
        tangent_sums_v2_ok=all(v2_sum_ok(s) for s in sums),
    )


def word_to_str(word: Iterable[int]) -> list[str]:
    return [f"S{i}" for i in word]

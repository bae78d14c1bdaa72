"""Small exact-arithmetic helpers: Kronecker symbol, factorization, omega."""

from __future__ import annotations

from functools import lru_cache


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a/n) for arbitrary integers a, n."""
    if n == 0:
        return 1 if a in (1, -1) else 0
    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -result
    # the (a/2) supplement
    tz = (n & -n).bit_length() - 1
    if tz:
        if a % 2 == 0:
            return 0
        if tz % 2 and a % 8 in (3, 5):
            result = -result
        n >>= tz
    # Jacobi symbol for odd positive n
    a %= n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


@lru_cache(maxsize=4096)
def factorint(n: int) -> dict[int, int]:
    if n < 1:
        raise ValueError(f"factorint expects a positive integer, got {n}")
    from sympy import factorint as _factorint

    return {int(p): int(e) for p, e in _factorint(n).items()}


def prime_divisors(n: int) -> list[int]:
    return sorted(factorint(abs(n))) if abs(n) > 1 else []


def omega(n: int) -> int:
    return len(prime_divisors(n))


def is_square(n: int) -> bool:
    if n < 0:
        return False
    from math import isqrt

    r = isqrt(n)
    return r * r == n

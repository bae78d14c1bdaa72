"""Finite strong-approximation checks for the determinant-one swap group.

Matrices live over Z[omega] / m with omega^2 = omega - 1 and are stored as
8 residues ``(a0, a1, b0, b1, c0, c1, d0, d1)`` for ``[[a, b], [c, d]]``
with ``a = a0 + a1 omega``. The group is generated by T, S and W = VSV
(with V = [[-1, 2 omega], [0, 1]], which has determinant -1), together
with VTV = T^-1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numba as nb
import numpy as np

from .errors import LevelTooHigh

MAX_CLOSURE_LEVEL = 4


@dataclass(frozen=True)
class EisMod:
    """Residue re + im*omega in Z[omega] / modulus."""

    re: int
    im: int
    modulus: int

    def __post_init__(self):
        object.__setattr__(self, "re", self.re % self.modulus)
        object.__setattr__(self, "im", self.im % self.modulus)

    def __add__(self, other: "EisMod") -> "EisMod":
        return EisMod(self.re + other.re, self.im + other.im, self.modulus)

    def __sub__(self, other: "EisMod") -> "EisMod":
        return EisMod(self.re - other.re, self.im - other.im, self.modulus)

    def __mul__(self, other: "EisMod") -> "EisMod":
        a, b, c, d = self.re, self.im, other.re, other.im
        return EisMod(a * c - b * d, a * d + b * c + b * d, self.modulus)

    def __neg__(self) -> "EisMod":
        return EisMod(-self.re, -self.im, self.modulus)

    def is_one(self) -> bool:
        return self.re == 1 % self.modulus and self.im == 0


def EisMod2k(re: int, im: int, k: int) -> EisMod:
    return EisMod(re, im, 2**k)


@dataclass(frozen=True)
class ModMatrix:
    entries: tuple[int, ...]  # 8 residues
    modulus: int

    @classmethod
    def from_residues(cls, res: Sequence[int], modulus: int) -> "ModMatrix":
        return cls(tuple(int(r) % modulus for r in res), modulus)

    def entry(self, i: int) -> EisMod:
        return EisMod(self.entries[2 * i], self.entries[2 * i + 1], self.modulus)

    def __matmul__(self, other: "ModMatrix") -> "ModMatrix":
        a, b, c, d = (self.entry(i) for i in range(4))
        e, f, g, h = (other.entry(i) for i in range(4))
        out = (a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)
        return ModMatrix(tuple(v for z in out for v in (z.re, z.im)), self.modulus)

    def det(self) -> EisMod:
        a, b, c, d = (self.entry(i) for i in range(4))
        return a * d - b * c

    def reduce(self, modulus: int) -> "ModMatrix":
        if self.modulus % modulus:
            raise ValueError(f"{modulus} does not divide {self.modulus}")
        return ModMatrix.from_residues(self.entries, modulus)

    def key(self) -> int:
        return _key_py(self.entries, self.modulus)


def ModMatrix2k(res: Sequence[int], k: int) -> ModMatrix:
    return ModMatrix.from_residues(res, 2**k)


def _key_py(res: Sequence[int], m: int) -> int:
    key = 0
    for r in reversed(res):
        key = key * m + int(r)
    return key


# integer matrices over Z[omega] as 8-tuples
T_INT = (1, 0, 2, 0, 0, 0, 1, 0)
S_INT = (1, 0, 0, 0, 1, 0, 1, 0)
V_INT = (-1, 0, 0, 2, 0, 0, 1, 0)


def _mul_int(x: Sequence[int], y: Sequence[int]) -> tuple[int, ...]:
    big = 1 << 80
    return ModMatrix(tuple(x), big).__matmul__(ModMatrix(tuple(y), big)).entries


def _signed(res: Sequence[int], big: int = 1 << 80) -> tuple[int, ...]:
    return tuple(r - big if r > big // 2 else r for r in res)


W_INT = _signed(_mul_int(_mul_int(V_INT, S_INT), V_INT))
VTV_INT = _signed(_mul_int(_mul_int(V_INT, T_INT), V_INT))


def _inverse_int(g: Sequence[int]) -> tuple[int, ...]:
    # det 1: [[a, b], [c, d]]^-1 = [[d, -b], [-c, a]]
    a0, a1, b0, b1, c0, c1, d0, d1 = g
    return (d0, d1, -b0, -b1, -c0, -c1, a0, a1)


GENERATOR_NAMES = ("T", "S", "W", "VTV", "T^-1", "S^-1", "W^-1", "VTV^-1")


def generator_integers() -> list[tuple[int, ...]]:
    base = [T_INT, S_INT, W_INT, VTV_INT]
    return base + [_inverse_int(g) for g in base]


def generators_mod(modulus: int) -> list[ModMatrix]:
    return [ModMatrix.from_residues(g, modulus) for g in generator_integers()]


def generators(k: int) -> list[ModMatrix]:
    if k < 1:
        raise ValueError(f"level must be at least 1, got {k}")
    return generators_mod(2**k)


# -- numba kernels -----------------------------------------------------------


@nb.njit(cache=True, inline="always")
def _emul(a0, a1, b0, b1):
    return a0 * b0 - a1 * b1, a0 * b1 + a1 * b0 + a1 * b1


@nb.njit(cache=True)
def _mmul(x, y, m, out):
    for r in range(2):
        for c in range(2):
            p0, p1 = _emul(x[4 * r], x[4 * r + 1], y[2 * c], y[2 * c + 1])
            q0, q1 = _emul(x[4 * r + 2], x[4 * r + 3], y[4 + 2 * c], y[4 + 2 * c + 1])
            out[4 * r + 2 * c] = (p0 + q0) % m
            out[4 * r + 2 * c + 1] = (p1 + q1) % m


@nb.njit(cache=True)
def _encode(x, m):
    key = np.int64(0)
    for i in range(7, -1, -1):
        key = key * m + x[i]
    return key


@nb.njit(cache=True)
def _decode(key, m, out):
    for i in range(8):
        out[i] = key % m
        key //= m


@nb.njit(cache=True)
def _closure_kernel(gens, m, capacity):
    size = np.int64(m) ** 8
    seen = np.zeros((size + 7) // 8, dtype=np.uint8)
    queue = np.empty(capacity, dtype=np.int64)
    ident = np.zeros(8, dtype=np.int64)
    ident[0] = 1 % m
    ident[6] = 1 % m
    k0 = _encode(ident, m)
    seen[k0 >> 3] |= np.uint8(1 << (k0 & 7))
    queue[0] = k0
    head = 0
    tail = 1
    cur = np.empty(8, dtype=np.int64)
    nxt = np.empty(8, dtype=np.int64)
    while head < tail:
        _decode(queue[head], m, cur)
        head += 1
        for g in range(gens.shape[0]):
            _mmul(cur, gens[g], m, nxt)
            key = _encode(nxt, m)
            byte = key >> 3
            bit = np.uint8(1 << (key & 7))
            if seen[byte] & bit:
                continue
            seen[byte] |= bit
            if tail >= capacity:
                return queue[:0], False
            queue[tail] = key
            tail += 1
    return queue[:tail].copy(), True


def sl2_order(modulus: int) -> int:
    """|SL(2, Z[omega] / modulus)| for modulus a power of 2 or 3."""
    if modulus & (modulus - 1) == 0:
        k = modulus.bit_length() - 1
        return 60 * 64 ** (k - 1)
    e = round(math.log(modulus, 3))
    if 3**e != modulus:
        raise ValueError(f"modulus {modulus} is not a power of 2 or 3")
    # residue ring of length 2e over F_3; each length step multiplies by 27
    return 24 * 27 ** (2 * e - 1)


@dataclass(frozen=True)
class Closure:
    modulus: int
    keys: np.ndarray  # sorted int64 keys

    @property
    def order(self) -> int:
        return int(self.keys.size)

    def __contains__(self, g) -> bool:
        res = g.entries if isinstance(g, ModMatrix) else g
        key = _key_py([int(r) % self.modulus for r in res], self.modulus)
        i = np.searchsorted(self.keys, key)
        return bool(i < self.keys.size and self.keys[i] == key)

    def elements(self) -> np.ndarray:
        """Residue array of shape (order, 8)."""
        out = np.empty((self.keys.size, 8), dtype=np.int64)
        k = self.keys.copy()
        for i in range(8):
            out[:, i] = k % self.modulus
            k //= self.modulus
        return out


def closure_mod(modulus: int) -> Closure:
    gens = np.array([g.entries for g in generators_mod(modulus)], dtype=np.int64)
    keys, ok = _closure_kernel(gens, modulus, sl2_order(modulus) + 1)
    if not ok:
        raise ArithmeticError("closure exceeded the order of SL(2); generators are not det 1")
    return Closure(modulus, np.sort(keys))


def closure(k: int, max_level: int = MAX_CLOSURE_LEVEL) -> Closure:
    """Image of the group in SL(2, Z[omega] / 2^k), by breadth-first search."""
    if k < 1:
        raise ValueError(f"level must be at least 1, got {k}")
    if k > max_level:
        raise LevelTooHigh(f"full closure mod 2^{k} exceeds the memory budget (max level {max_level})")
    return closure_mod(2**k)


def _fibre_vectors(elements: np.ndarray, k: int) -> np.ndarray:
    # elements mod 2^(k+1) that are I mod 2^k, as their M mod 2 bits
    ident = np.array([1, 0, 0, 0, 0, 0, 1, 0])
    low = elements % (2**k)
    mask = np.all(low == ident % (2**k), axis=1)
    diff = (elements[mask] - ident) % (2 ** (k + 1))
    return diff >> k


def identity_fibre_from_closure(k: int) -> int:
    """Count of closure elements mod 2^(k+1) that are the identity mod 2^k."""
    elems = closure(k + 1).elements()
    return int(_fibre_vectors(elems, k).shape[0])


def _bits(vec: np.ndarray) -> int:
    return int(sum(int(b) << i for i, b in enumerate(vec)))


def f2_rank(vectors) -> int:
    basis: list[int] = []
    for v in vectors:
        for b in basis:
            v = min(v, v ^ b)
        if v:
            basis.append(v)
    return len(basis)


@nb.njit(cache=True)
def _search_kernel(gens, k, n_words, length, seed, tries_per_word):
    """Random words powered into the identity fibre mod 2^k.

    Returns the M mod 2 vectors of I + 2^k M found mod 2^(k+1).
    """
    np.random.seed(seed)
    mod_hi = 2 ** (k + 1)
    mod_lo = 2**k
    out = np.zeros((n_words, 8), dtype=np.int64)
    g = np.empty(8, dtype=np.int64)
    tmp = np.empty(8, dtype=np.int64)
    p = np.empty(8, dtype=np.int64)
    found = 0
    for w in range(n_words):
        g[:] = 0
        g[0] = 1
        g[6] = 1
        # mixed lengths so that odd and even words are both sampled
        for _ in range(length + np.random.randint(length)):
            _mmul(g, gens[np.random.randint(gens.shape[0])], mod_hi, tmp)
            g[:] = tmp
        # smallest n with g^n = I mod 2^k
        p[:] = g
        n = 1
        while n <= tries_per_word:
            ok = True
            for i in range(8):
                want = 1 if (i == 0 or i == 6) else 0
                if p[i] % mod_lo != want:
                    ok = False
                    break
            if ok:
                break
            _mmul(p, g, mod_hi, tmp)
            p[:] = tmp
            n += 1
        if n > tries_per_word:
            continue
        for i in range(8):
            want = 1 if (i == 0 or i == 6) else 0
            out[found, i] = ((p[i] - want) % mod_hi) // mod_lo
        found += 1
    return out[:found]


@nb.njit(cache=True)
def _random_words(gens, modulus, n_words, length, seed):
    np.random.seed(seed)
    out = np.zeros((n_words, 8), dtype=np.int64)
    tmp = np.empty(8, dtype=np.int64)
    for w in range(n_words):
        g = out[w]
        g[0] = 1
        g[6] = 1
        # mixed lengths so that odd and even words are both sampled
        for _ in range(length + np.random.randint(length)):
            _mmul(g, gens[np.random.randint(gens.shape[0])], modulus, tmp)
            g[:] = tmp
    return out


def _np_mul(x: np.ndarray, y: np.ndarray, m: int) -> np.ndarray:
    def em(a0, a1, b0, b1):
        return a0 * b0 - a1 * b1, a0 * b1 + a1 * b0 + a1 * b1

    out = np.empty_like(x)
    for r in range(2):
        for c in range(2):
            p0, p1 = em(x[:, 4 * r], x[:, 4 * r + 1], y[:, 2 * c], y[:, 2 * c + 1])
            q0, q1 = em(x[:, 4 * r + 2], x[:, 4 * r + 3], y[:, 4 + 2 * c], y[:, 5 + 2 * c])
            out[:, 4 * r + 2 * c] = (p0 + q0) % m
            out[:, 4 * r + 2 * c + 1] = (p1 + q1) % m
    return out


def _collision_vectors(words: np.ndarray, k: int) -> np.ndarray:
    # pairs of words agreeing mod 2^k differ by an element of the fibre
    hi, lo = 2 ** (k + 1), 2**k
    keys = np.zeros(words.shape[0], dtype=np.int64)
    for i in range(7, -1, -1):
        keys = keys * lo + words[:, i] % lo
    _, first, inv = np.unique(keys, return_index=True, return_inverse=True)
    base = words[first[inv]]
    inv_base = base[:, [6, 7, 2, 3, 4, 5, 0, 1]].copy()
    inv_base[:, 2:6] = (-inv_base[:, 2:6]) % hi
    prod = _np_mul(words, inv_base, hi)
    ident = np.array([1, 0, 0, 0, 0, 0, 1, 0])
    return ((prod - ident) % hi) // lo


@dataclass(frozen=True)
class FibreSearch:
    k: int
    rank: int
    words: int
    status: str  # PASS, INCONCLUSIVE

    @property
    def size(self) -> int:
        return 2**self.rank


def identity_fibre_search(
    k: int,
    budget: int = 10**6,
    batch: int = 20000,
    length: int = 40,
    seed: int = 1,
) -> FibreSearch:
    """Lower bound for the identity fibre at level k by random word powers.

    Two samplers feed the fibre: powers g^n of random words with
    g^n = I mod 2^k, and quotients g1 g2^-1 of random words that agree
    mod 2^k. The collected I + 2^k M span a subgroup of the fibre (an
    elementary abelian 2-group), so 2^rank is a proven lower bound and
    reaching 64 proves that every lift exists.
    """
    gens = np.array([g.entries for g in generators_mod(2 ** (k + 1))], dtype=np.int64)
    vecs: list[int] = []
    rank = 0
    used = 0
    round_ = 0
    while used < budget and rank < 6:
        n = min(batch, budget - used)
        found = _search_kernel(gens, k, n, length, seed + round_, 1 << 16)
        used += n
        round_ += 1
        vecs.extend(_bits(row) for row in found)
        words = _random_words(gens, 2 ** (k + 1), n, length, seed + round_ + 7919)
        vecs.extend(_bits(row) for row in np.unique(_collision_vectors(words, k), axis=0))
        rank = f2_rank(vecs)
    return FibreSearch(k, rank, used, "PASS" if rank == 6 else "INCONCLUSIVE")


def identity_fibre_count(k: int, **search_kw) -> int:
    """Size of the identity fibre from level k to level k + 1.

    Uses the exact closure when level k + 1 fits in memory and the
    word-search lower bound otherwise.
    """
    if k + 1 <= MAX_CLOSURE_LEVEL:
        return identity_fibre_from_closure(k)
    return identity_fibre_search(k, **search_kw).size


# -- mod 3 -------------------------------------------------------------------

# (x-parts of W, SW, WT, WS mod 3, where Z[omega]/3 = F_3[x]/(x^2), x = 2 omega - 1)
MOD3_WITNESSES = {
    "W": ((2, 2), (0, 1)),
    "SW": ((2, 2), (2, 0)),
    "WT": ((2, 0), (0, 1)),
    "WS": ((1, 2), (1, 1)),
}


def x_part_mod3(g: Sequence[int]) -> tuple[tuple[int, int], tuple[int, int]]:
    """B in g = A + x B over F_3[x]/(x^2); omega = 2 + 2x there."""
    b = [(2 * g[2 * i + 1]) % 3 for i in range(4)]
    return ((b[0], b[1]), (b[2], b[3]))


def mod3_products() -> dict[str, tuple[int, ...]]:
    W, S, T = W_INT, S_INT, T_INT
    return {"W": W, "SW": _signed(_mul_int(S, W)), "WT": _signed(_mul_int(W, T)), "WS": _signed(_mul_int(W, S))}


def sl2_mod3_brute_order() -> int:
    """|SL(2, Z[omega]/3)| by counting all 3^8 matrices."""
    r = np.array(np.meshgrid(*[np.arange(3)] * 8, indexing="ij")).reshape(8, -1)
    a0, a1, b0, b1, c0, c1, d0, d1 = r
    ad0, ad1 = a0 * d0 - a1 * d1, a0 * d1 + a1 * d0 + a1 * d1
    bc0, bc1 = b0 * c0 - b1 * c1, b0 * c1 + b1 * c0 + b1 * c1
    ok = ((ad0 - bc0) % 3 == 1) & ((ad1 - bc1) % 3 == 0)
    return int(ok.sum())


def mod3_surjectivity() -> bool:
    return closure_mod(3).order == sl2_mod3_brute_order()


# -- report --------------------------------------------------------------------


@dataclass(frozen=True)
class LevelReport:
    k: int
    order: int | None
    fibre: int
    method: str


def strong_approx_report(level: int, **search_kw) -> tuple[list[LevelReport], str]:
    """Per-level closure orders and identity fibres, plus the verdict for
    the claim that the bad modulus is 16.
    """
    rows = []
    for k in range(1, level + 1):
        order = closure(k).order if k <= MAX_CLOSURE_LEVEL else None
        if k + 1 <= MAX_CLOSURE_LEVEL:
            rows.append(LevelReport(k, order, identity_fibre_from_closure(k), "closure"))
        else:
            res = identity_fibre_search(k, **search_kw)
            rows.append(LevelReport(k, order, res.size, f"search:{res.status}"))
    fib = {r.k: r.fibre for r in rows}
    if level < 4:
        verdict = "INCONCLUSIVE"
    elif fib[3] < 64 and fib[4] == 64:
        verdict = "PASS"
    elif fib[3] == 64:
        verdict = "FAIL"
    else:
        verdict = "INCONCLUSIVE"
    return rows, verdict

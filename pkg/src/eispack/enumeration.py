"""Curvature enumeration over the swap-group orbit of a root quadruple.

The search walks reduced words of the presented swap group (no repeated
letter, never S1 right after S3, never S2 right after S4). Every node creates
one circle, except that the steps S1 -> S3 and S2 -> S4 recreate the circle
already made by the commuting order, so those nodes are expanded but not
counted. Stationary swaps yield mirror-image circles and are followed, except
in the strip packing where they generate an infinite translation orbit.
"""

from __future__ import annotations

import os
import struct
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Literal, Sequence

import numba as nb
import numpy as np

from .errors import BoundTooSmall, CapacityExceeded, InsufficientData, NotPrimitive
from .quadruples import (
    EisensteinQuadruple,
    as_quadruple,
    is_primitive,
    is_strip,
    packing_type,
)

Moiety = Literal["O", "E", "both"]

MAX_BOUND = 1 << 60
SIEVE_MAGIC = b"EISV1"

# stack/task row layout
_A, _B, _C, _D, _LAST, _COUNTED = range(6)


@nb.njit(cache=True, nogil=True)
def _record(v, pos, bits_o, bits_e, counts, want_counts):
    if v < 0:
        return
    if pos == 1 or pos == 3:
        bits_o[v >> 3] |= np.uint8(1 << (v & 7))
    else:
        bits_e[v >> 3] |= np.uint8(1 << (v & 7))
    if want_counts:
        counts[(pos - 1) & 1, v] += 1


@nb.njit(cache=True, nogil=True)
def _push_children(stack, top, q0, q1, q2, q3, last, N, allow_stationary):
    for i in range(1, 5):
        if i == last or (last == 3 and i == 1) or (last == 4 and i == 2):
            continue
        if i == 1:
            old = q0
            new = 2 * (q3 + q1) - q0
        elif i == 2:
            old = q1
            new = 2 * (q0 + q2) - q1
        elif i == 3:
            old = q2
            new = 2 * (q1 + q3) - q2
        else:
            old = q3
            new = 2 * (q2 + q0) - q3
        if new < old or new > N:
            continue
        if new == old and not allow_stationary:
            continue
        if top >= stack.shape[0]:
            bigger = np.empty((2 * stack.shape[0], 6), dtype=np.int64)
            bigger[: stack.shape[0]] = stack
            stack = bigger
        stack[top, 0] = new if i == 1 else q0
        stack[top, 1] = new if i == 2 else q1
        stack[top, 2] = new if i == 3 else q2
        stack[top, 3] = new if i == 4 else q3
        stack[top, 4] = i
        stack[top, 5] = 0 if (last == 1 and i == 3) or (last == 2 and i == 4) else 1
        top += 1
    return stack, top


@nb.njit(cache=True, nogil=True)
def _run_tasks(tasks, N, bits_o, bits_e, counts, want_counts, allow_stationary):
    """Depth-first traversal of every subtree rooted at a task row."""
    total = 0
    stack = np.empty((4096, 6), dtype=np.int64)
    for t in range(tasks.shape[0]):
        stack[0] = tasks[t]
        top = 1
        while top > 0:
            top -= 1
            q0 = stack[top, 0]
            q1 = stack[top, 1]
            q2 = stack[top, 2]
            q3 = stack[top, 3]
            last = stack[top, 4]
            if stack[top, 5] == 1:
                total += 1
                if last == 1:
                    _record(q0, 1, bits_o, bits_e, counts, want_counts)
                elif last == 2:
                    _record(q1, 2, bits_o, bits_e, counts, want_counts)
                elif last == 3:
                    _record(q2, 3, bits_o, bits_e, counts, want_counts)
                else:
                    _record(q3, 4, bits_o, bits_e, counts, want_counts)
            stack, top = _push_children(stack, top, q0, q1, q2, q3, last, N, allow_stationary)
    return total


def _children_py(row: np.ndarray, N: int, allow_stationary: bool) -> list[np.ndarray]:
    stack = np.empty((8, 6), dtype=np.int64)
    stack, top = _push_children(
        stack, 0, row[0], row[1], row[2], row[3], row[4], N, allow_stationary
    )
    return [stack[k].copy() for k in range(top)]


def split_tasks(root: Sequence[int], N: int, depth: int, allow_stationary: bool) -> list[np.ndarray]:
    """Nodes at ``depth`` below the root plus shallower leaves, as task rows.

    Shallower interior nodes are recorded by the caller through
    ``interior``; see :func:`_plan`.
    """
    return _plan(root, N, depth, allow_stationary)[1]


def _plan(root, N, depth, allow_stationary):
    root_row = np.array([*root, 0, 0], dtype=np.int64)
    interior: list[np.ndarray] = []
    frontier = _children_py(root_row, N, allow_stationary)
    for _ in range(depth - 1):
        nxt = []
        for row in frontier:
            kids = _children_py(row, N, allow_stationary)
            interior.append(row)
            nxt.extend(kids)
        frontier = nxt
        if not frontier:
            break
    return interior, frontier


def iter_wheels(root: Sequence[int], N: int):
    """Yield ``(quadruple, last_swap)`` for every node of the traversal.

    Pure-Python walk with the same rules as :func:`enumerate_packing`; the
    root comes first with ``last_swap = 0``. Meant for invariant checks at
    small N, not for speed.
    """
    q = as_quadruple(root)
    allow_stationary = not is_strip(q)
    stack = [(tuple(q), 0)]
    while stack:
        cur, last = stack.pop()
        yield EisensteinQuadruple(*cur), last
        for i in range(1, 5):
            if i == last or (last == 3 and i == 1) or (last == 4 and i == 2):
                continue
            j = i - 1
            new = 2 * (cur[(j - 1) % 4] + cur[(j + 1) % 4]) - cur[j]
            if new < cur[j] or new > N or (new == cur[j] and not allow_stationary):
                continue
            nxt = list(cur)
            nxt[j] = new
            stack.append((tuple(nxt), i))


@dataclass
class CurvatureSieve:
    """Per-moiety occurrence bitsets over [0, N].

    Bit ``m`` lives in byte ``m >> 3`` at position ``m & 7``. The optional
    ``counts`` array has shape (2, N+1): circles per curvature in O and E.
    """

    N: int
    bits_O: np.ndarray
    bits_E: np.ndarray
    root: EisensteinQuadruple | None = None
    type_t: int | None = None
    total: int | None = None
    counts: np.ndarray | None = field(default=None, repr=False)

    def present(self, moiety: Moiety) -> np.ndarray:
        """Boolean mask of length N+1."""
        if moiety == "O":
            packed = self.bits_O
        elif moiety == "E":
            packed = self.bits_E
        else:
            packed = self.bits_O | self.bits_E
        return np.unpackbits(packed, bitorder="little")[: self.N + 1].astype(bool)

    def has(self, m: int, moiety: Moiety = "both") -> bool:
        if not 0 <= m <= self.N:
            return False
        bit = 1 << (m & 7)
        o = bool(self.bits_O[m >> 3] & bit)
        e = bool(self.bits_E[m >> 3] & bit)
        return {"O": o, "E": e}.get(moiety, o or e)

    def curvatures(self, moiety: Moiety) -> np.ndarray:
        return np.flatnonzero(self.present(moiety))

    def merge(self, other: "CurvatureSieve") -> "CurvatureSieve":
        if other.N != self.N:
            raise ValueError("cannot merge sieves with different bounds")
        counts = None
        if self.counts is not None and other.counts is not None:
            counts = self.counts + other.counts
        total = None
        if self.total is not None and other.total is not None:
            total = self.total + other.total
        return CurvatureSieve(
            self.N, self.bits_O | other.bits_O, self.bits_E | other.bits_E,
            self.root, self.type_t, total, counts,
        )

    def to_bytes(self) -> bytes:
        return SIEVE_MAGIC + struct.pack("<Q", self.N) + self.bits_O.tobytes() + self.bits_E.tobytes()

    def save(self, path: str | os.PathLike) -> None:
        Path(path).write_bytes(self.to_bytes())

    @classmethod
    def from_bytes(cls, data: bytes, root: Sequence[int] | None = None) -> "CurvatureSieve":
        if data[:5] != SIEVE_MAGIC:
            raise ValueError("not an EISV1 sieve file")
        (N,) = struct.unpack("<Q", data[5:13])
        nbytes = _nbytes(N)
        body = np.frombuffer(data, dtype=np.uint8, offset=13)
        if body.size != 2 * nbytes:
            raise ValueError(f"sieve body has {body.size} bytes, expected {2 * nbytes}")
        q = EisensteinQuadruple(*root) if root is not None else None
        t = packing_type(q) if q is not None else None
        return cls(N, body[:nbytes].copy(), body[nbytes:].copy(), q, t)

    @classmethod
    def load(cls, path: str | os.PathLike, root: Sequence[int] | None = None) -> "CurvatureSieve":
        return cls.from_bytes(Path(path).read_bytes(), root)


def _nbytes(N: int) -> int:
    return (N + 1 + 7) // 8


def default_workers() -> int:
    try:
        return max(1, int(os.environ.get("EIS_THREADS", "1")))
    except ValueError:
        return 1


def enumerate_packing(
    root: Sequence[int],
    N: int,
    moiety: Moiety = "both",
    *,
    with_counts: bool = False,
    workers: int | None = None,
    split_depth: int = 8,
) -> CurvatureSieve:
    """Record every curvature <= N in the packing, split by moiety.

    The returned sieve always carries both moieties; ``moiety`` is accepted
    for interface symmetry with the CLI and only validated here.
    """
    if moiety not in ("O", "E", "both"):
        raise ValueError(f"moiety must be O, E or both, got {moiety!r}")
    q = as_quadruple(root)
    if not is_primitive(q):
        raise NotPrimitive(f"{q} is not primitive")
    if N >= MAX_BOUND:
        raise CapacityExceeded(f"bound {N} exceeds the 2^60 working range")
    if N < max(q):
        raise BoundTooSmall(f"bound {N} is below the root entries {tuple(q)}")
    allow_stationary = not is_strip(q)
    nbytes = _nbytes(N)
    workers = workers or default_workers()

    bits_o = np.zeros(nbytes, dtype=np.uint8)
    bits_e = np.zeros(nbytes, dtype=np.uint8)
    counts = np.zeros((2, N + 1 if with_counts else 1), dtype=np.int64)
    total = 0
    for pos, v in enumerate(q, start=1):
        if v <= N:
            total += 1
            _record(v, pos, bits_o, bits_e, counts, with_counts)

    interior, frontier = _plan(q, N, split_depth, allow_stationary)
    if interior:
        # interior rows record themselves but are not re-expanded
        for row in interior:
            if row[_COUNTED]:
                total += 1
                _record(row[row[_LAST] - 1], int(row[_LAST]), bits_o, bits_e, counts, with_counts)
    tasks = np.array(frontier, dtype=np.int64).reshape(-1, 6)

    if workers == 1 or len(tasks) < 2:
        total += _run_tasks(tasks, N, bits_o, bits_e, counts, with_counts, allow_stationary)
    else:
        chunks = [tasks[k::workers] for k in range(workers)]

        def job(chunk):
            bo = np.zeros(nbytes, dtype=np.uint8)
            be = np.zeros(nbytes, dtype=np.uint8)
            cc = np.zeros((2, N + 1 if with_counts else 1), dtype=np.int64)
            n = _run_tasks(chunk, N, bo, be, cc, with_counts, allow_stationary)
            return n, bo, be, cc

        with ThreadPoolExecutor(max_workers=workers) as pool:
            for n, bo, be, cc in pool.map(job, chunks):
                total += n
                bits_o |= bo
                bits_e |= be
                if with_counts:
                    counts += cc

    return CurvatureSieve(
        N, bits_o, bits_e, q, packing_type(q), total, counts if with_counts else None
    )


def count_circles(root: Sequence[int], N: int) -> int:
    """Number of circles of curvature at most N (one per circle, not per value).

    For the strip packing each translation class is counted once.
    """
    return int(enumerate_packing(root, N).total)


@dataclass(frozen=True)
class GrowthFit:
    delta: float
    c: float
    r2: float
    bins: int


def fit_growth(root: Sequence[int], N: int, bins: int = 1000) -> GrowthFit:
    """OLS fit of log(#circles with curvature <= X) against log X."""
    if N < 10**4:
        raise InsufficientData(f"growth fits need N >= 10^4, got {N}")
    sieve = enumerate_packing(root, N, with_counts=True)
    cum = np.cumsum(sieve.counts.sum(axis=0))
    # the negative outer circle is not in the per-curvature histogram
    cum = cum + sum(1 for v in sieve.root if v < 0)
    edges = np.linspace(0, N, bins + 1)[1:].astype(np.int64)
    hist = np.diff(np.concatenate(([0], cum[edges])))
    nonempty = hist > 0
    if int(nonempty.sum()) < 10:
        raise InsufficientData(f"only {int(nonempty.sum())} nonempty bins")
    x = np.log(edges[nonempty].astype(float))
    y = np.log(cum[edges[nonempty]].astype(float))
    design = np.column_stack([x, np.ones_like(x)])
    (delta, logc), *_ = np.linalg.lstsq(design, y, rcond=None)
    resid = y - design @ np.array([delta, logc])
    r2 = 1.0 - float(resid @ resid) / float(((y - y.mean()) ** 2).sum())
    return GrowthFit(float(delta), float(np.exp(logc)), r2, bins)

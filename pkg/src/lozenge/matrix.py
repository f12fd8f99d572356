"""Bi-adjacency and lattice path matrices with exact integer linear algebra."""

from __future__ import annotations

import csv
import io
import itertools
from dataclasses import dataclass, field
from math import comb, prod
from typing import Any, Sequence

import numpy as np
from sympy import factorint

from .core import Monomial, TriRegion, rotate_monomial
from .errors import CapExceededError, PreconditionError, default_cap
from .tiling import lattice_points

# Largest prime below 2**31: products of two residues still fit in int64.
_BIG_PRIME = 2_147_483_647
_INT64_MODULUS_LIMIT = 3_000_000_000


@dataclass(frozen=True)
class LabeledIntMatrix:
    rows: tuple[Any, ...]
    cols: tuple[Any, ...]
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if len(self.entries) != len(self.rows):
            raise PreconditionError("row count does not match the row labels")
        for r in self.entries:
            if len(r) != len(self.cols):
                raise PreconditionError("column count does not match the column labels")

    @classmethod
    def build(cls, rows: Sequence[Any], cols: Sequence[Any], entries) -> "LabeledIntMatrix":
        return cls(tuple(rows), tuple(cols), tuple(tuple(int(v) for v in r) for r in entries))

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.rows), len(self.cols))

    @property
    def is_square(self) -> bool:
        return len(self.rows) == len(self.cols)

    def array(self) -> np.ndarray:
        out = np.empty(self.shape, dtype=object)
        for i, r in enumerate(self.entries):
            out[i, :] = r
        return out

    def transpose(self) -> "LabeledIntMatrix":
        return LabeledIntMatrix(self.cols, self.rows, tuple(zip(*self.entries)) if self.rows else ())

    def submatrix(self, drop_rows=(), drop_cols=()) -> "LabeledIntMatrix":
        dr, dc = set(drop_rows), set(drop_cols)
        ri = [i for i, lab in enumerate(self.rows) if lab not in dr]
        ci = [j for j, lab in enumerate(self.cols) if lab not in dc]
        return LabeledIntMatrix(tuple(self.rows[i] for i in ri), tuple(self.cols[j] for j in ci),
                                tuple(tuple(self.entries[i][j] for j in ci) for i in ri))

    def to_grid(self) -> str:
        """Plain text grid; single-digit matrices are printed without separators."""
        if not self.entries:
            return ""
        if all(0 <= v <= 9 for r in self.entries for v in r):
            return "\n".join("".join(str(v) for v in r) for r in self.entries)
        width = max(len(str(v)) for r in self.entries for v in r)
        return "\n".join(" ".join(str(v).rjust(width) for v in r) for r in self.entries)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow([""] + [str(c) for c in self.cols])
        for lab, r in zip(self.rows, self.entries):
            writer.writerow([str(lab)] + list(r))
        return buf.getvalue()


def z_matrix(region: TriRegion) -> LabeledIntMatrix:
    """Rows are downward triangles, columns upward ones, both in increasing reverse-lex order."""
    ups = region.ups
    col = {u: j for j, u in enumerate(ups)}
    entries = []
    for dn in region.downs:
        row = [0] * len(ups)
        for u in region.neighbours(dn):
            row[col[u]] = 1
        entries.append(row)
    return LabeledIntMatrix.build(region.downs, ups, entries)


def path_count(start: tuple[int, int], end: tuple[int, int]) -> int:
    """Number of east/south lattice paths between orthogonalised coordinates."""
    (u, v), (x, y) = start, end
    right, down = x - u, v - y
    if right < 0 or down < 0:
        return 0
    return comb(right + down, right)


def n_matrix(region: TriRegion) -> LabeledIntMatrix:
    """Lattice path matrix: rows are start vertices, columns end vertices."""
    pts = lattice_points(region)
    entries = [[path_count(a.coord, e.coord) for e in pts.E] for a in pts.A]
    return LabeledIntMatrix.build([a.label for a in pts.A], [e.label for e in pts.E], entries)


def _as_object_array(M) -> np.ndarray:
    if isinstance(M, LabeledIntMatrix):
        return M.array()
    arr = np.array(M, dtype=object)
    if arr.size == 0:
        n = len(M)
        return np.empty((n, len(M[0]) if n else 0), dtype=object)
    if arr.ndim != 2:
        raise PreconditionError("expected a two-dimensional matrix")
    return arr


def det_exact(M) -> int:
    """Determinant by fraction-free (Bareiss) elimination with exact division."""
    a = _as_object_array(M).copy()
    n, m = a.shape
    if n != m:
        raise PreconditionError(f"determinant needs a square matrix, got {n}x{m}")
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k, k] == 0:
            nz = np.nonzero(a[k + 1:, k] != 0)[0]
            if len(nz) == 0:
                return 0
            i = k + 1 + int(nz[0])
            a[[k, i]] = a[[i, k]]
            sign = -sign
        piv = a[k, k]
        block = a[k + 1:, k + 1:] * piv - np.outer(a[k + 1:, k], a[k, k + 1:])
        if prev != 1:
            block //= prev
        a[k + 1:, k + 1:] = block
        prev = piv
    return sign * int(a[n - 1, n - 1])


def _ryser(a: list[list[int]]) -> int:
    """Ryser's formula, visiting column subsets in Gray-code order."""
    n = len(a)
    sums = [0] * n
    total = 0
    parity = 1
    for step in range(1, 1 << n):
        j = (step & -step).bit_length() - 1
        gray = step ^ (step >> 1)
        delta = 1 if gray >> j & 1 else -1
        for i in range(n):
            sums[i] += delta * a[i][j]
        parity = -parity
        total += parity * prod(sums)
    return -total if n % 2 else total


def _profile_permanent(a: list[list[int]], cap: int) -> int:
    """Row-by-row sum over partial matchings keyed by the set of live used columns.

    Columns are retired once their last nonzero row has been processed, so the
    state space stays small for banded matrices such as bi-adjacency matrices.
    """
    n = len(a)
    last = [-1] * n
    for i, r in enumerate(a):
        for j, v in enumerate(r):
            if v:
                last[j] = i
    if min(last) < 0:
        return 0
    retire: dict[int, list[int]] = {}
    for j, i in enumerate(last):
        retire.setdefault(i, []).append(j)
    states: dict[int, int] = {0: 1}
    for i, r in enumerate(a):
        nz = [(j, v) for j, v in enumerate(r) if v]
        nxt: dict[int, int] = {}
        for mask, count in states.items():
            for j, v in nz:
                bit = 1 << j
                if mask & bit:
                    continue
                key = mask | bit
                nxt[key] = nxt.get(key, 0) + count * v
        done = retire.get(i, [])
        if done:
            need = sum(1 << j for j in done)
            states = {}
            for mask, count in nxt.items():
                if mask & need == need:
                    key = mask & ~need
                    states[key] = states.get(key, 0) + count
        else:
            states = nxt
        if len(states) > cap:
            raise CapExceededError(f"permanent state space exceeded {cap}")
        if not states:
            return 0
    return states.get(0, 0)


RYSER_MAX = 20


def permanent_exact(M, cap: int | None = None) -> int:
    """Exact permanent: Ryser for small dense input, column-profile recursion otherwise."""
    a = _as_object_array(M)
    n, m = a.shape
    if n != m:
        raise PreconditionError(f"permanent needs a square matrix, got {n}x{m}")
    if n == 0:
        return 1
    rows = [[int(v) for v in r] for r in a]
    density = sum(1 for r in rows for v in r if v) / (n * n)
    if n <= RYSER_MAX and (density > 0.5 or n <= 12):
        return _ryser(rows)
    return _profile_permanent(rows, default_cap() if cap is None else cap)


def _rank_mod_p_int64(a: np.ndarray, p: int) -> tuple[int, list[int]]:
    a = a.copy()
    n, m = a.shape
    rank = 0
    pivots = []
    for c in range(m):
        if rank == n:
            break
        nz = np.nonzero(a[rank:, c])[0]
        if len(nz) == 0:
            continue
        i = rank + int(nz[0])
        if i != rank:
            a[[rank, i]] = a[[i, rank]]
        inv = pow(int(a[rank, c]), -1, p)
        a[rank] = a[rank] * inv % p
        others = np.nonzero(a[:, c])[0]
        others = others[others != rank]
        if len(others):
            a[others] = (a[others] - np.outer(a[others, c], a[rank])) % p
        pivots.append(c)
        rank += 1
    return rank, pivots


def _rank_mod_p_object(a: np.ndarray, p: int) -> tuple[int, list[int]]:
    a = a.copy()
    n, m = a.shape
    rank = 0
    pivots = []
    for c in range(m):
        if rank == n:
            break
        nz = [i for i in range(rank, n) if a[i, c] % p]
        if not nz:
            continue
        i = nz[0]
        if i != rank:
            a[[rank, i]] = a[[i, rank]]
        inv = pow(int(a[rank, c]), -1, p)
        a[rank] = a[rank] * inv % p
        for i in range(n):
            if i != rank and a[i, c] % p:
                a[i] = (a[i] - a[i, c] * a[rank]) % p
        pivots.append(c)
        rank += 1
    return rank, pivots


def rank_mod_p(M, p: int) -> int:
    """Rank over the prime field with ``p`` elements."""
    return _rank_mod_p(M, p)[0]


def _rank_mod_p(M, p: int) -> tuple[int, list[int]]:
    arr = _as_object_array(M)
    if arr.size == 0:
        return 0, []
    if p < _INT64_MODULUS_LIMIT:
        return _rank_mod_p_int64(np.array(arr % p, dtype=np.int64), p)
    return _rank_mod_p_object(arr % p, p)


def rank_exact(M) -> int:
    """Rank over the rationals (fraction-free echelon form, after a cheap modular shortcut)."""
    arr = _as_object_array(M)
    n, m = arr.shape
    if arr.size == 0:
        return 0
    r, _ = _rank_mod_p(arr, _BIG_PRIME)
    if r == min(n, m):
        return r
    a = arr.copy()
    rank = 0
    prev = 1
    for c in range(m):
        if rank == n:
            break
        nz = np.nonzero(a[rank:, c] != 0)[0]
        if len(nz) == 0:
            continue
        i = rank + int(nz[0])
        if i != rank:
            a[[rank, i]] = a[[i, rank]]
        piv = a[rank, c]
        block = a[rank + 1:, c:] * piv - np.outer(a[rank + 1:, c], a[rank, c:])
        if prev != 1:
            block //= prev
        a[rank + 1:, c:] = block
        prev = piv
        rank += 1
    return rank


def _local_divisor_valuation(a: np.ndarray, p: int, bound: int) -> int:
    """Sum of p-adic valuations of the elementary divisors of a full-row-rank matrix.

    Works modulo ``p**(bound + 1)``; valid whenever the true sum is at most ``bound``.
    """
    modulus = p ** (bound + 1)
    use_int = modulus < _INT64_MODULUS_LIMIT
    a = np.array(a % modulus, dtype=np.int64 if use_int else object)
    total = 0
    while a.shape[0]:
        best = None
        for v in range(bound + 1):
            scale = p ** v
            hits = np.argwhere((a % (scale * p) != 0) & (a % scale == 0)) if use_int else [
                (i, j) for i in range(a.shape[0]) for j in range(a.shape[1])
                if a[i, j] % (scale * p) and a[i, j] % scale == 0]
            if len(hits):
                best = (int(hits[0][0]), int(hits[0][1]), v)
                break
        if best is None:
            return bound + 1
        i, j, v = best
        total += v
        if total > bound:
            return total
        scale = p ** v
        unit_inv = pow(int(a[i, j]) // scale, -1, modulus)
        pivot_row = a[i] * unit_inv % modulus
        factors = a[:, j] // scale
        a = (a - np.outer(factors, pivot_row)) % modulus
        a = np.delete(np.delete(a, i, axis=0), j, axis=1)
    return total


def factorize(n: int) -> dict[int, int]:
    """Prime factorisation of ``|n|`` (empty for 0 and 1)."""
    n = abs(int(n))
    if n <= 1:
        return {}
    return {int(p): int(e) for p, e in sorted(factorint(n).items())}


def format_factorization(factors: dict[int, int]) -> str:
    if not factors:
        return "1"
    return "*".join(str(p) if e == 1 else f"{p}^{e}" for p, e in factors.items())


@dataclass(frozen=True)
class RankProfile:
    shape: tuple[int, int]
    rank: int
    maximal: bool
    minor_gcd: int | None
    factorization: dict[int, int] = field(default_factory=dict)
    prime_ranks: dict[int, int] = field(default_factory=dict)

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(self.factorization)


def maximal_minor_gcd(M) -> int:
    """gcd of all maximal minors (0 when the rank is not maximal)."""
    arr = _as_object_array(M)
    n, m = arr.shape
    if n > m:
        arr = arr.T.copy()
        n, m = m, n
    if n == 0:
        return 1
    if n == m:
        return abs(det_exact(arr))
    r, piv = _rank_mod_p(arr, _BIG_PRIME)
    if r < n:
        if rank_exact(arr) < n:
            return 0
        # Unlucky modulus: find independent columns exactly.
        piv = _exact_pivot_columns(arr)
    base = abs(det_exact(arr[:, piv]))
    g = 1
    for p, e in factorize(base).items():
        if e == 1:
            v = 1 if rank_mod_p(arr, p) < n else 0
        else:
            v = _local_divisor_valuation(arr, p, e)
        g *= p ** v
    return g


def _exact_pivot_columns(arr: np.ndarray) -> list[int]:
    chosen: list[int] = []
    for c in range(arr.shape[1]):
        if rank_exact(arr[:, chosen + [c]]) == len(chosen) + 1:
            chosen.append(c)
        if len(chosen) == arr.shape[0]:
            break
    return chosen


def rank_profile(M, primes: Sequence[int] | None = None) -> RankProfile:
    arr = _as_object_array(M)
    n, m = arr.shape
    rank = rank_exact(arr)
    maximal = rank == min(n, m)
    g = maximal_minor_gcd(arr) if maximal else None
    factors = factorize(g) if g else {}
    pr = {int(p): rank_mod_p(arr, int(p)) for p in (primes or [])}
    return RankProfile((n, m), rank, maximal, g, factors, pr)


@dataclass(frozen=True)
class MinorWitness:
    removed: tuple[Monomial, ...]
    value: int


def maximal_minors(region: TriRegion, restricted: bool = False, cap: int | None = None,
                   lattice_rotation: int = 0) -> list[MinorWitness]:
    """Signed determinants of every balanced subregion obtained by deleting surplus triangles.

    For an up-heavy region upward triangles are deleted, for a down-heavy one
    downward triangles.  Restricted mode only deletes triangles carrying a
    lattice start (up) or end (down) vertex.  Each rotation of the region
    carries its own lattice; ``lattice_rotation`` picks which one decides the
    restricted candidates.  Witness labels always refer to ``region`` itself.
    """
    cap = default_cap() if cap is None else cap
    k = region.balance
    if k == 0:
        return [MinorWitness((), det_exact(z_matrix(region)))]
    Z = z_matrix(region)
    pts = lattice_points(region.rotate(lattice_rotation))
    back = -lattice_rotation
    if k > 0:
        pool = list(region.ups)
        if restricted:
            starts = {rotate_monomial(v.label, back) for v in pts.A}
            pool = [u for u in pool if u in starts]
    else:
        pool = list(region.downs)
        if restricted:
            # An end vertex sits on the edge shared with the (absent) up label.
            ends = {rotate_monomial(v.label, back) for v in pts.E}
            z = rotate_monomial(Monomial(0, 0, 1), back)
            pool = [dn for dn in pool if dn * z in ends]
    if comb(len(pool), abs(k)) > cap:
        raise CapExceededError(f"{comb(len(pool), abs(k))} minors exceed the cap {cap}")
    out = []
    for removed in itertools.combinations(pool, abs(k)):
        sub = Z.submatrix(drop_cols=removed) if k > 0 else Z.submatrix(drop_rows=removed)
        out.append(MinorWitness(tuple(removed), det_exact(sub)))
    return out


__all__ = [
    "LabeledIntMatrix",
    "MinorWitness",
    "RankProfile",
    "det_exact",
    "factorize",
    "format_factorization",
    "maximal_minor_gcd",
    "maximal_minors",
    "n_matrix",
    "path_count",
    "permanent_exact",
    "rank_exact",
    "rank_mod_p",
    "rank_profile",
    "z_matrix",
]

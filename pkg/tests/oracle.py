"""Independent reference implementations used by the tests.

Nothing here imports the package: monomials are plain tuples, determinants and
ranks come from sympy, and tilings are counted by brute-force matching.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations
from math import gcd

import sympy


def divides(g, m):
    return all(a <= b for a, b in zip(g, m))


def in_ideal(m, gens):
    return any(divides(g, m) for g in gens)


def monomials(n):
    return [(i, j, n - i - j) for i in range(n + 1) for j in range(n + 1 - i)]


def revlex_key(m):
    # graded reverse lex with x > y > z: a larger z exponent makes a monomial smaller
    return tuple(-e for e in reversed(m))


def region(gens, d):
    """Present (ups, downs) of T_d(I), in increasing reverse-lex order."""
    ups = sorted((m for m in monomials(d - 1) if not in_ideal(m, gens)), key=revlex_key)
    downs = sorted((m for m in monomials(d - 2) if not in_ideal(m, gens)), key=revlex_key)
    return ups, downs


def biadjacency(ups, downs):
    col = {u: j for j, u in enumerate(ups)}
    rows = []
    for (a, b, c) in downs:
        row = [0] * len(ups)
        for u in ((a + 1, b, c), (a, b + 1, c), (a, b, c + 1)):
            if u in col:
                row[col[u]] = 1
        rows.append(row)
    return rows


def z_of(gens, d):
    ups, downs = region(gens, d)
    return biadjacency(ups, downs)


def det(rows):
    if not rows:
        return 1
    return int(sympy.Matrix(rows).det(method="berkowitz"))


def rank(rows):
    if not rows or not rows[0]:
        return 0
    return int(sympy.Matrix(rows).rank())


def count_matchings(rows):
    """Number of perfect matchings of a square 0/1 matrix (permanent), memoised on used columns."""
    n = len(rows)
    if n == 0:
        return 1
    nbrs = [tuple(j for j, v in enumerate(r) if v) for r in rows]

    @lru_cache(maxsize=None)
    def go(i, used):
        if i == n:
            return 1
        return sum(go(i + 1, used | (1 << j)) for j in nbrs[i] if not used >> j & 1)

    return go(0, 0)


def permanent(rows):
    """Permanent of an arbitrary integer matrix by expansion over used columns."""
    n = len(rows)

    @lru_cache(maxsize=None)
    def go(i, used):
        if i == n:
            return 1
        return sum(v * go(i + 1, used | (1 << j)) for j, v in enumerate(rows[i]) if v and not used >> j & 1)

    return go(0, 0)


def maximal_minor_gcd(rows):
    n, m = len(rows), len(rows[0])
    if n > m:
        rows = [list(c) for c in zip(*rows)]
        n, m = m, n
    g = 0
    for cols in combinations(range(m), n):
        g = gcd(g, det([[r[c] for c in cols] for r in rows]))
    return abs(g)


def hilbert(gens, j):
    return sum(1 for m in monomials(j) if not in_ideal(m, gens))


def prime_factors(n):
    return sorted(sympy.factorint(abs(n))) if n not in (0, 1, -1) else []


def wlp_failing_chars(gens, top):
    """Failing characteristics (0 for Q) from every degree map, by sympy rank and minors."""
    chars = set()
    for j in range(1, top + 1):
        rows = z_of(gens, j + 1)
        if not rows or not rows[0]:
            continue
        full = min(len(rows), len(rows[0]))
        if rank(rows) < full:
            chars.add(0)
            continue
        chars.update(prime_factors(maximal_minor_gcd(rows)))
    return chars

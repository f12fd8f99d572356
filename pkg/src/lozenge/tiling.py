"""Lozenge tilings: tileability, a canonical tiling, enumeration and the two tiling signs."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching

from .core import (
    VARIABLES,
    X,
    Y,
    Z,
    Monomial,
    TriRegion,
    floating_corners,
    ideal_of_region,
    monomial_subregion,
    monomials_of_degree,
    parse_monomial,
)
from .errors import CapExceededError, PreconditionError, default_cap


class Lozenge(NamedTuple):
    down: Monomial
    up: Monomial

    @property
    def direction(self) -> str:
        """Which variable joins the pair: ``x`` (vertical), ``y`` (left) or ``z`` (right)."""
        q = self.up / self.down
        return "xyz"[q.index(1)]


@dataclass(frozen=True)
class Tiling:
    lozenges: frozenset[Lozenge]

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[Monomial, Monomial]]) -> "Tiling":
        return cls(frozenset(Lozenge(dn, up) for dn, up in pairs))

    def partner_of_down(self) -> dict[Monomial, Monomial]:
        return {lz.down: lz.up for lz in self.lozenges}

    def partner_of_up(self) -> dict[Monomial, Monomial]:
        return {lz.up: lz.down for lz in self.lozenges}

    def sorted(self) -> list[Lozenge]:
        return sorted(self.lozenges, key=lambda lz: lz.down.revlex_key())

    def serialize(self) -> list[str]:
        """``down-label:up-label`` pairs in reverse-lex order of the down label."""
        return [f"{lz.down}:{lz.up}" for lz in self.sorted()]

    @classmethod
    def parse(cls, pairs: Iterable[str]) -> "Tiling":
        out = []
        for item in pairs:
            dn, _, up = item.partition(":")
            out.append((parse_monomial(dn), parse_monomial(up)))
        return cls.from_pairs(out)

    def __len__(self) -> int:
        return len(self.lozenges)


def check_tiling(region: TriRegion, tiling: Tiling) -> None:
    """Raise unless ``tiling`` covers every present triangle exactly once with adjacent pairs."""
    downs = [lz.down for lz in tiling.lozenges]
    ups = [lz.up for lz in tiling.lozenges]
    if len(set(downs)) != len(downs) or len(set(ups)) != len(ups):
        raise PreconditionError("a triangle is covered twice")
    if set(downs) != region.down or set(ups) != region.up:
        raise PreconditionError("the lozenges do not cover the region exactly")
    for lz in tiling.lozenges:
        if lz.up not in (lz.down * X, lz.down * Y, lz.down * Z):
            raise PreconditionError(f"{lz.down} and {lz.up} are not adjacent")


def is_tiling(region: TriRegion, tiling: Tiling) -> bool:
    try:
        check_tiling(region, tiling)
    except PreconditionError:
        return False
    return True


def _adjacency(region: TriRegion) -> tuple[list[list[int]], dict[Monomial, int]]:
    col = {u: j for j, u in enumerate(region.ups)}
    rows = [[col[u] for u in (dn * X, dn * Y, dn * Z) if u in col] for dn in region.downs]
    return rows, col


def maximum_matching_size(region: TriRegion) -> int:
    """Size of a maximum down/up matching of the adjacency graph."""
    rows, _ = _adjacency(region)
    if not rows or not region.up:
        return 0
    indptr = np.cumsum([0] + [len(r) for r in rows])
    indices = np.array([j for r in rows for j in r], dtype=np.int32)
    graph = csr_matrix((np.ones(len(indices), dtype=np.int8), indices, indptr),
                       shape=(len(rows), len(region.up)))
    match = maximum_bipartite_matching(graph, perm_type="column")
    return int(np.count_nonzero(match >= 0))


def has_perfect_matching(region: TriRegion) -> bool:
    if not region.is_balanced:
        return False
    return region.is_empty or maximum_matching_size(region) == len(region.down)


def nabla_heavy_subregions(region: TriRegion) -> list[Monomial]:
    """Monomials whose monomial subregion has more downward than upward triangles."""
    out = []
    for k in range(region.d):
        for m in monomials_of_degree(k):
            sub = monomial_subregion(region, m)
            if sub.balance < 0:
                out.append(m)
    return out


def tileable_by_subregions(region: TriRegion) -> bool:
    """Balanced with no downward-heavy monomial subregion (valid for triangular regions)."""
    return region.is_balanced and not nabla_heavy_subregions(region)


def is_tileable(region: TriRegion) -> bool:
    if region.is_empty:
        return True
    return has_perfect_matching(region)


def _row_positions(region: TriRegion, row: int) -> dict[int, tuple[str, Monomial]]:
    """Present triangles of one row keyed by horizontal slot (up ``z^c`` at ``2c``, down at ``2c + 1``)."""
    slots: dict[int, tuple[str, Monomial]] = {}
    for u in region.up:
        if u[0] == row:
            slots[2 * u[2]] = ("up", u)
    for dn in region.down:
        if dn[0] == row:
            slots[2 * dn[2] + 1] = ("down", dn)
    return slots


def _segments(slots: dict[int, tuple[str, Monomial]]) -> list[list[tuple[str, Monomial]]]:
    out: list[list[tuple[str, Monomial]]] = []
    prev = None
    for pos in sorted(slots):
        if prev is None or pos != prev + 1:
            out.append([])
        out[-1].append(slots[pos])
        prev = pos
    return out


def _pair_horizontally(seq: list[tuple[str, Monomial]], skip: int | None) -> list[Lozenge] | None:
    """Pair the ups of a row segment with neighbouring downs, leaving out index ``skip``."""
    items = [t for i, t in enumerate(seq) if i != skip]
    out = []
    i = 0
    while i < len(items):
        if i + 1 >= len(items):
            return None
        (k1, m1), (k2, m2) = items[i], items[i + 1]
        if k1 == k2:
            return None
        dn, up = (m1, m2) if k1 == "down" else (m2, m1)
        if up not in (dn * Y, dn * Z):
            return None
        out.append(Lozenge(dn, up))
        i += 2
    return out


def canonical_tiling(region: TriRegion) -> Tiling | None:
    """Deterministic tiling built row by row from the bottom edge, or ``None``.

    Along a row, ups can only pair within the row.  A segment with one more
    down than up sends exactly one down upward; the left-most choice that still
    leaves a tileable remainder is taken.
    """
    if not is_tileable(region):
        return None
    remaining = region
    lozenges: list[Lozenge] = []
    for row in range(region.d):
        for seq in _segments(_row_positions(remaining, row)):
            n_up = sum(1 for k, _ in seq if k == "up")
            n_down = len(seq) - n_up
            if n_up == n_down:
                chosen = _pair_horizontally(seq, None)
            elif n_down == n_up + 1:
                chosen = None
                for idx in range(0, len(seq), 2):
                    dn = seq[idx][1]
                    if dn * X not in remaining.up:
                        continue
                    trial = _pair_horizontally(seq, idx)
                    if trial is None:
                        continue
                    trial.append(Lozenge(dn, dn * X))
                    rest = remaining.without(up=[lz.up for lz in trial], down=[lz.down for lz in trial])
                    if has_perfect_matching(rest):
                        chosen = trial
                        break
            else:
                chosen = None
            if chosen is None:
                raise AssertionError("row construction failed on a tileable region")
            lozenges.extend(chosen)
            remaining = remaining.without(up=[lz.up for lz in chosen], down=[lz.down for lz in chosen])
    return Tiling(frozenset(lozenges))


def iter_tilings(region: TriRegion):
    """Yield tilings as tuples of up-indices (one per down, rows in reverse-lex order)."""
    if not region.is_balanced:
        return
    rows, _ = _adjacency(region)
    n = len(rows)
    if n == 0:
        yield ()
        return
    last = [-1] * len(region.up)
    for i, r in enumerate(rows):
        for j in r:
            last[j] = max(last[j], i)
    if min(last) < 0:
        return
    used = [False] * len(region.up)
    choice = [0] * n

    def rec(i: int):
        if i == n:
            yield tuple(choice)
            return
        opts = rows[i]
        for j in opts:
            if used[j]:
                continue
            if any(not used[k] and k != j and last[k] == i for k in opts):
                continue
            used[j] = True
            choice[i] = j
            yield from rec(i + 1)
            used[j] = False

    yield from rec(0)


def enumerate_tilings(region: TriRegion, cap: int | None = None) -> list[Tiling]:
    """All tilings by backtracking; raises :class:`CapExceededError` past ``cap``."""
    cap = default_cap() if cap is None else cap
    downs, ups = region.downs, region.ups
    out = []
    for choice in iter_tilings(region):
        if len(out) >= cap:
            raise CapExceededError(f"more than {cap} tilings")
        out.append(Tiling(frozenset(Lozenge(downs[i], ups[j]) for i, j in enumerate(choice))))
    return out


def count_tilings(region: TriRegion, cap: int | None = None) -> int:
    cap = default_cap() if cap is None else cap
    count = 0
    for _ in iter_tilings(region):
        count += 1
        if count > cap:
            raise CapExceededError(f"more than {cap} tilings")
    return count


def permutation_sign(perm: list[int] | tuple[int, ...]) -> int:
    seen = [False] * len(perm)
    sign = 1
    for start in range(len(perm)):
        if seen[start]:
            continue
        length = 0
        k = start
        while not seen[k]:
            seen[k] = True
            k = perm[k]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def pm_sign(region: TriRegion, tiling: Tiling) -> int:
    """Signature of the down-to-up bijection in reverse-lex row and column order."""
    if not region.is_balanced:
        raise PreconditionError("the perfect matching sign needs a balanced region")
    check_tiling(region, tiling)
    col = {u: j for j, u in enumerate(region.ups)}
    partner = tiling.partner_of_down()
    return permutation_sign([col[partner[dn]] for dn in region.downs])


@dataclass(frozen=True)
class LatticeVertex:
    label: Monomial
    coord: tuple[int, int]


@dataclass(frozen=True)
class LatticePoints:
    A: tuple[LatticeVertex, ...]
    E: tuple[LatticeVertex, ...]


def vertex_coord(label: Monomial, d: int) -> tuple[int, int]:
    """Orthogonalised coordinate ``(d - 1 - b, a)`` of the vertex labelled ``x^a y^b z^c``."""
    return (d - 1 - label[1], label[0])


def lattice_points(region: TriRegion) -> LatticePoints:
    """Start vertices (only on ups) and end vertices (only on downs), increasing reverse-lex."""
    d = region.d
    starts = [u for u in region.ups if u[2] == 0 or (u / Z) not in region.down]
    ends = [dn * Z for dn in region.downs if dn * Z not in region.up]
    ends.sort(key=Monomial.revlex_key)
    return LatticePoints(tuple(LatticeVertex(m, vertex_coord(m, d)) for m in starts),
                         tuple(LatticeVertex(m, vertex_coord(m, d)) for m in ends))


def tiling_to_paths(region: TriRegion, tiling: Tiling) -> list[list[tuple[int, int]]]:
    """Non-intersecting lattice paths read off a tiling, one per start vertex."""
    check_tiling(region, tiling)
    d = region.d
    partner = tiling.partner_of_up()
    paths = []
    for start in lattice_points(region).A:
        u = start.label
        path = [vertex_coord(u, d)]
        while True:
            dn = partner[u]
            if dn * Z == u:
                raise AssertionError("path entered a lozenge through its inner edge")
            nxt = dn * Z
            path.append(vertex_coord(nxt, d))
            if nxt not in region.up:
                break
            u = nxt
        paths.append(path)
    return paths


def lp_sign(region: TriRegion, tiling: Tiling) -> int:
    """Signature of ``i -> lambda(i)`` where the path from ``A_i`` ends at ``E_lambda(i)``."""
    if not region.is_balanced:
        raise PreconditionError("the lattice path sign needs a balanced region")
    pts = lattice_points(region)
    end_index = {v.coord: j for j, v in enumerate(pts.E)}
    paths = tiling_to_paths(region, tiling)
    return permutation_sign([end_index[p[-1]] for p in paths])


def _covering_groups(corners: list[Monomial], d: int) -> list[list[Monomial]]:
    """Group punctures that overlap (share an edge) into minimal covering regions."""
    parent = {m: m for m in corners}

    def find(m: Monomial) -> Monomial:
        while parent[m] != m:
            parent[m] = parent[parent[m]]
            m = parent[m]
        return m

    for i, m in enumerate(corners):
        for n in corners[i + 1:]:
            if m.lcm(n).degree <= d - 1:
                parent[find(m)] = find(n)
    groups: dict[Monomial, list[Monomial]] = {}
    for m in corners:
        groups.setdefault(find(m), []).append(m)
    return list(groups.values())


def floating_shadow_check(region: TriRegion) -> bool:
    """True when every floating puncture (or covering region) with a puncture in its shadow has even side.

    The shadow of a puncture with corner ``x^a y^b z^c`` is the set of labels with
    x-exponent below ``a`` and y-exponent below ``b``.
    """
    d = region.d
    corners = [g for g in ideal_of_region(region).gens if g.degree < d]
    floating = floating_corners(corners, d)
    for group in _covering_groups(corners, d):
        if any(m not in floating for m in group):
            continue
        cover = group[0]
        for m in group[1:]:
            cover = cover.gcd(m)
        side = d - cover.degree
        if side % 2 == 0:
            continue
        others = [q for q in corners if q not in group]
        if any(q[0] < cover[0] and q[1] < cover[1] for q in others):
            return False
    return True


def orientation_counts(region: TriRegion) -> dict[str, int]:
    return {"up": len(region.up), "down": len(region.down), "balance": region.balance}


__all__ = [
    "Lozenge",
    "Tiling",
    "LatticePoints",
    "LatticeVertex",
    "canonical_tiling",
    "check_tiling",
    "count_tilings",
    "enumerate_tilings",
    "floating_shadow_check",
    "has_perfect_matching",
    "is_tileable",
    "is_tiling",
    "iter_tilings",
    "lattice_points",
    "lp_sign",
    "maximum_matching_size",
    "nabla_heavy_subregions",
    "permutation_sign",
    "pm_sign",
    "tileable_by_subregions",
    "tiling_to_paths",
    "vertex_coord",
    "VARIABLES",
]

"""Monomials, monomial ideals in K[x, y, z] and their triangular regions.

A triangular region of side ``d`` is made of unit triangles labelled by
monomials: upward triangles carry the monomials of degree ``d - 1`` and
downward triangles those of degree ``d - 2``.  The region ``T_d(I)`` keeps the
triangles whose labels are not in ``I``.  Labels are the coordinates; the
geometric (row, position) view is derived from them.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from math import comb
from typing import Iterable, Iterator

from .errors import PreconditionError, check_nonneg, check_positive


class Monomial(tuple):
    """Exponent triple ``(ex, ey, ez)`` for ``x^ex * y^ey * z^ez``.

    Ordering is graded reverse-lexicographic: ``m < n`` if ``deg m < deg n``,
    or the degrees agree and the last non-zero entry of ``m - n`` is positive.
    A tuple subclass keeps hashing and construction cheap.
    """

    __slots__ = ()

    def __new__(cls, ex: int = 0, ey: int = 0, ez: int = 0) -> "Monomial":
        check_nonneg(ex=ex, ey=ey, ez=ez)
        return tuple.__new__(cls, (ex, ey, ez))

    @classmethod
    def _raw(cls, ex: int, ey: int, ez: int) -> "Monomial":
        return tuple.__new__(cls, (ex, ey, ez))

    ex = property(lambda self: self[0])
    ey = property(lambda self: self[1])
    ez = property(lambda self: self[2])

    @property
    def degree(self) -> int:
        return self[0] + self[1] + self[2]

    def revlex_key(self) -> tuple[int, int, int, int]:
        return (self.degree, -self[2], -self[1], -self[0])

    def __lt__(self, other):  # type: ignore[override]
        return self.revlex_key() < other.revlex_key()

    def __le__(self, other):  # type: ignore[override]
        return self.revlex_key() <= other.revlex_key()

    def __gt__(self, other):  # type: ignore[override]
        return self.revlex_key() > other.revlex_key()

    def __ge__(self, other):  # type: ignore[override]
        return self.revlex_key() >= other.revlex_key()

    def __mul__(self, other):  # type: ignore[override]
        return Monomial._raw(self[0] + other[0], self[1] + other[1], self[2] + other[2])

    def __truediv__(self, other: "Monomial") -> "Monomial":
        if not other.divides(self):
            raise PreconditionError(f"{other} does not divide {self}")
        return Monomial._raw(self[0] - other[0], self[1] - other[1], self[2] - other[2])

    def divides(self, other: "Monomial") -> bool:
        return self[0] <= other[0] and self[1] <= other[1] and self[2] <= other[2]

    def lcm(self, other: "Monomial") -> "Monomial":
        return Monomial._raw(max(self[0], other[0]), max(self[1], other[1]), max(self[2], other[2]))

    def gcd(self, other: "Monomial") -> "Monomial":
        return Monomial._raw(min(self[0], other[0]), min(self[1], other[1]), min(self[2], other[2]))

    def __str__(self) -> str:
        parts = []
        for var, e in zip("xyz", self):
            if e == 1:
                parts.append(var)
            elif e > 1:
                parts.append(f"{var}^{e}")
        return "*".join(parts) if parts else "1"

    def __repr__(self) -> str:
        return f"Monomial({self[0]}, {self[1]}, {self[2]})"


X = Monomial(1, 0, 0)
Y = Monomial(0, 1, 0)
Z = Monomial(0, 0, 1)
ONE = Monomial(0, 0, 0)
VARIABLES = (X, Y, Z)


def monomials_of_degree(n: int) -> list[Monomial]:
    """All monomials of degree ``n`` in increasing reverse-lex order."""
    if n < 0:
        return []
    out = [Monomial._raw(n - b - c, b, c) for c in range(n, -1, -1) for b in range(n - c, -1, -1)]
    return out


def revlex_sorted(monomials: Iterable[Monomial]) -> list[Monomial]:
    return sorted(monomials, key=Monomial.revlex_key)


def minimalize(monomials: Iterable[Monomial]) -> tuple[Monomial, ...]:
    """Drop every monomial divisible by another one; result sorted revlex."""
    pool = sorted(set(monomials), key=Monomial.revlex_key)
    kept: list[Monomial] = []
    for m in pool:
        if not any(g.divides(m) for g in kept):
            kept.append(m)
    return tuple(kept)


@dataclass(frozen=True)
class MonomialIdeal:
    """Monomial ideal given by its minimal generators (a divisibility antichain)."""

    gens: tuple[Monomial, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "gens", minimalize(self.gens))

    @classmethod
    def of(cls, *gens: Monomial | tuple[int, int, int]) -> "MonomialIdeal":
        return cls(tuple(Monomial(*g) for g in gens))

    def __contains__(self, m: Monomial) -> bool:
        return any(g.divides(m) for g in self.gens)

    def __iter__(self) -> Iterator[Monomial]:
        return iter(self.gens)

    def __len__(self) -> int:
        return len(self.gens)

    def pure_powers(self) -> tuple[int | None, int | None, int | None]:
        """Exponents ``(a, b, c)`` of the pure powers ``x^a, y^b, z^c`` among the generators."""
        found: list[int | None] = [None, None, None]
        for g in self.gens:
            nonzero = [i for i in range(3) if g[i]]
            if len(nonzero) == 1:
                found[nonzero[0]] = g[nonzero[0]]
            elif not nonzero:
                found = [0, 0, 0]
        return found[0], found[1], found[2]

    @property
    def is_artinian(self) -> bool:
        return all(p is not None for p in self.pure_powers())

    @property
    def is_unit(self) -> bool:
        return ONE in self.gens

    def colon(self, m: Monomial) -> "MonomialIdeal":
        """The ideal quotient ``I : m``."""
        return MonomialIdeal(tuple(Monomial._raw(max(g[0] - m[0], 0), max(g[1] - m[1], 0),
                                                 max(g[2] - m[2], 0)) for g in self.gens))

    def __str__(self) -> str:
        return ", ".join(str(g) for g in self.gens)


_FACTOR = re.compile(r"([xyz])\^?(\d*)\*?")


def parse_monomial(text: str, offset: int = 0) -> Monomial:
    body = text.strip()
    lead = offset + (len(text) - len(text.lstrip()))
    if body == "1":
        return ONE
    if not body:
        raise PreconditionError(f"empty term at position {lead}")
    exps = [0, 0, 0]
    pos = 0
    while pos < len(body):
        if body[pos].isspace():
            pos += 1
            continue
        if body[pos] == "-":
            raise PreconditionError(f"negative exponent at position {lead + pos}")
        match = _FACTOR.match(body, pos)
        if match is None or match.end() == pos:
            raise PreconditionError(f"unexpected {body[pos]!r} at position {lead + pos}")
        if body[match.end():match.end() + 1] == "-":
            raise PreconditionError(f"negative exponent at position {lead + match.end()}")
        var, digits = match.groups()
        if digits == "" and match.group(0).endswith("^"):
            raise PreconditionError(f"missing exponent at position {lead + match.end()}")
        exps["xyz".index(var)] += int(digits) if digits else 1
        pos = match.end()
    return Monomial(*exps)


def parse_ideal(text: str) -> MonomialIdeal:
    """Parse a comma separated generator list such as ``"x^3*y*z^2, x3yz2, 1"``."""
    if not text.strip():
        raise PreconditionError("empty generator list at position 0")
    gens = []
    offset = 0
    for chunk in text.split(","):
        gens.append(parse_monomial(chunk, offset))
        offset += len(chunk) + 1
    return MonomialIdeal(tuple(gens))


def hilbert_enumerate(ideal: MonomialIdeal, j: int) -> int:
    if j < 0:
        return 0
    return sum(1 for m in monomials_of_degree(j) if m not in ideal)


def hilbert_inclusion_exclusion(ideal: MonomialIdeal, j: int) -> int:
    """``h(j)`` as an alternating sum over generator subsets (lcm degrees)."""
    if j < 0:
        return 0
    gens = ideal.gens
    total = 0
    # depth-first over subsets, pruning once the lcm degree exceeds j
    stack: list[tuple[int, Monomial, int]] = [(0, ONE, 1)]
    while stack:
        start, lcm, sign = stack.pop()
        rest = j - lcm.degree
        if rest >= 0:
            total += sign * comb(rest + 2, 2)
        else:
            continue
        for i in range(start, len(gens)):
            stack.append((i + 1, lcm.lcm(gens[i]), -sign))
    return total


def hilbert(ideal: MonomialIdeal, j: int) -> int:
    """Number of degree ``j`` monomials outside ``I`` (``dim_K [R/I]_j``)."""
    if j <= 64 or len(ideal.gens) > 18:
        return hilbert_enumerate(ideal, j)
    return hilbert_inclusion_exclusion(ideal, j)


def hilbert_function(ideal: MonomialIdeal, top: int | None = None) -> list[int]:
    """``[h(0), ..., h(top)]``; for Artinian ideals ``top`` defaults to the socle degree."""
    if top is None:
        if not ideal.is_artinian:
            raise PreconditionError("a degree bound is required for non-Artinian ideals")
        a, b, c = ideal.pure_powers()
        top = max(a + b + c - 3, 0)
    return [hilbert(ideal, j) for j in range(top + 1)]


@dataclass(frozen=True)
class TriRegion:
    """Subregion of the side-``d`` triangle given by its present triangles."""

    d: int
    up: frozenset[Monomial]
    down: frozenset[Monomial]
    zero_punctures: frozenset[Monomial] = field(default_factory=frozenset)

    def __post_init__(self) -> None:
        check_positive(d=self.d)
        object.__setattr__(self, "up", frozenset(self.up))
        object.__setattr__(self, "down", frozenset(self.down))
        object.__setattr__(self, "zero_punctures", frozenset(self.zero_punctures))
        for m in self.up:
            if m.degree != self.d - 1:
                raise PreconditionError(f"upward label {m} must have degree {self.d - 1}")
        for m in self.down:
            if m.degree != self.d - 2:
                raise PreconditionError(f"downward label {m} must have degree {self.d - 2}")
        for m in self.zero_punctures:
            if m.degree != self.d:
                raise PreconditionError(f"zero puncture {m} must have degree {self.d}")

    @classmethod
    def full(cls, d: int) -> "TriRegion":
        return cls(d, frozenset(monomials_of_degree(d - 1)), frozenset(monomials_of_degree(d - 2)))

    @cached_property
    def ups(self) -> tuple[Monomial, ...]:
        """Upward triangles in increasing reverse-lex order."""
        return tuple(revlex_sorted(self.up))

    @cached_property
    def downs(self) -> tuple[Monomial, ...]:
        """Downward triangles in increasing reverse-lex order."""
        return tuple(revlex_sorted(self.down))

    @property
    def balance(self) -> int:
        return len(self.up) - len(self.down)

    @property
    def is_balanced(self) -> bool:
        return self.balance == 0

    @property
    def is_empty(self) -> bool:
        return not self.up and not self.down

    def neighbours(self, down: Monomial) -> list[Monomial]:
        """Present upward triangles adjacent to ``down``, in the order x, y, z."""
        return [u for u in (down * X, down * Y, down * Z) if u in self.up]

    def without(self, up: Iterable[Monomial] = (), down: Iterable[Monomial] = ()) -> "TriRegion":
        return TriRegion(self.d, self.up - frozenset(up), self.down - frozenset(down), self.zero_punctures)

    def rotate(self, times: int = 1) -> "TriRegion":
        """Rotation by 120 degrees per step: relabel x -> y -> z -> x."""
        times %= 3
        if times == 0:
            return self
        if times == 2:
            return self.rotate().rotate()
        rot = rotate_monomial
        return TriRegion(self.d, frozenset(map(rot, self.up)), frozenset(map(rot, self.down)),
                         frozenset(map(rot, self.zero_punctures)))


def rotate_monomial(m: Monomial, times: int = 1) -> Monomial:
    """Relabel x -> y -> z -> x, ``times`` times (negative values undo it)."""
    for _ in range(times % 3):
        m = Monomial._raw(m[2], m[0], m[1])
    return m


def build_region(ideal: MonomialIdeal, d: int) -> TriRegion:
    """The triangular region ``T_d(I)``."""
    check_positive(d=d)
    up = frozenset(m for m in monomials_of_degree(d - 1) if m not in ideal)
    down = frozenset(m for m in monomials_of_degree(d - 2) if m not in ideal)
    zero = frozenset(g for g in ideal.gens if g.degree == d)
    return TriRegion(d, up, down, zero)


def ideal_of_region(region: TriRegion) -> MonomialIdeal:
    """``J(T)``: the largest ideal generated in degrees below ``d`` with ``T_d(J) = T``."""
    d = region.d
    inside: set[Monomial] = {m for m in monomials_of_degree(d - 1) if m not in region.up}
    layer = {m for m in monomials_of_degree(d - 2)
             if m not in region.down and all(m * v in inside for v in VARIABLES)}
    inside |= layer
    for k in range(d - 3, -1, -1):
        layer = {m for m in monomials_of_degree(k) if all(m * v in layer for v in VARIABLES)}
        if not layer:
            break
        inside |= layer
    return MonomialIdeal(minimalize(inside))


@dataclass(frozen=True)
class Puncture:
    """Removed upward triangle of side ``side`` whose top-left label is ``corner``."""

    corner: Monomial
    side: int
    floating: bool
    axial: bool
    simplex_corner: bool
    touches_boundary: bool

    def contains(self, m: Monomial) -> bool:
        return self.corner.divides(m)


def _overlap(m: Monomial, n: Monomial, d: int) -> bool:
    return m.lcm(n).degree <= d - 1


def _touch(m: Monomial, n: Monomial, d: int) -> bool:
    return m.lcm(n).degree == d


def puncture_graph(corners: list[Monomial], d: int) -> dict[Monomial, set[Monomial]]:
    """Adjacency of punctures that overlap or touch."""
    adj: dict[Monomial, set[Monomial]] = {m: set() for m in corners}
    for m, n in combinations(corners, 2):
        if m.lcm(n).degree <= d:
            adj[m].add(n)
            adj[n].add(m)
    return adj


def floating_corners(corners: list[Monomial], d: int) -> set[Monomial]:
    """Punctures not chained to the boundary through overlaps or touches."""
    adj = puncture_graph(corners, d)
    reached = {m for m in corners if 0 in m}
    frontier = list(reached)
    while frontier:
        m = frontier.pop()
        for n in adj[m]:
            if n not in reached:
                reached.add(n)
                frontier.append(n)
    return set(corners) - reached


def punctures(region: TriRegion) -> list[Puncture]:
    """Punctures of the region, i.e. the minimal generators of ``J(T)`` of degree below ``d``."""
    d = region.d
    corners = [g for g in ideal_of_region(region).gens if g.degree < d]
    floating = floating_corners(corners, d)
    out = []
    for g in corners:
        out.append(Puncture(corner=g, side=d - g.degree, floating=g in floating,
                            axial=g[1] == g[2], simplex_corner=sum(1 for e in g if e == 0) == 2,
                            touches_boundary=0 in g))
    return out


def puncture_relations(region: TriRegion) -> dict[str, list[tuple[Monomial, Monomial]]]:
    """Pairs of punctures that overlap (share an edge) or touch (share only a vertex)."""
    d = region.d
    corners = [p.corner for p in punctures(region)]
    rel: dict[str, list[tuple[Monomial, Monomial]]] = {"overlap": [], "touch": []}
    for m, n in combinations(corners, 2):
        if _overlap(m, n, d):
            rel["overlap"].append((m, n))
        elif _touch(m, n, d):
            rel["touch"].append((m, n))
    return rel


def monomial_subregion(region: TriRegion, m: Monomial) -> TriRegion:
    """Triangles of ``T`` whose labels are divisible by ``m``, relabelled by division."""
    if m.degree >= region.d:
        raise PreconditionError(f"deg {m} must be less than d = {region.d}")
    up = frozenset(u / m for u in region.up if m.divides(u))
    down = frozenset(w / m for w in region.down if m.divides(w))
    zero = frozenset(z / m for z in region.zero_punctures if m.divides(z))
    return TriRegion(region.d - m.degree, up, down, zero)


def socle_monomials(ideal: MonomialIdeal) -> list[Monomial]:
    """Monomials outside ``I`` killed by every variable (the centres of triads)."""
    if not ideal.is_artinian:
        raise PreconditionError("socle computation requires an Artinian ideal")
    if ideal.is_unit:
        return []
    a, b, c = ideal.pure_powers()
    out = []
    for ex in range(a):
        for ey in range(b):
            for ez in range(c):
                m = Monomial._raw(ex, ey, ez)
                if m not in ideal and all(m * v in ideal for v in VARIABLES):
                    out.append(m)
    return revlex_sorted(out)


@dataclass(frozen=True)
class SocleInfo:
    monomials: tuple[Monomial, ...]
    degrees: tuple[int, ...]

    @property
    def socle_degree(self) -> int:
        return max(self.degrees) if self.degrees else -1

    @property
    def type(self) -> int:
        return len(self.monomials)

    @property
    def level(self) -> bool:
        return len(set(self.degrees)) <= 1


def socle(ideal: MonomialIdeal) -> SocleInfo:
    mons = tuple(socle_monomials(ideal))
    return SocleInfo(mons, tuple(sorted({m.degree for m in mons})))


def over_puncturing(ideal: MonomialIdeal, d: int) -> int:
    """Sum of the side lengths of the punctures of ``I`` in the side-``d`` triangle, minus ``d``."""
    return sum(d - g.degree for g in ideal.gens if g.degree < d) - d


def region_over_puncturing(region: TriRegion) -> int:
    return over_puncturing(ideal_of_region(region), region.d)


@dataclass(frozen=True)
class LcmCheck:
    no_overlap: bool
    no_touch: bool
    offending: tuple[tuple[Monomial, Monomial], ...] = ()


def lcm_degree_check(ideal: MonomialIdeal, d: int) -> LcmCheck:
    """Whether all pairwise generator lcms have degree at least ``d`` (resp. ``d + 1``)."""
    overlap = True
    touch = True
    offending = []
    for m, n in combinations(ideal.gens, 2):
        deg = m.lcm(n).degree
        if deg < d:
            overlap = False
        if deg < d + 1:
            touch = False
            offending.append((m, n))
    return LcmCheck(overlap, touch, tuple(offending))

"""Closed-form enumerations: hyperfactorials, MacMahon's box formula and the mirror-symmetric products."""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import comb, factorial, prod
from typing import Sequence

from .core import Monomial, MonomialIdeal
from .errors import PreconditionError, check_nonneg, require


@lru_cache(maxsize=None)
def hyperfactorial(n: int) -> int:
    """``H(n) = 0! 1! ... (n-1)!``."""
    check_nonneg(n=n)
    return prod(factorial(i) for i in range(n))


def mac(a: int, b: int, c: int) -> int:
    """Number of plane partitions inside an ``a x b x c`` box."""
    check_nonneg(a=a, b=b, c=c)
    H = hyperfactorial
    num = H(a) * H(b) * H(c) * H(a + b + c)
    den = H(a + b) * H(a + c) * H(b + c)
    q, r = divmod(num, den)
    if r:
        raise AssertionError(f"Mac({a},{b},{c}) is not integral")
    return q


def _integral(value: Fraction, what: str) -> int:
    if value.denominator != 1:
        raise AssertionError(f"{what} evaluated to the non-integer {value}")
    return value.numerator


def shifted_factorial(x, k: int) -> Fraction:
    """Rising factorial ``x (x+1) ... (x+k-1)`` in exact arithmetic."""
    check_nonneg(k=k)
    x = Fraction(x)
    return prod((x + i for i in range(k)), start=Fraction(1))


# -- determinant families ---------------------------------------------------


def hexagon_det(a: int, b: int, c: int) -> int:
    """Enumeration of ``T_d(x^a, y^b, z^c)`` with ``d = (a+b+c)/2``: a hexagon."""
    check_nonneg(a=a, b=b, c=c)
    require(min(a, b, c) > 0, "a, b, c must be positive")
    require((a + b + c) % 2 == 0, "a + b + c must be even")
    require(a <= b + c and b <= a + c and c <= a + b, "triangle inequalities a <= b + c, b <= a + c, c <= a + b")
    d = (a + b + c) // 2
    return mac(d - a, d - b, d - c)


def hexagon_ideal(a: int, b: int, c: int) -> tuple[MonomialIdeal, int]:
    return MonomialIdeal.of((a, 0, 0), (0, b, 0), (0, 0, c)), (a + b + c) // 2


def ci_split_det(a: int, b: int, c: int, alpha: int, beta: int, gamma: int) -> int:
    """``T_d(x^(a+alpha), y^b, z^c, x^a y^beta z^gamma)``, same count as the plain hexagon."""
    check_nonneg(alpha=alpha, beta=beta, gamma=gamma)
    require(alpha > 0, "alpha must be positive")
    require(beta + gamma > 0, "beta and gamma are not both zero")
    require(2 * (alpha + beta + gamma) <= b + c - a, "alpha + beta + gamma <= (b + c - a)/2")
    return hexagon_det(a, b, c)


def ci_split_ideal(a, b, c, alpha, beta, gamma) -> tuple[MonomialIdeal, int]:
    gens = [(a + alpha, 0, 0), (0, b, 0), (0, 0, c), (a, beta, gamma)]
    return MonomialIdeal.of(*gens), (a + b + c) // 2


def ci_nest_det(a: int, b: int, c: int, alpha: int, beta: int, gamma: int) -> int:
    """``T_d(x^(a+alpha), y^b, z^c, x^a y^beta, x^a z^gamma)``: a hexagon nested in a corner of a hexagon."""
    outer = hexagon_det(a, b, c)
    d = (a + b + c) // 2
    require(a + alpha + beta + gamma == b + c, "a + alpha + beta + gamma = b + c")
    inner = hexagon_det(alpha, beta, gamma)
    require((alpha + beta + gamma) // 2 == d - a, "inner hexagon has degree d - a")
    return outer * inner


def ci_nest_ideal(a, b, c, alpha, beta, gamma) -> tuple[MonomialIdeal, int]:
    gens = [(a + alpha, 0, 0), (0, b, 0), (0, 0, c), (a, beta, 0), (a, 0, gamma)]
    return MonomialIdeal.of(*gens), (a + b + c) // 2


def two_corner_det(a: int, b: int, alpha: int, beta: int, d: int) -> int:
    """``T_d(x^a, y^b, x^alpha y^beta z^(2d-a-b-alpha-beta))``."""
    check_nonneg(a=a, b=b, alpha=alpha, beta=beta, d=d)
    require(alpha + b <= d, "alpha + b <= d")
    require(a + beta <= d, "a + beta <= d")
    require(d <= a + b, "d <= a + b")
    return mac(a + b - d, d - alpha - b, d - a - beta)


def two_corner_ideal(a, b, alpha, beta, d) -> tuple[MonomialIdeal, int]:
    gens = [(a, 0, 0), (0, b, 0), (alpha, beta, 2 * d - a - b - alpha - beta)]
    return MonomialIdeal.of(*gens), d


def split_binom_matrix(p: int, q: int, r: int, m: int, n: int) -> list[list[int]]:
    """Binomial matrix whose columns after the ``m``-th are shifted by ``r``."""
    check_nonneg(p=p, q=q, r=r, m=m, n=n)
    require(1 <= m <= n, "1 <= m <= n")

    def binom(top: int, k: int) -> int:
        return comb(top, k) if 0 <= k <= top else 0

    return [[binom(p, q + j - i) if j <= m else binom(p, q + r + j - i)
             for j in range(1, n + 1)] for i in range(1, n + 1)]


def split_binom_det(p: int, q: int, r: int, m: int, n: int) -> int:
    check_nonneg(p=p, q=q, r=r, m=m, n=n)
    require(1 <= m <= n, "1 <= m <= n")
    require(p - q - r >= 0, "p - q - r >= 0")
    H = hyperfactorial
    value = Fraction(mac(m, q, r) * mac(n - m, p - q - r, r)) * Fraction(
        H(q + r) * H(p - q) * H(n + r) * H(n + p),
        H(n + p - q) * H(n + q + r) * H(p) * H(r))
    return _integral(value, "split binomial determinant")


def two_mahonian_det(a: int, b: int, c: int, alpha: int, beta: int) -> int:
    """``T_d(x^a, y^b, z^c, x^alpha y^beta)`` with ``d = (a+b+c+alpha+beta)/3``."""
    check_nonneg(a=a, b=b, c=c, alpha=alpha, beta=beta)
    require((a + b + c + alpha + beta) % 3 == 0, "a + b + c + alpha + beta divisible by 3")
    d = (a + b + c + alpha + beta) // 3
    require(0 < alpha < a, "0 < alpha < a")
    require(0 < beta < b, "0 < beta < b")
    require(max(a, b, c, alpha + beta) <= d, "max(a, b, c, alpha + beta) <= d")
    require(d <= min(a + beta, alpha + b, a + c, b + c), "d <= min(a + beta, alpha + b, a + c, b + c)")
    H = hyperfactorial
    s = alpha + beta
    value = Fraction(mac(a + beta - d, d - a, d - s) * mac(alpha + b - d, d - b, d - s)) * Fraction(
        H(2 * d - a - s) * H(2 * d - b - s) * H(2 * d - c - s) * H(d),
        H(a) * H(b) * H(c) * H(d - s))
    return _integral(value, "two-Mahonian enumeration")


def two_mahonian_ideal(a, b, c, alpha, beta) -> tuple[MonomialIdeal, int]:
    gens = [(a, 0, 0), (0, b, 0), (0, 0, c), (alpha, beta, 0)]
    return MonomialIdeal.of(*gens), (a + b + c + alpha + beta) // 3


# -- mirror symmetric regions -----------------------------------------------


@dataclass(frozen=True)
class MirrorParams:
    """Corner side ``b`` and axial punctures ``(height, side)`` listed from the top."""

    b: int
    axials: tuple[tuple[int, int], ...]

    @property
    def d(self) -> int:
        return 2 * self.b + sum(side for _, side in self.axials)

    @property
    def s(self) -> int:
        return len(self.axials)

    @property
    def odd_axials(self) -> int:
        return sum(1 for _, side in self.axials if side % 2)

    def violations(self) -> list[str]:
        out = []
        if self.b < 0 or any(h < 0 or side < 0 for h, side in self.axials):
            out.append("parameters must be nonnegative")
        if not self.axials:
            out.append("at least one axial puncture")
            return out
        d = self.d
        if self.axials[0][0] != d - self.axials[0][1]:
            out.append("h_1 = d - d_1")
        for i in range(len(self.axials) - 1):
            if not self.axials[i][0] - self.axials[i + 1][0] > self.axials[i + 1][1]:
                out.append(f"h_{i + 1} - h_{i + 2} > d_{i + 2}")
        for i, (h, side) in enumerate(self.axials, start=1):
            if side < 1:
                out.append(f"d_{i} >= 1")
            if (h - (d - side)) % 2:
                out.append(f"h_{i} = d - d_{i} (mod 2)")
            elif h + (d - side - h) // 2 <= self.b:
                out.append(f"axial puncture {i} touches a corner puncture")
        return out

    def validate(self) -> None:
        bad = self.violations()
        if bad:
            raise PreconditionError("mirror parameters violate: " + "; ".join(bad))

    def __str__(self) -> str:
        return f"b={self.b}; axials=" + ",".join(f"({h},{s})" for h, s in self.axials)


_PAIR = re.compile(r"\(\s*(\d+)\s*,\s*(\d+)\s*\)")


def parse_mirror(text: str) -> MirrorParams:
    """Parse ``b=1; axials=(3,2),(0,1)``."""
    fields = {}
    for part in text.split(";"):
        if not part.strip():
            continue
        key, sep, value = part.partition("=")
        if not sep:
            raise PreconditionError(f"expected key=value in {part.strip()!r}")
        fields[key.strip()] = value.strip()
    if set(fields) != {"b", "axials"}:
        raise PreconditionError("mirror parameters need exactly the keys b and axials")
    try:
        b = int(fields["b"])
    except ValueError:
        raise PreconditionError(f"b must be an integer, got {fields['b']!r}") from None
    pairs = _PAIR.findall(fields["axials"])
    if not pairs or _PAIR.sub("", fields["axials"]).replace(",", "").strip():
        raise PreconditionError(f"cannot parse axials {fields['axials']!r}")
    return MirrorParams(b, tuple((int(h), int(s)) for h, s in pairs))


def mirror_ideal(params: MirrorParams) -> tuple[MonomialIdeal, int]:
    params.validate()
    d = params.d
    h1 = params.axials[0][0]
    gens = [Monomial(h1, 0, 0), Monomial(0, d - params.b, 0), Monomial(0, 0, d - params.b)]
    for h, side in params.axials[1:]:
        e = (d - side - h) // 2
        gens.append(Monomial(h, e, e))
    return MonomialIdeal.of(*gens), d


@dataclass(frozen=True)
class CiucuIndex:
    a: int
    k: int
    p: tuple[int, ...]
    q: tuple[int, ...]

    @property
    def m(self) -> int:
        return len(self.p)

    @property
    def n(self) -> int:
        return len(self.q)


def _run(lo: int, hi: int) -> list[int]:
    """Consecutive integers ``lo + 1, ..., hi``."""
    return list(range(lo + 1, hi + 1))


def mirror_index(params: MirrorParams) -> CiucuIndex:
    params.validate()
    heights = [h for h, _ in params.axials]
    sides = [side for _, side in params.axials]
    s = params.s
    require(all(side % 2 == 0 for side in sides[1:-1]), "inner axial sides d_2 .. d_(s-1) must be even")
    a = sides[0]
    k = sum(sides[1:])
    h = [None] + heights  # one-based
    dd = [None] + sides
    if dd[s] % 2 == 0:
        if s == 1:
            p = _run(0, -(-h[1] // 2))
        else:
            p = _run(0, h[s] // 2)
            for i in range(s, 2, -1):
                p += _run((dd[i] + h[i]) // 2, h[i - 1] // 2)
            p += _run((dd[2] + h[2]) // 2, -(-h[1] // 2))
        q: list[int] = []
    else:
        p = _run(0, h[s] // 2)
        q = []
        if s >= 2:
            q = _run(dd[s] // 2, (h[s - 1] - h[s]) // 2)
            for i in range(s - 1, 1, -1):
                q += _run((dd[i] + h[i] - h[s]) // 2, (h[i - 1] - h[s]) // 2)
    return CiucuIndex(a, k, tuple(p), tuple(q))


def _half_up(n: int) -> int:
    return -(-n // 2)


def ciucu_B(m: int, n: int, x) -> Fraction:
    check_nonneg(m=m, n=n)
    x = Fraction(x)
    sf = shifted_factorial
    half = Fraction(1, 2)
    out = Fraction(1, 2 ** (m * n + m * (m - 1) // 2)) * sf(x + n + 1, m) * sf(x + n + 2, m)
    for i in range(1, _half_up(n - 1) + 1):
        out *= sf(x + 1 + i, n + 1 - 2 * i)
    for i in range(1, _half_up(n) + 1):
        out *= sf(x + half + i, n + 2 - 2 * i)
    for i in range(1, n + 1):
        out *= sf(x + i, m) / sf(x + i + half, m)
    for i in range(1, m + 1):
        out *= sf(2 * x + n + i + 2, n + i - 1)
    return out


def ciucu_Bbar(m: int, n: int, x, literal: bool = False) -> Fraction:
    """The barred companion of ``ciucu_B``.

    The last factor is ``(2x + m + i + 1)_(m+i)``; ``literal=True`` uses the
    printed ``+ 2`` instead, which disagrees with brute-force counts.
    """
    check_nonneg(m=m, n=n)
    x = Fraction(x)
    sf = shifted_factorial
    half = Fraction(1, 2)
    out = Fraction(1, 2 ** (m * n + n * (n + 1) // 2)) * sf(x + m + 1, n)
    for i in range(1, _half_up(m) + 1):
        out *= sf(x + i, m + 2 - 2 * i)
    for i in range(1, _half_up(m - 1) + 1):
        out *= sf(x + half + i, m + 1 - 2 * i)
    for i in range(1, m + 1):
        out *= sf(x + i, n) / sf(x + i + half, n)
    for i in range(1, n + 1):
        out *= sf(2 * x + m + i + (2 if literal else 1), m + i)
    return out


def _vandermonde(seq: Sequence[int]) -> int:
    return prod((seq[j] - seq[i] for i in range(len(seq)) for j in range(i + 1, len(seq))), start=1)


def _c_common(p: Sequence[int], q: Sequence[int]) -> Fraction:
    m, n = len(p), len(q)
    # binom(n - m, 2) as a polynomial, so negative n - m is allowed
    two = Fraction(2) ** ((n - m) * (n - m - 1) // 2 - m)
    cross = prod((pi + qj for pi in p for qj in q), start=1)
    return two * Fraction(_vandermonde(p) * _vandermonde(q), cross)


def ciucu_c(p: Sequence[int], q: Sequence[int]) -> Fraction:
    out = _c_common(p, q)
    for pi in p:
        out /= factorial(2 * pi)
    for qi in q:
        out /= factorial(2 * qi - 1)
    return out


def ciucu_cbar(p: Sequence[int], q: Sequence[int]) -> Fraction:
    out = _c_common(p, q)
    for pi in p:
        out /= factorial(2 * pi - 1)
    for qi in q:
        out /= factorial(2 * qi)
    return out


def _check_index_list(seq: Sequence[int], name: str) -> None:
    if any(v <= 0 for v in seq) or any(seq[i] >= seq[i + 1] for i in range(len(seq) - 1)):
        raise PreconditionError(f"{name} must be strictly increasing positive integers")


def ciucu_P(p: Sequence[int], q: Sequence[int], x, literal: bool = False) -> Fraction:
    """``literal=True`` starts the inner q-product at ``j = 1`` as printed; the
    default starts it at ``j = i`` like the p-product."""
    _check_index_list(p, "p")
    _check_index_list(q, "q")
    m, n = len(p), len(q)
    x = Fraction(x)
    pm = p[-1] if p else 0
    out = ciucu_c(p, q) * ciucu_B(m, n, x + pm - m)
    for i in range(1, m + 1):
        for j in range(i, p[i - 1]):
            out *= (x + pm - j) * (x + pm - m + n + j + 2)
    for i in range(1, n + 1):
        for j in range(1 if literal else i, q[i - 1]):
            out *= (x + pm - m + n - j + 1) * (x + pm + j + 1)
    return out


def ciucu_Pbar(p: Sequence[int], q: Sequence[int], x, literal: bool = False) -> Fraction:
    """Barred version of ``ciucu_P``; ``literal`` as there and in ``ciucu_Bbar``."""
    _check_index_list(p, "p")
    _check_index_list(q, "q")
    m, n = len(p), len(q)
    x = Fraction(x)
    pm = p[-1] if p else 0
    out = ciucu_cbar(p, q) * ciucu_Bbar(m, n, x + pm - m, literal)
    for i in range(1, m + 1):
        for j in range(i, p[i - 1]):
            out *= (x + pm - j) * (x + pm - m + n + j + 1)
    for i in range(1, n + 1):
        for j in range(1 if literal else i, q[i - 1]):
            out *= (x + pm - m + n - j) * (x + pm + j + 1)
    return out


def minus_one(p: Sequence[int]) -> tuple[int, ...]:
    """``p - 1``: subtract one from each entry, dropping a leading 1."""
    if p and p[0] == 1:
        return tuple(v - 1 for v in p[1:])
    return tuple(v - 1 for v in p)


def drop_last(p: Sequence[int]) -> tuple[int, ...]:
    return tuple(p[:-1])


@dataclass(frozen=True)
class MirrorEnumeration:
    """``per`` counts tilings; ``det_abs`` is ``|det Z|`` when a formula gives it, else None."""

    per: int
    det_abs: int | None
    case: str
    index: CiucuIndex


def _mirror_case(ix: CiucuIndex) -> str:
    # parity of k stands in for the parity of d_s (inner sides are even)
    if ix.k % 2 == 0:
        if ix.a % 2:
            return "iii"
        return "i" if ix.p and ix.p[0] == 1 else "ii"
    if ix.a % 2:
        return "v"
    return "iv" if ix.p else "corrected"


def _half(v: int) -> Fraction:
    return Fraction(v, 2)


def mirror_enumeration(params: MirrorParams) -> MirrorEnumeration:
    """Tiling count of a mirror symmetric region from the product formulas."""
    ix = mirror_index(params)
    a, k, p, q, m, n = ix.a, ix.k, ix.p, ix.q, ix.m, ix.n
    case = _mirror_case(ix)
    P, Pb = ciucu_P, ciucu_Pbar
    if case == "i":
        value = 2**m * P((), p, _half(a + k - 2)) * Pb(minus_one(p), (), _half(a))
    elif case == "ii":
        value = 2**m * P((), p, _half(a + k - 2)) * P(minus_one(p), (), _half(a))
    elif case == "iii":
        value = 2**m * P((), drop_last(p), _half(a + k - 1)) * Pb(p, (), _half(a - 1))
    elif case == "iv":
        value = 2 ** (m + n) * Pb(p, q, _half(a + k - 1)) * P(q, drop_last(p), _half(a))
    elif case == "corrected":
        value = 2 ** (m + n) * Pb((), q, _half(a + k - 1)) * Pb(q, (), _half(a))
    else:
        value = 2 ** (m + n) * Pb(p, drop_last(q), _half(a + k)) * P(q, p, _half(a - 1))
    per = _integral(value, f"mirror enumeration, case {case}")
    if params.odd_axials % 4 in (2, 3):
        det_abs: int | None = 0
    elif case in ("i", "ii", "iii", "corrected"):
        det_abs = per
    else:
        det_abs = None
    return MirrorEnumeration(per, det_abs, case, ix)


def uncorrected_case_iv(params: MirrorParams, literal: bool = False) -> Fraction:
    """The case (iv) product applied regardless of ``h_s``; wrong when ``h_s = 0``."""
    ix = mirror_index(params)
    a, k, p, q, m, n = ix.a, ix.k, ix.p, ix.q, ix.m, ix.n
    return (
        2 ** (m + n)
        * ciucu_Pbar(p, q, _half(a + k - 1), literal)
        * ciucu_P(q, drop_last(p), _half(a), literal)
    )


def mirror_params_upto(max_d: int, inner_even: bool = False):
    """Every valid parameter set with ``d <= max_d``, by increasing ``d``."""
    for d in range(1, max_d + 1):
        for b in range(d // 2 + 1):
            rest = d - 2 * b
            if rest == 0:
                continue
            for s in range(1, rest + 1):
                for cuts in combinations(range(1, rest), s - 1):
                    sides = tuple(hi - lo for lo, hi in zip((0,) + cuts, cuts + (rest,)))
                    if inner_even and any(v % 2 for v in sides[1:-1]):
                        continue
                    for heights in _mirror_heights(sides, 1, d - sides[0]):
                        params = MirrorParams(b, tuple(zip((d - sides[0],) + heights, sides)))
                        if not params.violations():
                            yield params


def _mirror_heights(sides, i, prev):
    if i == len(sides):
        yield ()
        return
    for h in range(prev - sides[i]):
        for tail in _mirror_heights(sides, i + 1, h):
            yield (h,) + tail

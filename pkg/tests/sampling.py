"""Seeded random ideals and regions for property sweeps."""

from __future__ import annotations

import random

from lozenge.core import Monomial, MonomialIdeal, build_region, minimalize


def random_ideal(rng: random.Random, d: int, extra: int = 3, artinian: bool = True) -> MonomialIdeal:
    gens = []
    if artinian:
        gens = [Monomial(rng.randint(1, d), 0, 0), Monomial(0, rng.randint(1, d), 0),
                Monomial(0, 0, rng.randint(1, d))]
    for _ in range(rng.randint(0 if artinian else 1, extra)):
        e = rng.randint(1, d - 1)
        a = rng.randint(0, e)
        b = rng.randint(0, e - a)
        gens.append(Monomial(a, b, e - a - b))
    return MonomialIdeal(minimalize(gens))


def random_regions(seed: int, count: int, max_d: int = 9, balanced: bool = True):
    """Yield ``(ideal, d, region)`` with nonempty regions, balanced ones only if asked."""
    rng = random.Random(seed)
    made = 0
    while made < count:
        d = rng.randint(2, max_d)
        ideal = random_ideal(rng, d, artinian=rng.random() < 0.7)
        region = build_region(ideal, d)
        if region.is_empty or (balanced and not region.is_balanced):
            continue
        made += 1
        yield ideal, d, region


def stratified_regions(seed: int, tileable: int, nontileable: int, max_d: int = 9):
    """Balanced regions with fixed numbers of tileable and non-tileable members.

    Non-tileable balanced regions are rare among random ideals, so they are
    collected by rejection from a long stream.
    """
    from lozenge.tiling import has_perfect_matching

    want = {True: tileable, False: nontileable}
    for ideal, d, region in random_regions(seed, 10**9, max_d=max_d, balanced=True):
        kind = has_perfect_matching(region)
        if want[kind]:
            want[kind] -= 1
            yield ideal, d, region
        if not any(want.values()):
            return

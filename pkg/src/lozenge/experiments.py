"""Data tables for open conjectures. Reported, never asserted."""

from __future__ import annotations

import random
from collections import Counter
from fractions import Fraction

from .core import Monomial, MonomialIdeal, build_region, socle
from .formulas import mirror_ideal, mirror_params_upto
from .lefschetz import type_two_classify, wlp_report
from .matrix import det_exact, z_matrix

LABEL = "conjecture - not asserted"


def zero_mirror_table(max_d: int = 10) -> dict:
    """Tabulate ``(odd axial count, det Z = 0)`` over all mirror symmetric regions up to ``max_d``.

    Also counts the regions where exactly one axial puncture other than the
    top one has odd side, the case left open after the corrected enumeration.
    """
    pairs: Counter = Counter()
    one_inner_odd: Counter = Counter()
    total = 0
    for params in mirror_params_upto(max_d):
        ideal, d = mirror_ideal(params)
        zero = det_exact(z_matrix(build_region(ideal, d))) == 0
        pairs[(params.odd_axials, zero)] += 1
        if sum(1 for _, side in params.axials[1:] if side % 2) == 1:
            one_inner_odd[zero] += 1
        total += 1
    rows = [{"oddAxials": k, "mod4": k % 4, "detZero": z, "count": n} for (k, z), n in sorted(pairs.items())]
    agree = sum(r["count"] for r in rows if r["detZero"] == (r["oddAxials"] >= 2))
    return {
        "label": LABEL,
        "maxD": max_d,
        "regions": total,
        "rows": rows,
        "agreeWithConjecture": agree,
        "oneInnerOdd": {"detZero": one_inner_odd[True], "detNonzero": one_inner_odd[False]},
    }


def _random_type_two(rng: random.Random, top: int) -> MonomialIdeal | None:
    a, b, c = (rng.randint(2, top) for _ in range(3))
    alpha, beta = rng.randint(1, a - 1), rng.randint(1, b - 1)
    gens = [Monomial(a, 0, 0), Monomial(0, b, 0), Monomial(0, 0, c), Monomial(alpha, beta, 0)]
    if rng.random() < 0.5:
        gens.append(Monomial(alpha, 0, rng.randint(1, c - 1)))
    ideal = MonomialIdeal(tuple(gens))
    return ideal if socle(ideal).type == 2 else None


def type_two_char_table(samples: int = 40, top: int = 7, seed: int = 0) -> dict:
    """For random type-two ideals with the property over Q, list failing primes above ``(a+b+c)/2``."""
    rng = random.Random(seed)
    seen = 0
    above: list[dict] = []
    below = 0
    tries = 0
    while seen < samples and tries < 50 * samples:
        tries += 1
        ideal = _random_type_two(rng, top)
        if ideal is None:
            continue
        type_two_classify(ideal)
        report = wlp_report(ideal)
        if not report.wlp_q:
            continue
        seen += 1
        bound = Fraction(sum(ideal.pure_powers()), 2)
        big = [p for p in report.fail_chars if p > bound]
        below += len(report.fail_chars) - len(big)
        if big:
            above.append({"ideal": str(ideal), "bound": str(bound), "primes": big})
    return {
        "label": LABEL,
        "seed": seed,
        "samples": seen,
        "failingPrimesAtOrBelowBound": below,
        "primesAboveBound": above,
    }

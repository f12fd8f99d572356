from __future__ import annotations

import random
from fractions import Fraction
from itertools import permutations, product

import oracle
import pytest
from sampling import random_ideal, random_regions

from lozenge.core import Monomial, MonomialIdeal, build_region, parse_ideal, punctures, socle
from lozenge.errors import PreconditionError
from lozenge.lefschetz import (
    aci_decide,
    aci_ideal,
    aci_semistable,
    axes_central,
    balanced_family_ideal,
    build_togliatti_family,
    ci_wlp,
    degree_check,
    frobenius_fail_primes,
    hadamard_char_bound,
    perfectly_punctured,
    reg_two_aci,
    reg_two_aci_direct,
    semistable,
    slope,
    splitting_type_closed,
    splitting_type_oracle,
    togliatti_delta,
    two_aci_minimal,
    type_two_classify,
    type_two_wlp,
    unit_reduction,
    wlp_report,
)
from lozenge.matrix import det_exact, n_matrix, rank_exact, z_matrix
from lozenge.tiling import is_tileable


def ideal(text: str) -> MonomialIdeal:
    return parse_ideal(text)


def as_tuples(I: MonomialIdeal) -> list[tuple[int, int, int]]:
    return [tuple(g) for g in I.gens]


# -- weak Lefschetz property -------------------------------------------------------------


@pytest.mark.parametrize("text, chars", [
    ("x^4,y^4,z^4,x^2*z^2", (2,)),
    ("x^2,y^2,z^2", (2,)),
    ("x^3,y^3,z^3", (3,)),
    ("x^3,y^4,z^5", (2, 5)),
])
def test_failing_characteristics(text, chars):
    report = wlp_report(ideal(text))
    assert report.wlp_q and report.fail_chars == chars
    top = max(report.socle_degrees) + 1
    assert oracle.wlp_failing_chars(as_tuples(ideal(text)), top) == set(chars)


def test_wlp_report_against_oracle_on_samples():
    rng = random.Random(41)
    for _ in range(40):
        I = random_ideal(rng, rng.randint(2, 5), extra=2)
        report = wlp_report(I)
        found = oracle.wlp_failing_chars(as_tuples(I), max(report.socle_degrees) + 1)
        assert (0 not in found) == report.wlp_q
        if report.wlp_q:
            assert set(report.fail_chars) == found


def test_wlp_report_json_shape():
    data = wlp_report(ideal("x^4,y^4,z^4,x^2*z^2")).to_json()
    assert list(data)[:2] == ["degrees", "wlpQ"]
    assert data["failChars"] == [2]
    assert set(data["degrees"][0]) == {"j", "expected", "rankQ", "delta", "primes"}


def test_failure_over_q_is_noted():
    report = wlp_report(aci_ideal(7, 7, 7, 3, 3, 3))
    assert not report.wlp_q
    assert report.notes[0] == "fails over the rationals, hence in every characteristic"
    assert report.failing_degrees == (9,)
    assert not any(n.startswith("inconsistent") for n in report.notes)


def test_degree_check_sizes():
    check = degree_check(ideal("x^4,y^4,z^4,x^2*z^2"), 4)
    assert check.expected == 10 and check.delta == 0 and check.primes == (2,)


def test_large_lattice_determinant():
    I = aci_ideal(6, 7, 8, 3, 3, 3)
    assert wlp_report(I).wlp_q
    assert det_exact(n_matrix(build_region(I, 10))) == -1764


@pytest.mark.parametrize("text, primes", [
    ("x^3,y^3,z^3", (3,)),
    ("x^2,y^2,z^2", (2,)),
    ("x^5,y^5,z^5,x^4*y", (5,)),
])
def test_frobenius_primes(text, primes):
    assert frobenius_fail_primes(ideal(text)) == primes


def test_frobenius_primes_do_fail():
    rng = random.Random(50)
    for _ in range(40):
        I = random_ideal(rng, rng.randint(2, 6), extra=2)
        primes = frobenius_fail_primes(I)
        report = wlp_report(I)
        assert set(primes) <= set(report.fail_chars) or not report.wlp_q


def test_ci_wlp_examples():
    assert ci_wlp(2, 2, 2).failing_primes == (2,)
    assert ci_wlp(1, 1, 5).always_wlp
    result = ci_wlp(3, 4, 5)
    assert result.failing_primes == (2, 5) and result.values == (10,)


def test_ci_wlp_matches_report():
    for a in range(1, 9):
        for b in range(a, 9):
            for c in range(b, 9):
                result = ci_wlp(a, b, c)
                report = wlp_report(MonomialIdeal.of((a, 0, 0), (0, b, 0), (0, 0, c)))
                assert report.wlp_q
                if result.always_wlp:
                    assert report.fail_chars == ()
                else:
                    assert report.fail_chars == result.failing_primes, (a, b, c)


def test_non_tileable_balanced_fails_everywhere():
    seen = 0
    for I, d, region in random_regions(seed=42, count=3000, max_d=9):
        if is_tileable(region):
            continue
        assert det_exact(z_matrix(region)) == 0
        seen += 1
    assert seen > 10


def test_hadamard_bound():
    assert hadamard_char_bound(ideal("x^2,y^2,z^2")) == 243
    assert hadamard_char_bound(ideal("x^3,y^3,z^3")) == 3787
    for text in ["x^3,y^4,z^5", "x^4,y^4,z^4,x^2*z^2", "x^2,y^3,z^3,x*y*z"]:
        bound = hadamard_char_bound(ideal(text))
        assert all(p <= bound for p in wlp_report(ideal(text)).fail_chars)


# -- semistability -------------------------------------------------------------------------


def test_slope():
    assert slope(ideal("x^2,y^2,z^2,x*y,x*z"), 2) == Fraction(-5, 2)


def test_semistability_examples():
    s = semistable(ideal("x^2,y^2,z^2,x*y,x*z,y*z"))
    assert s.semistable and s.stable
    s = semistable(ideal("x^2,y^2,z^2,x*y,x*z"))
    assert s.semistable and not s.stable
    assert s.witness_gcd == Monomial(1, 0, 0)
    s = semistable(ideal("x^3,y^3,z^3,x*y*z,x^2*y,x^2*z"))
    assert not s.semistable and s.witness_gcd == Monomial(2, 0, 0)


def test_powers_of_maximal_ideal_are_stable():
    for k in range(1, 5):
        gens = [Monomial(a, b, k - a - b) for a in range(k + 1) for b in range(k + 1 - a)]
        assert semistable(MonomialIdeal(tuple(gens))).stable


def test_semistable_cap():
    gens = [Monomial(a, b, 6 - a - b) for a in range(7) for b in range(7 - a)]
    with pytest.raises(PreconditionError):
        semistable(MonomialIdeal(tuple(gens)))


def test_tileable_semistable_perfectly_punctured():
    rng = random.Random(43)
    seen = 0
    while seen < 300:
        d = rng.randint(2, 9)
        I = random_ideal(rng, d, extra=4)
        if any(g.degree > d for g in I.gens) or len(I.gens) < 2:
            continue
        region = build_region(I, d)
        if region.is_empty:
            continue
        seen += 1
        flags = [perfectly_punctured(I, d), is_tileable(region), semistable(I, d).semistable]
        assert sum(flags) != 2, (str(I), d, flags)


def test_wlp_iff_semistable_on_family():
    checked = 0
    for t in (4, 5):
        for degrees in product(range(2, 9), repeat=t):
            if degrees[2] > min(degrees[:2]) or checked >= 40:
                continue
            try:
                I, d = balanced_family_ideal(degrees)
            except PreconditionError:
                continue
            if not I.is_artinian or d > 12:
                continue
            assert semistable(I, d).semistable == wlp_report(I).wlp_q, degrees
            checked += 1
    assert checked >= 20


def test_family_punctures_do_not_touch():
    I, d = balanced_family_ideal([5, 5, 4, 4])
    assert d == 6 and sorted(g.degree for g in I.gens) == [4, 4, 5, 5]
    assert all(g.lcm(h).degree > d for g in I.gens for h in I.gens if g != h)
    with pytest.raises(PreconditionError):
        balanced_family_ideal([5, 5, 4, 5])


# -- type two ----------------------------------------------------------------------------------


def test_type_two_examples():
    form = type_two_classify(ideal("x^4,y^4,z^4,x^3*y,x^3*z"))
    assert form.form == 2
    verdict = type_two_wlp(form)
    assert verdict.region_degrees == (5,) and verdict.failing_degrees == (4,)
    verdict = type_two_wlp(type_two_classify(ideal("x^3,y^7,z^7,x*y^2,x*z^2")))
    assert verdict.region_degrees == (5, 6)


def test_type_two_requires_type_two():
    with pytest.raises(PreconditionError):
        type_two_classify(ideal("x^3,y^3,z^3"))


def test_type_two_matches_report():
    rng = random.Random(45)
    checked = 0
    while checked < 80:
        a, b, c = (rng.randint(2, 9) for _ in range(3))
        al, be = rng.randint(1, a - 1), rng.randint(1, b - 1)
        gens = [(a, 0, 0), (0, b, 0), (0, 0, c), (al, be, 0)]
        if rng.random() < 0.6:
            gens.append((al, 0, rng.randint(1, c - 1)))
        perm = rng.choice(list(permutations(range(3))))
        I = MonomialIdeal.of(*[tuple(g[i] for i in perm) for g in gens])
        if socle(I).type != 2 or sum(I.pure_powers()) > 20:
            continue
        verdict = type_two_wlp(type_two_classify(I))
        report = wlp_report(I)
        assert verdict.wlp_q == report.wlp_q, str(I)
        assert set(verdict.failing_degrees) == {c.j for c in report.degrees if c.delta}
        checked += 1


def test_level_type_two_has_wlp():
    I = ideal("x^3,y^3,z^2,x^2*y^2")
    info = socle(I)
    if info.type == 2 and info.level:
        assert type_two_wlp(type_two_classify(I)).wlp_q and wlp_report(I).wlp_q


# -- almost complete intersections ---------------------------------------------------------------


def test_aci_examples():
    v = aci_decide(5, 5, 3, 1, 1, 2)
    assert v.verdict == "wlp" and v.positive_char_open
    report = wlp_report(aci_ideal(5, 5, 3, 1, 1, 2))
    assert report.fail_chars == (5,)
    assert aci_decide(3, 5, 5, 1, 2, 2).verdict == "fails"
    assert "V'" in aci_decide(3, 5, 5, 1, 2, 2).reason
    assert aci_decide(7, 7, 7, 3, 3, 3).verdict == "fails"
    assert aci_decide(6, 7, 8, 3, 3, 3).verdict == "wlp"


def test_aci_rejects_bad_parameters():
    with pytest.raises(PreconditionError):
        aci_decide(3, 3, 3, 0, 1, 1)


def test_aci_sweep_against_matrix():
    decided = needs = 0
    for a in range(2, 8):
        for b in range(2, 8):
            for c in range(2, 8):
                for al in range(1, a):
                    for be in range(1, b):
                        for ga in range(1, c):
                            v = aci_decide(a, b, c, al, be, ga)
                            if v.only_degree is None:
                                continue
                            if v.verdict == "needs-matrix":
                                needs += 1
                                continue
                            I = aci_ideal(a, b, c, al, be, ga)
                            Z = z_matrix(build_region(I, v.only_degree + 1))
                            full = rank_exact(Z) == min(Z.shape)
                            assert full == (v.verdict == "wlp"), (a, b, c, al, be, ga, v.reason)
                            decided += 1
    assert decided > 100 and needs > 0


def test_aci_only_degree_is_the_only_candidate():
    rng = random.Random(46)
    checked = 0
    while checked < 40:
        a, b, c = (rng.randint(2, 7) for _ in range(3))
        args = (a, b, c, rng.randint(1, a - 1), rng.randint(1, b - 1), rng.randint(1, c - 1))
        v = aci_decide(*args)
        if v.only_degree is None:
            continue
        report = wlp_report(aci_ideal(*args))
        assert set(report.failing_degrees) <= {v.only_degree}
        checked += 1


def test_aci_semistable_matches_subset_test():
    rng = random.Random(47)
    for _ in range(200):
        a, b, c = (rng.randint(2, 8) for _ in range(3))
        args = (a, b, c, rng.randint(1, a - 1), rng.randint(1, b - 1), rng.randint(1, c - 1))
        I = aci_ideal(*args)
        d = Fraction(sum(args), 3)
        # the subset test needs an integral degree; scale by three where necessary
        if d.denominator == 1 and all(g.degree <= d for g in I.gens):
            assert aci_semistable(*args) == semistable(I, int(d)).semistable


def test_axes_central_example():
    assert axes_central(7, 7, 7, 3, 3, 3)
    assert axes_central(6, 7, 8, 3, 3, 3)
    assert not axes_central(5, 5, 3, 1, 1, 2)  # d is not an integer


# -- splitting types --------------------------------------------------------------------------------


@pytest.mark.parametrize("args, expected", [
    ((7, 7, 7, 3, 3, 3), (-11, -10, -9)),
    ((6, 7, 8, 3, 3, 3), (-10, -10, -10)),
    ((4, 5, 5, 3, 1, 1), (-7, -6, -6)),
])
def test_splitting_type_examples(args, expected):
    assert splitting_type_oracle(*args).as_tuple() == expected
    assert splitting_type_closed(*args).value.as_tuple() == expected


def test_splitting_case_one():
    # min(alpha + beta + gamma, c) >= a + b - 1
    a, b, c, al, be, ga = 2, 3, 6, 1, 2, 3
    assert splitting_type_closed(a, b, c, al, be, ga).value.as_tuple() == tuple(sorted((-c, -(al + be + ga), -(a + b))))


def test_splitting_degree_sum():
    rng = random.Random(48)
    for _ in range(300):
        a, b, c = (rng.randint(2, 10) for _ in range(3))
        args = (a, b, c, rng.randint(1, a - 1), rng.randint(1, b - 1), rng.randint(1, c - 1))
        value = splitting_type_closed(*args).value
        assert -sum(value.as_tuple()) == sum(args)


def test_splitting_closed_vs_oracle_sum_to_30():
    checked = 0
    for a in range(2, 13):
        for b in range(a, 13):
            for c in range(b, 13):
                for al in range(1, a):
                    for be in range(1, b):
                        for ga in range(1, c):
                            if a + b + c + al + be + ga > 24:
                                continue
                            args = (a, b, c, al, be, ga)
                            assert splitting_type_closed(*args).value == splitting_type_oracle(*args), args
                            checked += 1
    assert checked > 1000


def test_wlp_verdict_selects_semistable_case():
    assert splitting_type_closed(7, 7, 7, 3, 3, 3, wlp=True).value.as_tuple() == (-10, -10, -10)
    assert splitting_type_closed(7, 7, 7, 3, 3, 3).case == "ss:fails"


def test_regularity_formula_matches_direct():
    checked = 0
    for a in range(1, 8):
        for b in range(1, 8):
            for al in range(0, a):
                for be in range(0, b):
                    for ga in range(0, 8):
                        if al + be + ga == 0 or not two_aci_minimal(a, b, al, be, ga):
                            continue
                        assert reg_two_aci(a, b, al, be, ga) == reg_two_aci_direct(a, b, al, be, ga)
                        checked += 1
    assert checked > 500


def test_two_aci_minimality():
    assert not two_aci_minimal(1, 3, 0, 0, 1)
    assert two_aci_minimal(3, 3, 1, 1, 1)


# -- unit reduction -----------------------------------------------------------------------------------


def test_unit_reduction_example():
    region = build_region(ideal("x^7,y^7,z^6,x*y^4*z^2,x^3*y*z^2,x^4*y*z"), 8)
    reduced = unit_reduction(region)
    assert all(p.side == 1 for p in punctures(reduced))
    assert reduced.balance == region.balance
    assert is_tileable(reduced)


def test_unit_reduction_fixpoint():
    region = build_region(ideal("x^2*y^2*z^2"), 7)
    assert all(p.side == 1 for p in punctures(region))
    assert unit_reduction(region) == region


def test_unit_reduction_preserves_maximal_rank():
    for _, _, region in random_regions(seed=49, count=200, max_d=9, balanced=False):
        reduced = unit_reduction(region)
        assert all(p.side == 1 for p in punctures(reduced))
        assert reduced.balance == region.balance
        Z, R = z_matrix(region), z_matrix(reduced)
        full = 0 in Z.shape or rank_exact(Z) == min(Z.shape)
        full_reduced = 0 in R.shape or rank_exact(R) == min(R.shape)
        assert full == full_reduced


# -- Togliatti systems ---------------------------------------------------------------------------------


def test_togliatti_examples():
    report = togliatti_delta(ideal("x^3,y^3,z^3,x*y*z"), 3)
    assert report.delta == 1 and report.is_togliatti
    assert len(report.inverse_system) == 10 - 4
    assert togliatti_delta(ideal("x^4,y^4,z^4,x^2*y*z,y^2*z^2"), 4).delta == 1
    for d in range(4, 9):
        I = MonomialIdeal.of((d, 0, 0), (0, d, 0), (0, 0, d), (d - 1, 1, 0), (d - 1, 0, 1))
        assert togliatti_delta(I, d).delta == 1
    assert not togliatti_delta(ideal("x^3,y^3,z^3"), 3).is_togliatti


def test_togliatti_requires_single_degree():
    with pytest.raises(PreconditionError):
        togliatti_delta(ideal("x^3,y^3,z^2"), 3)


def test_family_large_kernel():
    J = ideal("x^3,y^3,z^3,x*y*z")
    family = build_togliatti_family(J, 13, 2, 0)
    assert len(family.gens) == 14
    assert degree_check(family, 13).delta == 2
    assert degree_check(family, 14).delta == 0


def test_family_small_image():
    J = ideal("x^3,y^3,z^3,x^2*y,x*z^2,y^2*z")
    for d, j, k in [(8, 1, 1), (9, 1, 2), (10, 1, 0), (14, 2, 1)]:
        family = build_togliatti_family(J, d, j, k)
        assert degree_check(family, d).delta == 2 * j
        assert degree_check(family, d + 1).delta == 2 * j + k - 2


def test_family_rejects_bad_parameters():
    with pytest.raises(PreconditionError):
        build_togliatti_family(ideal("x^3,y^3,z^3,x*y*z"), 13, 4, 0)

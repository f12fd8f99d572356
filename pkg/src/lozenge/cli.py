"""Command line front end. Machine output is compact JSON; ``--pretty`` indents it."""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Any, Sequence

from . import experiments
from .core import (
    Monomial,
    MonomialIdeal,
    TriRegion,
    build_region,
    parse_ideal,
    parse_monomial,
    punctures,
    revlex_sorted,
    socle,
)
from .errors import CAP_ENV_VAR, CapExceededError, PreconditionError, require
from .formulas import mirror_enumeration, mirror_ideal, parse_mirror
from .lefschetz import (
    aci_decide,
    aci_ideal,
    aci_semistable,
    balanced_family_ideal,
    build_togliatti_family,
    ci_wlp,
    degree_check,
    hadamard_char_bound,
    semistable,
    splitting_type_closed,
    splitting_type_oracle,
    togliatti_delta,
    type_two_classify,
    type_two_wlp,
    unit_reduction,
    wlp_report,
)
from .matrix import (
    det_exact,
    maximal_minors,
    n_matrix,
    permanent_exact,
    rank_profile,
    z_matrix,
)
from .render import ascii_region, svg_region, write_svg
from .tiling import canonical_tiling, count_tilings, enumerate_tilings, is_tileable

EXIT_PRECONDITION = 2
EXIT_CAP = 3


# -- parsing helpers ------------------------------------------------------------


def _int_list(text: str, n: int | None = None) -> list[int]:
    try:
        vals = [int(v) for v in text.replace(" ", "").split(",") if v]
    except ValueError:
        raise PreconditionError(f"expected comma separated integers, got {text!r}") from None
    if n is not None and len(vals) != n:
        raise PreconditionError(f"expected {n} integers, got {len(vals)}")
    return vals


def _canonical_degree(ideal: MonomialIdeal) -> int | None:
    """``d`` for complete and almost complete intersections, when it is determined."""
    a, b, c = ideal.pure_powers()
    if None in (a, b, c):
        return None
    if len(ideal.gens) == 3:
        return (a + b + c) // 2
    if len(ideal.gens) == 4:
        total = sum(g.degree for g in ideal.gens)
        if total % 3 == 0:
            return total // 3
    return None


def region_to_json(region: TriRegion) -> dict:
    return {
        "d": region.d,
        "up": [str(m) for m in region.ups],
        "down": [str(m) for m in region.downs],
        "zeroPunctures": [str(m) for m in revlex_sorted(region.zero_punctures)],
    }


def region_from_json(data: dict) -> TriRegion:
    try:
        return TriRegion(
            int(data["d"]),
            frozenset(parse_monomial(s) for s in data["up"]),
            frozenset(parse_monomial(s) for s in data["down"]),
            frozenset(parse_monomial(s) for s in data.get("zeroPunctures", [])),
        )
    except (KeyError, TypeError) as exc:
        raise PreconditionError(f"malformed region dump: missing or invalid {exc}") from None


def _ideal_arg(args) -> MonomialIdeal | None:
    if getattr(args, "aci", None):
        return aci_ideal(*_int_list(args.aci, 6))
    if getattr(args, "ideal", None):
        return parse_ideal(args.ideal)
    return None


def _region(args) -> TriRegion:
    if getattr(args, "region", None):
        try:
            data = json.loads(Path(args.region).read_text())
        except OSError as exc:
            raise PreconditionError(f"cannot read {args.region}: {exc.strerror}") from None
        except json.JSONDecodeError as exc:
            raise PreconditionError(f"{args.region} is not JSON: {exc.msg}") from None
        return region_from_json(data)
    if getattr(args, "mirror", None):
        ideal, d = mirror_ideal(parse_mirror(args.mirror))
        return build_region(ideal, args.d or d)
    ideal = _ideal_arg(args)
    if ideal is None:
        raise PreconditionError("give --ideal, --aci, --mirror or --region")
    d = args.d if args.d is not None else _canonical_degree(ideal)
    if d is None:
        raise PreconditionError("--d is required for this ideal")
    return build_region(ideal, d)


def _frac(v: Fraction) -> str:
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def _puncture_json(region: TriRegion) -> list[dict]:
    return [{"corner": str(p.corner), "side": p.side, "floating": p.floating, "axial": p.axial}
            for p in punctures(region)]


# -- verbs --------------------------------------------------------------------------


def cmd_region(args) -> Any:
    region = _region(args)
    if args.dump:
        return region_to_json(region)
    return {
        "d": region.d,
        "ups": len(region.up),
        "downs": len(region.down),
        "balance": region.balance,
        "punctures": _puncture_json(region),
        "tileable": is_tileable(region),
    }


def cmd_render(args) -> Any:
    region = _region(args)
    tiling = canonical_tiling(region) if args.tiling else None
    if args.tiling and tiling is None:
        raise PreconditionError("the region is not tileable")
    if args.svg:
        write_svg(args.svg, region, tiling)
        removed = (region.d * (region.d + 1)) // 2 - len(region.up) + (region.d * (region.d - 1)) // 2 - len(region.down)
        return {"svg": args.svg, "shaded": removed, "lozenges": len(tiling) if tiling else 0}
    if args.svg_stdout:
        return svg_region(region, tiling)
    return ascii_region(region) + "\n"


def cmd_det(args) -> Any:
    region = _region(args)
    require(region.is_balanced, f"the region is not balanced ({region.balance} more upward triangles)")
    Z = z_matrix(region)
    if args.matrix:
        M = n_matrix(region) if args.n else Z
        return M.to_csv() if args.matrix == "csv" else M.to_grid() + "\n"
    out: dict = {"det": det_exact(Z)}
    if not args.no_per:
        out["per"] = permanent_exact(Z, cap=args.cap)
    if args.n:
        out["detN"] = det_exact(n_matrix(region))
    return out


def cmd_per(args) -> Any:
    region = _region(args)
    require(region.is_balanced, f"the region is not balanced ({region.balance} more upward triangles)")
    return {"per": permanent_exact(z_matrix(region), cap=args.cap)}


def cmd_tilings(args) -> Any:
    region = _region(args)
    canon = canonical_tiling(region)
    out: dict = {"count": count_tilings(region, cap=args.cap),
                 "canonical": canon.serialize() if canon else None}
    if args.list:
        out["tilings"] = sorted(t.serialize() for t in enumerate_tilings(region, cap=args.cap))
    return out


def cmd_wlp(args) -> Any:
    ideal = _ideal_arg(args)
    if ideal is None:
        raise PreconditionError("give --ideal or --aci")
    out = wlp_report(ideal).to_json()
    classification: dict = {}
    a, b, c = ideal.pure_powers()
    if len(ideal.gens) == 3:
        ci = ci_wlp(a, b, c)
        classification["ci"] = {"alwaysWlp": ci.always_wlp, "failingPrimes": list(ci.failing_primes),
                                "values": list(ci.values)}
    if len(ideal.gens) == 4:
        mixed = [g for g in ideal.gens if sum(1 for e in g if e) == 3]
        if mixed:
            v = aci_decide(a, b, c, *mixed[0])
            classification["aci"] = {"verdict": v.verdict, "reason": v.reason, "d": _frac(v.d),
                                     "onlyDegree": v.only_degree}
    if socle(ideal).type == 2:
        form = type_two_classify(ideal)
        tt = type_two_wlp(form)
        classification["typeTwo"] = {"form": form.form, "wlpQ": tt.wlp_q,
                                     "failingDegrees": list(tt.failing_degrees)}
    if classification:
        out["classification"] = classification
    if args.bound:
        out["hadamardBound"] = hadamard_char_bound(ideal)
    return out


def cmd_primes(args) -> Any:
    region = _region(args)
    prof = rank_profile(z_matrix(region))
    out: dict = {
        "shape": list(prof.shape),
        "rank": prof.rank,
        "maximal": prof.maximal,
        "minorGcd": prof.minor_gcd,
        "factorization": {str(p): e for p, e in prof.factorization.items()},
    }
    if args.minors:
        wit = maximal_minors(region, restricted=args.restricted, cap=args.cap, lattice_rotation=args.rotation)
        out["minors"] = [{"removed": [str(m) for m in w.removed], "value": w.value} for w in wit]
    return out


def cmd_semistable(args) -> Any:
    ideal = _ideal_arg(args)
    if ideal is None:
        raise PreconditionError("give --ideal or --aci")
    s = semistable(ideal, args.d)
    return {
        "slope": _frac(s.slope),
        "semistable": s.semistable,
        "stable": s.stable,
        "witness": [str(m) for m in s.witness],
        "witnessGcd": str(s.witness_gcd) if s.witness_gcd is not None else None,
    }


def cmd_splitting(args) -> Any:
    params = _int_list(args.aci, 6)
    closed = splitting_type_closed(*params)
    return {
        "oracle": list(splitting_type_oracle(*params).as_tuple()),
        "closed": list(closed.value.as_tuple()) if closed.value else None,
        "case": closed.case,
        "semistable": aci_semistable(*params),
    }


def cmd_mirror(args) -> Any:
    params = parse_mirror(args.params)
    params.validate()
    enum = mirror_enumeration(params)
    out: dict = {
        "params": str(params),
        "d": params.d,
        "case": enum.case,
        "oddAxials": params.odd_axials,
        "per": enum.per,
        "detAbs": enum.det_abs,
    }
    if args.check:
        ideal, d = mirror_ideal(params)
        Z = z_matrix(build_region(ideal, d))
        out["matrix"] = {"per": permanent_exact(Z, cap=args.cap), "det": det_exact(Z)}
    return out


def cmd_togliatti(args) -> Any:
    ideal = _ideal_arg(args)
    if ideal is None:
        raise PreconditionError("give --ideal")
    rep = togliatti_delta(ideal, args.d)
    return {"togliatti": rep.is_togliatti, "delta": rep.delta,
            "inverseSystem": [str(m) for m in rep.inverse_system]}


def cmd_reduce_unit(args) -> Any:
    region = _region(args)
    reduced = unit_reduction(region)
    return {
        "balance": reduced.balance,
        "maximalBefore": rank_profile(z_matrix(region)).maximal,
        "maximalAfter": rank_profile(z_matrix(reduced)).maximal,
        "punctures": _puncture_json(reduced),
        "region": region_to_json(reduced),
    }


def _check_json(c) -> dict:
    return c.to_json()


def cmd_family(args) -> Any:
    if args.degrees:
        ideal, d = balanced_family_ideal(_int_list(args.degrees))
        s = semistable(ideal, d)
        return {"ideal": str(ideal), "d": d, "semistable": s.semistable,
                "wlpQ": wlp_report(ideal).wlp_q}
    if not args.base or args.d is None or args.j is None:
        raise PreconditionError("give --degrees, or --base with --d, --j and --k")
    ideal = build_togliatti_family(parse_ideal(args.base), args.d, args.j, args.k)
    return {
        "ideal": str(ideal),
        "generators": len(ideal.gens),
        "checks": [_check_json(degree_check(ideal, j)) for j in (args.d, args.d + 1)],
    }


def cmd_experiment(args) -> Any:
    if args.name == "zero-mirror":
        return experiments.zero_mirror_table(args.max_d)
    return experiments.type_two_char_table(args.samples, args.max_d, args.seed)


# -- argument grammar ---------------------------------------------------------------


def _add_region_source(p: argparse.ArgumentParser) -> None:
    src = p.add_mutually_exclusive_group()
    src.add_argument("--ideal", help='generators, e.g. "x^3,y^4,z^5"')
    src.add_argument("--aci", help="a,b,c,alpha,beta,gamma for (x^a, y^b, z^c, x^alpha y^beta z^gamma)")
    src.add_argument("--mirror", help='mirror parameters, e.g. "b=1; axials=(3,2),(0,1)"')
    src.add_argument("--region", help="region JSON written by `region --dump`")
    p.add_argument("--d", type=int, help="side length (defaults to the canonical one when known)")


def _add_ideal_source(p: argparse.ArgumentParser) -> None:
    src = p.add_mutually_exclusive_group()
    src.add_argument("--ideal")
    src.add_argument("--aci")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lozenge", description=__doc__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--pretty", action="store_true", help="indented JSON")
    common.add_argument("--cap", type=int, default=None, help=f"search cap (default from {CAP_ENV_VAR})")
    sub = parser.add_subparsers(dest="verb", required=True, metavar="verb")

    def verb(name, func, help_text):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.set_defaults(func=func)
        return p

    p = verb("region", cmd_region, "summary of T_d(I)")
    _add_region_source(p)
    p.add_argument("--dump", action="store_true", help="print the region as reloadable JSON")

    p = verb("render", cmd_render, "ASCII or SVG picture")
    _add_region_source(p)
    out = p.add_mutually_exclusive_group()
    out.add_argument("--ascii", action="store_true", help="ASCII rows (default)")
    out.add_argument("--svg", metavar="PATH", help="write SVG to PATH")
    out.add_argument("--svg-stdout", action="store_true", help="print SVG")
    p.add_argument("--tiling", action="store_true", help="overlay the canonical tiling")

    p = verb("det", cmd_det, "det and per of Z(T)")
    _add_region_source(p)
    p.add_argument("--n", action="store_true", help="also det N(T)")
    p.add_argument("--no-per", action="store_true", help="skip the permanent")
    p.add_argument("--matrix", choices=("grid", "csv"), help="print the matrix instead")

    p = verb("per", cmd_per, "permanent of Z(T)")
    _add_region_source(p)

    p = verb("tilings", cmd_tilings, "count tilings")
    _add_region_source(p)
    p.add_argument("--list", action="store_true", help="list every tiling")

    p = verb("wlp", cmd_wlp, "weak Lefschetz report")
    _add_ideal_source(p)
    p.add_argument("--bound", action="store_true", help="include the Hadamard characteristic bound")

    p = verb("primes", cmd_primes, "rank and maximal-minor gcd of Z(T)")
    _add_region_source(p)
    p.add_argument("--minors", action="store_true", help="list maximal minors")
    p.add_argument("--restricted", action="store_true", help="only lattice-restricted minors")
    p.add_argument("--rotation", type=int, default=0, help="rotation whose lattice restricts the minors")

    p = verb("semistable", cmd_semistable, "syzygy bundle semistability")
    _add_ideal_source(p)
    p.add_argument("--d", type=int)

    p = verb("splitting-type", cmd_splitting, "generic splitting type of an almost complete intersection")
    p.add_argument("--aci", required=True)

    p = verb("mirror", cmd_mirror, "mirror symmetric enumeration")
    p.add_argument("params", help='e.g. "b=1; axials=(3,2),(0,1)"')
    p.add_argument("--check", action="store_true", help="compare with the matrix")

    p = verb("togliatti", cmd_togliatti, "Laplace equation count")
    p.add_argument("--ideal", required=True)
    p.add_argument("--d", type=int)

    p = verb("reduce-unit", cmd_reduce_unit, "reduction to unit punctures")
    _add_region_source(p)

    p = verb("family", cmd_family, "build an ideal family")
    p.add_argument("--degrees", help="d_1,..,d_t for the non-touching family")
    p.add_argument("--base", help="J for the Togliatti family")
    p.add_argument("--d", type=int)
    p.add_argument("--j", type=int)
    p.add_argument("--k", type=int, default=0)

    p = verb("experiment", cmd_experiment, "conjecture tables (not asserted)")
    p.add_argument("name", choices=("zero-mirror", "type-two-char"))
    p.add_argument("--max-d", type=int, default=8)
    p.add_argument("--samples", type=int, default=30)
    p.add_argument("--seed", type=int, default=0)
    return parser


def _default(o):
    if isinstance(o, Fraction):
        return _frac(o)
    if isinstance(o, Monomial):
        return str(o)
    raise TypeError(f"cannot serialise {type(o).__name__}")


def run(argv: Sequence[str] | None = None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        result = args.func(args)
    except PreconditionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except CapExceededError as exc:
        print(f"cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP
    if isinstance(result, str):
        stdout.write(result)
    elif args.pretty:
        stdout.write(json.dumps(result, indent=2, default=_default) + "\n")
    else:
        stdout.write(json.dumps(result, separators=(",", ":"), default=_default) + "\n")
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()

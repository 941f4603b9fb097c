"""Batch front-end: load monoids and modules from JSON, run computations or
verification suites, and emit deterministic machine-readable reports.

Exit codes: 0 success, 1 verification failure, 2 malformed input.
"""

from __future__ import annotations

import argparse
import sys

from . import jsonio
from .jsonio import FormatError
from .monoids import FiniteMonoid, MonoidError, direct_product, setup_from_group


def _int_list(text: str) -> list[int]:
    if not text:
        return []
    try:
        return [int(x) for x in text.replace(" ", "").split(",") if x != ""]
    except ValueError:
        raise FormatError(f"expected a comma-separated integer list, got {text!r}")


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--monoid", help="monoid JSON file")
    parser.add_argument("--dmonoid", help="JSON file of the commutative factor")
    parser.add_argument("--module", help="module JSON file")
    parser.add_argument("--subgroup", help="subgroup as index list, e.g. 0,4,5")
    parser.add_argument("--normal", help="filtration subgroup as index list")
    parser.add_argument("--section", help="section representatives as index list")
    parser.add_argument("--max-degree", type=int, default=2)
    parser.add_argument("--pages", help="page numbers, e.g. 1,2,5")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--out", help="output path (defaults to stdout)")
    parser.add_argument("--format", choices=("json", "csv"), default="json")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="monocoh",
        description="exact cohomology of finite monoids",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    comp = sub.add_parser("compute", help="run one computation")
    comp.add_argument(
        "what", choices=("cohomology", "spectral", "shapiro", "double", "torsor")
    )
    _add_common(comp)

    ver = sub.add_parser("verify", help="run identity suites")
    _add_common(ver)
    ver.add_argument(
        "--suite", default="all",
        help="coboundary|shapiro|shuffle|spectral|double|torsor|all",
    )
    ver.add_argument("--samples", type=int, default=None,
                     help="random samples per pointwise identity")
    ver.add_argument(
        "--corrupt", choices=("kappa-sign", "shuffle-sign", "delta-sign"),
        help="testing hook: flip one sign family before running",
    )
    return parser


def _require(args, *names):
    for name in names:
        if getattr(args, name.replace("-", "_"), None) is None:
            raise FormatError(f"--{name} is required for this command")


def _load_monoid(path: str) -> FiniteMonoid:
    return jsonio.monoid_from_json(jsonio.load_json(path))


def _as_setup(monoid: FiniteMonoid):
    if monoid.is_group():
        return setup_from_group(monoid)
    if monoid.is_commutative():
        return direct_product([FiniteMonoid.trivial(), monoid])
    raise FormatError(
        "monoid must be a group or commutative for the structured commands"
    )


def cmd_compute(args) -> tuple[int, dict]:
    from .cochains import cohomology_groups

    if args.what == "cohomology":
        _require(args, "monoid", "module")
        monoid = _load_monoid(args.monoid)
        module = jsonio.module_from_json(jsonio.load_json(args.module), monoid)
        groups = cohomology_groups(module, args.max_degree)
        return 0, {
            "command": "cohomology",
            "max_degree": args.max_degree,
            "degrees": {
                str(n): jsonio.canonical_to_json(g.canonical)
                for n, g in enumerate(groups)
            },
        }

    if args.what == "spectral":
        from .monoids import quotient_with_section
        from .spectral import FilteredComplex

        _require(args, "monoid", "module", "normal")
        monoid = _load_monoid(args.monoid)
        module = jsonio.module_from_json(jsonio.load_json(args.module), monoid)
        setup = _as_setup(monoid)
        section = _int_list(args.section) if args.section else None
        qdata = quotient_with_section(setup, _int_list(args.normal), section)
        fc = FilteredComplex(module, qdata, args.max_degree)
        pages = _int_list(args.pages) if args.pages else [1, 2]
        stable = args.max_degree + 2
        out_pages = []
        for r in pages:
            page = fc.page(min(r, stable) if r > 0 else stable)
            data = jsonio.page_to_json(page)
            data["requested"] = r
            out_pages.append(data)
        return 0, {
            "command": "spectral",
            "max_degree": args.max_degree,
            "stable_r": stable,
            "pages": out_pages,
        }

    if args.what == "shapiro":
        from .cochains import cohomology_groups as cg
        from .monoids import submonoid
        from .shapiro import shapiro_context

        _require(args, "monoid", "module", "subgroup")
        monoid = _load_monoid(args.monoid)
        subgroup = _int_list(args.subgroup)
        sub, _, _ = submonoid(monoid, subgroup)
        module = jsonio.module_from_json(jsonio.load_json(args.module), sub)
        ctx = shapiro_context(monoid, subgroup, module)
        lhs = cg(ctx.ind, args.max_degree)
        rhs = cg(ctx.coeff, args.max_degree)
        degrees = {}
        ok = True
        for n in range(args.max_degree + 1):
            match = lhs[n].canonical == rhs[n].canonical
            ok = ok and match
            degrees[str(n)] = {
                "induced": jsonio.canonical_to_json(lhs[n].canonical),
                "subgroup": jsonio.canonical_to_json(rhs[n].canonical),
                "match": match,
            }
        return (0 if ok else 1), {
            "command": "shapiro", "degrees": degrees, "match": ok,
        }

    if args.what == "double":
        from .doublecomplex import DoubleComplex, product_with_factor

        _require(args, "monoid", "dmonoid", "module")
        gmon = _load_monoid(args.monoid)
        dmon = _load_monoid(args.dmonoid)
        g = _as_setup(gmon)
        prod = product_with_factor(g, dmon)
        module = jsonio.module_from_json(
            jsonio.load_json(args.module), prod.product
        )
        dc = DoubleComplex(dmon, g, module, args.max_degree)
        rep = dc.quasi_iso_report(args.max_degree)
        ok = all(v["match"] for v in rep.values())
        return (0 if ok else 1), {
            "command": "double",
            "degrees": {
                str(n): {
                    "product": jsonio.canonical_to_json(v["product"]),
                    "total": jsonio.canonical_to_json(v["total"]),
                    "match": v["match"],
                }
                for n, v in rep.items()
            },
            "match": ok,
        }

    if args.what == "torsor":
        from .cochains import CochainComplex, cohomology_groups as cg
        from .torsors import (
            cocycle_to_torsor,
            one_cocycle_classes,
            torsor_to_cocycle,
        )

        _require(args, "monoid", "module")
        monoid = _load_monoid(args.monoid)
        module = jsonio.module_from_json(jsonio.load_json(args.module), monoid)
        if not module.carrier.is_finite():
            raise FormatError("torsor enumeration needs finite coefficients")
        classes = one_cocycle_classes(module)
        h1 = cg(module, 1)[1]
        cx = CochainComplex(module, 1)
        round_trips = all(
            cx.cohomologous(torsor_to_cocycle(cocycle_to_torsor(cls[0])), cls[0])
            for cls in classes
        )
        ok = round_trips and h1.order() == len(classes)
        return (0 if ok else 1), {
            "command": "torsor",
            "classes": len(classes),
            "h1": jsonio.canonical_to_json(h1.canonical),
            "round_trips_ok": round_trips,
            "count_matches_h1": h1.order() == len(classes),
        }

    raise FormatError(f"unknown computation: {args.what}")


def cmd_verify(args) -> tuple[int, dict]:
    from .suites import SUITES, apply_corruption, run_suites

    if args.corrupt:
        apply_corruption(args.corrupt)
    names = list(SUITES) if args.suite == "all" else [args.suite]
    for name in names:
        if name not in SUITES:
            raise FormatError(
                f"unknown suite {name!r}; choose from {sorted(SUITES)} or 'all'"
            )
    items = run_suites(
        names, args.seed,
        degree_bound=args.max_degree,
        n_max=args.max_degree,
        total_bound=max(args.max_degree, 2) + 2,
        samples=args.samples,
    )
    ok = all(item["pass"] for item in items)
    report = {
        "command": "verify",
        "suites": names,
        "seed": args.seed,
        "checks": items,
        "pass": ok,
    }
    return (0 if ok else 1), report


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "compute":
            code, report = cmd_compute(args)
        else:
            code, report = cmd_verify(args)
    except (FormatError, MonoidError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    text = jsonio.dump_report(report, args.out, args.format)
    if not args.out:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())

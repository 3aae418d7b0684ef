"""Batch command line front end.

Subcommands: compute, fine-interior, width, condition-m, class-group,
subdivide, ledger, construct, bounds-table, verify-paper.  All flags are
long flags; input documents use the JSON interchange format.  Exit codes:
0 success, 1 verification failure, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import formats
from .conditionm import check_condition_m
from .errors import SbvolError
from .families import FAMILIES, bounds_table, build, builtin_seed_registry
from .hodge import h_p0_compact
from .ledger import verdict, volume_ledger
from .subdivision import distance_height, regular_subdivision, validate
from .toric import class_group, fine_interior, kodaira_dimension
from .verification import run_all


def _read_document(path):
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _load_polytope(path):
    return formats.load_polytope(_read_document(path))


def _emit(doc, output):
    text = formats.dumps(doc)
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _fraction_vertices(rp):
    return [[formats.fraction_str(x) for x in v] for v in rp.vertices()]


def _compute_report(name, p, which, max_points):
    report = {"name": name, "ambient_dim": p.ambient_dim, "dim": p.dim()}
    q, _ = p.normalize_full_dimensional()
    if which("width") and p.dim() >= 1:
        w, cert = p.lattice_width()
        report["width"] = w
        report["width_certificate"] = list(cert)
    if which("classify"):
        c = p.classify(budget=max_points)
        report["classification"] = {
            "empty": c.is_empty_polytope,
            "empty_simplex": c.is_empty_simplex,
            "hollow": c.is_hollow,
            "relatively_empty": c.is_relatively_empty,
        }
        report["lattice_points"] = p.n_lattice_points()
        report["interior_points"] = p.n_interior_points()
    if which("fine-interior") and p.dim() >= 1:
        fi = fine_interior(q)
        report["fine_interior"] = {
            "empty": fi.is_empty,
            "dim": fi.dim,
            "is_lattice": fi.is_lattice,
            "vertices": _fraction_vertices(fi.polytope) if not fi.is_empty else [],
        }
        kappa = kodaira_dimension(q, fi)
        report["kodaira_dimension"] = "-infinity" if kappa == float("-inf") else kappa
        report["general_type"] = kappa == p.dim() - 1
    if which("class-group") and p.dim() >= 1:
        g = class_group(q)
        report["class_group"] = {
            "free_rank": g.free_rank,
            "invariant_factors": list(g.invariant_factors),
            "ample_free": list(g.ample_class().free),
            "ample_torsion": list(g.ample_class().torsion),
        }
    if which("condition-m") and p.dim() >= 1:
        rep = check_condition_m(q)
        report["condition_m"] = {
            "holds": rep.holds,
            "mode": rep.mode,
            "witnesses": [list(w) if w else None for w in rep.witnesses],
        }
    if which("hodge") and p.dim() >= 2:
        row = h_p0_compact(q)
        report["hodge_row"] = list(row.values)
        report["hodge_row_by_face_sum"] = list(row.by_face_sum)
    return report


def cmd_compute(args):
    name, p = _load_polytope(args.input)
    chosen = [
        key
        for key in ("width", "classify", "fine-interior", "class-group", "condition-m", "hodge")
        if getattr(args, key.replace("-", "_"))
    ]
    if args.all or not chosen:
        which = lambda key: True
    else:
        which = lambda key: key in chosen
    _emit(_compute_report(name, p, which, args.max_points), args.output)
    return 0


def cmd_fine_interior(args):
    name, p = _load_polytope(args.input)
    q, _ = p.normalize_full_dimensional()
    fi = fine_interior(q)
    _emit(
        {
            "name": name,
            "empty": fi.is_empty,
            "dim": fi.dim,
            "is_lattice": fi.is_lattice,
            "vertices": _fraction_vertices(fi.polytope) if not fi.is_empty else [],
            "generators": [list(g) for g in fi.generators],
        },
        args.output,
    )
    return 0


def cmd_width(args):
    name, p = _load_polytope(args.input)
    w, cert = p.lattice_width()
    _emit({"name": name, "width": w, "certificate": list(cert)}, args.output)
    return 0


def cmd_condition_m(args):
    name, p = _load_polytope(args.input)
    q, _ = p.normalize_full_dimensional()
    rep = check_condition_m(q, mode=args.mode, budget=args.budget)
    fan = rep.group.fan
    _emit(
        {
            "name": name,
            "mode": rep.mode,
            "holds": rep.holds,
            "rays": [list(u) for u in fan.rays],
            "witnesses": [list(w) if w else None for w in rep.witnesses],
        },
        args.output,
    )
    return 0


def cmd_class_group(args):
    name, p = _load_polytope(args.input)
    q, _ = p.normalize_full_dimensional()
    g = class_group(q)
    _emit(
        {
            "name": name,
            "free_rank": g.free_rank,
            "invariant_factors": list(g.invariant_factors),
            "rays": [list(u) for u in g.fan.rays],
            "ray_degrees": [
                {"free": list(g.ray_degree(i).free), "torsion": list(g.ray_degree(i).torsion)}
                for i in range(g.fan.n_rays)
            ],
            "ample": {
                "free": list(g.ample_class().free),
                "torsion": list(g.ample_class().torsion),
            },
        },
        args.output,
    )
    return 0


def _subdivision_from_request(args):
    name, p = _load_polytope(args.input)
    q, _ = p.normalize_full_dimensional()
    if args.heights:
        doc = json.loads(_read_document(args.heights))
        heights = formats.heights_from_doc(doc)
    elif args.recipe == "trivial":
        heights = {x: Fraction(0) for x in q.lattice_points()}
    elif args.recipe == "distance":
        if not args.target:
            raise SbvolError("--recipe distance needs --target")
        _, delta = _load_polytope(args.target)
        heights = distance_height(q, delta)
    else:
        raise SbvolError("provide --heights or --recipe trivial|distance")
    return name, q, regular_subdivision(q, heights)


def cmd_subdivide(args):
    name, q, s = _subdivision_from_request(args)
    rep = validate(s)
    doc = formats.subdivision_to_dict(s)
    doc["name"] = name
    doc["valid"] = rep.ok
    doc["checks"] = [{"name": n, "ok": ok, "detail": d} for n, ok, d in rep.checks]
    _emit(doc, args.output)
    return 0


def cmd_ledger(args):
    name, q, s = _subdivision_from_request(args)
    seeds = builtin_seed_registry() if args.seeds == "builtin" else None
    led = volume_ledger(q, s, seeds)
    v = verdict(led)
    doc = formats.ledger_to_dict(led, v)
    doc["name"] = name
    _emit(doc, args.output)
    return 1 if args.expect_obstructed and v.status != "obstructed" else 0


def cmd_construct(args):
    params = [int(x) for x in args.args]
    if args.family == "simplex_product":
        if len(params) % 2 != 0:
            raise SbvolError("simplex_product takes pairs: d1 n1 d2 n2 ...")
        p = build(args.family, list(zip(params[::2], params[1::2])))
    else:
        p = build(args.family, *params)
    _emit(formats.polytope_to_dict(p, args.name or args.family), args.output)
    return 0


def cmd_bounds_table(args):
    rows, grid = bounds_table(range(args.n_min, args.n_max + 1), args.kind)
    if args.grid:
        lines = ["N\td\tstatus"]
        lines += [f"{n}\t{d}\t{status}" for n, d, status in grid]
        text = "\n".join(lines) + "\n"
        if args.output:
            with open(args.output, "w", encoding="utf-8") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
        return 0
    doc = {
        "kind": args.kind,
        "rows": [
            {
                "n": r.n,
                "degree": r.degree,
                "N_min": r.n_min,
                "N_max_baseline": r.n_max_baseline,
                "N_max": r.n_max,
            }
            for r in rows
        ],
        "grid": [{"N": n, "d": d, "status": status} for n, d, status in grid],
    }
    _emit(doc, args.output)
    return 0


def cmd_verify_paper(args):
    results = run_all(only=args.only)
    if not results:
        print(f"no criterion matches {args.only!r}", file=sys.stderr)
        return 2
    failures = 0
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        print(f"{status} {r.name} ({r.seconds:.2f}s / {r.budget:.0f}s) {r.detail}")
        if not r.passed:
            failures += 1
    print(f"{len(results) - failures}/{len(results)} criteria passed")
    return 0 if failures == 0 else 1


def build_parser():
    parser = argparse.ArgumentParser(
        prog="sbvol",
        description="Exact lattice-polytope invariants and obstruction ledgers",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_io(sp, needs_input=True):
        if needs_input:
            sp.add_argument("--input", required=True, help="polytope document (JSON)")
        sp.add_argument("--output", default=None, help="write the report here")

    sp = sub.add_parser("compute", help="invariant report for a polytope")
    add_io(sp)
    sp.add_argument("--all", action="store_true")
    for flag in ("width", "classify", "fine-interior", "class-group", "condition-m", "hodge"):
        sp.add_argument(f"--{flag}", action="store_true")
    sp.add_argument("--max-points", type=int, default=5_000_000)
    sp.set_defaults(fn=cmd_compute)

    sp = sub.add_parser("fine-interior", help="the shifted-halfspace interior")
    add_io(sp)
    sp.set_defaults(fn=cmd_fine_interior)

    sp = sub.add_parser("width", help="exact lattice width with certificate")
    add_io(sp)
    sp.set_defaults(fn=cmd_width)

    sp = sub.add_parser("condition-m", help="monomial boundary cover check")
    add_io(sp)
    sp.add_argument("--mode", choices=("reduced", "unrestricted"), default="reduced")
    sp.add_argument("--budget", type=int, default=2_000_000, help="witness search node budget")
    sp.set_defaults(fn=cmd_condition_m)

    sp = sub.add_parser("class-group", help="divisor class group data")
    add_io(sp)
    sp.set_defaults(fn=cmd_class_group)

    sp = sub.add_parser("subdivide", help="regular subdivision from heights or a recipe")
    add_io(sp)
    sp.add_argument("--heights", default=None, help="height table document")
    sp.add_argument("--recipe", choices=("trivial", "distance"), default=None)
    sp.add_argument("--target", default=None, help="target polytope for distance heights")
    sp.set_defaults(fn=cmd_subdivide)

    sp = sub.add_parser("ledger", help="obstruction ledger of a subdivision")
    add_io(sp)
    sp.add_argument("--heights", default=None)
    sp.add_argument("--recipe", choices=("trivial", "distance"), default=None)
    sp.add_argument("--target", default=None)
    sp.add_argument("--seeds", choices=("none", "builtin"), default="builtin")
    sp.add_argument("--expect-obstructed", action="store_true")
    sp.set_defaults(fn=cmd_ledger)

    sp = sub.add_parser("construct", help="build a named polytope family member")
    sp.add_argument("--family", required=True, choices=sorted(FAMILIES))
    sp.add_argument("--args", nargs="*", default=[])
    sp.add_argument("--name", default=None)
    sp.add_argument("--output", default=None)
    sp.set_defaults(fn=cmd_construct)

    sp = sub.add_parser("bounds-table", help="covered dimension ranges per degree")
    sp.add_argument("--kind", choices=("hypersurface", "double_cover"), default="hypersurface")
    sp.add_argument("--n-min", type=int, default=3)
    sp.add_argument("--n-max", type=int, default=6)
    sp.add_argument("--grid", action="store_true", help="emit the tab-separated grid")
    sp.add_argument("--output", default=None)
    sp.set_defaults(fn=cmd_bounds_table)

    sp = sub.add_parser("verify-paper", help="run the acceptance suite")
    sp.add_argument("--only", default=None, help="substring filter on criterion names")
    sp.set_defaults(fn=cmd_verify_paper)

    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.fn(args)
    except (SbvolError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

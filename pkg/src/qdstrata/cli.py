r"""
Command-line interface ``qdstrata``.

Subcommands::

    qdstrata enumerate STRATUM [--count-only] [--json] [--jobs N]
    qdstrata boundary CONFIG.json [--json]
    qdstrata validate CONFIG.json [--json]
    qdstrata surface info FILE.surf [--json]
    qdstrata surface families FILE.surf --L R [--json]
    qdstrata surface count FILE.surf --L R [--steps K] [--csv] [--json] [--jobs N]
    qdstrata genus2-table [--json] [--jobs N]

Exit status is 0 on success, 1 for unreadable or invalid input and 2 when
the input is well formed but describes an empty stratum.  Surfaces with
trivial linear holonomy are reported as invalid input.  ``QDSTRATA_JOBS`` sets the default of
``--jobs``.

    >>> main(["enumerate", "Q(2,2)", "--count-only"])
    3
    0
    >>> main(["enumerate", "Q(4)"])
    2
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from .configuration import (Configuration, ConfigurationError, boundary_text, canonical_form,
                            principal_boundary, singularity_data, validate)
from .confgraph import CYL
from .counter import collections_up_to, csv_report, growth_report
from .enumerator import enumerate_configurations, genus2_table
from .flatsurface import FlatSurface, SurfaceError
from .strata import QSingularityData, StratumError, is_empty_q, parse_stratum

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_REJECTED = 2


class CliError(Exception):
    def __init__(self, message: str, code: int = EXIT_INPUT):
        super().__init__(message)
        self.code = code


def _emit(text: str = "") -> None:
    sys.stdout.write(text + "\n")


def _emit_json(data) -> None:
    _emit(json.dumps(data, indent=2, sort_keys=True))


def _fraction(text: str) -> Fraction:
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError("not a rational number: %r" % text) from exc
    if value <= 0:
        raise argparse.ArgumentTypeError("must be positive: %r" % text)
    return value


# ---------------------------------------------------------------------------
# configurations


def _boundary_entries(c: Configuration) -> list[dict]:
    return [{"vertex": v, "kind": c.kinds[v], "stratum": str(st)}
            for v, st in principal_boundary(c)]


def cmd_enumerate(args) -> int:
    try:
        alpha = parse_stratum(args.stratum)
    except StratumError as exc:
        raise CliError(str(exc)) from exc
    if not isinstance(alpha, QSingularityData):
        raise CliError("enumeration needs a stratum of quadratic differentials Q(...)")
    if not alpha.is_valid():
        raise CliError("invalid singularity data %s: %s" % (alpha, "; ".join(alpha.problems())))
    if is_empty_q(alpha):
        raise CliError("empty stratum %s" % alpha, EXIT_REJECTED)
    configs = enumerate_configurations(alpha, jobs=args.jobs)
    if args.count_only:
        _emit(json.dumps({"stratum": str(alpha), "count": len(configs)}) if args.json
              else str(len(configs)))
        return EXIT_OK
    if args.json:
        _emit_json({"stratum": str(alpha), "count": len(configs), "configurations": [
            {"canonical": canonical_form(c), "configuration": c.to_dict(),
             "boundary": _boundary_entries(c), "boundary_text": boundary_text(principal_boundary(c))}
            for c in configs]})
        return EXIT_OK
    _emit("# stratum %s: %d configurations" % (alpha, len(configs)))
    for idx, c in enumerate(configs, 1):
        _emit()
        _emit("# configuration %d of %d" % (idx, len(configs)))
        _emit("# canonical: %s" % canonical_form(c))
        for line in c.describe().splitlines():
            _emit("#   " + line)
        _emit("# boundary: %s" % (boundary_text(principal_boundary(c)) or "(empty)"))
        _emit(c.to_json(indent=2))
    return EXIT_OK


def _load_configuration(path: str) -> Configuration:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise CliError("cannot read %s: %s" % (path, exc)) from exc
    try:
        return Configuration.from_json(text)
    except ConfigurationError as exc:
        raise CliError(str(exc)) from exc


def _invalid(res) -> CliError:
    conds = ", ".join("condition %d" % k for k in res.conditions())
    return CliError("invalid configuration (%s)\n%s" % (conds, res))


def cmd_validate(args) -> int:
    c = _load_configuration(args.file)
    res = validate(c)
    if args.json:
        _emit_json({"ok": res.ok, "violations": [
            {"condition": v.condition, "vertex": v.vertex, "message": v.message}
            for v in res.violations]})
    else:
        _emit("valid" if res.ok else str(res))
    return EXIT_OK if res.ok else EXIT_INPUT


def cmd_boundary(args) -> int:
    c = _load_configuration(args.file)
    res = validate(c)
    if not res.ok:
        raise _invalid(res)
    entries = principal_boundary(c)
    data = singularity_data(c)
    if args.json:
        _emit_json({"singularity_data": str(data), "boundary": _boundary_entries(c),
                    "boundary_text": boundary_text(entries)})
        return EXIT_OK
    _emit("stratum: %s" % data)
    if not entries:
        _emit("boundary: (empty: every component is a cylinder and shrinks away)")
        return EXIT_OK
    for v, st in entries:
        _emit("v%d %s: %s" % (v, c.kinds[v], st))
    _emit("boundary: %s" % boundary_text(entries))
    return EXIT_OK


def cmd_genus2(args) -> int:
    table = genus2_table(jobs=args.jobs)
    if args.json:
        _emit_json({str(a): [canonical_form(c) for c in cs] for a, cs in table.items()})
        return EXIT_OK
    for alpha, configs in table.items():
        _emit("%s: %d configurations" % (alpha, len(configs)))
        for c in configs:
            _emit("  %s  boundary %s" % (canonical_form(c), boundary_text(principal_boundary(c))))
    return EXIT_OK


# ---------------------------------------------------------------------------
# surfaces


def _load_surface(path: str) -> FlatSurface:
    try:
        s = FlatSurface.load(path)
    except SurfaceError as exc:
        raise CliError(str(exc)) from exc
    if s.holonomy_trivial():
        raise CliError("%s has trivial linear holonomy; such surfaces are not supported" % path)
    return s


def _angle_text(k: int) -> str:
    return "pi" if k == 1 else "%dpi" % k


def cmd_surface_info(args) -> int:
    s = _load_surface(args.file)
    points = [{"point": cls, "angle_pi": s.angles[cls], "order": s.angles[cls] - 2}
              for cls in range(len(s.classes))]
    if args.json:
        _emit_json({"polygons": list(s.names), "area": str(s.area()), "points": points,
                    "singularity_data": str(s.singularity_data()), "genus": s.genus(),
                    "holonomy": "nontrivial"})
        return EXIT_OK
    _emit("polygons: %s" % " ".join(s.names))
    _emit("area: %s" % s.area())
    for pt in points:
        _emit("P%d: angle %s, order %d" % (pt["point"], _angle_text(pt["angle_pi"]), pt["order"]))
    _emit("singularity data: %s" % s.singularity_data())
    _emit("genus: %d" % s.genus())
    _emit("linear holonomy: nontrivial")
    return EXIT_OK


def _collection_dict(col) -> dict:
    out = {"direction": list(col.direction), "size": col.size,
           "connections": [{"from": c.start.point, "to": c.end.point,
                            "holonomy": [str(x) for x in c.holonomy]} for c in col.members]}
    if col.configuration is None:
        out["error"] = col.error
    else:
        out["canonical"] = col.config
        out["configuration"] = col.configuration.to_dict()
        out["boundary_text"] = boundary_text(principal_boundary(col.configuration))
    return out


def cmd_surface_families(args) -> int:
    s = _load_surface(args.file)
    cols = collections_up_to(s, args.L, jobs=args.jobs)
    if args.json:
        _emit_json({"L": str(args.L), "families": [_collection_dict(c) for c in cols]})
        return EXIT_OK
    _emit("%d families with all lengths at most %s" % (len(cols), args.L))
    for col in cols:
        _emit()
        _emit("direction (%d,%d): %d saddle connections" % (col.direction + (col.size,)))
        for c in col.members:
            _emit("  " + c.describe())
        if col.configuration is None:
            _emit("  configuration not extracted: %s" % col.error)
            continue
        kinds = col.configuration.kinds
        if all(k == CYL for k in kinds) and len(kinds) == 2:
            _emit("  configuration: two cylinders joined by %d saddle connections" % col.size)
        for line in col.configuration.describe().splitlines():
            _emit("    " + line)
        _emit("  canonical: %s" % col.config)
        _emit("  boundary: %s" % (boundary_text(principal_boundary(col.configuration))
                                  or "(empty)"))
    return EXIT_OK


def cmd_surface_count(args) -> int:
    s = _load_surface(args.file)
    if args.steps < 1:
        raise CliError("--steps must be at least 1")
    Ls = [args.L / 2 ** k for k in reversed(range(args.steps))]
    rows = growth_report(s, Ls, jobs=args.jobs)
    if args.csv:
        sys.stdout.write(csv_report(rows))
        return EXIT_OK
    if args.json:
        _emit_json([{"L": str(r.L), "total": r.total, "ratio": "%.6f" % r.ratio,
                     "per_config": r.per_config, "failures": r.failures} for r in rows])
        return EXIT_OK
    _emit("%10s %8s %12s" % ("L", "N(S,L)", "N/L^2"))
    for r in rows:
        _emit("%10s %8d %12.6f" % (r.L, r.total, r.ratio))
    keys = sorted({k for r in rows for k in r.per_config})
    for idx, key in enumerate(keys):
        _emit("C%d = %s" % (idx, key))
        _emit("   " + " ".join(str(r.per_config.get(key, 0)) for r in rows))
    if any(r.failures for r in rows):
        _emit("collections without a valid configuration: %s"
              % " ".join(str(r.failures) for r in rows))
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qdstrata",
        description="Configurations of hat-homologous saddle connections in strata of "
                    "quadratic differentials.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, jobs=False):
        p.add_argument("--json", action="store_true", help="structured output")
        if jobs:
            p.add_argument("--jobs", type=int, default=None,
                           help="worker processes (default: $QDSTRATA_JOBS or 1)")

    p = sub.add_parser("enumerate", help="list the configurations of a stratum")
    p.add_argument("stratum", help="for example 'Q(2,-1,-1)' or '2,2'")
    p.add_argument("--count-only", action="store_true")
    common(p, jobs=True)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("boundary", help="principal boundary of a configuration file")
    p.add_argument("file")
    common(p)
    p.set_defaults(func=cmd_boundary)

    p = sub.add_parser("validate", help="check conditions 1-6 on a configuration file")
    p.add_argument("file")
    common(p)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("genus2-table", help="configurations of Q(2,2), Q(2,1,1), Q(1,1,1,1)")
    common(p, jobs=True)
    p.set_defaults(func=cmd_genus2)

    p = sub.add_parser("surface", help="analyse a polygonal surface")
    ssub = p.add_subparsers(dest="surface_command", required=True)
    q = ssub.add_parser("info", help="cone angles, orders, genus")
    q.add_argument("file")
    common(q)
    q.set_defaults(func=cmd_surface_info)
    q = ssub.add_parser("families", help="hat-homologous families up to length L")
    q.add_argument("file")
    q.add_argument("--L", type=_fraction, required=True)
    common(q, jobs=True)
    q.set_defaults(func=cmd_surface_families)
    q = ssub.add_parser("count", help="growth table of collection counts")
    q.add_argument("file")
    q.add_argument("--L", type=_fraction, required=True)
    q.add_argument("--steps", type=int, default=1,
                   help="report L/2^(k-1), ..., L/2, L")
    q.add_argument("--csv", action="store_true", help="CSV: L,total,per_config_json")
    common(q, jobs=True)
    q.set_defaults(func=cmd_surface_count)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args)
    except CliError as exc:
        sys.stderr.write("qdstrata: %s\n" % exc)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())

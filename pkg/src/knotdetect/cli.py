"""Command line entry point: ``knotdetect {parse,invariant,mutate,detect,growth}``.

Exit codes: 0 success, 1 data error, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import detect, growth
from .diagram import DiagramError, LinkDiagram, canonical_form, dt_to_pd, parse_dt, parse_pd, standard_dt
from .invariants import InvariantError
from .tangles import TangleError, find_tangle_regions, is_oriented_mutation, mutate, SquareSymmetry

DATA_ERRORS = (detect.DetectError, DiagramError, InvariantError, growth.GrowthError, TangleError, OSError)


class UsageError(Exception):
    pass


def _emit(text: str) -> None:
    sys.stdout.write(text if text.endswith("\n") else text + "\n")
    sys.stdout.flush()


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False, ensure_ascii=False)


def _config(args) -> dict:
    return {k: (str(v) if isinstance(v, Path) else v) for k, v in sorted(vars(args).items()) if k != "func"}


# --------------------------------------------------------------------------- inputs


def _diagrams(args) -> list[tuple[str, LinkDiagram]]:
    """Diagrams from ``--dt``/``--pd`` or an ``--input`` file in ``--format``."""
    if args.dt is not None:
        return [("dt", dt_to_pd(parse_dt(args.dt), name="dt"))]
    if args.pd is not None:
        return [("pd", parse_pd(args.pd, name="pd"))]
    if args.input is None:
        raise UsageError("give --dt, --pd or --input")
    text = Path(args.input).read_text(encoding="utf-8")
    fmt = args.format
    if fmt == "csv":
        return [(r.name, r.diagram()) for r in detect.ingest_text(text)]
    out = []
    for k, line in enumerate(text.splitlines()):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        name = f"line{k + 1}"
        d = dt_to_pd(parse_dt(line), name=name) if fmt == "dt" else parse_pd(line, name=name)
        out.append((name, d))
    return out


def _describe(name: str, d: LinkDiagram) -> dict:
    row = {
        "name": name,
        "crossings": d.n_crossings,
        "components": d.n_components,
        "writhe": d.writhe,
        "alternating": d.is_alternating(),
        "pd": d.serialize(),
        "canonical": canonical_form(d),
    }
    if d.n_components == 1 and d.n_crossings:
        row["dt"] = " ".join(str(e) for e in standard_dt(d).evens)
    return row


# --------------------------------------------------------------------------- subcommands


def cmd_parse(args) -> int:
    rows = [_describe(name, d) for name, d in _diagrams(args)]
    if args.output == "json":
        _emit(_dump({"config": _config(args), "diagrams": rows}))
    else:
        for r in rows:
            _emit(f"{r['name']}\t{r['crossings']}\t{r.get('dt', '')}\t{r['pd']}")
    return 0


def cmd_invariant(args) -> int:
    detect.invariant_parts(args.invariant)
    rows = []
    for name, d in _diagrams(args):
        rows.append({"name": name, "value": detect.compute_value(d, args.invariant)})
    if args.output == "json":
        _emit(_dump({"config": _config(args), "values": rows}))
    elif len(rows) == 1 and args.input is None:
        _emit(rows[0]["value"])
    else:
        for r in rows:
            _emit(f"{r['name']},{r['value']}")
    return 0


def cmd_mutate(args) -> int:
    out = []
    for name, d in _diagrams(args):
        for r in find_tangle_regions(d, args.max_region):
            for s in (SquareSymmetry.rotate_x, SquareSymmetry.rotate_y, SquareSymmetry.rotate_z):
                oriented = is_oriented_mutation(r, s)
                if args.oriented_only and not oriented:
                    continue
                m = mutate(d, r, s)
                out.append(
                    {
                        "name": name,
                        "region": sorted(r.crossings),
                        "pattern": list(r.pattern),
                        "symmetry": s.value,
                        "oriented": oriented,
                        "pd": m.serialize(),
                    }
                )
    if args.output == "json":
        _emit(_dump({"config": _config(args), "mutants": out}))
    else:
        _emit("name,region,symmetry,oriented,pd")
        for m in out:
            region = " ".join(str(x) for x in m["region"])
            _emit(f"{m['name']},{region},{m['symmetry']},{str(m['oriented']).lower()},\"{m['pd']}\"")
    return 0


def cmd_detect(args) -> int:
    records = detect.ingest(args.input) if args.input else detect.embedded_corpus()
    rep, ev = detect.run_detection(
        records,
        args.invariant,
        cumulative=args.cumulative,
        alternating_only=args.alternating_only,
        fold_mirror=args.fold_mirror,
        max_n=args.max_n,
        jobs=args.jobs,
        cache_dir=args.cache_dir,
    )
    if ev.failures:
        sys.stderr.write(f"{len(ev.failures)} records failed and were excluded\n")
    if args.output == "json":
        body = rep.to_dict()
        body["failures"] = dict(sorted(ev.failures.items()))
        body["ledger_hash"] = detect.ledger_hash()
        body["config"] = _config(args)
        _emit(_dump(body))
    else:
        _emit(rep.to_csv())
    return 0


def _decimal(s: growth.Surd, digits: int = 15) -> str:
    return f"{s.decimal(digits + 5):.{digits}f}"


def cmd_growth(args) -> int:
    order = args.series_order
    if order < 1:
        raise UsageError("--series-order must be at least 1")
    consts = growth.singularity_constants()
    cert = growth.decay_bound()
    bt = growth.bt_series(order)
    at = growth.solve_at(order, bt=bt)
    body = {
        "config": _config(args),
        "lower": {
            "quadratic": list(consts.lower_quadratic),
            "z": str(consts.z1),
            "z_decimal": _decimal(consts.z1),
            "growth": str(consts.growth_lower),
            "growth_decimal": _decimal(consts.growth_lower),
        },
        "upper": {
            "quadratic": list(consts.upper_quadratic),
            "z": str(consts.z2),
            "z_decimal": _decimal(consts.z2),
            "growth": str(consts.growth_upper),
            "growth_decimal": _decimal(consts.growth_upper),
        },
        "delta": {
            "ratio": f"{cert.delta.numerator}/{cert.delta.denominator}",
            "ratio_decimal": f"{float(cert.delta):.15f}",
            "bound": "0.9993",
            "holds": cert.holds,
            "supremum_ratio": f"{cert.supremum_ratio:.15f}",
        },
        "series": {
            "order": order,
            "bt": [str(c) for c in bt.integers()],
            "at": [str(c) for c in at.integers()],
        },
    }
    _emit(_dump(body))
    return 0 if cert.holds else 1


# --------------------------------------------------------------------------- parser


def _add_diagram_inputs(p) -> None:
    p.add_argument("--dt", help="DT code, e.g. '4 6 2'")
    p.add_argument("--pd", help="PD code, e.g. 'X(1,5,2,4);X(3,1,4,6);X(5,3,6,2)'")
    p.add_argument("--input", type=Path, help="file of codes, one per line, or a corpus CSV")
    p.add_argument("--format", choices=["dt", "pd", "csv"], default="csv", help="format of --input (default csv)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="knotdetect", description="Knot diagrams, invariants, mutation and growth estimates.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", help="validate and convert DT/PD codes")
    _add_diagram_inputs(p)
    p.add_argument("--output", choices=["text", "json"], default="text")
    p.set_defaults(func=cmd_parse)

    p = sub.add_parser("invariant", help="print canonical invariant values")
    _add_diagram_inputs(p)
    p.add_argument("--invariant", default="jones", help="invariant id, or X+Y for a tuple")
    p.add_argument("--output", choices=["csv", "json"], default="csv")
    p.set_defaults(func=cmd_invariant)

    p = sub.add_parser("mutate", help="list Conway mutants of a diagram")
    _add_diagram_inputs(p)
    p.add_argument("--max-region", type=int, default=8, help="largest tangle region, in crossings")
    p.add_argument("--oriented-only", action="store_true", help="only symmetries compatible with the orientation")
    p.add_argument("--output", choices=["csv", "json"], default="csv")
    p.set_defaults(func=cmd_mutate)

    p = sub.add_parser("detect", help="distinct-value table for an invariant")
    p.add_argument("--input", type=Path, help="corpus CSV (default: embedded 3..10 crossing knots)")
    p.add_argument("--format", choices=["csv"], default="csv")
    p.add_argument("--invariant", default="jones")
    p.add_argument("--max-n", type=int, default=None)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--cumulative", dest="cumulative", action="store_true", default=True, help="rows count knots with <= n crossings (default)")
    g.add_argument("--per-n", dest="cumulative", action="store_false", help="rows count knots with exactly n crossings")
    p.add_argument("--alternating-only", action="store_true")
    p.add_argument("--fold-mirror", action="store_true", help="bucket min(value, mirror value)")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--cache-dir", type=Path, default=None)
    p.add_argument("--output", choices=["csv", "json"], default="csv")
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser("growth", help="growth constants, series and the decay certificate as JSON")
    p.add_argument("--series-order", type=int, default=growth.DEFAULT_ORDER)
    p.set_defaults(func=cmd_growth)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    if getattr(args, "jobs", 1) < 1:
        ap.print_usage(sys.stderr)
        sys.stderr.write("knotdetect: error: --jobs must be at least 1\n")
        return 2
    try:
        return args.func(args)
    except UsageError as e:
        ap.print_usage(sys.stderr)
        sys.stderr.write(f"knotdetect: error: {e}\n")
        return 2
    except BrokenPipeError:
        # reader went away (e.g. piped into head); silence the flush at exit
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        return 0
    except detect.UnknownInvariant as e:
        sys.stderr.write(f"knotdetect: error: {e}\n")
        return 2
    except DATA_ERRORS as e:
        sys.stderr.write(f"knotdetect: {type(e).__name__}: {e}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())

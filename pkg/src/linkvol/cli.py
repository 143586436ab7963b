"""Command-line front end.

Exit codes: 0 success (and every requested certificate passes), 1 a
certificate fails, 2 bad input.  Data goes to stdout or files, diagnostics to
stderr.  Defaults can be put in a JSON file named by ``LINKVOL_CONFIG``
(keys ``lackenby_c`` and ``seed``).
"""
from __future__ import annotations

import argparse
import json
import os
import random
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from pathlib import Path

from . import diagram as dg
from . import moves as mv
from .covers import enumerate_simple3_colorings, is_transitive
from .pipeline import DEFAULT_LACKENBY_C, condition_report, run_pipeline
from .render import render
from .serialize import ParseError, from_json, to_dict, to_json
from .tangles import (Slope, SlopeError, build_rational_tangle, closure_diagram, depth,
                      equivalence_class, regular_expansion, representative_slope,
                      shortest_expansion)

CONFIG_ENV = "LINKVOL_CONFIG"


class InputError(Exception):
    pass


def load_config() -> dict:
    cfg = {"lackenby_c": str(DEFAULT_LACKENBY_C), "seed": 0}
    path = os.environ.get(CONFIG_ENV)
    if path:
        try:
            cfg.update(json.loads(Path(path).read_text()))
        except (OSError, json.JSONDecodeError) as exc:
            raise InputError(f"cannot read config {path}: {exc}")
    return cfg


def _slope(text: str) -> Slope:
    try:
        return Slope.parse(text)
    except (SlopeError, ValueError) as exc:
        raise InputError(str(exc))


def _positive_c(text) -> Fraction:
    try:
        c = Fraction(str(text))
    except (ValueError, ZeroDivisionError):
        raise InputError(f"not a number: {text}")
    if c <= 0:
        raise InputError("lackenby_c must be positive")
    return c


def _read_diagram(path: str):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}")
    try:
        return from_json(text)
    except ParseError as exc:
        raise InputError(f"{path}: {exc}")


def _emit(obj, out_path=None):
    text = obj if isinstance(obj, str) else json.dumps(obj, indent=2, sort_keys=True)
    if out_path:
        Path(out_path).write_text(text if text.endswith("\n") else text + "\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


# -- subcommands ---------------------------------------------------------------------

def cmd_depth(args, cfg):
    for text in args.slopes:
        s = _slope(text)
        if args.verbose:
            print(f"{s} {depth(s)} {list(shortest_expansion(s).terms)}")
        else:
            print(depth(s))
    return 0


def cmd_tangle_build(args, cfg):
    s = _slope(args.slope)
    t = build_rational_tangle(s)
    d = closure_diagram(t.fragment)
    info = {
        "slope": str(s),
        "expansion": list(regular_expansion(s)),
        "shortest_expansion": list(shortest_expansion(s).terms),
        "depth": depth(s),
        "crossings": t.crossing_count,
    }
    if args.output:
        Path(args.output).write_text(to_json(d) + "\n")
    else:
        info["diagram"] = to_dict(d)
    if args.svg:
        Path(args.svg).write_text(render(d))
    _emit(info)
    return 0


def cmd_classify(args, cfg):
    out = []
    for text in args.slopes:
        s = _slope(text)
        tc = equivalence_class(s)
        out.append({"slope": str(s), "ne_entry_over": tc.ne_entry_over, "ne_exit": tc.ne_exit,
                    "representative": str(representative_slope(s))})
    _emit(out if len(out) > 1 else out[0])
    return 0


def cmd_verify(args, cfg):
    d, c = _read_diagram(args.input)
    if any(t is None for t in d.disks.values()):
        report = {"non_split": not dg.is_split_diagram(d),
                  "prime_outside_disks": dg.strongly_prime_outside_disks(d),
                  "disk_arcs": dg.disk_arc_condition(d)}
    else:
        report = condition_report(d, c)
        report.pop("colored", None) if c is None else None
        if c is None:
            report.pop("three_colored", None)
    _emit(report)
    return 0 if all(report.values()) else 1


MOVES = ("montesinos", "isolate", "flip", "reduce", "three-color", "alternate", "knotify")


def cmd_move_apply(args, cfg):
    d, c = _read_diagram(args.input)
    try:
        if args.move == "montesinos":
            if args.crossing is None:
                raise InputError("montesinos needs --crossing")
            site = mv.twist_site(d, args.crossing, 0, args.length)
            n = mv.crossing_sign(d, args.crossing, 0) * args.length
            d2, c2, rec = mv.montesinos_move(d, c, site, n, args.k)
            recs = [rec]
        elif args.move in ("isolate", "flip"):
            if args.disk is None:
                raise InputError(f"{args.move} needs --disk")
            fn = mv.isolate_disk if args.move == "isolate" else mv.disk_flip
            d2, c2, rec = fn(d, c, args.disk)
            recs = [rec]
        elif args.move == "reduce":
            sites = mv.segment_pair_sites(d)
            if not sites:
                raise InputError("no pair of segments between the same faces")
            d2, c2, rec = mv.reduce_segment_pair(d, c, sites[0])
            recs = [rec]
        elif args.move == "three-color":
            if c is None or args.crossing is None:
                raise InputError("three-color needs a colored input and --crossing")
            d2, c2, rec = mv.three_color_crossing_move(d, c, args.crossing)
            recs = [rec]
        elif args.move == "alternate":
            d2, c2, recs = mv.make_alternating(d, c)
        else:
            d2, c2, recs = mv.knotify(d, c)
    except KeyError as exc:
        raise InputError(f"no such vertex: {exc}")
    except dg.DiagramError as exc:
        print(f"move failed: {exc}", file=sys.stderr)
        return 1
    if args.output:
        Path(args.output).write_text(to_json(d2, c2) + "\n")
    _emit([r.to_dict() for r in recs])
    return 0


def _pipeline_job(job):
    path, slopes, c, svg_dir, seed = job
    if path is None:
        from .generate import random_colored_input, random_slope
        d, col = random_colored_input(seed)
        rng = random.Random(seed)
        slopes = [random_slope(rng) for _ in d.disks]
    else:
        d, col = _read_diagram(path)
    if col is None:
        raise InputError(f"{path}: the pipeline needs a coloring")
    if len(slopes) != len(d.disks):
        raise InputError(f"{len(d.disks)} disk(s) but {len(slopes)} slope(s)")
    report, k, ck = run_pipeline(d, col, slopes, c)
    if svg_dir:
        Path(svg_dir).mkdir(parents=True, exist_ok=True)
        stem = Path(path).stem if path else f"random-{seed}"
        Path(svg_dir, f"{stem}-K.svg").write_text(render(k, ck))
    return report.to_dict()


def cmd_pipeline_run(args, cfg):
    c = _positive_c(args.c if args.c is not None else cfg["lackenby_c"])
    seed = args.seed if args.seed is not None else int(cfg.get("seed", 0))
    slopes = [_slope(t) for t in args.slopes.split(",")] if args.slopes else []
    if args.input:
        jobs = [(p, slopes, c, args.svg_dir, seed) for p in args.input]
    elif args.random:
        jobs = [(None, [], c, args.svg_dir, seed + i) for i in range(args.random)]
    else:
        raise InputError("give --input or --random")
    if args.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            reports = list(pool.map(_pipeline_job, jobs))
    else:
        reports = [_pipeline_job(j) for j in jobs]
    out = reports if len(reports) > 1 else reports[0]
    _emit(out, args.report)
    ok = all(all(r["certificates"].values()) for r in reports)
    return 0 if ok else 1


def cmd_covers_enumerate(args, cfg):
    d, _ = _read_diagram(args.input)
    cols = enumerate_simple3_colorings(d, strict_disks=args.strict_disks)
    trans = [c for c in cols if is_transitive(c)]
    out = {"colorings": len(cols), "transitive": len(trans)}
    if args.list:
        from .covers import arc_colors
        from .serialize import half_edge_name
        out["list"] = [{half_edge_name(a): col.value for a, col in sorted(arc_colors(d, c).items())}
                       for c in cols]
    _emit(out)
    return 0


def cmd_render(args, cfg):
    d, c = _read_diagram(args.input)
    svg = render(d, c, {"label_crossings": args.labels})
    _emit(svg, args.output)
    return 0


# -- argument parsing ----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="linkvol", description=__doc__.splitlines()[0])
    p.add_argument("--seed", type=int, default=None, help="seed for randomized inputs")
    sub = p.add_subparsers(dest="command", required=True)

    q = sub.add_parser("depth", help="length of the shortest continued fraction")
    q.add_argument("slopes", nargs="+")
    q.add_argument("-v", "--verbose", action="store_true")
    q.set_defaults(func=cmd_depth)

    t = sub.add_parser("tangle", help="rational tangles")
    tsub = t.add_subparsers(dest="tangle_command", required=True)
    tb = tsub.add_parser("build", help="alternating diagram of a rational tangle")
    tb.add_argument("slope")
    tb.add_argument("--output")
    tb.add_argument("--svg")
    tb.set_defaults(func=cmd_tangle_build)

    cl = sub.add_parser("classify", help="equivalence class of a slope's tangle")
    cl.add_argument("slopes", nargs="+")
    cl.set_defaults(func=cmd_classify)

    v = sub.add_parser("verify", help="check the hyperbolicity conditions")
    v.add_argument("--input", required=True)
    v.set_defaults(func=cmd_verify)

    m = sub.add_parser("move", help="diagram moves")
    msub = m.add_subparsers(dest="move_command", required=True)
    ma = msub.add_parser("apply", help="apply one move and print its receipt")
    ma.add_argument("--input", required=True)
    ma.add_argument("--move", required=True, choices=MOVES)
    ma.add_argument("--crossing", type=int)
    ma.add_argument("--disk", type=int)
    ma.add_argument("--length", type=int, default=1)
    ma.add_argument("--k", type=int, default=1)
    ma.add_argument("--output")
    ma.set_defaults(func=cmd_move_apply)

    pl = sub.add_parser("pipeline", help="the full construction")
    psub = pl.add_subparsers(dest="pipeline_command", required=True)
    pr = psub.add_parser("run", help="run on colored inputs")
    pr.add_argument("--input", action="append")
    pr.add_argument("--random", type=int, default=0, help="run on N seeded random inputs")
    pr.add_argument("--slopes", help="comma separated, one per disk")
    pr.add_argument("--c", help="Lackenby's constant (default 10.1494)")
    pr.add_argument("--svg-dir")
    pr.add_argument("--report")
    pr.add_argument("--jobs", type=int, default=1)
    pr.add_argument("--seed", type=int, default=None)
    pr.set_defaults(func=cmd_pipeline_run)

    cv = sub.add_parser("covers", help="simple 3-fold covers")
    csub = cv.add_subparsers(dest="covers_command", required=True)
    ce = csub.add_parser("enumerate", help="all colorings by transpositions")
    ce.add_argument("--input", required=True)
    ce.add_argument("--strict-disks", action="store_true")
    ce.add_argument("--list", action="store_true")
    ce.set_defaults(func=cmd_covers_enumerate)

    r = sub.add_parser("render", help="SVG drawing")
    r.add_argument("--input", required=True)
    r.add_argument("--output")
    r.add_argument("--labels", action="store_true")
    r.set_defaults(func=cmd_render)
    return p


def parse_and_dispatch(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        cfg = load_config()
        return args.func(args, cfg)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main():
    sys.exit(parse_and_dispatch())


if __name__ == "__main__":
    main()

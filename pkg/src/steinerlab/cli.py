"""Command-line front end.

Exit codes: 0 success, 1 validation failure, 2 identity/assertion violation,
3 usage error.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path

from . import constructions as cons
from . import wl as wlmod
from .core import Design, params, serialize
from .errors import DesignError
from .pipeline import emit, parse_design, run_pipeline, wd_json, write_outputs
from .subdesigns import minimal_subdesigns, wd_profile

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_VIOLATION = 2
EXIT_USAGE = 3


def _load(path: str) -> Design:
    return parse_design(Path(path))


def _print(payload, as_json: bool) -> None:
    if as_json:
        print(json.dumps(payload, indent=2))
    else:
        for key, val in payload.items():
            print(f"{key}: {val}")


def cmd_validate(args) -> int:
    d = _load(args.file)
    _print({"v": d.v, "k": d.k, "b": d.b, "valid": True}, args.json)
    return EXIT_OK


def cmd_params(args) -> int:
    d = _load(args.file)
    p = params(d)
    _print({"v": p.v, "b": p.b, "r": p.r, "k": p.k, "lambda": p.lam}, args.json)
    return EXIT_OK


def cmd_subdesigns(args) -> int:
    d = _load(args.file)
    subs = minimal_subdesigns(d)
    if not subs:
        _print({"n": 0, "subdesigns": []}, args.json)
        return EXIT_OK
    wd = wd_profile(d, subs)
    payload = wd_json(wd, subs)
    if args.json:
        print(json.dumps(payload, indent=2))
    else:
        for s in subs:
            print(" ".join(str(x) for x in s.vertices))
        print(f"n={wd.n} v'={wd.v_prime} l={wd.l} m={wd.m} "
              f"well_distributed={wd.is_well_distributed}")
    return EXIT_OK


def cmd_wd_profile(args) -> int:
    d = _load(args.file)
    wd = wd_profile(d)
    subs = minimal_subdesigns(d)
    _print(wd_json(wd, subs), args.json)
    return EXIT_OK


def cmd_stats(args) -> int:
    d = _load(args.file)
    report = run_pipeline(d, full_triples=args.full)
    payload = {
        "pair_stats": report.get("pair_stats"),
        "triple_profiles": report.get("triple_stats"),
        "means": (report.get("triple_stats") or {}).get("means"),
        "bounds": report.get("bounds"),
        "violations": report["violations"],
    }
    print(json.dumps(payload, indent=2) if args.json else emit(report, "text"))
    return EXIT_OK if not report["violations"] else EXIT_VIOLATION


def cmd_wl(args) -> int:
    d = _load(args.file)
    g = wlmod.incidence_graph(d)
    col = wlmod.wl2_refine(g, seeded=args.seeded)
    if args.individualize:
        nodes = [int(x) for x in args.individualize.split(",")]
        col = wlmod.individualize_many(col, nodes)
    payload = {
        "nodes": g.n_nodes,
        "classes": col.num_classes,
        "rounds": col.rounds,
        "history": list(col.history),
        "v_diagonal_classes": len(col.diagonal_classes("V")),
        "b_diagonal_classes": len(col.diagonal_classes("B")),
        "class_sizes": {str(k): v for k, v in sorted(col.class_sizes().items())},
    }
    _print(payload, args.json)
    return EXIT_OK


def cmd_split(args) -> int:
    d = _load(args.file)
    rng = random.Random(args.seed) if args.seed is not None else None
    res = wlmod.steiner3_split(d, rng=rng, wl_cross_check=args.cross_check)
    payload = {
        "individualized": list(res.individualized),
        "count": len(res.individualized),
        "budget": res.budget,
        "chain": list(res.chain),
        "discrete_on_vertices": res.discrete_on_vertices,
    }
    _print(payload, args.json)
    return EXIT_OK


def cmd_quotient(args) -> int:
    d = _load(args.file)
    q = wlmod.quotient_design(d)
    payload = {
        "v": q.v, "k": q.k, "lambda": q.lam, "n": q.n,
        "parent_b": q.parent_b, "n_less_b": q.n_less_than_parent_b,
        "blocks": [list(b) for b in q.blocks],
    }
    _print(payload, args.json)
    return EXIT_OK


def cmd_gen(args) -> int:
    rng_seed = args.seed
    kind = args.kind
    if kind == "fano":
        d = cons.fano_plane()
    elif kind == "pp":
        d = cons.projective_plane(int(args.arg1))
    elif kind == "ap":
        d = cons.affine_plane(int(args.arg1))
    elif kind == "example15":
        d = cons.example_15()
    elif kind == "example40":
        d = cons.example_40()
    elif kind == "paste":
        outer = parse_design(Path(args.arg1))
        inner = parse_design(Path(args.arg2))
        rule = cons.SEEDED_SHUFFLE if rng_seed is not None else cons.SORTED_ORDER
        recipe = cons.PasteRecipe(
            outer=outer, inner=inner, bijection_rule=rule, seed=rng_seed or 0
        )
        d = cons.paste(recipe)
    else:  # pragma: no cover - argparse restricts choices
        raise ValueError(kind)
    text = serialize(d)
    if args.output:
        Path(args.output).write_text(text, "utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_report(args) -> int:
    d = _load(args.file)
    report = run_pipeline(d, full_triples=args.full, wl_seeded=args.seeded)
    if args.outdir:
        paths = write_outputs(report, Path(args.outdir))
        for group, items in paths.items():
            for item in items:
                print(f"{group}: {item}")
    else:
        sys.stdout.write(emit(report, "json" if args.json else "text"))
    return EXIT_OK if not report["violations"] else EXIT_VIOLATION


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="steinerlab",
        description="Analyse unit-coverage block designs and their minimal subdesigns.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, fn, **kwargs):
        p = sub.add_parser(name, **kwargs)
        p.set_defaults(fn=fn)
        p.add_argument("--json", action="store_true", help="emit JSON")
        return p

    for name, fn, helptext in [
        ("validate", cmd_validate, "validate a design file"),
        ("params", cmd_params, "print the five design parameters"),
        ("subdesigns", cmd_subdesigns, "enumerate minimal subdesigns"),
        ("wd-profile", cmd_wd_profile, "coverage certificate of the minimal subdesigns"),
    ]:
        p = add(name, fn, help=helptext)
        p.add_argument("file")

    p = add("stats", cmd_stats, help="pair/triple intersection statistics and bounds")
    p.add_argument("file")
    p.add_argument("--full", action="store_true",
                   help="list every ordered pair instead of a sample")

    p = add("wl", cmd_wl, help="pair-colour refinement to stability")
    p.add_argument("file")
    p.add_argument("--individualize", metavar="N1,N2,...",
                   help="node ids to individualize before refining")
    p.add_argument("--seeded", action="store_true",
                   help="start from the 5-class side-aware colouring")

    p = add("split", cmd_split, help="complete-split procedure for block size 3")
    p.add_argument("file")
    p.add_argument("--seed", type=int, default=None,
                   help="random starting triple instead of the smallest one")
    p.add_argument("--cross-check", action="store_true",
                   help="verify with pair refinement that the vertex side goes discrete")

    p = add("quotient", cmd_quotient, help="the structure of minimal subdesigns over V")
    p.add_argument("file")

    p = add("gen", cmd_gen, help="generate a design file")
    p.add_argument("kind", choices=["fano", "pp", "ap", "example15", "example40", "paste"])
    p.add_argument("arg1", nargs="?", help="pp/ap: order; paste: outer file")
    p.add_argument("arg2", nargs="?", help="paste: inner file")
    p.add_argument("--seed", type=int, default=None,
                   help="paste: use a seeded shuffled bijection per block")
    p.add_argument("-o", "--output", help="write to a file instead of stdout")

    p = add("report", cmd_report, help="full pipeline report")
    p.add_argument("file")
    p.add_argument("--full", action="store_true")
    p.add_argument("--seeded", action="store_true",
                   help="side-aware initial colouring for the refinement stage")
    p.add_argument("--outdir",
                   help="write report.json, summary.csv and figures here")
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return args.fn(args)
    except DesignError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_VALIDATION
    except (FileNotFoundError, ValueError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

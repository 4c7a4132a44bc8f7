"""End-to-end analysis pipeline and report assembly.

A report is a plain nested dict (JSON-ready except for exact rationals,
which are emitted as {"num": p, "den": q}) plus a list of violations.  Every
stage runs its own exhaustive checks; a failed check is recorded as a
violation instead of aborting the pipeline, so one run surfaces everything.
Identical inputs produce byte-identical JSON.
"""

from __future__ import annotations

import csv
import io
import json
from fractions import Fraction
from pathlib import Path
from typing import Optional

from . import intersections as isec
from . import wl as wlmod
from .core import Design, admissible, block_meet_profile, is_symmetric, new_design, params
from .errors import DesignError, ParseError, PreconditionUnmet, UnequalBlockSize
from .subdesigns import minimal_subdesigns, wd_profile

__all__ = [
    "parse_design",
    "run_pipeline",
    "emit",
    "render_figures",
    "write_outputs",
]

SAMPLE_PER_CLASS = 20


def parse_design(source: str | Path, *, is_path: Optional[bool] = None) -> Design:
    """Read the design file format: 'v k' header, then k vertex ids per line.

    Blank lines and lines starting with '#' are skipped.  Malformed lines
    raise ParseError with their 1-based line number; design-level validation
    errors propagate from new_design.
    """
    if is_path is None:
        is_path = isinstance(source, Path) or "\n" not in str(source)
    text = Path(source).read_text("utf-8") if is_path else str(source)
    v = k = None
    blocks = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        if v is None:
            if len(fields) != 2:
                raise ParseError(lineno, f"header must be 'v k', got {raw!r}")
            try:
                v, k = int(fields[0]), int(fields[1])
            except ValueError:
                raise ParseError(lineno, f"non-integer header {raw!r}") from None
            continue
        try:
            block = [int(f) for f in fields]
        except ValueError:
            raise ParseError(lineno, f"non-integer vertex id in {raw!r}") from None
        if len(block) != k:
            raise UnequalBlockSize(
                f"line {lineno}: {len(block)} vertices, header declares k={k}"
            )
        blocks.append(block)
    if v is None:
        raise ParseError(1, "empty input")
    return new_design(v, blocks)


def _frac(x):
    """JSON encoding for exact values: ints stay ints, rationals split."""
    if isinstance(x, Fraction):
        if x.denominator == 1:
            return int(x)
        return {"num": x.numerator, "den": x.denominator}
    return x


def _means_json(means):
    return [None if m is None else _frac(m) for m in means]


def run_pipeline(
    d: Design,
    full_triples: bool = False,
    wl_seeded: bool = False,
) -> dict:
    """Run every analysis stage and collect check failures as violations."""
    report: dict = {}
    violations: list[str] = []

    def guard(stage, fn):
        try:
            return fn()
        except (DesignError, AssertionError) as err:
            violations.append(f"{stage}: {err}")
            return None

    p = params(d)
    report["design"] = {
        "v": p.v, "b": p.b, "r": p.r, "k": p.k, "lambda": p.lam,
        "admissible": admissible(p.v, p.k, p.lam),
        "symmetric": is_symmetric(d),
    }
    guard("block-meets", lambda: [block_meet_profile(d, i) for i in range(d.b)])

    subs = guard("subdesigns", lambda: minimal_subdesigns(d))
    wd = None
    if subs:
        wd = guard("wd-profile", lambda: wd_profile(d, subs))
    if subs is None:
        subs = []
    if wd is not None:
        report["subdesigns"] = wd_json(wd, subs)
    else:
        report["subdesigns"] = {
            "v_prime": None, "b_prime": None, "n": len(subs), "l": None, "m": None,
            "well_distributed": False, "vertex_counts": [], "block_counts": [],
            "subdesigns": [list(s.vertices) for s in subs],
        }

    if wd is not None and wd.is_well_distributed:
        stats = guard("pair-stats", lambda: [
            isec.pair_stats(d, subs, i, wd) for i in range(len(subs))
        ])
        if stats:
            ps = stats[0]
            report["pair_stats"] = {
                "i_k": ps.i_k, "i_1": ps.i_1, "i_0": ps.i_0,
                "fine": dict(ps.fine), "reference_x": ps.x,
                "reference_block": ps.block_id,
            }

        def sweep():
            profiles = isec.all_triple_profiles(d, subs, wd)
            for prof in profiles:
                isec.verify_connor_sums(prof, wd)
                nfree = 4 if prof.case in (isec.CASE_ONE, isec.CASE_K) else 3
                full = isec.solve_dependent_counts(
                    prof.counts[:nfree], wd, prof.case
                )
                if full != prof.counts:
                    raise isec.IdentityViolation(
                        f"dependent counts ({prof.d1},{prof.d2})", prof.counts, full
                    )
            return profiles

        profiles = guard("triple-sweep", sweep)
        mp = None
        if profiles:
            mp = guard("means", lambda: isec.mean_profiles(d, subs, wd, profiles))
        if profiles and mp:
            per_class: dict[str, int] = {}
            sampled = []
            for prof in profiles:
                if not full_triples and per_class.get(prof.case, 0) >= SAMPLE_PER_CLASS:
                    continue
                per_class[prof.case] = per_class.get(prof.case, 0) + 1
                sampled.append({
                    "d1": prof.d1, "d2": prof.d2,
                    "intersection_size": prof.intersection_size,
                    "counts": list(prof.counts),
                    "exact_block": prof.exact_block,
                })
            report["triple_stats"] = {
                "full": full_triples,
                "ordered_pairs": {
                    "size_1": mp.pairs_1, "size_k": mp.pairs_k, "size_0": mp.pairs_0,
                },
                "profiles": sampled,
                "means": {
                    "a": _means_json(mp.a_means),
                    "c": _means_json(mp.c_means),
                    "e": _means_json(mp.e_means),
                },
            }
            try:
                isec.verify_mean_system(mp, wd)
                report["mean_system"] = {"status": "verified"}
            except PreconditionUnmet as err:
                report["mean_system"] = {
                    "status": "precondition-unmet", "missing": err.which,
                }
            except (DesignError, AssertionError) as err:
                violations.append(f"mean-system: {err}")
                report["mean_system"] = {"status": "violated"}

            bounds = guard("bounds", lambda: isec.bounds_report(d, wd, mp))
            if bounds:
                if not bounds.all_hold:
                    violations.append("bounds: at least one bound failed")
                report["bounds"] = {
                    "m_basic_bound": _frac(bounds.m_basic_bound),
                    "m_basic_holds": bounds.m_basic_holds,
                    "v_regime": bounds.v_regime,
                    "small_v_applicable": bounds.small_v_applicable,
                    "m_small_v_bound": _frac(bounds.m_small_v_bound)
                    if bounds.m_small_v_bound is not None else None,
                    "per_pair_bounds": {
                        name: {
                            "bound": _frac(bound), "max_observed": mx, "holds": holds,
                        }
                        for name, (bound, mx, holds) in bounds.per_pair_bounds.items()
                    },
                    "mean_bounds_defined": bounds.mean_bounds is not None,
                    "n_less_b": bounds.n_less_b,
                    "n_less_b_actual": bounds.n_less_b_actual,
                }

    def run_wl():
        g = wlmod.incidence_graph(d)
        col = wlmod.wl2_refine(g, seeded=wl_seeded)
        wlmod.verify_lambda1_stable(d, col)
        return g, col

    wl_out = guard("wl", run_wl)
    if wl_out:
        g, col = wl_out
        report["wl"] = {
            "nodes": g.n_nodes,
            "edges": g.n_edges,
            "initial": "seeded-5-class" if wl_seeded else "3-class",
            "classes": col.num_classes,
            "rounds": col.rounds,
            "history": list(col.history),
            "v_diagonal_classes": len(col.diagonal_classes("V")),
            "b_diagonal_classes": len(col.diagonal_classes("B")),
            "class_sizes": {str(k): v for k, v in sorted(col.class_sizes().items())},
        }

    gip = guard("gip", lambda: wlmod.classify_gip_case(d, subs))
    if gip:
        entry = {"case": gip.case}
        if gip.case == "b":
            entry["block_coloring_classes"] = sorted(set(gip.block_coloring))
        elif gip.case == "c":
            entry["partition_parts"] = len(gip.partition)
        elif gip.case == "d":
            entry["quotient"] = {
                "v": gip.quotient.v, "k": gip.quotient.k, "lambda": gip.quotient.lam,
                "n": gip.quotient.n, "parent_b": gip.quotient.parent_b,
                "n_less_b": gip.quotient.n_less_than_parent_b,
            }
        report["gip"] = entry

    report["violations"] = violations
    return report


def emit(report: dict, fmt: str = "json") -> str:
    """Render a report as stable JSON or a readable text summary."""
    if fmt == "json":
        return json.dumps(report, indent=2) + "\n"
    if fmt != "text":
        raise ValueError(f"unknown format {fmt!r}")
    out = io.StringIO()

    def line(s=""):
        print(s, file=out)

    des = report.get("design", {})
    line(f"design: v={des.get('v')} k={des.get('k')} b={des.get('b')} "
         f"r={des.get('r')} lambda={des.get('lambda')}")
    line(f"  admissible={des.get('admissible')} symmetric={des.get('symmetric')}")
    sub = report.get("subdesigns")
    if sub:
        line(f"minimal subdesigns: n={sub['n']} v'={sub['v_prime']} "
             f"b'={sub['b_prime']} l={sub['l']} m={sub['m']} "
             f"well_distributed={sub['well_distributed']}")
    ps = report.get("pair_stats")
    if ps:
        line(f"pair stats: I_k={ps['i_k']} I_1={ps['i_1']} I_0={ps['i_0']}")
    ts = report.get("triple_stats")
    if ts:
        op = ts["ordered_pairs"]
        line(f"ordered pairs by intersection size: k={op['size_k']} "
             f"1={op['size_1']} 0={op['size_0']}")
    ms = report.get("mean_system")
    if ms:
        line(f"global mean system: {ms['status']}")
    bd = report.get("bounds")
    if bd:
        line(f"bounds: m<= {bd['m_basic_bound']} holds={bd['m_basic_holds']} "
             f"v-regime={bd['v_regime']} n<b: {bd['n_less_b']} "
             f"(actual {bd['n_less_b_actual']})")
    wl = report.get("wl")
    if wl:
        line(f"wl: classes={wl['classes']} rounds={wl['rounds']} "
             f"history={wl['history']} diag V/B classes="
             f"{wl['v_diagonal_classes']}/{wl['b_diagonal_classes']}")
    gip = report.get("gip")
    if gip:
        line(f"gip case: ({gip['case']})")
    line()
    if report.get("violations"):
        line("VIOLATIONS:")
        for vi in report["violations"]:
            line(f"  - {vi}")
    else:
        line("all checks passed")
    return out.getvalue()


def wd_json(wd, subs) -> dict:
    """The subdesign certificate in its documented JSON shape."""
    return {
        "v_prime": wd.v_prime,
        "b_prime": wd.b_prime,
        "n": wd.n,
        "l": wd.l,
        "m": wd.m,
        "well_distributed": wd.is_well_distributed,
        "vertex_counts": list(wd.vertex_counts),
        "block_counts": list(wd.block_counts),
        "subdesigns": [list(s.vertices) for s in subs],
    }


def render_figures(report: dict, outdir: Path) -> list[Path]:
    """Write the report's figures as PNG files and return their paths."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    written = []

    wl = report.get("wl")
    if wl:
        fig, ax = plt.subplots(figsize=(5, 3.2))
        hist = wl["history"]
        ax.step(range(len(hist)), hist, where="post", marker="o")
        ax.set_xlabel("refinement round")
        ax.set_ylabel("colour classes")
        ax.set_title("pair-colour refinement")
        ax.set_xticks(range(len(hist)))
        fig.tight_layout()
        path = outdir / "wl_refinement.png"
        fig.savefig(path, dpi=150)
        plt.close(fig)
        written.append(path)

    sub = report.get("subdesigns")
    if sub and sub.get("vertex_counts"):
        fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(8, 3.2))
        ax1.bar(range(len(sub["vertex_counts"])), sub["vertex_counts"])
        ax1.set_xlabel("vertex")
        ax1.set_ylabel("subdesigns through it")
        ax1.set_title("vertex coverage")
        ax2.bar(range(len(sub["block_counts"])), sub["block_counts"],
                color="darkorange")
        ax2.set_xlabel("block")
        ax2.set_ylabel("subdesigns containing it")
        ax2.set_title("block coverage")
        fig.tight_layout()
        path = outdir / "coverage.png"
        fig.savefig(path, dpi=150)
        plt.close(fig)
        written.append(path)

    ts = report.get("triple_stats")
    if ts:
        op = ts["ordered_pairs"]
        fig, ax = plt.subplots(figsize=(4, 3.2))
        labels = ["|D1&D2|=k", "|D1&D2|=1", "|D1&D2|=0"]
        ax.bar(labels, [op["size_k"], op["size_1"], op["size_0"]],
               color=["steelblue", "seagreen", "indianred"])
        ax.set_ylabel("ordered pairs")
        ax.set_title("subdesign intersection sizes")
        fig.tight_layout()
        path = outdir / "intersections.png"
        fig.savefig(path, dpi=150)
        plt.close(fig)
        written.append(path)
    return written


def _csv_rows(report: dict, prefix=""):
    for key, val in report.items():
        name = f"{prefix}{key}"
        if isinstance(val, dict):
            yield from _csv_rows(val, prefix=f"{name}.")
        elif isinstance(val, list):
            if all(not isinstance(x, (dict, list)) for x in val):
                yield name, " ".join(str(x) for x in val)
            else:
                yield name, f"<{len(val)} entries>"
        else:
            yield name, val


def write_outputs(report: dict, outdir: Path) -> dict[str, list[str]]:
    """Write report.json, summary.csv and the figures under `outdir`."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    json_path = outdir / "report.json"
    json_path.write_text(emit(report, "json"), "utf-8")
    csv_path = outdir / "summary.csv"
    with csv_path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["key", "value"])
        for key, val in _csv_rows(report):
            writer.writerow([key, val])
    figures = render_figures(report, outdir)
    return {
        "json": [str(json_path)],
        "csv": [str(csv_path)],
        "figures": [str(p) for p in figures],
    }

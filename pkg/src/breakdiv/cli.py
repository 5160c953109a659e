"""Command-line front end.

    breakdiv <subcommand> --graph FILE [--divisor FILE|JSON] [--q VERTEX]
             [--metric] [--format json|text] [--seed N]
             [--conductance length|inverse] [--out FILE]

Exit status is 0 on success (or a true predicate), 1 when ``is-break``,
``verify`` or ``equiv`` answer false, and 2 on invalid input.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from collections.abc import Mapping, Sequence
from pathlib import Path

from . import divisor as dv
from . import homology, metric, orient
from .errors import BreakdivError
from .graph import WeightedGraph, format_rational, spanning_trees, validate_graph
from .svg import emit_svg

SUBCOMMANDS = (
    "canonical",
    "reduce",
    "q-orient",
    "orient",
    "is-break",
    "enumerate-break",
    "trees",
    "volumes",
    "verify",
    "equiv",
    "jacobian-svg",
)


class Outcome:
    def __init__(self, report: dict, code: int = 0, raw: str | None = None):
        self.report = report
        self.code = code
        self.raw = raw


# -- JSON helpers ----------------------------------------------------------


def load_json_arg(value: str):
    """Inline JSON if it looks like JSON, otherwise a path to a JSON file."""
    text = value.strip()
    if text[:1] in "{[":
        return json.loads(text)
    return json.loads(Path(value).read_text(encoding="utf-8"))


def divisor_from_json(g: WeightedGraph, raw) -> dv.Divisor:
    if not isinstance(raw, Mapping):
        raise BreakdivError("divisor must be a JSON object")
    for v, c in raw.items():
        if isinstance(c, bool) or not isinstance(c, int):
            raise BreakdivError(f"coefficient of {v!r} must be an integer")
    return dv.check_divisor(g, dv.Divisor(raw))


def divisor_to_json(g: WeightedGraph, d: Mapping) -> dict[str, int]:
    return {v: d[v] for v in g.sorted_vertices(k for k, c in d.items() if c)}


def function_to_json(g: WeightedGraph, f: Mapping) -> dict[str, int]:
    return {v: f[v] for v in g.vertices}


def vertex_list(g: WeightedGraph, s) -> list[str]:
    return g.sorted_vertices(s)


def witness_to_json(g: WeightedGraph, w):
    if w is None:
        return None
    if isinstance(w, orient.Orientation):
        return w.to_json()
    if isinstance(w, orient.MinimizerReport):
        return {"set": vertex_list(g, w.witness), "chi": w.value}
    if isinstance(w, orient.DegreeMismatch):
        return {"degree": w.degree, "expected": w.expected}
    if isinstance(w, frozenset):
        return vertex_list(g, w)
    return w


def certificate_to_json(cert: metric.BreakCertificate | None):
    if cert is None:
        return None
    return {
        "tree": list(cert.tree),
        "assignment": [{"point": p.to_json(), "edge": e} for p, e in cert.assignment],
    }


# -- subcommands -----------------------------------------------------------


def _divisors(args, g, metric_mode):
    if not args.divisor:
        raise BreakdivError(f"{args.subcommand} needs --divisor")
    raws = [load_json_arg(x) for x in args.divisor]
    if metric_mode:
        return [metric.metric_divisor_from_json(g, r) for r in raws]
    return [divisor_from_json(g, r) for r in raws]


def _q(args, g) -> str:
    q = g.vertices[0] if args.q is None else args.q
    g.vertex_index(q)
    return q


def cmd_canonical(args, g):
    (d,) = _divisors(args, g, args.metric)[:1]
    if args.metric:
        out = metric.canonical_break_divisor_metric(g, d, args.q)
        return Outcome({"break_divisor": metric.metric_divisor_to_json(g, out)})
    out = orient.canonical_break_divisor(g, d, _q(args, g))
    return Outcome({"break_divisor": divisor_to_json(g, out)})


def cmd_reduce(args, g):
    (d,) = _divisors(args, g, False)[:1]
    q = _q(args, g)
    reduced, f = dv.dhar_reduce(g, d, q)
    return Outcome(
        {"q": q, "reduced": divisor_to_json(g, reduced), "witness": function_to_json(g, f)}
    )


def _firings_json(g, log):
    return [vertex_list(g, s) for s in log]


def _cut_log_json(log):
    return [
        {"toward": log_entry.model.sorted_vertices(log_entry.toward),
         "distance": format_rational(log_entry.distance)}
        for log_entry in log
    ]


def cmd_orient(args, g):
    (d,) = _divisors(args, g, args.metric)[:1]
    if args.metric:
        out, log = metric.metric_make_orientable(g, d)
        return Outcome({"divisor": metric.metric_divisor_to_json(g, out), "firings": _cut_log_json(log)})
    out, log = orient.make_orientable(g, d)
    return Outcome(
        {
            "divisor": divisor_to_json(g, out),
            "firings": _firings_json(g, log),
            "orientation": orient.realize_orientation(g, out).to_json(),
        }
    )


def cmd_q_orient(args, g):
    (d,) = _divisors(args, g, args.metric)[:1]
    if args.metric:
        q = args.q if args.q is not None else g.vertices[0]
        out, log = metric.metric_make_q_orientable(g, d, q)
        return Outcome({"divisor": metric.metric_divisor_to_json(g, out), "firings": _cut_log_json(log)})
    q = _q(args, g)
    out, log = orient.make_q_orientable(g, d, q)
    o = orient.realize_orientation(g, out)
    return Outcome(
        {
            "q": q,
            "divisor": divisor_to_json(g, out),
            "firings": _firings_json(g, log),
            "orientation": o.to_json(),
            "break_set": orient.break_set_from_orientation(g, o, q).to_json(),
        }
    )


def cmd_is_break(args, g):
    (d,) = _divisors(args, g, args.metric)[:1]
    if args.metric:
        cert = metric.break_certificate(g, d)
        report = {"break": cert is not None, "certificate": certificate_to_json(cert)}
        return Outcome(report, 0 if cert is not None else 1)
    verdict = orient.is_integral_break_divisor(g, d)
    if verdict:
        cert = metric.break_certificate(g, metric.MetricDivisor.from_vertices(d))
        return Outcome({"break": True, "certificate": certificate_to_json(cert)})
    return Outcome({"break": False, "witness": witness_to_json(g, verdict.witness)}, 1)


def cmd_enumerate_break(args, g):
    found = orient.enumerate_integral_break_divisors(g)
    return Outcome(
        {
            "count": len(found),
            "trees": len(spanning_trees(g)),
            "divisors": [divisor_to_json(g, d) for d in found],
        }
    )


def cmd_trees(args, g):
    table = homology.tree_weights(g, args.conductance)
    return Outcome(
        {
            "count": len(table.weights),
            "conductance": args.conductance,
            "trees": [
                {"edges": list(t.tree), "w": format_rational(t.w), "w_prime": format_rational(t.w_prime)}
                for t in table.weights
            ],
            "wG": format_rational(table.w_total),
            "wG_prime": format_rational(table.w_prime_total),
        }
    )


def cmd_volumes(args, g):
    report = homology.cell_volumes(g)
    out = {
        "det": format_rational(report.det_M),
        "cells": [
            {
                "tree": list(c.tree),
                "w": format_rational(c.w),
                "vol_sq": format_rational(c.vol_sq),
                "vol_ratio": format_rational(c.vol_ratio),
                "vol_approx": round(a, 9),
            }
            for c, a in zip(report.cells, report.approx_volumes())
        ],
        "ratio_sum": format_rational(report.ratio_sum),
        "jac_volume_approx": round(float(report.det_M) ** 0.5, 9),
        "approx_fields": ["vol_approx", "jac_volume_approx"],
    }
    if len(g.vertices) >= 2:
        out["conductance"] = args.conductance
        out["reduced_laplacian_det"] = format_rational(
            homology.reduced_laplacian_det(g, _q(args, g), args.conductance)
        )
    return Outcome(out)


def random_divisor(rng: random.Random, g: WeightedGraph, degree: int, spread: int = 2) -> dv.Divisor:
    c = {v: rng.randint(-spread, spread) for v in g.vertices}
    c[g.vertices[0]] += degree - sum(c.values())
    return dv.Divisor(c)


def equivalence_oracles_agree(g: WeightedGraph, rng: random.Random, pairs: int) -> bool:
    """Dhar-based and Abel-Jacobi-based equivalence on unit lengths agree."""
    unit = g.with_unit_lengths()
    for _ in range(pairs):
        d1 = random_divisor(rng, unit, 0)
        # half the pairs are equivalent by construction
        if rng.random() < 0.5:
            x = [v for v in unit.vertices if rng.random() < 0.5]
            d2 = dv.fire_set(unit, d1, x)
        else:
            d2 = random_divisor(rng, unit, 0)
        if dv.is_equivalent(unit, d1, d2) != homology.jac_equivalent(unit, d1, d2):
            return False
    return True


def cmd_verify(args, g):
    rng = random.Random(args.seed)
    ok_det, det_m, w_g = homology.dual_kirchhoff_check(g)
    report = homology.cell_volumes(g)
    unit = g.with_unit_lengths()
    trees = len(spanning_trees(g))
    breaks = len(orient.enumerate_integral_break_divisors(unit))
    aj_ok = equivalence_oracles_agree(g, rng, 50)
    out = {
        "det": format_rational(det_m),
        "wG": format_rational(w_g),
        "trees": trees,
        "identity": ok_det,
        "ratio_sum": format_rational(report.ratio_sum),
        "break_divisors_unit": breaks,
        "break_count_matches": breaks == trees,
        "aj_dhar_agree": aj_ok,
        "seed": args.seed,
    }
    passed = ok_det and report.ratio_sum == 1 and breaks == trees and aj_ok
    out["passed"] = passed
    return Outcome(out, 0 if passed else 1)


def cmd_equiv(args, g):
    ds = _divisors(args, g, args.metric)
    if len(ds) != 2:
        raise BreakdivError("equiv needs exactly two --divisor arguments")
    d1, d2 = ds
    if args.metric:
        same = homology.jac_equivalent(g, d1, d2)
        return Outcome({"equivalent": same, "method": "abel-jacobi"}, 0 if same else 1)
    by_dhar = dv.is_equivalent(g, d1, d2)
    by_aj = homology.jac_equivalent(g.with_unit_lengths(), d1, d2)
    out = {"equivalent": by_dhar, "dhar": by_dhar, "abel_jacobi_unit": by_aj}
    if by_dhar != by_aj:
        out["oracle_disagreement"] = True
        return Outcome(out, 2)
    return Outcome(out, 0 if by_dhar else 1)


def cmd_jacobian_svg(args, g):
    scene, text = emit_svg(g, args.q)
    out = {
        "cells": len(scene.cells),
        "areas": [format_rational(c.area) for c in scene.cells],
        "trees": [list(c.tree) for c in scene.cells],
        "labels": [c.label for c in scene.cells],
        "total_area": format_rational(scene.total_area),
    }
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
        out["out"] = args.out
        return Outcome(out)
    return Outcome(out, raw=text)


COMMANDS = {
    "canonical": cmd_canonical,
    "reduce": cmd_reduce,
    "q-orient": cmd_q_orient,
    "orient": cmd_orient,
    "is-break": cmd_is_break,
    "enumerate-break": cmd_enumerate_break,
    "trees": cmd_trees,
    "volumes": cmd_volumes,
    "verify": cmd_verify,
    "equiv": cmd_equiv,
    "jacobian-svg": cmd_jacobian_svg,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(2, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="breakdiv", description="Break divisors and Jacobians of (metric) graphs.")
    p.add_argument("subcommand", choices=SUBCOMMANDS)
    p.add_argument("--graph", required=True, help="graph JSON file")
    p.add_argument("--divisor", action="append", help="divisor JSON file or inline JSON (repeat for equiv)")
    p.add_argument("--q", help="distinguished vertex (default: first vertex)")
    p.add_argument("--metric", action="store_true", help="treat divisors as metric divisors")
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--conductance", choices=("length", "inverse"), default="inverse")
    p.add_argument("--out", help="output file (jacobian-svg)")
    return p


def render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, indent=2)
    return "\n".join(
        f"{k}: {v if isinstance(v, (str, int, bool)) else json.dumps(v)}" for k, v in report.items()
    )


def run(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    args = build_parser().parse_args(argv)
    try:
        g = validate_graph(load_json_arg(args.graph))
        outcome = COMMANDS[args.subcommand](args, g)
    except (BreakdivError, OSError, json.JSONDecodeError, UnicodeDecodeError) as exc:
        print(f"breakdiv: error: {exc}", file=stderr)
        return 2
    if outcome.raw is not None:
        stdout.write(outcome.raw)
    else:
        print(render(outcome.report, args.format), file=stdout)
    return outcome.code


def main(argv: Sequence[str] | None = None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()

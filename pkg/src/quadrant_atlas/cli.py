"""Command line front end.

Five subcommands: expand (exact expansions and the composition verdict),
preimage (two-stage solver for one target), certify (transversality and
linking certificates for one disc scale), sample (the positivity sweep)
and identities (the remaining verification sweeps). Every subcommand
takes --format text|json; JSON documents share the layout

    {"subcommand", "params", "results", "pass", "wall_time_ms"}

and are byte-identical between runs with the same arguments apart from
wall_time_ms. Exit codes: 0 all checks passed, 1 a check failed,
2 invalid arguments, 3 the solver did not converge.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from typing import Any

from . import __version__
from .polynomial import (
    PolyMap2,
    SparsePolynomial,
    build_f1,
    build_f2,
    build_theorem_map,
    compose,
    stats,
    to_text,
    to_triples,
)
from .sampler import (
    SamplerConfig,
    SamplerReport,
    check_f2_equals_h_g,
    check_g_psi_equals_phi,
    check_mu_gluing,
    check_phi_bound,
    check_positivity,
)
from .solver import PreimageQuery, SolverConfig, SolverFailure, preimage
from .topology import (
    ALPHA1_D1_SIGN,
    ALPHA2_D2_SIGN,
    BoundaryLoop,
    LinkingResult,
    TransversalityReport,
    disc_boundary,
    eval_loop,
    gauss_linking,
    make_tube,
    transversality_scan,
)

_GLUING_GRID = 1001
_LINKING_TOL = 0.01


class _UsageError(Exception):
    """Bad argument values discovered after argparse; maps to exit 2."""


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quadrant-atlas",
        description="expand, solve and certify the open-quadrant polynomial map",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def add_format(p: argparse.ArgumentParser) -> None:
        p.add_argument(
            "--format",
            choices=("text", "json"),
            default="text",
            help="output style (default text)",
        )

    p_expand = sub.add_parser("expand", help="canonical expansions and stats")
    add_format(p_expand)

    p_pre = sub.add_parser("preimage", help="solve one target in the open quadrant")
    p_pre.add_argument("--target", required=True, metavar="A,B", help="target point")
    p_pre.add_argument("--tol", type=float, default=1e-9, help="relative residual bound")
    p_pre.add_argument(
        "--json",
        action="store_true",
        help="shorthand for --format json",
    )
    add_format(p_pre)

    p_cert = sub.add_parser("certify", help="transversality and linking certificates")
    p_cert.add_argument("--A", required=True, type=float, dest="a", help="disc radius")
    p_cert.add_argument("--B", required=True, type=float, dest="b", help="height scale")
    p_cert.add_argument(
        "--segments", type=int, default=4096, help="quadrature segments per curve"
    )
    p_cert.add_argument(
        "--grid", type=int, default=100_000, help="transversality scan resolution"
    )
    p_cert.add_argument(
        "--dump-points", metavar="FILE", default=None, help="write sampled curves as CSV"
    )
    add_format(p_cert)

    p_sample = sub.add_parser("sample", help="seeded positivity sweep")
    p_sample.add_argument("--count", required=True, type=int, help="sample count")
    p_sample.add_argument("--seed", required=True, type=int, help="stream seed")
    p_sample.add_argument("--range", type=float, default=50.0, help="square half-width")
    add_format(p_sample)

    p_ident = sub.add_parser("identities", help="identity, bound and gluing sweeps")
    p_ident.add_argument("--count", required=True, type=int, help="sample count")
    p_ident.add_argument("--seed", required=True, type=int, help="stream seed")
    add_format(p_ident)

    return parser


# ---------------------------------------------------------------------------
# Serialization helpers.


def _poly_payload(p: SparsePolynomial) -> list[list[Any]]:
    # exponents stay integers, coefficients become decimal strings
    return [[a, b, str(c)] for a, b, c in to_triples(p)]


def _map_payload(fmap: PolyMap2) -> dict[str, Any]:
    d1, n1 = stats(fmap.component1)
    d2, n2 = stats(fmap.component2)
    return {
        "component_1": _poly_payload(fmap.component1),
        "component_2": _poly_payload(fmap.component2),
        "degrees": [int(d1), int(d2)],
        "monomials": [n1, n2],
    }


def _report_payload(report: SamplerReport) -> dict[str, Any]:
    first = report.first_failure_input
    return {
        "checked": report.checked,
        "failures": report.failures,
        "min_component_1": report.min_component_1,
        "min_component_2": report.min_component_2,
        "max_relative_error": report.max_relative_error,
        "first_failure_input": None if first is None else list(first),
    }


def _transversality_payload(report: TransversalityReport) -> dict[str, Any]:
    return {
        "ok": report.ok,
        "hit_intervals": [list(iv) for iv in report.hit_intervals],
        "expected_interval": list(report.expected_interval),
        "max_lateral_deviation": report.max_lateral_deviation,
    }


def _linking_payload(result: LinkingResult, expected: int) -> dict[str, Any]:
    return {
        "value": result.value,
        "rounded": result.rounded,
        "expected": expected,
        "loop_segments": result.loop_segments,
        "circle_segments": result.circle_segments,
    }


# ---------------------------------------------------------------------------
# Subcommand handlers: each returns (params, results, passed, text lines).


def _run_expand(args) -> tuple[dict, dict, bool, list[str]]:
    f1 = build_f1()
    f2 = build_f2()
    fmap = build_theorem_map()
    composed = PolyMap2(
        compose(f2.component1, f1.component1, f1.component2),
        compose(f2.component2, f1.component1, f1.component2),
    )
    equal = to_triples(composed.component1) == to_triples(fmap.component1) and to_triples(
        composed.component2
    ) == to_triples(fmap.component2)

    d1, n1 = stats(fmap.component1)
    d2, n2 = stats(fmap.component2)
    glued = _map_payload(fmap)
    glued["total_degree"] = int(d1 + d2)
    glued["total_monomials"] = n1 + n2
    results = {
        "version": __version__,
        "f1": _map_payload(f1),
        "f2": _map_payload(f2),
        "theorem_map": glued,
        "composition_equals_theorem_map": equal,
    }

    lines = [
        f"f1 = ({to_text(f1.component1)}, {to_text(f1.component2)})",
        f"f2 component 1 = {to_text(f2.component1)}",
        f"f2 component 2 = {to_text(f2.component2)}",
        f"map component 1 (degree {int(d1)}, {n1} monomials):",
        f"  {to_text(fmap.component1)}",
        f"map component 2 (degree {int(d2)}, {n2} monomials):",
        f"  {to_text(fmap.component2)}",
        f"total degree {int(d1 + d2)}, total monomials {n1 + n2}",
        f"composition equals the glued map: {'yes' if equal else 'NO'}",
    ]
    return {"format": args.format}, results, equal, lines


def _run_preimage(args) -> tuple[dict, dict, bool, list[str]]:
    parts = args.target.split(",")
    if len(parts) != 2:
        raise _UsageError(f"--target expects A,B with two decimals, got {args.target!r}")
    try:
        a, b = float(parts[0]), float(parts[1])
    except ValueError:
        raise _UsageError(f"--target components must be decimals, got {args.target!r}")
    if args.tol <= 0.0:
        raise _UsageError(f"--tol must be positive, got {args.tol}")
    try:
        query = PreimageQuery(a, b)
    except ValueError as exc:
        raise _UsageError(str(exc))

    params = {"target": [a, b], "tol": args.tol, "format": args.format}
    cfg = SolverConfig(residual_tol=args.tol)
    result = preimage(query, cfg)
    passed = result.residual <= args.tol
    results = {
        "version": __version__,
        "x": result.x,
        "y": result.y,
        "residual": result.residual,
        "stage": result.stage,
        "newton_iters": result.newton_iters,
        "seed_index": result.seed_index,
    }
    lines = [
        f"target ({a!r}, {b!r})",
        f"witness x={result.x!r} y={result.y!r}",
        f"residual {result.residual:.3e} via {result.stage} "
        f"({result.newton_iters} iterations, seed {result.seed_index})",
    ]
    return params, results, passed, lines


def _dump_certify_points(path: str, loops, discs, segments: int) -> None:
    with open(path, "w", encoding="utf-8", newline="") as handle:
        handle.write("curve,param,x,y,z\n")
        for name, loop in loops:
            step = loop.t_max / segments
            for i in range(segments):
                t = i * step
                x, y, z = eval_loop(loop, t)
                handle.write(f"{name},{t!r},{x!r},{y!r},{z!r}\n")
        for name, spec in discs:
            step = math.tau / segments
            for i in range(segments):
                s = i * step
                x, y, z = disc_boundary(spec, s)
                handle.write(f"{name},{s!r},{x!r},{y!r},{z!r}\n")


def _run_certify(args) -> tuple[dict, dict, bool, list[str]]:
    if args.segments < 256:
        raise _UsageError(f"--segments must be at least 256, got {args.segments}")
    if args.grid < 1000:
        raise _UsageError(f"--grid must be at least 1000, got {args.grid}")
    try:
        tube1 = make_tube(args.a, args.b, "d1")
        tube2 = make_tube(args.a, args.b, "d2")
    except ValueError as exc:
        raise _UsageError(str(exc))
    loop1 = BoundaryLoop("alpha1", tube1.m)
    loop2 = BoundaryLoop("alpha2", tube2.m)

    trans1 = transversality_scan(loop1, tube1, args.grid)
    trans2 = transversality_scan(loop2, tube2, args.grid)
    link1 = gauss_linking(loop1, tube1.disc, args.segments, args.segments)
    link2 = gauss_linking(loop2, tube2.disc, args.segments, args.segments)

    link1_ok = abs(link1.value - ALPHA1_D1_SIGN) <= _LINKING_TOL
    link2_ok = abs(link2.value - ALPHA2_D2_SIGN) <= _LINKING_TOL
    passed = trans1.ok and trans2.ok and link1_ok and link2_ok

    if args.dump_points is not None:
        _dump_certify_points(
            args.dump_points,
            [("alpha1", loop1), ("alpha2", loop2)],
            [("d1_boundary", tube1.disc), ("d2_boundary", tube2.disc)],
            args.segments,
        )

    params = {
        "A": args.a,
        "B": args.b,
        "segments": args.segments,
        "grid": args.grid,
        "dump_points": args.dump_points,
        "format": args.format,
    }
    results = {
        "version": __version__,
        "tube": {"m0": tube1.m0, "m": tube1.m, "epsilon": tube1.epsilon},
        "orientation_signs": {
            "alpha1_d1": ALPHA1_D1_SIGN,
            "alpha2_d2": ALPHA2_D2_SIGN,
        },
        "pairs": [
            {
                "loop": "alpha1",
                "disc": "d1",
                "transversality": _transversality_payload(trans1),
                "linking": _linking_payload(link1, ALPHA1_D1_SIGN),
            },
            {
                "loop": "alpha2",
                "disc": "d2",
                "transversality": _transversality_payload(trans2),
                "linking": _linking_payload(link2, ALPHA2_D2_SIGN),
            },
        ],
    }

    def pair_lines(name, trans, link, expected):
        iv = trans.hit_intervals[0] if trans.hit_intervals else None
        return [
            f"{name}: transversality {'ok' if trans.ok else 'FAILED'}"
            + (f", hit interval ({iv[0]:.6g}, {iv[1]:.6g})" if iv else ""),
            f"{name}: linking {link.value:+.6f} rounds to {link.rounded:+d}"
            f" (expected {expected:+d})",
        ]

    lines = [
        f"discs at A={args.a!r}, B={args.b!r}: m0={tube1.m0!r}, "
        f"epsilon={tube1.epsilon!r}",
        *pair_lines("alpha1/d1", trans1, link1, ALPHA1_D1_SIGN),
        *pair_lines("alpha2/d2", trans2, link2, ALPHA2_D2_SIGN),
    ]
    if args.dump_points is not None:
        lines.append(f"curve samples written to {args.dump_points}")
    return params, results, passed, lines


def _run_sample(args) -> tuple[dict, dict, bool, list[str]]:
    try:
        cfg = SamplerConfig(count=args.count, seed=args.seed, range=args.range)
    except ValueError as exc:
        raise _UsageError(str(exc))
    report = check_positivity(cfg)
    passed = report.failures == 0
    params = {
        "count": args.count,
        "seed": args.seed,
        "range": args.range,
        "format": args.format,
    }
    results = {
        "version": __version__,
        "check": "positivity",
        **_report_payload(report),
    }
    lines = [
        f"positivity: checked {report.checked}, failures {report.failures}",
        f"component minima {report.min_component_1!r}, {report.min_component_2!r}",
    ]
    if report.first_failure_input is not None:
        lines.append(f"first failure at input {report.first_failure_input}")
    return params, results, passed, lines


def _run_identities(args) -> tuple[dict, dict, bool, list[str]]:
    try:
        cfg = SamplerConfig(count=args.count, seed=args.seed)
    except ValueError as exc:
        raise _UsageError(str(exc))
    reports = {
        "f2_equals_h_g": check_f2_equals_h_g(cfg),
        "g_psi_equals_phi": check_g_psi_equals_phi(cfg),
        "phi_bound": check_phi_bound(cfg),
        "mu_gluing": check_mu_gluing(_GLUING_GRID),
    }
    passed = all(r.failures == 0 for r in reports.values())
    params = {"count": args.count, "seed": args.seed, "format": args.format}
    results = {
        "version": __version__,
        "gluing_grid": _GLUING_GRID,
        "checks": {name: _report_payload(r) for name, r in reports.items()},
    }
    lines = []
    for name, report in reports.items():
        verdict = "ok" if report.failures == 0 else "FAILED"
        lines.append(
            f"{name}: checked {report.checked}, failures {report.failures}, "
            f"max error {report.max_relative_error:.3e} [{verdict}]"
        )
    return params, results, passed, lines


_HANDLERS = {
    "expand": _run_expand,
    "preimage": _run_preimage,
    "certify": _run_certify,
    "sample": _run_sample,
    "identities": _run_identities,
}


def _emit(doc: dict, fmt: str, lines: list[str]) -> None:
    if fmt == "json":
        print(json.dumps(doc, indent=2))
    else:
        for line in lines:
            print(line)
        print("PASS" if doc["pass"] else "FAIL")


def run(argv: list[str]) -> int:
    """Parse argv, dispatch, print one report; returns the exit code."""
    args = _build_parser().parse_args(argv)
    if getattr(args, "json", False):
        args.format = "json"

    start = time.perf_counter()
    try:
        params, results, passed, lines = _HANDLERS[args.subcommand](args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SolverFailure as exc:
        elapsed = int(round((time.perf_counter() - start) * 1000.0))
        doc = {
            "subcommand": args.subcommand,
            "params": {"target": args.target, "tol": args.tol, "format": args.format},
            "results": {
                "version": __version__,
                "error": str(exc),
                "best_residual": exc.best_residual,
            },
            "pass": False,
            "wall_time_ms": elapsed,
        }
        _emit(doc, args.format, [f"solver did not converge: {exc}"])
        return 3
    elapsed = int(round((time.perf_counter() - start) * 1000.0))

    doc = {
        "subcommand": args.subcommand,
        "params": params,
        "results": results,
        "pass": passed,
        "wall_time_ms": elapsed,
    }
    _emit(doc, args.format, lines)
    return 0 if passed else 1


def main(argv: list[str] | None = None) -> int:
    return run(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())

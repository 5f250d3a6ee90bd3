"""Batch command-line surface for exact density, cone, and obstruction runs.

Every command is deterministic: identical invocations produce byte-identical
output.  Exact quantities appear in JSON as "num/den" strings; the trajectory
CSV is the only floating-point output.  Exit codes: 0 verdict reached, 2
precondition failure, 4 input or I/O error, 3 internal certificate mismatch.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass
from fractions import Fraction

from .cones import (
    CertificateError,
    clique_trop_cone,
    cone_member,
    dot,
    minor_cone,
    primitive,
    star_trop_cone,
)
from .gluing import alpha_vector, enumerate_basis, graph_key, moment_matrix
from .hypergraphs import (
    Hypergraph,
    clique_turan_density,
    density,
    named_graph,
    star_limit_density,
)
from .obstructions import counting_obstruction


class GraphInputError(ValueError):
    """A graph argument could not be read or parsed."""


@dataclass(frozen=True)
class RunConfig:
    """One validated invocation: command, parameters, and output routing."""

    command: str
    args: argparse.Namespace
    out: str | None
    fmt: str
    seed: int


def fraction_str(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def load_graph(spec: str) -> Hypergraph:
    """Graph from inline JSON, @file, '-' for stdin, or a library name."""
    text = spec
    if spec == "-":
        text = sys.stdin.read()
    elif spec.startswith("@"):
        with open(spec[1:], "r", encoding="utf-8") as fh:
            text = fh.read()
    text = text.strip()
    if text.startswith("{"):
        try:
            return Hypergraph.from_json(text)
        except (ValueError, KeyError, TypeError) as exc:
            raise GraphInputError(f"bad graph JSON: {exc}") from exc
    try:
        return named_graph(text)
    except ValueError as exc:
        raise GraphInputError(str(exc)) from exc


def dump_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def parse_fraction(token: str) -> Fraction:
    try:
        return Fraction(token.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise GraphInputError(f"bad rational token {token!r}") from exc


def log_fraction(x: Fraction) -> float:
    """Natural log of a positive rational, safe far outside float range."""
    return math.log(x.numerator) - math.log(x.denominator)


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def cmd_density(cfg: RunConfig) -> tuple[str, int]:
    H = load_graph(cfg.args.H)
    G = load_graph(cfg.args.G)
    value = density(H, G)
    return dump_json(
        {"H": graph_key(H), "G": graph_key(G), "density": fraction_str(value)}
    ), 0


def cmd_trop_sos(cfg: RunConfig) -> tuple[str, int]:
    d, budget = cfg.args.d, cfg.args.labels
    if d < 1:
        raise ValueError("degree must be positive")
    basis = enumerate_basis("B_tilde", d, budget)
    M = moment_matrix(basis.elements)
    cone = minor_cone(M)
    obj = {
        "basis": list(cone.basis),
        "facets": [list(f) for f in cone.facets],
        "rays": [list(r) for r in cone.rays],
        "moment_basis_size": M.size,
        "degenerate": not cone.basis,
    }
    if cone.lineality:
        obj["lineality"] = [list(l) for l in cone.lineality]
    return dump_json(obj), 0


def cmd_clique_cone(cfg: RunConfig) -> tuple[str, int]:
    return clique_trop_cone(cfg.args.r, cfg.args.l).to_json(), 0


def cmd_star_cone(cfg: RunConfig) -> tuple[str, int]:
    return star_trop_cone(cfg.args.r, cfg.args.c, cfg.args.l).to_json(), 0


def build_cone(cfg: RunConfig):
    source = cfg.args.cone
    if source == "clique":
        cone = clique_trop_cone(cfg.args.r, cfg.args.l)
        descriptor = {"source": "clique", "r": cfg.args.r, "l": cfg.args.l}
    elif source == "star":
        cone = star_trop_cone(cfg.args.r, cfg.args.c, cfg.args.l)
        descriptor = {"source": "star", "r": cfg.args.r, "c": cfg.args.c, "l": cfg.args.l}
    else:
        basis = enumerate_basis("B_tilde", cfg.args.d, cfg.args.labels)
        cone = minor_cone(moment_matrix(basis.elements))
        descriptor = {"source": "trop-sos", "d": cfg.args.d, "labels": cfg.args.labels}
    return cone, descriptor


def cmd_test_binomial(cfg: RunConfig) -> tuple[str, int]:
    H1 = load_graph(cfg.args.H1)
    H2 = load_graph(cfg.args.H2)
    cone, descriptor = build_cone(cfg)
    a1 = alpha_vector(H1, cone.basis).exponents
    a2 = alpha_vector(H2, cone.basis).exponents
    diff = tuple(x - y for x, y in zip(a1, a2))
    membership = cone_member(diff, cone.facets)
    obj = {
        "H1": graph_key(H1),
        "H2": graph_key(H2),
        "cone": descriptor,
        "basis": list(cone.basis),
        "difference": list(diff),
    }
    if membership.inside:
        recon = [
            sum(c * f[j] for c, f in zip(membership.coefficients, cone.facets))
            for j in range(len(cone.basis))
        ]
        if recon != list(diff):
            raise CertificateError("Farkas combination does not reproduce the difference")
        obj["verdict"] = "valid on trop"
        obj["coefficients"] = [fraction_str(c) for c in membership.coefficients]
    else:
        sep = membership.separator
        if not (dot(sep, diff) < 0 and all(dot(sep, f) >= 0 for f in cone.facets)):
            raise CertificateError("separating cone point failed re-verification")
        obj["verdict"] = "not valid"
        obj["separator"] = list(sep)
    return dump_json(obj), 0


def cmd_obstruction(cfg: RunConfig) -> tuple[str, int]:
    upper = load_graph(cfg.args.upper)
    lower = load_graph(cfg.args.lower)
    report = counting_obstruction(
        upper, lower, cfg.args.k, cfg.args.d, cfg.args.labels, cfg.args.p
    )
    code = 2 if report.status == "precondition-failure" else 0
    return report.to_json() + "\n", code


def trajectory_setup(cfg: RunConfig):
    """Column names, target ray, and the exact density evaluator for a family."""
    if cfg.args.family == "clique":
        r, l, i = cfg.args.r, cfg.args.l, cfg.args.k
        span = l - r + 1
        if not 1 <= i <= span:
            raise ValueError(f"ray index must lie in 1..{span}, got {i}")
        parts = r + i - 2
        names = [f"K{q}" for q in range(r, l + 1)]
        ray = [0] * span
        for j in range(i, span + 1):
            ray[j - 1] = -(r + j - 1)
        target = primitive(ray)

        def evaluate(param: Fraction) -> list[Fraction]:
            return [clique_turan_density(q, param, parts, r) for q in range(r, l + 1)]

    else:
        r, c, l, m = cfg.args.r, cfg.args.c, cfg.args.l, cfg.args.k
        if l < 1:
            raise ValueError("need at least one branch count")
        names = [f"S{b}" for b in range(1, l + 1)]
        target = primitive([-min(i, m) for i in range(1, l + 1)])

        def evaluate(param: Fraction) -> list[Fraction]:
            return [star_limit_density(b, r, c, param, m) for b in range(1, l + 1)]

    return names, target, evaluate


def cmd_family_trajectory(cfg: RunConfig) -> tuple[str, int]:
    if cfg.args.schedule:
        schedule = [parse_fraction(tok) for tok in cfg.args.schedule.split(",")]
    elif cfg.args.family == "clique" and cfg.args.alpha is not None:
        schedule = [parse_fraction(cfg.args.alpha)]
    elif cfg.args.family == "star" and cfg.args.rho is not None:
        schedule = [parse_fraction(cfg.args.rho)]
    else:
        raise ValueError("a --schedule or a single parameter value is required")
    for param in schedule:
        if not 0 < param < 1:
            raise ValueError(f"schedule values must lie strictly between 0 and 1: {param}")

    names, target, evaluate = trajectory_setup(cfg)
    tnorm = math.sqrt(sum(t * t for t in target))
    rows = []
    for param in schedule:
        densities = evaluate(param)
        base = -log_fraction(param)
        coords = [log_fraction(t) / base for t in densities]
        vnorm = math.sqrt(sum(x * x for x in coords))
        dist = math.sqrt(
            sum((x / vnorm - t / tnorm) ** 2 for x, t in zip(coords, target))
        )
        rows.append(
            ["%.12g" % float(param)] + ["%.12g" % x for x in coords] + ["%.12g" % dist]
        )

    header = ["parameter"] + names + ["distance"]
    if cfg.fmt == "json":
        return dump_json({"columns": header, "rows": rows}), 0
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue(), 0


# ---------------------------------------------------------------------------
# Argument parsing and dispatch
# ---------------------------------------------------------------------------

COMMANDS = {
    "density": cmd_density,
    "trop-sos": cmd_trop_sos,
    "clique-cone": cmd_clique_cone,
    "star-cone": cmd_star_cone,
    "test-binomial": cmd_test_binomial,
    "obstruction": cmd_obstruction,
    "family-trajectory": cmd_family_trajectory,
}

GRAPH_HELP = "graph as inline JSON, @file, '-' for stdin, or a name like K3 or edge^3"


def add_output_flags(parser: argparse.ArgumentParser, top: bool) -> None:
    """Output flags, accepted both before and after the subcommand."""
    kw = {} if top else {"default": argparse.SUPPRESS}
    parser.add_argument("--out", help="write output to this path instead of stdout", **kw)
    parser.add_argument("--format", choices=("json", "csv"), help="output format", **kw)
    if top:
        kw = {"default": 0}
    parser.add_argument(
        "--seed", type=int, help="random seed (recorded; all commands are deterministic)", **kw
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="graphtrop",
        description="Exact homomorphism densities, tropical cones, and obstruction certificates.",
    )
    add_output_flags(parser, top=True)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("density", help="homomorphism density t(H; G)")
    p.add_argument("H", help=GRAPH_HELP)
    p.add_argument("G", help=GRAPH_HELP)

    p = sub.add_parser("trop-sos", help="minor cone of the degree-d moment matrix")
    p.add_argument("--d", type=int, required=True, help="degree bound")
    p.add_argument("--labels", type=int, default=None, help="label budget (default 2d)")

    p = sub.add_parser("clique-cone", help="tropical cone of clique densities")
    p.add_argument("--r", type=int, default=2, help="uniformity / smallest clique")
    p.add_argument("--l", type=int, required=True, help="largest clique")

    p = sub.add_parser("star-cone", help="tropical cone of sunflower densities")
    p.add_argument("--r", type=int, default=2, help="uniformity")
    p.add_argument("--c", type=int, default=1, help="core size")
    p.add_argument("--l", type=int, required=True, help="largest branch count")

    p = sub.add_parser("test-binomial", help="test t(H1) >= t(H2) on a tropical cone")
    p.add_argument("cone", choices=("clique", "star", "trop-sos"), help="cone source")
    p.add_argument("H1", help=GRAPH_HELP)
    p.add_argument("H2", help=GRAPH_HELP)
    p.add_argument("--r", type=int, default=2)
    p.add_argument("--c", type=int, default=1)
    p.add_argument("--l", type=int, default=None)
    p.add_argument("--d", type=int, default=None)
    p.add_argument("--labels", type=int, default=None)

    p = sub.add_parser("obstruction", help="counting obstruction report for k*upper >= (k+1)*lower")
    p.add_argument("upper", help=GRAPH_HELP)
    p.add_argument("lower", help=GRAPH_HELP)
    p.add_argument("--k", type=int, required=True, help="exponent of the upper graph")
    p.add_argument("--d", type=int, required=True, help="relaxation degree")
    p.add_argument("--labels", type=int, default=None, help="label budget (default 2d)")
    p.add_argument("--p", type=int, default=1, help="degree threshold of the vertex weight")

    p = sub.add_parser("family-trajectory", help="extremal family log-density trajectory as CSV")
    p.add_argument("family", choices=("clique", "star"))
    p.add_argument("--r", type=int, default=2)
    p.add_argument("--c", type=int, default=1)
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--k", type=int, required=True, help="ray index (clique) or exponent (star)")
    p.add_argument("--schedule", help="comma-separated parameter values, e.g. 1e-1,1e-2")
    p.add_argument("--alpha", help="single clique-fraction value")
    p.add_argument("--rho", help="single edge-density value")

    for command_parser in sub.choices.values():
        add_output_flags(command_parser, top=False)
    return parser


def validate(cfg: RunConfig) -> None:
    args = cfg.args
    if cfg.command == "test-binomial":
        if args.cone in ("clique", "star") and args.l is None:
            raise ValueError(f"--l is required for the {args.cone} cone")
        if args.cone == "trop-sos" and args.d is None:
            raise ValueError("--d is required for the trop-sos cone")
    if cfg.fmt == "csv" and cfg.command != "family-trajectory":
        raise ValueError(f"command {cfg.command} only emits JSON")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    default_fmt = "csv" if args.command == "family-trajectory" else "json"
    cfg = RunConfig(
        command=args.command,
        args=args,
        out=args.out,
        fmt=args.format or default_fmt,
        seed=args.seed,
    )
    try:
        validate(cfg)
        text, code = COMMANDS[cfg.command](cfg)
        if cfg.out:
            with open(cfg.out, "w", encoding="utf-8") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
        return code
    except GraphInputError as exc:
        print(f"graphtrop: input error: {exc}", file=sys.stderr)
        return 4
    except CertificateError as exc:
        print(f"graphtrop: certificate mismatch: {exc}", file=sys.stderr)
        return 3
    except (OSError, json.JSONDecodeError) as exc:
        print(f"graphtrop: i/o error: {exc}", file=sys.stderr)
        return 4
    except ValueError as exc:
        print(f"graphtrop: precondition failure: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

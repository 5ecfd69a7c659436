"""Command-line front end.

Subcommands: ``solve``, ``verify``, ``frontier``, ``generate`` and ``sweep``.
Exit status is 0 on success, 1 when a competitiveness check is violated and
2 on any error; errors are also printed to stderr as one JSON object.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import re
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from .errors import PCSTError
from .evaluate import alg_profile, format_value, min_mu, profile_csv, verify_competitive
from .fileformat import read_instance, serialize_instance
from .graph import (
    DEFAULT_MAX_EDGES,
    Instance,
    eccentricity,
    longest_root_path,
    parse_rational,
)
from .graph_greedy import density_greedy_graph
from .instances import GeneratorSpec
from .scaling import capacity_scaling, pareto_frontier
from .tree_greedy import density_greedy_tree

ALGORITHMS = ("tree-greedy", "graph-greedy", "capacity-scaling")

EXIT_OK, EXIT_VIOLATED, EXIT_ERROR = 0, 1, 2


class UsageError(PCSTError):
    pass


# ---------------------------------------------------------------------------
# helpers


def run_algorithm(
    name: str, g: Instance, *, max_edges: int = DEFAULT_MAX_EDGES
) -> tuple[tuple[int, ...], str]:
    """Run one algorithm; returns the ordering and its JSON-lines trace."""
    if name == "tree-greedy":
        order, trace = density_greedy_tree(g)
        return order, trace.to_jsonl()
    if name == "graph-greedy":
        order, trace = density_greedy_graph(g, max_edges=max_edges)
        return order, trace.to_jsonl(with_blocks=True)
    if name == "capacity-scaling":
        order, strace = capacity_scaling(g, max_edges=max_edges)
        return order, strace.to_jsonl()
    raise UsageError(f"unknown algorithm {name!r}")


_SCALED = re.compile(r"^\s*(?:([-+]?\d+(?:/\d+)?)\s*\*?\s*)?(chi|gamma)\s*$")


def parse_amount(text: str, g: Instance, *, max_edges: int = DEFAULT_MAX_EDGES) -> Fraction:
    """A rational ``p/q``, or a multiple of ``chi`` or ``gamma`` such as ``3chi``."""
    m = _SCALED.match(text)
    if m is None:
        try:
            return parse_rational(text)
        except ValueError:
            raise UsageError(f"cannot read amount {text!r}") from None
    coef = parse_rational(m.group(1)) if m.group(1) else Fraction(1)
    base = eccentricity(g) if m.group(2) == "chi" else longest_root_path(g, max_edges=max_edges)
    return coef * base


def default_parameters(name: str, g: Instance, ell: int, max_edges: int) -> tuple[Fraction, Fraction]:
    """The slack and factor each algorithm is guaranteed to meet."""
    if name == "tree-greedy":
        return eccentricity(g), Fraction(1)
    if name == "graph-greedy":
        return longest_root_path(g, max_edges=max_edges), Fraction(2)
    if ell < 1:
        raise UsageError("--ell must be at least 1")
    return (4 * ell - 1) * eccentricity(g), Fraction(2 ** (ell + 2), 2**ell - 1)


def load_instance(args: argparse.Namespace) -> Instance:
    if getattr(args, "input", None):
        return read_instance(args.input)
    if getattr(args, "gen", None):
        spec = GeneratorSpec.parse(args.gen)
        if getattr(args, "seed", None) is not None:
            spec = spec.with_seed(args.seed)
        return spec.build()
    raise UsageError("give an instance with --input PATH or --gen SPEC")


def _out_dir(args: argparse.Namespace) -> Path | None:
    if not args.out:
        return None
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _profile_breakpoints_csv(g: Instance, order: Sequence[int]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["budget_num", "budget_den", "prize_num", "prize_den"])
    for b, p in alg_profile(g, order).breakpoints:
        w.writerow([b.numerator, b.denominator, p.numerator, p.denominator])
    return buf.getvalue()


def _emit(obj: dict) -> None:
    print(json.dumps(obj, separators=(", ", ": ")))


# ---------------------------------------------------------------------------
# subcommands


def cmd_solve(args: argparse.Namespace) -> int:
    g = load_instance(args)
    order, trace = run_algorithm(args.algorithm, g, max_edges=args.max_edges)
    out = _out_dir(args)
    if out is not None:
        (out / "ordering.json").write_text(json.dumps(list(order)) + "\n")
        (out / "trace.jsonl").write_text(trace)
        (out / "profile.csv").write_text(_profile_breakpoints_csv(g, order))
    _emit({"algorithm": args.algorithm, "ordering": list(order)})
    return EXIT_OK


def _verify_one(g: Instance, algorithm: str, alpha: str | None, mu: str | None,
                ell: int, max_edges: int) -> tuple[tuple[int, ...], str, dict, Fraction]:
    order, trace = run_algorithm(algorithm, g, max_edges=max_edges)
    d_alpha, d_mu = default_parameters(algorithm, g, ell, max_edges)
    a = parse_amount(alpha, g, max_edges=max_edges) if alpha else d_alpha
    m = parse_amount(mu, g, max_edges=max_edges) if mu else d_mu
    front = pareto_frontier(g, max_edges=max_edges)
    report = verify_competitive(g, order, a, m, frontier=front)
    body = report.to_json()
    body["algorithm"] = algorithm
    body["ordering"] = list(order)
    body["min_mu"] = format_value(min_mu(g, order, a, frontier=front))
    return order, trace, body, a


def cmd_verify(args: argparse.Namespace) -> int:
    g = load_instance(args)
    order, trace, body, alpha = _verify_one(
        g, args.algorithm, args.alpha, args.mu, args.ell, args.max_edges
    )
    out = _out_dir(args)
    if out is not None:
        (out / "report.json").write_text(json.dumps(body, indent=2) + "\n")
        (out / "ordering.json").write_text(json.dumps(list(order)) + "\n")
        (out / "trace.jsonl").write_text(trace)
        (out / "profile.csv").write_text(
            profile_csv(g, order, alpha, max_edges=args.max_edges)
        )
    _emit(body)
    return EXIT_OK if body["verdict"] == "holds" else EXIT_VIOLATED


def cmd_frontier(args: argparse.Namespace) -> int:
    g = load_instance(args)
    text = pareto_frontier(g, max_edges=args.max_edges).to_csv()
    out = _out_dir(args)
    if out is not None:
        (out / "frontier.csv").write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_generate(args: argparse.Namespace) -> int:
    spec = GeneratorSpec.parse(args.spec)
    if args.seed is not None:
        spec = spec.with_seed(args.seed)
    text = serialize_instance(spec.build())
    if args.out:
        path = Path(args.out)
        if path.is_dir() or args.out.endswith("/"):
            path.mkdir(parents=True, exist_ok=True)
            path = path / f"{str(spec).replace(':', '_').replace('/', '-').replace(',', '_')}.inst"
        path.write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _parse_seeds(text: str) -> list[int]:
    seeds: list[int] = []
    for part in text.split(","):
        lo, sep, hi = part.partition("-")
        try:
            seeds.extend(range(int(lo), int(hi) + 1) if sep else [int(lo)])
        except ValueError:
            raise UsageError(f"bad seed range {text!r}") from None
    return seeds


def _sweep_task(task: tuple) -> dict:
    spec_text, seed, algorithm, alpha, mu, ell, max_edges = task
    row = {"seed": seed, "algorithm": algorithm, "alpha": alpha or "default",
           "mu": mu or "default"}
    try:
        g = GeneratorSpec.parse(spec_text).with_seed(seed).build()
        _, _, body, _ = _verify_one(g, algorithm, alpha, mu, ell, max_edges)
        row.update(alpha_value=body["alpha"], mu_value=body["mu"],
                   verdict=body["verdict"], min_mu=body["min_mu"])
    except PCSTError as exc:
        row.update(alpha_value="", mu_value="", verdict=f"error:{exc.code}", min_mu="")
    return row


def cmd_sweep(args: argparse.Namespace) -> int:
    algorithms = args.algorithm or ["capacity-scaling"]
    alphas = args.alpha.split(",") if args.alpha else [None]
    mus = args.mu.split(",") if args.mu else [None]
    tasks = [
        (args.gen, seed, alg, a, m, args.ell, args.max_edges)
        for seed in _parse_seeds(args.seeds)
        for alg in algorithms
        for a in alphas
        for m in mus
    ]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(_sweep_task, tasks))
    else:
        rows = [_sweep_task(t) for t in tasks]

    fields = ["seed", "algorithm", "alpha", "mu", "alpha_value", "mu_value", "verdict", "min_mu"]
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    out = _out_dir(args)
    if out is not None:
        (out / "sweep.csv").write_text(buf.getvalue())
    sys.stdout.write(buf.getvalue())
    passed = sum(r["verdict"] == "holds" for r in rows)
    print(f"# {passed}/{len(rows)} hold")
    return EXIT_OK if passed == len(rows) else EXIT_VIOLATED


# ---------------------------------------------------------------------------
# argument parsing


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # usage errors exit 2 with JSON too
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="incpcst", description="Incremental prize-collecting Steiner trees.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def instance_args(sp: argparse.ArgumentParser) -> None:
        src = sp.add_mutually_exclusive_group()
        src.add_argument("--input", "-i", help="instance file")
        src.add_argument("--gen", help="generator spec, e.g. fig7:eps=1/10")
        sp.add_argument("--seed", type=int, help="seed for random generator families")
        sp.add_argument("--max-edges", type=int, default=DEFAULT_MAX_EDGES,
                        help="enumeration bound (default %(default)s)")
        sp.add_argument("--out", help="output directory")

    def algo_args(sp: argparse.ArgumentParser, multiple: bool = False) -> None:
        if multiple:
            sp.add_argument("--algorithm", "-a", choices=ALGORITHMS, action="append")
        else:
            sp.add_argument("--algorithm", "-a", choices=ALGORITHMS, default="graph-greedy")
        sp.add_argument("--alpha", help="budget slack: p/q, chi, gamma or a multiple like 3chi")
        sp.add_argument("--mu", help="prize factor p/q")
        sp.add_argument("--ell", type=int, default=1,
                        help="capacity-scaling guarantee index for default alpha/mu")

    sp = sub.add_parser("solve", help="compute an incremental ordering")
    instance_args(sp)
    sp.add_argument("--algorithm", "-a", choices=ALGORITHMS, default="graph-greedy")
    sp.set_defaults(func=cmd_solve)

    sp = sub.add_parser("verify", help="check (alpha, mu)-competitiveness exactly")
    instance_args(sp)
    algo_args(sp)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("frontier", help="write the exact budget/prize frontier as CSV")
    instance_args(sp)
    sp.set_defaults(func=cmd_frontier)

    sp = sub.add_parser("generate", help="write a generated instance")
    sp.add_argument("spec", help="generator spec, e.g. fig8:n=3")
    sp.add_argument("--seed", type=int)
    sp.add_argument("--out", help="output file or directory")
    sp.set_defaults(func=cmd_generate)

    sp = sub.add_parser("sweep", help="verify over a seed range and parameter grid")
    sp.add_argument("--gen", required=True, help="random family spec without seed")
    sp.add_argument("--seeds", default="1-10", help="e.g. 1-100 or 1,5,9")
    algo_args(sp, multiple=True)
    sp.add_argument("--max-edges", type=int, default=DEFAULT_MAX_EDGES)
    sp.add_argument("--jobs", "-j", type=int, default=1)
    sp.add_argument("--out", help="output directory")
    sp.set_defaults(func=cmd_sweep)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except PCSTError as exc:
        err = {"error": exc.code, "message": str(exc)}
    except OSError as exc:
        err = {"error": type(exc).__name__, "message": str(exc)}
    print(json.dumps(err), file=sys.stderr)
    return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())

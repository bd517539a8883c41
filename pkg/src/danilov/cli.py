"""Command-line entry point.

Exit codes: 0 when every certificate passes, 1 on a certificate failure
(the witness is printed), 2 on a usage or validation error.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from typing import Sequence

from .divisor import Divisor, divisor_DXYZ, divisor_R, tables
from .lattice import ConsistencyError, Context, danilov_fan
from .quiver import mckay_quiver
from .render import divisors_text, fan_svg, fan_text, fmt, quiver_dot, quiver_text, theta_text
from .serialize import document, dump_divisors, dump_fan, dump_theta, ray_names
from .stability import Theta, chain_holds, chamber_order, chamber_theta, default_chamber_point
from .verify import CheckResult, SUITES, dump_check, dump_verify, run_check, run_verify

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def parse_vector(text: str) -> tuple[Fraction, ...]:
    try:
        return tuple(Fraction(part.strip()) for part in text.split(","))
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"cannot read {text!r} as comma-separated rationals") from exc


def _context(args: argparse.Namespace) -> Context:
    try:
        return Context(args.r, args.a)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def cmd_fan(args: argparse.Namespace) -> int:
    fan = danilov_fan(_context(args))
    out = {"text": fan_text, "structured": dump_fan, "svg": fan_svg}[args.format](fan)
    sys.stdout.write(out)
    return EXIT_OK


def cmd_quiver(args: argparse.Namespace) -> int:
    ctx = _context(args)
    fmt_ = "dot" if args.dot else args.format
    if fmt_ == "dot":
        out = quiver_dot(ctx, annotate=args.annotate)
    elif fmt_ == "text":
        out = quiver_text(ctx)
    else:
        q = mckay_quiver(ctx)
        out = document(
            "quiver",
            ctx,
            {
                "vertices": ctx.r,
                "arrows": [{"label": a.label, "tail": a.tail, "head": a.head} for a in q.arrows],
                "relations": [
                    [[q.arrows[i].label for i in lhs], [q.arrows[i].label for i in rhs]]
                    for lhs, rhs in q.relations()
                ],
            },
        )
    sys.stdout.write(out)
    return EXIT_OK


def divisor_checks(ctx: Context) -> list[tuple[str, bool]]:
    r, a = ctx.r, ctx.a
    t = tables(ctx)
    dx, dy, dz = divisor_DXYZ(ctx)
    R = [t.divisor("R", i) for i in range(r)]

    def row(kind: str, i: int) -> Divisor:
        return t.divisor(kind, i)

    reductor = all(
        row("X", i) == dx + R[i] - R[(i + 1) % r]
        and row("Y", i) == dy + R[i] - R[(i + a) % r]
        and row("Z", i) == dz + R[i] - R[(i - a) % r]
        for i in range(r)
    )
    commute = all(
        row("X", i) + row("Y", i + 1) == row("Y", i) + row("X", i + a)
        and row("X", i) + row("Z", i + 1) == row("Z", i) + row("X", i - a)
        and row("Y", i) + row("Z", i + a) == row("Z", i) + row("Y", i - a)
        for i in range(r)
    )
    return [
        ("R_1 = D_X - E1", divisor_R(ctx, 1) == dx - Divisor.E1(r)),
        ("reductor", reductor),
        ("commutativity", commute),
    ]


def cmd_divisors(args: argparse.Namespace) -> int:
    ctx = _context(args)
    checks = divisor_checks(ctx)
    if args.format == "structured":
        sys.stdout.write(dump_divisors(ctx))
    else:
        sys.stdout.write(divisors_text(ctx, checks))
    failed = [name for name, ok in checks if not ok]
    if failed:
        print("failed checks: " + ", ".join(failed), file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def cmd_theta(args: argparse.Namespace) -> int:
    ctx = _context(args)
    if args.n is None:
        n, theta = default_chamber_point(ctx)
    else:
        n = parse_vector(args.n)
        if len(n) != ctx.r:
            raise UsageError(f"--n needs {ctx.r} entries, got {len(n)}")
        theta = chamber_theta(ctx, n)
    phi = chamber_order(ctx)
    if args.format == "structured":
        sys.stdout.write(dump_theta(ctx, n, theta, phi))
    else:
        sys.stdout.write(
            theta_text(ctx, n, theta, phi, chain_holds(ctx, n, True), chain_holds(ctx, n, False))
        )
    return EXIT_OK


def check_text(res: CheckResult) -> str:
    cones = len(res.cones)
    iso = f"{res.pair_count - len(res.iso_pairs)} pairs non-isomorphic"
    if res.passed:
        return f"PASS ({cones} fixed points stable, {iso})\n"
    bad = res.unstable_cones
    lines = [f"FAIL ({len(bad)} of {cones} fixed points not stable, {iso})"]
    names = ray_names(res.ctx.r)
    for k in bad:
        rep = res.reports[k]
        cone = " ".join(names[i] for i in res.cones[k])
        witness = "{" + ", ".join(map(str, rep.witness)) + "}"
        lines.append(f"  {cone}: {rep.verdict}, witness {witness}, theta = {fmt(rep.value)}")
    lines += [f"  fixed points {s} and {t} are isomorphic" for s, t in res.iso_pairs]
    lines += [f"  distinguished arrows of fixed point {k} are disconnected" for k in res.disconnected]
    lines += [f"  fixed point {k} violates the relations" for k in res.relation_failures]
    return "\n".join(lines) + "\n"


def cmd_check(args: argparse.Namespace) -> int:
    ctx = _context(args)
    theta = None
    if args.theta is not None:
        w = parse_vector(args.theta)
        if len(w) != ctx.r:
            raise UsageError(f"--theta needs {ctx.r} entries, got {len(w)}")
        try:
            theta = Theta(w)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
    try:
        res = run_check(ctx, theta)
    except ConsistencyError as exc:
        print(f"FAIL (contradiction: {exc})")
        return EXIT_FAIL
    sys.stdout.write(dump_check(res) if args.format == "structured" else check_text(res))
    return EXIT_OK if res.passed else EXIT_FAIL


def verify_text(summary) -> str:
    scope = "all a" if summary.all_a else "sampled a"
    bounds = f"r <= {summary.max_r}" if summary.min_r == 2 else f"{summary.min_r} <= r <= {summary.max_r}"
    lines = [f"verify: {bounds}, {scope}, {summary.contexts} contexts"]
    for name, t in summary.tallies.items():
        lines.append(f"  {name}: {t.passed} passed, {t.failed} failed, {t.skipped} skipped")
        lines += [f"    {msg}" for msg in t.failures]
    if summary.guard_skips:
        lines.append("  brute-force suites skipped above r = 20 (use --force)")
    lines.append("PASS" if summary.passed else "FAIL")
    return "\n".join(lines) + "\n"


def cmd_verify(args: argparse.Namespace) -> int:
    if args.max_r < 2:
        raise UsageError("--max-r must be at least 2")
    if args.min_r > args.max_r:
        raise UsageError("--min-r exceeds --max-r")
    if args.jobs < 1:
        raise UsageError("--jobs must be positive")
    summary = run_verify(args.max_r, args.all_a, args.force, args.jobs, args.suite, args.min_r)
    sys.stdout.write(dump_verify(summary) if args.format == "structured" else verify_text(summary))
    return EXIT_OK if summary.passed else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="danilov",
        description="Danilov resolution of 1/r(1,a,r-a), its McKay quiver family and stability chamber.",
        epilog="Vectors are comma-separated rationals; write negative ones as --theta=-4,-1,1,2,2.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def with_ra(p: argparse.ArgumentParser) -> argparse.ArgumentParser:
        p.add_argument("-r", type=int, required=True, help="group order")
        p.add_argument("-a", type=int, required=True, help="weight, coprime to r")
        return p

    p = with_ra(sub.add_parser("fan", help="rays and maximal cones"))
    p.add_argument("--format", choices=("text", "structured", "svg"), default="text")
    p.set_defaults(func=cmd_fan)

    p = with_ra(sub.add_parser("quiver", help="McKay quiver"))
    p.add_argument("--format", choices=("dot", "text", "structured"), default="dot")
    p.add_argument("--dot", action="store_true", help="same as --format dot")
    p.add_argument("--annotate", action="store_true", help="label DOT edges with their divisors")
    p.set_defaults(func=cmd_quiver)

    p = with_ra(sub.add_parser("divisors", help="tau, xi, phi and the divisor tables"))
    p.add_argument("--format", choices=("text", "structured"), default="text")
    p.set_defaults(func=cmd_divisors)

    p = with_ra(sub.add_parser("theta", help="chamber inequalities and theta"))
    p.add_argument("--n", help="explicit n-vector (default: n_phi(j) = j)")
    p.add_argument("--format", choices=("text", "structured"), default="text")
    p.set_defaults(func=cmd_theta)

    p = with_ra(sub.add_parser("check", help="certify stability and non-isomorphism of fixed points"))
    p.add_argument("--theta", help="explicit theta summing to zero (default: chamber point)")
    p.add_argument("--format", choices=("text", "structured"), default="text")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("verify", help="run every property suite over a sweep of (r, a)")
    p.add_argument("--max-r", type=int, required=True)
    p.add_argument("--min-r", type=int, default=2)
    p.add_argument("--all-a", action="store_true", help="every coprime a, not a sample")
    p.add_argument("--force", action="store_true", help="run brute force above r = 20")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--suite", action="append", choices=sorted(SUITES), help="restrict to these suites")
    p.add_argument("--format", choices=("text", "structured"), default="text")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"danilov: error: {exc}", file=sys.stderr)
        return EXIT_USAGE

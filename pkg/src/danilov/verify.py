"""Property suites per module, the ``check`` certificate and the sweep driver.

Each suite takes a context and returns a list of failure messages; an
empty list means every property held.
"""

from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Any, Callable, Iterable

import numpy as np

from .divisor import (
    bricks,
    phi_table,
    restriction_columns,
    tables,
    tau,
    tau_table,
    xi_table,
)
from .lattice import (
    ConsistencyError,
    Context,
    danilov_fan,
    discrepancy,
    e1,
    is_smooth,
    point_p,
    sigma_cone,
)
from .quiver import (
    chart_relations_hold,
    connectedness_check,
    distinguished_arrows,
    fixed_reps,
    isomorphic_pairs,
    mckay_quiver,
    rep_at,
)
from .serialize import document, parse_rats, parse_report, rats, read_document, report_payload
from .stability import (
    NAIVE_LIMIT,
    StabilityReport,
    Theta,
    certify_chamber,
    chamber_order,
    chamber_theta,
    closed_masks_dag,
    closed_masks_naive,
    default_chamber_point,
    n_from_theta,
    successor_masks,
    vw_subreps,
)
from .subdivision import blowup_fan, corollary_order, fan_cone_keys, fan_is_coherent, recursive_order

Suite = Callable[[Context], list[str]]


def lattice_suite(ctx: Context) -> list[str]:
    r = ctx.r
    fan = danilov_fan(ctx)
    out = []
    if len(fan.cones) != 2 * r - 1:
        out.append(f"{ctx}: {len(fan.cones)} cones, expected {2 * r - 1}")
    expected_rays = {e1(ctx)} | {point_p(ctx, i) for i in range(r + 1)}
    used = {g for c in fan.cones for g in c.generators}
    if used != expected_rays or set(fan.rays) != expected_rays:
        out.append(f"{ctx}: ray set differs from {{e1, p_0..p_r}}")
    out += [f"{ctx}: cone {c.generators} is not smooth" for c in fan.cones if not is_smooth(ctx, c)]
    sigmas = {sigma_cone(ctx, i) for i in range(r)}
    if set(fan.cones_containing(e1(ctx))) != sigmas:
        out.append(f"{ctx}: cones through e1 are not sigma_0..sigma_{r - 1}")
    for i in range(1, r):
        if not 0 < discrepancy(ctx, i) < 1:
            out.append(f"{ctx}: discrepancy of D_{i} is {discrepancy(ctx, i)}")
    return out


def coherence_suite(ctx: Context) -> list[str]:
    return [] if fan_is_coherent(danilov_fan(ctx)) else [f"{ctx}: cones overlap or leave gaps"]


def blowup_suite(ctx: Context) -> list[str]:
    out = []
    fan = fan_cone_keys(danilov_fan(ctx))
    if ctx.a in (1, ctx.r - 1) and blowup_fan(ctx, corollary_order(ctx)) != fan:
        out.append(f"{ctx}: consecutive blow-ups give a different fan")
    if blowup_fan(ctx, recursive_order(ctx)) != fan:
        out.append(f"{ctx}: blow-ups in recursion order give a different fan")
    return out


def _rows(arr: np.ndarray, shift: int) -> np.ndarray:
    """Row i of the result is row i + shift of ``arr`` (indices mod r)."""
    return np.roll(arr, -shift, axis=0)


def divisor_suite(ctx: Context) -> list[str]:
    r, a = ctx.r, ctx.a
    t = tables(ctx)
    X, Y, Z, R = t.X, t.Y, t.Z, t.R
    out = []

    def need(cond: bool, what: str) -> None:
        if not cond:
            out.append(f"{ctx}: {what}")

    tt = tau_table(ctx)
    need(sorted(tt) == list(range(r)), "tau is not a permutation")
    need(tt[0] == r - 1, "tau(0) != r-1")
    need(tt == tuple(tau(ctx, i) for i in range(r)), "tau table differs from the recursion")
    need(tuple((x - a) % r for x in xi_table(ctx)) == phi_table(ctx), "phi forms disagree")

    need(np.array_equal(X + _rows(Y, 1), Y + _rows(X, a)), "X_i + Y_{i+1} != Y_i + X_{i+a}")
    need(np.array_equal(X + _rows(Z, 1), Z + _rows(X, -a)), "X_i + Z_{i+1} != Z_i + X_{i-a}")
    need(np.array_equal(Y + _rows(Z, a), Z + _rows(Y, -a)), "Y_i + Z_{i+a} != Z_i + Y_{i-a}")
    full = np.array([0] + [1] * (r + 1))
    need(bool((_rows(Y, -a) + Z == full).all()), "Y_{i-a} + Z_i is not the sum of all D_k")

    # E2 = D0 and E3 = Dr
    for name, arr, col in (("X", X, 0), ("Y", Y, 1), ("Z", Z, -1)):
        need(bool((arr[:, col] >= 1).all() and (arr >= 0).all()), f"{name}_i - E not effective")

    e1_num = np.zeros(r + 2, dtype=np.int64)
    e1_num[0] = r
    need(np.array_equal(R[1], t.DX - e1_num), "R_1 != D_X - E1")
    need(not R[0].any(), "R_0 != 0")
    need(np.array_equal(r * X, t.DX + R - _rows(R, 1)), "X_i != D_X + R_i - R_{i+1}")
    need(np.array_equal(r * Y, t.DY + R - _rows(R, a)), "Y_i != D_Y + R_i - R_{i+a}")
    need(np.array_equal(r * Z, t.DZ + R - _rows(R, -a)), "Z_i != D_Z + R_i - R_{i-a}")
    need(np.array_equal(X.sum(axis=0), t.DX), "sum of X_i != r D_X")
    need(np.array_equal(t.DY + t.DZ, r * full), "D_Y + D_Z != sum of all D_k")

    for side, sub, step in (("L", ctx.left(), r - a), ("R", ctx.right(), a)):
        st = tables(sub)
        cols = restriction_columns(ctx, side)
        rows = np.arange(r - 1)
        bad = ~(X[rows][:, cols] == st.X[rows % step]).all(axis=1)
        out += [f"{ctx}: X_{i} does not restrict to X^{side}_{i % step}" for i in rows[bad]]
        starts = np.array([b.start for b in bricks(ctx, side)])
        tops = np.array([b.members[-1] for b in bricks(ctx, side)]) if side == "L" else starts
        bad = ~(Z[tops][:, cols] == st.Z[starts]).all(axis=1)
        out += [
            f"{ctx}: Z_{i} does not restrict to Z^{side}_{j}" for i, j in zip(tops[bad], starts[bad])
        ]
    return out


def quiver_suite(ctx: Context, samples: int = 2, seed: int = 0) -> list[str]:
    r, a = ctx.r, ctx.a
    q = mckay_quiver(ctx)
    fan = danilov_fan(ctx)
    pairs = fixed_reps(ctx)
    out = []
    for c, rep in pairs:
        if not rep.satisfies_relations():
            out.append(f"{ctx}: fixed point of {fan.cone_rays(c)} violates relations")
        if not connectedness_check(ctx, c):
            out.append(f"{ctx}: distinguished arrows of {fan.cone_rays(c)} are disconnected")
    iso = isomorphic_pairs(q, [rep for _, rep in pairs])
    out += [f"{ctx}: fixed points {s} and {t} are isomorphic" for s, t in iso]
    xi = xi_table(ctx)
    for j in range(r):
        dist = {(arr.kind, arr.index) for arr in distinguished_arrows(ctx, sigma_cone(ctx, j))}
        if any(kind == "x" for kind, _ in dist):
            out.append(f"{ctx}: an x-arrow is sigma_{j}-distinguished")
        neither = [i for i in range(r) if ("z", i) not in dist and ("y", (i + r - a) % r) not in dist]
        both = [i for i in range(r) if ("z", i) in dist and ("y", (i + r - a) % r) in dist]
        if neither != [xi[j]] or both:
            out.append(f"{ctx}: sigma_{j} z/y pattern is not a path broken at xi({j})")
    central = [c for c in fan.cones if set(c.generators) == {point_p(ctx, 0), point_p(ctx, r - a), point_p(ctx, r)}]
    for c in central:
        labels = sorted((arr.kind, arr.index) for arr in distinguished_arrows(ctx, c))
        if labels != [("x", i) for i in range(r - 1)]:
            out.append(f"{ctx}: central cone distinguishes {labels}")
    rng = random.Random(seed * 1009 + r * 31 + a)
    for c, _ in pairs:
        if not chart_relations_hold(ctx, c):
            out.append(f"{ctx}: relations fail identically on the chart of {fan.cone_rays(c)}")
        # integer points keep the evaluation in exact int arithmetic
        for _ in range(samples):
            t = [rng.randint(-9, 9) for _ in range(3)]
            if not rep_at(ctx, c, t).satisfies_relations():
                out.append(f"{ctx}: chart point {t} of {fan.cone_rays(c)} violates relations")
    return out


def tie_point(ctx: Context, k: int) -> tuple[Fraction, ...]:
    """n with n_phi(k) = n_phi(k+1) and every other inequality strict."""
    n = [Fraction(0)] * ctx.r
    for j, p in enumerate(chamber_order(ctx)):
        n[p] = Fraction(j if j <= k else j - 1)
    return tuple(n)


def stability_suite(ctx: Context) -> list[str]:
    r = ctx.r
    out = []
    try:
        cert = certify_chamber(ctx, default_chamber_point(ctx))
        if not cert.passed:
            out.append(f"{ctx}: {len(cert.failures())} fixed points not stable in the chamber")
        for k in range(r - 1):
            n = tie_point(ctx, k)
            tied = certify_chamber(ctx, (n, chamber_theta(ctx, n)))
            if not any(rep.verdict == "strictly-semistable" for rep in tied.sigma_reports):
                out.append(f"{ctx}: tie at position {k} leaves every F_j stable")
        for j in range(r):
            vw_subreps(ctx, j, check=True)
    except ConsistencyError as exc:
        out.append(str(exc))
    q = mckay_quiver(ctx)
    for c, rep in fixed_reps(ctx):
        succ = successor_masks(q, rep)
        if closed_masks_naive(r, succ) != closed_masks_dag(r, succ):
            out.append(f"{ctx}: subset enumerators disagree on {danilov_fan(ctx).cone_rays(c)}")
    return out


SUITES: dict[str, Suite] = {
    "lattice": lattice_suite,
    "coherence": coherence_suite,
    "blowup": blowup_suite,
    "divisor": divisor_suite,
    "quiver": quiver_suite,
    "stability": stability_suite,
}
BRUTE_FORCE = frozenset({"stability"})


# the check certificate


@dataclass(frozen=True)
class CheckResult:
    ctx: Context
    n: tuple[Fraction, ...]
    theta: Theta
    cones: tuple[tuple[int, int, int], ...]
    reports: tuple[StabilityReport, ...]
    iso_pairs: tuple[tuple[int, int], ...]
    disconnected: tuple[int, ...]
    relation_failures: tuple[int, ...]
    chain_strict: bool
    chain_weak: bool

    @property
    def pair_count(self) -> int:
        m = len(self.cones)
        return m * (m - 1) // 2

    @property
    def unstable_cones(self) -> list[int]:
        return [k for k, rep in enumerate(self.reports) if not rep.stable]

    @property
    def passed(self) -> bool:
        return not (self.unstable_cones or self.iso_pairs or self.disconnected or self.relation_failures)


def run_check(ctx: Context, theta: Theta | None = None) -> CheckResult:
    if theta is None:
        n, theta = default_chamber_point(ctx)
    else:
        n = n_from_theta(ctx, theta)
    cert = certify_chamber(ctx, (n, theta))
    fan = danilov_fan(ctx)
    pairs = fixed_reps(ctx)
    q = mckay_quiver(ctx)
    return CheckResult(
        ctx=ctx,
        n=cert.n,
        theta=theta,
        cones=tuple(tuple(sorted(fan.cone_rays(c))) for c in fan.cones),
        reports=tuple(rep for _, rep in cert.reports),
        iso_pairs=tuple(isomorphic_pairs(q, [rep for _, rep in pairs])),
        disconnected=tuple(k for k, (c, _) in enumerate(pairs) if not connectedness_check(ctx, c)),
        relation_failures=tuple(k for k, (_, rep) in enumerate(pairs) if not rep.satisfies_relations()),
        chain_strict=cert.chain_strict,
        chain_weak=cert.chain_weak,
    )


def check_payload(res: CheckResult) -> dict[str, Any]:
    return {
        "passed": res.passed,
        "n": rats(res.n),
        "theta": rats(res.theta.weights),
        "chain_strict": res.chain_strict,
        "chain_weak": res.chain_weak,
        "fixed_points": [
            {"cone": list(c), **report_payload(rep)} for c, rep in zip(res.cones, res.reports)
        ],
        "isomorphic_pairs": [list(p) for p in res.iso_pairs],
        "pair_count": res.pair_count,
        "disconnected": list(res.disconnected),
        "relation_failures": list(res.relation_failures),
    }


def dump_check(res: CheckResult) -> str:
    return document("check", res.ctx, check_payload(res))


def parse_check(text: str) -> CheckResult:
    ctx, p = read_document(text, "check")
    res = CheckResult(
        ctx=ctx,
        n=parse_rats(p["n"]),
        theta=Theta(parse_rats(p["theta"])),
        cones=tuple(tuple(fp["cone"]) for fp in p["fixed_points"]),
        reports=tuple(parse_report(fp) for fp in p["fixed_points"]),
        iso_pairs=tuple(tuple(x) for x in p["isomorphic_pairs"]),
        disconnected=tuple(p["disconnected"]),
        relation_failures=tuple(p["relation_failures"]),
        chain_strict=p["chain_strict"],
        chain_weak=p["chain_weak"],
    )
    if res.passed != p["passed"]:
        raise ValueError("stored verdict does not match the stored reports")
    return res


# the sweep


def sample_a(r: int, all_a: bool) -> list[int]:
    coprime = [a for a in range(1, r) if gcd(a, r) == 1]
    if all_a:
        return coprime
    picks = {1, r - 1}
    nontrivial = [a for a in coprime if a not in picks]
    if nontrivial:
        picks.add(nontrivial[0])
    return sorted(picks)


def sweep_contexts(max_r: int, all_a: bool = True, min_r: int = 2) -> list[Context]:
    return [Context(r, a) for r in range(min_r, max_r + 1) for a in sample_a(r, all_a)]


@dataclass
class SuiteTally:
    passed: int = 0
    failed: int = 0
    skipped: int = 0
    failures: list[str] = field(default_factory=list)


@dataclass
class VerifySummary:
    max_r: int
    all_a: bool
    contexts: int
    tallies: dict[str, SuiteTally]
    guard_skips: bool
    min_r: int = 2

    @property
    def passed(self) -> bool:
        return all(t.failed == 0 for t in self.tallies.values())


def _run_case(args: tuple[int, int, tuple[str, ...]]) -> tuple[int, int, dict[str, list[str]]]:
    r, a, names = args
    ctx = Context(r, a)
    results = {}
    for name in names:
        try:
            results[name] = SUITES[name](ctx)
        except ConsistencyError as exc:
            results[name] = [f"{ctx}: {exc}"]
    return r, a, results


def run_verify(
    max_r: int,
    all_a: bool = False,
    force: bool = False,
    jobs: int = 1,
    suites: Iterable[str] | None = None,
    min_r: int = 2,
) -> VerifySummary:
    names = tuple(suites) if suites is not None else tuple(SUITES)
    unknown = set(names) - set(SUITES)
    if unknown:
        raise ValueError(f"unknown suites {sorted(unknown)}")
    contexts = sweep_contexts(max_r, all_a, min_r)
    tallies = {name: SuiteTally() for name in names}
    cases = []
    guard_skips = False
    for ctx in contexts:
        run = []
        for name in names:
            if name in BRUTE_FORCE and ctx.r > NAIVE_LIMIT and not force:
                tallies[name].skipped += 1
                guard_skips = True
            else:
                run.append(name)
        cases.append((ctx.r, ctx.a, tuple(run)))
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_case, cases))
    else:
        results = [_run_case(c) for c in cases]
    # results come back in case order, so the summary is schedule-independent
    for _, _, per_suite in results:
        for name, failures in per_suite.items():
            tally = tallies[name]
            if failures:
                tally.failed += 1
                tally.failures.extend(failures)
            else:
                tally.passed += 1
    return VerifySummary(max_r, all_a, len(contexts), tallies, guard_skips, min_r)


def verify_payload(s: VerifySummary) -> dict[str, Any]:
    return {
        "passed": s.passed,
        "max_r": s.max_r,
        "min_r": s.min_r,
        "all_a": s.all_a,
        "contexts": s.contexts,
        "brute_force_limit": NAIVE_LIMIT,
        "guard_skips": s.guard_skips,
        "suites": {
            name: {"passed": t.passed, "failed": t.failed, "skipped": t.skipped, "failures": t.failures}
            for name, t in s.tallies.items()
        },
    }


def dump_verify(s: VerifySummary) -> str:
    return document("verify", None, verify_payload(s))


def parse_verify(text: str) -> VerifySummary:
    _, p = read_document(text, "verify")
    tallies = {
        name: SuiteTally(t["passed"], t["failed"], t["skipped"], list(t["failures"]))
        for name, t in p["suites"].items()
    }
    return VerifySummary(
        p["max_r"], p["all_a"], p["contexts"], tallies, p["guard_skips"], p["min_r"]
    )


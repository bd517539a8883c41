"""King theta-stability at dimension vector 1 and the explicit chamber.

With one-dimensional spaces at every vertex, subrepresentations are exactly
vertex sets closed under following nonzero arrows, so stability is decided
by minimising theta over those sets.  Two enumerators are provided: a
bitmask filter over all 2^r subsets, and a walk over the down-sets of the
condensation of the support digraph.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import lcm
from typing import Iterator, Literal, Sequence

import networkx as nx
import numpy as np

from .divisor import phi_table, xi_table
from .lattice import Cone, ConsistencyError, Context, danilov_fan, sigma_cone
from .quiver import McKayQuiver, Representation, distinguished_arrows, fixed_rep, mckay_quiver

Method = Literal["auto", "naive", "dag"]
NAIVE_LIMIT = 20
VERDICTS = ("stable", "strictly-semistable", "unstable")


@dataclass(frozen=True)
class Theta:
    weights: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        w = tuple(Fraction(x) for x in self.weights)
        if sum(w) != 0:
            raise ValueError(f"theta must sum to zero, sums to {sum(w)}")
        object.__setattr__(self, "weights", w)

    def __len__(self) -> int:
        return len(self.weights)

    def of(self, subset: Sequence[int]) -> Fraction:
        return sum((self.weights[v] for v in subset), Fraction(0))


@dataclass(frozen=True)
class StabilityReport:
    verdict: str
    witness: tuple[int, ...] | None = None
    value: Fraction | None = None

    def __post_init__(self) -> None:
        if self.verdict not in VERDICTS:
            raise ValueError(f"unknown verdict {self.verdict!r}")
        if (self.witness is None) != (self.verdict == "stable"):
            raise ValueError("a witness is required exactly when the verdict is not stable")
        if self.witness is not None:
            if self.value is None or self.value > 0:
                raise ValueError("witness must have non-positive theta")
            if (self.value == 0) != (self.verdict == "strictly-semistable"):
                raise ValueError("witness value does not match the verdict")

    @property
    def stable(self) -> bool:
        return self.verdict == "stable"

    @property
    def semistable(self) -> bool:
        return self.verdict != "unstable"


def mask_to_subset(mask: int) -> tuple[int, ...]:
    return tuple(v for v in range(mask.bit_length()) if mask >> v & 1)


def subset_to_mask(subset: Sequence[int]) -> int:
    m = 0
    for v in subset:
        m |= 1 << v
    return m


def successor_masks(q: McKayQuiver, v: Representation) -> list[int]:
    succ = [0] * q.r
    for arrow, val in zip(q.arrows, v.values):
        if val != 0:
            succ[arrow.tail] |= 1 << arrow.head
    return succ


def closed_masks_naive(r: int, succ: Sequence[int]) -> list[int]:
    """Filter every proper nonempty bitmask against the successor masks."""
    if r > 26:
        raise ValueError(f"refusing to enumerate 2^{r} subsets")
    masks = np.arange(1, (1 << r) - 1, dtype=np.int64)
    # drop violators vertex by vertex so later passes scan fewer masks
    for vertex, s in enumerate(succ):
        if s:
            has = ((masks >> vertex) & 1).astype(bool)
            masks = masks[~(has & ((np.int64(s) & ~masks) != 0))]
    return [int(m) for m in masks]


def closed_masks_dag(r: int, succ: Sequence[int]) -> list[int]:
    """Closed sets as down-sets of the condensation DAG (sinks first)."""
    g = nx.DiGraph()
    g.add_nodes_from(range(r))
    g.add_edges_from((u, w) for u in range(r) for w in mask_to_subset(succ[u]) if w != u)
    cond = nx.condensation(g)
    order = list(reversed(list(nx.topological_sort(cond))))
    pos = {node: k for k, node in enumerate(order)}
    vmask = [subset_to_mask(cond.nodes[node]["members"]) for node in order]
    need = [subset_to_mask([pos[s] for s in cond.successors(node)]) for node in order]
    full = (1 << r) - 1
    out = []
    stack = [(0, 0, 0)]
    while stack:
        k, chosen, mask = stack.pop()
        if k == len(order):
            if 0 < mask < full:
                out.append(mask)
            continue
        stack.append((k + 1, chosen, mask))
        if need[k] & ~chosen == 0:
            stack.append((k + 1, chosen | 1 << k, mask | vmask[k]))
    return sorted(out)


def _resolve_method(r: int, method: Method) -> str:
    if method == "auto":
        return "naive" if r <= NAIVE_LIMIT else "dag"
    if method not in ("naive", "dag"):
        raise ValueError(f"unknown enumeration method {method!r}")
    return method


@lru_cache(maxsize=8192)
def _closed_system(q: McKayQuiver, v: Representation, method: str):
    succ = successor_masks(q, v)
    masks = closed_masks_naive(q.r, succ) if method == "naive" else closed_masks_dag(q.r, succ)
    indicator = np.zeros((len(masks), q.r), dtype=np.int64)
    for row, m in enumerate(masks):
        for vertex in mask_to_subset(m):
            indicator[row, vertex] = 1
    indicator.setflags(write=False)
    return tuple(masks), indicator


def closed_subsets(
    q: McKayQuiver, v: Representation, method: Method = "auto"
) -> Iterator[tuple[int, ...]]:
    """Proper nonempty vertex sets closed under nonzero arrows, in bitmask order."""
    masks, _ = _closed_system(q, v, _resolve_method(q.r, method))
    return (mask_to_subset(m) for m in masks)


def stability(
    q: McKayQuiver, v: Representation, theta: Theta, method: Method = "auto"
) -> StabilityReport:
    """Minimise theta over closed subsets; ties go to the smallest bitmask."""
    if len(theta) != q.r:
        raise ValueError(f"theta has length {len(theta)}, quiver has {q.r} vertices")
    masks, indicator = _closed_system(q, v, _resolve_method(q.r, method))
    if not masks:
        return StabilityReport("stable")
    # a positive rescaling leaves every sign and the argmin unchanged
    scale = lcm(*(w.denominator for w in theta.weights))
    ints = [int(w * scale) for w in theta.weights]
    if max(map(abs, ints)) * q.r < 2**62:
        sums = indicator @ np.array(ints, dtype=np.int64)
    else:
        sums = indicator.astype(object) @ np.array(ints, dtype=object)
    k = int(np.argmin(sums))
    best = Fraction(int(sums[k]), scale)
    if best > 0:
        return StabilityReport("stable")
    verdict = "strictly-semistable" if best == 0 else "unstable"
    return StabilityReport(verdict, mask_to_subset(masks[k]), best)


def chamber_theta(ctx: Context, n: Sequence[Fraction]) -> Theta:
    """theta_i = n_i - n_{i+(r-a)}."""
    r, a = ctx.r, ctx.a
    if len(n) != r:
        raise ValueError(f"n must have length {r}, got {len(n)}")
    n = [Fraction(x) for x in n]
    return Theta(tuple(n[i] - n[(i + r - a) % r] for i in range(r)))


def chamber_order(ctx: Context) -> tuple[int, ...]:
    """phi(0), ..., phi(r-1); the chamber is n_phi(0) < ... < n_phi(r-1)."""
    phi = phi_table(ctx)
    alt = tuple((x - ctx.a) % ctx.r for x in xi_table(ctx))
    if phi != alt:
        raise ConsistencyError(f"{ctx}: the two forms of phi disagree")
    return phi


def default_chamber_point(ctx: Context) -> tuple[tuple[Fraction, ...], Theta]:
    """n_phi(j) = j; lies strictly inside the chamber."""
    n = [Fraction(0)] * ctx.r
    for j, p in enumerate(chamber_order(ctx)):
        n[p] = Fraction(j)
    return tuple(n), chamber_theta(ctx, n)


def chain_holds(ctx: Context, n: Sequence[Fraction], strict: bool = True) -> bool:
    vals = [Fraction(n[p]) for p in chamber_order(ctx)]
    pairs = zip(vals, vals[1:])
    return all(x < y for x, y in pairs) if strict else all(x <= y for x, y in pairs)


def n_from_theta(ctx: Context, theta: Theta) -> tuple[Fraction, ...]:
    """The n with n_0 = 0 and chamber_theta(n) = theta (unique up to a constant)."""
    r, a = ctx.r, ctx.a
    if len(theta) != r:
        raise ValueError(f"theta must have length {r}, got {len(theta)}")
    n = [Fraction(0)] * r
    i = 0
    for _ in range(r - 1):
        n[(i + r - a) % r] = n[i] - theta.weights[i]
        i = (i + r - a) % r
    if chamber_theta(ctx, n) != theta:
        raise ConsistencyError("theta is not in the image of the chamber map")
    return tuple(n)


@dataclass(frozen=True)
class ChamberCertificate:
    ctx: Context
    n: tuple[Fraction, ...]
    theta: Theta
    reports: tuple[tuple[Cone, StabilityReport], ...]
    sigma_reports: tuple[StabilityReport, ...]
    chain_strict: bool
    chain_weak: bool

    @property
    def passed(self) -> bool:
        return all(rep.stable for _, rep in self.reports)

    @property
    def sigma_stable(self) -> bool:
        return all(rep.stable for rep in self.sigma_reports)

    @property
    def sigma_semistable(self) -> bool:
        return all(rep.semistable for rep in self.sigma_reports)

    def failures(self) -> list[tuple[Cone, StabilityReport]]:
        return [(c, rep) for c, rep in self.reports if not rep.stable]


def certify_chamber(
    ctx: Context, n_theta: tuple[Sequence[Fraction], Theta], method: Method = "auto"
) -> ChamberCertificate:
    """Brute-force stability of every fixed point, cross-checked against the chain.

    Raises :class:`ConsistencyError` when the simultaneous (semi)stability of
    F_0..F_{r-1} disagrees with the strict (non-strict) inequality chain.
    """
    n, theta = n_theta
    n = tuple(Fraction(x) for x in n)
    if chamber_theta(ctx, n) != theta:
        raise ValueError("theta does not come from n")
    q = mckay_quiver(ctx)
    reports = tuple(
        (c, stability(q, fixed_rep(ctx, c), theta, method)) for c in danilov_fan(ctx).cones
    )
    by_cone = dict(reports)
    sigma = tuple(by_cone[sigma_cone(ctx, j)] for j in range(ctx.r))
    cert = ChamberCertificate(
        ctx, n, theta, reports, sigma, chain_holds(ctx, n, True), chain_holds(ctx, n, False)
    )
    if cert.sigma_stable != cert.chain_strict or cert.sigma_semistable != cert.chain_weak:
        raise ConsistencyError(
            f"{ctx}, n={n}: brute force (stable={cert.sigma_stable}, "
            f"semistable={cert.sigma_semistable}) contradicts the chamber inequalities "
            f"(strict={cert.chain_strict}, weak={cert.chain_weak})"
        )
    return cert


@dataclass(frozen=True)
class VWSubrep:
    """V_{i,j} (suffix of the path of F_j ending at xi(j)) or W_{i,j} (prefix
    starting at xi(j)+(r-a) and ending at i).  Its theta-value is
    ``n[plus] - n[minus]`` for theta coming from n.
    """

    kind: str
    index: int
    j: int
    support: tuple[int, ...]
    plus: int
    minus: int

    def value(self, n: Sequence[Fraction]) -> Fraction:
        return Fraction(n[self.plus]) - Fraction(n[self.minus])


def sigma_path(ctx: Context, j: int) -> tuple[list[int], list[str | None]]:
    """Vertices of F_j in (r-a)-step order from xi(j)+(r-a), and the orientation
    of each consecutive edge: 'z' (forward), 'y' (backward) or None for the gap.
    """
    r, s = ctx.r, ctx.r - ctx.a
    start = (xi_table(ctx)[j] + s) % r
    path = [(start + k * s) % r for k in range(r)]
    dist = {(arr.kind, arr.index) for arr in distinguished_arrows(ctx, sigma_cone(ctx, j))}
    edges: list[str | None] = []
    for k in range(r):
        u, w = path[k], path[(k + 1) % r]
        fwd, bwd = ("z", u) in dist, ("y", w) in dist
        if fwd and bwd:
            raise ConsistencyError(f"sigma_{j}: both arrows between {u} and {w} are distinguished")
        edges.append("z" if fwd else "y" if bwd else None)
    if edges[-1] is not None or None in edges[:-1]:
        raise ConsistencyError(f"sigma_{j}: the support is not a path ending at xi(j)")
    return path, edges


def vw_subreps(ctx: Context, j: int, check: bool | None = None) -> list[VWSubrep]:
    """All V_{i,j} and W_{i,j} of F_j with their theta-forms.

    With ``check`` (default: whenever r <= 20) every V/W is confirmed to be a
    closed subset of F_j and every closed subset of F_j is confirmed to split
    into path segments whose theta-values are sums of one V and one W.
    """
    if not 0 <= j < ctx.r:
        raise ValueError(f"j={j} outside 0..{ctx.r - 1}")
    r = ctx.r
    path, edges = sigma_path(ctx, j)
    c0 = path[0]
    out = []
    for k in range(1, r):
        if edges[k - 1] == "z":
            out.append(VWSubrep("V", path[k], j, tuple(path[k:]), path[k], c0))
    for l in range(r - 1):
        if edges[l] == "y":
            out.append(VWSubrep("W", path[l], j, tuple(path[: l + 1]), c0, path[l + 1]))
    if check is None:
        check = r <= NAIVE_LIMIT
    if check:
        _check_vw(ctx, j, path, out)
    return out


def _form(ctx: Context, subset: Sequence[int]) -> list[int]:
    r, s = ctx.r, ctx.r - ctx.a
    f = [0] * r
    for v in subset:
        f[v] += 1
        f[(v + s) % r] -= 1
    return f


def _check_vw(ctx: Context, j: int, path: list[int], subs: list[VWSubrep]) -> None:
    r = ctx.r
    q = mckay_quiver(ctx)
    closed = set(subset_to_mask(s) for s in closed_subsets(q, fixed_rep(ctx, sigma_cone(ctx, j))))
    for sub in subs:
        if subset_to_mask(sub.support) not in closed:
            raise ConsistencyError(f"{sub.kind}_{sub.index},{j} is not a subrepresentation")
        expected = [0] * r
        expected[sub.plus] += 1
        expected[sub.minus] -= 1
        if _form(ctx, sub.support) != expected:
            raise ConsistencyError(f"{sub.kind}_{sub.index},{j} has the wrong theta-form")
    v_at = {sub.index: sub for sub in subs if sub.kind == "V"}
    w_at = {sub.index: sub for sub in subs if sub.kind == "W"}
    where = {v: k for k, v in enumerate(path)}
    for mask in closed:
        ks = sorted(where[v] for v in mask_to_subset(mask))
        segments, lo = [], ks[0]
        for prev, cur in zip(ks, ks[1:]):
            if cur != prev + 1:
                segments.append((lo, prev))
                lo = cur
        segments.append((lo, ks[-1]))
        for lo, hi in segments:
            parts = []
            if lo > 0:
                parts.append(v_at.get(path[lo]))
            if hi < r - 1:
                parts.append(w_at.get(path[hi]))
            if any(p is None for p in parts):
                raise ConsistencyError(f"segment {path[lo:hi + 1]} of F_{j} is not V meet W")
            total = [0] * r
            for p in parts:
                total[p.plus] += 1
                total[p.minus] -= 1
            if _form(ctx, path[lo : hi + 1]) != total:
                raise ConsistencyError(f"theta of segment {path[lo:hi + 1]} is not V plus W")

"""McKay quiver of 1/r(1,a,r-a) and the family F(r,a) over the Danilov fan.

Representations have dimension vector 1 at every vertex, so a
representation is one exact rational per arrow.  Arrows are ordered
``x_0, y_0, z_0, x_1, ...``; the divisor of the section carried by
``x_i`` (resp. ``y_i``, ``z_i``) is ``X_i`` (resp. ``Y_i``, ``Z_i``).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import permutations
from typing import Iterable, NamedTuple, Sequence

from .divisor import tables
from .lattice import (
    Cone,
    ConsistencyError,
    Context,
    chart_coordinates,
    danilov_fan,
    is_smooth,
)

KINDS = ("x", "y", "z")


class Arrow(NamedTuple):
    kind: str
    index: int
    tail: int
    head: int

    @property
    def label(self) -> str:
        return f"{self.kind}_{self.index}"


@dataclass(frozen=True)
class McKayQuiver:
    r: int
    a: int
    arrows: tuple[Arrow, ...]

    def arrow_id(self, kind: str, i: int) -> int:
        return 3 * (i % self.r) + KINDS.index(kind)

    def arrow(self, kind: str, i: int) -> Arrow:
        return self.arrows[self.arrow_id(kind, i)]

    def relations(self) -> list[tuple[tuple[int, int], tuple[int, int]]]:
        """Pairs of length-two paths whose products must agree.

        For each i: y_{i+1} x_i = x_{i+a} y_i, z_{i+1} x_i = x_{i-a} z_i and
        y_{i-a} z_i = z_{i+a} y_i.
        """
        return list(_relations(self.r, self.a))


@lru_cache(maxsize=1024)
def _relations(r: int, a: int) -> tuple[tuple[tuple[int, int], tuple[int, int]], ...]:
    def aid(kind: str, i: int) -> int:
        return 3 * (i % r) + KINDS.index(kind)

    rels = []
    for i in range(r):
        rels.append(((aid("y", i + 1), aid("x", i)), (aid("x", i + a), aid("y", i))))
        rels.append(((aid("z", i + 1), aid("x", i)), (aid("x", i - a), aid("z", i))))
        rels.append(((aid("y", i - a), aid("z", i)), (aid("z", i + a), aid("y", i))))
    return tuple(rels)


@lru_cache(maxsize=1024)
def mckay_quiver(ctx: Context) -> McKayQuiver:
    r, a = ctx.r, ctx.a
    arrows = []
    for i in range(r):
        arrows.append(Arrow("x", i, i, (i + 1) % r))
        arrows.append(Arrow("y", i, i, (i + a) % r))
        arrows.append(Arrow("z", i, i, (i - a) % r))
    return McKayQuiver(r, a, tuple(arrows))


@dataclass(frozen=True)
class Representation:
    quiver: McKayQuiver
    values: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        # ints stay ints: relation checks on 0/1 and integer points are then cheap
        vals = tuple(v if type(v) is int else Fraction(v) for v in self.values)
        if len(vals) != len(self.quiver.arrows):
            raise ValueError(f"need {len(self.quiver.arrows)} arrow values, got {len(vals)}")
        object.__setattr__(self, "values", vals)

    def __getitem__(self, key: tuple[str, int]) -> Fraction:
        return self.values[self.quiver.arrow_id(*key)]

    def support(self) -> tuple[Arrow, ...]:
        return tuple(a for a, v in zip(self.quiver.arrows, self.values) if v != 0)

    def zero_pattern(self) -> tuple[bool, ...]:
        return tuple(v != 0 for v in self.values)

    def relation_violations(self) -> list[int]:
        v = self.values
        return [
            k
            for k, ((p1, p0), (q1, q0)) in enumerate(_relations(self.quiver.r, self.quiver.a))
            if v[p1] * v[p0] != v[q1] * v[q0]
        ]

    def satisfies_relations(self) -> bool:
        return not self.relation_violations()

    def as_dict(self) -> dict[str, Fraction]:
        return {a.label: v for a, v in zip(self.quiver.arrows, self.values)}


def _require_fan_cone(ctx: Context, c: Cone) -> None:
    if c not in danilov_fan(ctx):
        raise ValueError(f"{c.generators} is not a maximal cone of the fan of {ctx}")


def cone_columns(ctx: Context, c: Cone) -> tuple[int, int, int]:
    """Divisor columns of the rays of ``c``, in generator order."""
    return danilov_fan(ctx).cone_rays(c)


@lru_cache(maxsize=4096)
def arrow_exponents(ctx: Context, c: Cone) -> tuple[tuple[int, int, int], ...]:
    """For each arrow, its divisor's coefficients on the three rays of ``c``."""
    t = tables(ctx)
    cols = list(cone_columns(ctx, c))
    per_kind = {k: t.arrow_table(k)[:, cols].tolist() for k in KINDS}
    return tuple(
        tuple(per_kind[arrow.kind][arrow.index]) for arrow in mckay_quiver(ctx).arrows
    )


def chart_relations_hold(ctx: Context, c: Cone) -> bool:
    """Each relation holds identically on U_c: both sides have equal exponents."""
    exps = arrow_exponents(ctx, c)

    def side(p: tuple[int, int]) -> tuple[int, ...]:
        return tuple(u + v for u, v in zip(exps[p[0]], exps[p[1]]))

    return all(side(lhs) == side(rhs) for lhs, rhs in mckay_quiver(ctx).relations())


def distinguished_arrows(ctx: Context, c: Cone) -> frozenset[Arrow]:
    """Arrows whose section is nonzero at the torus-fixed point of U_c."""
    _require_fan_cone(ctx, c)
    q = mckay_quiver(ctx)
    return frozenset(
        arrow for arrow, exps in zip(q.arrows, arrow_exponents(ctx, c)) if not any(exps)
    )


def fixed_rep(ctx: Context, c: Cone) -> Representation:
    """Representation at the fixed point, normalised so distinguished arrows are 1."""
    q = mckay_quiver(ctx)
    dist = distinguished_arrows(ctx, c)
    rep = Representation(q, tuple(1 if a in dist else 0 for a in q.arrows))
    if not rep.satisfies_relations():
        raise ConsistencyError(f"fixed point of {c.generators} violates the relations")
    return rep


def fixed_reps(ctx: Context) -> list[tuple[Cone, Representation]]:
    return [(c, fixed_rep(ctx, c)) for c in danilov_fan(ctx).cones]


def _monomial(t: Sequence[Fraction], exps: Sequence[int]) -> Fraction:
    out = 1
    for base, e in zip(t, exps):
        if e < 0:
            raise ConsistencyError("negative exponent in a section of an effective divisor")
        if e:
            out *= base**e
    return out


def rep_at(ctx: Context, c: Cone, t: Sequence[Fraction]) -> Representation:
    """Representation at the point of U_c with chart coordinates ``t``.

    ``t[k]`` is the coordinate dual to the k-th generator of ``c``; every
    arrow is the monomial prod t_k^(coefficient on ray k), with 0^0 = 1.
    """
    if not is_smooth(ctx, c):
        raise ValueError(f"chart is not smooth: {c.generators}")
    _require_fan_cone(ctx, c)
    if len(t) != 3:
        raise ValueError("a chart point has three coordinates")
    q = mckay_quiver(ctx)
    return Representation(q, tuple(_monomial(t, e) for e in arrow_exponents(ctx, c)))


def character_basis(ctx: Context) -> tuple[tuple[int, int, int], ...]:
    """A basis of M(r,a): r e1*, e2* - a e1*, e3* - (r-a) e1*."""
    r, a = ctx.r, ctx.a
    return ((r, 0, 0), (-a, 1, 0), (a - r, 0, 1))


def torus_chart_point(ctx: Context, c: Cone, values: Sequence[Fraction]) -> tuple[Fraction, ...]:
    """Chart coordinates on U_c of the torus point with the given values on
    :func:`character_basis`.  The same ``values`` give the same point in
    every chart, which lets charts be compared exactly.
    """
    r, a = ctx.r, ctx.a
    out = []
    for m in chart_coordinates(ctx, c):
        if any(v.denominator != 1 for v in m):
            raise ConsistencyError("dual basis vector is not integral")
        m1, m2, m3 = (int(v) for v in m)
        c1, rem = divmod(m1 + a * m2 + (r - a) * m3, r)
        if rem:
            raise ConsistencyError("dual basis vector is not in M(r,a)")
        coord = Fraction(1)
        for base, e in zip(values, (c1, m2, m3)):
            coord *= Fraction(base) ** e
        out.append(coord)
    return tuple(out)


def are_isomorphic(q: McKayQuiver, v: Representation, w: Representation) -> bool:
    """Decide whether w = g.v for vertex scalars g, by gauge fixing on a spanning forest."""
    if v.zero_pattern() != w.zero_pattern():
        return False
    adjacency: dict[int, list[tuple[int, int]]] = {i: [] for i in range(q.r)}
    for k, arrow in enumerate(q.arrows):
        if v.values[k] != 0:
            adjacency[arrow.tail].append((k, arrow.head))
            adjacency[arrow.head].append((k, arrow.tail))
    # (g . v)(a) = g(head) v(a) / g(tail)
    g: dict[int, Fraction] = {}
    for root in range(q.r):
        if root in g:
            continue
        g[root] = Fraction(1)
        stack = [root]
        while stack:
            u = stack.pop()
            for k, other in adjacency[u]:
                if other in g:
                    continue
                arrow = q.arrows[k]
                ratio = Fraction(w.values[k]) / v.values[k]
                g[other] = g[u] * ratio if arrow.tail == u else g[u] / ratio
                stack.append(other)
    return all(
        w.values[k] == g[arrow.head] * v.values[k] / g[arrow.tail]
        for k, arrow in enumerate(q.arrows)
    )


def gauge(q: McKayQuiver, v: Representation, g: Sequence[Fraction]) -> Representation:
    """Apply the vertex scalars ``g`` (all nonzero)."""
    return Representation(
        q,
        tuple(
            Fraction(g[arrow.head]) * val / Fraction(g[arrow.tail])
            for arrow, val in zip(q.arrows, v.values)
        ),
    )


def isomorphic_pairs(q: McKayQuiver, reps: Sequence[Representation]) -> list[tuple[int, int]]:
    """All index pairs (s, t), s < t, with reps[s] isomorphic to reps[t].

    The zero pattern is an isomorphism invariant, so only representations
    sharing a pattern are compared arrow by arrow.
    """
    buckets: dict[tuple[bool, ...], list[int]] = {}
    for k, rep in enumerate(reps):
        buckets.setdefault(rep.zero_pattern(), []).append(k)
    pairs = []
    for members in buckets.values():
        for i, s in enumerate(members):
            for t in members[i + 1 :]:
                if are_isomorphic(q, reps[s], reps[t]):
                    pairs.append((s, t))
    return sorted(pairs)


def _connected(r: int, edges: Iterable[tuple[int, int]]) -> bool:
    parent = list(range(r))

    def find(u: int) -> int:
        while parent[u] != u:
            parent[u] = parent[parent[u]]
            u = parent[u]
        return u

    components = r
    for u, w in edges:
        ru, rw = find(u), find(w)
        if ru != rw:
            parent[ru] = rw
            components -= 1
    return components == 1


def connectedness_check(ctx: Context, c: Cone) -> bool:
    """Distinguished arrows other than x_{r-1} connect all vertices."""
    q = mckay_quiver(ctx)
    last_x = q.arrow("x", ctx.r - 1)
    edges = [(a.tail, a.head) for a in distinguished_arrows(ctx, c) if a != last_x]
    return _connected(ctx.r, edges)


def chart_divisor_indices(
    ctx: Context, c: Cone, allow_last_x: bool = False
) -> tuple[int, int, int, tuple[int, int, int]] | None:
    """Search for i', j', k' such that X_i', Y_j', Z_k' restricted to U_c are
    the three coordinate divisors of the chart; i' = r-1 is excluded unless
    ``allow_last_x``.

    Returns ``(i', j', k', rays)`` where ``rays[0]`` is the generator position
    matched by X_i', and so on; ``None`` if no such indices exist.
    """
    exps = arrow_exponents(ctx, c)
    q = mckay_quiver(ctx)
    unit = {pos: tuple(int(k == pos) for k in range(3)) for pos in range(3)}
    found: dict[tuple[str, int], list[int]] = {}
    for arrow, e in zip(q.arrows, exps):
        for pos, u in unit.items():
            excluded = arrow.kind == "x" and arrow.index == ctx.r - 1 and not allow_last_x
            if e == u and not excluded:
                found.setdefault((arrow.kind, pos), []).append(arrow.index)
    for perm in permutations(range(3)):
        hits = [found.get((kind, pos)) for kind, pos in zip(KINDS, perm)]
        if all(hits):
            return hits[0][0], hits[1][0], hits[2][0], perm
    return None

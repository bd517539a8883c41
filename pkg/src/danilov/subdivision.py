"""Independent checks on fans: plain star subdivision and pairwise coherence.

Nothing here uses the recursive construction in :mod:`danilov.lattice`;
the blow-up oracle only knows how to star-subdivide a simplicial fan at a
point, and the coherence test only looks at generator vectors.
"""

from __future__ import annotations

from fractions import Fraction
from functools import cmp_to_key
from itertools import combinations
from typing import Iterable, Sequence

from .lattice import Context, Fan, ScaledPoint, det3, e1, e2, e3, point_p

ConeKey = frozenset


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def barycentric_coefficients(gens: Sequence[Sequence[int]], v: Sequence[int]) -> list:
    """Signs-preserving Cramer numerators: v = sum(num_j / d) * gens[j]."""
    d = det3(*gens)
    nums = []
    for j in range(3):
        cols = list(gens)
        cols[j] = v
        nums.append(det3(*cols))
    return [Fraction(n, d) for n in nums]


def star_subdivide(cones: Iterable[ConeKey], v: ScaledPoint) -> set[ConeKey]:
    """Star subdivision of a simplicial fan at the ray through ``v``."""
    out: set[ConeKey] = set()
    hit = False
    for cone in cones:
        gens = sorted(cone)
        coeffs = barycentric_coefficients(gens, v)
        if min(coeffs) < 0:
            out.add(cone)
            continue
        hit = True
        face = [g for g, c in zip(gens, coeffs) if c > 0]
        if len(face) == 1:
            raise ValueError(f"{tuple(v)} already spans a ray of the fan")
        for g in face:
            out.add(frozenset((set(gens) - {g}) | {v}))
    if not hit:
        raise ValueError(f"{tuple(v)} lies outside the fan")
    return out


def blowup_fan(ctx: Context, order: Sequence[int]) -> set[ConeKey]:
    """Subdivide the octant at p_i for i in ``order``, one after another."""
    cones = {frozenset((e1(ctx), e2(ctx), e3(ctx)))}
    for i in order:
        cones = star_subdivide(cones, point_p(ctx, i))
    return cones


def corollary_order(ctx: Context) -> list[int]:
    """Blow-up order for a = 1 (p_{r-1}, ..., p_1) and a = r-1 (p_1, ..., p_{r-1})."""
    if ctx.a == 1:
        return list(range(ctx.r - 1, 0, -1))
    if ctx.a == ctx.r - 1:
        return list(range(1, ctx.r))
    raise ValueError("only defined for a in {1, r-1}")


def recursive_order(ctx: Context) -> list[int]:
    """p-indices in the order the recursion blows them up (centre first)."""
    if ctx.is_unit:
        return []
    c = ctx.r - ctx.a
    left = recursive_order(ctx.left())
    right = recursive_order(ctx.right())
    return [c] + left + [c + j for j in right]


def fan_cone_keys(fan: Fan) -> set[ConeKey]:
    return {frozenset(c.generators) for c in fan.cones}


def _proper_pair(t1: Sequence[ScaledPoint], t2: Sequence[ScaledPoint]) -> bool:
    """Do two simplicial cones in the octant meet in a common face?

    Works in the slice x+y+z = 1, where the side of w relative to the line
    through u, v is sign det(u, v, w).  Interiors are disjoint iff some edge
    line of either triangle weakly separates them; the intersection is then
    the overlap of the two pieces lying on that line.
    """
    shared = set(t1) & set(t2)
    for a, b in ((t1, t2), (t2, t1)):
        for u, v in combinations(a, 2):
            sa = {_sign(det3(u, v, w)) for w in a} - {0}
            sb = {_sign(det3(u, v, w)) for w in b} - {0}
            if len(sa) > 1 or len(sb) > 1 or (sa and sb and sa == sb):
                continue
            on_a = [w for w in a if det3(u, v, w) == 0]
            on_b = [w for w in b if det3(u, v, w) == 0]
            return _segments_meet_in(on_a, on_b, shared, reference=_off_line(a, b, u, v))
    return False


def _off_line(a, b, u, v) -> ScaledPoint:
    for w in list(a) + list(b):
        if det3(u, v, w) != 0:
            return w
    raise ValueError("degenerate configuration")


def _segments_meet_in(on_a, on_b, shared, reference) -> bool:
    def cmp(p, q) -> int:
        return _sign(det3(reference, p, q))

    if not on_b:
        return not shared
    key = cmp_to_key(cmp)
    lo = max(min(on_a, key=key), min(on_b, key=key), key=key)
    hi = min(max(on_a, key=key), max(on_b, key=key), key=key)
    empty = cmp(lo, hi) > 0
    if not shared:
        return empty
    if empty:
        return False
    return cmp(lo, min(shared, key=key)) == 0 and cmp(hi, max(shared, key=key)) == 0


def _slice_area(t: Sequence[ScaledPoint]) -> Fraction:
    pts = [[Fraction(c, sum(p)) for c in p] for p in t]
    return abs(det3(*pts))


def fan_is_coherent(fan: Fan) -> bool:
    """Pairwise proper intersections and full coverage of the octant."""
    cones = [c.generators for c in fan.cones]
    for t1, t2 in combinations(cones, 2):
        if not _proper_pair(t1, t2):
            return False
    return sum((_slice_area(t) for t in cones), Fraction(0)) == 1

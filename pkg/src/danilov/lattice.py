"""Lattices N(r,a), the points p_i and the recursive Danilov fan.

Every lattice point is stored as an integer vector ``u`` standing for
``u / r``, where ``r`` is the order of the context the point lives in.
Sub-resolutions are pushed into the top-level context through the lattice
maps ``map_L`` / ``map_R`` as soon as they are built, so a finished fan
only ever contains points with the top-level denominator.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from math import gcd
from typing import Iterable, NamedTuple, Sequence


class ConsistencyError(RuntimeError):
    """An internal identity that must hold by construction failed."""


def inverse_mod(a: int, r: int) -> int:
    """Return ``b`` with ``0 < b < r`` and ``a*b = 1 (mod r)``."""
    if r < 2 or not 0 < a < r:
        raise ValueError(f"need 0 < a < r, got a={a}, r={r}")
    if gcd(a, r) != 1:
        raise ValueError(f"{a} is not invertible modulo {r}")
    return pow(a, -1, r)


@dataclass(frozen=True)
class Context:
    """The singularity 1/r(1, a, r-a) together with ``b = a^-1 mod r``.

    ``Context(1, 0)`` (the lattice N_0 itself) only arises inside the
    recursion and is built with :meth:`unit`; the public constructor
    rejects it.
    """

    r: int
    a: int
    b: int = field(init=False, compare=False)

    def __post_init__(self) -> None:
        if not isinstance(self.r, int) or not isinstance(self.a, int):
            raise TypeError("r and a must be integers")
        if self.r < 2:
            raise ValueError(f"r must be at least 2, got r={self.r}")
        object.__setattr__(self, "b", inverse_mod(self.a, self.r))

    @classmethod
    def unit(cls) -> "Context":
        ctx = object.__new__(cls)
        object.__setattr__(ctx, "r", 1)
        object.__setattr__(ctx, "a", 0)
        object.__setattr__(ctx, "b", 0)
        return ctx

    @property
    def is_unit(self) -> bool:
        return self.r == 1

    def left(self) -> "Context":
        """Context of the L-resolution, 1/(r-a)(1, <r>, <-r>)."""
        return _split(self)[0]

    def right(self) -> "Context":
        """Context of the R-resolution, 1/a(1, <-r>, <r>)."""
        return _split(self)[1]

    def __repr__(self) -> str:
        return f"Context(r={self.r}, a={self.a})"


@lru_cache(maxsize=None)
def _split(ctx: Context) -> tuple[Context, Context]:
    if ctx.is_unit:
        raise ValueError("the smooth cone has no sub-resolutions")
    r, a = ctx.r, ctx.a
    left = Context.unit() if r - a == 1 else Context(r - a, r % (r - a))
    right = Context.unit() if a == 1 else Context(a, -r % a)
    return left, right


class ScaledPoint(NamedTuple):
    """Integer vector ``u``; the lattice point is ``u / r``."""

    x: int
    y: int
    z: int


def e1(ctx: Context) -> ScaledPoint:
    return ScaledPoint(ctx.r, 0, 0)


def e2(ctx: Context) -> ScaledPoint:
    return ScaledPoint(0, ctx.r, 0)


def e3(ctx: Context) -> ScaledPoint:
    return ScaledPoint(0, 0, ctx.r)


def in_lattice(ctx: Context, u: Sequence[int]) -> bool:
    r, a = ctx.r, ctx.a
    return (u[1] - a * u[0]) % r == 0 and (u[2] + a * u[0]) % r == 0


def is_primitive(ctx: Context, u: Sequence[int]) -> bool:
    """True if ``u/r`` is not k times another point of N(r,a) for k > 1."""
    if not in_lattice(ctx, u):
        raise ValueError(f"{tuple(u)} is not a point of {ctx}")
    g = gcd(gcd(u[0], u[1]), u[2])
    if g == 0:
        return False
    return not any(
        g % k == 0 and in_lattice(ctx, [c // k for c in u]) for k in range(2, g + 1)
    )


def point_p(ctx: Context, i: int) -> ScaledPoint:
    """p_i = (1/r)(<-ib>_r, r-i, i) for 0 <= i <= r."""
    if not 0 <= i <= ctx.r:
        raise ValueError(f"index {i} outside 0..{ctx.r}")
    r = ctx.r
    return ScaledPoint(-i * ctx.b % r, r - i, i)


def det3(u: Sequence[int], v: Sequence[int], w: Sequence[int]):
    return (
        u[0] * (v[1] * w[2] - v[2] * w[1])
        - u[1] * (v[0] * w[2] - v[2] * w[0])
        + u[2] * (v[0] * w[1] - v[1] * w[0])
    )


Matrix = tuple[tuple[Fraction, Fraction, Fraction], ...]


def _matmul(p: Matrix, q: Matrix) -> Matrix:
    return tuple(
        tuple(sum((p[i][k] * q[k][j] for k in range(3)), Fraction(0)) for j in range(3))
        for i in range(3)
    )


def _det_matrix(m: Matrix) -> Fraction:
    return det3(m[0], m[1], m[2])


@dataclass(frozen=True)
class LatticeMap:
    """Linear map N(source) -> N(target), ``matrix`` acting on honest coordinates."""

    matrix: Matrix
    source: Context
    target: Context
    _scaled: tuple[tuple[tuple[int, ...], ...], int] = field(
        init=False, repr=False, compare=False
    )

    def __post_init__(self) -> None:
        # u_target = (r_t / r_s) * matrix * u_source, cleared to K u / d
        factor = Fraction(self.target.r, self.source.r)
        entries = [[factor * c for c in row] for row in self.matrix]
        d = 1
        for row in entries:
            for c in row:
                d = d * c.denominator // gcd(d, c.denominator)
        k = tuple(tuple(int(c * d) for c in row) for row in entries)
        object.__setattr__(self, "_scaled", (k, d))

    def __call__(self, u: Sequence[int]) -> ScaledPoint:
        k, d = self._scaled
        out = []
        for row in k:
            q, rem = divmod(row[0] * u[0] + row[1] * u[1] + row[2] * u[2], d)
            if rem:
                raise ConsistencyError(
                    f"{tuple(u)} of {self.source} has no integral image in {self.target}"
                )
            out.append(q)
        return ScaledPoint(*out)

    def compose(self, inner: "LatticeMap") -> "LatticeMap":
        """``self`` after ``inner``."""
        if inner.target != self.source:
            raise ValueError("cannot compose: contexts do not match")
        return LatticeMap(_matmul(self.matrix, inner.matrix), inner.source, self.target)

    def determinant(self) -> Fraction:
        return _det_matrix(self.matrix)

    def is_lattice_isomorphism(self) -> bool:
        """Generators map into the target, and |det| matches the covolume ratio.

        N(r,a) has covolume 1/r, so an isomorphism has |det| = r_source / r_target.
        """
        if abs(self.determinant()) != Fraction(self.source.r, self.target.r):
            return False
        try:
            for g in lattice_generators(self.source):
                if not in_lattice(self.target, self(g)):
                    return False
        except ConsistencyError:
            return False
        return True


def lattice_generators(ctx: Context) -> list[ScaledPoint]:
    gens = [e1(ctx), e2(ctx), e3(ctx)]
    if not ctx.is_unit:
        gens.append(point_p(ctx, ctx.r - ctx.a))
    return gens


def identity_map(ctx: Context) -> LatticeMap:
    one, zero = Fraction(1), Fraction(0)
    m = tuple(tuple(one if i == j else zero for j in range(3)) for i in range(3))
    return LatticeMap(m, ctx, ctx)


def _columns(*cols: Sequence[Fraction]) -> Matrix:
    return tuple(tuple(Fraction(col[i]) for col in cols) for i in range(3))


@lru_cache(maxsize=None)
def map_L(ctx: Context) -> LatticeMap:
    """(x, y, z) -> x e1 + y e2 + z p_{r-a}, from the L-resolution lattice."""
    r = ctx.r
    p = [Fraction(c, r) for c in point_p(ctx, r - ctx.a)]
    return LatticeMap(_columns((1, 0, 0), (0, 1, 0), p), ctx.left(), ctx)


@lru_cache(maxsize=None)
def map_R(ctx: Context) -> LatticeMap:
    """(x, y, z) -> x e1 + y p_{r-a} + z e3, from the R-resolution lattice."""
    r = ctx.r
    p = [Fraction(c, r) for c in point_p(ctx, r - ctx.a)]
    return LatticeMap(_columns((1, 0, 0), p, (0, 0, 1)), ctx.right(), ctx)


@dataclass(frozen=True)
class Cone:
    """Simplicial 3-cone; generators are kept in lexicographic order.

    ``tag`` records the recursion path that produced the cone, e.g.
    ``("L", "R", "central")``; it plays no part in equality.
    """

    generators: tuple[ScaledPoint, ScaledPoint, ScaledPoint]
    tag: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self) -> None:
        gens = tuple(sorted(ScaledPoint(*g) for g in self.generators))
        if len(gens) != 3:
            raise ValueError("a cone needs exactly three generators")
        if det3(*gens) == 0:
            raise ValueError(f"generators {gens} are linearly dependent")
        object.__setattr__(self, "generators", gens)

    def __contains__(self, point: object) -> bool:
        return point in self.generators


@dataclass(frozen=True)
class Fan:
    ctx: Context
    rays: tuple[ScaledPoint, ...]
    cones: tuple[Cone, ...]

    def ray_index(self, point: Sequence[int]) -> int:
        """Position of ``point`` in the ray order [E1, D0, ..., Dr]."""
        point = ScaledPoint(*point)
        if point == self.rays[0]:
            return 0
        k = point.z
        if 0 <= k <= self.ctx.r and self.rays[k + 1] == point:
            return k + 1
        raise ValueError(f"{tuple(point)} is not a ray of the fan")

    def cone_rays(self, cone: Cone) -> tuple[int, int, int]:
        return tuple(self.ray_index(g) for g in cone.generators)

    def cones_containing(self, point: Sequence[int]) -> list[Cone]:
        point = ScaledPoint(*point)
        return [c for c in self.cones if point in c.generators]

    @cached_property
    def _cone_set(self) -> frozenset[Cone]:
        return frozenset(self.cones)

    def __contains__(self, cone: object) -> bool:
        return cone in self._cone_set


# A map from a sub-lattice N(r', a') into the top lattice is carried as the
# top-level images of e1, e2, e3 of the sub-lattice; u' / r' goes to
# (u'_1 I_1 + u'_2 I_2 + u'_3 I_3) / r'.
Images = tuple[ScaledPoint, ScaledPoint, ScaledPoint]


def _push(images: Images, r_sub: int, u: Sequence[int]) -> ScaledPoint:
    (a0, a1, a2), (b0, b1, b2), (c0, c1, c2) = images
    x, y, z = u
    v0 = x * a0 + y * b0 + z * c0
    v1 = x * a1 + y * b1 + z * c1
    v2 = x * a2 + y * b2 + z * c2
    if v0 % r_sub or v1 % r_sub or v2 % r_sub:
        raise ConsistencyError(f"{tuple(u)} has no integral image")
    return ScaledPoint(v0 // r_sub, v1 // r_sub, v2 // r_sub)


@lru_cache(maxsize=None)
def _side_images(ctx: Context, side: str) -> Images:
    f = map_L(ctx) if side == "L" else map_R(ctx)
    return tuple(f(g) for g in (e1(f.source), e2(f.source), e3(f.source)))


def _resolve(ctx: Context) -> list[Cone]:
    out: list[Cone] = []
    stack: list[tuple[Context, Images, tuple[str, ...]]] = [
        (ctx, (e1(ctx), e2(ctx), e3(ctx)), ())
    ]
    while stack:
        sub, images, path = stack.pop()
        if sub.is_unit:
            out.append(Cone(images, path))
            continue
        centre = _push(images, sub.r, point_p(sub, sub.r - sub.a))
        out.append(Cone((images[1], images[2], centre), path + ("central",)))
        for side in ("R", "L"):
            sub_images = tuple(_push(images, sub.r, g) for g in _side_images(sub, side))
            child = sub.right() if side == "R" else sub.left()
            stack.append((child, sub_images, path + (side,)))
    return out


@lru_cache(maxsize=256)
def danilov_fan(ctx: Context) -> Fan:
    """Fan of the Danilov resolution: blow up p_{r-a}, recurse on both sides."""
    cones = _resolve(ctx)
    rays = (e1(ctx),) + tuple(point_p(ctx, i) for i in range(ctx.r + 1))
    if len(cones) != 2 * ctx.r - 1:
        raise ConsistencyError(f"{ctx}: expected {2 * ctx.r - 1} cones, got {len(cones)}")
    ray_set = set(rays)
    used = {g for c in cones for g in c.generators}
    if used != ray_set:
        raise ConsistencyError(f"{ctx}: ray set mismatch {sorted(used ^ ray_set)}")
    cones.sort(key=lambda c: c.generators)
    return Fan(ctx, rays, tuple(cones))


def sigma_cone(ctx: Context, i: int) -> Cone:
    """sigma_i = <p_i, p_{i+1}, e1>."""
    if not 0 <= i < ctx.r:
        raise ValueError(f"sigma index {i} outside 0..{ctx.r - 1}")
    return Cone((point_p(ctx, i), point_p(ctx, i + 1), e1(ctx)), ("sigma", str(i)))


def is_smooth(ctx: Context, c: Cone) -> bool:
    return abs(det3(*c.generators)) == ctx.r**2


def chart_coordinates(ctx: Context, c: Cone) -> tuple[tuple[Fraction, ...], ...]:
    """Dual basis m_1, m_2, m_3 in M with m_k(u_j / r) = delta_kj."""
    if not is_smooth(ctx, c):
        raise ValueError(f"chart is not smooth: {c.generators}")
    u = c.generators
    d = det3(*u)
    # columns of r * U^-1 where U has the generators as rows
    cof = [
        [
            u[(j + 1) % 3][(i + 1) % 3] * u[(j + 2) % 3][(i + 2) % 3]
            - u[(j + 1) % 3][(i + 2) % 3] * u[(j + 2) % 3][(i + 1) % 3]
            for j in range(3)
        ]
        for i in range(3)
    ]
    return tuple(tuple(Fraction(ctx.r * cof[i][k], d) for i in range(3)) for k in range(3))


def pairing(m: Sequence[Fraction], u: Sequence[int], r: int) -> Fraction:
    return sum((Fraction(mi) * ui for mi, ui in zip(m, u)), Fraction(0)) / r


def discrepancy(ctx: Context, i: int) -> Fraction:
    """Discrepancy of the exceptional divisor D_i: coordinate sum of p_i minus 1."""
    if not 0 < i < ctx.r:
        raise ValueError(f"D_{i} is not exceptional (need 1 <= i <= {ctx.r - 1})")
    return Fraction(sum(point_p(ctx, i)), ctx.r) - 1


def coprime_pairs(max_r: int, min_r: int = 2) -> Iterable[Context]:
    for r in range(max(2, min_r), max_r + 1):
        for a in range(1, r):
            if gcd(a, r) == 1:
                yield Context(r, a)

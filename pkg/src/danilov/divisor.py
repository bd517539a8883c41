"""The permutation tau, L/R-bricks and the toric divisors X_i, Y_i, Z_i, R_i.

Divisors are coefficient vectors on the rays in the fixed order
``[E1, D0, D1, ..., Dr]``.  For each context the whole family is computed
once into integer tables (R_i and D_X, D_Y, D_Z are stored as numerators
over r) and handed out read-only; :class:`Divisor` is the exact rational
view of a single row.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Literal, Sequence

import numpy as np

from .lattice import ConsistencyError, Context, point_p

Side = Literal["L", "R"]


@dataclass(frozen=True)
class Divisor:
    """Exact rational combination of the rays E1, D0, ..., Dr."""

    coeffs: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "coeffs", tuple(Fraction(c) for c in self.coeffs))
        if len(self.coeffs) < 3:
            raise ValueError("a divisor needs at least the rays E1, D0, D1")

    @classmethod
    def zero(cls, r: int) -> "Divisor":
        return cls((0,) * (r + 2))

    @classmethod
    def ray(cls, r: int, column: int) -> "Divisor":
        c = [0] * (r + 2)
        c[column] = 1
        return cls(tuple(c))

    @classmethod
    def E1(cls, r: int) -> "Divisor":
        return cls.ray(r, 0)

    @classmethod
    def D(cls, r: int, k: int) -> "Divisor":
        return cls.ray(r, k + 1)

    @classmethod
    def from_numerators(cls, nums: Sequence[int], den: int = 1) -> "Divisor":
        return cls(tuple(Fraction(int(n), den) for n in nums))

    @property
    def r(self) -> int:
        return len(self.coeffs) - 2

    def __add__(self, other: "Divisor") -> "Divisor":
        self._same_shape(other)
        return Divisor(tuple(p + q for p, q in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "Divisor") -> "Divisor":
        self._same_shape(other)
        return Divisor(tuple(p - q for p, q in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "Divisor":
        return Divisor(tuple(-p for p in self.coeffs))

    def __mul__(self, k) -> "Divisor":
        return Divisor(tuple(Fraction(k) * p for p in self.coeffs))

    __rmul__ = __mul__

    def _same_shape(self, other: "Divisor") -> None:
        if len(self.coeffs) != len(other.coeffs):
            raise ValueError("divisors live on different fans")

    def is_effective(self) -> bool:
        return all(c >= 0 for c in self.coeffs)

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs)

    def __str__(self) -> str:
        names = ["E1"] + [f"D{k}" for k in range(self.r + 1)]
        terms = []
        for name, c in zip(names, self.coeffs):
            if c == 0:
                continue
            if c == 1:
                terms.append(name)
            elif c == -1:
                terms.append(f"-{name}")
            else:
                terms.append(f"{c}{name}" if c.denominator == 1 else f"({c}){name}")
        return " + ".join(terms).replace("+ -", "- ") or "0"


def _tau_rec(ctx: Context, i: int) -> int:
    r, a = ctx.r, ctx.a
    if ctx.is_unit or a in (1, r - 1):
        return (a * i - 1) % r
    if i >= a:
        return _tau_rec(ctx.left(), i % (r - a))
    return (r - a) + _tau_rec(ctx.right(), i)


def tau(ctx: Context, i: int) -> int:
    """tau(r, a, i), straight from the two-branch recursion."""
    if not 0 <= i < ctx.r:
        raise ValueError(f"index {i} outside 0..{ctx.r - 1}")
    return _tau_rec(ctx, i)


@lru_cache(maxsize=4096)
def tau_table(ctx: Context) -> tuple[int, ...]:
    r, a = ctx.r, ctx.a
    if ctx.is_unit or a in (1, r - 1):
        return tuple((a * i - 1) % r for i in range(r))
    left = tau_table(ctx.left())
    right = tau_table(ctx.right())
    return tuple(
        left[i % (r - a)] if i >= a else (r - a) + right[i] for i in range(r)
    )


def xi_table(ctx: Context) -> tuple[int, ...]:
    """Inverse permutation of tau."""
    t = tau_table(ctx)
    inv = [0] * ctx.r
    for i, v in enumerate(t):
        inv[v] = i
    return tuple(inv)


def phi_table(ctx: Context) -> tuple[int, ...]:
    """phi(j) = <xi(j) + (r - a)>_r, the order of the chamber inequalities."""
    r, a = ctx.r, ctx.a
    return tuple((x + r - a) % r for x in xi_table(ctx))


@dataclass(frozen=True)
class Brick:
    start: int
    step: int
    length: int

    @property
    def members(self) -> tuple[int, ...]:
        return tuple(self.start + k * self.step for k in range(self.length))


def bricks(ctx: Context, side: Side) -> list[Brick]:
    """Maximal progressions i, i+step, ... below r with i < step."""
    step = {"L": ctx.r - ctx.a, "R": ctx.a}[side]
    return [Brick(i, step, (ctx.r - 1 - i) // step + 1) for i in range(step)]


class DivisorTables:
    """All divisors of F(r, a) for one context, as read-only integer arrays.

    Rows are indexed by i = 0..r-1, columns by [E1, D0, ..., Dr].  ``X``,
    ``Y`` and ``Z`` are integral; ``R``, ``DX``, ``DY``, ``DZ`` hold
    numerators over ``r``.
    """

    def __init__(self, ctx: Context) -> None:
        r, a = ctx.r, ctx.a
        self.ctx = ctx
        self.tau = tau_table(ctx)
        width = r + 2

        col = np.arange(width)
        t = np.array(self.tau, dtype=np.int64)[:, None]
        z = (col >= t + 2).astype(np.int64)
        # row i of by_i is Y_{i-a}
        by_i = ((col >= 1) & (col <= t + 1)).astype(np.int64)
        y = np.roll(by_i, -a, axis=0)

        first = np.array([point_p(ctx, k)[0] for k in range(r + 1)], dtype=np.int64)
        dx = np.concatenate(([r], first))
        dy = np.concatenate(([0], np.arange(r, -1, -1)))
        dz = np.concatenate(([0], np.arange(0, r + 1)))

        # X_{i-a} = X_i + Z_{i+1} - Z_i and r R_{i-a} = r R_i - r Z_i + r D_Z:
        # along the orbit 0, -a, -2a, ... both are prefix sums of their steps
        orbit = (-a * np.arange(r)) % r
        x_steps = z[(orbit + 1) % r] - z[orbit]
        r_steps = dz - r * z[orbit]
        if x_steps.sum(axis=0).any():
            raise ConsistencyError(f"{ctx}: the X recurrence does not close")
        if r_steps.sum(axis=0).any():
            raise ConsistencyError(f"{ctx}: the R recurrence does not close")
        x = np.zeros((r, width), dtype=np.int64)
        rr = np.zeros((r, width), dtype=np.int64)
        x[0, 0] = 1
        x[orbit[1:]] = x[0] + np.cumsum(x_steps[:-1], axis=0)
        rr[orbit[1:]] = np.cumsum(r_steps[:-1], axis=0)

        for arr in (x, y, z, rr, dx, dy, dz):
            arr.setflags(write=False)
        self.X, self.Y, self.Z, self.R = x, y, z, rr
        self.DX, self.DY, self.DZ = dx, dy, dz

    def divisor(self, kind: str, i: int) -> Divisor:
        r = self.ctx.r
        i %= r
        if kind == "X":
            return Divisor.from_numerators(self.X[i])
        if kind == "Y":
            return Divisor.from_numerators(self.Y[i])
        if kind == "Z":
            return Divisor.from_numerators(self.Z[i])
        if kind == "R":
            return Divisor.from_numerators(self.R[i], r)
        raise ValueError(f"unknown divisor family {kind!r}")

    def arrow_table(self, kind: str) -> np.ndarray:
        return {"x": self.X, "y": self.Y, "z": self.Z}[kind]


@lru_cache(maxsize=1024)
def tables(ctx: Context) -> DivisorTables:
    return DivisorTables(ctx)


def divisor_X(ctx: Context, i: int) -> Divisor:
    _check_index(ctx, i)
    return tables(ctx).divisor("X", i)


def divisor_Y(ctx: Context, i: int) -> Divisor:
    _check_index(ctx, i)
    return tables(ctx).divisor("Y", i)


def divisor_Z(ctx: Context, i: int) -> Divisor:
    _check_index(ctx, i)
    return tables(ctx).divisor("Z", i)


def divisor_R(ctx: Context, i: int) -> Divisor:
    _check_index(ctx, i)
    return tables(ctx).divisor("R", i)


def divisor_DXYZ(ctx: Context) -> tuple[Divisor, Divisor, Divisor]:
    """Divisors of the monomials x, y, z: sum over rays of e_j^*(ray) * ray."""
    t = tables(ctx)
    r = ctx.r
    return tuple(Divisor.from_numerators(v, r) for v in (t.DX, t.DY, t.DZ))


def _check_index(ctx: Context, i: int) -> None:
    if not 0 <= i < ctx.r:
        raise ValueError(f"index {i} outside 0..{ctx.r - 1}")


def restriction_columns(ctx: Context, side: Side) -> list[int]:
    """Columns kept when restricting to the L- or R-resolution."""
    r, a = ctx.r, ctx.a
    if side == "L":
        return [0] + list(range(1, r - a + 2))
    if side == "R":
        return [0] + list(range(r - a + 1, r + 2))
    raise ValueError(f"side must be 'L' or 'R', got {side!r}")


def restrict(ctx: Context, d: Divisor, side: Side) -> Divisor:
    """Restriction to the L- (rays E1, D0..D_{r-a}) or R-resolution (E1, D_{r-a}..D_r).

    The result is indexed in the sub-context's own ray order.
    """
    if d.r != ctx.r:
        raise ValueError("divisor does not belong to this context")
    return Divisor(tuple(d.coeffs[c] for c in restriction_columns(ctx, side)))

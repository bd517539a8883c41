import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from conftest import contexts
from danilov.lattice import Context, danilov_fan, point_p, sigma_cone
from danilov.quiver import (
    Representation,
    are_isomorphic,
    chart_divisor_indices,
    chart_relations_hold,
    connectedness_check,
    distinguished_arrows,
    fixed_rep,
    fixed_reps,
    gauge,
    isomorphic_pairs,
    mckay_quiver,
    rep_at,
    torus_chart_point,
)

CTX = Context(5, 2)


def labels(arrows):
    return sorted(a.label for a in arrows)


def test_quiver_heads():
    q = mckay_quiver(CTX)
    assert len(q.arrows) == 15
    assert q.arrow("y", 3).head == 0
    assert q.arrow("z", 0).head == 3
    assert [(a.label, a.head) for a in q.arrows[:3]] == [("x_0", 1), ("y_0", 2), ("z_0", 3)]
    assert len(q.relations()) == 15


def test_parallel_arrows_for_r_2():
    q = mckay_quiver(Context(2, 1))
    x0, y0 = q.arrow("x", 0), q.arrow("y", 0)
    assert (x0.tail, x0.head) == (y0.tail, y0.head) and x0 != y0


def test_sigma_0_of_5_2():
    assert labels(distinguished_arrows(CTX, sigma_cone(CTX, 0))) == ["z_0", "z_1", "z_3", "z_4"]
    f0 = fixed_rep(CTX, sigma_cone(CTX, 0))
    assert [f0["z", i] for i in range(5)] == [1, 1, 0, 1, 1]
    assert all(f0["x", i] == 0 and f0["y", i] == 0 for i in range(5))
    assert connectedness_check(CTX, sigma_cone(CTX, 0))


def test_cone_not_in_fan_is_rejected():
    from danilov.lattice import Cone, e1

    bogus = Cone((point_p(CTX, 0), point_p(CTX, 2), e1(CTX)))
    with pytest.raises(ValueError):
        distinguished_arrows(CTX, bogus)


@given(contexts(max_r=40))
def test_no_x_arrow_on_sigma_and_broken_path(ctx):
    r, a = ctx.r, ctx.a
    from danilov.divisor import xi_table

    for j in range(r):
        dist = {(x.kind, x.index) for x in distinguished_arrows(ctx, sigma_cone(ctx, j))}
        assert not any(k == "x" for k, _ in dist)
        missing = [i for i in range(r) if ("z", i) not in dist and ("y", (i + r - a) % r) not in dist]
        assert missing == [xi_table(ctx)[j]]


@pytest.mark.parametrize("r,a", [(5, 2), (7, 3), (7, 2), (8, 3)])
def test_central_cone_distinguishes_x_arrows(r, a):
    ctx = Context(r, a)
    target = {point_p(ctx, 0), point_p(ctx, r - a), point_p(ctx, r)}
    (cone,) = [c for c in danilov_fan(ctx).cones if set(c.generators) == target]
    assert labels(distinguished_arrows(ctx, cone)) == sorted(f"x_{i}" for i in range(r - 1))


@given(contexts(max_r=25))
def test_fixed_points(ctx):
    q = mckay_quiver(ctx)
    pairs = fixed_reps(ctx)
    assert all(rep.satisfies_relations() for _, rep in pairs)
    assert all(connectedness_check(ctx, c) for c, _ in pairs)
    assert isomorphic_pairs(q, [rep for _, rep in pairs]) == []


def test_connectedness_handles_r_2():
    ctx = Context(2, 1)
    assert all(connectedness_check(ctx, c) for c in danilov_fan(ctx).cones)


@given(contexts(max_r=15), st.integers(0, 10**6))
def test_rep_at(ctx, seed):
    rng = random.Random(seed)
    q = mckay_quiver(ctx)
    for c in danilov_fan(ctx).cones:
        assert rep_at(ctx, c, (0, 0, 0)) == fixed_rep(ctx, c)
        assert rep_at(ctx, c, (1, 1, 1)).values == (1,) * len(q.arrows)
        t = [Fraction(rng.randint(-7, 7), rng.randint(1, 7)) for _ in range(3)]
        assert rep_at(ctx, c, t).satisfies_relations()


@given(contexts(max_r=12), st.integers(0, 10**6))
def test_same_torus_point_in_every_chart(ctx, seed):
    rng = random.Random(seed)
    values = [Fraction(rng.randint(1, 9), rng.randint(1, 9)) for _ in range(3)]
    q = mckay_quiver(ctx)
    reps = [rep_at(ctx, c, torus_chart_point(ctx, c, values)) for c in danilov_fan(ctx).cones]
    assert all(are_isomorphic(q, reps[0], w) for w in reps[1:])


def test_generic_points_on_different_charts_differ():
    q = mckay_quiver(CTX)
    cones = danilov_fan(CTX).cones
    t = (Fraction(2), Fraction(3), Fraction(0))
    reps = [rep_at(CTX, c, t) for c in cones]
    assert isomorphic_pairs(q, reps) == []


@given(contexts(max_r=12), st.integers(0, 10**6))
def test_gauge_invariance(ctx, seed):
    rng = random.Random(seed)
    q = mckay_quiver(ctx)
    c = rng.choice(danilov_fan(ctx).cones)
    v = rep_at(ctx, c, [Fraction(rng.randint(1, 5), rng.randint(1, 5)) for _ in range(3)])
    g = [Fraction(rng.choice([-3, -1, 2, 5, 7]), rng.randint(1, 4)) for _ in range(ctx.r)]
    w = gauge(q, v, g)
    assert are_isomorphic(q, v, v)
    assert are_isomorphic(q, v, w) and are_isomorphic(q, w, v)
    h = [Fraction(rng.randint(1, 6)) for _ in range(ctx.r)]
    assert are_isomorphic(q, v, gauge(q, w, h))


def test_scaled_vertex_is_isomorphic():
    q = mckay_quiver(CTX)
    v = rep_at(CTX, sigma_cone(CTX, 0), (Fraction(2), Fraction(3), Fraction(5)))
    g = [Fraction(1)] * 5
    g[2] = Fraction(7)
    assert are_isomorphic(q, v, gauge(q, v, g))
    moved = list(v.values)
    moved[0] *= 2
    assert not are_isomorphic(q, v, Representation(q, tuple(moved)))


def test_relation_violations_and_validation():
    q = mckay_quiver(CTX)
    ones = Representation(q, (1,) * 15)
    assert ones.satisfies_relations()
    bad = list(ones.values)
    bad[0] = 2
    assert Representation(q, tuple(bad)).relation_violations()
    with pytest.raises(ValueError):
        Representation(q, (1, 2))


def test_chart_divisor_indices_on_5_2():
    found = {c: chart_divisor_indices(CTX, c) for c in danilov_fan(CTX).cones}
    missing = [c for c, hit in found.items() if hit is None]
    # only the central cone needs x_{r-1}
    assert len(missing) <= 1
    for c in missing:
        assert chart_divisor_indices(CTX, c, allow_last_x=True) is not None


@given(contexts(max_r=25))
def test_relations_hold_identically_on_every_chart(ctx):
    assert all(chart_relations_hold(ctx, c) for c in danilov_fan(ctx).cones)


def test_integer_values_stay_exact():
    q = mckay_quiver(CTX)
    v = Representation(q, (1, 2) + (1,) * (len(q.arrows) - 2))
    assert type(v.values[1]) is int
    w = gauge(q, v, (1, 3, 1, 1, 1))
    assert are_isomorphic(q, v, w) and are_isomorphic(q, w, v)

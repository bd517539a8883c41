from fractions import Fraction

import pytest
from hypothesis import given

from conftest import contexts
from danilov.lattice import (
    ConsistencyError,
    Context,
    chart_coordinates,
    coprime_pairs,
    danilov_fan,
    det3,
    discrepancy,
    e1,
    e2,
    e3,
    identity_map,
    in_lattice,
    inverse_mod,
    is_primitive,
    is_smooth,
    map_L,
    map_R,
    pairing,
    point_p,
    sigma_cone,
)


def test_inverse_mod():
    assert inverse_mod(2, 5) == 3
    assert inverse_mod(3, 7) == 5
    assert inverse_mod(1, 2) == 1
    with pytest.raises(ValueError, match="not invertible"):
        inverse_mod(2, 4)
    with pytest.raises(ValueError):
        inverse_mod(0, 5)


def test_context_validation():
    assert Context(5, 2).b == 3
    for bad in ((4, 2), (1, 0), (5, 5), (5, 0), (6, 3)):
        with pytest.raises(ValueError):
            Context(*bad)
    with pytest.raises(TypeError):
        Context(5.0, 2)


def test_sub_contexts():
    ctx = Context(5, 2)
    assert ctx.left() == Context(3, 2)
    assert ctx.right() == Context(2, 1)
    assert Context(5, 4).left().is_unit
    assert Context(5, 1).right().is_unit
    with pytest.raises(ValueError):
        Context.unit().left()


def test_points_of_5_2():
    ctx = Context(5, 2)
    assert [point_p(ctx, i) for i in range(6)] == [
        (0, 5, 0), (2, 4, 1), (4, 3, 2), (1, 2, 3), (3, 1, 4), (0, 0, 5)
    ]
    assert point_p(ctx, 0) == e2(ctx) and point_p(ctx, 5) == e3(ctx)
    with pytest.raises(ValueError):
        point_p(ctx, 6)


@given(contexts())
def test_points_are_primitive_lattice_points(ctx):
    for i in range(ctx.r + 1):
        p = point_p(ctx, i)
        assert in_lattice(ctx, p)
        assert is_primitive(ctx, p)
    assert not in_lattice(ctx, (1, 0, 0))


def test_is_primitive_rejects_multiples():
    ctx = Context(5, 2)
    assert not is_primitive(ctx, (10, 0, 0))
    assert not is_primitive(ctx, (4, 8, 2))
    with pytest.raises(ValueError):
        is_primitive(ctx, (1, 1, 1))


@given(contexts())
def test_lattice_maps_are_isomorphisms(ctx):
    assert map_L(ctx).is_lattice_isomorphism()
    assert map_R(ctx).is_lattice_isomorphism()
    assert map_L(ctx)(e2(ctx.left())) == e2(ctx)
    assert map_R(ctx)(e3(ctx.right())) == e3(ctx)
    centre = point_p(ctx, ctx.r - ctx.a)
    assert map_L(ctx)(e3(ctx.left())) == centre
    assert map_R(ctx)(e2(ctx.right())) == centre


def test_lattice_map_rejects_non_points():
    f = map_L(Context(5, 2))
    with pytest.raises(ConsistencyError):
        f((1, 0, 0))
    assert identity_map(Context(5, 2)).is_lattice_isomorphism()


def test_fan_of_5_2():
    ctx = Context(5, 2)
    fan = danilov_fan(ctx)
    assert len(fan.rays) == 7 and len(fan.cones) == 9
    assert all(is_smooth(ctx, c) for c in fan.cones)
    assert {c for c in fan.cones if e1(ctx) in c} == {sigma_cone(ctx, i) for i in range(5)}
    assert fan.ray_index(e1(ctx)) == 0
    assert fan.ray_index(point_p(ctx, 3)) == 4
    with pytest.raises(ValueError):
        fan.ray_index((1, 1, 1))


def test_fan_of_2_1_is_a_single_blowup():
    ctx = Context(2, 1)
    fan = danilov_fan(ctx)
    assert len(fan.rays) == 4 and len(fan.cones) == 3


@given(contexts(max_r=60))
def test_fan_structure_property(ctx):
    fan = danilov_fan(ctx)
    assert len(fan.cones) == 2 * ctx.r - 1
    assert all(abs(det3(*c.generators)) == ctx.r**2 for c in fan.cones)
    tags = {c.tag[-1] for c in fan.cones}
    assert tags <= {"central", "L", "R"}


def test_discrepancies_of_5_2():
    ctx = Context(5, 2)
    assert [discrepancy(ctx, i) for i in range(1, 5)] == [Fraction(k, 5) for k in (2, 4, 1, 3)]
    with pytest.raises(ValueError):
        discrepancy(ctx, 0)


@given(contexts(max_r=30))
def test_chart_coordinates_are_dual(ctx):
    for c in danilov_fan(ctx).cones:
        m = chart_coordinates(ctx, c)
        for k in range(3):
            for j, u in enumerate(c.generators):
                assert pairing(m[k], u, ctx.r) == (1 if j == k else 0)


def test_coprime_pairs():
    assert [(c.r, c.a) for c in coprime_pairs(4)] == [(2, 1), (3, 1), (3, 2), (4, 1), (4, 3)]
    assert len(list(coprime_pairs(10, min_r=10))) == 4

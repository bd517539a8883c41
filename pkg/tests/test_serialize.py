from fractions import Fraction

import pytest
from hypothesis import given

from conftest import contexts, small_rationals
from danilov.lattice import Context, danilov_fan
from danilov.quiver import fixed_reps, mckay_quiver
from danilov.serialize import (
    FormatError,
    divisor_summary,
    dump_divisors,
    dump_fan,
    dump_theta,
    parse_divisors,
    parse_fan,
    parse_rat,
    parse_report,
    parse_theta,
    rat,
    report_payload,
)
from danilov.stability import Theta, chamber_order, chamber_theta, default_chamber_point, stability
from danilov.verify import dump_check, dump_verify, parse_check, parse_verify, run_check, run_verify


@given(small_rationals(10**6))
def test_rationals_round_trip(x):
    assert parse_rat(rat(x)) == x


@pytest.mark.parametrize("bad", ["1", "2/4", "1.5/2", "x/y", "1/0", 3])
def test_bad_rationals(bad):
    with pytest.raises(FormatError):
        parse_rat(bad)


@given(contexts(max_r=40))
def test_fan_round_trip(ctx):
    fan = danilov_fan(ctx)
    assert parse_fan(dump_fan(fan)) == fan


@given(contexts(max_r=40))
def test_divisors_round_trip(ctx):
    assert parse_divisors(dump_divisors(ctx)) == (ctx, divisor_summary(ctx))


@given(contexts(max_r=20), small_rationals())
def test_theta_round_trip(ctx, shift):
    n, _ = default_chamber_point(ctx)
    n = tuple(x * shift for x in n)
    theta = chamber_theta(ctx, n)
    assert parse_theta(dump_theta(ctx, n, theta, chamber_order(ctx))) == (ctx, n, theta)


def test_reports_round_trip():
    ctx = Context(5, 2)
    q = mckay_quiver(ctx)
    for theta in (Theta((0,) * 5), Theta((-4, -1, 1, 2, 2)), Theta((4, 1, -1, -2, -2))):
        for _, rep in fixed_reps(ctx):
            report = stability(q, rep, theta)
            assert parse_report(report_payload(report)) == report


@pytest.mark.parametrize("r,a", [(5, 2), (7, 3), (2, 1)])
def test_check_round_trip(r, a):
    res = run_check(Context(r, a))
    assert parse_check(dump_check(res)) == res
    bad = run_check(Context(r, a), Theta((0,) * r))
    assert parse_check(dump_check(bad)) == bad and not bad.passed


def test_verify_round_trip():
    s = run_verify(5, all_a=True, suites=["divisor"])
    back = parse_verify(dump_verify(s))
    assert back == s


def test_document_header_is_checked():
    text = dump_fan(danilov_fan(Context(5, 2)))
    with pytest.raises(FormatError):
        parse_theta(text)
    with pytest.raises(FormatError):
        parse_fan(text.replace('"format_version": 1', '"format_version": 9'))
    with pytest.raises(FormatError):
        parse_fan("not json")


def test_no_floats_anywhere():
    ctx = Context(7, 3)
    for text in (dump_divisors(ctx), dump_check(run_check(ctx))):
        assert "." not in text.replace("...", "")
    assert Fraction(2, 5) == parse_divisors(dump_divisors(Context(5, 2)))[1]["R"][1].coeffs[2]

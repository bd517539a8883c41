import pytest

from danilov.lattice import Context
from danilov.verify import SUITES, run_verify, sample_a, sweep_contexts, tie_point


def test_sample_a():
    assert sample_a(2, False) == [1]
    assert sample_a(7, False) == [1, 2, 6]
    assert sample_a(10, False) == [1, 3, 9]
    assert sample_a(10, True) == [1, 3, 7, 9]


def test_sweep_contexts():
    assert [(c.r, c.a) for c in sweep_contexts(4)] == [(2, 1), (3, 1), (3, 2), (4, 1), (4, 3)]


@pytest.mark.parametrize("name", sorted(SUITES))
def test_each_suite_passes_on_small_cases(name):
    for r, a in [(2, 1), (5, 2), (7, 3), (8, 3), (9, 4)]:
        assert SUITES[name](Context(r, a)) == []


def test_verify_12_all_a():
    summary = run_verify(12, all_a=True)
    assert summary.passed
    assert all(t.passed == summary.contexts for t in summary.tallies.values())


def test_force_lifts_the_guard():
    s = run_verify(21, suites=["stability"], min_r=21)
    assert s.guard_skips and s.tallies["stability"].skipped == 3
    forced = run_verify(21, suites=["stability"], min_r=21, force=True, jobs=3)
    assert forced.passed and not forced.guard_skips and forced.tallies["stability"].passed == 3
    with pytest.raises(ValueError):
        run_verify(3, suites=["nope"])


def test_tie_point():
    ctx = Context(5, 2)
    # phi = (0, 2, 1, 4, 3): n_0 = n_2 tied, the rest strictly increasing
    assert tie_point(ctx, 0) == (0, 1, 0, 3, 2)
    assert tie_point(ctx, 3) == (0, 2, 1, 3, 3)

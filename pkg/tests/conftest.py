from math import gcd

from hypothesis import settings, strategies as st

from danilov.lattice import Context

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@st.composite
def contexts(draw, max_r: int = 40, min_r: int = 2):
    r = draw(st.integers(min_r, max_r))
    a = draw(st.sampled_from([a for a in range(1, r) if gcd(a, r) == 1]))
    return Context(r, a)


def small_rationals(bound: int = 20):
    return st.fractions(min_value=-bound, max_value=bound, max_denominator=12)

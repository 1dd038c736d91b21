import numpy as np
import pytest
from hypothesis import strategies as st

from cgwalk.halfint import HalfInt, SpinPair


@st.composite
def spin_pairs(draw, max_twice=8, min_twice=0):
    t1 = draw(st.integers(min_value=min_twice, max_value=max_twice))
    t2 = draw(st.integers(min_value=0, max_value=t1))
    return SpinPair(HalfInt(t1), HalfInt(t2))


@st.composite
def pair_and_label(draw, max_twice=8):
    sp = draw(spin_pairs(max_twice=max_twice))
    j = draw(st.sampled_from(sp.j_values()))
    m = draw(st.sampled_from([HalfInt(t) for t in range(-j.twice, j.twice + 1, 2)]))
    return sp, j, m


def hi(x):
    return HalfInt.of(x)


@pytest.fixture
def half():
    return HalfInt(1)


@pytest.fixture
def sp_hh():
    return SpinPair(HalfInt(1), HalfInt(1))


@pytest.fixture
def sp_1h():
    return SpinPair(HalfInt(2), HalfInt(1))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from micz.linalg import CausalClass, causal_class, cross3, dot3, mdot, mvec4, vec3

finite = st.floats(min_value=-1e3, max_value=1e3, allow_nan=False)
vectors3 = st.lists(finite, min_size=3, max_size=3).map(np.array)
vectors4 = st.lists(finite, min_size=4, max_size=4).map(np.array)


@pytest.mark.parametrize("u, v, expected", [
    ((1, 0, 0), (0, 1, 0), 0.0),
    ((1, 2, 3), (1, 2, 3), 14.0),
    ((0.5, 0, 0.5), (0, 0, 2), 1.0),
])
def test_dot3(u, v, expected):
    assert dot3(u, v) == expected


@pytest.mark.parametrize("u, v, expected", [
    ((1, 0, 0), (0, 1, 0), (0, 0, 1)),
    ((2, -1, 3), (2, -1, 3), (0, 0, 0)),
    ((0, 0, 2), (0.5, 0, 0.5), (0, 1, 0)),
])
def test_cross3(u, v, expected):
    np.testing.assert_array_equal(cross3(u, v), expected)


@pytest.mark.parametrize("u, expected", [
    ((1, 0, 0, 0), 1.0),
    ((0, 1, 0, 0), -1.0),
    ((1, 0, 1, 0), 0.0),
])
def test_mdot(u, expected):
    assert mdot(u, u) == expected


@pytest.mark.parametrize("x, expected", [
    ((1, 0, 0, 0), CausalClass.TIMELIKE_FUTURE),
    ((-2, 1, 0, 0), CausalClass.TIMELIKE_PAST),
    ((1, 0, 1, 0), CausalClass.NULL_FUTURE),
    ((-1, 0, 0, 1), CausalClass.NULL_PAST),
    ((0, 1, 0, 0), CausalClass.SPACELIKE),
    ((0, 0, 0, 0), CausalClass.ZERO),
    ((1e-12, 0, 0, 0), CausalClass.ZERO),
])
def test_causal_class(x, expected):
    assert causal_class(np.array(x, dtype=float), 1e-10) is expected


def test_causal_class_rejects_negative_tolerance():
    with pytest.raises(ValueError):
        causal_class(np.ones(4), -1.0)


def test_vectors_are_read_only_and_finite():
    v = vec3([1, 2, 3])
    with pytest.raises(ValueError):
        v[0] = 5.0
    with pytest.raises(ValueError):
        vec3([1, math.inf, 0])
    with pytest.raises(ValueError):
        mvec4([1, 2, 3])


@given(vectors3, vectors3)
def test_cross_is_orthogonal_to_both_factors(u, v):
    w = cross3(u, v)
    bound = 1e-12 * np.linalg.norm(u) * np.linalg.norm(v) * max(np.linalg.norm(u), np.linalg.norm(v), 1)
    assert abs(dot3(w, u)) <= bound
    assert abs(dot3(w, v)) <= bound


@given(vectors3, vectors3)
def test_lagrange_identity(u, v):
    lhs = dot3(cross3(u, v), cross3(u, v))
    rhs = dot3(u, u) * dot3(v, v) - dot3(u, v) ** 2
    scale = dot3(u, u) * dot3(v, v)
    assert abs(lhs - rhs) <= 1e-12 * scale + 1e-300


@given(vectors4, vectors4)
def test_mdot_is_symmetric(u, v):
    assert mdot(u, v) == mdot(v, u)

import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ..errors import AntipodalLog
from ..su2 import (
    IDENTITY,
    MINUS_IDENTITY,
    QUAT_I,
    QUAT_J,
    QUAT_K,
    AlgebraVector,
    SU2Element,
    adjoint,
    adjoint_matrix,
    class_element,
    commutator,
    exp_algebra,
    haar_sample,
    half_trace,
    log_group,
    pairing,
)
from ..utils import task_rng

components = st.floats(min_value=-1.7, max_value=1.7, allow_nan=False)
vectors = st.lists(components, min_size=3, max_size=3).map(AlgebraVector.from_array)


def test_quaternion_units():
    assert (QUAT_I * QUAT_J).allclose(QUAT_K)
    assert (QUAT_I * QUAT_I).allclose(MINUS_IDENTITY)
    # [i, j] = i j i^-1 j^-1 = -1
    assert commutator(QUAT_I, QUAT_J).allclose(MINUS_IDENTITY)


def test_matrix_identification():
    q = SU2Element(0.5, 0.5, -0.5, 0.5)
    m = q.matrix()
    assert np.allclose(m @ m.conj().T, np.eye(2))
    assert abs(np.linalg.det(m) - 1) < 1e-12
    assert half_trace(q) == pytest.approx(np.trace(m).real / 2)
    assert SU2Element.from_matrix(m).allclose(q)
    assert np.allclose(QUAT_J.matrix(), [[0, 1], [-1, 0]])


def test_inverse_and_normalization():
    q = SU2Element(1.0, 2.0, 3.0, 4.0)
    assert np.linalg.norm(q.array) == pytest.approx(1.0)
    assert (q * q.inverse()).allclose(IDENTITY)
    with pytest.raises(ValueError):
        SU2Element(0.0, 0.0, 0.0, 0.0)


@settings(max_examples=50, deadline=None)
@given(vectors)
def test_exp_log_roundtrip(v):
    assert log_group(exp_algebra(v)).allclose(v, tol=1e-10)


def test_exp_small_and_log_of_identity():
    v = AlgebraVector(1e-20, 0.0, 0.0)
    assert exp_algebra(v).allclose(IDENTITY)
    assert log_group(IDENTITY).norm() == 0.0


def test_log_refuses_antipode():
    with pytest.raises(AntipodalLog):
        log_group(MINUS_IDENTITY)
    with pytest.raises(AntipodalLog):
        log_group(exp_algebra(AlgebraVector(math.pi - 1e-12, 0.0, 0.0)))


@settings(max_examples=30, deadline=None)
@given(vectors, vectors, st.integers(min_value=0, max_value=2 ** 32 - 1))
def test_adjoint_is_an_isometry(a, b, seed):
    g = haar_sample(task_rng(seed))
    r = adjoint_matrix(g)
    assert np.allclose(r @ r.T, np.eye(3), atol=1e-12)
    assert np.linalg.det(r) == pytest.approx(1.0)
    assert adjoint(g, a).dot(adjoint(g, b)) == pytest.approx(a.dot(b), abs=1e-12)
    # Ad_g v = g v g^-1 computed with quaternions
    if a.norm() > 1e-6:
        conj = g * SU2Element(0.0, *a.array) * g.inverse()
        expected = conj.vector * a.norm()
        assert adjoint(g, a).allclose(expected, tol=1e-12)


@given(vectors, vectors)
def test_pairing_and_bracket(a, b):
    assert pairing(a, b) == pytest.approx(a.dot(b), abs=1e-12)
    assert a.bracket(b).allclose(AlgebraVector.from_array(2 * np.cross(a.array, b.array)))


def test_haar_sample_is_reproducible():
    a = haar_sample(task_rng(7, 3))
    b = haar_sample(task_rng(7, 3))
    assert a.allclose(b)
    assert not a.allclose(haar_sample(task_rng(7, 4)))


@pytest.mark.parametrize(
    "t", [Fraction(0), Fraction(1, 3), Fraction(1, 2), Fraction(9, 10), Fraction(1)]
)
def test_class_element_half_trace(t):
    g = haar_sample(task_rng(1))
    expected = math.cos(math.pi * t)
    assert half_trace(class_element(t)) == pytest.approx(expected, abs=1e-15)
    assert half_trace(class_element(t, conjugator=g)) == pytest.approx(expected, abs=1e-12)
    axis = AlgebraVector(0.0, 3.0, 4.0)
    assert half_trace(class_element(t, axis=axis)) == pytest.approx(expected, abs=1e-15)


def test_class_element_rejects_inexact_weights():
    with pytest.raises(ValueError):
        class_element(0.5)
    with pytest.raises(ValueError):
        class_element(Fraction(3, 2))
    with pytest.raises(ValueError):
        class_element(Fraction(1, 2), axis=AlgebraVector(1, 0, 0), conjugator=IDENTITY)


def test_commutator_identities():
    rng = task_rng(11)
    for _ in range(20):
        a, b = haar_sample(rng), haar_sample(rng)
        assert (commutator(a, b) * commutator(b, a)).distance(IDENTITY) < 1e-12
        assert commutator(a, IDENTITY).allclose(IDENTITY)
    assert (QUAT_J * QUAT_I).allclose(SU2Element(0.0, 0.0, 0.0, -1.0))


def test_half_trace_is_a_class_function():
    rng = task_rng(12)
    for _ in range(50):
        q, g = haar_sample(rng), haar_sample(rng)
        assert half_trace(g * q * g.inverse()) == pytest.approx(half_trace(q), abs=1e-12)


def test_haar_sample_distribution():
    size = 100000
    rng = task_rng(2024)
    h = haar_sample(task_rng(99))
    w = np.empty(size)
    hw = np.empty(size)
    for idx in range(size):
        q = haar_sample(rng)
        w[idx] = q.w
        hw[idx] = (h * q).w
    # w has mean 0 and standard deviation 1/2, w^2 has mean 1/4 and deviation 1/4
    assert abs(w.mean()) < 3 * 0.5 / math.sqrt(size)
    assert abs(hw.mean()) < 3 * 0.5 / math.sqrt(size)
    assert abs((w ** 2).mean() - 0.25) < 4 * 0.25 / math.sqrt(size)
    assert abs((hw ** 2).mean() - 0.25) < 4 * 0.25 / math.sqrt(size)

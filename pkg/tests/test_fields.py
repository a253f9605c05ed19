import numpy as np
import pytest

from spinform.exceptions import DomainError, FieldRangeError
from spinform.fields import ConstantField, RotatingField, TabulatedField, field_from_dict


def test_constant_field_scalar_and_array():
    f = ConstantField([0, 0, 2])
    np.testing.assert_array_equal(f(3.0), [0, 0, 2])
    assert f(np.linspace(0, 1, 5)).shape == (5, 3)


def test_constant_field_rejects_bad_vector():
    with pytest.raises(DomainError):
        ConstantField([1, 2])
    with pytest.raises(DomainError):
        ConstantField([np.nan, 0, 0])


def test_rotating_field_default_plane():
    f = RotatingField(2.0, 3.0)
    t = np.array([0.0, np.pi / 6])
    np.testing.assert_allclose(f(t), [[2, 0, 0], [0, 2, 0]], atol=1e-15)


def test_rotating_field_static_component_and_normal():
    f = RotatingField(1.0, 1.0, normal=[0, 0, 5], bz=0.5)
    np.testing.assert_allclose(f.normal, [0, 0, 1])
    np.testing.assert_allclose(f(0.0), [1, 0, 0.5])
    g = RotatingField(1.0, 2.0, normal=[1, 1, 1])
    vals = g(np.linspace(0, 3, 17))
    np.testing.assert_allclose(vals @ g.normal, 0, atol=1e-15)
    np.testing.assert_allclose(np.linalg.norm(vals, axis=1), 1.0, rtol=1e-15)


def test_tabulated_interpolates_linearly():
    f = TabulatedField([0, 1, 3], [[0, 0, 0], [1, 0, 0], [1, 2, 0]])
    np.testing.assert_allclose(f(0.5), [0.5, 0, 0])
    np.testing.assert_allclose(f(2.0), [1, 1, 0])
    np.testing.assert_allclose(f(np.array([0.0, 3.0])), [[0, 0, 0], [1, 2, 0]])


def test_tabulated_out_of_range():
    f = TabulatedField([0, 1], [[0, 0, 0], [1, 0, 0]])
    with pytest.raises(FieldRangeError):
        f(1.1)
    with pytest.raises(FieldRangeError):
        f(np.array([0.2, -0.5]))
    f(1.0 + 1e-12)


@pytest.mark.parametrize("times, samples", [
    ([0], [[0, 0, 0]]),
    ([0, 0], [[0, 0, 0], [0, 0, 0]]),
    ([1, 0], [[0, 0, 0], [0, 0, 0]]),
    ([0, 1], [[0, 0, 0]]),
])
def test_tabulated_rejects_bad_tables(times, samples):
    with pytest.raises(DomainError):
        TabulatedField(times, samples)


@pytest.mark.parametrize("f", [
    ConstantField([0.1, -0.2, 1.0]),
    RotatingField(0.3, 2.0, normal=[0, 1, 0], bz=0.1),
    TabulatedField([0, 1, 2], [[0, 0, 1], [0, 1, 0], [1, 0, 0]]),
])
def test_dict_round_trip(f):
    g = field_from_dict(f.to_dict())
    t = np.linspace(0, 2, 9)
    np.testing.assert_allclose(g(t), f(t))


@pytest.mark.parametrize("spec", [
    {"kind": "pulsed"},
    {"kind": "constant"},
    {"kind": "constant", "b0": [0, 0, 1], "omega": 1},
    {"b0": [0, 0, 1]},
])
def test_field_from_dict_rejects(spec):
    with pytest.raises(DomainError):
        field_from_dict(spec)

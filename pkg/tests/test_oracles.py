import numpy as np
import pytest

from optfprl.geometry import DimensionError
from optfprl.oracles import (CostSpec, OracleError, absolute_value, evaluate, prediction_error, quadratic,
                             subgradient)


def test_evaluate_linear_origin():
    assert evaluate(CostSpec.linear([1.0, 1.0]), [0.0, 0.0]) == 0.0


def test_evaluate_linear_d16():
    assert evaluate(CostSpec.linear(np.ones(16)), np.full(16, -0.5)) == pytest.approx(-8.0)


def test_evaluate_quadratic():
    assert evaluate(quadratic([0.0, 0.0]), [2.0, 0.0]) == pytest.approx(2.0)


def test_subgradient_linear_constant():
    spec = CostSpec.linear([-1.0, 3.0])
    for x in ([0.0, 0.0], [5.0, -2.0]):
        np.testing.assert_array_equal(subgradient(spec, x), [-1.0, 3.0])


def test_subgradient_quadratic():
    np.testing.assert_allclose(subgradient(quadratic([0.0, 0.0]), [1.0, -1.0]), [1.0, -1.0])


def test_subgradient_abs_kink_midpoint():
    np.testing.assert_array_equal(subgradient(absolute_value(), [0.0]), [0.0])


def test_prediction_error_examples():
    g = np.array([0.3, -0.2])
    assert prediction_error(g, g) == 0.0
    assert prediction_error([1.0, 0.0], [0.0, 0.0]) == 1.0


def test_prediction_error_scenario6_slot10():
    c = np.ones(16)
    assert prediction_error(c, c - c / (0.1 * 10)) == pytest.approx(4.0)


def test_shape_mismatch():
    with pytest.raises(DimensionError):
        evaluate(CostSpec.linear([1.0, 1.0]), [1.0, 2.0, 3.0])
    with pytest.raises(DimensionError):
        prediction_error([1.0], [1.0, 2.0])


def test_declared_lipschitz_enforced():
    with pytest.raises(OracleError):
        CostSpec.linear([3.0, 4.0], lipschitz=1.0)
    bad = CostSpec.general(lambda x: 0.0, lambda x: np.array([10.0]), dim=1, lipschitz=1.0)
    with pytest.raises(OracleError):
        subgradient(bad, [0.0])


def test_bad_gradient_shape():
    bad = CostSpec.general(lambda x: 0.0, lambda x: np.zeros(3), dim=2)
    with pytest.raises(OracleError):
        subgradient(bad, [0.0, 0.0])


def test_linear_coef_is_read_only():
    spec = CostSpec.linear([1.0, 2.0])
    with pytest.raises(ValueError):
        spec.coef[0] = 5.0

import numpy as np
import pytest

from optfprl.harness import scenarios as sc

# spot values of the common coordinate, 20 slots per scenario
SPOTS = {
    1: [(1, -1), (500, -1), (999, -1), (1000, -1), (1001, 1), (1500, 1), (2000, 1), (2500, 1), (3000, 1), (3500, 1),
        (3750, 1), (4000, 1), (4500, 1), (4999, 1), (5000, 1), (10, -1), (100, -1), (700, -1), (1002, 1), (4321, 1)],
    2: [(1, -1), (1000, -1), (1001, 1), (1999, 1), (2000, -1), (2200, -1), (2500, -1), (2501, 1), (3499, 1),
        (3500, -1), (3600, -1), (3750, -1), (3751, 1), (4000, 1), (5000, 1), (500, -1), (1500, 1), (3000, 1),
        (2499, -1), (4999, 1)],
    3: [(1, -1), (1000, -1), (1001, 1), (1999, 1), (2000, -5), (2200, -5), (2500, -5), (2501, 1), (3499, 1),
        (3500, -10), (3600, -10), (3750, -10), (3751, 1), (4000, 1), (5000, 1), (500, -1), (1500, 1), (3000, 1),
        (2499, -5), (4999, 1)],
    4: [(1, 1), (50, 1), (51, -1), (100, -1), (101, 1), (150, 1), (151, -1), (200, -1), (201, 1), (999, -1),
        (1000, -1), (1001, 1), (2525, 1), (2550, 1), (2551, -1), (4950, 1), (4951, -1), (5000, -1), (75, -1),
        (125, 1)],
    5: [(1, 1), (50, 1), (51, -0.1), (100, -0.1), (101, 1), (150, 1), (151, -0.1), (200, -0.1), (201, 1),
        (999, -0.1), (1000, -0.1), (1001, 1), (2525, 1), (2550, 1), (2551, -0.1), (4950, 1), (4951, -0.1),
        (5000, -0.1), (75, -0.1), (125, 1)],
}
SPOTS[6] = SPOTS[4]


@pytest.mark.parametrize("sid", sc.SCENARIO_IDS)
def test_scenario_fidelity(sid):
    S = sc.make_scenario(sid)
    for t, v in SPOTS[sid]:
        np.testing.assert_array_equal(S.costs[t - 1], np.full(16, float(v)))
        np.testing.assert_array_equal(sc.scenario_costs(sid, t).coef, np.full(16, float(v)))


def test_scenario1_slot500():
    np.testing.assert_array_equal(sc.scenario_costs(1, 500).coef, -np.ones(16))


def test_scenario3_slot2200():
    np.testing.assert_array_equal(sc.scenario_costs(3, 2200).coef, np.full(16, -5.0))


def test_scenario6_prediction_slot10_is_zero():
    np.testing.assert_allclose(sc.scenario_prediction_coef(6, 10), np.zeros(16), atol=1e-15)
    np.testing.assert_allclose(sc.make_scenario(6).prediction(10).coef, np.zeros(16), atol=1e-15)


@pytest.mark.parametrize("sid", [1, 2, 3, 4, 5])
def test_zero_predictions(sid):
    assert not np.any(sc.make_scenario(sid, horizon=300).predictions)


def test_slot_out_of_range():
    with pytest.raises(ValueError):
        sc.scenario_costs(1, 0)
    with pytest.raises(ValueError):
        sc.scenario_costs(1, 5001)


def test_comparators_all_ones():
    S = sc.Scenario(0, sc.Ball(2.0, 16), np.ones((3, 16)), np.zeros((3, 16)))
    np.testing.assert_allclose(S.comparators(), np.full((3, 16), -0.5), atol=1e-15)


def test_comparators_zero_cost():
    S = sc.Scenario(0, sc.Ball(2.0, 2), np.zeros((2, 2)), np.zeros((2, 2)))
    np.testing.assert_array_equal(S.comparators(), 0.0)


def test_scenario1_single_switch():
    U = sc.make_scenario(1).comparators()
    moves = np.flatnonzero(np.linalg.norm(np.diff(U, axis=0), axis=1) > 0) + 2
    assert moves.tolist() == [1001]


def test_random_scenario_deterministic_and_on_sphere():
    a, b = sc.random_scenario(3, noise=0.2), sc.random_scenario(3, noise=0.2)
    np.testing.assert_array_equal(a.costs, b.costs)
    np.testing.assert_array_equal(a.predictions, b.predictions)
    np.testing.assert_allclose(np.linalg.norm(a.costs, axis=1), 1.0)
    assert not np.any(sc.random_scenario(3).predictions)


def test_prediction_modes():
    p = sc.make_scenario(4, horizon=120, prediction_mode="perfect")
    np.testing.assert_array_equal(p.predictions, p.costs)
    assert not np.any(sc.make_scenario(6, horizon=120, prediction_mode="zero").predictions)
    with pytest.raises(ValueError):
        sc.make_scenario(4, prediction_mode="psychic")


def test_prediction_after_horizon_is_zero():
    S = sc.make_scenario(6, horizon=20)
    assert not np.any(S.prediction(21).coef)

import csv
import io
import json

import numpy as np
import pytest

import ddsc

TOY = {
    "plant": {
        "A": [[0.5, 0.0], [0.0, 0.5]],
        "B": [[1.0, 0.0], [0.0, 1.0]],
        "W": {"lower": [-0.01, -0.01], "upper": [0.01, 0.01]},
        "X": {"lower": [-4, -4], "upper": [4, 4]},
        "U": {"lower": [-2, -2], "upper": [2, 2]},
        "x0": [0.1, 0.0],
    },
    "controller": {"X_eta": {"lower": [-3.5, -3.5], "upper": [3.5, 3.5]}},
    "cells": [{"x_e": [-2, 0]}, {"x_e": [2, 0]}],
    "detector": {"tau": 3, "clear_streak": 3},
    "attacks": [
        {"name": "ramp", "channel": "measurement",
         "windows": [{"start": 30, "end": 40, "gain": [0.05, 0.0]}]}
    ],
    "reference": [{"k": 0, "r": [2, 0]}, {"k": 50, "r": [-2, 0]}],
    "horizon": 70,
    "synthesis": {"coverage_samples": 1000, "j_max": 20},
    "data": {"trajectories": 3, "length": 10, "seed": 2},
}


@pytest.fixture(scope="module")
def scenario():
    return json.dumps(TOY)


@pytest.fixture(scope="module")
def bank(scenario):
    return ddsc.collect(scenario)


@pytest.fixture(scope="module")
def bundle(bank, scenario):
    return ddsc.synthesize(bank, scenario)


def test_zonotope_basics():
    z = ddsc.Zonotope.box(np.array([-1.0, 0.0]), np.array([1.0, 2.0]))
    assert z.dim == 2
    np.testing.assert_allclose(z.center, [0.0, 1.0])
    np.testing.assert_allclose(z.radius(), [1.0, 1.0])
    assert z.contains(np.array([0.5, 1.5]))
    assert not z.contains(np.array([1.5, 1.5]))


def test_identify_contains_true_model(bank):
    M = ddsc.identify(bank)
    assert M.center.shape == (2, 4)
    truth = np.hstack([0.5 * np.eye(2), np.eye(2)])
    assert M.contains(truth)
    assert not M.contains(truth + 0.5)


def test_identify_needs_rich_data():
    poor = {"trajectories": [{"u": [[0.0, 0.0]], "x": [[0.0, 0.0], [0.0, 0.0]]}],
            "noise": {"center": [0.0, 0.0], "generators": [[0.01, 0.0]]}}
    with pytest.raises(ddsc.RankError):
        ddsc.identify(json.dumps(poor))


def test_rors_point_contains_successor(bank):
    M = ddsc.identify(bank)
    W = ddsc.Zonotope.box(np.full(2, -0.01), np.full(2, 0.01))
    x, u = np.array([1.0, -0.5]), np.array([0.2, 0.1])
    R = ddsc.rors_point(M, x, u, W)
    assert R.contains(0.5 * x + u + np.array([0.01, -0.01]))


def test_verify_flags_invalid_input(bank):
    M = ddsc.identify(bank)
    W = ddsc.Zonotope.box(np.full(2, -0.01), np.full(2, 0.01))
    U = ddsc.HPolytope.box(np.full(2, -2.0), np.full(2, 2.0))
    X_eta = ddsc.HPolytope.box(np.full(2, -3.5), np.full(2, 3.5))
    assert ddsc.verify(np.array([3.0, 0.0]), np.zeros(2), M, U, X_eta, W) == "unsafe_input"
    assert ddsc.verify(np.array([0.1, 0.0]), np.zeros(2), M, U, X_eta, W) == "safe"


def test_bundle_and_simulation(bundle, scenario):
    b = json.loads(bundle)
    assert b["format"] == "ddsc-bundle"
    assert len(b["families"]) == 2

    trace = ddsc.simulate(bundle, scenario, seed=3)
    rows = list(csv.DictReader(io.StringIO(trace)))
    assert len(rows) == 71
    assert list(rows[0])[:3] == ["k", "x_true0", "x_true1"]
    assert any(r["detection"] == "1" for r in rows)
    for r in rows:
        assert abs(float(r["x_true0"])) <= 3.5 and abs(float(r["x_true1"])) <= 3.5

    assert trace == ddsc.simulate(bundle, scenario, seed=3)
    clean = ddsc.simulate(bundle, scenario, seed=3, attacks=False)
    assert ddsc.metric_er(clean) > 0.0

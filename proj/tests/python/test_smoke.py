"""Python smoke tests for the extension module."""

import json
import math
import os

import numpy as np
import pytest

import qtheta

Z2 = json.dumps({"N": 1, "generators": [[1, 0], [0, 1]]})
TWO_ONE = json.dumps({"N": 1, "generators": [[2, 0], [0, 1]]})
T_I = np.array([[1j]])


def test_classical_theta_value():
    value, tail = qtheta.classical_theta(T_I, np.zeros(1, dtype=complex), radius=8.0)
    assert tail < 1e-12
    assert abs(value - 1.0864348112133080) < 1e-12
    assert abs(value.imag) < 1e-15


def test_classical_modular_residual():
    for omega in (1j, 2j, 1 + 1j):
        r = qtheta.classical_modular_residual(np.array([[omega]]), np.array([0.1 + 0.05j]))
        assert r < 1e-10


def test_quantum_theta_and_rieffel_agree():
    coeffs, prefactor = qtheta.quantum_theta_coeffs(Z2, T_I, radius=6.0)
    assert abs(prefactor - 1 / math.sqrt(2)) < 1e-14
    assert abs(coeffs[(0, 0)] - 1.0) < 1e-15
    assert abs(coeffs[(1, 0)] - math.exp(-math.pi / 2)) < 1e-15

    rieffel, tail = qtheta.rieffel_coeffs(Z2, T_I, radius=6.0)
    assert tail < 1e-6
    for key, c in coeffs.items():
        if sum(k * k for k in key) <= 25:
            assert abs(rieffel[key] - prefactor * c) < 1e-10


def test_poisson_and_associativity():
    residual, tail = qtheta.poisson_residual(TWO_ONE, T_I, [[0.0, 0.0], [0.3, -0.7]], radius=8.0)
    assert residual < 1e-8
    assert tail < 1e-10
    assert qtheta.associativity_residual(TWO_ONE, T_I, radius=6.0) < 1e-6


def test_gaussian_integral():
    v = qtheta.gaussian_integral(np.array([[2.0 + 0j]]), np.zeros(1, dtype=complex))
    assert abs(v - 1 / math.sqrt(2)) < 1e-14


def test_dual_lattice_and_covolume():
    assert abs(qtheta.covolume(TWO_ONE) - 2.0) < 1e-15
    dual = json.loads(qtheta.dual_lattice_json(TWO_ONE))
    assert dual["N"] == 1
    assert abs(qtheta.covolume(json.dumps(dual)) - 0.5) < 1e-15


def test_run_scenario():
    scenario_dir = os.environ.get("QTHETA_SCENARIO_DIR")
    if scenario_dir:
        with open(os.path.join(scenario_dir, "poisson_2z.json")) as f:
            scenario = f.read()
    else:
        pytest.skip("QTHETA_SCENARIO_DIR not set")
    report = json.loads(qtheta.run_scenario(scenario))
    assert report["all_pass"] is True
    assert {c["check"] for c in report["checks"]} >= {"poisson", "lattice_duality"}

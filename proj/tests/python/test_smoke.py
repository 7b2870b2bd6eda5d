"""Smoke tests for the python bindings."""

import math

import numpy as np
import pytest

import qfdiv


@pytest.fixture()
def qubit_pair():
    spec = qfdiv.AlgebraSpec([(2, 1.0)])
    phi = qfdiv.validate_state(spec, [np.diag([0.5, 0.5]).astype(complex)])
    omega = qfdiv.validate_state(spec, [np.diag([0.75, 0.25]).astype(complex)])
    return spec, phi, omega


def test_relative_entropy_two_routes(qubit_pair):
    spec, phi, omega = qubit_pair
    r = qfdiv.f_divergence(spec, phi, omega, "relative-entropy")
    assert abs(r["ns"]["value"] - 0.5 * math.log(4.0 / 3.0)) < 1e-10
    assert abs(r["direct"]["value"] - 0.5 * math.log(4.0 / 3.0)) < 1e-10
    assert r["delta"] < 1e-10


def test_power_family_and_routes(qubit_pair):
    spec, phi, omega = qubit_pair
    r = qfdiv.f_divergence(spec, phi, omega, "power", alpha=1.5, route="ns")
    assert "direct" not in r
    assert r["ns"]["value"] >= 1.0  # Jensen: f(1) = 1


def test_self_divergence_is_zero():
    spec = qfdiv.AlgebraSpec([(3, 1.0), (2, 0.5)])
    s = qfdiv.random_state(spec, seed=4)
    for name in qfdiv.catalog_names():
        # f(1) = 0 for every named catalog entry
        r = qfdiv.f_divergence(spec, s, s, name)
        assert abs(r["ns"]["value"]) < 1e-10
        assert abs(r["direct"]["value"]) < 1e-10


def test_infinite_divergence_on_disjoint_support():
    spec = qfdiv.AlgebraSpec([(2, 1.0)])
    phi = qfdiv.validate_state(spec, [np.diag([1.0, 0.0]).astype(complex)])
    omega = qfdiv.validate_state(spec, [np.diag([0.0, 1.0]).astype(complex)])
    r = qfdiv.f_divergence(spec, phi, omega, "relative-entropy")
    assert math.isinf(r["ns"]["value"])
    assert math.isinf(r["direct"]["value"])
    defects = qfdiv.support_defects(spec, phi, omega)
    assert defects[0] == pytest.approx(1.0, abs=1e-12)
    assert defects[1] == pytest.approx(1.0, abs=1e-12)


def test_ns_atoms_are_normalized():
    spec = qfdiv.AlgebraSpec([(2, 1.0), (3, 0.7)])
    phi = qfdiv.random_state(spec, seed=10)
    omega = qfdiv.random_state(spec, seed=11, ranks=[1, 2])
    ns = qfdiv.ns_atoms(spec, phi, omega)
    sum_p = sum(a["fphi"] * a["nu"] for a in ns["atoms"])
    sum_q = sum(a["fomega"] * a["nu"] for a in ns["atoms"])
    assert abs(sum_p - 1.0) < 1e-10
    assert abs(sum_q - 1.0) < 1e-10


def test_trace_and_inner():
    spec = qfdiv.AlgebraSpec([(2, 1.0), (3, 1.0)])
    eye = [np.eye(2, dtype=complex), np.eye(3, dtype=complex)]
    assert qfdiv.trace(spec, eye) == pytest.approx(5.0)
    assert qfdiv.inner(spec, eye, eye) == pytest.approx(5.0)


def test_random_state_determinism():
    spec = qfdiv.AlgebraSpec([(3, 2.0)])
    a = qfdiv.random_state(spec, seed=99)
    b = qfdiv.random_state(spec, seed=99)
    assert np.array_equal(a.h[0], b.h[0])
    assert np.array_equal(a.xi[0], b.xi[0])


def test_validation_errors_surface_as_exceptions():
    spec = qfdiv.AlgebraSpec([(2, 1.0)])
    with pytest.raises(ValueError):
        qfdiv.validate_state(spec, [np.diag([1.0, -0.5]).astype(complex)])
    with pytest.raises(ValueError):
        qfdiv.AlgebraSpec([(0, 1.0)])


def test_verify_harness():
    report = qfdiv.verify(trials=25, seed=3)
    assert report["totals"]["failures"] == 0
    assert report["stats"]["max_route_delta_rel"] < 1e-8


def test_inequality_harness():
    report = qfdiv.inequalities(trials=20, seed=5)
    assert report["totals"]["violations"] == 0

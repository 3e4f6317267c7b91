from dataclasses import replace

import numpy as np
import pytest

from conical import operators as ops
from conical.constructors import sic_fixture, sim_inball
from conical.errors import ConstructionUnavailableError, DomainError, NoDecompositionError
from conical.validation import eigvalsh
from conical.werner import (
    isotropic_fidelity,
    isotropic_state,
    kappa_for_werner,
    symmetric_decomposition,
    verify_decomposition,
    werner_isotropic_transform,
    werner_p_from_fidelity,
    werner_state,
)


def test_werner_state_examples():
    np.testing.assert_allclose(werner_state(2, 0.25).matrix, np.eye(4) / 4, atol=1e-15)
    pi_s = ops.sym_asym_projectors(3)[0]
    np.testing.assert_allclose(werner_state(3, 0).matrix, pi_s / 6, atol=1e-15)
    for d in (2, 3, 4):
        np.testing.assert_allclose(isotropic_state(d, 1 / d**2).matrix, np.eye(d * d) / d**2, atol=1e-15)


@pytest.mark.parametrize("d", [2, 3, 4])
@pytest.mark.parametrize("x", [0.0, 0.1, 0.5, 0.9, 1.0])
def test_states_are_density_matrices(d, x):
    for state in (werner_state(d, x), isotropic_state(d, x)):
        assert np.trace(state.matrix).real == pytest.approx(1)
        assert eigvalsh(state.matrix)[0] >= -1e-12


def test_state_flags():
    assert werner_state(2, 0.6).entangled and not werner_state(2, 0.5).entangled
    assert werner_state(3, 1 / 3).decomposable and not werner_state(3, 0.34).decomposable
    assert isotropic_state(3, 0.4).entangled and not isotropic_state(3, 1 / 3).entangled
    assert isotropic_state(3, 0.2).decomposable and not isotropic_state(3, 0.1).decomposable


@pytest.mark.parametrize("bad", [-0.1, 1.1])
def test_parameters_out_of_range(bad):
    with pytest.raises(DomainError):
        werner_state(2, bad)
    with pytest.raises(DomainError):
        isotropic_state(2, bad)


@pytest.mark.parametrize("d", [2, 3, 5])
def test_ppt_matches_entanglement_flag(d):
    for p in np.linspace(0, 1, 11):
        state = werner_state(d, p)
        ppt = eigvalsh(ops.partial_transpose(state.matrix))[0] >= -1e-12
        assert ppt == (not state.entangled)


@pytest.mark.parametrize("d", [2, 3, 5])
def test_kappa_and_fidelity_endpoints(d):
    assert kappa_for_werner(d, 0) == pytest.approx(1)
    assert kappa_for_werner(d, (d - 1) / (2 * d)) == pytest.approx(0, abs=1e-7)
    assert isotropic_fidelity(d, 1.0) == pytest.approx(1 / d, abs=1e-12)
    assert isotropic_fidelity(d, 0.0) == pytest.approx(1 / d**2, abs=1e-12)
    for kappa in np.linspace(0, 1, 7):
        F = isotropic_fidelity(d, kappa)
        assert kappa_for_werner(d, werner_p_from_fidelity(d, F)) == pytest.approx(kappa, abs=1e-7)


def test_tetrahedron_reproduces_symmetric_projector():
    report = symmetric_decomposition(werner_state(2, 0))
    pi_s = ops.sym_asym_projectors(2)[0]
    recon = sum(w * np.kron(s, s) for w, s in zip(report.weights, report.states))
    np.testing.assert_allclose(recon, pi_s / 3, atol=1e-12)
    np.testing.assert_allclose(report.weights, 0.25)
    np.testing.assert_allclose(report.states, sic_fixture(2).elements, atol=1e-14)
    assert report.pure and report.ideal and report.homogeneous
    assert report.residual <= 1e-10


def test_d3_scaled_hesse_sic():
    report = symmetric_decomposition(werner_state(3, 0.2))
    assert report.kappa == pytest.approx(np.sqrt(0.4))
    assert report.ideal and not report.pure
    assert report.residual <= 1e-8


@pytest.mark.parametrize("d", [2, 3, 5])
def test_threshold_sharpness(d):
    edge = (d - 1) / (2 * d)
    for p in (0, 0.5 * edge, edge):
        report = symmetric_decomposition(werner_state(d, p))
        assert report.residual <= 1e-8
        assert report.pure == (p <= 1e-9)
        assert verify_decomposition(report) <= 1e-8
    with pytest.raises(NoDecompositionError, match="no symmetric decomposition exists"):
        symmetric_decomposition(werner_state(d, edge + 1e-3))


def test_d2_p03_has_no_decomposition():
    with pytest.raises(NoDecompositionError):
        symmetric_decomposition(werner_state(2, 0.3))


def test_maximally_mixed_point_is_not_ideal():
    report = symmetric_decomposition(werner_state(3, 1 / 3))
    assert report.source == "maximally-mixed"
    assert report.homogeneous and not report.pure and not report.ideal


def test_composite_dimension_sources():
    d = 6
    report = symmetric_decomposition(werner_state(d, 0.4))  # kappa below 1/(d-1)
    assert report.source.startswith("sim-inball")
    assert report.residual <= 1e-8
    with pytest.raises(ConstructionUnavailableError) as info:
        symmetric_decomposition(werner_state(d, 0.05))
    assert info.value.kappa == pytest.approx(kappa_for_werner(d, 0.05))


def test_supplied_source():
    src = sim_inball(4, 1 / 3)
    p = 0.35
    report = symmetric_decomposition(werner_state(4, p), source=src)
    assert report.source == "supplied"
    assert report.residual <= 1e-8
    with pytest.raises(ConstructionUnavailableError):
        symmetric_decomposition(werner_state(4, 0.0), source=src)


def test_isotropic_decomposition():
    report = symmetric_decomposition(isotropic_state(3, 0.2))
    assert report.conjugate_second
    assert report.residual <= 1e-8
    assert verify_decomposition(report) <= 1e-8
    with pytest.raises(NoDecompositionError):
        symmetric_decomposition(isotropic_state(3, 0.05))
    with pytest.raises(NoDecompositionError):
        symmetric_decomposition(isotropic_state(3, 0.5))


@pytest.mark.parametrize("d", [2, 3, 5])
def test_transform_round_trip(d):
    for p in (0, (d - 1) / (4 * d), (d - 1) / (2 * d)):
        report = symmetric_decomposition(werner_state(d, p))
        iso = werner_isotropic_transform(report)
        assert iso.residual <= 1e-8
        back = werner_isotropic_transform(iso)
        assert back.target.p == pytest.approx(report.target.p, abs=1e-12)
        assert abs(back.residual - report.residual) <= 1e-12
        np.testing.assert_array_equal(back.states, report.states)


def test_transform_endpoints():
    iso = werner_isotropic_transform(symmetric_decomposition(werner_state(2, 0)))
    assert iso.target.F == pytest.approx(0.5)
    iso = werner_isotropic_transform(symmetric_decomposition(werner_state(3, 1 / 3)))
    assert iso.target.F == pytest.approx(1 / 9)


def test_transform_rejects_bad_report():
    report = symmetric_decomposition(werner_state(2, 0))
    with pytest.raises(DomainError):
        werner_isotropic_transform(replace(report, residual=1.0))


def test_verify_decomposition_linear_response():
    report = symmetric_decomposition(werner_state(2, 0))
    w = report.weights.copy()
    w[0] += 1e-3
    w[1] -= 1e-3
    assert verify_decomposition(replace(report, weights=w)) >= 1e-4
    w = report.weights.copy()
    w[0] += 1e-3
    with pytest.raises(DomainError, match="sum"):
        verify_decomposition(replace(report, weights=w))
    bad_states = report.states.copy()
    bad_states[0] = np.diag([1.5, -0.5])
    with pytest.raises(DomainError):
        verify_decomposition(replace(report, states=bad_states))

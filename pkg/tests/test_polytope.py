import numpy as np
import pytest

from conical import operators as ops
from conical.constructors import mum_inball, scale_design, sic_fixture, sim_inball, theorem3_design
from conical.design import ConicalDesign, classify, verify
from conical.errors import DomainError, InvalidProjectorError
from conical.polytope import (
    centering_projector,
    cp_search,
    gram_projector,
    mub_block_projector,
    projector_frame,
    search_objective,
    validate_projector,
    verify_bloch_one_design,
)

from conftest import SZ


def test_centering_projector_entries():
    P = centering_projector(4)
    np.testing.assert_allclose(np.diag(P), 3 / 4)
    np.testing.assert_allclose(P[~np.eye(4, dtype=bool)], -1 / 4)
    assert np.all(P.sum(axis=1) == 0)
    validate_projector(P, 2)


def test_mub_block_projector_entries():
    P = mub_block_projector(2)
    assert P.shape == (6, 6)
    np.testing.assert_allclose(P[:2, :2], [[0.5, -0.5], [-0.5, 0.5]])
    np.testing.assert_allclose(P[:2, 2:], 0)
    np.testing.assert_allclose(P.sum(axis=1), 0, atol=1e-15)
    for d in (2, 3, 4):
        v = validate_projector(mub_block_projector(d), d)
        np.testing.assert_allclose(np.diag(v.matrix), (d * d - 1) / (d * (d + 1)))


def test_centering_with_wrong_cardinality_is_invalid():
    with pytest.raises(InvalidProjectorError, match="rank condition"):
        validate_projector(centering_projector(5), 2)


def test_broken_row_sums_are_listed():
    P = centering_projector(4).copy()
    P[0, 1] += 0.1
    P[1, 0] += 0.1
    with pytest.raises(InvalidProjectorError) as info:
        validate_projector(P, 2)
    assert any("row-sum condition violated at rows [0, 1]" in v for v in info.value.violations)


def test_undersized_projector_is_invalid():
    with pytest.raises(InvalidProjectorError, match="cardinality"):
        validate_projector(centering_projector(3), 2)


def test_gram_projector_sic2():
    lam, P = gram_projector(sic_fixture(2))
    assert lam == pytest.approx(8 / 3)
    np.testing.assert_allclose(P.matrix, centering_projector(4), atol=1e-12)


def test_gram_projector_theorem3_sim3():
    design = theorem3_design(validate_projector(centering_projector(9), 3), 1 / 3)
    lam, P = gram_projector(design)
    assert lam == pytest.approx(27 / 16)
    np.testing.assert_allclose(P.matrix, centering_projector(9), atol=1e-12)
    kappa = np.sqrt(lam * 4 / 27)
    assert kappa == pytest.approx(0.5)


def test_gram_projector_mum():
    lam, P = gram_projector(mum_inball(3, 0.5))
    np.testing.assert_allclose(P.matrix, mub_block_projector(3), atol=1e-12)
    assert lam <= 12 * 3 / 4


def test_gram_projector_rejects_inhomogeneous():
    sic = sic_fixture(2).elements
    with pytest.raises(DomainError):
        gram_projector(ConicalDesign(np.concatenate([sic, 0.5 * sic])))


def test_one_design_examples():
    check = verify_bloch_one_design(sic_fixture(2).bloch_vectors)
    assert check.is_one_design
    # lambda in Gell-Mann coordinates is the trace of the frame over d^2-1
    assert check.lam == pytest.approx(8 / 3)
    assert not verify_bloch_one_design([SZ, -SZ]).is_one_design
    with pytest.raises(DomainError):
        verify_bloch_one_design([2 * SZ, -2 * SZ])


@pytest.mark.parametrize("d", [2, 3, 4])
def test_one_design_of_theorem3_outputs(d):
    for P in (centering_projector(d * d), mub_block_projector(d)):
        design = theorem3_design(validate_projector(P, d), 1.0)
        assert verify_bloch_one_design(design.bloch_vectors).is_one_design


def test_projector_frame_sign_convention():
    P = validate_projector(mub_block_projector(3), 3)
    u = projector_frame(P)
    np.testing.assert_allclose(u @ u.T, P.matrix, atol=1e-12)
    for col in u.T:
        first = col[np.flatnonzero(np.abs(col) > 1e-12)[0]]
        assert first > 0


@pytest.mark.parametrize("d", [2, 3, 4])
def test_search_floor_with_zero_iterations(d):
    for P in (centering_projector(d * d), mub_block_projector(d)):
        result = cp_search(validate_projector(P, d), restarts=3, max_iters=0, seed=1)
        assert result.best_kappa >= 1 / (d - 1) - 1e-9
        assert result.best_kappa <= 1


@pytest.mark.parametrize("d", [3, 4])
def test_objective_range_and_permutation_invariance(d, rng):
    P = validate_projector(centering_projector(d * d), d)
    u = projector_frame(P)
    for _ in range(10):
        rot = ops.random_orthogonal(d * d - 1, rng)
        f = search_objective(P, rot)
        assert 1 / (d - 1) - 1e-12 <= f <= 1 + 1e-12
        perm = np.eye(d * d)[rng.permutation(d * d)]
        q = u.T @ perm @ u  # orthogonal map permuting the simplex vertices
        np.testing.assert_allclose(q @ q.T, np.eye(d * d - 1), atol=1e-12)
        assert search_objective(P, q @ rot) == pytest.approx(f, abs=1e-12)


def test_search_is_deterministic_and_monotone():
    P = validate_projector(centering_projector(9), 3)
    a = cp_search(P, restarts=3, max_iters=60, seed=4)
    b = cp_search(P, restarts=3, max_iters=60, seed=4, n_jobs=2)
    assert a.best_kappa == b.best_kappa
    np.testing.assert_array_equal(a.witness, b.witness)
    for trace in a.iterations:
        assert np.all(np.diff(trace) >= 0)


def test_search_witness_realizes_projector():
    P = validate_projector(mub_block_projector(3), 3)
    result = cp_search(P, restarts=2, max_iters=100, seed=2)
    assert result.residual < 1e-10
    assert verify_bloch_one_design(result.witness).is_one_design
    design = ConicalDesign((np.eye(3) + result.witness) / 3)
    assert verify(design).is_design


def test_search_d2_witness_is_projective():
    result = cp_search(validate_projector(centering_projector(4), 2), restarts=2, max_iters=10, seed=0)
    assert result.best_kappa >= 1 - 1e-6
    design = ConicalDesign((np.eye(2) + result.witness) / 2)
    assert classify(design, tol=1e-6).projective


def test_search_softmin_option_runs():
    P = validate_projector(centering_projector(9), 3)
    result = cp_search(P, restarts=2, max_iters=50, seed=3, softmin=0.05)
    assert 0.5 - 1e-9 <= result.best_kappa <= 1


def test_gram_projector_round_trip_scaled():
    design = scale_design(sic_fixture(3), 0.8)
    lam, P = gram_projector(design)
    assert lam <= design.m * 3 / 4 + 1e-9
    from conical.polytope import bloch_vectors_from_projector, gram_matrix

    kappa = np.sqrt(lam * 4 / (design.m * 3))
    rebuilt = bloch_vectors_from_projector(P, kappa)
    np.testing.assert_allclose(gram_matrix(rebuilt), gram_matrix(design.bloch_vectors), atol=1e-9)


def test_sim_one_design_cross_contract():
    vectors = sim_inball(3, 0.3).bloch_vectors
    assert verify_bloch_one_design(vectors).is_one_design
    assert verify(ConicalDesign((np.eye(3) + vectors) / 3 * 0.7)).is_design

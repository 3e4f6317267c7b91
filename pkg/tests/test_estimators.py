import numpy as np
import pytest
from sklearn.base import clone

from conical.constructors import mub_prime, sic_fixture
from conical.estimators import ContractionSearch, DesignExpansion
from conical.errors import DimensionError, InvalidProjectorError, NotADesignError
from conical.polytope import centering_projector


def test_expansion_round_trip(rng):
    design = mub_prime(3)
    est = DesignExpansion().fit(design.elements)
    X = rng.normal(size=(5, 3, 3)) + 1j * rng.normal(size=(5, 3, 3))
    X = X + X.conj().transpose(0, 2, 1)
    coef = est.transform(X)
    assert coef.shape == (5, 12)
    np.testing.assert_allclose(est.inverse_transform(coef), X, atol=1e-12)
    np.testing.assert_allclose(est.transform(X[0]), coef[:1], atol=1e-14)


def test_expansion_rejects_non_designs_and_shapes():
    with pytest.raises(NotADesignError):
        DesignExpansion().fit(np.stack([np.eye(2), np.eye(2)]))
    est = DesignExpansion().fit(sic_fixture(2).elements)
    with pytest.raises(DimensionError):
        est.transform(np.eye(3))


def test_clone_and_params():
    est = ContractionSearch(restarts=3, max_iters=20, seed=1)
    copy = clone(est)
    assert copy.get_params() == est.get_params()
    assert not hasattr(copy, "result_")
    assert DesignExpansion(tol=1e-6).get_params() == {"tol": 1e-6}


def test_contraction_search_fit():
    est = ContractionSearch(restarts=2, max_iters=20, seed=0).fit(centering_projector(4))
    assert est.best_kappa_ >= 0.999
    design = est.design(0.5)
    assert design.m == 4
    with pytest.raises(InvalidProjectorError):
        ContractionSearch().fit(centering_projector(5))

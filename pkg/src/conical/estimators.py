"""scikit-learn style wrappers around the expansion formula and the c_P search."""
import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .design import ConicalDesign, expansion_coefficients, parameters, reconstruct
from .errors import DimensionError
from .polytope import cp_search, infer_dimension, validate_projector
from .validation import DEFAULT_TOL, check_operator_stack


class DesignExpansion(TransformerMixin, BaseEstimator):
    """Map operators to their expansion coefficients over a conical design.

    ``fit`` takes the design (an (m, d, d) stack or a ConicalDesign);
    ``transform`` takes one operator or a stack and returns coefficients of
    shape (n, m); ``inverse_transform`` rebuilds the operators.

    Examples
    --------
    >>> from conical.constructors import sic_fixture
    >>> exp = DesignExpansion().fit(sic_fixture(2))
    >>> exp.transform(np.eye(2)).round(6)
    array([[0.5, 0.5, 0.5, 0.5]])
    """

    def __init__(self, tol=DEFAULT_TOL):
        self.tol = tol

    def fit(self, X, y=None):
        elements = X.elements if isinstance(X, ConicalDesign) else check_operator_stack(X)
        p = parameters(elements, self.tol)
        self.elements_ = elements
        self.k_plus_ = p.k_plus
        self.k_minus_ = p.k_minus
        self.n_elements_ = len(elements)
        self.dimension_ = elements.shape[1]
        self.unique_ = self.n_elements_ == self.dimension_**2
        return self

    def _operators(self, X):
        X = np.asarray(X, dtype=complex)
        if X.ndim == 2:
            X = X[None]
        X = check_operator_stack(X, name="X")
        if X.shape[1] != self.dimension_:
            raise DimensionError(f"expected {self.dimension_}x{self.dimension_} operators")
        return X

    def transform(self, X):
        check_is_fitted(self, "elements_")
        return expansion_coefficients(self.elements_, self.k_plus_, self.k_minus_, self._operators(X))

    def inverse_transform(self, X):
        check_is_fitted(self, "elements_")
        return reconstruct(self.elements_, np.atleast_2d(X))


class ContractionSearch(BaseEstimator):
    """Search for a large contraction parameter realizing a design projector.

    ``fit(P)`` validates the projector (inferring d from its trace) and
    runs the multi-start orthogonal-group ascent. Fitted attributes:
    ``result_`` (the full SearchResult), ``best_kappa_``, ``witness_``.
    """

    def __init__(self, restarts=32, max_iters=500, seed=7, step0=0.1, softmin=None, n_jobs=None):
        self.restarts = restarts
        self.max_iters = max_iters
        self.seed = seed
        self.step0 = step0
        self.softmin = softmin
        self.n_jobs = n_jobs

    def fit(self, X, y=None):
        X = np.asarray(X, dtype=float)
        P = validate_projector(X, infer_dimension(X))
        self.projector_ = P
        self.result_ = cp_search(
            P,
            restarts=self.restarts,
            max_iters=self.max_iters,
            seed=self.seed,
            step0=self.step0,
            softmin=self.softmin,
            n_jobs=self.n_jobs,
        )
        self.best_kappa_ = self.result_.best_kappa
        self.witness_ = self.result_.witness
        return self

    def design(self, t=1.0):
        """Witness as a homogeneous conical design with trace ``t``."""
        check_is_fitted(self, "result_")
        d = self.projector_.d
        return ConicalDesign((t / d) * (np.eye(d) + self.witness_), kind="search-witness")

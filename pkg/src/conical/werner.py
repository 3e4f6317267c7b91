"""Symmetric decompositions of separable Werner and isotropic states.

A Werner state ``k_s Pi_sym + k_a Pi_asym`` decomposes as
``sum_j lambda_j rho_j (x) rho_j`` exactly when ``A_j = sqrt(lambda_j) rho_j``
is a conical design (or, at the maximally mixed point, trivially). The
partial transpose turns such a decomposition into one of the isotropic
state ``sum_j lambda_j rho_j (x) rho_j^*``.
"""
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from . import operators as ops
from .constructors import mub_prime, scale_design, sic_fixture, sim_inball, _is_prime
from .design import ConicalDesign, classify, parameters
from .errors import ConstructionUnavailableError, DomainError, NoDecompositionError
from .validation import DEFAULT_TOL, check_dimension, eigvalsh, frob


@dataclass(frozen=True)
class WernerState:
    d: int
    p: float
    matrix: np.ndarray

    family = "werner"

    @property
    def parameter(self):
        return self.p

    @property
    def k_s(self):
        return 2 * (1 - self.p) / (self.d * (self.d + 1))

    @property
    def k_a(self):
        return 2 * self.p / (self.d * (self.d - 1))

    @property
    def entangled(self):
        return self.p > 0.5

    @property
    def decomposable(self):
        return self.p <= (self.d - 1) / (2 * self.d)


@dataclass(frozen=True)
class IsotropicState:
    d: int
    F: float
    matrix: np.ndarray

    family = "isotropic"

    @property
    def parameter(self):
        return self.F

    @property
    def entangled(self):
        return self.F > 1 / self.d

    @property
    def decomposable(self):
        return 1 / self.d**2 <= self.F <= 1 / self.d


def _check_unit_interval(x, name):
    if not 0 <= x <= 1:
        raise DomainError(f"{name} must lie in [0, 1], got {x}")
    return float(x)


def werner_state(d, p):
    d = check_dimension(d)
    p = _check_unit_interval(p, "p")
    pi_s, pi_a, _, _ = ops.sym_asym_projectors(d)
    k_s = 2 * (1 - p) / (d * (d + 1))
    k_a = 2 * p / (d * (d - 1))
    return WernerState(d, p, k_s * pi_s + k_a * pi_a)


def isotropic_state(d, F):
    d = check_dimension(d)
    F = _check_unit_interval(F, "F")
    phi = ops.maximally_entangled(d)
    n = d * d - 1
    return IsotropicState(d, F, (1 - F) / n * np.eye(d * d) + (d * d * F - 1) / n * phi)


def kappa_for_werner(d, p):
    """Contraction a homogeneous design needs to reproduce the Werner state at ``p``."""
    return float(np.sqrt(max(0.0, 1 - 2 * d * p / (d - 1))))


def isotropic_fidelity(d, kappa):
    """Fidelity of the isotropic partner of a design with contraction ``kappa``."""
    return 1 - (d * d - 1) / d**2 * (1 - kappa**2 / (d + 1))


def werner_p_from_fidelity(d, F):
    return (1 - d * F) / 2


@dataclass(frozen=True)
class DecompositionReport:
    weights: np.ndarray
    states: np.ndarray
    target: object
    residual: float
    homogeneous: bool
    pure: bool
    ideal: bool
    source: str
    kappa: float

    @property
    def conjugate_second(self):
        return isinstance(self.target, IsotropicState)

    @property
    def flags(self):
        return {"homogeneous": self.homogeneous, "pure": self.pure, "ideal": self.ideal}

    def to_dict(self):
        from .jsonio import encode_matrix

        return {
            "weights": [float(w) for w in self.weights],
            "states": [encode_matrix(s) for s in self.states],
            "target": {
                "family": self.target.family,
                "d": self.target.d,
                "parameter": float(self.target.parameter),
            },
            "residual": float(self.residual),
            "flags": self.flags,
            "source": self.source,
            "kappa": float(self.kappa),
        }


def reconstruction(weights, states, conjugate_second=False):
    return sum(
        w * np.kron(s, s.conj() if conjugate_second else s) for w, s in zip(weights, states)
    )


def decomposition_flags(weights, states, tol=DEFAULT_TOL):
    weights = np.asarray(weights)
    states = np.asarray(states)
    m, d, _ = states.shape
    homogeneous = bool(np.max(np.abs(weights - 1 / m)) <= tol)
    purity = np.real(np.einsum("jab,jba->j", states, states))
    pure = bool(np.all(np.abs(purity - 1) <= tol))
    mixed = np.all(np.abs(purity - 1 / d) <= tol)
    ideal = bool(homogeneous and m == d * d and not mixed)
    return homogeneous, pure, ideal


def _source_design(d, kappa, source, tol):
    """Homogeneous design with contraction exactly ``kappa`` and a provenance tag."""
    if source is not None:
        c = classify(source, tol=max(tol, 1e-9))
        if not c.homogeneous:
            raise DomainError("supplied design must be homogeneous")
        k_src = parameters(source, tol).kappa
        if k_src < kappa - 1e-12:
            raise ConstructionUnavailableError(
                f"supplied design has kappa {k_src:.12g} < required kappa {kappa:.12g}", kappa
            )
        return scale_design(source, min(1.0, kappa / k_src), tol), "supplied"
    if d in (2, 3):
        return scale_design(sic_fixture(d), kappa, tol), f"sic-fixture-d{d}"
    if _is_prime(d):
        return scale_design(mub_prime(d), kappa, tol), f"mub-prime-d{d}"
    if kappa <= 1 / (d - 1) + 1e-12:
        return sim_inball(d, min(kappa, 1 / (d - 1))), f"sim-inball-d{d}"
    raise ConstructionUnavailableError(
        f"no construction reaches kappa {kappa:.12g} in d={d}: "
        f"in-ball SIMs stop at 1/(d-1) = {1 / (d - 1):.12g} and no projective fixture is available",
        kappa,
    )


def _werner_decomposition(target, source, tol):
    d, p = target.d, target.p
    threshold = (d - 1) / (2 * d)
    if p > threshold + 1e-12:
        raise NoDecompositionError(
            f"no symmetric decomposition exists: p={p:g} exceeds (d-1)/(2d) = {threshold:g}"
        )
    kappa = kappa_for_werner(d, p)
    if kappa <= 1e-12:
        m = d * d
        states = np.repeat((np.eye(d) / d)[None].astype(complex), m, axis=0)
        weights = np.full(m, 1 / m)
        src = "maximally-mixed"
        kappa = 0.0
    else:
        design, src = _source_design(d, kappa, source, tol)
        t = design.traces
        weights = t**2 / np.sum(t**2)
        states = design.elements / t[:, None, None]
    residual = frob(reconstruction(weights, states) - target.matrix)
    h, pure, ideal = decomposition_flags(weights, states, tol)
    return DecompositionReport(
        weights=weights,
        states=states,
        target=target,
        residual=residual,
        homogeneous=h,
        pure=pure,
        ideal=ideal,
        source=src,
        kappa=kappa,
    )


def symmetric_decomposition(target, source: Optional[ConicalDesign] = None, tol=DEFAULT_TOL):
    """Homogeneous symmetric decomposition of a Werner or isotropic state.

    Designs are taken, in order of preference, from ``source``, from a
    projective fixture (SIC for d = 2, 3; MUBs for prime d) contracted to
    the required ``kappa``, or from an in-ball SIM.
    """
    if isinstance(target, WernerState):
        return _werner_decomposition(target, source, tol)
    if isinstance(target, IsotropicState):
        d, F = target.d, target.F
        if F < 1 / d**2 - 1e-12 or F > 1 / d + 1e-12:
            raise NoDecompositionError(
                f"no symmetric decomposition exists: F={F:g} outside [1/d^2, 1/d] = "
                f"[{1 / d**2:g}, {1 / d:g}]"
            )
        p = min(max(werner_p_from_fidelity(d, F), 0.0), (d - 1) / (2 * d))
        return werner_isotropic_transform(_werner_decomposition(werner_state(d, p), source, tol))
    raise TypeError("target must be a WernerState or IsotropicState")


def werner_isotropic_transform(report, tol=1e-8):
    """Partial-transpose a decomposition between the Werner and isotropic pictures."""
    if report.residual > tol:
        raise DomainError(f"report residual {report.residual:.3g} exceeds {tol:g}")
    target = report.target
    d = target.d
    if isinstance(target, WernerState):
        k_plus = (target.k_s + target.k_a) / 2
        new_target = isotropic_state(d, min(1.0, max(0.0, 1 - (d * d - 1) * k_plus)))
    elif isinstance(target, IsotropicState):
        new_target = werner_state(d, min(1.0, max(0.0, werner_p_from_fidelity(d, target.F))))
    else:
        raise TypeError("report target must be a WernerState or IsotropicState")
    conj = isinstance(new_target, IsotropicState)
    residual = frob(reconstruction(report.weights, report.states, conj) - new_target.matrix)
    return replace(report, target=new_target, residual=residual)


def verify_decomposition(report, tol=DEFAULT_TOL):
    """Recompute the reconstruction distance of a report from scratch."""
    weights = np.asarray(report.weights, dtype=float)
    states = np.asarray(report.states, dtype=complex)
    if weights.ndim != 1 or states.ndim != 3 or len(weights) != len(states):
        raise DomainError("weights and states must be matching sequences")
    if np.any(weights <= 0):
        raise DomainError("weights must be positive")
    if abs(weights.sum() - 1) > tol:
        raise DomainError(f"weights sum to {weights.sum():.12g}, not 1")
    for j, s in enumerate(states):
        if frob(s - s.conj().T) > tol or abs(np.trace(s).real - 1) > tol:
            raise DomainError(f"state {j} is not a trace-one Hermitian operator")
        if eigvalsh((s + s.conj().T) / 2)[0] < -tol:
            raise DomainError(f"state {j} is not positive semi-definite")
    conj = isinstance(report.target, IsotropicState)
    return frob(reconstruction(weights, states, conj) - report.target.matrix)

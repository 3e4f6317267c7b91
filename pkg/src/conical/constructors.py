"""Explicit conical designs: projector realizations, SIMs, MUMs, MUBs and SICs."""
import numpy as np
from scipy.linalg import schur

from . import operators as ops
from .design import ConicalDesign, check_sic_kets, classify, require_design
from .errors import DomainError, InvalidProjectorError
from .polytope import (
    DesignProjector,
    bloch_vectors_from_projector,
    centering_projector,
    mub_block_projector,
    validate_projector,
)
from .validation import DEFAULT_TOL, check_dimension, eigvalsh


def _design_from_bloch(t, blochs, kind=None):
    d = blochs.shape[1]
    return ConicalDesign((t / d) * (np.eye(d) + blochs), kind=kind)


def theorem3_design(P, t):
    """Homogeneous design with contraction ``1/(d-1)`` realizing projector ``P``.

    ``A_j = (t/d)(I + B_j)`` with ``B_j`` proportional to
    ``sum_a u_aj D_a``, where ``P = u u^T`` and ``D_a`` is the Gell-Mann
    basis. Such vectors lie in the in-ball, so positivity is automatic.
    """
    if not isinstance(P, DesignProjector):
        raise InvalidProjectorError(["P must be validated with validate_projector"])
    if not t > 0:
        raise DomainError(f"trace must be positive, got {t}")
    blochs = bloch_vectors_from_projector(P, 1.0 / (P.d - 1))
    return _design_from_bloch(t, blochs, kind="theorem3")


def _check_inball_kappa(d, kappa):
    bound = 1.0 / (d - 1)
    if not 0 < kappa <= bound * (1 + 1e-12):
        raise DomainError(f"kappa {kappa:g} exceeds in-ball bound {bound:g} for d={d}")


def sim_inball(d, kappa, t=None):
    """SIM with contraction ``kappa <= 1/(d-1)``; ``t`` defaults to ``1/d`` (a POVM)."""
    d = check_dimension(d)
    _check_inball_kappa(d, kappa)
    t = 1.0 / d if t is None else t
    if not t > 0:
        raise DomainError(f"trace must be positive, got {t}")
    P = validate_projector(centering_projector(d * d), d)
    return _design_from_bloch(t, bloch_vectors_from_projector(P, kappa), kind="sim")


def mum_inball(d, kappa):
    """Full set of d+1 MUMs, ``E_bj = (I + B_bj)/d``, with contraction ``kappa``."""
    d = check_dimension(d)
    _check_inball_kappa(d, kappa)
    P = validate_projector(mub_block_projector(d), d)
    return _design_from_bloch(1.0, bloch_vectors_from_projector(P, kappa), kind="mum")


def _is_prime(n):
    return n >= 2 and all(n % p for p in range(2, int(n**0.5) + 1))


def shift_clock(d):
    omega = np.exp(2j * np.pi / d)
    x = np.roll(np.eye(d), 1, axis=0)  # X|j> = |j+1>
    z = np.diag(omega ** np.arange(d))
    return x, z


def mub_bases(d):
    """Computational basis followed by the eigenbases of ``X Z^k``, k = 0..d-1.

    Returns an array (d+1, d, d) whose [b, :, j] column is the j-th vector
    of basis b.
    """
    if not _is_prime(d):
        raise DomainError(f"mub_prime needs a prime dimension, got {d}")
    x, z = shift_clock(d)
    bases = [np.eye(d, dtype=complex)]
    for k in range(d):
        u = x @ np.linalg.matrix_power(z, k)
        tri, vecs = schur(u, output="complex")
        order = np.argsort(np.mod(np.angle(np.diag(tri)), 2 * np.pi))
        bases.append(vecs[:, order])
    return np.array(bases)


def mub_prime(d):
    """d(d+1) rank-one projectors of a full set of MUBs in prime dimension."""
    bases = mub_bases(d)
    proj = [np.outer(b[:, j], b[:, j].conj()) for b in bases for j in range(d)]
    return ConicalDesign(proj, kind="mub")


_TETRAHEDRON = np.array([[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]]) / np.sqrt(3)


def _top_eigenvector(a):
    w, v = np.linalg.eigh(a)
    vec = v[:, -1]
    nz = np.flatnonzero(np.abs(vec) > 1e-12)[0]
    return vec * (abs(vec[nz]) / vec[nz])


def sic_kets(d):
    """Normalized SIC vectors for d = 2 (tetrahedron) or d = 3 (Hesse orbit)."""
    if d == 2:
        sx = np.array([[0, 1], [1, 0]], dtype=complex)
        sy = np.array([[0, -1j], [1j, 0]])
        sz = np.diag([1.0, -1.0]).astype(complex)
        kets = [
            _top_eigenvector((np.eye(2) + n[0] * sx + n[1] * sy + n[2] * sz) / 2)
            for n in _TETRAHEDRON
        ]
    elif d == 3:
        x, z = shift_clock(3)
        omega = np.exp(2j * np.pi / 3)
        fiducial = np.array([0, 1, -1], dtype=complex) / np.sqrt(2)
        kets = [
            omega ** (p * q) * np.linalg.matrix_power(x, p) @ np.linalg.matrix_power(z, q) @ fiducial
            for p in range(3)
            for q in range(3)
        ]
    else:
        raise DomainError(f"SIC fixtures exist only for d in {{2, 3}}, got {d}")
    kets = np.array(kets)
    check_sic_kets(kets, tol=1e-12)
    return kets


def sic_fixture(d):
    """The d^2 SIC projectors for d = 2 or 3."""
    kets = sic_kets(d)
    return ConicalDesign(np.einsum("ja,jb->jab", kets, kets.conj()), kind="sic")


def scale_design(design, eta, tol=DEFAULT_TOL):
    """Contract every Bloch vector by ``eta`` keeping the traces."""
    if not 0 < eta <= 1:
        raise DomainError(f"eta must lie in (0, 1], got {eta}")
    require_design(design, tol)
    d = design.dim
    t = design.traces
    b = design.bloch_vectors
    return ConicalDesign((t / d)[:, None, None] * (np.eye(d) + eta * b), kind=design.kind)


def mum_counterexample(sim, tol=DEFAULT_TOL):
    """POVM of size d(d+1): the SIM halved, plus d copies of ``I/(2d)``.

    It is a conical design that is not a full set of MUMs.
    """
    if sim.m != sim.dim**2 or not classify(sim, tol=max(tol, 1e-9)).sim:
        raise DomainError("input must be a SIM (d^2 effects summing to the identity)")
    d = sim.dim
    extra = np.repeat((np.eye(d) / (2 * d))[None], d, axis=0)
    return ConicalDesign(np.concatenate([sim.elements / 2, extra]), kind="mum-counterexample")


def random_rotate(design, seed, tol=DEFAULT_TOL):
    """Apply a seeded random orthogonal map to all Bloch vectors.

    The rotated vectors are then shrunk by the largest common factor
    ``<= 1`` that keeps every element positive semi-definite.
    """
    require_design(design, tol)
    d = design.dim
    rng = np.random.default_rng(seed)
    rot = ops.random_orthogonal(d * d - 1, rng)
    coeffs = ops.to_coefficients(design.bloch_vectors) @ rot
    blochs = ops.from_coefficients(coeffs, d)
    lows = np.array([eigvalsh(b)[0] for b in blochs])
    eta = min(1.0, float(np.min(1.0 / np.abs(lows[lows < 0])))) if np.any(lows < 0) else 1.0
    t = design.traces
    return ConicalDesign((t / d)[:, None, None] * (np.eye(d) + eta * blochs), kind=design.kind)

"""Generalized Bloch representation ``A = (t/d)(I + B)`` with ``Tr B = 0``."""
import enum

import numpy as np

from .errors import DomainError, ZeroTraceError
from .validation import HERM_TOL, PSD_TOL, check_hermitian, eigvalsh


class Membership(enum.Enum):
    INSIDE = "inside"
    BOUNDARY = "boundary"
    OUTSIDE = "outside"


def check_bloch_vector(b, tol=HERM_TOL):
    b = check_hermitian(b, name="Bloch vector")
    d = b.shape[0]
    tr = np.trace(b).real
    if abs(tr) > tol * d * max(1.0, np.linalg.norm(b)):
        raise DomainError(f"Bloch vector must be traceless, trace is {tr:.3g}")
    return b - tr / d * np.eye(d)


def to_bloch(rho):
    """Split a positive-trace Hermitian operator into ``(t, B)``."""
    rho = check_hermitian(rho, name="rho")
    d = rho.shape[0]
    t = float(np.trace(rho).real)
    if t <= HERM_TOL * max(1.0, np.linalg.norm(rho)):
        raise ZeroTraceError(f"trace {t:.3g} is not positive")
    b = (d / t) * rho - np.eye(d)
    return t, b - np.trace(b).real / d * np.eye(d)


def from_bloch(t, b):
    if not t > 0:
        raise DomainError(f"trace must be positive, got {t}")
    b = check_bloch_vector(b)
    d = b.shape[0]
    return (t / d) * (np.eye(d) + b)


def bloch_norm(b):
    """Frobenius norm scaled by ``1/sqrt(d(d-1))``; equals 1 for pure states."""
    b = np.asarray(b)
    d = b.shape[-1]
    return float(np.linalg.norm(b) / np.sqrt(d * (d - 1)))


def body_membership(b, tol=PSD_TOL):
    """Classify ``B`` relative to the Bloch body ``{B : I + B >= 0}``."""
    b = check_bloch_vector(b)
    lo = eigvalsh(np.eye(b.shape[0]) + b)[0]
    if lo > tol:
        return Membership.INSIDE
    if lo >= -tol:
        return Membership.BOUNDARY
    return Membership.OUTSIDE


def in_body(b, tol=PSD_TOL):
    return body_membership(b, tol) is not Membership.OUTSIDE


def kappa_max_direction(b_hat, tol=1e-9):
    """Largest ``kappa`` with ``(I + kappa*b_hat)/d`` positive semi-definite.

    ``b_hat`` must have unit Bloch norm; the result lies in ``[1/(d-1), 1]``.
    """
    b_hat = check_bloch_vector(b_hat)
    n = bloch_norm(b_hat)
    if n == 0:
        raise DomainError("direction is the zero vector")
    if abs(n - 1) > tol:
        raise DomainError(f"direction must have unit Bloch norm, got {n:.12g}")
    return 1.0 / abs(eigvalsh(b_hat)[0])

"""Input validation helpers shared by every module.

Tolerances follow one convention throughout: residuals are Frobenius
norms compared against ``tol * max(1, ||target||_F)``.
"""
import numpy as np

from .errors import DimensionError, DomainError, NumericalError

HERM_TOL = 1e-10
PSD_TOL = 1e-9
DEFAULT_TOL = 1e-9


def frob(a):
    return float(np.linalg.norm(a))


def relative_residual(value, target):
    """Frobenius distance from ``value`` to ``target``, scaled by max(1, ||target||)."""
    return frob(np.asarray(value) - np.asarray(target)) / max(1.0, frob(target))


def check_dimension(d, minimum=2):
    if int(d) != d or d < minimum:
        raise DimensionError(f"dimension must be an integer >= {minimum}, got {d!r}")
    return int(d)


def check_square(a, name="matrix"):
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionError(f"{name} must be a square matrix, got shape {a.shape}")
    return a


def check_hermitian(a, tol=HERM_TOL, name="operator"):
    """Return the symmetrized ``(a + a^H)/2`` or raise if ``a`` is not self-adjoint.

    Accepts anything ``np.asarray`` understands. The result is a complex
    array.
    """
    a = check_square(np.asarray(a, dtype=complex), name)
    if not np.all(np.isfinite(a)):
        raise DomainError(f"{name} has non-finite entries")
    skew = frob(a - a.conj().T)
    if skew > 2 * tol * max(1.0, frob(a)):
        raise DomainError(f"{name} is not Hermitian (anti-Hermitian part {skew / 2:.3g})")
    return (a + a.conj().T) / 2


def check_operator_stack(ops, tol=HERM_TOL, name="operators"):
    """Validate a sequence of same-size Hermitian matrices into an (m, d, d) array."""
    ops = np.asarray(ops, dtype=complex)
    if ops.ndim != 3 or ops.shape[1] != ops.shape[2]:
        raise DimensionError(f"{name} must have shape (m, d, d), got {ops.shape}")
    if ops.shape[0] < 1:
        raise DomainError(f"{name} must be non-empty")
    check_dimension(ops.shape[1])
    return np.stack([check_hermitian(a, tol, f"{name}[{j}]") for j, a in enumerate(ops)])


def eigvalsh(a):
    try:
        w = np.linalg.eigvalsh(a)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(str(exc)) from exc
    if not np.all(np.isfinite(w)):
        raise NumericalError("eigensolver returned non-finite eigenvalues")
    return w


def eigh(a):
    try:
        w, v = np.linalg.eigh(a)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(str(exc)) from exc
    if not np.all(np.isfinite(w)):
        raise NumericalError("eigensolver returned non-finite eigenvalues")
    return w, v

"""Linear algebra on the operator space of a d-dimensional Hilbert space.

Conventions (used by every module):

* bipartite index ``(j1, j2) -> d*j1 + j2``, first factor slow (``np.kron``);
* vectorization ``|e_j><e_k| -> d*j + k`` (row-major ``reshape(-1)``);
* ``|A>><<B|`` is the superoperator ``X -> A Tr(B^H X)``, i.e.
  ``outer(vec(A), conj(vec(B)))``;
* complex conjugation and transposition always refer to the computational
  basis.
"""
from functools import lru_cache

import numpy as np

from .errors import DimensionError
from .validation import (
    HERM_TOL,
    PSD_TOL,
    check_dimension,
    check_hermitian,
    check_square,
    eigvalsh,
)


def hs_inner(a, b):
    """Hilbert-Schmidt inner product ``Tr(a b)`` of two Hermitian operators."""
    a = check_hermitian(a, name="a")
    b = check_hermitian(b, name="b")
    if a.shape != b.shape:
        raise DimensionError(f"dimension mismatch: {a.shape[0]} vs {b.shape[0]}")
    # Tr(ab) = sum_ij a_ij b_ji, and b_ji = conj(b_ij) for Hermitian b
    return float(np.real(np.vdot(b, a)))


@lru_cache(maxsize=None)
def _gell_mann(d):
    basis = []
    for j in range(d):
        for k in range(j + 1, d):
            m = np.zeros((d, d), dtype=complex)
            m[j, k] = m[k, j] = 1 / np.sqrt(2)
            basis.append(m)
    for j in range(d):
        for k in range(j + 1, d):
            m = np.zeros((d, d), dtype=complex)
            m[j, k] = -1j / np.sqrt(2)
            m[k, j] = 1j / np.sqrt(2)
            basis.append(m)
    for l in range(1, d):
        diag = np.zeros(d)
        diag[:l] = 1.0
        diag[l] = -l
        basis.append(np.diag(diag / np.sqrt(l * (l + 1))).astype(complex))
    out = np.array(basis)
    out.flags.writeable = False
    return out


def gell_mann_basis(d):
    """Orthonormal basis of the traceless Hermitian operators, shape (d^2-1, d, d).

    Ordering: symmetric off-diagonal pairs, antisymmetric off-diagonal
    pairs, then the diagonal operators; each group lexicographic in
    (row, column). Every element has unit Hilbert-Schmidt norm, so at d=2
    the basis is ``(sigma_x, sigma_y, sigma_z) / sqrt(2)``.
    """
    return _gell_mann(check_dimension(d)).copy()


def to_coefficients(b):
    """Real coordinates of traceless Hermitian operator(s) in the Gell-Mann basis.

    Accepts a single (d, d) operator or a stack (m, d, d).
    """
    b = np.asarray(b, dtype=complex)
    basis = _gell_mann(b.shape[-1])
    return np.real(np.einsum("aij,...ji->...a", basis, b))


def from_coefficients(c, d):
    """Inverse of :func:`to_coefficients`."""
    return np.einsum("...a,aij->...ij", np.asarray(c, dtype=float), _gell_mann(d))


def min_eigenvalue(a):
    return float(eigvalsh(check_hermitian(a))[0])


def is_psd(a, tol=PSD_TOL):
    a = check_hermitian(a)
    return min_eigenvalue(a) >= -tol * max(1.0, np.linalg.norm(a))


def swap_operator(d):
    d = check_dimension(d)
    w = np.zeros((d * d, d * d))
    for j in range(d):
        for k in range(d):
            w[d * k + j, d * j + k] = 1.0
    return w.astype(complex)


def maximally_entangled(d):
    """Projector onto ``(1/sqrt(d)) sum_j |e_j>|e_j>``."""
    d = check_dimension(d)
    phi = np.eye(d).reshape(-1) / np.sqrt(d)
    return np.outer(phi, phi).astype(complex)


def sym_asym_projectors(d):
    """Return ``(Pi_sym, Pi_asym, W, Phi_plus)`` on the two-copy space."""
    d = check_dimension(d)
    w = swap_operator(d)
    eye = np.eye(d * d)
    return (eye + w) / 2, (eye - w) / 2, w, maximally_entangled(d)


def _bipartite_dim(x):
    x = check_square(x, "bipartite operator")
    d = int(round(np.sqrt(x.shape[0])))
    if d * d != x.shape[0]:
        raise DimensionError(f"bipartite operator size {x.shape[0]} is not a square")
    return x, d


def partial_transpose(x):
    """Transpose the second tensor factor. Pure entry permutation."""
    x, d = _bipartite_dim(np.asarray(x))
    return x.reshape(d, d, d, d).transpose(0, 3, 2, 1).reshape(d * d, d * d)


def conjugate(a):
    """Entrywise complex conjugate in the computational basis."""
    return np.conj(np.asarray(a))


def vec(a):
    return np.asarray(a).reshape(-1)


def unvec(v):
    v = np.asarray(v)
    d = int(round(np.sqrt(v.size)))
    return v.reshape(d, d)


def ket_bra_superop(a, b):
    """Matrix of ``|a>><<b|`` acting on vectorized operators."""
    return np.outer(vec(a), np.conj(vec(b)))


def identity_superop(d):
    return np.eye(d * d, dtype=complex)


def transpose_superop(d):
    """Matrix of the transpose map ``|e_j><e_k| -> |e_k><e_j|``."""
    # with row-major vectorization this is the same permutation as the swap
    return swap_operator(d)


def apply_superop(s, a):
    a = np.asarray(a)
    return unvec(s @ vec(a))


def choi_inverse(x):
    """Superoperator ``J^{-1}(x)`` for the Choi map
    ``J(L) = (1/d) sum_jk L(|j><k|) (x) |j><k|``.

    Entry-wise ``L(|j><k|)_{ab} = d * x[(a, j), (b, k)]``.
    """
    x, d = _bipartite_dim(np.asarray(x, dtype=complex))
    return d * x.reshape(d, d, d, d).transpose(0, 2, 1, 3).reshape(d * d, d * d)


def random_hermitian(d, rng):
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return (g + g.conj().T) / 2


def haar_unitary(d, rng):
    """Haar-random unitary from the QR decomposition of a complex Gaussian."""
    g = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(g)
    ph = np.diag(r) / np.abs(np.diag(r))
    return q * ph


def random_orthogonal(n, rng):
    """Haar-random orthogonal matrix, QR with sign-fixed diagonal."""
    q, r = np.linalg.qr(rng.standard_normal((n, n)))
    return q * np.sign(np.diag(r))


__all__ = [
    "HERM_TOL",
    "hs_inner",
    "gell_mann_basis",
    "to_coefficients",
    "from_coefficients",
    "min_eigenvalue",
    "is_psd",
    "swap_operator",
    "maximally_entangled",
    "sym_asym_projectors",
    "partial_transpose",
    "conjugate",
    "vec",
    "unvec",
    "ket_bra_superop",
    "identity_superop",
    "transpose_superop",
    "apply_superop",
    "choi_inverse",
    "random_hermitian",
    "haar_unitary",
    "random_orthogonal",
]

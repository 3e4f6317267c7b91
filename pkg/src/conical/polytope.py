"""Bloch-body polytopes of homogeneous conical designs.

The Bloch vectors of a homogeneous design have Gram matrix ``lambda * P``
where ``P`` is an m x m projector of rank d^2-1 with zero row sums and
constant diagonal ``(d^2-1)/m``. This module validates such projectors,
realizes them as Bloch vectors, and searches for the largest contraction
parameter a given projector admits inside the Bloch body.
"""
from dataclasses import dataclass, field

import numpy as np
from joblib import Parallel, delayed

from . import operators as ops
from .bloch import body_membership, Membership, check_bloch_vector
from .design import classify, require_design
from .errors import DomainError, InvalidProjectorError, NumericalError
from .validation import DEFAULT_TOL, check_dimension, eigh, eigvalsh, frob


@dataclass(frozen=True)
class DesignProjector:
    m: int
    d: int
    matrix: np.ndarray

    @property
    def rank(self):
        return self.d * self.d - 1

    def to_dict(self):
        return {"m": self.m, "dimension": self.d, "matrix": self.matrix.tolist()}


def projector_violations(P, d, tol=DEFAULT_TOL):
    """List every violated projector condition (empty when ``P`` is valid)."""
    P = np.asarray(P, dtype=float)
    d = check_dimension(d)
    problems = []
    if P.ndim != 2 or P.shape[0] != P.shape[1]:
        return [f"matrix must be square, got shape {P.shape}"]
    m = P.shape[0]
    n = d * d - 1
    scale = max(1.0, frob(P))
    if m < d * d:
        problems.append(f"cardinality m={m} is below d^2={d * d}")
    if frob(P - P.T) > tol * scale:
        problems.append("symmetry condition violated")
    if frob(P @ P - P) > tol * scale:
        problems.append("idempotence condition violated")
    ev = eigvalsh((P + P.T) / 2)
    rank = int(np.sum(ev > 0.5))
    if rank != n:
        problems.append(f"rank condition violated: rank {rank}, expected {n}")
    rows = np.flatnonzero(np.abs(P.sum(axis=1)) > tol * scale)
    if rows.size:
        problems.append(f"row-sum condition violated at rows {rows.tolist()}")
    diag = n / m
    bad_diag = np.flatnonzero(np.abs(np.diag(P) - diag) > tol * scale)
    if bad_diag.size:
        problems.append(f"diagonal condition violated at rows {bad_diag.tolist()} (expected {diag:.12g})")
    off = P - np.diag(np.diag(P))
    np.fill_diagonal(off, -np.inf)
    bad_off = np.argwhere(off > diag + tol * scale)
    if bad_off.size:
        problems.append(f"off-diagonal bound violated at entries {bad_off.tolist()[:10]}")
    return problems


def validate_projector(P, d, tol=DEFAULT_TOL):
    problems = projector_violations(P, d, tol)
    if problems:
        raise InvalidProjectorError(problems)
    P = np.asarray(P, dtype=float)
    P = (P + P.T) / 2
    P.flags.writeable = False
    return DesignProjector(m=P.shape[0], d=int(d), matrix=P)


def infer_dimension(P):
    """Dimension d with ``trace(P) = d^2 - 1``."""
    tr = float(np.trace(np.asarray(P, dtype=float)))
    d = int(round(np.sqrt(tr + 1)))
    if d < 2 or abs(d * d - 1 - tr) > 1e-6:
        raise InvalidProjectorError([f"trace {tr:.6g} is not of the form d^2-1"])
    return d


def centering_projector(m):
    """``I - J/m``: the regular-simplex projector (valid when m = d^2)."""
    return np.eye(m) - np.full((m, m), 1.0 / m)


def mub_block_projector(d):
    """Block-diagonal sum of d+1 copies of ``I_d - J_d/d``."""
    d = check_dimension(d)
    block = centering_projector(d)
    return np.kron(np.eye(d + 1), block)


def projector_frame(P):
    """Orthonormal columns ``u`` (m x (d^2-1)) with ``P = u u^T``.

    Eigenvectors of eigenvalue 1, each with its first non-negligible
    component made positive.
    """
    P = P.matrix if isinstance(P, DesignProjector) else np.asarray(P, dtype=float)
    w, v = eigh((P + P.T) / 2)
    u = v[:, w > 0.5]
    for a in range(u.shape[1]):
        nz = np.flatnonzero(np.abs(u[:, a]) > 1e-12)
        if nz.size and u[nz[0], a] < 0:
            u[:, a] = -u[:, a]
    return u


def bloch_vectors_from_projector(P, kappa, rotation=None):
    """Bloch vectors with Gram ``(m d kappa^2/(d+1)) P`` and Bloch norm ``kappa``.

    ``rotation`` is an optional orthogonal matrix acting on the Gell-Mann
    coordinates. The vectors are not guaranteed to lie in the Bloch body
    unless ``kappa <= 1/(d-1)``.
    """
    if not isinstance(P, DesignProjector):
        raise TypeError("P must be a validated DesignProjector")
    d, m = P.d, P.m
    u = projector_frame(P)
    if rotation is not None:
        u = u @ rotation
    c = kappa * np.sqrt(m * d / (d + 1))
    return ops.from_coefficients(c * u, d)


def gram_matrix(bloch_vectors):
    b = np.asarray(bloch_vectors)
    return np.real(np.einsum("jab,kba->jk", b, b))


def gram_projector(design, tol=DEFAULT_TOL):
    """Return ``(lambda, P)`` with ``G = lambda P`` for a homogeneous design."""
    require_design(design, tol)
    if not classify(design, tol=max(tol, 1e-9)).homogeneous:
        raise DomainError("design is not homogeneous")
    d = design.dim
    b = design.bloch_vectors
    g = gram_matrix(b)
    ev = eigvalsh(g)
    nonzero = ev[ev > 1e-8 * ev[-1]]
    lam = float(np.mean(nonzero))
    return lam, validate_projector(g / lam, d, tol=max(tol, 1e-9))


@dataclass
class OneDesignCheck:
    is_one_design: bool
    lam: float
    residuals: dict


def verify_bloch_one_design(vectors, tol=DEFAULT_TOL):
    """Equal norms, zero centroid and a tight frame ``sum |B><B| = lambda Pi_B``."""
    vectors = np.asarray([check_bloch_vector(b) for b in vectors])
    for j, b in enumerate(vectors):
        if body_membership(b) is Membership.OUTSIDE:
            raise DomainError(f"vector {j} lies outside the Bloch body")
    d = vectors.shape[1]
    n = d * d - 1
    c = ops.to_coefficients(vectors)
    norms = np.linalg.norm(c, axis=1)
    mean_norm = float(np.mean(norms))
    if mean_norm == 0:
        return OneDesignCheck(False, 0.0, {"norms": 0.0, "centre": 0.0, "frame": np.inf})
    frame = c.T @ c
    lam = float(np.trace(frame) / n)
    res = {
        "norms": float(np.max(np.abs(norms - mean_norm)) / mean_norm),
        "centre": float(np.linalg.norm(c.sum(axis=0)) / (np.sqrt(len(c)) * mean_norm)),
        "frame": frob(frame - lam * np.eye(n)) / frob(lam * np.eye(n)),
    }
    ok = lam > 0 and all(r <= tol for r in res.values())
    return OneDesignCheck(bool(ok), lam, res)


@dataclass
class SearchResult:
    best_kappa: float
    witness: np.ndarray
    restarts_run: int
    iterations: list
    seed: int
    d: int
    m: int
    residual: float = 0.0
    rotation: np.ndarray = field(default=None, repr=False)

    @property
    def floor(self):
        return 1.0 / (self.d - 1)

    def to_dict(self):
        return {
            "best_kappa": float(self.best_kappa),
            "floor": self.floor,
            "dimension": self.d,
            "m": self.m,
            "seed": self.seed,
            "restarts_run": self.restarts_run,
            "residual": float(self.residual),
            "iterations": [[float(x) for x in trace] for trace in self.iterations],
            "witness": ops.to_coefficients(self.witness).tolist(),
        }


def _direction_scale(d, m):
    # unit Bloch norm: Frobenius norm sqrt(d(d-1)), while sum_a u_aj^2 = (d^2-1)/m
    return np.sqrt(d * m / (d + 1))


def _directions(u, rot, s, basis):
    return np.einsum("ja,ab->jb", s * (u @ rot), basis.reshape(basis.shape[0], -1)).reshape(
        u.shape[0], basis.shape[1], basis.shape[2]
    )


def search_objective(P, rotation):
    """``min_j kappa_max(B_j)`` for the unit directions realizing ``P`` under ``rotation``."""
    u = projector_frame(P)
    basis = ops.gell_mann_basis(P.d)
    dirs = _directions(u, rotation, _direction_scale(P.d, P.m), basis)
    lo = np.linalg.eigvalsh(dirs)[:, 0]
    return float(np.min(1.0 / np.abs(lo)))


def _polar(x):
    a, _, bt = np.linalg.svd(x)
    return a @ bt


def _run_restart(u, basis, d, rng, max_iters, step0, softmin):
    n = basis.shape[0]
    s = _direction_scale(d, u.shape[0])
    flat = basis.reshape(n, -1)
    rot = ops.random_orthogonal(n, rng)
    step = step0

    def evaluate(r):
        dirs = (s * (u @ r) @ flat).reshape(-1, d, d)
        w, v = np.linalg.eigh(dirs)
        if not np.all(np.isfinite(w)):
            raise NumericalError("non-finite eigenvalues in search objective")
        return w, v

    w, v = evaluate(rot)
    value = float(np.min(1.0 / np.abs(w[:, 0])))
    best, best_rot = value, rot.copy()
    trace = [best]
    stall = since_halving = 0
    for _ in range(max_iters):
        lo = w[:, 0]
        if softmin:
            z = (lo - lo.min()) / softmin
            weights = np.exp(-z)
            weights /= weights.sum()
            worst = [int(j) for j in np.flatnonzero(weights > 1e-12)]
        else:
            weights = None
            worst = [int(np.argmin(lo))]  # argmin returns the lowest index at ties
        grad = np.zeros((n, n))
        this_step = step
        for j in worst:
            vec = v[j, :, 0]
            # derivative of the minimal eigenvalue w.r.t. the Gell-Mann coordinates
            dw = np.real(np.einsum("a,bac,c->b", vec.conj(), basis, vec))
            coeff = 1.0 if weights is None else weights[j]
            grad += coeff * s * np.outer(u[j], dw)
            if weights is None and d > 2 and w[j, 1] - w[j, 0] < 1e-9:
                this_step = step / 2
        gnorm = np.linalg.norm(grad)
        if gnorm == 0:
            break
        rot = _polar(rot + this_step * grad / gnorm)
        w, v = evaluate(rot)
        value = float(np.min(1.0 / np.abs(w[:, 0])))
        if value > best + 1e-15:
            best, best_rot = value, rot.copy()
            stall = since_halving = 0
        else:
            stall += 1
            since_halving += 1
            if since_halving >= 10:
                step /= 2
                since_halving = 0
            if stall >= 50:
                trace.append(best)
                break
        trace.append(best)
    return min(best, 1.0), best_rot, trace


def cp_search(P, restarts=32, max_iters=500, seed=7, step0=0.1, softmin=None, n_jobs=None):
    """Certified lower bound on the largest contraction ``c_P`` realizable for ``P``.

    Each restart draws a random orthogonal frame for the Gell-Mann
    coordinates and ascends ``min_j kappa_max(B_j)`` by subgradient steps
    on the worst vertex, retracting to the orthogonal group by polar
    decomposition. ``softmin`` (a temperature) replaces the worst-vertex
    subgradient by a softmin-weighted average. Restarts are independent
    and seeded from ``seed``; the result does not depend on ``n_jobs``.
    """
    if not isinstance(P, DesignProjector):
        P = validate_projector(P, infer_dimension(P))
    if restarts < 1:
        raise DomainError("restarts must be >= 1")
    if max_iters < 0:
        raise DomainError("max_iters must be >= 0")
    d, m = P.d, P.m
    u = projector_frame(P)
    basis = ops.gell_mann_basis(d)
    children = np.random.SeedSequence(seed).spawn(restarts)
    runs = Parallel(n_jobs=n_jobs, prefer="threads")(
        delayed(_run_restart)(u, basis, d, np.random.default_rng(ss), max_iters, step0, softmin)
        for ss in children
    )
    best_index = int(np.argmax([r[0] for r in runs]))
    best_kappa, best_rot, _ = runs[best_index]
    if not np.isfinite(best_kappa):
        raise NumericalError("search produced a non-finite contraction parameter")
    witness = bloch_vectors_from_projector(P, best_kappa, rotation=best_rot)
    lam = m * d * best_kappa**2 / (d + 1)
    residual = frob(gram_matrix(witness) - lam * P.matrix) / max(1.0, frob(lam * P.matrix))
    return SearchResult(
        best_kappa=float(best_kappa),
        witness=witness,
        restarts_run=restarts,
        iterations=[r[2] for r in runs],
        seed=seed,
        d=d,
        m=m,
        residual=residual,
        rotation=best_rot,
    )

"""Conical 2-designs: verification, derived parameters, expansions, classification.

A family ``A_1..A_m`` of positive semi-definite operators is a conical
design when ``sum_j A_j (x) A_j = k_s Pi_sym + k_a Pi_asym`` with
``k_s > k_a``. :func:`verify` checks that statement in four equivalent
matrix forms plus a sampled unitary-commutation test.
"""
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

import numpy as np

from . import operators as ops
from .bloch import bloch_norm
from .errors import DimensionError, DomainError, NotADesignError
from .validation import (
    DEFAULT_TOL,
    HERM_TOL,
    PSD_TOL,
    check_hermitian,
    check_operator_stack,
    eigvalsh,
    frob,
    relative_residual,
)


class ConicalDesign:
    """An ordered family of non-zero positive semi-definite d x d operators.

    Being a family is all that is enforced here; whether it is actually a
    design is the job of :func:`verify`. Duplicates are allowed.
    """

    def __init__(self, elements, kind=None):
        elements = check_operator_stack(elements, name="elements")
        for j, a in enumerate(elements):
            norm = np.linalg.norm(a)
            if norm <= HERM_TOL:
                raise DomainError(f"element {j} is zero")
            lo = eigvalsh(a)[0]
            if lo < -PSD_TOL * max(1.0, norm):
                raise DomainError(f"element {j} is not positive semi-definite (min eigenvalue {lo:.3g})")
        elements.flags.writeable = False
        self._elements = elements
        self.kind = kind

    @property
    def elements(self):
        return self._elements

    @property
    def dim(self):
        return self._elements.shape[1]

    @property
    def m(self):
        return self._elements.shape[0]

    def __len__(self):
        return self.m

    def __iter__(self):
        return iter(self._elements)

    def __getitem__(self, j):
        return self._elements[j]

    @property
    def traces(self):
        return np.real(np.trace(self._elements, axis1=1, axis2=2))

    @property
    def bloch_vectors(self):
        d = self.dim
        return (d / self.traces)[:, None, None] * self._elements - np.eye(d)

    def __repr__(self):
        kind = f", kind={self.kind!r}" if self.kind else ""
        return f"ConicalDesign(d={self.dim}, m={self.m}{kind})"


def _as_stack(design):
    if isinstance(design, ConicalDesign):
        return design.elements
    return check_operator_stack(design, name="elements")


def _fit(s, basis):
    """Least-squares coefficients of ``s`` in span(basis) and the relative residual."""
    gram = np.array([[np.vdot(b1, b2) for b2 in basis] for b1 in basis])
    rhs = np.array([np.vdot(b, s) for b in basis])
    coef = np.real(np.linalg.solve(gram, rhs))
    fitted = sum(c * b for c, b in zip(coef, basis))
    scale = frob(s)
    res = frob(s - fitted) / scale if scale > 0 else np.inf
    return coef, res


@dataclass(frozen=True)
class DesignParameters:
    k_s: float
    k_a: float
    k_plus: float
    k_minus: float
    t: float
    kappa: float
    traces: np.ndarray
    kappas: np.ndarray

    @property
    def per_element(self):
        return list(zip(self.traces.tolist(), self.kappas.tolist()))


@dataclass
class VerificationReport:
    is_design: bool
    residuals: dict
    fitted: dict
    parameters: Optional[DesignParameters]
    spanning: bool
    cardinality_ok: bool
    psd_ok: bool
    condition_ok: dict = field(default_factory=dict)

    def to_dict(self):
        out = {
            "is_design": bool(self.is_design),
            "residuals": {k: float(v) for k, v in self.residuals.items()},
            "fitted": {k: float(v) for k, v in self.fitted.items()},
            "spanning": bool(self.spanning),
            "cardinality_ok": bool(self.cardinality_ok),
            "psd_ok": bool(self.psd_ok),
        }
        if self.parameters is not None:
            p = self.parameters
            out["parameters"] = {
                "k_s": p.k_s,
                "k_a": p.k_a,
                "k_plus": p.k_plus,
                "k_minus": p.k_minus,
                "t": p.t,
                "kappa": p.kappa,
            }
        return out


def two_copy_sum(elements):
    return sum(np.kron(a, a) for a in elements)


def frame_superop(elements):
    """``sum_j |A_j>><<A_j|`` as a d^2 x d^2 matrix."""
    v = elements.reshape(len(elements), -1)
    return v.T @ v.conj()


def _parameters_from_stack(elements):
    m, d, _ = elements.shape
    traces = np.real(np.trace(elements, axis1=1, axis2=2))
    blochs = (d / traces)[:, None, None] * elements - np.eye(d)
    kappas = np.linalg.norm(blochs, axis=(1, 2)) / np.sqrt(d * (d - 1))
    t = np.sqrt(np.mean(traces**2))
    kappa = np.sqrt(np.sum(traces**2 * kappas**2) / (m * t**2))
    k_s = m * t**2 / d**2 * (1 + (d - 1) * kappa**2 / (d + 1))
    k_a = m * t**2 * (1 - kappa**2) / d**2
    return DesignParameters(
        k_s=float(k_s),
        k_a=float(k_a),
        k_plus=float((k_s + k_a) / 2),
        k_minus=float((k_s - k_a) / 2),
        t=float(t),
        kappa=float(kappa),
        traces=traces,
        kappas=kappas,
    )


def verify(design, tol=DEFAULT_TOL, unitary_samples=20, seed=0):
    """Check every equivalent form of the conical-design condition.

    ``design`` may be a :class:`ConicalDesign` or any (m, d, d) array of
    Hermitian matrices (non-PSD families are reported, not rejected).
    Residuals are Frobenius distances to the best fit in each form,
    relative to the norm of the summed operator, so they are invariant
    under rescaling the family. The sampled commutation test is reported
    but does not enter the verdict.
    """
    if not tol > 0:
        raise DomainError("tol must be positive")
    elements = _as_stack(design)
    m, d, _ = elements.shape
    pi_s, pi_a, w, phi = ops.sym_asym_projectors(d)
    eye_d = np.eye(d)
    eye_op = ops.ket_bra_superop(eye_d, eye_d)
    residuals, fitted = {}, {}

    s2 = two_copy_sum(elements)
    (k_s, k_a), residuals["cond_ii"] = _fit(s2, [pi_s, pi_a])
    fitted["k_s"], fitted["k_a"] = k_s, k_a

    s3 = sum(np.kron(a, a.conj()) for a in elements)
    (kp3, km3), residuals["cond_iii"] = _fit(s3, [np.eye(d * d), d * phi])

    v = elements.reshape(m, -1)
    s4 = v.T @ v  # sum |A_j>><<A_j^*|
    (kp4, km4), residuals["cond_iv"] = _fit(s4, [eye_op, ops.transpose_superop(d)])

    s5 = frame_superop(elements)
    (kp5, km5), residuals["cond_v"] = _fit(s5, [eye_op, ops.identity_superop(d)])
    fitted.update(
        k_plus_iii=kp3, k_minus_iii=km3,
        k_plus_iv=kp4, k_minus_iv=km4,
        k_plus_v=kp5, k_minus_v=km5,
    )

    if unitary_samples:
        rng = np.random.default_rng(seed)
        scale = frob(s2)
        worst = 0.0
        for _ in range(unitary_samples):
            u = ops.haar_unitary(d, rng)
            uu = np.kron(u, u)
            worst = max(worst, frob(s2 @ uu - uu @ s2) / scale if scale else np.inf)
        residuals["cond_i_sampled"] = worst

    condition_ok = {k: bool(r <= tol) for k, r in residuals.items()}
    psd_ok = all(
        eigvalsh(a)[0] >= -PSD_TOL * max(1.0, np.linalg.norm(a)) and np.linalg.norm(a) > HERM_TOL
        for a in elements
    )
    gram_ev = eigvalsh(np.real(v.conj() @ v.T))
    spanning = int(np.sum(gram_ev > 1e-9 * max(gram_ev[-1], 1e-300))) == d * d
    cardinality_ok = m >= d * d
    k_minus = (k_s - k_a) / 2
    k_plus = (k_s + k_a) / 2
    coeffs_ok = k_minus > tol * max(k_plus, 1e-300) and k_a >= -tol * max(k_s, 1e-300)
    is_design = bool(
        psd_ok
        and cardinality_ok
        and spanning
        and coeffs_ok
        and all(condition_ok[c] for c in ("cond_ii", "cond_iii", "cond_iv", "cond_v"))
    )
    params = None
    if is_design:
        params = _parameters_from_stack(elements)
    return VerificationReport(
        is_design=is_design,
        residuals=residuals,
        fitted=fitted,
        parameters=params,
        spanning=bool(spanning),
        cardinality_ok=bool(cardinality_ok),
        psd_ok=bool(psd_ok),
        condition_ok=condition_ok,
    )


def require_design(design, tol=DEFAULT_TOL):
    report = verify(design, tol=tol, unitary_samples=0)
    if not report.is_design:
        failed = [k for k, ok in report.condition_ok.items() if not ok]
        raise NotADesignError(
            f"family is not a conical design (failed: {failed or 'spanning/cardinality/positivity'})"
        )
    return report


def parameters(design, tol=DEFAULT_TOL):
    """Traces, contraction parameters and the constants k_s, k_a, k_+, k_-.

    ``t`` is the rms trace and ``kappa`` the trace-weighted rms Bloch norm;
    ``k_s`` and ``k_a`` follow from them in closed form.
    """
    return require_design(design, tol).parameters


def bloch_identity_residuals(design):
    """Residuals of ``sum t_j^2 B_j = 0`` and ``sum t_j^2 |B_j>><<B_j| = c Pi_B``.

    ``c = m d t^2 kappa^2 / (d+1)``. Both are relative Frobenius residuals.
    """
    elements = _as_stack(design)
    m, d, _ = elements.shape
    p = _parameters_from_stack(elements)
    blochs = (d / p.traces)[:, None, None] * elements - np.eye(d)
    w = p.traces**2
    centre = np.einsum("j,jab->ab", w, blochs)
    vb = blochs.reshape(m, -1)
    frame = (vb.T * w) @ vb.conj()
    pi_b = ops.identity_superop(d) - ops.ket_bra_superop(np.eye(d), np.eye(d)) / d
    target = m * d * p.t**2 * p.kappa**2 / (d + 1) * pi_b
    scale = max(frob(target), 1e-300)
    return frob(centre) / scale, frob(frame - target) / scale


class Expansion(NamedTuple):
    coefficients: np.ndarray
    unique: bool


def expansion_coefficients(elements, k_plus, k_minus, operators):
    """Coefficients for one or many operators; shape (..., m)."""
    d = elements.shape[1]
    traces = np.real(np.trace(elements, axis1=1, axis2=2))
    operators = np.asarray(operators, dtype=complex)
    overlaps = np.real(np.einsum("jab,...ba->...j", elements, operators))
    tr_l = np.real(np.trace(operators, axis1=-2, axis2=-1))
    corr = k_plus * np.multiply.outer(tr_l, traces) / (d * k_plus + k_minus)
    return (overlaps - corr) / k_minus


def expand_operator(design, operator, tol=DEFAULT_TOL):
    """Coefficients ``c_j`` with ``sum_j c_j A_j = L``.

    The expansion is unique only when ``m = d^2``.
    """
    elements = _as_stack(design)
    p = parameters(design, tol)
    operator = check_hermitian(operator, name="L")
    if operator.shape[0] != elements.shape[1]:
        raise DimensionError("operator dimension does not match the design")
    coef = expansion_coefficients(elements, p.k_plus, p.k_minus, operator)
    return Expansion(coef, len(elements) == elements.shape[1] ** 2)


def reconstruct(design, coefficients):
    return np.einsum("...j,jab->...ab", coefficients, _as_stack(design))


def induced_povm(design, tol=DEFAULT_TOL):
    """Rescale to ``E_j = d t_j A_j / (m t^2)``, which always sums to the identity."""
    elements = _as_stack(design)
    p = parameters(design, tol)
    m, d, _ = elements.shape
    scale = d * p.traces / (m * p.t**2)
    return ConicalDesign(scale[:, None, None] * elements, kind="povm")


def sim_gram_law(d, kappa):
    """Overlap matrix ``Tr(E_j E_k)`` of a SIM with contraction ``kappa``."""
    n = d * d
    return (d * d * kappa**2 * np.eye(n) + (d + 1 - kappa**2)) / (d**3 * (d + 1))


def contiguous_groups(m, d):
    if m % d:
        raise DomainError(f"cannot split {m} elements into blocks of {d}")
    return [list(range(b * d, (b + 1) * d)) for b in range(m // d)]


def mum_residual(design, groups=None):
    """Largest deviation from the mutually-unbiased overlap law.

    The family is first rescaled so that it sums to ``(m/d) I``; then each
    group must sum to ``I``, overlaps within a group must equal
    ``kappa^2 delta + (1 - kappa^2)/d`` and overlaps across groups ``1/d``.
    """
    elements = _as_stack(design)
    m, d, _ = elements.shape
    if groups is None:
        groups = contiguous_groups(m, d)
    groups = [list(g) for g in groups]
    flat = sorted(i for g in groups for i in g)
    if flat != list(range(m)) or any(len(g) != d for g in groups):
        raise DomainError("groups must partition the elements into blocks of size d")
    r = len(groups)
    total = np.real(np.trace(elements.sum(axis=0)))
    e = elements * (r * d / total)
    label = np.empty(m, dtype=int)
    for b, g in enumerate(groups):
        label[g] = b
    gram = np.real(np.einsum("jab,kba->jk", e, e))
    traces = np.real(np.trace(e, axis1=1, axis2=2))
    blochs = (d / traces)[:, None, None] * e - np.eye(d)
    kappa2 = np.mean(np.linalg.norm(blochs, axis=(1, 2)) ** 2) / (d * (d - 1))
    same = label[:, None] == label[None, :]
    law = np.where(same, kappa2 * np.eye(m) + (1 - kappa2) / d, 1 / d)
    worst = float(np.max(np.abs(gram - law)))
    for g in groups:
        worst = max(worst, float(np.max(np.abs(e[g].sum(axis=0) - np.eye(d)))))
    return worst


@dataclass(frozen=True)
class Classification:
    homogeneous: bool
    weighted_projective: bool
    projective: bool
    povm: bool
    sim: bool
    mum_compatible: bool
    sim_residual: float
    mum_residual: float


def classify(design, groups=None, tol=DEFAULT_TOL):
    """Flag the special families a verified design belongs to.

    ``groups`` is the MUM grouping to test (default: contiguous blocks of
    size d). Tolerances are relative: traces against ``t``, the rank-one
    test ``k_a`` against ``k_s``.
    """
    elements = _as_stack(design)
    p = parameters(design, tol)
    m, d, _ = elements.shape
    homogeneous = bool(
        np.max(np.abs(p.traces - p.t)) <= tol * p.t and np.max(np.abs(p.kappas - p.kappa)) <= tol
    )
    weighted_projective = bool(p.k_a <= tol * p.k_s)
    projective = bool(homogeneous and abs(p.t - 1) <= tol and abs(p.kappa - 1) <= tol)
    povm = bool(np.max(np.abs(elements.sum(axis=0) - np.eye(d))) <= tol)
    sim_res = np.inf
    if m == d * d:
        gram = np.real(np.einsum("jab,kba->jk", elements, elements))
        sim_res = float(np.max(np.abs(gram - sim_gram_law(d, p.kappa))))
    sim = bool(povm and homogeneous and sim_res <= tol)
    mum_res = np.inf
    if m % d == 0 or groups is not None:
        mum_res = mum_residual(elements, groups)
    return Classification(
        homogeneous=homogeneous,
        weighted_projective=weighted_projective,
        projective=projective,
        povm=povm,
        sim=sim,
        mum_compatible=bool(mum_res <= tol),
        sim_residual=sim_res,
        mum_residual=mum_res,
    )


def structural_transpose_map(d):
    """Matrix of ``(|I>><<I| + T)/(d+1)``."""
    eye = np.eye(d)
    return (ops.ket_bra_superop(eye, eye) + ops.transpose_superop(d)) / (d + 1)


def sic_kraus_operators(kets):
    """``B_j = |psi_j><psi_j^*| / sqrt(d)``, i.e. ``psi psi^T / sqrt(d)``."""
    kets = np.asarray(kets, dtype=complex)
    d = kets.shape[1]
    return np.einsum("ja,jb->jab", kets, kets) / np.sqrt(d)


def check_sic_kets(kets, tol=1e-8):
    kets = np.asarray(kets, dtype=complex)
    if kets.ndim != 2:
        raise DimensionError("kets must have shape (d^2, d)")
    n, d = kets.shape
    if n != d * d:
        raise DomainError(f"a SIC in dimension {d} has {d * d} vectors, got {n}")
    overlaps = np.abs(kets.conj() @ kets.T) ** 2
    target = (d * np.eye(n) + 1) / (d + 1)
    dev = float(np.max(np.abs(overlaps - target)))
    if dev > tol:
        raise DomainError(f"kets are not a SIC (overlap deviation {dev:.3g})")
    return kets


def structural_transpose_check(sic_vectors, samples=20, seed=0, tol=1e-8):
    """Largest relative gap between ``T~(A)`` and its SIC Kraus form on random ``A``."""
    kets = check_sic_kets(sic_vectors, tol)
    d = kets.shape[1]
    t_map = structural_transpose_map(d)
    kraus = sic_kraus_operators(kets)
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(samples):
        a = ops.random_hermitian(d, rng)
        lhs = ops.apply_superop(t_map, a)
        rhs = sum(b @ a @ b.conj().T for b in kraus)
        worst = max(worst, frob(lhs - rhs) / frob(a))
    return worst

"""Information-geometric quantities of density matrices.

Every quantity is evaluated as a double sum over the eigenbasis of the
state(s); the dense superoperator route exists only as a test oracle.
Quantities that are real in exact arithmetic keep their full complex value
where the signature allows it, so imaginary leakage stays visible as a
cheap numerical diagnostic instead of being discarded.

Centering is the caller's job: operations that require ``Tr D X = 0``
check the precondition and refuse, they never center silently.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import DomainError, InvariantViolation
from .functions import covariance_kernel


@dataclass(frozen=True)
class QuantityResult:
    """Scalar result with provenance: quantity name and input digest."""

    value: complex
    quantity: str
    inputs_digest: str


def digest_inputs(*parts) -> str:
    """Short stable hash of arrays and parameters, for reports and replays."""
    h = hashlib.sha256()
    for p in parts:
        if isinstance(p, np.ndarray):
            h.update(np.ascontiguousarray(p).tobytes())
        else:
            h.update(repr(p).encode())
    return h.hexdigest()[:12]


def _kernel_name(F) -> str:
    return getattr(F, "name", getattr(F, "__name__", "kernel"))


def _operand(A, like: np.ndarray, what: str = "operand") -> np.ndarray:
    A = np.asarray(A, dtype=complex)
    if A.shape != like.shape:
        raise InvariantViolation(
            f"{what} shape {A.shape} does not match state shape {like.shape}"
        )
    return A


def quasi_entropy(F, A, D1, D2) -> QuantityResult:
    """``<A D1^{1/2}, F(relative modular map of (D1, D2))(A D1^{1/2})>``.

    Computed as the spectral double sum
    ``sum_ij F(mu_i/lam_j) |<u_i, A v_j>|^2 lam_j`` over the eigenbases of
    D2 (mu, u) and D1 (lam, v).
    """
    D1 = linalg.as_density(D1)
    D2 = linalg.as_density(D2)
    if D1.shape != D2.shape:
        raise InvariantViolation(f"state dimensions differ: {D1.shape} vs {D2.shape}")
    A = _operand(A, D1)
    d1 = linalg.eig_hermitian(D1, "first state")
    d2 = linalg.eig_hermitian(D2, "second state")
    W = linalg.eval_scalar(F, d2.eigenvalues[:, None] / d1.eigenvalues[None, :])
    M = d2.eigenvectors.conj().T @ A @ d1.eigenvectors
    value = np.sum(W * (np.abs(M) ** 2) * d1.eigenvalues[None, :])
    return QuantityResult(
        complex(value), "quasi-entropy", digest_inputs(_kernel_name(F), A, D1, D2)
    )


def umegaki(D1, D2) -> float:
    """Relative entropy ``Tr D1 (log D1 - log D2)`` (natural logarithm)."""
    D1 = linalg.as_density(D1)
    D2 = linalg.as_density(D2)
    if D1.shape != D2.shape:
        raise InvariantViolation(f"state dimensions differ: {D1.shape} vs {D2.shape}")
    L1 = linalg.apply_matrix_function(np.log, D1)
    L2 = linalg.apply_matrix_function(np.log, D2)
    return float(np.trace(D1 @ (L1 - L2)).real)


def renyi(alpha: float, D1, D2) -> float:
    """``Tr (I - D2^a D1^{-a}) D1 / (a(1-a))`` for a in (-1, 1) without 0.

    The boundary a = 0 is rejected rather than special-cased: conflating it
    with the relative-entropy limit would hide convergence behaviour.
    """
    if not -1.0 < alpha < 1.0 or alpha == 0.0:
        raise DomainError("alpha must be nonzero and lie inside (-1, 1)")
    D1 = linalg.as_density(D1)
    D2 = linalg.as_density(D2)
    if D1.shape != D2.shape:
        raise InvariantViolation(f"state dimensions differ: {D1.shape} vs {D2.shape}")
    D2a = linalg.apply_matrix_function(lambda x: x ** alpha, D2)
    D1b = linalg.apply_matrix_function(lambda x: x ** (1.0 - alpha), D1)
    return float((1.0 - np.trace(D2a @ D1b).real) / (alpha * (1.0 - alpha)))


def sym_cov(D, A, B) -> complex:
    """Symmetrized covariance ``Tr(D(A*B + BA*))/2 - (Tr DA*)(Tr DB)``."""
    D = linalg.as_density(D)
    A = _operand(A, D, "first observable")
    B = _operand(B, D, "second observable")
    Ah = A.conj().T
    quad = 0.5 * np.trace(D @ (Ah @ B + B @ Ah))
    return complex(quad - np.trace(D @ Ah) * np.trace(D @ B))


def gen_cov(f, D, A, B) -> complex:
    """Generalized covariance with standard kernel f.

    In the eigenbasis ``(w, U)`` of D the quadratic part is
    ``sum_ij conj(At_ij) Bt_ij w_j f(w_i/w_j)`` with ``At = U* A U``;
    sesquilinear (conjugate-linear in A, linear in B), and f-independent on
    operators commuting with D.
    """
    if not getattr(f, "claims_standard", False):
        raise DomainError("generalized covariance needs a standard kernel")
    D = linalg.as_density(D)
    A = _operand(A, D, "first observable")
    B = _operand(B, D, "second observable")
    dec = linalg.eig_hermitian(D, "state")
    w, U = dec.eigenvalues, dec.eigenvectors
    At = U.conj().T @ A @ U
    Bt = U.conj().T @ B @ U
    W = linalg.eval_scalar(f, w[:, None] / w[None, :])
    quad = np.sum(np.conj(At) * Bt * (w[None, :] * W))
    mean_a = np.sum(w * np.conj(np.diagonal(At)))
    mean_b = np.sum(w * np.diagonal(Bt))
    return complex(quad - mean_a * mean_b)


def fisher(f, D, A, B) -> complex:
    """Monotone-metric pairing ``sum_ij conj(At_ij) Bt_ij / (w_j f(w_i/w_j))``.

    Positive definite in ``A = B`` and f-independent (equal to
    ``Tr D^{-1} A* B``) on operators commuting with D.
    """
    if not getattr(f, "claims_standard", False):
        raise DomainError("the quantum Fisher information needs a standard kernel")
    D = linalg.as_density(D)
    A = _operand(A, D, "first direction")
    B = _operand(B, D, "second direction")
    dec = linalg.eig_hermitian(D, "state")
    w, U = dec.eigenvalues, dec.eigenvectors
    At = U.conj().T @ A @ U
    Bt = U.conj().T @ B @ U
    W = linalg.eval_scalar(f, w[:, None] / w[None, :])
    denom = w[None, :] * W
    if float(np.min(denom)) <= 0.0:
        raise DomainError("singular metric: the kernel vanishes on a spectrum ratio")
    return complex(np.sum(np.conj(At) * Bt / denom))


def skew_info(f, D, X) -> float:
    """Skew information ``(f(0)/2)`` times the metric on the commutator direction.

    Diagonal formula in the eigenbasis of D:
    ``(f(0)/2) sum_ij (w_i - w_j)^2 / (w_j f(w_i/w_j)) |Xt_ij|^2``, equal to
    ``(f(0)/2) fisher(f, D, 1j[D,X], 1j[D,X])``.
    """
    if not getattr(f, "claims_standard", False):
        raise DomainError("skew information needs a standard kernel")
    D = linalg.as_density(D)
    X = linalg.as_hermitian(X)
    if X.shape != D.shape:
        raise InvariantViolation(f"observable shape {X.shape} does not match state {D.shape}")
    dec = linalg.eig_hermitian(D, "state")
    w, U = dec.eigenvalues, dec.eigenvectors
    Xt = U.conj().T @ X @ U
    W = linalg.eval_scalar(f, w[:, None] / w[None, :])
    denom = w[None, :] * W
    if float(np.min(denom)) <= 0.0:
        raise DomainError("singular metric: the kernel vanishes on a spectrum ratio")
    num = (w[:, None] - w[None, :]) ** 2
    return float(0.5 * f.value_at_zero * np.sum(num / denom * np.abs(Xt) ** 2))


def wyd_direct(p: float, D, X) -> float:
    """Commutator form ``-Tr [D^p, X][D^{1-p}, X] / 2`` for p in (0, 1)."""
    if not 0.0 < p < 1.0:
        raise DomainError(f"p must lie inside (0, 1), got {p!r}")
    D = linalg.as_density(D)
    X = linalg.as_hermitian(X)
    if X.shape != D.shape:
        raise InvariantViolation(f"observable shape {X.shape} does not match state {D.shape}")
    Dp = linalg.apply_matrix_function(lambda x: x ** p, D)
    Dq = linalg.apply_matrix_function(lambda x: x ** (1.0 - p), D)
    Cp = linalg.commutator(Dp, X)
    Cq = linalg.commutator(Dq, X)
    return float(-0.5 * np.trace(Cp @ Cq).real)


def skew_identity_residual(f, D, X) -> float:
    """Defect of the covariance representation of skew information.

    For centered Hermitian X (``Tr D X = 0``) and standard f with
    ``f(0) != 0``, returns
    ``| f(0) fisher(f, D, 1j[D,X], 1j[D,X]) - 2 sym_cov(D, X, X)
       + 2 gen_cov(cov_kernel(f), D, X, X) |``,
    which vanishes in exact arithmetic.
    """
    D = linalg.as_density(D)
    X = linalg.as_hermitian(X)
    if X.shape != D.shape:
        raise InvariantViolation(f"observable shape {X.shape} does not match state {D.shape}")
    if abs(complex(np.trace(D @ X))) > 1e-10:
        raise InvariantViolation("observable must be centered: Tr(D X) = 0")
    if f.value_at_zero == 0.0:
        raise DomainError("the identity needs f(0) != 0")
    B = 1j * linalg.commutator(D, X)
    B = (B + B.conj().T) / 2
    lhs = f.value_at_zero * fisher(f, D, B, B)
    c = sym_cov(D, X, X)
    q = gen_cov(covariance_kernel(f), D, X, X)
    return float(abs(lhs - 2.0 * c + 2.0 * q))

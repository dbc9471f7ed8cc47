"""Hermitian matrix algebra on finite-dimensional state spaces.

Everything rests on a single primitive, the eigendecomposition of a
Hermitian matrix.  Matrix functions, the relative modular map
``A -> D2 A D1^{-1}`` together with scalar functions of it,
Hilbert-Schmidt geometry, and the splitting of an observable into a part
commuting with a state plus a commutator part are all spectral calculus
on top of it.

All values are immutable after construction and every operation is a pure
function of its inputs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, InvariantViolation

HERMITIAN_TOL = 1e-12
DENSITY_TRACE_TOL = 1e-12
DENSITY_EIG_FLOOR = 1e-10
DEGENERACY_TOL = 1e-9
DENSE_DIM_LIMIT = 32


def _square(M, what: str = "matrix") -> np.ndarray:
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise InvariantViolation(f"{what} must be square, got shape {M.shape}")
    return M


def _same_dim(A: np.ndarray, B: np.ndarray) -> None:
    if A.shape != B.shape:
        raise InvariantViolation(f"dimension mismatch: {A.shape} vs {B.shape}")


def as_hermitian(M) -> np.ndarray:
    """Validate Hermiticity up to roundoff and return the symmetrized matrix.

    Asymmetry within ``1e-12 * (1 + max|entry|)`` is absorbed by averaging
    with the conjugate transpose; anything larger raises.
    """
    M = _square(M, "Hermitian matrix")
    scale = 1.0 + float(np.max(np.abs(M)))
    dev = float(np.max(np.abs(M - M.conj().T)))
    if dev > HERMITIAN_TOL * scale:
        raise InvariantViolation(
            f"matrix is not Hermitian: max asymmetry {dev:.3e} exceeds "
            f"{HERMITIAN_TOL * scale:.3e}"
        )
    return (M + M.conj().T) / 2


def as_density(M) -> np.ndarray:
    """Validate a density matrix: Hermitian, unit trace, invertible.

    The smallest eigenvalue must be at least 1e-10; no automatic
    regularization happens here, rank-deficient input is an error.
    """
    H = as_hermitian(M)
    tr = float(np.trace(H).real)
    if abs(tr - 1.0) > DENSITY_TRACE_TOL:
        raise InvariantViolation(f"density matrix must have unit trace, got {tr!r}")
    wmin = float(np.linalg.eigvalsh(H)[0])
    if wmin < DENSITY_EIG_FLOOR:
        raise InvariantViolation(
            f"density matrix must be invertible: smallest eigenvalue "
            f"{wmin:.3e} is below {DENSITY_EIG_FLOOR:.0e}"
        )
    return H


@dataclass(frozen=True)
class SpectralDecomposition:
    """Ascending eigenvalues with a matching orthonormal eigenbasis."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def eig_hermitian(H, label: str = "matrix") -> SpectralDecomposition:
    """Eigendecomposition of a Hermitian matrix, eigenvalues ascending."""
    H = as_hermitian(H)
    try:
        w, U = np.linalg.eigh(H)
    except np.linalg.LinAlgError as exc:
        raise np.linalg.LinAlgError(
            f"eigendecomposition did not converge for {label} with shape {H.shape}"
        ) from exc
    return SpectralDecomposition(w, U)


def eval_scalar(h, x) -> np.ndarray:
    """Evaluate a scalar function (plain callable or spec carrying .fn) on an array.

    Non-finite or non-real results mean the argument left the function's
    domain and raise accordingly.
    """
    fn = getattr(h, "fn", h)
    with np.errstate(all="ignore"):
        vals = np.asarray(fn(np.asarray(x, dtype=float)))
    if np.iscomplexobj(vals):
        scale = 1.0 + float(np.max(np.abs(vals))) if vals.size else 1.0
        if vals.size and float(np.max(np.abs(vals.imag))) > 1e-12 * scale:
            raise DomainError("scalar function must be real-valued on the given points")
        vals = vals.real
    if not np.all(np.isfinite(vals)):
        raise DomainError("scalar function is undefined on part of the spectrum")
    return vals


def apply_matrix_function(h, H) -> np.ndarray:
    """``U diag(h(w)) U*`` for the spectral data ``(w, U)`` of Hermitian ``H``."""
    dec = eig_hermitian(H)
    vals = eval_scalar(h, dec.eigenvalues)
    U = dec.eigenvectors
    out = (U * vals) @ U.conj().T
    return (out + out.conj().T) / 2


def relmod_apply(F, D1, D2, A) -> np.ndarray:
    """Apply the scalar function F of the relative modular map of (D1, D2) to A.

    With spectral data ``D2 = sum_i mu_i u_i u_i*`` and
    ``D1 = sum_j lam_j v_j v_j*`` the result is
    ``sum_ij F(mu_i / lam_j) <u_i, A v_j> u_i v_j*``.  F = identity recovers
    ``D2 A D1^{-1}``.
    """
    D1 = as_density(D1)
    D2 = as_density(D2)
    _same_dim(D1, D2)
    A = _square(A, "operand")
    _same_dim(A, D1)
    d1 = eig_hermitian(D1, "first density")
    d2 = eig_hermitian(D2, "second density")
    W = eval_scalar(F, d2.eigenvalues[:, None] / d1.eigenvalues[None, :])
    M = d2.eigenvectors.conj().T @ A @ d1.eigenvectors
    return d2.eigenvectors @ (W * M) @ d1.eigenvectors.conj().T


def vec(A) -> np.ndarray:
    """Column-stack a matrix into a vector."""
    return np.asarray(A, dtype=complex).reshape(-1, order="F")


def unvec(v, n: int) -> np.ndarray:
    """Inverse of :func:`vec`."""
    return np.asarray(v, dtype=complex).reshape((n, n), order="F")


@dataclass(frozen=True)
class Superoperator:
    """Dense matrix of a linear map on matrices, acting on column-stacked input."""

    dim: int
    matrix: np.ndarray

    def __call__(self, A) -> np.ndarray:
        A = _square(A, "operand")
        if A.shape[0] != self.dim:
            raise InvariantViolation(
                f"operand dimension {A.shape[0]} does not match superoperator dimension {self.dim}"
            )
        return unvec(self.matrix @ vec(A), self.dim)


def relmod_dense(F, D1, D2) -> Superoperator:
    """Dense n^2 x n^2 representation of F(relative modular map).

    Brute-force oracle for :func:`relmod_apply`: the matrix of
    ``A -> D2 A D1^{-1}`` is a Kronecker product in the column-stacking
    convention (and Hermitian, since the map is self-adjoint for the
    Hilbert-Schmidt pairing), so F is applied through one big
    eigendecomposition instead of the structured double sum.
    """
    D1 = as_density(D1)
    D2 = as_density(D2)
    _same_dim(D1, D2)
    n = D1.shape[0]
    if n > DENSE_DIM_LIMIT:
        raise InvariantViolation(
            f"dense superoperator is limited to dimension {DENSE_DIM_LIMIT}, got {n}"
        )
    D1_inv = apply_matrix_function(lambda x: 1.0 / x, D1)
    delta = np.kron(D1_inv.T, D2)
    delta = (delta + delta.conj().T) / 2
    w, V = np.linalg.eigh(delta)
    vals = eval_scalar(F, w)
    return Superoperator(dim=n, matrix=(V * vals) @ V.conj().T)


def hs_inner(A, B) -> complex:
    """Hilbert-Schmidt pairing ``Tr A* B``."""
    A = _square(A)
    B = _square(B)
    _same_dim(A, B)
    return complex(np.sum(np.conj(A) * B))


def hs_norm(A) -> float:
    """Hilbert-Schmidt (Frobenius) norm."""
    A = _square(A)
    return float(np.sqrt(np.sum(np.abs(A) ** 2).real))


def commutator(A, B) -> np.ndarray:
    """``AB - BA``; for Hermitian A, B the result times 1j is Hermitian."""
    A = _square(A)
    B = _square(B)
    _same_dim(A, B)
    return A @ B - B @ A


def haar_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary via phase-fixed QR of a complex Ginibre matrix."""
    G = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    Q, R = np.linalg.qr(G)
    d = np.diagonal(R)
    return Q * (d / np.abs(d))


def _cluster_ids(w: np.ndarray, tol: float) -> np.ndarray:
    ids = np.zeros(len(w), dtype=int)
    for k in range(1, len(w)):
        ids[k] = ids[k - 1] + (1 if w[k] - w[k - 1] > tol else 0)
    return ids


def pinch_decompose(D, B) -> tuple[np.ndarray, np.ndarray]:
    """Split Hermitian B as ``B = B_c + 1j*[D, X]`` with ``[D, B_c] = 0``.

    In the eigenbasis of D, B_c keeps the blocks inside eigenvalue clusters
    (spectral pinching) and X carries the cross-cluster entries divided by
    ``1j (w_i - w_j)``.  Eigenvalues closer than ``1e-9 (1 + spread)`` are
    clustered together so the division never sees a vanishing gap.  The two
    parts are Hilbert-Schmidt orthogonal.
    """
    D = as_density(D)
    B = as_hermitian(B)
    _same_dim(D, B)
    dec = eig_hermitian(D, "state")
    w, U = dec.eigenvalues, dec.eigenvectors
    spread = float(w[-1] - w[0])
    ids = _cluster_ids(w, DEGENERACY_TOL * (1.0 + spread))
    same = ids[:, None] == ids[None, :]
    Bt = U.conj().T @ B @ U
    gaps = w[:, None] - w[None, :]
    denom = np.where(same, 1.0, 1j * gaps)
    Xt = np.where(same, 0.0, Bt / denom)
    Bc = U @ np.where(same, Bt, 0.0) @ U.conj().T
    X = U @ Xt @ U.conj().T
    return (Bc + Bc.conj().T) / 2, (X + X.conj().T) / 2

"""Completely positive trace-preserving maps in Kraus form.

A channel stores Kraus operators of one common (n_out, n_in) shape with
``sum_i K_i* K_i = I`` on the input space.  ``apply_state`` is the
trace-preserving action on densities, ``apply_dual`` the unital dual on
observables of the output space; unital completely positive maps satisfy
the Schwarz inequality, which makes these duals a rich valid family for
the monotonicity and joint-concavity margins of quasi-entropies.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import linalg, quantities
from .errors import DomainError, InvariantViolation

KRAUS_TOL = 1e-10


@dataclass(frozen=True)
class KrausChannel:
    """Kraus operators of a trace-preserving completely positive map."""

    kraus_ops: tuple[np.ndarray, ...]

    def __post_init__(self):
        ops = tuple(np.asarray(K, dtype=complex) for K in self.kraus_ops)
        if not ops:
            raise InvariantViolation("a channel needs at least one Kraus operator")
        shape = ops[0].shape
        if len(shape) != 2 or any(K.shape != shape for K in ops):
            raise InvariantViolation("Kraus operators must share one (n_out, n_in) shape")
        object.__setattr__(self, "kraus_ops", ops)
        acc = sum(K.conj().T @ K for K in ops)
        dev = float(np.max(np.abs(acc - np.eye(shape[1]))))
        if dev > KRAUS_TOL:
            raise InvariantViolation(
                f"Kraus operators must satisfy sum K*K = I (trace preservation); "
                f"deviation {dev:.3e}"
            )

    @property
    def dim_in(self) -> int:
        return self.kraus_ops[0].shape[1]

    @property
    def dim_out(self) -> int:
        return self.kraus_ops[0].shape[0]


def random_channel(n_in: int, n_out: int, kraus_count: int, seed) -> KrausChannel:
    """Kraus blocks of a Haar-random isometry from n_in into kraus_count * n_out.

    Deterministic for a fixed integer seed; also accepts a Generator.
    """
    if kraus_count * n_out < n_in:
        raise InvariantViolation(
            f"infeasible dimensions: {kraus_count} Kraus operators with output "
            f"dimension {n_out} cannot carry input dimension {n_in}"
        )
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    total = kraus_count * n_out
    G = rng.standard_normal((total, n_in)) + 1j * rng.standard_normal((total, n_in))
    Q, R = np.linalg.qr(G)
    d = np.diagonal(R)
    Q = Q * (d / np.abs(d))
    return KrausChannel(tuple(Q[i * n_out : (i + 1) * n_out, :] for i in range(kraus_count)))


def apply_state(ch: KrausChannel, D) -> np.ndarray:
    """Trace-preserving action ``sum_i K_i D K_i*``.

    The output is Hermitian with the same trace; it may graze the density
    invertibility floor, in which case the caller re-validates (and a
    sampling harness resamples).
    """
    D = np.asarray(D, dtype=complex)
    if D.shape != (ch.dim_in, ch.dim_in):
        raise InvariantViolation(
            f"state shape {D.shape} does not match channel input dimension {ch.dim_in}"
        )
    out = sum(K @ D @ K.conj().T for K in ch.kraus_ops)
    return (out + out.conj().T) / 2


def apply_dual(ch: KrausChannel, A) -> np.ndarray:
    """Unital dual ``sum_i K_i* A K_i`` on observables of the output space."""
    A = np.asarray(A, dtype=complex)
    if A.shape != (ch.dim_out, ch.dim_out):
        raise InvariantViolation(
            f"operand shape {A.shape} does not match channel output dimension {ch.dim_out}"
        )
    return sum(K.conj().T @ A @ K for K in ch.kraus_ops)


def schwarz_margin(ch: KrausChannel, B) -> float:
    """Smallest eigenvalue of ``dual(B*B) - dual(B*) dual(B)`` (>= 0 for CP duals)."""
    B = np.asarray(B, dtype=complex)
    lhs = apply_dual(ch, B.conj().T @ B)
    rhs = apply_dual(ch, B.conj().T) @ apply_dual(ch, B)
    gap = lhs - rhs
    gap = (gap + gap.conj().T) / 2
    return float(np.linalg.eigvalsh(gap)[0])


def _require_monotone_kernel(F) -> None:
    if not getattr(F, "claims_operator_monotone", False):
        raise DomainError(
            "this margin is stated for operator monotone increasing kernels; "
            f"{getattr(F, 'name', 'kernel')!r} is not flagged as one"
        )
    if not getattr(F, "value_at_zero", -math.inf) >= 0.0:
        raise DomainError("this margin needs a kernel with F(0) >= 0")


def monotonicity_margin(F, A, D1, D2, ch: KrausChannel) -> float:
    """Gain of the quasi-entropy under coarse-graining.

    Returns ``S_F^A(ch(D1), ch(D2)) - S_F^{dual(A)}(D1, D2)``, which is
    nonnegative for operator monotone increasing kernels with F(0) >= 0.
    A lives on the channel output space.  Kernels without the monotone
    flag are refused; channel outputs that lose invertibility raise, so a
    sampling harness can resample.
    """
    _require_monotone_kernel(F)
    D1 = linalg.as_density(D1)
    D2 = linalg.as_density(D2)
    E1 = linalg.as_density(apply_state(ch, D1))
    E2 = linalg.as_density(apply_state(ch, D2))
    lhs = quantities.quasi_entropy(F, A, E1, E2).value.real
    rhs = quantities.quasi_entropy(F, apply_dual(ch, A), D1, D2).value.real
    return float(lhs - rhs)


def concavity_margin(F, A, pair_a, pair_b, lam: float) -> float:
    """Joint-concavity margin of the quasi-entropy at mixing weight lam.

    ``S_F^A(lam a1 + (1-lam) b1, lam a2 + (1-lam) b2)
      - lam S_F^A(a1, a2) - (1-lam) S_F^A(b1, b2)``; nonnegative under the
    same kernel hypotheses as :func:`monotonicity_margin`.
    """
    _require_monotone_kernel(F)
    if not 0.0 <= lam <= 1.0:
        raise DomainError(f"mixing weight must lie in [0, 1], got {lam!r}")
    a1, a2 = (linalg.as_density(M) for M in pair_a)
    b1, b2 = (linalg.as_density(M) for M in pair_b)
    mix1 = lam * a1 + (1.0 - lam) * b1
    mix2 = lam * a2 + (1.0 - lam) * b2

    def s(d1, d2):
        return quantities.quasi_entropy(F, A, d1, d2).value.real

    return float(s(mix1, mix2) - lam * s(a1, a2) - (1.0 - lam) * s(b1, b2))


def data_processing_margin(F, D1, D2, ch: KrausChannel) -> float:
    """Reversed-direction margin for operator convex *decreasing* kernels.

    For relative-entropy-like kernels the inequality runs the other way:
    coarse-graining cannot increase the divergence.  Checked with the
    identity operand only; kept strictly separate from
    :func:`monotonicity_margin` so the two directions are never conflated.
    """
    D1 = linalg.as_density(D1)
    D2 = linalg.as_density(D2)
    E1 = linalg.as_density(apply_state(ch, D1))
    E2 = linalg.as_density(apply_state(ch, D2))
    before = quantities.quasi_entropy(F, np.eye(ch.dim_in), D1, D2).value.real
    after = quantities.quasi_entropy(F, np.eye(ch.dim_out), E1, E2).value.real
    return float(before - after)

"""Finite-difference and random-instance verification harness.

The mixed second derivative of the quasi-entropy along state perturbations
is estimated by a central stencil with Richardson extrapolation across a
step schedule; derivative identities (commuting directions, cross
directions, the quadratic commutator identity, and the Hessian form of
skew information) are then checked against their spectral counterparts.
Determinant uncertainty margins and all sampling suites live here too.

Suites are deterministic in ``(seed, trials, dims)``: every trial derives
its generator from the suite seed and the trial index.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from . import channels, functions, linalg, quantities
from .errors import DomainError, InvariantViolation, VerificationError
from .quantities import digest_inputs

MIN_STEP = 1e-5


@dataclass(frozen=True)
class StepSchedule:
    """Strictly decreasing finite-difference increments, none below 1e-5."""

    steps: tuple[float, ...] = (1e-2, 1e-3)

    def __post_init__(self):
        if not self.steps:
            raise InvariantViolation("step schedule must be nonempty")
        if any(h <= 0.0 for h in self.steps):
            raise InvariantViolation("steps must be positive")
        if any(a <= b for a, b in zip(self.steps, self.steps[1:])):
            raise InvariantViolation("steps must be strictly decreasing")
        if self.steps[-1] < MIN_STEP:
            raise InvariantViolation(f"smallest step must be at least {MIN_STEP:g}")


@dataclass
class TrialReport:
    """Aggregated outcome of one property suite."""

    suite: str
    trials: int
    min_margin: float | None
    max_residual: float | None
    failures: list = field(default_factory=list)
    elapsed: float = 0.0
    margin_tolerance: float = math.inf
    residual_tolerance: float = math.inf

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        def tol(v: float):
            return None if math.isinf(v) else v

        return {
            "suite": self.suite,
            "trials": self.trials,
            "min_margin": self.min_margin,
            "max_residual": self.max_residual,
            "failures": self.failures,
            "elapsed": self.elapsed,
            "tolerances": {
                "margin": tol(self.margin_tolerance),
                "residual": tol(self.residual_tolerance),
            },
        }


def _rng_of(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def random_density(n: int, floor: float = 0.01, seed=0) -> np.ndarray:
    """Random invertible density: normalized Ginibre square mixed with identity.

    ``(1 - n*floor) * G G^*/Tr(G G^*) + floor * I`` keeps the smallest
    eigenvalue at or above ``floor``; requires ``0 < floor < 1/n``.
    """
    if not 0.0 < floor < 1.0 / n:
        raise DomainError(f"floor must lie in (0, 1/{n}), got {floor!r}")
    rng = _rng_of(seed)
    if n == 1:
        return np.array([[1.0 + 0.0j]])
    G = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    rho = G @ G.conj().T
    rho /= np.trace(rho).real
    rho = (1.0 - n * floor) * rho + floor * np.eye(n)
    return linalg.as_density(rho)


def random_hermitian(n: int, rng: np.random.Generator, unit: bool = True) -> np.ndarray:
    """Random Hermitian matrix, unit Hilbert-Schmidt norm by default."""
    G = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    H = (G + G.conj().T) / 2
    if unit:
        H = H / linalg.hs_norm(H)
    return H


def _random_complex(n: int, rng: np.random.Generator) -> np.ndarray:
    A = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return A / linalg.hs_norm(A)


def center_observable(D, A) -> np.ndarray:
    """Subtract the mean: ``A - (Tr D A) I`` so that ``Tr D (result) = 0``."""
    D = linalg.as_density(D)
    A = linalg.as_hermitian(A)
    if A.shape != D.shape:
        raise InvariantViolation(f"observable shape {A.shape} does not match state {D.shape}")
    return A - np.trace(D @ A).real * np.eye(D.shape[0])


def _centered_unit(D, rng: np.random.Generator) -> np.ndarray:
    n = D.shape[0]
    while True:
        X = center_observable(D, random_hermitian(n, rng, unit=False))
        nrm = linalg.hs_norm(X)
        if nrm > 1e-8:
            return X / nrm


def mixed_second_derivative(F, D, A, B, schedule: StepSchedule | None = None):
    """Mixed second derivative of ``(t, s) -> S_F(D + tA, D + sB)`` at 0.

    Central stencil ``(g(h,h) - g(h,-h) - g(-h,h) + g(-h,-h)) / (4h^2)``
    with Richardson extrapolation across the schedule (directions are
    normalized to unit Hilbert-Schmidt norm internally and the result
    rescaled, so tolerances are scale-free).  Returns the value and an
    error estimate from the two finest steps.  Steps that break positive
    definiteness of the perturbed states are rejected; if the schedule is
    exhausted, raises.
    """
    D = linalg.as_density(D)
    A = linalg.as_hermitian(A)
    B = linalg.as_hermitian(B)
    n = D.shape[0]
    for M in (A, B):
        if M.shape != D.shape:
            raise InvariantViolation("perturbation shape does not match the state")
        if abs(np.trace(M).real) > 1e-10:
            raise InvariantViolation("perturbations must be traceless")
    sched = schedule if schedule is not None else StepSchedule()
    na, nb = linalg.hs_norm(A), linalg.hs_norm(B)
    if na == 0.0 or nb == 0.0:
        return 0.0, 0.0
    An = A - (np.trace(A).real / n) * np.eye(n)
    Bn = B - (np.trace(B).real / n) * np.eye(n)
    An, Bn = An / na, Bn / nb
    eye = np.eye(n)

    def positive(h: float) -> bool:
        for M in (An, Bn):
            for s in (h, -h):
                if float(np.linalg.eigvalsh(D + s * M)[0]) < 1e-9:
                    return False
        return True

    usable = [h for h in sched.steps if positive(h)]
    if not usable:
        raise VerificationError("no finite-difference step keeps the states positive definite")
    while len(usable) < 2:
        h = usable[-1] / 2.0
        if h < MIN_STEP:
            raise VerificationError("step schedule exhausted before extrapolation")
        usable.append(h)

    def g(t: float, s: float) -> float:
        return quantities.quasi_entropy(F, eye, D + t * An, D + s * Bn).value.real

    def stencil(h: float) -> float:
        return (g(h, h) - g(h, -h) - g(-h, h) + g(-h, -h)) / (4.0 * h * h)

    vals = [stencil(h) for h in usable]
    # Neville extrapolation to h = 0 of a polynomial in h^2.
    x = [h * h for h in usable]
    r = list(vals)
    for j in range(1, len(r)):
        for i in range(len(r) - j):
            r[i] = (x[i + j] * r[i] - x[i] * r[i + j]) / (x[i + j] - x[i])
    err = abs(r[0] - vals[-1])
    return float(r[0] * na * nb), float(err * na * nb)


def _require_commuting(D, A) -> None:
    dev = float(np.max(np.abs(linalg.commutator(D, A))))
    scale = 1.0 + float(np.max(np.abs(A)))
    if dev > 1e-12 * scale:
        raise InvariantViolation(f"operators must commute with the state; deviation {dev:.3e}")


def lemma_commuting_residual(F, D, A, B, schedule: StepSchedule | None = None) -> float:
    """Defect of the commuting-direction derivative identity.

    For traceless Hermitian A, B commuting with D the mixed derivative
    equals ``-F''(1) Tr D^{-1} A B``; returns the absolute difference
    between the finite-difference value and that spectral formula.
    """
    D = linalg.as_density(D)
    A = linalg.as_hermitian(A)
    B = linalg.as_hermitian(B)
    _require_commuting(D, A)
    _require_commuting(D, B)
    fd, _ = mixed_second_derivative(F, D, A, B, schedule)
    d2 = functions.second_derivative_at_one(F)
    D_inv = linalg.apply_matrix_function(lambda x: 1.0 / x, D)
    expected = -d2 * float(np.trace(D_inv @ A @ B).real)
    return abs(fd - expected)


def lemma_cross_residual(F, D, A, X, schedule: StepSchedule | None = None) -> float:
    """Mixed derivative along a commuting direction and a commutator direction.

    The exact value is zero; returns the absolute finite-difference value.
    """
    D = linalg.as_density(D)
    A = linalg.as_hermitian(A)
    X = linalg.as_hermitian(X)
    _require_commuting(D, A)
    B = 1j * linalg.commutator(D, X)
    B = (B + B.conj().T) / 2
    fd, _ = mixed_second_derivative(F, D, A, B, schedule)
    return abs(fd)


def lemma_quadratic_residual(F, D, X, schedule: StepSchedule | None = None) -> float:
    """Defect of the commutator-direction quadratic identity.

    For Hermitian X the mixed derivative along ``(1j[D,X], 1j[D,X])``
    equals ``2 F(1) Tr D X^2 - 2 S_F^X(D, D)``; returns the absolute
    difference between the finite-difference value and that trace formula.
    """
    D = linalg.as_density(D)
    X = linalg.as_hermitian(X)
    B = 1j * linalg.commutator(D, X)
    B = (B + B.conj().T) / 2
    fd, _ = mixed_second_derivative(F, D, B, B, schedule)
    f1 = float(linalg.eval_scalar(F, np.asarray(1.0)))
    trace_form = 2.0 * f1 * float(np.trace(D @ X @ X).real) - 2.0 * quantities.quasi_entropy(
        F, X, D, D
    ).value.real
    return abs(fd - trace_form)


def hessian_vs_skew(f, D, X, schedule: StepSchedule | None = None):
    """Hessian of the quasi-entropy with the covariance kernel vs skew information.

    For standard f with f(0) != 0 and centered Hermitian X, the mixed
    derivative of ``S_{cov_kernel(f)}`` along ``(1j[D,X], 1j[D,X])`` equals
    ``f(0)`` times the metric on that commutator direction.  Returns
    ``(lhs, rhs, relative error)`` with
    ``relerr = |lhs - rhs| / (1 + |rhs|)``; the finite-difference value is
    also cross-checked against the quadratic trace identity.
    """
    if not getattr(f, "claims_standard", False):
        raise DomainError("the Hessian identity needs a standard function")
    if f.value_at_zero == 0.0:
        raise DomainError("the Hessian identity needs f(0) != 0")
    D = linalg.as_density(D)
    X = linalg.as_hermitian(X)
    if abs(complex(np.trace(D @ X))) > 1e-10:
        raise InvariantViolation("observable must be centered: Tr(D X) = 0")
    ft = functions.covariance_kernel(f)
    B = 1j * linalg.commutator(D, X)
    B = (B + B.conj().T) / 2
    lhs, err = mixed_second_derivative(ft, D, B, B, schedule)
    rhs = f.value_at_zero * quantities.fisher(f, D, B, B).real
    relerr = abs(lhs - rhs) / (1.0 + abs(rhs))
    trace_form = 2.0 * float(np.trace(D @ X @ X).real) - 2.0 * quantities.quasi_entropy(
        ft, X, D, D
    ).value.real
    if abs(lhs - trace_form) > max(1e-6, 10.0 * err):
        raise VerificationError(
            f"finite difference disagrees with the quadratic trace identity: "
            f"{lhs!r} vs {trace_form!r}"
        )
    return float(lhs), float(rhs), float(relerr)


def _check_centered(D, observables) -> list[np.ndarray]:
    obs = [linalg.as_hermitian(A) for A in observables]
    for A in obs:
        if A.shape != D.shape:
            raise InvariantViolation("observable dimension does not match the state")
        if abs(np.trace(D @ A).real) > 1e-10:
            raise InvariantViolation("observables must be centered: Tr(D A) = 0")
    return obs


def cov_gram(g, D, observables) -> np.ndarray:
    """Gram matrix of generalized covariances of centered observables."""
    D = linalg.as_density(D)
    obs = _check_centered(D, observables)
    m = len(obs)
    G = np.empty((m, m), dtype=complex)
    for i in range(m):
        for j in range(m):
            G[i, j] = quantities.gen_cov(g, D, obs[i], obs[j])
    return (G + G.conj().T) / 2


def skew_gram(f, D, observables) -> np.ndarray:
    """Gram matrix of covariance deficits: symmetric minus covariance-kernel form.

    The diagonal reproduces the skew informations of the observables.
    """
    D = linalg.as_density(D)
    obs = _check_centered(D, observables)
    ft = functions.covariance_kernel(f)
    m = len(obs)
    S = np.empty((m, m), dtype=complex)
    for i in range(m):
        for j in range(m):
            S[i, j] = quantities.sym_cov(D, obs[i], obs[j]) - quantities.gen_cov(
                ft, D, obs[i], obs[j]
            )
    return (S + S.conj().T) / 2


def det_inequality_margins(f, g, D, observables) -> tuple[float, float]:
    """Determinant uncertainty margins with both right-hand normalizations.

    Returns ``(det C - det(f(0) g(0) S), det C - det(2 g(0) S))`` where C
    is the covariance Gram matrix of g and S the skew Gram matrix of f.
    The two scalings are intentionally computed and reported separately;
    since f(0) <= 1/2, the second is the stronger statement.
    """
    if not (getattr(f, "claims_standard", False) and getattr(g, "claims_standard", False)):
        raise DomainError("determinant margins are stated for standard functions")
    C = cov_gram(g, D, observables)
    S = skew_gram(f, D, observables)
    f0, g0 = f.value_at_zero, g.value_at_zero
    det_c = float(np.linalg.det(C).real)
    m1 = det_c - float(np.linalg.det(f0 * g0 * S).real)
    m2 = det_c - float(np.linalg.det(2.0 * g0 * S).real)
    return m1, m2


def orthonormal_centered_observables(D, m: int, rng: np.random.Generator) -> list[np.ndarray]:
    """m centered Hermitian observables, orthonormal in the HS inner product.

    Orthonormalization keeps the Gram matrices well away from singular so
    determinant margins test more than 0 >= 0.
    """
    D = linalg.as_density(D)
    n = D.shape[0]
    if m > n * n - 1:
        raise DomainError(f"at most {n * n - 1} independent centered observables exist, got m={m}")
    obs: list[np.ndarray] = []
    attempts = 0
    while len(obs) < m:
        attempts += 1
        if attempts > 100 * m:
            raise VerificationError("could not orthonormalize the requested observables")
        H = center_observable(D, random_hermitian(n, rng, unit=False))
        for prev in obs:
            H = H - linalg.hs_inner(prev, H).real * prev
        nrm = linalg.hs_norm(H)
        if nrm > 1e-6:
            obs.append(H / nrm)
    return obs


# ---------------------------------------------------------------------------
# suite runners


_ALPHAS = (0.25, 0.5, 0.75)
_MIX_WEIGHTS = (0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9)
_RENYI_ALPHAS = (0.1, 0.01, 0.001)


def _random_measure(rng: np.random.Generator, min_atom: float = 0.0) -> functions.DiscreteMeasure:
    k = int(rng.integers(1, 5))
    atoms = rng.uniform(min_atom, 1.0, size=k)
    weights = rng.dirichlet(np.ones(k))
    return functions.DiscreteMeasure(tuple(float(a) for a in atoms), tuple(float(w) for w in weights))


def _standard_pool(rng: np.random.Generator, positive_at_zero: bool = False):
    """Draw a catalog standard function with randomized parameters."""
    if positive_at_zero:
        k = int(rng.integers(0, 4))
        if k == 0:
            return functions.sld()
        if k == 1:
            return functions.wyd(float(rng.uniform(0.08, 0.92)))
        if k == 2:
            return functions.extremal_metric(float(rng.uniform(0.05, 1.0)))
        return functions.hansen_mixture(_random_measure(rng, min_atom=0.05))
    k = int(rng.integers(0, 8))
    if k == 0:
        return functions.sld()
    if k == 1:
        return functions.harmonic()
    if k == 2:
        return functions.kubo_mori()
    if k == 3:
        return functions.wyd(float(rng.uniform(0.05, 0.95)))
    if k == 4:
        return functions.extremal_metric(float(rng.uniform(0.0, 1.0)))
    if k == 5:
        return functions.hansen_mixture(_random_measure(rng))
    if k == 6:
        return functions.covariance_kernel(functions.wyd(float(rng.uniform(0.1, 0.9))))
    return functions.covariance_kernel(functions.extremal_metric(float(rng.uniform(0.0, 1.0))))


def _smooth_kernel(rng: np.random.Generator):
    k = int(rng.integers(0, 4))
    if k == 0:
        return functions.power_kernel(2.0)
    if k == 1:
        return functions.power_kernel(0.5)
    if k == 2:
        return functions.neglog_kernel()
    return functions.sld()


def _dim(rng: np.random.Generator, dims) -> int:
    return int(rng.choice(np.asarray(dims)))


def _fd_floor(n: int) -> float:
    return min(0.2, 0.8 / n)


def _run_standardness(rng, dims):
    f = _standard_pool(rng)
    rep = functions.check_standard(f)
    return None, rep.max_violation, digest_inputs(f.name)


def _run_operator_monotone(rng, dims):
    f = _standard_pool(rng)
    rep = functions.check_operator_monotone(
        f, seed=int(rng.integers(2**32)), trials=4, dim=_dim(rng, dims)
    )
    residual = 0.0 if rep.pick_margin is None else max(0.0, -rep.pick_margin)
    return rep.loewner_margin, residual, digest_inputs(f.name)


def _run_scalar_gibi(rng, dims):
    f = _standard_pool(rng)
    g = _standard_pool(rng)
    rep = functions.scalar_inequality_check(f, g)
    return rep.min_margin, None, digest_inputs(f.name, g.name)


def _run_skew_identity(rng, dims):
    n = _dim(rng, dims)
    k = int(rng.integers(0, 4))
    if k == 0:
        f = functions.sld()
    elif k == 1:
        f = functions.wyd(0.3)
    elif k == 2:
        f = functions.wyd(0.5)
    else:
        f = functions.hansen_mixture(_random_measure(rng, min_atom=0.05))
    D = random_density(n, floor=min(0.02, 0.5 / n), seed=rng)
    X = _centered_unit(D, rng)
    r = quantities.skew_identity_residual(f, D, X)
    return None, r, digest_inputs(f.name, D, X)


def _run_hessian(rng, dims):
    n = _dim(rng, dims)
    f = _standard_pool(rng, positive_at_zero=True)
    D = random_density(n, floor=_fd_floor(n), seed=rng)
    X = _centered_unit(D, rng)
    _, _, relerr = hessian_vs_skew(f, D, X)
    return None, relerr, digest_inputs(f.name, D, X)


def _commuting_traceless(D, rng: np.random.Generator) -> np.ndarray:
    dec = linalg.eig_hermitian(D)
    a = rng.standard_normal(D.shape[0])
    a -= a.mean()
    A = (dec.eigenvectors * a) @ dec.eigenvectors.conj().T
    A = (A + A.conj().T) / 2
    nrm = linalg.hs_norm(A)
    return A if nrm < 1e-12 else A / nrm


def _run_lemma_commuting(rng, dims):
    n = _dim(rng, dims)
    F = _smooth_kernel(rng)
    D = random_density(n, floor=_fd_floor(n), seed=rng)
    A = _commuting_traceless(D, rng)
    B = _commuting_traceless(D, rng)
    r = lemma_commuting_residual(F, D, A, B)
    return None, r, digest_inputs(F.name, D, A, B)


def _run_lemma_cross(rng, dims):
    n = _dim(rng, dims)
    F = _smooth_kernel(rng)
    D = random_density(n, floor=_fd_floor(n), seed=rng)
    A = _commuting_traceless(D, rng)
    X = random_hermitian(n, rng)
    r_cross = lemma_cross_residual(F, D, A, X)
    r_quad = lemma_quadratic_residual(F, D, X)
    return None, max(r_cross, r_quad), digest_inputs(F.name, D, A, X)


def _run_monotonicity(rng, dims):
    n_in = _dim(rng, dims)
    n_out = _dim(rng, dims)
    k = int(rng.integers(1, 4))
    k = max(k, -(-n_in // n_out), -(-n_out // n_in))
    F = functions.power_kernel(float(rng.choice(np.asarray(_ALPHAS))))
    A = _random_complex(n_out, rng)
    floor = min(0.03, 0.5 / n_in)
    for _ in range(40):
        ch = channels.random_channel(n_in, n_out, k, seed=rng)
        D1 = random_density(n_in, floor=floor, seed=rng)
        D2 = random_density(n_in, floor=floor, seed=rng)
        try:
            margin = channels.monotonicity_margin(F, A, D1, D2, ch)
        except InvariantViolation:
            continue
        digest = digest_inputs(F.name, A, D1, D2, *ch.kraus_ops)
        return margin, None, digest
    raise VerificationError("could not sample a channel instance with invertible outputs")


def _run_concavity(rng, dims):
    n = _dim(rng, dims)
    F = functions.power_kernel(float(rng.choice(np.asarray(_ALPHAS))))
    lam = float(rng.choice(np.asarray(_MIX_WEIGHTS)))
    A = _random_complex(n, rng)
    floor = min(0.03, 0.5 / n)
    a1 = random_density(n, floor=floor, seed=rng)
    a2 = random_density(n, floor=floor, seed=rng)
    b1 = random_density(n, floor=floor, seed=rng)
    b2 = random_density(n, floor=floor, seed=rng)
    margin = channels.concavity_margin(F, A, (a1, a2), (b1, b2), lam)
    return margin, None, digest_inputs(F.name, lam, A, a1, a2, b1, b2)


def _run_det_uncertainty(rng, dims):
    n = _dim(rng, dims)
    m = int(rng.integers(1, 4))
    f = _standard_pool(rng)
    g = _standard_pool(rng)
    D = random_density(n, floor=min(0.05, 0.5 / n), seed=rng)
    obs = orthonormal_centered_observables(D, m, rng)
    m1, m2 = det_inequality_margins(f, g, D, obs)
    C = cov_gram(g, D, obs)
    S = skew_gram(f, D, obs)
    f0, g0 = f.value_at_zero, g.value_at_zero
    scale = max(
        1.0,
        abs(float(np.linalg.det(C).real)),
        abs(float(np.linalg.det(f0 * g0 * S).real)),
        abs(float(np.linalg.det(2.0 * g0 * S).real)),
    )
    return min(m1, m2) / scale, None, digest_inputs(f.name, g.name, D, *obs)


def _run_oracle_equivalence(rng, dims):
    n = _dim(rng, dims)
    k = int(rng.integers(0, 5))
    if k == 0:
        F = functions.power_kernel(1.0)
    elif k == 1:
        F = functions.power_kernel(0.5)
    elif k == 2:
        F = functions.power_kernel(float(rng.uniform(0.1, 0.9)))
    elif k == 3:
        F = functions.neglog_kernel()
    else:
        F = functions.sld()
    floor = min(0.05, 0.5 / n)
    D1 = random_density(n, floor=floor, seed=rng)
    D2 = random_density(n, floor=floor, seed=rng)
    A = _random_complex(n, rng)
    dense = linalg.relmod_dense(F, D1, D2)
    r1 = float(np.max(np.abs(linalg.relmod_apply(F, D1, D2, A) - dense(A))))
    alpha = float(rng.uniform(0.1, 0.9))
    q = quantities.quasi_entropy(functions.power_kernel(alpha), A, D1, D2).value
    D2a = linalg.apply_matrix_function(lambda x: x ** alpha, D2)
    D1b = linalg.apply_matrix_function(lambda x: x ** (1.0 - alpha), D1)
    direct = complex(np.trace(A.conj().T @ D2a @ A @ D1b))
    r2 = abs(q - direct)
    return None, max(r1, r2), digest_inputs(F.name, alpha, D1, D2, A)


def _run_wyd_consistency(rng, dims):
    n = _dim(rng, dims)
    p = float(rng.uniform(0.05, 0.95))
    D = random_density(n, floor=min(0.03, 0.5 / n), seed=rng)
    X = random_hermitian(n, rng)
    r = abs(quantities.skew_info(functions.wyd(p), D, X) - quantities.wyd_direct(p, D, X))
    return None, r, digest_inputs(p, D, X)


def _run_renyi_limit(rng, dims):
    n = _dim(rng, dims)
    floor = min(0.03, 0.5 / n)
    D1 = random_density(n, floor=floor, seed=rng)
    D2 = random_density(n, floor=floor, seed=rng)
    u = quantities.umegaki(D1, D2)
    gaps = [abs(quantities.renyi(a, D1, D2) - u) for a in _RENYI_ALPHAS]
    margin = min(gaps[0] - gaps[1], gaps[1] - gaps[2])
    return margin, gaps[-1], digest_inputs(D1, D2)


_SUITE_RUNNERS = {
    "standardness": _run_standardness,
    "operator-monotone": _run_operator_monotone,
    "scalar-gibi": _run_scalar_gibi,
    "skew-identity": _run_skew_identity,
    "hessian": _run_hessian,
    "lemma-commuting": _run_lemma_commuting,
    "lemma-cross": _run_lemma_cross,
    "monotonicity": _run_monotonicity,
    "concavity": _run_concavity,
    "det-uncertainty": _run_det_uncertainty,
    "oracle-equivalence": _run_oracle_equivalence,
    "wyd-consistency": _run_wyd_consistency,
    "renyi-limit": _run_renyi_limit,
}

SUITE_NAMES = tuple(_SUITE_RUNNERS)

_DEFAULT_TOLERANCES = {
    "standardness": {"margin": math.inf, "residual": 1e-9},
    "operator-monotone": {"margin": 1e-8, "residual": 1e-10},
    "scalar-gibi": {"margin": 1e-10, "residual": math.inf},
    "skew-identity": {"margin": math.inf, "residual": 1e-9},
    "hessian": {"margin": math.inf, "residual": 1e-5},
    "lemma-commuting": {"margin": math.inf, "residual": 1e-6},
    "lemma-cross": {"margin": math.inf, "residual": 1e-6},
    "monotonicity": {"margin": 1e-8, "residual": math.inf},
    "concavity": {"margin": 1e-8, "residual": math.inf},
    "det-uncertainty": {"margin": 1e-9, "residual": math.inf},
    "oracle-equivalence": {"margin": math.inf, "residual": 1e-10},
    "wyd-consistency": {"margin": math.inf, "residual": 1e-9},
    "renyi-limit": {"margin": 1e-12, "residual": 1e-2},
}


def run_suite(name: str, trials: int = 200, seed: int = 0, dims=(4,), tolerances=None) -> TrialReport:
    """Run a named property suite; deterministic in ``(seed, trials, dims)``.

    ``tolerances`` may override the per-suite defaults with keys
    ``margin`` and/or ``residual``.  A trial fails when its margin drops
    below ``-margin_tolerance`` or its residual exceeds the residual
    tolerance; failures record the derived trial seed, an input digest,
    and the offending value.
    """
    if name not in _SUITE_RUNNERS:
        raise DomainError(f"unknown suite {name!r}")
    if int(seed) < 0:
        raise DomainError("suite seed must be nonnegative")
    tol = dict(_DEFAULT_TOLERANCES[name])
    if tolerances:
        for key, value in tolerances.items():
            if key not in ("margin", "residual"):
                raise DomainError(f"unknown tolerance {key!r}")
            tol[key] = float(value)
    dims = tuple(int(d) for d in dims)
    if not dims or any(d < 1 for d in dims):
        raise DomainError(f"dims must be positive integers, got {dims!r}")
    runner = _SUITE_RUNNERS[name]
    margins: list[float] = []
    residuals: list[float] = []
    failures: list[dict] = []
    start = time.perf_counter()
    for i in range(int(trials)):
        rng = np.random.default_rng(np.random.SeedSequence([int(seed), i]))
        margin, residual, digest = runner(rng, dims)
        offending = None
        if margin is not None:
            margins.append(float(margin))
            if margin < -tol["margin"]:
                offending = float(margin)
        if residual is not None:
            residuals.append(float(residual))
            if residual > tol["residual"] and offending is None:
                offending = float(residual)
        if offending is not None:
            failures.append({"seed": f"{seed}:{i}", "digest": digest, "value": offending})
    elapsed = time.perf_counter() - start
    return TrialReport(
        suite=name,
        trials=int(trials),
        min_margin=min(margins) if margins else None,
        max_residual=max(residuals) if residuals else None,
        failures=failures,
        elapsed=elapsed,
        margin_tolerance=tol["margin"],
        residual_tolerance=tol["residual"],
    )

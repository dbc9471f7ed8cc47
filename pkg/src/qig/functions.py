"""Standard operator monotone functions and their calculus.

A *standard* function is positive on (0, oo), fixes 1, and satisfies the
symmetry ``x f(1/x) = f(x)``; every operator monotone standard function is
pinched between the harmonic-mean kernel ``2x/(x+1)`` and the
arithmetic-mean kernel ``(1+x)/2``.  This module holds the named catalog
(the CLI grammar ``sld | harmonic | kubo-mori | wyd:<p> | extremal:<lambda>
| hansen:<file>``), the extremal kernel family and its probability
mixtures, the transform sending a metric function to its covariance
kernel, and grid/sampling validators for standardness, operator
monotonicity, and the scalar uncertainty inequality.

Values at zero are stored analytically per catalog entry, never estimated
by limit sampling: they multiply whole identities, so they must be exact.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import linalg
from .errors import DomainError, FileFormatError, InvariantViolation, VerificationError

#: half-width of the window around x = 1 where removable singularities are
#: evaluated by a second-order expansion instead of the raw formula
_SERIES_WINDOW = 1e-4


@dataclass(frozen=True)
class ScalarFunctionSpec:
    """A scalar function on the positive half-line with exact metadata.

    ``value_at_zero`` is the limit at 0+; ``second_derivative_at_one`` is
    the analytic value when known and None when it has to be estimated
    numerically.  The ``claims_*`` flags record what the construction
    guarantees; validators can only falsify them.
    """

    name: str
    fn: Callable
    value_at_zero: float
    second_derivative_at_one: float | None = None
    claims_standard: bool = False
    claims_operator_monotone: bool = False

    def __call__(self, x):
        return self.fn(x)


def probe_grid() -> np.ndarray:
    """60 log-spaced points spanning [1e-3, 1e3] plus the symmetry pivot 1."""
    return np.sort(np.append(np.geomspace(1e-3, 1e3, 60), 1.0))


def _with_series(direct, series, x):
    """Evaluate ``direct`` away from 1 and ``series`` inside the window."""
    x = np.asarray(x)
    t = x - 1.0
    near = np.abs(t) < _SERIES_WINDOW
    safe = np.where(near, 2.0, x)
    with np.errstate(all="ignore"):
        out = np.where(near, series(t), direct(safe))
    return out[()]


def sld() -> ScalarFunctionSpec:
    """Arithmetic-mean function ``(1+x)/2``, the largest standard function."""
    return ScalarFunctionSpec(
        name="sld",
        fn=lambda x: (1.0 + x) / 2.0,
        value_at_zero=0.5,
        second_derivative_at_one=0.0,
        claims_standard=True,
        claims_operator_monotone=True,
    )


def harmonic() -> ScalarFunctionSpec:
    """Harmonic-mean function ``2x/(x+1)``, the smallest standard function."""
    return ScalarFunctionSpec(
        name="harmonic",
        fn=lambda x: 2.0 * x / (x + 1.0),
        value_at_zero=0.0,
        second_derivative_at_one=-0.5,
        claims_standard=True,
        claims_operator_monotone=True,
    )


def kubo_mori() -> ScalarFunctionSpec:
    """``(x-1)/log x``, the logarithmic-mean function.

    The removable singularity at x = 1 is handled by the expansion
    ``1 + t/2 - t^2/12`` inside ``|x-1| < 1e-4`` to dodge catastrophic
    cancellation.
    """

    def fn(x):
        return _with_series(
            lambda s: (s - 1.0) / np.log(s),
            lambda t: 1.0 + t / 2.0 - t * t / 12.0,
            x,
        )

    return ScalarFunctionSpec("kubo-mori", fn, 0.0, -1.0 / 6.0, True, True)


def wyd(p: float) -> ScalarFunctionSpec:
    """``p(1-p)(x-1)^2 / ((x^p - 1)(x^{1-p} - 1))`` for p in (0, 1).

    The skew information of this function reproduces the commutator form
    ``-Tr [D^p, X][D^{1-p}, X] / 2``.  Limit values: 1 at x = 1 (removable,
    evaluated by series near 1) and ``p(1-p)`` at x = 0.
    """
    if not 0.0 < p < 1.0:
        raise DomainError(f"wyd parameter must lie inside (0, 1), got {p!r}")
    c0 = p * (1.0 - p)
    c2 = (p - p * p - 1.0) / 12.0

    def fn(x):
        return _with_series(
            lambda s: c0 * (s - 1.0) ** 2 / ((s ** p - 1.0) * (s ** (1.0 - p) - 1.0)),
            lambda t: 1.0 + t / 2.0 + c2 * t * t,
            x,
        )

    return ScalarFunctionSpec(f"wyd:{p:g}", fn, c0, -(p * p - p + 1.0) / 6.0, True, True)


def extremal_kernel(lam: float) -> Callable:
    """Kernel ``((1+l)/2) (1/(x+l) + 1/(1+x l))`` for l in [0, 1].

    The family is pointwise decreasing in l, with largest member
    ``(x+1)/(2x)`` at l = 0 and smallest ``2/(x+1)`` at l = 1.
    """
    if not 0.0 <= lam <= 1.0:
        raise DomainError(f"extremal parameter must lie in [0, 1], got {lam!r}")

    def g(x):
        return 0.5 * (1.0 + lam) * (1.0 / (x + lam) + 1.0 / (1.0 + x * lam))

    return g


def extremal_metric(lam: float) -> ScalarFunctionSpec:
    """Standard function whose reciprocal is the extremal kernel at ``lam``.

    Closed form ``2(x+l)(1+xl) / ((1+l)^2 (1+x))`` with value
    ``2l/(1+l)^2`` at zero; l = 0 gives the harmonic-mean function and
    l = 1 the arithmetic-mean one.
    """
    if not 0.0 <= lam <= 1.0:
        raise DomainError(f"extremal parameter must lie in [0, 1], got {lam!r}")
    scale = (1.0 + lam) ** 2

    def fn(x):
        return 2.0 * (x + lam) * (1.0 + x * lam) / (scale * (1.0 + x))

    return ScalarFunctionSpec(f"extremal:{lam:g}", fn, 2.0 * lam / scale, None, True, True)


@dataclass(frozen=True)
class DiscreteMeasure:
    """Finitely supported probability measure on [0, 1]."""

    atoms: tuple[float, ...]
    weights: tuple[float, ...]

    def __post_init__(self):
        if not self.atoms or len(self.atoms) != len(self.weights):
            raise InvariantViolation("measure needs matching, nonempty atom and weight lists")
        if any(a < 0.0 or a > 1.0 for a in self.atoms):
            raise InvariantViolation("measure atoms must lie in [0, 1]")
        if any(w < 0.0 for w in self.weights):
            raise InvariantViolation("measure weights must be nonnegative")
        if abs(sum(self.weights) - 1.0) > 1e-12:
            raise InvariantViolation("measure weights must sum to one")

    @classmethod
    def from_pairs(cls, pairs) -> "DiscreteMeasure":
        return cls(tuple(float(a) for a, _ in pairs), tuple(float(w) for _, w in pairs))


def dirac(lam: float) -> DiscreteMeasure:
    """Point mass at ``lam``."""
    return DiscreteMeasure((float(lam),), (1.0,))


def hansen_mixture(measure: DiscreteMeasure) -> ScalarFunctionSpec:
    """Standard function built from a probability mixture of extremal kernels.

    The reciprocal of the result is ``sum_k w_k g_{a_k}``.  The value at
    zero comes analytically from ``g_a(0) = (1+a)^2 / (2a)``: it vanishes
    exactly when the measure charges the atom 0.
    """
    kernels = [(w, extremal_kernel(a)) for a, w in zip(measure.atoms, measure.weights)]

    def fn(x):
        acc = None
        for w, g in kernels:
            if w == 0.0:
                continue
            term = w * g(x)
            acc = term if acc is None else acc + term
        return 1.0 / acc

    charged = [(a, w) for a, w in zip(measure.atoms, measure.weights) if w > 0.0]
    if any(a == 0.0 for a, _ in charged):
        f0 = 0.0
    else:
        f0 = 1.0 / sum(w * (1.0 + a) ** 2 / (2.0 * a) for a, w in charged)
    label = ",".join(f"{a:g}:{w:g}" for a, w in zip(measure.atoms, measure.weights))
    return ScalarFunctionSpec(f"hansen[{label}]", fn, f0, None, True, True)


def covariance_kernel(f: ScalarFunctionSpec) -> ScalarFunctionSpec:
    """Covariance kernel ``((x+1) - (x-1)^2 f(0)/f(x)) / 2`` of a standard f.

    Generalized covariance with this kernel falls short of the symmetric
    covariance by exactly the skew information of f, so the transform turns
    a metric function into the matching covariance kernel.  It is standard
    and operator monotone again; its value at zero is 0 (or 1/2 when
    f(0) = 0, where the quadratic term drops and the kernel degenerates to
    ``(x+1)/2``), and its second derivative at 1 is ``-f(0)``.
    """
    if not f.claims_standard:
        raise DomainError(f"covariance kernel needs a standard function, got {f.name!r}")
    f0 = f.value_at_zero
    name = f"cov[{f.name}]"
    if f0 == 0.0:
        return ScalarFunctionSpec(name, lambda x: (1.0 + x) / 2.0, 0.5, 0.0, True, True)
    base = f.fn

    def fn(x):
        return 0.5 * ((x + 1.0) - (x - 1.0) ** 2 * f0 / base(x))

    return ScalarFunctionSpec(name, fn, 0.0, -f0, True, True)


def power_kernel(alpha: float) -> ScalarFunctionSpec:
    """``x^alpha``; operator monotone increasing exactly for alpha in (0, 1]."""
    if alpha <= 0.0:
        raise DomainError(f"power kernel needs a positive exponent, got {alpha!r}")
    return ScalarFunctionSpec(
        name=f"power:{alpha:g}",
        fn=lambda x: x ** alpha,
        value_at_zero=0.0,
        second_derivative_at_one=alpha * (alpha - 1.0),
        claims_standard=False,
        claims_operator_monotone=0.0 < alpha <= 1.0,
    )


def neglog_kernel() -> ScalarFunctionSpec:
    """``-log x``, the relative-entropy kernel (operator monotone decreasing)."""
    return ScalarFunctionSpec("neglog", lambda x: -np.log(x), math.inf, 1.0, False, False)


def renyi_kernel(alpha: float) -> ScalarFunctionSpec:
    """``(1 - x^alpha)/(alpha(1-alpha))``, operator convex decreasing kernel.

    Defined for alpha in (-1, 1) without 0; the alpha -> 0 limit is -log x.
    """
    if not -1.0 < alpha < 1.0 or alpha == 0.0:
        raise DomainError("alpha must be nonzero and inside (-1, 1)")
    c = alpha * (1.0 - alpha)
    return ScalarFunctionSpec(
        name=f"renyi:{alpha:g}",
        fn=lambda x: (1.0 - x ** alpha) / c,
        value_at_zero=math.inf if alpha < 0.0 else 1.0 / c,
        second_derivative_at_one=None,
        claims_standard=False,
        claims_operator_monotone=False,
    )


def catalog(name: str, **params) -> ScalarFunctionSpec:
    """Look up a catalog function by name; ``wyd`` needs p, ``extremal`` lam."""
    key = name.replace("-", "_").lower()
    if key == "sld":
        return sld()
    if key == "harmonic":
        return harmonic()
    if key == "kubo_mori":
        return kubo_mori()
    if key == "wyd":
        if "p" not in params:
            raise DomainError("wyd needs the parameter p")
        return wyd(float(params["p"]))
    if key in ("extremal", "extremal_inverse"):
        if "lam" not in params:
            raise DomainError("extremal needs the parameter lam")
        return extremal_metric(float(params["lam"]))
    raise DomainError(f"unknown function name {name!r}")


@dataclass(frozen=True)
class StandardnessReport:
    """Worst grid violations of the standardness contract."""

    symmetry: float
    normalization: float
    lower_bound: float
    upper_bound: float
    passed: bool

    @property
    def max_violation(self) -> float:
        return max(self.symmetry, self.normalization, self.lower_bound, self.upper_bound)


def check_standard(f, grid=None, threshold: float = 1e-9) -> StandardnessReport:
    """Probe the standardness contract of f on a grid.

    Checks the symmetry ``x f(1/x) = f(x)``, the normalization f(1) = 1,
    and the two-sided bound ``2x/(x+1) <= f(x) <= (1+x)/2``; passes when
    every violation stays at or below ``threshold``.
    """
    if grid is None:
        grid = probe_grid()
    x = np.asarray(grid, dtype=float)
    if x.size == 0 or np.any(x <= 0.0):
        raise DomainError("probe grid must be nonempty and strictly positive")
    if not (np.any(x < 1.0) and np.any(x > 1.0)):
        raise DomainError("probe grid must contain points below and above 1")
    fx = np.asarray(f(x), dtype=float)
    finv = np.asarray(f(1.0 / x), dtype=float)
    symmetry = float(np.max(np.abs(x * finv - fx)))
    normalization = abs(float(np.asarray(f(np.asarray(1.0)))) - 1.0)
    lower = max(0.0, float(np.max(2.0 * x / (x + 1.0) - fx)))
    upper = max(0.0, float(np.max(fx - (1.0 + x) / 2.0)))
    passed = max(symmetry, normalization, lower, upper) <= threshold
    return StandardnessReport(symmetry, normalization, lower, upper, passed)


#: fixed upper half-plane grid for the analytic (Pick) sub-check
_PICK_GRID = np.array(
    [
        a + 1j * b
        for b in (0.05, 0.3, 1.0, 4.0)
        for a in (-6.0, -2.5, -1.0, -0.4, 0.0, 0.4, 1.0, 2.5, 6.0)
    ]
)


@dataclass(frozen=True)
class MonotonicityReport:
    """Sampled margins for the matrix order and half-plane sub-checks."""

    loewner_margin: float
    pick_margin: float | None
    pick_skipped: bool
    passed: bool


def check_operator_monotone(
    f,
    seed: int = 0,
    trials: int = 40,
    dim: int = 3,
    loewner_tol: float = 1e-8,
    pick_tol: float = 1e-10,
) -> MonotonicityReport:
    """Sample the matrix-order and upper-half-plane behaviour of f.

    Loewner sub-check: draws pairs ``A <= B`` of Hermitian matrices with
    spectra inside [1e-3, 10] (``B = A + P`` with P positive semidefinite)
    and records the smallest eigenvalue of ``f(B) - f(A)``.  Pick
    sub-check: evaluates f on a fixed grid in the open upper half-plane
    and records the smallest imaginary part; it is skipped and flagged
    when f does not evaluate on complex arguments.  Numerics can only
    falsify monotonicity, never prove it.
    """
    rng = np.random.default_rng(seed)
    loewner = math.inf
    for _ in range(max(0, int(trials))):
        w = rng.uniform(1e-3, 4.5, size=dim)
        U = linalg.haar_unitary(dim, rng)
        A = (U * w) @ U.conj().T
        A = (A + A.conj().T) / 2
        G = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
        P = G @ G.conj().T
        headroom = 10.0 - float(np.max(w))
        P *= rng.uniform(0.05, 1.0) * headroom / float(np.linalg.eigvalsh(P)[-1])
        B = (A + P + (A + P).conj().T) / 2
        diff = linalg.apply_matrix_function(f, B) - linalg.apply_matrix_function(f, A)
        diff = (diff + diff.conj().T) / 2
        loewner = min(loewner, float(np.linalg.eigvalsh(diff)[0]))
    pick_margin = None
    skipped = True
    try:
        with np.errstate(all="ignore"):
            vals = np.asarray(f(_PICK_GRID), dtype=complex)
        if np.all(np.isfinite(vals)):
            pick_margin = float(np.min(vals.imag))
            skipped = False
    except Exception:
        pick_margin = None
    passed = (trials <= 0 or loewner >= -loewner_tol) and (
        skipped or pick_margin >= -pick_tol
    )
    return MonotonicityReport(loewner, pick_margin, skipped, passed)


@dataclass(frozen=True)
class ScalarInequalityReport:
    """Minimum of ``f g - f(0) g(0) (x-1)^2`` over the grid."""

    min_margin: float
    passed: bool


def scalar_inequality_check(f, g, grid=None, threshold: float = 1e-10) -> ScalarInequalityReport:
    """Grid check of ``f(x) g(x) >= f(0) g(0) (x-1)^2`` for standard f, g."""
    if not (f.claims_standard and g.claims_standard):
        raise DomainError("the scalar inequality is stated for standard functions only")
    if grid is None:
        grid = probe_grid()
    x = np.asarray(grid, dtype=float)
    margin = (
        np.asarray(f(x), dtype=float) * np.asarray(g(x), dtype=float)
        - f.value_at_zero * g.value_at_zero * (x - 1.0) ** 2
    )
    m = float(np.min(margin))
    return ScalarInequalityReport(m, m >= -threshold)


def second_derivative_at_one(F, agree_tol: float = 1e-6) -> float:
    """Second derivative of F at 1.

    Returns the stored analytic value when the spec carries one; otherwise
    Richardson-extrapolated central differences anchored at steps 1e-2 and
    5e-3, which must agree within ``agree_tol``.
    """
    carried = getattr(F, "second_derivative_at_one", None)
    if carried is not None:
        return float(carried)
    fn = getattr(F, "fn", F)

    def val(x: float) -> float:
        return float(np.asarray(fn(np.asarray(float(x)))))

    f1 = val(1.0)

    def central(h: float) -> float:
        return (val(1.0 + h) - 2.0 * f1 + val(1.0 - h)) / (h * h)

    def richardson(h: float) -> float:
        return (4.0 * central(h / 2.0) - central(h)) / 3.0

    e1, e2 = richardson(1e-2), richardson(5e-3)
    if abs(e1 - e2) > agree_tol:
        raise VerificationError(
            f"second-derivative estimates disagree ({e1!r} vs {e2!r}): function too noisy near 1"
        )
    return e2


def load_measure(path) -> DiscreteMeasure:
    """Read a measure file: a JSON list of [atom, weight] pairs."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise FileFormatError(f"{path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise FileFormatError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    try:
        pairs = [(float(a), float(w)) for a, w in raw]
    except (TypeError, ValueError) as exc:
        raise FileFormatError(f"{path}: expected a JSON list of [atom, weight] pairs") from exc
    return DiscreteMeasure.from_pairs(pairs)


def _param(arg: str, base: str, what: str) -> float:
    if not arg:
        raise DomainError(f"{base} spec needs a parameter, e.g. {base}:<{what}>")
    try:
        return float(arg)
    except ValueError as exc:
        raise DomainError(f"invalid {what} in {base!r} spec: {arg!r}") from exc


def parse_function_spec(token: str, allow_kernels: bool = False) -> ScalarFunctionSpec:
    """Parse ``sld | harmonic | kubo-mori | wyd:<p> | extremal:<lambda> |
    hansen:<file>``; with ``allow_kernels`` also ``neglog | power:<alpha> |
    identity``."""
    base, _, arg = token.partition(":")
    key = base.strip().lower().replace("_", "-")
    if key == "sld":
        return sld()
    if key == "harmonic":
        return harmonic()
    if key == "kubo-mori":
        return kubo_mori()
    if key == "wyd":
        return wyd(_param(arg, "wyd", "p"))
    if key == "extremal":
        return extremal_metric(_param(arg, "extremal", "lambda"))
    if key == "hansen":
        if not arg:
            raise DomainError("hansen spec needs a measure file, e.g. hansen:mu.json")
        return hansen_mixture(load_measure(arg))
    if allow_kernels:
        if key == "neglog":
            return neglog_kernel()
        if key == "power":
            return power_kernel(_param(arg, "power", "alpha"))
        if key == "identity":
            return power_kernel(1.0)
    raise DomainError(f"unknown function spec {token!r}")


#: rows for the CLI catalog listing
CATALOG_SUMMARY = (
    ("sld", "f(0)=0.5"),
    ("harmonic", "f(0)=0"),
    ("kubo-mori", "f(0)=0"),
    ("wyd:<p>", "f(0)=p(1-p)"),
    ("extremal:<lambda>", "f(0)=2*lambda/(1+lambda)^2"),
    ("hansen:<file>", "f(0)=1/sum_k w_k*(1+a_k)^2/(2*a_k)"),
)

KERNEL_SUMMARY = (
    ("neglog", "relative-entropy kernel -log x"),
    ("power:<alpha>", "x^alpha, operator monotone for alpha in (0,1]"),
    ("identity", "shorthand for power:1"),
)

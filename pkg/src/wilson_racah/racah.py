"""Racah polynomials on {0..N}, their weights, maps to Wilson parameters.

The fourth Racah parameter is tied to the others by delta = -(N + beta + 1),
so it is derived rather than stored. Weights and orthonormalizing factors are
real but need not be positive: for some admissible parameters (including
alpha=0.7, beta=N+0.3, gamma=0.5) they alternate in sign, and the orthonormal
values take the principal complex square root. All orthogonality relations
in this module are bilinear (no complex conjugation).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import special
from .errors import ConstraintError, DegenerateRecursionError, ParamError
from .special import hyp2f1_series, log_pochhammer
from .wilson import WilsonParams

_DEGENERATE_TOL = 1e-12


@dataclass(frozen=True)
class RacahParams:
    """(alpha, beta, gamma, N); delta = -(N + beta + 1) is derived.

    ``strict=False`` skips the inequality checks; it is used for the
    interchanged (dual) parameter set, which lies outside them by design.
    """

    alpha: float
    beta: float
    gamma: float
    N: int
    strict: bool = field(default=True, compare=False, repr=False)

    def __post_init__(self):
        for name in ("alpha", "beta", "gamma"):
            v = float(getattr(self, name))
            if not math.isfinite(v):
                raise ConstraintError(f"{name} must be finite")
            object.__setattr__(self, name, v)
        if int(self.N) != self.N or self.N < 0:
            raise ConstraintError(f"N must be a non-negative integer, got {self.N}")
        object.__setattr__(self, "N", int(self.N))
        if self.strict:
            if not self.alpha > -1:
                raise ConstraintError(f"constraint alpha > -1 violated (alpha = {self.alpha})")
            if not self.gamma > -1:
                raise ConstraintError(f"constraint gamma > -1 violated (gamma = {self.gamma})")
            if not self.beta > self.N - 1:
                raise ConstraintError(
                    f"constraint beta > N - 1 violated (beta = {self.beta}, N = {self.N})")

    @property
    def delta(self) -> float:
        return -(self.N + self.beta + 1)

    def dual(self) -> "RacahParams":
        """Interchange alpha <-> gamma, beta <-> delta (N fixed)."""
        return RacahParams(self.gamma, self.delta, self.alpha, self.N, strict=False)


FIG2_PARAMS = RacahParams(0.7, 10.3, 0.5, 10)


@dataclass(frozen=True)
class RacahTable:
    """Values indexed ``[n, m]`` for n, m in 0..N.

    ``form`` is ``bare`` (the 4F3 alone), ``tilde`` (with the
    (alpha+1)_n (gamma+1)_n / ((alpha+beta+N+2)_n n!) prefactor) or
    ``orthonormal``.
    """

    params: RacahParams
    values: np.ndarray
    form: str = "bare"

    def __post_init__(self):
        v = np.array(self.values)
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def normalized(self) -> bool:
        return self.form == "orthonormal"


# ---------------------------------------------------------------------------
# parameter maps


def map_wilson_to_racah(p: WilsonParams, N: int) -> RacahParams:
    """alpha = mu+a-1, gamma = mu+b-1, beta = nu+b-1; needs mu + nu = -N."""
    if abs(p.mu + p.nu + N) > 1e-12:
        raise ConstraintError(
            f"constraint mu + nu = -N violated (mu + nu = {p.mu + p.nu}, N = {N})")
    return RacahParams(p.mu + p.a - 1, p.nu + p.b - 1, p.mu + p.b - 1, N)


def map_racah_to_wilson(r: RacahParams) -> WilsonParams:
    """mu = (gamma+delta+1)/2, nu = beta + (delta-gamma+1)/2,
    a = alpha - (gamma+delta-1)/2, b = (gamma-delta+1)/2."""
    g, d = r.gamma, r.delta
    return WilsonParams(0.5 * (g + d + 1), r.beta + 0.5 * (d - g + 1),
                        r.alpha - 0.5 * (g + d - 1), 0.5 * (g - d + 1))


# ---------------------------------------------------------------------------
# helpers


def _signed(num: list[tuple[float, int]], den: list[tuple[float, int]], scale: float = 1.0) -> float:
    """prod (a)_n over ``num`` divided by prod over ``den``, times ``scale``."""
    lg, sg = special.signed_log_product(
        [log_pochhammer(a, n) for a, n in num],
        [log_pochhammer(a, n) for a, n in den],
    )
    return scale * sg * math.exp(lg) if sg else 0.0


def _check_index(r: RacahParams, *idx: int) -> None:
    for i in idx:
        if not 0 <= i <= r.N:
            raise ValueError(f"index {i} outside 0..N={r.N}")


def tilde_prefactor(n: int, r: RacahParams) -> float:
    """(alpha+1)_n (gamma+1)_n / ((alpha+beta+N+2)_n n!)."""
    return _signed([(r.alpha + 1, n), (r.gamma + 1, n)], [(r.alpha + r.beta + r.N + 2, n), (1.0, n)])


# ---------------------------------------------------------------------------
# series path


def racah_series(n: int, m: int, r: RacahParams, form: str = "bare") -> float:
    """Bare 4F3(-n, -m, n+alpha+beta+1, m-beta+gamma-N; alpha+1, gamma+1, -N; 1)
    or, with ``form="tilde"``, that value times :func:`tilde_prefactor`.

    Both -n and -m terminate the sum; it is accumulated exactly in rationals.
    """
    if form not in ("bare", "tilde"):
        raise ValueError("form must be 'bare' or 'tilde'")
    _check_index(r, n, m)
    kmax = min(n, m)
    for label, x in (("alpha+1", r.alpha + 1), ("gamma+1", r.gamma + 1), ("-N", -r.N)):
        for j in range(kmax):
            if x + j == 0:
                raise ParamError(f"({label})_k vanishes at k={j + 1}")
    al, be, ga = Fraction(r.alpha), Fraction(r.beta), Fraction(r.gamma)
    big_n = r.N
    c1 = n + al + be + 1
    c2 = m - be + ga - big_n
    total = Fraction(1)
    t = Fraction(1)
    for k in range(kmax):
        t *= Fraction((k - n) * (k - m)) * (c1 + k) * (c2 + k)
        t /= (al + 1 + k) * (ga + 1 + k) * (k - big_n) * (k + 1)
        total += t
    if form == "tilde":
        pre = Fraction(1)
        for j in range(n):
            pre *= (al + 1 + j) * (ga + 1 + j) / ((al + be + big_n + 2 + j) * (j + 1))
        total *= pre
    return float(total)


def racah_series_matrix(r: RacahParams, form: str = "bare") -> np.ndarray:
    size = r.N + 1
    out = np.empty((size, size))
    for n in range(size):
        for m in range(size):
            out[n, m] = racah_series(n, m, r, form)
    return out


# ---------------------------------------------------------------------------
# recursion path


def recursion_coefficients(n: int, r: RacahParams) -> tuple[float, float, float]:
    """``(d_n, l_n, u_n)`` with E_m R~_n = d_n R~_n + l_n R~_{n-1} + u_n R~_{n+1}.

    E_m = (N + beta - gamma - 2m)^2 / 4. At n = 0 the explicit factors of
    ``2n + alpha + beta + 1`` are cancelled so alpha + beta + 1 = 0 is allowed.
    """
    al, be, ga, big_n = r.alpha, r.beta, r.gamma, r.N
    ab = al + be
    for j in (1, 2) if n == 0 else (0, 1, 2):
        if n == 0 and j == 1:
            continue
        if abs(2 * n + ab + j) < _DEGENERATE_TOL:
            raise DegenerateRecursionError(f"denominator 2n+alpha+beta+{j} vanishes at n={n}")
    if n == 0:
        up = (1 - big_n - 1) * (big_n + ab + 2) / (ab + 2)
        down_diag = -big_n * (al + 1) * (ga + 1) / (ab + 2)
        d = 0.25 * (big_n + be - ga) ** 2 - down_diag
        return d, 0.0, up
    d1 = 2 * n + ab + 1
    up = (n + 1) * (n - big_n) * (n + ab + 1) * (n + big_n + ab + 2) / (d1 * (d1 + 1))
    low = (n + al) * (n + be) * (n + ga) * (n + ab - ga) / ((d1 - 1) * d1)
    d = (0.25 * (big_n + be - ga) ** 2
         - (n - big_n) * (n + al + 1) * (n + ga + 1) * (n + ab + 1) / (d1 * (d1 + 1))
         - n * (n + be) * (n + ab - ga) * (n + big_n + ab + 1) / ((d1 - 1) * d1))
    return d, low, up


def eigenvalue(m: int, r: RacahParams) -> float:
    return 0.25 * (r.N + r.beta - r.gamma - 2 * m) ** 2


def racah_recursion(r: RacahParams, m: int) -> np.ndarray:
    """R~_0(m)..R~_N(m) by forward recursion from R~_0 = 1, R~_{-1} = 0."""
    _check_index(r, m)
    out = np.zeros(r.N + 1)
    out[0] = 1.0
    e = eigenvalue(m, r)
    prev = 0.0
    for n in range(r.N):
        d, low, up = recursion_coefficients(n, r)
        if abs(up) < _DEGENERATE_TOL:
            raise DegenerateRecursionError(f"coefficient of R~_(n+1) vanishes at n={n}")
        out[n + 1] = ((e - d) * out[n] - low * prev) / up
        prev = out[n]
    return out


def racah_table(r: RacahParams, form: str = "tilde") -> RacahTable:
    """Column-by-column recursion table in ``tilde`` or ``bare`` form."""
    tilde = np.column_stack([racah_recursion(r, m) for m in range(r.N + 1)])
    if form == "tilde":
        return RacahTable(r, tilde, "tilde")
    if form == "bare":
        pre = np.array([tilde_prefactor(n, r) for n in range(r.N + 1)])
        return RacahTable(r, tilde / pre[:, None], "bare")
    raise ValueError("form must be 'bare' or 'tilde'")


# ---------------------------------------------------------------------------
# weights and constants


def omega(m: int, r: RacahParams) -> float:
    """Unnormalized weight

    (2m+gamma+delta+1)/(m+gamma+delta+1) (-N)_m (alpha+1)_m (gamma+1)_m (gamma+delta+2)_m
    / ((delta+1)_m (gamma-beta+1)_m (gamma-alpha+delta+1)_m m!).

    Written through delta so that the interchange alpha <-> gamma,
    beta <-> delta turns it into :func:`omega_hat`.
    """
    al, be, ga, de, big_n = r.alpha, r.beta, r.gamma, r.delta, r.N
    c = ga + de + 1
    if m + c == 0:
        raise ParamError("weight ratio (2m+c)/(m+c) is singular")
    return _signed(
        [(-big_n, m), (al + 1, m), (ga + 1, m), (c + 1, m)],
        [(de + 1, m), (ga - be + 1, m), (ga - al + de + 1, m), (1.0, m)],
        (2 * m + c) / (m + c),
    )


def omega_hat(m: int, r: RacahParams) -> float:
    """Dual weight

    (2m+alpha+beta+1)/(m+alpha+beta+1) (-N)_m (alpha+1)_m (gamma+1)_m (alpha+beta+2)_m
    / ((beta+1)_m (alpha+beta-gamma+1)_m (alpha+beta+N+2)_m m!).
    """
    al, be, ga, big_n = r.alpha, r.beta, r.gamma, r.N
    ab = al + be
    if m + ab + 1 == 0:
        raise ParamError("dual weight ratio is singular")
    scale = 1.0 if m == 0 else (2 * m + ab + 1) / (m + ab + 1)
    return _signed(
        [(-big_n, m), (al + 1, m), (ga + 1, m), (ab + 2, m)],
        [(be + 1, m), (ab - ga + 1, m), (ab + big_n + 2, m), (1.0, m)],
        scale,
    )


def lambda_forms(r: RacahParams) -> tuple[float, float]:
    """The two equivalent expressions for the total mass lambda^N.

    (-alpha+delta)_N (gamma+delta+2)_N / ((delta+1)_N (gamma-alpha+delta+1)_N)
    and
    (-alpha-beta-N-1)_N (gamma-beta-N+1)_N / ((-beta-N)_N (gamma-alpha-beta-N)_N).
    """
    al, be, ga, de, big_n = r.alpha, r.beta, r.gamma, r.delta, r.N
    first = _signed([(-al + de, big_n), (ga + de + 2, big_n)],
                    [(de + 1, big_n), (ga - al + de + 1, big_n)])
    second = _signed([(-al - be - big_n - 1, big_n), (ga - be - big_n + 1, big_n)],
                     [(-be - big_n, big_n), (ga - al - be - big_n, big_n)])
    return first, second


def racah_duality_constants(r: RacahParams) -> tuple[float, float]:
    """``(lambda^N, lambda_hat^N)``; the hat is lambda under the interchange."""
    lam, lam2 = lambda_forms(r)
    if not math.isclose(lam, lam2, rel_tol=1e-12, abs_tol=0.0):
        raise ParamError(f"printed forms of lambda disagree: {lam} vs {lam2}")
    return lam, lambda_forms(r.dual())[0]


def racah_weight(m: int, r: RacahParams) -> float:
    """Normalized weight rho^N(m) = omega(m) / lambda^N; sums to 1 over m."""
    _check_index(r, m)
    lam = lambda_forms(r)[1]
    if lam == 0:
        raise ParamError("total mass lambda^N vanishes")
    return omega(m, r) / lam


def racah_weights(r: RacahParams) -> np.ndarray:
    return np.array([racah_weight(m, r) for m in range(r.N + 1)])


def weights_positive(r: RacahParams) -> bool:
    """True when every rho^N(m) > 0, i.e. the discrete measure is positive."""
    return bool(np.all(racah_weights(r) > 0))


def norm_radicand(n: int, r: RacahParams) -> float:
    """(2n+alpha+beta+1)/(n+alpha+beta+1) (-N)_n (alpha+1)_n (gamma+1)_n (alpha+beta+2)_n
    / ((beta+1)_n (alpha+beta-gamma+1)_n (alpha+beta+N+2)_n n!)."""
    al, be, ga, big_n = r.alpha, r.beta, r.gamma, r.N
    ab = al + be
    scale = 1.0 if n == 0 else (2 * n + ab + 1) / (n + ab + 1)
    return _signed(
        [(-big_n, n), (al + 1, n), (ga + 1, n), (ab + 2, n)],
        [(be + 1, n), (ab - ga + 1, n), (ab + big_n + 2, n), (1.0, n)],
        scale,
    )


def racah_normalize(r: RacahParams, method: str = "series") -> RacahTable:
    """Orthonormal R_n(m) = sqrt(radicand_n) * bare_n(m).

    The square root is the principal one; the table is complex whenever a
    radicand is negative. Bare values come from the exact series unless
    ``method="recursion"``.
    """
    rad = np.array([norm_radicand(n, r) for n in range(r.N + 1)])
    if np.any(rad == 0):
        raise ParamError("orthonormalization radicand vanishes")
    bare = racah_table(r, "bare").values if method == "recursion" else racah_series_matrix(r)
    vals = np.emath.sqrt(rad)[:, None] * bare
    return RacahTable(r, vals, "orthonormal")


def orthonormal_matrix(r: RacahParams, method: str = "series") -> np.ndarray:
    """U[n, m] = sqrt(rho^N(m)) R_n(m); complex orthogonal: U U^T = U^T U = I."""
    rho = racah_weights(r)
    return racah_normalize(r, method).values * np.emath.sqrt(rho)[None, :]


# ---------------------------------------------------------------------------
# relation checks


def primal_rhs(n: int, r: RacahParams) -> float:
    al, be, ga, big_n = r.alpha, r.beta, r.gamma, r.N
    ab = al + be
    scale = 1.0 if n == 0 else (n + ab + 1) / (2 * n + ab + 1)
    return _signed(
        [(-ab - big_n - 1, big_n), (ga - be - big_n + 1, big_n), (be + 1, n),
         (ab - ga + 1, n), (ab + big_n + 2, n), (1.0, n)],
        [(-be - big_n, big_n), (ga - ab - big_n, big_n), (-big_n, n), (al + 1, n),
         (ga + 1, n), (ab + 2, n)],
        scale,
    )


def dual_rhs(n: int, r: RacahParams) -> float:
    al, be, ga, big_n = r.alpha, r.beta, r.gamma, r.N
    ab = al + be
    c = ga - be - big_n
    scale = 1.0 if n == 0 else (n + c) / (2 * n + c)
    return _signed(
        [(ab + 2, big_n), (be - ga, big_n), (-be - big_n, n), (ga - be + 1, n),
         (ga - ab - big_n, n), (1.0, n)],
        [(be + 1, big_n), (ab - ga + 1, big_n), (-big_n, n), (al + 1, n), (ga + 1, n),
         (c + 1, n)],
        scale,
    )


def _relative_residual(lhs: np.ndarray, rhs: np.ndarray) -> float:
    scale = np.sqrt(np.abs(np.outer(rhs, rhs)))
    return float(np.max(np.abs(lhs - np.diag(rhs)) / scale))


def racah_orthogonality_check(r: RacahParams) -> tuple[float, float]:
    """Relative residuals of the primal and the dual finite orthogonality sums.

    Bare values come from the exact series path so both sides are
    independent of the recursion.
    """
    size = r.N + 1
    bare = racah_series_matrix(r)  # [n, m]
    w = np.array([omega(m, r) for m in range(size)])
    what = np.array([omega_hat(m, r) for m in range(size)])
    primal = (bare * w[None, :]) @ bare.T
    # dual sums over the degree index: sum_m what(m) bare[m, n] bare[m, n']
    dual = bare.T @ (what[:, None] * bare)
    p_rhs = np.array([primal_rhs(n, r) for n in range(size)])
    d_rhs = np.array([dual_rhs(n, r) for n in range(size)])
    return _relative_residual(primal, p_rhs), _relative_residual(dual, d_rhs)


def racah_generating_rhs(r: RacahParams, m: int, t: float) -> complex:
    left = hyp2f1_series(-m, -m + r.beta - r.gamma, -r.N, t)
    right = hyp2f1_series(m + r.alpha + 1, m + r.gamma + 1, r.alpha + r.beta + r.N + 2, t)
    return left * right


def racah_generating_check(r: RacahParams, m: int, t: float) -> float:
    """|sum_n R~_n(m) t^n - 2F1(-m, -m+beta-gamma; -N; t) 2F1(m+alpha+1, m+gamma+1; alpha+beta+N+2; t)|.

    The second factor does not terminate, so the two sides agree through
    order t^N and the residual is the O(t^(N+1)) tail of the product.
    """
    _check_index(r, m)
    if abs(t) >= 1:
        raise ValueError("|t| < 1 required")
    vals = racah_recursion(r, m)
    lhs = special.compensated_sum(list(vals * float(t) ** np.arange(r.N + 1)))
    return abs(lhs - racah_generating_rhs(r, m, t))

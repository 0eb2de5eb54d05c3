"""Wilson polynomials: series and recursion paths, weight, orthonormal form.

Conventions follow the normalization

    W~_n(y^2) = (mu+a)_n (mu+b)_n / ((a+b)_n n!)
                * 4F3(-n, n+s-1, mu+iy, mu-iy; mu+nu, mu+a, mu+b; 1),

with ``s = mu + nu + a + b``. Standard tables carry an extra
``(mu+nu)_n (a+b)_n n!`` relative to this form.
"""

from __future__ import annotations

import math
from fractions import Fraction
from dataclasses import dataclass, field

import numpy as np

from . import special
from .errors import (
    ConstraintError,
    DegenerateRecursionError,
    DomainError,
    FitDegenerateError,
    ParamError,
    PoleError,
)
from .special import compensated_sum, hyp2f1_series, log_gamma, log_pochhammer

_DEGENERATE_TOL = 1e-12
_INT_TOL = 1e-12


@dataclass(frozen=True)
class WilsonParams:
    """The four real Wilson parameters and the derived regime.

    ``scattering``: mu >= 0 with nu, a, b > 0 and all pairwise sums positive.
    ``mixed``: mu < 0 under the same positivity of nu, a, b and the sums,
    giving ``floor(-mu) + 1`` discrete points.
    ``confined``: mu + nu = -N for an integer N >= 0 (image of a Racah
    system); requires mu + a > 0, mu + b > 0 and nu + b > N.
    """

    mu: float
    nu: float
    a: float
    b: float
    regime: str = field(init=False, compare=False)

    def __post_init__(self):
        for name in ("mu", "nu", "a", "b"):
            v = float(getattr(self, name))
            if not math.isfinite(v):
                raise ConstraintError(f"{name} must be finite")
            object.__setattr__(self, name, v)
        object.__setattr__(self, "regime", self._classify())

    def _classify(self) -> str:
        mu, nu, a, b = self.mu, self.nu, self.a, self.b
        mn = mu + nu
        if mn <= _INT_TOL and abs(mn - round(mn)) <= _INT_TOL:
            n_pts = -int(round(mn))
            _require("mu + a > 0", mu + a)
            _require("mu + b > 0", mu + b)
            _require(f"nu + b > N = {n_pts}", nu + b - n_pts)
            return "confined"
        for label, val in (
            ("nu > 0", nu), ("a > 0", a), ("b > 0", b),
            ("mu + nu > 0", mu + nu), ("mu + a > 0", mu + a), ("mu + b > 0", mu + b),
            ("nu + a > 0", nu + a), ("nu + b > 0", nu + b), ("a + b > 0", a + b),
        ):
            _require(label, val)
        return "scattering" if mu >= 0 else "mixed"

    @property
    def s(self) -> float:
        return self.mu + self.nu + self.a + self.b

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.mu, self.nu, self.a, self.b)

    def gamma_shifts(self) -> tuple[float, float, float, float]:
        """Real parts entering A(z): Gamma(mu+z), Gamma(nu+z), Gamma(a+z), Gamma(b+z)."""
        return self.as_tuple()


def _require(label: str, value: float) -> None:
    if not value > 0:
        raise ConstraintError(f"constraint {label} violated (value {value:.6g})")


FIG1_PARAMS = WilsonParams(0.7, 0.2, 0.5, 0.3)


@dataclass(frozen=True)
class WilsonValueTable:
    """Values W~_0..W~_nmax (or orthonormal W_n) at one argument y^2."""

    params: WilsonParams
    y_squared: float
    values: np.ndarray
    normalized: bool = False

    def __post_init__(self):
        v = np.array(self.values, dtype=float)
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def n_max(self) -> int:
        return len(self.values) - 1


# ---------------------------------------------------------------------------
# series path


def _check_series_denominators(n: int, p: WilsonParams) -> None:
    for label, x in (("mu+nu", p.mu + p.nu), ("mu+a", p.mu + p.a), ("mu+b", p.mu + p.b)):
        for j in range(n):
            if x + j == 0:
                raise ParamError(f"({label})_k vanishes at k={j + 1} <= n={n}")


def wilson_series(n: int, y2: float, p: WilsonParams) -> float:
    """W~_n(y^2) from the terminating 4F3 sum of n + 1 terms.

    The terms alternate and cancel strongly, so they are accumulated in
    exact rational arithmetic on the (exactly representable) float inputs
    and rounded once. ``y2`` may be negative; then mu +- iy are the real
    numbers mu -+ sqrt(-y2), which is how bound-state arguments
    y^2 = -(m+mu)^2 are evaluated.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    _check_series_denominators(n, p)
    mu, nu, a, b = (Fraction(x) for x in p.as_tuple())
    y2 = Fraction(float(y2))
    s = mu + nu + a + b
    # running sum S/D and term T/D as unreduced integers; one rounding at the end
    big_s, big_t, big_d = 1, 1, 1
    for k in range(n):
        # (mu+iy)_k (mu-iy)_k grows by (mu+k)^2 + y^2 per step
        num = (k - n) * (k + n + s - 1) * ((mu + k) ** 2 + y2)
        den = (mu + nu + k) * (mu + a + k) * (mu + b + k) * (k + 1)
        if num == 0:
            break
        big_t = big_t * num.numerator * den.denominator
        scale = den.numerator * num.denominator
        big_s = big_s * scale + big_t
        big_d *= scale
    pre_num, pre_den = 1, 1
    for j in range(n):
        f = (mu + a + j) * (mu + b + j) / ((a + b + j) * (j + 1))
        pre_num *= f.numerator
        pre_den *= f.denominator
    # int / int is correctly rounded
    return (big_s * pre_num) / (big_d * pre_den)


def _cmul(x, y):
    return (x[0] * y[0] - x[1] * y[1], x[0] * y[1] + x[1] * y[0])


def wilson_series_branch(n: int, y: complex, p: WilsonParams) -> complex:
    """Same sum with the complex pair ``mu + iy, mu - iy`` kept as separate factors.

    Gaussian rationals (pairs of Fractions) keep the sum exact, so the
    result for ``y`` and ``-y`` can be compared without rounding noise.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    _check_series_denominators(n, p)
    y = complex(y)
    mu, nu, a, b = (Fraction(x) for x in p.as_tuple())
    s = mu + nu + a + b
    yr, yi = Fraction(y.real), Fraction(y.imag)
    plus = (mu - yi, yr)    # mu + iy
    minus = (mu + yi, -yr)  # mu - iy
    t = (Fraction(1), Fraction(0))
    total = t
    for k in range(n):
        t = _cmul(t, (plus[0] + k, plus[1]))
        t = _cmul(t, (minus[0] + k, minus[1]))
        scale = Fraction((k - n)) * (k + n + s - 1) / (
            (mu + nu + k) * (mu + a + k) * (mu + b + k) * (k + 1))
        t = (t[0] * scale, t[1] * scale)
        total = (total[0] + t[0], total[1] + t[1])
    pre = Fraction(1)
    for j in range(n):
        pre *= (mu + a + j) * (mu + b + j) / ((a + b + j) * (j + 1))
    return complex(float(pre * total[0]), float(pre * total[1]))


# ---------------------------------------------------------------------------
# recursion path


def recursion_coefficients(n, p: WilsonParams):
    """Coefficients of ``y^2 W~_n = d_n W~_n - c_n W~_{n-1} - u_n W~_{n+1}``.

    Returns ``(d_n, c_n, u_n)``; ``n`` may be an integer array.
    """
    mu, nu, a, b, s = p.mu, p.nu, p.a, p.b, p.s
    n = np.asarray(n, dtype=float)
    big_a = (n + mu + nu) * (n + mu + a) * (n + mu + b) * (n + s - 1) / ((2 * n + s) * (2 * n + s - 1))
    big_c = n * (n + nu + a - 1) * (n + nu + b - 1) * (n + a + b - 1) / ((2 * n + s - 1) * (2 * n + s - 2))
    c = (n + mu + a - 1) * (n + mu + b - 1) * (n + nu + a - 1) * (n + nu + b - 1) / (
        (2 * n + s - 1) * (2 * n + s - 2))
    u = (n + 1) * (n + mu + nu) * (n + a + b) * (n + s - 1) / ((2 * n + s) * (2 * n + s - 1))
    return big_a + big_c - mu * mu, c, u


def _check_recursion(n_max: int, p: WilsonParams) -> None:
    s = p.s
    if n_max >= 1 and (abs(p.mu + p.nu) < _DEGENERATE_TOL or abs(p.a + p.b) < _DEGENERATE_TOL):
        raise DegenerateRecursionError("seed W~_1 needs (mu+nu)(a+b) != 0")
    for n in range(1, n_max):
        for j in (0, 1, 2):
            if abs(2 * n + s - j) < _DEGENERATE_TOL:
                raise DegenerateRecursionError(f"denominator 2n+s-{j} vanishes at n={n}")
        if abs(n + p.mu + p.nu) < _DEGENERATE_TOL or abs(n + s - 1) < _DEGENERATE_TOL:
            raise DegenerateRecursionError(f"coefficient of W~_(n+1) vanishes at n={n}")


def tilde_table(n_max: int, y2, p: WilsonParams) -> np.ndarray:
    """Vectorized forward recursion; shape ``(n_max + 1,) + shape(y2)``."""
    if n_max < 0:
        raise ValueError("n_max must be non-negative")
    _check_recursion(n_max, p)
    y2 = np.asarray(y2, dtype=float)
    out = np.empty((n_max + 1,) + y2.shape)
    out[0] = 1.0
    if n_max == 0:
        return out
    mu, nu, a, b, s = p.mu, p.nu, p.a, p.b, p.s
    out[1] = (mu + a) * (mu + b) / (a + b) - s / ((mu + nu) * (a + b)) * (y2 + mu * mu)
    if n_max >= 2:
        d, c, u = recursion_coefficients(np.arange(1, n_max), p)
        for n in range(1, n_max):
            k = n - 1
            out[n + 1] = ((d[k] - y2) * out[n] - c[k] * out[n - 1]) / u[k]
    return out


def wilson_recursion(n_max: int, y2: float, p: WilsonParams) -> WilsonValueTable:
    """Table of W~_0..W~_nmax from the three-term recursion and printed seeds."""
    vals = tilde_table(n_max, float(y2), p)
    return WilsonValueTable(p, float(y2), vals, normalized=False)


# ---------------------------------------------------------------------------
# orthonormal form


def log_norm_radicand(n_max: int, p: WilsonParams) -> tuple[np.ndarray, np.ndarray]:
    """``(log|r_n|, sign r_n)`` for the orthonormalizing radicand, n = 0..n_max.

    r_n = (2n+s-1)/(n+s-1) (mu+nu)_n (a+b)_n (s)_n n!
          / ((mu+a)_n (mu+b)_n (nu+a)_n (nu+b)_n),  r_0 = 1.
    Accumulated through the ratio r_n / r_{n-1} to keep every step O(1).
    """
    mu, nu, a, b, s = p.mu, p.nu, p.a, p.b, p.s
    logs = np.zeros(n_max + 1)
    signs = np.ones(n_max + 1, dtype=int)
    if n_max == 0:
        return logs, signs
    n = np.arange(1, n_max + 1, dtype=float)
    k = n - 1
    ratio = (mu + nu + k) * (a + b + k) * (s + k) * n / (
        (mu + a + k) * (mu + b + k) * (nu + a + k) * (nu + b + k))
    lead = (2 * n + s - 1) / (n + s - 1)
    prev = np.ones_like(n)
    prev[1:] = ((2 * n + s - 3) / (n + s - 2))[1:]
    # n = 1: (s+1)/s * (mu+nu)(a+b) s / (...); the (s-1)/(s-1) of r_0 is 1
    step = ratio * lead / prev
    step[0] = (s + 1) * (mu + nu) * (a + b) / ((mu + a) * (mu + b) * (nu + a) * (nu + b))
    if np.any(step == 0) or not np.all(np.isfinite(step)):
        raise ParamError("orthonormalization factor vanishes or is singular")
    logs[1:] = np.cumsum(np.log(np.abs(step)))
    signs[1:] = np.cumprod(np.sign(step)).astype(int)
    return logs, signs


def norm_factors(n_max: int, p: WilsonParams) -> np.ndarray:
    logs, signs = log_norm_radicand(n_max, p)
    if np.any(signs <= 0):
        bad = int(np.argmax(signs <= 0))
        raise ParamError(f"orthonormalization radicand is negative at n={bad}")
    return np.exp(0.5 * logs)


def wilson_normalize(table: WilsonValueTable) -> WilsonValueTable:
    """Orthonormal W_n = sqrt(r_n) W~_n for every entry of ``table``."""
    if table.normalized:
        return table
    f = norm_factors(table.n_max, table.params)
    return WilsonValueTable(table.params, table.y_squared, f * table.values, normalized=True)


def orthonormal_table(n_max: int, y2, p: WilsonParams) -> np.ndarray:
    """Vectorized orthonormal values, shape ``(n_max + 1,) + shape(y2)``."""
    vals = tilde_table(n_max, y2, p)
    f = norm_factors(n_max, p)
    return vals * f.reshape((-1,) + (1,) * (vals.ndim - 1))


def symmetric_recursion_coefficients(n, p: WilsonParams):
    """``(d_n, e_n)`` of ``y^2 W_n = d_n W_n - e_n W_{n-1} - e_{n+1} W_{n+1}``.

    ``e_n`` is the geometric mean of the off-diagonal pair of the monic-type
    recursion, so it carries the factor ``n`` and ``e_0 = 0``.
    """
    mu, nu, a, b, s = p.mu, p.nu, p.a, p.b, p.s
    n = np.asarray(n, dtype=float)
    d, _, _ = recursion_coefficients(n, p)
    m = n - 1
    num = ((m + 1) * (m + mu + nu) * (m + a + b) * (m + mu + a) * (m + mu + b)
           * (m + nu + a) * (m + nu + b) * (m + s - 1))
    with np.errstate(invalid="ignore", divide="ignore"):
        e = np.sqrt(num / ((2 * m + s - 1) * (2 * m + s + 1))) / (2 * m + s)
    e = np.where(n == 0, 0.0, e)
    return d, e


# ---------------------------------------------------------------------------
# weight, amplitude


def _log_weight_constant(p: WilsonParams) -> float:
    args = (p.mu + p.nu, p.a + p.b, p.mu + p.a, p.mu + p.b, p.nu + p.a, p.nu + p.b)
    try:
        lg_s, sg_s = special.log_abs_gamma(p.s)
        parts = [special.log_abs_gamma(x) for x in args]
    except PoleError as exc:
        raise ParamError(f"weight prefactor has a gamma pole: {exc}") from exc
    lg, sg = special.signed_log_product([(lg_s, sg_s)], parts)
    if sg <= 0:
        raise ParamError("weight prefactor is negative for these parameters")
    return lg - math.log(2 * math.pi)


def log_wilson_weight(y, p: WilsonParams):
    """log rho(y) for y > 0 (array or scalar)."""
    y = np.asarray(y, dtype=float)
    if np.any(y <= 0):
        raise DomainError("log weight requires y > 0")
    iy = 1j * y
    acc = _log_weight_constant(p) - 2.0 * log_gamma(2 * iy).real
    for x in p.as_tuple():
        acc = acc + 2.0 * log_gamma(x + iy).real
    return acc


def wilson_weight(y, p: WilsonParams):
    """Normalized weight rho(y); the y = 0 endpoint returns its limit 0."""
    y_arr = np.asarray(y, dtype=float)
    if np.any(y_arr < 0):
        raise DomainError("weight is defined for y >= 0")
    out = np.zeros(y_arr.shape)
    pos = y_arr > 0
    if np.any(pos):
        out[pos] = np.exp(log_wilson_weight(y_arr[pos], p))
    return float(out) if y_arr.ndim == 0 else out


def log_amplitude(y: float, p: WilsonParams) -> complex:
    """log A(iy) with A(z) = Gamma(2z) / prod Gamma(x + z)."""
    z = 1j * float(y)
    acc = log_gamma(2 * z)
    for x in p.gamma_shifts():
        acc -= log_gamma(x + z)
    return acc


def scattering_amplitude(y: float, p: WilsonParams) -> tuple[float, float]:
    """``(|A(iy)|, arg A(iy))`` with the phase in (-pi, pi]."""
    if not y > 0:
        raise DomainError("scattering amplitude requires y > 0")
    mag = math.exp(log_amplitude(y, p).real)
    z = 1j * float(y)
    phase = special.gamma_ratio_arg([(2 * z, 1)] + [(x + z, -1) for x in p.gamma_shifts()])
    return mag, phase


def amplitude(z: complex, p: WilsonParams) -> complex:
    """A(z) at a general complex point; zero where a denominator gamma has a pole."""
    z = complex(z)
    val = complex(np.exp(log_gamma(2 * z)))
    for x in p.gamma_shifts():
        val *= special.rgamma(x + z)
    return val


# ---------------------------------------------------------------------------
# cross-checks


def wilson_generating_rhs(p: WilsonParams, y: float, t: float) -> complex:
    """2F1(mu+iy, nu+iy; mu+nu; t) * 2F1(a-iy, b-iy; a+b; t)."""
    iy = 1j * y
    f1 = hyp2f1_series(p.mu + iy, p.nu + iy, p.mu + p.nu, t)
    f2 = hyp2f1_series(p.a - iy, p.b - iy, p.a + p.b, t)
    return f1 * f2


def wilson_generating_check(p: WilsonParams, y: float, t: float, n_trunc: int) -> float:
    """|sum_{n<=n_trunc} W~_n t^n - generating product| at argument y."""
    if abs(t) >= 1:
        raise ValueError("|t| < 1 required")
    vals = tilde_table(n_trunc, y * y, p)
    lhs = compensated_sum(list(vals * float(t) ** np.arange(n_trunc + 1)))
    return abs(lhs - wilson_generating_rhs(p, y, t))


def asymptotic_prediction(p: WilsonParams, y: float) -> tuple[float, float]:
    """Predicted ``(amplitude, phase)`` of n W~_n ~ amp * cos(2y ln n + phase)."""
    mag, phase = scattering_amplitude(y, p)
    pref = math.exp(log_gamma(p.mu + p.nu).real + log_gamma(p.a + p.b).real)
    return 2.0 * pref * mag, phase


def wilson_asymptotic_fit(p: WilsonParams, y: float,
                          n_window: tuple[int, int] = (500, 2000)) -> tuple[float, float]:
    """Least-squares fit of n W~_n to c cos(2y ln n + phi) over ``n_window``.

    Linear in the regressors cos(2y ln n), sin(2y ln n); returns
    ``(amp_hat, phase_hat)`` with the phase in (-pi, pi].
    """
    lo, hi = n_window
    if not (hi >= 2 * lo and 2 * lo >= 500):
        raise ValueError("window must satisfy hi >= 2*lo >= 500")
    vals = tilde_table(hi, y * y, p)
    n = np.arange(lo, hi + 1, dtype=float)
    target = n * vals[lo:hi + 1]
    theta = 2.0 * y * np.log(n)
    design = np.column_stack([np.cos(theta), np.sin(theta)])
    sv = np.linalg.svd(design, compute_uv=False)
    if sv[-1] <= 1e-8 * sv[0]:
        raise FitDegenerateError(f"window too short for y={y}: singular values {sv}")
    (c1, c2), *_ = np.linalg.lstsq(design, target, rcond=None)
    return math.hypot(c1, c2), special.wrap_phase(math.atan2(-c2, c1))

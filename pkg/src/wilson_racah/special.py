"""Complex log-gamma, reciprocal gamma, Pochhammer symbols and series sums.

Complex arguments are plain Python ``complex`` (or numpy complex arrays);
non-finite input is rejected at the boundary of every public function.
"""

from __future__ import annotations

import math
from typing import Iterable, Sequence

import numpy as np

from .errors import ConvergenceError, ParamError, PoleError

# Lanczos approximation, g = 7, nine coefficients (double precision).
LANCZOS_G = 7.0
LANCZOS_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
POLE_TOL = 1e-14
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)


def _as_complex_array(z) -> np.ndarray:
    arr = np.asarray(z, dtype=complex)
    if not np.all(np.isfinite(arr)):
        raise ValueError("non-finite argument")
    return arr


def _pole_mask(z: np.ndarray) -> np.ndarray:
    near_int = np.abs(z.real - np.round(z.real)) <= POLE_TOL
    return near_int & (np.round(z.real) <= 0) & (np.abs(z.imag) <= POLE_TOL)


def _lanczos_log(w: np.ndarray) -> np.ndarray:
    # valid for Re w >= 0.5
    zm1 = w - 1.0
    x = np.full(w.shape, LANCZOS_COEF[0], dtype=complex)
    for k in range(1, len(LANCZOS_COEF)):
        x = x + LANCZOS_COEF[k] / (zm1 + k)
    t = zm1 + LANCZOS_G + 0.5
    return _HALF_LOG_2PI + (zm1 + 0.5) * np.log(t) - t + np.log(x)


def _shift(z: np.ndarray) -> np.ndarray:
    return np.where(z.real < 0.5, np.ceil(0.5 - z.real), 0.0).astype(int)


def _log_gamma_array(z: np.ndarray) -> np.ndarray:
    # Re z < 0.5 is moved right by upward recurrence so that
    # log_gamma(z + 1) = log(z) + log_gamma(z) holds by construction.
    k = _shift(z)
    out = _lanczos_log(z + k)
    for j in range(int(k.max(initial=0))):
        m = k > j
        out[m] -= np.log(z[m] + j)
    return out


def log_gamma(z):
    """Log-gamma on the principal branch (cut along the negative real axis).

    Accepts a scalar or an array. Raises :class:`PoleError` when any argument
    lies within ``POLE_TOL`` of a non-positive integer.
    """
    arr = _as_complex_array(z)
    if np.any(_pole_mask(arr)):
        raise PoleError(f"log_gamma pole at {z!r}")
    out = _log_gamma_array(np.atleast_1d(arr))
    if arr.ndim == 0:
        return complex(out[0])
    return out.reshape(arr.shape)


def rgamma(z):
    """Reciprocal gamma ``1/Gamma(z)``; exactly zero at the poles of Gamma."""
    arr = np.atleast_1d(_as_complex_array(z))
    k = _shift(arr)
    out = np.exp(-_lanczos_log(arr + k))
    for j in range(int(k.max(initial=0))):
        m = k > j
        out[m] *= arr[m] + j
    if np.ndim(z) == 0:
        return complex(out[0])
    return out.reshape(np.shape(z))


def log_abs_gamma(x: float) -> tuple[float, int]:
    """``(log|Gamma(x)|, sign Gamma(x))`` for real ``x`` off the poles."""
    x = float(x)
    if x <= 0 and abs(x - round(x)) <= POLE_TOL:
        raise PoleError(f"gamma pole at {x}")
    if x > 0:
        return log_gamma(x).real, 1
    # Gamma alternates sign between consecutive negative integers
    sign = -1 if math.floor(x) % 2 else 1
    return log_gamma(complex(x, 0.0)).real, sign


def pochhammer(a: float, n: int) -> float:
    """Rising factorial ``(a)_n`` by direct product.

    Exactly zero when ``a`` is a non-positive integer with ``-a < n``.
    Raises :class:`OverflowError` if the product leaves the double range;
    use :func:`log_pochhammer` there.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    p = 1.0
    for j in range(n):
        p *= a + j
    if not math.isfinite(p):
        raise OverflowError(f"pochhammer({a}, {n}) overflows; use log_pochhammer")
    return p


def log_pochhammer(a: float, n: int) -> tuple[float, int]:
    """``(log|(a)_n|, sign)``; sign is 0 (and log is -inf) for an exact zero.

    For ``a > 0`` and long products the log-gamma difference is used;
    otherwise the factors are summed directly so negative arguments keep
    their sign and exact zeros.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    if n == 0:
        return 0.0, 1
    if a > 0 and n > 32:
        return log_gamma(a + n).real - log_gamma(a).real, 1
    total = 0.0
    sign = 1
    for j in range(n):
        f = a + j
        if f == 0.0:
            return -math.inf, 0
        if f < 0:
            sign = -sign
        total += math.log(abs(f))
    return total, sign


def signed_log_product(factors: Iterable[tuple[float, int]],
                       inverse: Iterable[tuple[float, int]] = ()) -> tuple[float, int]:
    """Combine ``(log|x|, sign)`` pairs into the log of a product/quotient."""
    total, sign = 0.0, 1
    for lg, s in factors:
        total += lg
        sign *= s
    for lg, s in inverse:
        if s == 0:
            raise ParamError("division by a vanishing Pochhammer/gamma factor")
        total -= lg
        sign *= s
    return total, sign


def wrap_phase(phi: float) -> float:
    """Wrap an angle into ``(-pi, pi]``."""
    r = math.remainder(phi, 2.0 * math.pi)
    if r <= -math.pi:
        r += 2.0 * math.pi
    return r


def gamma_ratio_arg(terms: Sequence[tuple[complex, int]]) -> float:
    """Argument of ``prod Gamma(z_i)**s_i`` wrapped into ``(-pi, pi]``.

    ``terms`` is a sequence of ``(z, sign)`` with ``sign`` = +1 for numerator
    and -1 for denominator factors.
    """
    total = 0.0
    for z, s in terms:
        total += s * log_gamma(complex(z)).imag
    return wrap_phase(total)


def hyper_terms(upper: Sequence, lower: Sequence, z=1.0, n_terms: int = 0) -> list:
    """Terms ``k = 0..n_terms`` of a generalized hypergeometric series.

    Built by the term-ratio recurrence; raises :class:`ParamError` if a lower
    parameter Pochhammer vanishes before the series has terminated.
    """
    is_complex = any(isinstance(p, complex) for p in (*upper, *lower, z))
    t = 1.0 + 0.0j if is_complex else 1.0
    terms = [t]
    for k in range(n_terms):
        num = 1.0
        for u in upper:
            num *= u + k
        if num == 0:
            break
        den = float(k + 1)
        for v in lower:
            if v + k == 0:
                raise ParamError(f"lower parameter {v} gives a vanishing Pochhammer at k={k}")
            den *= v + k
        t = t * num / den * z
        terms.append(t)
    return terms


def compensated_sum(terms: Sequence) -> complex | float:
    """``math.fsum`` over real terms, component-wise for complex ones."""
    if any(isinstance(t, complex) for t in terms):
        return complex(math.fsum(t.real for t in terms), math.fsum(t.imag for t in terms))
    return math.fsum(terms)


def hyp2f1_series(a, b, c, t, rtol: float = 1e-16, max_terms: int = 100_000) -> complex:
    """Gauss series ``2F1(a, b; c; t)`` by direct summation for ``|t| < 1``.

    Terminating series (``a`` or ``b`` a non-positive integer) are summed
    exactly up to their last term. Raises :class:`ConvergenceError` when the
    relative term size does not fall below ``rtol`` within ``max_terms``.
    """
    a, b, c, t = complex(a), complex(b), complex(c), complex(t)
    if abs(t) >= 1:
        raise ConvergenceError(f"|t| = {abs(t)} >= 1, series diverges")
    total = 1.0 + 0.0j
    term = 1.0 + 0.0j
    for k in range(max_terms):
        num = (a + k) * (b + k)
        if num == 0:
            return total
        if c + k == 0:
            raise ParamError(f"2F1 lower parameter {c} vanishes at k={k}")
        term = term * num / ((c + k) * (k + 1)) * t
        total += term
        if abs(term) <= rtol * max(1.0, abs(total)):
            return total
    raise ConvergenceError(f"2F1 series did not converge in {max_terms} terms")

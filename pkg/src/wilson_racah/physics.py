"""Energy maps, phase shift, bound states, basis functions and wavefunctions.

Coordinates are in the same length units as ``1/lambda``. Basis functions
carry a ``sqrt(lambda)`` factor so that they are orthonormal in x (or r)
itself; at lambda = 1 they coincide with the textbook oscillator and
Laguerre functions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import racah, special, wilson
from .errors import DomainError, ParamError, RegimeError
from .quadrature import integrate_semiaxis
from .racah import RacahParams
from .wilson import WilsonParams

_INT_TOL = 1e-12
TAIL_WARN = 1e-4
_VARIANTS = ("direct", "inverse", "log")


# ---------------------------------------------------------------------------
# energy maps


@dataclass(frozen=True)
class EnergyMap:
    """Bijection between the energy E and the polynomial argument y > 0.

    direct:  y = sqrt(2E) / lambda
    inverse: y = lambda / k with E = k^2 / 2
    log:     y = sqrt(ln(1 + k^2 / lambda^2))
    """

    variant: str = "direct"
    lam: float = 1.0

    def __post_init__(self):
        if self.variant not in _VARIANTS:
            raise ValueError(f"variant must be one of {_VARIANTS}")
        if not (math.isfinite(self.lam) and self.lam > 0):
            raise ParamError(f"constraint lambda > 0 violated (lambda = {self.lam})")

    def apply(self, energy):
        """y(E); E must be >= 0 (> 0 for the inverse map)."""
        e = np.asarray(energy, dtype=float)
        lam = self.lam
        if self.variant == "inverse":
            if np.any(e <= 0):
                raise DomainError("inverse map needs E > 0")
            y = lam / np.sqrt(2 * e)
        else:
            if np.any(e < 0):
                raise DomainError(f"{self.variant} map needs E >= 0")
            if self.variant == "direct":
                y = np.sqrt(2 * e) / lam
            else:
                y = np.sqrt(np.log1p(2 * e / lam ** 2))
        return float(y) if y.ndim == 0 else y

    def invert(self, y):
        """E(y) for y > 0 (y >= 0 except for the inverse map)."""
        y = np.asarray(y, dtype=float)
        if np.any(y < 0) or (self.variant == "inverse" and np.any(y == 0)):
            raise DomainError("y must be positive")
        return self.energy_from_y2(y * y)

    def energy_from_y2(self, y2):
        """E as a function of y^2; negative y^2 gives the bound-state energies.

        All three variants continue analytically to y^2 < 0; the inverse map
        sends y^2 -> 0- to -inf.
        """
        y2 = np.asarray(y2, dtype=float)
        lam2 = self.lam ** 2
        if self.variant == "direct":
            e = 0.5 * lam2 * y2
        elif self.variant == "log":
            e = 0.5 * lam2 * np.expm1(y2)
        else:
            with np.errstate(divide="ignore"):
                e = np.where(y2 == 0, -np.inf, 0.5 * lam2 / np.where(y2 == 0, 1.0, y2))
        return float(e) if e.ndim == 0 else e


def energy_map_apply(emap: EnergyMap, energy):
    return emap.apply(energy)


def energy_map_invert(emap: EnergyMap, y):
    return emap.invert(y)


# ---------------------------------------------------------------------------
# scattering and bound states


def phase_shift(y: float, p: WilsonParams) -> float:
    """delta = arg A(iy) in (-pi, pi]; the same code path as the amplitude phase."""
    return wilson.scattering_amplitude(y, p)[1]


def bound_state_count(p: WilsonParams) -> int:
    """Largest integer N <= -mu, or 0 when mu >= 0.

    The bound-state index set is m = 0..N. When -mu is an integer the last
    state sits at threshold (y = 0); see :attr:`BoundSpectrum.threshold`.
    """
    if p.mu >= 0:
        return 0
    k = -p.mu
    if abs(k - round(k)) <= _INT_TOL:
        return int(round(k))
    return int(math.floor(k))


@dataclass(frozen=True)
class BoundSpectrum:
    """Bound-state data for m = 0..count_index.

    ``y_values`` are kappa_m = -(m + mu), the real root locations with
    y^2 = -kappa_m^2. ``n_states`` is count_index + 1.
    """

    params: WilsonParams
    map: EnergyMap
    count_index: int
    energies: np.ndarray
    y_values: np.ndarray
    threshold: bool = False

    @property
    def n_states(self) -> int:
        return self.count_index + 1


def bound_spectrum(p: WilsonParams, emap: EnergyMap) -> BoundSpectrum:
    """Energies E_m from y^2 = -(m + mu)^2 under the chosen map."""
    if p.mu >= 0:
        raise RegimeError(f"no bound states for mu >= 0 (mu = {p.mu})")
    n_idx = bound_state_count(p)
    kappa = -(np.arange(n_idx + 1) + p.mu)
    threshold = abs(kappa[-1]) <= _INT_TOL
    if threshold:
        kappa[-1] = 0.0
    energies = np.atleast_1d(emap.energy_from_y2(-kappa ** 2))
    for arr in (energies, kappa):
        arr.setflags(write=False)
    return BoundSpectrum(p, emap, n_idx, energies, kappa, threshold)


def amplitude_at_root(p: WilsonParams, kappa: float) -> float:
    """|A(z)| at z = kappa, i.e. at iy = kappa (y = -i kappa)."""
    return abs(wilson.amplitude(kappa, p))


def discrete_weights(p: WilsonParams) -> np.ndarray:
    """Discrete weights rho_m^N, m = 0..N, that augment the continuous measure.

    -2 Gamma(s) Gamma(nu-mu) Gamma(a-mu) Gamma(b-mu)
       / (Gamma(1-2mu) Gamma(a+b) Gamma(a+nu) Gamma(b+nu))
    * (m+mu) (2mu)_m (mu+nu)_m (mu+a)_m (mu+b)_m
       / ((mu-nu+1)_m (mu-a+1)_m (mu-b+1)_m m!)
    """
    mu, nu, a, b = p.as_tuple()
    if mu >= 0:
        return np.zeros(0)
    try:
        num = [special.log_abs_gamma(x) for x in (p.s, nu - mu, a - mu, b - mu)]
        den = [special.log_abs_gamma(x) for x in (1 - 2 * mu, a + b, a + nu, b + nu)]
    except Exception as exc:
        raise ParamError(f"discrete weight prefactor has a gamma pole: {exc}") from exc
    lg0, sg0 = special.signed_log_product(num, den)
    out = []
    for m in range(bound_state_count(p) + 1):
        lg, sg = special.signed_log_product(
            [(lg0, sg0)] + [special.log_pochhammer(x, m) for x in (2 * mu, mu + nu, mu + a, mu + b)],
            [special.log_pochhammer(x, m) for x in (mu - nu + 1, mu - a + 1, mu - b + 1, 1.0)],
        )
        out.append(-2.0 * (m + mu) * sg * math.exp(lg) if sg else 0.0)
    return np.array(out)


def discrete_wilson_values(p: WilsonParams, n_max: int, method: str = "series") -> np.ndarray:
    """Orthonormal W_n(-(m+mu)^2), shape (n_max+1, N+1).

    ``series`` uses the exact sum, ``recursion`` the vectorized recursion.
    """
    kappa = -(np.arange(bound_state_count(p) + 1) + p.mu)
    y2 = -kappa ** 2
    f = wilson.norm_factors(n_max, p)
    if method == "series":
        vals = np.array([[wilson.wilson_series(n, v, p) for v in y2] for n in range(n_max + 1)])
    elif method == "recursion":
        vals = wilson.tilde_table(n_max, y2, p)
    else:
        raise ValueError("method must be 'series' or 'recursion'")
    return vals * f[:, None]


def racah_route_values(p: WilsonParams) -> np.ndarray:
    """W~_n(-(m+mu)^2) for n, m = 0..N through the Racah map.

    Defined only for confined parameters (mu + nu = -N), where the Wilson
    values at the bound points are exactly R~_n(m).
    """
    if p.regime != "confined":
        raise RegimeError("the Racah route needs mu + nu = -N (confined regime)")
    big_n = -int(round(p.mu + p.nu))
    r = racah.map_wilson_to_racah(p, big_n)
    return racah.racah_series_matrix(r, "tilde")


def mixed_orthogonality_check(p: WilsonParams, n_max: int, tol: float = 1e-10) -> float:
    """max |continuous + discrete - delta_nn'| over n, n' <= n_max.

    The continuous term is integrated by quadrature; the discrete term uses
    the exact series at y^2 = -(m+mu)^2. For mu >= 0 the discrete part is
    empty and this is the plain continuous check.
    """
    if p.regime == "confined":
        raise RegimeError("confined parameters have no continuous part")

    def integrand(y):
        with np.errstate(invalid="ignore"):
            w = wilson.wilson_weight(y, p)
            vals = wilson.orthonormal_table(n_max, y * y, p)
        prod = vals[:, None, :] * vals[None, :, :] * w
        return np.moveaxis(prod, -1, 0)

    cont = integrate_semiaxis(integrand, tol=tol, decay_hint=2 * math.pi).value
    total = np.array(cont, dtype=float)
    if p.mu < 0:
        disc = discrete_wilson_values(p, n_max)
        total = total + (disc * discrete_weights(p)[None, :]) @ disc.T
    return float(np.max(np.abs(total - np.eye(n_max + 1))))


# ---------------------------------------------------------------------------
# basis functions


@dataclass(frozen=True)
class BasisSpec:
    """``hermite1d`` (oscillator functions on the line) or ``laguerre_radial``."""

    kind: str = "hermite1d"
    lam: float = 1.0
    ell: int = 0

    def __post_init__(self):
        if self.kind not in ("hermite1d", "laguerre_radial"):
            raise ValueError("kind must be 'hermite1d' or 'laguerre_radial'")
        if not (math.isfinite(self.lam) and self.lam > 0):
            raise ParamError(f"constraint lambda > 0 violated (lambda = {self.lam})")
        if int(self.ell) != self.ell or self.ell < 0:
            raise ParamError(f"constraint ell >= 0 integer violated (ell = {self.ell})")
        object.__setattr__(self, "ell", int(self.ell))


def _hermite_matrix(n_max: int, xi: np.ndarray) -> np.ndarray:
    out = np.empty((n_max + 1, xi.size))
    out[0] = math.pi ** -0.25 * np.exp(-0.5 * xi * xi)
    if n_max >= 1:
        out[1] = math.sqrt(2.0) * xi * out[0]
    for n in range(1, n_max):
        out[n + 1] = math.sqrt(2.0 / (n + 1)) * xi * out[n] - math.sqrt(n / (n + 1)) * out[n - 1]
    return out


def _laguerre_matrix(n_max: int, z: np.ndarray, ell: int) -> np.ndarray:
    alpha = 2 * ell + 1
    out = np.empty((n_max + 1, z.size))
    with np.errstate(divide="ignore"):
        logz = np.log(z)
    log0 = 0.5 * alpha * logz - 0.5 * z - 0.5 * math.lgamma(alpha + 1)
    out[0] = np.where(z > 0, np.exp(log0), 0.0)
    if n_max >= 1:
        out[1] = (alpha + 1 - z) * out[0] / math.sqrt(alpha + 1)
    for n in range(1, n_max):
        out[n + 1] = ((2 * n + alpha + 1 - z) * out[n]
                      - math.sqrt(n * (n + alpha)) * out[n - 1]) / math.sqrt((n + 1) * (n + alpha + 1))
    return out


def basis_matrix(spec: BasisSpec, n_max: int, coords) -> np.ndarray:
    """phi_n(coord) for n = 0..n_max, shape (n_max + 1, len(coords)).

    Built from normalized three-term recurrences, so no raw Hermite or
    Laguerre polynomial (and no overflow) appears for large n.
    """
    c = np.atleast_1d(np.asarray(coords, dtype=float))
    if n_max < 0:
        raise ValueError("n_max must be non-negative")
    scale = math.sqrt(spec.lam)
    if spec.kind == "hermite1d":
        return scale * _hermite_matrix(n_max, spec.lam * c)
    if np.any(c < 0):
        raise DomainError("radial coordinate must be >= 0")
    return scale * _laguerre_matrix(n_max, spec.lam * c, spec.ell)


def basis_eval(spec: BasisSpec, n: int, coord: float) -> float:
    return float(basis_matrix(spec, n, [coord])[n, 0])


# ---------------------------------------------------------------------------
# wavefunctions


@dataclass(frozen=True)
class WavefunctionGrid:
    """Wavefunction samples on a coordinate grid.

    ``tail_estimate`` is 0 for the finite bound-state sums. For scattering
    states it is the largest spread of the partial sums over the second half
    of the terms; the pointwise series converges only conditionally, so this
    is an estimate, not a bound. ``truncation_warning`` is set when it
    exceeds 1e-4.
    """

    coordinates: np.ndarray
    values: np.ndarray
    n_trunc: int
    tail_estimate: float = 0.0
    truncation_warning: bool = False
    metadata: dict = field(default_factory=dict)


def bound_state_coefficients(r: RacahParams) -> np.ndarray:
    """C[n, m] = sqrt(rho^N(m)) R_n(m); complex when the weights are indefinite."""
    return racah.orthonormal_matrix(r)


def synthesize_bound_state(r: RacahParams, m: int, spec: BasisSpec, grid) -> WavefunctionGrid:
    """psi_m = sqrt(rho^N(m)) sum_{n<=N} R_n(m) phi_n; a finite sum."""
    if not 0 <= m <= r.N:
        raise ValueError(f"m must lie in 0..N={r.N}")
    coef = bound_state_coefficients(r)[:, m]
    grid = np.asarray(grid, dtype=float)
    vals = coef @ basis_matrix(spec, r.N, grid)
    if np.all(np.imag(vals) == 0):
        vals = np.real(vals)
    meta = {"weights_positive": racah.weights_positive(r)}
    return WavefunctionGrid(grid, vals, r.N + 1, 0.0, False, meta)


def _partial_sums(coef: np.ndarray, phi: np.ndarray, n_trunc: int):
    sums = np.cumsum(coef[:, None] * phi, axis=0)
    half = max(0, n_trunc // 2 - 1)
    window = sums[half:n_trunc]
    spread = float(np.max(np.ptp(window, axis=0))) if n_trunc > 1 else 0.0
    return sums[n_trunc - 1], spread


def synthesize_scattering_state(p: WilsonParams, y: float, spec: BasisSpec, grid,
                                n_trunc: int) -> WavefunctionGrid:
    """sqrt(rho(y)) sum_{n<n_trunc} W_n(y^2) phi_n, the continuum part of the state."""
    if n_trunc < 1:
        raise ValueError("n_trunc must be >= 1")
    grid = np.asarray(grid, dtype=float)
    coef = math.sqrt(wilson.wilson_weight(y, p)) * wilson.orthonormal_table(n_trunc - 1, y * y, p)
    phi = basis_matrix(spec, n_trunc - 1, grid)
    vals, spread = _partial_sums(coef, phi, n_trunc)
    meta = {"convergence": "conditional; tail_estimate is an estimate"}
    return WavefunctionGrid(grid, vals, n_trunc, spread, spread > TAIL_WARN, meta)


def synthesize_mixed_state(p: WilsonParams, y: float, m: int, spec: BasisSpec, grid,
                           n_trunc: int) -> WavefunctionGrid:
    """Continuum part at y plus the discrete part sqrt(rho_m^N) sum_{n<=N} W_n(-(m+mu)^2) phi_n."""
    if p.regime != "mixed":
        raise RegimeError("mixed states need mu < 0 in the mixed regime")
    n_idx = bound_state_count(p)
    if not 0 <= m <= n_idx:
        raise ValueError(f"m must lie in 0..{n_idx}")
    cont = synthesize_scattering_state(p, y, spec, grid, n_trunc)
    w = discrete_weights(p)[m]
    disc = discrete_wilson_values(p, n_idx)[:, m]
    extra = (np.emath.sqrt(w) * disc) @ basis_matrix(spec, n_idx, cont.coordinates)
    return WavefunctionGrid(cont.coordinates, cont.values + np.real_if_close(extra),
                            n_trunc, cont.tail_estimate, cont.truncation_warning,
                            dict(cont.metadata, discrete_index=m))


def sign_changes(values, rel_floor: float = 1e-3) -> int:
    """Sign changes of a sampled real curve, ignoring samples below
    ``rel_floor * max|values|`` (so tails and exact zeros are not counted)."""
    v = np.real(np.asarray(values))
    big = v[np.abs(v) > rel_floor * np.max(np.abs(v))]
    return int(np.count_nonzero(np.diff(np.sign(big))))

"""Impedance from echo data: moments, Verblunsky coefficients, layer stripping.

Echo coefficients ``a_j`` define ``R = sum a_j z^j``; the Herglotz function
``(1 + R)/(1 - R) = 1 + 2 sum m_j z^j`` yields the moments of the
orthogonality measure of ``Phi_n``, and the Szego recursion driven by those
moments returns the reflectivities, hence the impedance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, DataInconsistencyError, DomainError
from .forward import ReflectionSeries
from .media import Interval, StepMedium
from .moebius import Auto, compose, invert, step_reflection_map
from .opuc import _step
from .specfun import ap_series, besicovitch_scan, scan_threshold


# ---------------------------------------------------------------------------
# Algorithm: data -> moments -> reflectivities -> impedance
# ---------------------------------------------------------------------------


def _coefficients(data) -> tuple[np.ndarray, float, float]:
    """``(a, tau, x0)`` from a ReflectionSeries or raw ``(t, d)`` samples."""
    if isinstance(data, ReflectionSeries):
        if data.singular:
            return data.a.copy(), 2.0 * data.delta, data.x0
        # a_j = tau * d(t_j) undoes the 1/(2 delta) scaling of the samples
        return 2.0 * data.delta * data.values, 2.0 * data.delta, data.x0
    t, d = (np.asarray(v, dtype=float) for v in data)
    if t.ndim != 1 or t.shape != d.shape or t.size < 1:
        raise ConfigError("need matching 1-D arrays of times and data")
    tau = t[0]
    if not tau > 0:
        raise ConfigError("sample times must be positive")
    expected = tau * np.arange(1, t.size + 1)
    if np.max(np.abs(t - expected)) > 1e-9 * abs(expected[-1]):
        raise ConfigError("sample times must be equally spaced, t_j = j*tau")
    return tau * d, tau, 0.0


def moments_from_data(a) -> np.ndarray:
    """Solve ``(I - A)(1, m_1, ..., m_n) = e_1`` with ``A(i,j) = a_{max(i-j,0)}``.

    Forward substitution gives ``m_k = sum_{i=1}^{k} a_i m_{k-i}``.
    """
    if isinstance(a, ReflectionSeries):
        a = _coefficients(a)[0]
    a = np.asarray(a, dtype=float)
    n = a.size
    m = np.zeros(n + 1)
    m[0] = 1.0
    for k in range(1, n + 1):
        m[k] = np.dot(a[:k], m[k - 1::-1])
    return m


def coefficients_from_moments(m) -> np.ndarray:
    """Inverse of ``moments_from_data``: ``a = (I - A) applied backwards``.

    From ``M = R (1 + M)`` one gets ``R = M/(1 + M)`` as a power series.
    """
    m = np.asarray(m, dtype=float)
    if m.size == 0 or m[0] != 1.0:
        raise ConfigError("m_0 must be 1")
    n = m.size - 1
    a = np.zeros(n)
    for k in range(1, n + 1):
        a[k - 1] = m[k] - np.dot(a[: k - 1], m[k - 1:0:-1])
    return a


def verblunsky_from_moments(m, strict: bool = True) -> np.ndarray:
    """Reflectivities ``r_1..r_n`` from moments ``m_0..m_n``.

    ``r_1 = m_1`` and ``r_{j+1} = <z Phi_j, 1>/<Phi*_j, 1>``. A coefficient of
    modulus >= 1 raises ``DataInconsistencyError`` carrying the (1-based)
    step index; nothing is clamped. With ``strict=False`` the list is cut
    before the offending step instead.
    """
    m = np.asarray(m, dtype=float)
    if m.size == 0 or m[0] != 1.0:
        raise ConfigError("m_0 must be 1")
    n = m.size - 1
    r = np.zeros(n)
    phi = np.zeros(n + 1)
    phi[0] = 1.0
    for j in range(n):
        num = np.dot(phi[: j + 1], m[1 : j + 2])
        den = np.dot(phi[j::-1], m[: j + 1])
        rj = num / den if den != 0 else math.inf
        if not abs(rj) < 1.0:
            if strict:
                raise DataInconsistencyError(
                    f"reflectivity {j + 1} has modulus >= 1 ({rj!r}); "
                    "data are not physical or too noisy", step=j + 1)
            return r[:j]
        r[j] = rj
        _step(phi, j, rj)
    return r


@dataclass(frozen=True)
class InversionResult:
    """Reconstructed impedance ``zeta[j]`` just beyond ``y[j] = x0 + j*tau/2``."""

    x0: float
    delta: float
    zeta0: float
    reflectivities: np.ndarray = field(repr=False)
    diagnostics: dict = field(default_factory=dict)

    @property
    def n(self) -> int:
        return self.reflectivities.size

    @property
    def y(self) -> np.ndarray:
        return self.x0 + self.delta * np.arange(1, self.n + 1)

    @property
    def midpoints(self) -> np.ndarray:
        """Layer centres ``y_j + delta/2``, where each value is attained."""
        return self.y + 0.5 * self.delta

    @property
    def zeta(self) -> np.ndarray:
        return self.zeta0 * np.exp(-2.0 * np.cumsum(np.arctanh(self.reflectivities)))

    @property
    def alpha(self) -> np.ndarray:
        return np.arctanh(self.reflectivities) / self.delta

    def medium(self) -> StepMedium:
        x1 = self.x0 + (self.n + 1) * self.delta
        return StepMedium.from_reflectivities(Interval(self.x0, x1), tuple(self.y),
                                              self.reflectivities, self.zeta0)


def invert_scatter(data, x0: float | None = None, zeta0: float = 1.0,
                   strict: bool = True) -> InversionResult:
    """Reconstruct the impedance from equally spaced echo data.

    ``data`` is a ``ReflectionSeries`` or a pair ``(t, d)`` with
    ``t_j = j*tau``. ``zeta0`` is the impedance at ``x0``.
    """
    if not zeta0 > 0:
        raise ConfigError("zeta0 must be positive")
    a, tau, start = _coefficients(data)
    x0 = start if x0 is None else x0
    m = moments_from_data(a)
    r = verblunsky_from_moments(m, strict=strict)
    resid = coefficients_from_moments(m) - a
    diag = {
        "moment_residual": float(np.max(np.abs(resid))) if resid.size else 0.0,
        "max_abs_r": float(np.max(np.abs(r))) if r.size else 0.0,
        "clamp_events": 0,
        "truncated_at": None if r.size == a.size else int(r.size + 1),
    }
    return InversionResult(float(x0), 0.5 * tau, float(zeta0), r, diag)


def born_invert(data, x0: float | None = None, zeta0: float = 1.0):
    """Impedance obtained by treating the data as their Born approximation.

    ``alpha(y_j) = 2 d(t_j)`` at ``y_j = x0 + t_j/2``; ``zeta`` follows by
    trapezoidal integration of ``-2 alpha``. Returns ``(y, zeta)``.
    """
    a, tau, start = _coefficients(data)
    x0 = start if x0 is None else x0
    d = a / tau
    y = x0 + 0.5 * tau * np.arange(1, d.size + 1)
    al = 2.0 * d
    integral = np.concatenate(([0.0], np.cumsum(0.5 * (al[1:] + al[:-1]) * np.diff(y))))
    return y, zeta0 * np.exp(-2.0 * integral)


def add_noise(values, fraction: float, seed: int) -> np.ndarray:
    """iid gaussian noise with standard deviation ``fraction * rms(values)``.

    A counter-based (Philox) generator keyed by ``seed`` keeps runs reproducible.
    """
    v = np.asarray(values, dtype=float)
    rng = np.random.Generator(np.random.Philox(int(seed)))
    scale = fraction * math.sqrt(float(np.mean(v * v)))
    return v + scale * rng.standard_normal(v.shape)


# ---------------------------------------------------------------------------
# layer stripping
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class StripResult:
    medium: StepMedium
    reflectivities: np.ndarray
    jumps: tuple
    complete: bool
    tolerance: float | None = None
    band: float | None = None


def layer_strip(source, x0: float | None = None, zeta0: float = 1.0,
                band: float | None = None, max_layers: int = 64,
                lambda_max: float | None = None, samples_per_unit: float = 8.0,
                threshold: float | None = None) -> StripResult:
    """Peel interfaces off a step medium one at a time.

    With a ``StepMedium`` the lowest almost-periodic term of ``g(0)`` is read
    off its closed-form series, which gives the first layer width and
    reflectivity exactly; the medium is then replaced by its tail. With a
    callable ``g(omega, xi)`` and a ``band`` L, the same quantities come from
    Cesaro means over ``(-L, L)``, and the remaining response is
    ``phi(mu_1, r_1)^{-1} o g``.
    """
    if isinstance(source, StepMedium):
        return _strip_exact(source, zeta0, max_layers)
    if band is None or x0 is None:
        raise ConfigError("numeric layer stripping needs x0 and a band L")
    return _strip_numeric(source, float(x0), zeta0, float(band), max_layers,
                          lambda_max, samples_per_unit, threshold)


def _strip_exact(m: StepMedium, zeta0: float, max_layers: int) -> StripResult:
    x1 = m.interval.x1
    current = m.canonical()
    position = current.interval.x0
    jumps, rs = [], []
    while current.n and len(rs) < max_layers:
        series = ap_series(current, 0.0, lambda_max=2.0 * current.widths[0] * (1 + 1e-9))
        lam, coeff = series.terms[0]
        position = current.interval.x0 + 0.5 * lam
        jumps.append(position)
        rs.append(float(np.real(coeff)))
        current = current.tail()
    rs = np.asarray(rs)
    out = StepMedium.from_reflectivities(Interval(m.interval.x0, x1), tuple(jumps),
                                         rs, zeta0, removable=False)
    return StripResult(out, rs, tuple(jumps), complete=current.n == 0, tolerance=0.0)


def _strip_numeric(g, x0, zeta0, band, max_layers, lambda_max, samples_per_unit,
                   threshold) -> StripResult:
    if lambda_max is None:
        raise ConfigError("numeric layer stripping needs lambda_max")
    count = int(math.ceil(2.0 * band * samples_per_unit * max(1.0, lambda_max)))
    omega = np.linspace(-band, band, count + 1)
    values = np.asarray(g(omega, 0.0), dtype=complex)
    position = x0
    jumps, rs = [], []
    tol = None
    if threshold is None:
        # fixed once, from the full response, so residues of stripped layers stay below it
        threshold = scan_threshold(omega, values, lambda_max)
    while len(rs) < max_layers:
        found = besicovitch_scan(omega, values, lambda_max, threshold=threshold)
        if found is None:
            break
        lam, coeff, floor = found
        r1 = float(np.real(coeff))
        if not abs(r1) < 1.0:
            break
        tol = max(tol or 0.0, floor)
        position += 0.5 * lam
        jumps.append(position)
        rs.append(r1)
        # remove the first layer: values <- phi(mu, r1)^{-1}(values)
        mu = np.exp(1j * lam * omega)
        values = np.conj(mu) * (values - mu * r1) / (1.0 - r1 * np.conj(mu) * values)
    rs = np.asarray(rs)
    # the scan probes depths up to lambda_max/2
    x1 = max(x0 + 0.5 * lambda_max, position + 1e-9 * max(1.0, abs(position)))
    out = StepMedium.from_reflectivities(Interval(x0, x1), tuple(jumps), rs, zeta0,
                                         removable=False) if jumps else \
        StepMedium.constant(zeta0, x0, x1)
    return StripResult(out, rs, tuple(jumps), complete=len(rs) < max_layers,
                       tolerance=tol, band=band)


def strip_first_interface(m: StepMedium, omega: float) -> Auto:
    """``phi(mu_1, r_1)^{-1} o g_m`` at one frequency: the map of the tail medium."""
    g = step_reflection_map(m, omega)
    mu = np.exp(2j * m.widths[0] * omega)
    return compose(invert(Auto(mu, m.reflectivities[0])), g)


# ---------------------------------------------------------------------------
# short-range inversion series
# ---------------------------------------------------------------------------

MAX_SHORT_RANGE_ORDER = 6


def short_range_gamma(int_abs_alpha: float, int_alpha_sq: float) -> float:
    """Radius of guaranteed contraction ``(1 - tanh L1)^2/(4 L2)``."""
    if int_alpha_sq <= 0:
        return math.inf
    return (1.0 - math.tanh(int_abs_alpha)) ** 2 / (4.0 * int_alpha_sq)


def short_range_invert(data, x0: float | None, zeta0: float, int_abs_alpha: float,
                       int_alpha_sq: float, y: float, order: int = 4,
                       first_jump: float = math.inf, return_terms: bool = False):
    """Impedance at ``y`` from the nested-integral series in the kernel ``S``.

    ``S(t) = -(R/(1-R))^vee(|t|)``. On the data grid ``R/(1-R)`` has
    coefficients equal to the moments ``m_k``, so ``S`` is a symmetric comb of
    masses ``-m_k`` at ``t = +-2 k delta``. The operator
    ``D f(t) = int_0^{2(y-x0)} S(t-s) f(s) ds`` then acts on grid values by a
    symmetric Toeplitz matrix and ``zeta(y) = zeta0 (sum_j D^j 1 (0))^2``.
    """
    order = int(order)
    if order < 1:
        raise ConfigError("order must be at least 1")
    if order > MAX_SHORT_RANGE_ORDER:
        raise ConfigError(f"orders above {MAX_SHORT_RANGE_ORDER} are refused")
    a, tau, start = _coefficients(data)
    x0 = start if x0 is None else x0
    gamma = short_range_gamma(int_abs_alpha, int_alpha_sq)
    if not (x0 < y < min(x0 + gamma, first_jump)):
        raise DomainError(f"y must lie in ({x0}, {min(x0 + gamma, first_jump)}) "
                          "for the series to contract")
    delta = 0.5 * tau
    steps = int(round((y - x0) / delta))
    if steps < 1 or steps > a.size:
        raise DomainError("y is not covered by the data grid")
    m = moments_from_data(a[:steps])
    idx = np.arange(steps + 1)
    kernel = -m[np.abs(idx[:, None] - idx[None, :])]
    np.fill_diagonal(kernel, 0.0)
    f = np.ones(steps + 1)
    terms = [1.0]
    for _ in range(order):
        f = kernel @ f
        terms.append(float(f[0]))
    value = zeta0 * sum(terms) ** 2
    if return_terms:
        return value, terms
    return value

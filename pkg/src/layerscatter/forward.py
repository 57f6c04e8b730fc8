"""Time-domain reflection data from an impedance profile, and the Born picture.

For the standard approximant with spacing ``delta`` the reflection
coefficient is a power series ``R = sum a_j z^j`` in ``z = exp(2i delta w)``,
so its inverse Fourier transform is a comb of masses ``a_j`` at
``t_j = 2 j delta``. Dividing by the comb spacing gives samples of the echo
data ``d = R^vee``.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, DomainError
from .media import (ImpedanceProfile, Interval, StepMedium, _check_n,
                    reflectivity, REFLECTIVITY_LIMIT, standard_approximant)
from .moebius import step_reflection
from .opuc import check_verblunsky, opuc_recursion


@dataclass(frozen=True)
class ReflectionSeries:
    """Comb ``sum a_j delta(t - 2 j delta)`` of reflection data.

    ``values`` are the reported samples: ``a_j/(2 delta)`` averaged over a
    window of ``2*window - 1`` coefficients, or the raw ``a_j`` when the
    source had jumps and the data are singular.
    """

    delta: float
    a: np.ndarray = field(repr=False)
    x0: float = 0.0
    window: int = 1
    singular: bool = False

    def __post_init__(self):
        if not self.delta > 0:
            raise ConfigError("delta must be positive")
        if int(self.window) != self.window or self.window < 1:
            raise ConfigError("window must be a positive integer")
        object.__setattr__(self, "a", np.asarray(self.a, dtype=float))

    @property
    def n(self) -> int:
        return self.a.size

    @property
    def times(self) -> np.ndarray:
        return 2.0 * self.delta * np.arange(1, self.n + 1)

    @property
    def values(self) -> np.ndarray:
        if self.singular:
            return self.a.copy()
        return window_average(self.a, self.window) / (2.0 * self.delta)


def window_average(a, k: int) -> np.ndarray:
    """``sum_{|nu|<k} a_{j+nu} / k``; coefficients outside ``1..n`` count as 0."""
    a = np.asarray(a, dtype=float)
    if k == 1:
        return a.copy()
    kernel = np.ones(2 * k - 1)
    return np.convolve(a, kernel, mode="same") / k


def unit_lower_toeplitz_solve(c, count: int) -> np.ndarray:
    """First ``count`` coefficients of ``1/C`` where ``C = sum c_i z^i``, ``c_0 = 1``.

    Forward substitution through the unit-lower-triangular Toeplitz system:
    ``d_0 = 1``, ``d_k = -sum_{i=1}^{k} c_i d_{k-i}``.
    """
    c = np.asarray(c, dtype=float)
    if c.size == 0 or c[0] != 1.0:
        raise ConfigError("leading coefficient must be 1")
    d = np.zeros(count)
    if count == 0:
        return d
    d[0] = 1.0
    m = c.size - 1
    for k in range(1, count):
        lo = max(0, k - m)
        d[k] = -np.dot(c[k - lo:0:-1], d[lo:k])
    return d


def reflection_coefficients(r, count: int | None = None) -> np.ndarray:
    """Taylor coefficients ``a_1..a_count`` of ``(Psi* - Phi*)/(Psi* + Phi*)``.

    ``count`` defaults to the number of reflectivities.
    """
    r = check_verblunsky(r)
    n = r.size
    count = n if count is None else int(count)
    if count == 0 or n == 0:
        return np.zeros(count)
    q = opuc_recursion(r)
    psi_star, phi_star = q.psi_star, q.phi_star
    b = 0.5 * (psi_star - phi_star)
    c = 0.5 * (psi_star + phi_star)
    c[0] = 1.0
    d = unit_lower_toeplitz_solve(c, count)
    return np.convolve(b[1:], d)[:count]


def _resolve_interval(source, x0, x1) -> Interval:
    iv = source.interval
    return Interval(iv.x0 if x0 is None else float(x0), iv.x1 if x1 is None else float(x1))


def forward_scatter(source, x0=None, x1=None, n: int = 1000,
                    window: int = 1) -> ReflectionSeries:
    """Echo data of an impedance on ``(x0, x1)`` from its n-th standard approximant.

    ``source`` is an ``ImpedanceProfile`` or a ``StepMedium``. Step media,
    and profiles with jumps, are sampled at the cell midpoints; the result
    is then marked singular and carries the raw coefficients.
    """
    n = _check_n(n)
    iv = _resolve_interval(source, x0, x1)
    delta = iv.length / (n + 1)
    y = iv.x0 + delta * np.arange(1, n + 1)
    singular = isinstance(source, StepMedium) or not source.is_continuous
    r = np.atleast_1d(reflectivity(source.zeta(y - 0.5 * delta),
                                   source.zeta(y + 0.5 * delta)))
    if np.max(np.abs(r)) >= REFLECTIVITY_LIMIT:
        raise DomainError("a reflectivity has modulus >= 1 - 1e-12")
    a = reflection_coefficients(r)
    return ReflectionSeries(delta, a, iv.x0, window, singular)


def forward_scatter_alpha(alpha, x0: float, x1: float, n: int,
                          window: int = 1) -> ReflectionSeries:
    """As ``forward_scatter`` with ``r_j = tanh(delta*alpha(y_j))``.

    ``alpha`` is a vectorised callable or an ``(x, values)`` pair of samples
    (linearly interpolated).
    """
    n = _check_n(n)
    iv = Interval(x0, x1)
    delta = iv.length / (n + 1)
    y = iv.x0 + delta * np.arange(1, n + 1)
    r = np.tanh(delta * _alpha_values(alpha, y))
    if np.max(np.abs(r)) >= REFLECTIVITY_LIMIT:
        raise DomainError("a reflectivity has modulus >= 1 - 1e-12")
    return ReflectionSeries(delta, reflection_coefficients(r), iv.x0, window)


def _alpha_values(alpha, x) -> np.ndarray:
    if callable(alpha):
        return np.asarray(alpha(x), dtype=float)
    xs, vals = alpha
    return np.interp(x, np.asarray(xs, dtype=float), np.asarray(vals, dtype=float))


def resolve_medium(medium, n: int | None = None) -> StepMedium:
    """A step medium, or the n-th standard approximant of a continuous profile."""
    if isinstance(medium, StepMedium):
        return medium
    if isinstance(medium, ImpedanceProfile):
        if n is None:
            raise ConfigError("profiles need an approximation degree")
        return standard_approximant(medium, n).medium()
    raise ConfigError(f"cannot interpret {type(medium).__name__} as a medium")


def spectrum(medium, omega, n: int | None = None, threads: int = 1) -> np.ndarray:
    """``R(omega)`` on a frequency grid by matrix products.

    Frequencies are split into contiguous chunks evaluated on ``threads``
    workers; each value depends only on its own frequency, so the result
    does not depend on the thread count.
    """
    m = resolve_medium(medium, n)
    om = np.asarray(omega, dtype=float).reshape(-1)
    threads = max(1, int(threads))
    if threads == 1 or om.size < 2 * threads:
        return np.asarray(step_reflection(m, om))
    chunks = np.array_split(om, threads)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        parts = list(pool.map(lambda w: np.asarray(step_reflection(m, w)), chunks))
    return np.concatenate(parts)


def born_approximation(profile: ImpedanceProfile, times, x0: float | None = None):
    """``alpha(t/2 + x0)/2`` at the given echo times."""
    x0 = profile.interval.x0 if x0 is None else x0
    return 0.5 * np.asarray(profile.alpha(0.5 * np.asarray(times, dtype=float) + x0))


def born_residual(series: ReflectionSeries, profile: ImpedanceProfile) -> np.ndarray:
    """Pointwise difference between the data and its Born approximation."""
    if series.singular:
        raise ConfigError("Born residual needs regular (continuous-profile) data")
    if not math.isclose(series.x0, profile.interval.x0, rel_tol=0, abs_tol=1e-12):
        raise ConfigError("series and profile start at different points")
    return series.values - born_approximation(profile, series.times, series.x0)


def relative_l2(x, ref) -> float:
    x = np.asarray(x)
    ref = np.asarray(ref)
    if x.shape != ref.shape:
        raise ConfigError("shape mismatch")
    return float(np.linalg.norm(x - ref) / np.linalg.norm(ref))

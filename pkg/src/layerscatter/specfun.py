"""Scattering polynomials, almost-periodic series of step media, Cesaro means.

For a step medium with reflectivities ``r`` and layer widths ``w``::

    g(omega, xi) = sum_k a_k(r, xi) exp(2i <k, w> omega)

over multi-indices ``k = (1, k_2, ..., k_{n+1})`` made of a block of positive
entries followed by zeros, with
``a_k = prod_j pi^(k_j, k_{j+1})(r_j) * xi**k_{n+1}``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import ConfigError, DomainError, NumericError, ResourceCapError
from .media import StepMedium

MAX_POLY_ORDER = 40
DEFAULT_CAP = 10 ** 7
MERGE_RTOL = 1e-12


# ---------------------------------------------------------------------------
# scattering polynomials
# ---------------------------------------------------------------------------


@lru_cache(maxsize=4096)
def _radial_coefficients(p: int, q: int) -> tuple:
    """Exact coefficients of ``P`` in ``pi = (1-s) z^(p-q) P(s)`` with ``s = |z|^2``.

    From differentiating ``(1 - z zbar)^(p+q-1)`` term by term; the powers of
    ``z`` and ``zbar`` pair off into ``s`` apart from ``z^(p-q)``, read as
    ``zbar^(q-p)`` when ``q > p``.
    """
    n = p + q - 1
    scale = Fraction((-1) ** p, q * math.factorial(n))
    top = max(p, q)
    return tuple(scale * math.comb(n, k) * (-1) ** k * math.factorial(k) ** 2
                 / (math.factorial(k - p) * math.factorial(k - q))
                 for k in range(top, n + 1))


@lru_cache(maxsize=65536)
def _radial_value(p: int, q: int, s: float) -> float:
    # exact rational evaluation: the alternating sum cancels badly in floats
    acc = Fraction(0)
    x = Fraction(s)
    for c in reversed(_radial_coefficients(p, q)):
        acc = acc * x + c
    return float(acc)


def scattering_polynomial(p: int, q: int, z):
    """``pi^(p,q)(z)``; arrays of ``z`` allowed.

    Zero when ``min(p, q) < 0`` or ``p = 0 < q``; ``z**p`` when ``q = 0``.
    Orders ``p + q > 40`` are refused. Real input gives real output.
    """
    p, q = int(p), int(q)
    zz = np.asarray(z, dtype=complex)
    real_in = not np.iscomplexobj(z)
    if min(p, q) < 0 or (p == 0 and q > 0):
        out = np.zeros(zz.shape, dtype=complex)
    elif q == 0:
        out = zz ** p
    else:
        if p + q > MAX_POLY_ORDER:
            raise DomainError(f"order p+q={p + q} exceeds {MAX_POLY_ORDER}")
        s = np.abs(zz) ** 2
        radial = np.vectorize(lambda v: _radial_value(p, q, float(v)), otypes=[float])(s)
        phase = zz ** (p - q) if p >= q else np.conj(zz) ** (q - p)
        out = (1.0 - s) * phase * radial
    if real_in:
        out = out.real
    return out.item() if out.ndim == 0 else out


def laplace_beltrami_check(p: int, q: int, z: complex, h: float = 1e-3) -> float:
    """``|Delta_h pi - p q pi|`` at ``z`` with a 5-point Laplacian of step ``h``.

    ``Delta = -(1 - x^2 - y^2)/4 (d_xx + d_yy)``.
    """
    z = complex(z)
    if not h > 0:
        raise ConfigError("h must be positive")
    if not abs(z) < 1.0 - h:
        raise DomainError("z is too close to the unit circle for this step")

    def f(w):
        return complex(scattering_polynomial(p, q, complex(w)))

    centre = f(z)
    lap = (f(z + h) + f(z - h) + f(z + 1j * h) + f(z - 1j * h) - 4.0 * centre) / h ** 2
    delta = -(1.0 - abs(z) ** 2) / 4.0 * lap
    return abs(delta - p * q * centre)


# ---------------------------------------------------------------------------
# almost-periodic series of a step medium
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class APSeries:
    """Frequencies ``lambda`` (strictly increasing) and their coefficients."""

    terms: list = field(default_factory=list)

    @property
    def lambdas(self) -> np.ndarray:
        return np.array([t[0] for t in self.terms], dtype=float)

    @property
    def coeffs(self) -> np.ndarray:
        return np.array([t[1] for t in self.terms], dtype=complex)

    def norm2(self) -> float:
        return float(np.sum(np.abs(self.coeffs) ** 2))

    def __call__(self, omega):
        om = np.asarray(omega, dtype=float)
        out = np.zeros(om.shape, dtype=complex)
        for lam, c in self.terms:
            out = out + c * np.exp(1j * lam * om)
        return out


def _merge(raw: list) -> list:
    raw.sort(key=lambda t: t[0])
    merged = []
    for lam, c in raw:
        if merged and lam - merged[-1][0] <= MERGE_RTOL * max(abs(lam), 1.0):
            merged[-1][1] += c
        else:
            merged.append([lam, c])
    return [(float(lam), complex(c)) for lam, c in merged]


def ap_series(m: StepMedium, xi: complex = 0.0, lambda_max: float = 0.0,
              cap: int = DEFAULT_CAP) -> APSeries:
    """All terms of ``g(., xi)`` with frequency ``lambda = 2<k, w> <= lambda_max``.

    Coinciding frequencies (commensurate widths) are merged by summation.
    Raises ``ResourceCapError`` once more than ``cap`` multi-indices have
    been visited.
    """
    xi = complex(xi)
    if not abs(xi) < 1.0:
        raise DomainError("xi must lie in the open unit disk")
    r = m.reflectivities
    w = m.widths
    n = r.size
    lam_top = float(lambda_max) * (1.0 + MERGE_RTOL)
    raw: list = []
    visited = 0

    # depth-first over (position j, current k_j, lambda so far, coefficient so far)
    stack = [(0, 1, 2.0 * w[0], 1.0 + 0.0j)]
    while stack:
        j, kj, lam, coeff = stack.pop()
        visited += 1
        if visited > cap:
            raise ResourceCapError(f"almost-periodic enumeration exceeded {cap} indices")
        if lam > lam_top:
            continue
        if j == n:
            # last layer: the free factor xi**k_{n+1}
            raw.append((lam, coeff * xi ** kj))
            continue
        # k_{j+1} = 0 ends the positive block
        c0 = coeff * r[j] ** kj
        if c0 != 0:
            raw.append((lam, c0))
        if j + 1 == n and xi == 0:
            continue
        q = 1
        while lam + 2.0 * q * w[j + 1] <= lam_top:
            if kj + q > MAX_POLY_ORDER:
                raise ResourceCapError("scattering polynomial order cap reached; "
                                       "lower lambda_max")
            cq = coeff * scattering_polynomial(kj, q, r[j])
            if cq != 0:
                stack.append((j + 1, q, lam + 2.0 * q * w[j + 1], cq))
            q += 1
    return APSeries(_merge(raw))


# ---------------------------------------------------------------------------
# Besicovitch (Cesaro) means
# ---------------------------------------------------------------------------


def _check_grid(omega) -> tuple[np.ndarray, float, float]:
    om = np.asarray(omega, dtype=float)
    if om.ndim != 1 or om.size < 3:
        raise ConfigError("need a 1-D frequency grid with at least 3 points")
    h = np.diff(om)
    if not np.allclose(h, h[0], rtol=1e-9, atol=0):
        raise ConfigError("frequency grid must be uniform")
    return om, float(h[0]), 0.5 * float(om[-1] - om[0])


def _trapezoid_weights(size: int) -> np.ndarray:
    w = np.ones(size)
    w[0] = w[-1] = 0.5
    return w


def besicovitch_coefficient(omega, f, lam: float) -> tuple[complex, float]:
    """``(1/2L) int f(omega) exp(-i lam omega) d omega`` by trapezoid; returns ``(value, L)``."""
    om, h, half = _check_grid(omega)
    f = np.asarray(f, dtype=complex)
    w = _trapezoid_weights(om.size)
    val = h * np.sum(w * f * np.exp(-1j * lam * om)) / (2.0 * half)
    return complex(val), half


def _hann_mean(om, f, lam):
    centre = 0.5 * (om[0] + om[-1])
    half = 0.5 * (om[-1] - om[0])
    win = 0.5 * (1.0 + np.cos(np.pi * (om - centre) / half))
    return complex(np.sum(win * f * np.exp(-1j * lam * om)) / np.sum(win))


SIDELOBE_REL = 1e-3


def _scan(omega, values, lambda_max):
    om, h, half = _check_grid(omega)
    f = np.asarray(values, dtype=complex)
    if f.shape != om.shape:
        raise ConfigError("values must match the frequency grid")
    win = 0.5 * (1.0 + np.cos(np.pi * (om - 0.5 * (om[0] + om[-1])) / half))
    pad = 1 << int(math.ceil(math.log2(8 * om.size)))
    amp = np.fft.fft(win * f, pad)
    lam_grid = 2.0 * np.pi * np.arange(pad) / (pad * h)
    keep = lam_grid <= lambda_max * (1.0 + 1e-9)
    return om, f, half, lam_grid[keep], np.abs(amp[keep]) / np.sum(win)


def scan_threshold(omega, values, lambda_max: float) -> float:
    """Default detection level: ``max(10 * median, 1e-3 * max)`` of the scanned means.

    The relative part keeps far window sidelobes of strong components out.
    """
    mag = _scan(omega, values, lambda_max)[4]
    return float(max(10.0 * np.median(mag), SIDELOBE_REL * np.max(mag)))


def besicovitch_scan(omega, values, lambda_max: float, threshold: float | None = None,
                     lambda_min: float | None = None):
    """Lowest frequency in ``(0, lambda_max]`` whose Hann-weighted mean is significant.

    A zero-padded FFT scans the mean on a fine grid; the first local maximum
    above ``threshold`` (default ``scan_threshold``) is refined by a bounded
    scalar search. A local maximum within four main-lobe widths of one ten
    times larger is taken as a sidelobe of the larger one. Returns
    ``(lambda, coefficient, floor)``, ``floor`` being the median scanned
    magnitude, or ``None`` when nothing qualifies.
    """
    om, f, half, lam_grid, mag = _scan(omega, values, lambda_max)
    if lam_grid.size < 3:
        return None
    floor = float(np.median(mag))
    thr = (max(10.0 * floor, SIDELOBE_REL * float(np.max(mag))) if threshold is None
           else float(threshold))
    lobe = 4.0 * np.pi / (2.0 * half)      # Hann main-lobe half width
    lo = lobe if lambda_min is None else float(lambda_min)
    step = lam_grid[1] - lam_grid[0]
    inner = np.arange(1, lam_grid.size - 1)
    is_peak = (mag[inner] >= mag[inner - 1]) & (mag[inner] >= mag[inner + 1]) \
        & (mag[inner] > thr) & (lam_grid[inner] >= lo)
    peaks = inner[is_peak]
    for pos, i in enumerate(peaks):
        near = peaks[pos + 1:]
        near = near[lam_grid[near] - lam_grid[i] <= 4 * lobe]
        if np.any(mag[near] > 10.0 * mag[i]):
            continue
        res = minimize_scalar(lambda x: -abs(_hann_mean(om, f, x)),
                              bounds=(lam_grid[i] - step, lam_grid[i] + step),
                              method="bounded", options={"xatol": 1e-12})
        lam = float(res.x)
        return lam, _hann_mean(om, f, lam), floor
    return None


# ---------------------------------------------------------------------------
# trace formulas
# ---------------------------------------------------------------------------


def singular_trace(omega, f) -> tuple[float, float]:
    """Cesaro mean of ``-log(1 - |f|^2)`` over the sampled band; returns ``(value, L)``."""
    om, h, half = _check_grid(omega)
    a = np.abs(np.asarray(f))
    if a.shape != om.shape:
        raise ConfigError("samples must match the frequency grid")
    if np.any(a >= 1.0):
        raise DomainError("|R| >= 1 at a sample")
    w = _trapezoid_weights(om.size)
    val = h * np.sum(w * -np.log1p(-a * a)) / (2.0 * half)
    return float(val), half


def classical_trace_check(omega, R, x, alpha) -> tuple[float, float]:
    """``(int -log(1 - |R|^2) d omega, pi int alpha^2 dx)`` by trapezoid.

    The first never exceeds the second for continuous profiles; an
    ``NumericError`` is raised if it does by more than one part in 10^3.
    """
    om = np.asarray(omega, dtype=float)
    a = np.abs(np.asarray(R))
    if np.any(a >= 1.0):
        raise DomainError("|R| >= 1 at a sample")
    lhs = float(np.trapezoid(-np.log1p(-a * a), om))
    rhs = float(np.pi * np.trapezoid(np.asarray(alpha, dtype=float) ** 2,
                                     np.asarray(x, dtype=float)))
    if lhs > rhs * (1.0 + 1e-3) + 1e-300:
        raise NumericError(f"trace inequality violated: {lhs} > {rhs}")
    return lhs, rhs

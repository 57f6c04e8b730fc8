"""Harmonic exponentials: the oscillatory generalization of ``exp(int alpha)``.

With ``e(x) = exp(2i (x - x0) omega)`` the operator
``A f(y) = int_{x0}^{y} alpha(x) e(x) conj(f(x)) dx`` gives
``E_alpha(y) = sum_j A^j 1(y)``; at ``omega = 0`` this is ``exp(int alpha)``.
For a step medium the integral becomes a sum over jump points and the
series terminates after ``n`` terms.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache
from itertools import product

import numpy as np

from .errors import ConfigError, DomainError, TruncationWarning
from .media import ImpedanceProfile, StepMedium, standard_approximant


@dataclass(frozen=True)
class HarmonicConfig:
    """Series truncation and quadrature controls.

    ``J`` caps the number of nested integrals; summation stops earlier once
    the factorial tail bound drops below ``tol``. ``panels`` is a minimum;
    more are used when ``omega`` makes the integrand oscillate.
    """

    J: int = 60
    quad_points: int = 16
    panels: int = 32
    tol: float = 1e-12

    def __post_init__(self):
        if int(self.J) != self.J or self.J < 1:
            raise ConfigError("J must be a positive integer")
        if int(self.quad_points) != self.quad_points or self.quad_points < 2:
            raise ConfigError("quad_points must be an integer >= 2")
        if self.panels < 1:
            raise ConfigError("panels must be positive")
        if not self.tol > 0:
            raise ConfigError("tol must be positive")


# ---------------------------------------------------------------------------
# step media
# ---------------------------------------------------------------------------


def singular_harmonic(m: StepMedium, y: float, omega):
    """``sum_j Z^j 1 (y)`` for a step medium, with ``Z`` summing over jumps below ``y``.

    Evaluated by ``E_k = E_{k-1} + r_k e(y_k) conj(E_{k-1})`` over the jumps
    ``y_k < y`` in order, which is the finite series regrouped.
    """
    x0, x1 = m.interval.x0, m.interval.x1
    if not x0 < y <= x1:
        raise DomainError(f"y must lie in ({x0}, {x1}]")
    om = np.asarray(omega, dtype=float)
    e = np.ones(om.shape, dtype=complex)
    for yk, rk in zip(m.jumps, m.reflectivities):
        if yk >= y:
            break
        e = e + rk * np.exp(2j * (yk - x0) * om) * np.conj(e)
    return complex(e) if e.ndim == 0 else e


def singular_harmonic_enumerated(m: StepMedium, y: float, omega: float) -> complex:
    """Same value by summing over every increasing tuple of jumps below ``y``.

    Exponential cost; intended for small media as a check.
    """
    x0 = m.interval.x0
    pts = [(yk, rk) for yk, rk in zip(m.jumps, m.reflectivities) if yk < y]
    total = 0.0 + 0.0j
    for mask in product((0, 1), repeat=len(pts)):
        chosen = [p for p, keep in zip(pts, mask) if keep]
        k = len(chosen)
        kappa = 2.0 * sum((-1) ** (k - 1 - i) * (s - x0) for i, (s, _) in enumerate(chosen))
        total += np.prod([r for _, r in chosen]) * np.exp(1j * omega * kappa)
    return complex(total)


# ---------------------------------------------------------------------------
# continuous alpha
# ---------------------------------------------------------------------------


@lru_cache(maxsize=32)
def _legendre_rule(n: int):
    """Nodes, weights and the cumulative integration matrix on ``[-1, 1]``.

    ``S @ g`` gives ``int_{-1}^{t_i}`` of the degree ``n-1`` interpolant of ``g``.
    """
    leg = np.polynomial.legendre
    t, w = leg.leggauss(n)
    vander = leg.legvander(t, n - 1)
    anti = leg.legint(np.eye(n), lbnd=-1.0)
    s = leg.legval(t, anti).T @ np.linalg.inv(vander)
    return t, w, s


def _alpha_callable(alpha):
    """``(fn, breaks)`` from a profile, a callable, or ``(x, values)`` samples."""
    if isinstance(alpha, ImpedanceProfile):
        return alpha.alpha, tuple(alpha.breaks)
    if callable(alpha):
        return alpha, ()
    xs, vals = (np.asarray(v, dtype=float) for v in alpha)
    if xs.ndim != 1 or xs.shape != vals.shape or xs.size < 2:
        raise ConfigError("alpha samples need matching 1-D arrays")
    return (lambda x: np.interp(x, xs, vals)), ()


def _panel_edges(x0, y, breaks, minimum, omega_max):
    edges = np.unique(np.concatenate(([x0], [b for b in breaks if x0 < b < y], [y])))
    out = [edges[:1]]
    for a, b in zip(edges, edges[1:]):
        # about one radian of phase per panel
        count = max(1, int(math.ceil(minimum * (b - a) / (y - x0))),
                    int(math.ceil(2.0 * omega_max * (b - a))))
        out.append(np.linspace(a, b, count + 1)[1:])
    return np.concatenate(out)


def _series(fn, x0, y, omega, cfg: HarmonicConfig, breaks, signs=(1.0,)):
    om = np.atleast_1d(np.asarray(omega, dtype=float))
    t, w, s = _legendre_rule(int(cfg.quad_points))
    edges = _panel_edges(x0, y, breaks, cfg.panels, float(np.max(np.abs(om))))
    half = 0.5 * np.diff(edges)                                  # (P,)
    x = edges[:-1, None] + half[:, None] * (t[None, :] + 1.0)   # (P, N)
    al = np.asarray(fn(x), dtype=float)
    norm = float(np.sum(half[:, None] * w[None, :] * np.abs(al)))
    phase = np.exp(2j * (x[None, :, :] - x0) * om[:, None, None])  # (W, P, N)

    results = []
    for sign in signs:
        kern = sign * al[None, :, :] * phase
        term = np.ones(phase.shape, dtype=complex)
        total = np.ones(om.shape, dtype=complex)
        bound = math.inf
        for j in range(1, int(cfg.J) + 1):
            g = kern * np.conj(term)
            within = half[None, :, None] * np.einsum("ik,wpk->wpi", s, g)
            panel_sums = half[None, :] * np.einsum("k,wpk->wp", w, g)
            starts = np.concatenate((np.zeros((om.size, 1)),
                                     np.cumsum(panel_sums, axis=1)[:, :-1]), axis=1)
            term = starts[:, :, None] + within
            total = total + np.sum(panel_sums, axis=1)
            bound = norm ** (j + 1) / math.factorial(j + 1) * math.exp(norm)
            if bound <= cfg.tol:
                break
        if bound > cfg.tol:
            warnings.warn(TruncationWarning(
                f"harmonic series tail bound {bound:.3g} exceeds tol {cfg.tol:.3g}",
                bound))
        results.append((total, bound))
    return om, results


def harmonic_exponential(alpha, x0: float, y: float, omega,
                         cfg: HarmonicConfig | None = None, breaks=()):
    """``E_alpha(omega)`` on ``(x0, y)``; returns ``(value, tail_bound)``.

    ``alpha`` is an ``ImpedanceProfile``, a vectorised callable or
    ``(x, values)`` samples. Nested integrals are accumulated on
    Gauss-Legendre panels split at ``breaks`` (and at the profile's own
    breaks), so a discontinuous ``alpha`` is integrated piece by piece.
    """
    cfg = cfg or HarmonicConfig()
    if not y > x0:
        raise DomainError("need x0 < y")
    fn, own = _alpha_callable(alpha)
    om, [(val, bound)] = _series(fn, float(x0), float(y), omega, cfg,
                                 tuple(own) + tuple(breaks))
    val = val.reshape(np.shape(omega))
    return (complex(val) if val.ndim == 0 else val), bound


def hyperbolic_tangent(alpha, x0: float, y: float, omega,
                       cfg: HarmonicConfig | None = None, breaks=()):
    """``(E_alpha - E_-alpha)/(E_alpha + E_-alpha)``: the reflection coefficient of ``(x0, y)``."""
    cfg = cfg or HarmonicConfig()
    if not y > x0:
        raise DomainError("need x0 < y")
    fn, own = _alpha_callable(alpha)
    _, [(ep, _), (em, _)] = _series(fn, float(x0), float(y), omega, cfg,
                                    tuple(own) + tuple(breaks), signs=(1.0, -1.0))
    th = ((ep - em) / (ep + em)).reshape(np.shape(omega))
    return complex(th) if th.ndim == 0 else th


def simplex_term(alpha, x0: float, y: float, omega: float, j: int,
                 nodes: int = 24) -> complex:
    """``A^j 1 (y)`` by tensor Gauss-Legendre on the cube ``(x0, y)^j``.

    Sorting each node tuple maps the cube onto the ordered simplex ``j!``
    times over, so the cube sum is divided by ``j!``. The integrand has
    kinks on the diagonals, so accuracy is modest; intended as a check
    for small ``j``.
    """
    fn, _ = _alpha_callable(alpha)
    g, w = np.polynomial.legendre.leggauss(nodes)
    half = 0.5 * (y - x0)
    xs = x0 + half * (g + 1.0)
    ws = half * w
    grids = np.meshgrid(*([xs] * j), indexing="ij")
    pts = np.sort(np.stack([gr.ravel() for gr in grids], axis=1), axis=1)
    wts = np.prod(np.stack(np.meshgrid(*([ws] * j), indexing="ij"), 0).reshape(j, -1), 0)
    signs = (-1.0) ** (j - 1 - np.arange(j))
    kappa = 2.0 * (pts - x0) @ signs
    vals = np.prod(fn(pts), axis=1) * np.exp(1j * omega * kappa)
    return complex(np.sum(wts * vals) / math.factorial(j))


def singular_approximation_gap(profile: ImpedanceProfile, y: float, omega, n: int,
                               cfg: HarmonicConfig | None = None):
    """``|E_{zeta_n}(omega) - E_alpha(omega)|`` at ``y`` for the n-th standard approximant."""
    if not profile.is_continuous:
        raise DomainError("the profile must be continuous")
    approx = standard_approximant(profile, n).medium()
    singular = singular_harmonic(approx, y, omega)
    regular, _ = harmonic_exponential(profile, profile.interval.x0, y, omega, cfg)
    out = np.abs(np.asarray(singular) - np.asarray(regular))
    return float(out) if out.ndim == 0 else out

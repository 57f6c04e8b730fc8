"""Worked example on the chirp profile: forward, inverse, Born, noise.

Data are taken on the node grid ``t_j = 2 j L / n`` (``delta = L/n``), so the
n-th jump sits at the right end ``x0 + L``. This is realised by running the
standard approximant on ``(x0, x0 + (n+1) L / n)``; the chirp is constant
beyond its active window, so the extension changes nothing physical.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DataInconsistencyError
from .forward import (ReflectionSeries, born_approximation, forward_scatter,
                      relative_l2, spectrum)
from .inverse import add_noise, born_invert, invert_scatter
from .media import ImpedanceProfile, potential_from_samples


def node_grid_profile(profile: ImpedanceProfile, n: int) -> ImpedanceProfile:
    """The same impedance on ``(x0, x0 + (n+1) L / n)``."""
    iv = profile.interval
    return _rebuild(profile, iv.x0, iv.x0 + (n + 1) * iv.length / n)


def _rebuild(profile: ImpedanceProfile, x0: float, x1: float) -> ImpedanceProfile:
    if profile.kind == "chirp":
        return ImpedanceProfile.chirp(x0, x1, **profile.params)
    if profile.kind == "exp":
        return ImpedanceProfile.exponential(profile.params["alpha0"], x0, x1,
                                            profile.params.get("zeta0", 1.0))
    if profile.kind == "const":
        return ImpedanceProfile.constant(profile.params["value"], x0, x1)
    raise ConfigError(f"no node-grid extension for profile kind {profile.kind!r}")


def node_grid_data(profile: ImpedanceProfile, n: int) -> ReflectionSeries:
    return forward_scatter(node_grid_profile(profile, n), n=n)


@dataclass
class Reconstruction:
    data: ReflectionSeries
    x: np.ndarray
    zeta: np.ndarray
    truth: np.ndarray
    error: float
    forward_time: float
    inverse_time: float


def reconstruct(profile: ImpedanceProfile, n: int = 2000) -> Reconstruction:
    """Forward then inverse on the node grid, compared with the approximant values."""
    t = time.perf_counter()
    data = node_grid_data(profile, n)
    t_fwd = time.perf_counter() - t
    zeta0 = float(profile.zeta(profile.interval.x0 + 0.5 * data.delta))
    t = time.perf_counter()
    inv = invert_scatter(data, zeta0=zeta0)
    t_inv = time.perf_counter() - t
    truth = profile.zeta(inv.midpoints)
    return Reconstruction(data, inv.midpoints, inv.zeta, truth,
                          relative_l2(inv.zeta, truth), t_fwd, t_inv)


def downsample_consistency(profile: ImpedanceProfile, n: int = 2000, factor: int = 16):
    """Relative l2 and max gap between n-point data and every ``factor``-th fine sample."""
    coarse = node_grid_data(profile, n).values
    fine = node_grid_data(profile, n * factor).values[factor - 1::factor]
    return relative_l2(fine, coarse), float(np.max(np.abs(fine - coarse)))


def spectrum_doubling(profile: ImpedanceProfile, n: int = 4000, band: float = 8.0,
                      count: int = 1000, threads: int = 1) -> float:
    """Relative l2 gap between degree-n and degree-2n spectra on ``(-band, band)``."""
    om = np.linspace(-band, band, count)
    low = spectrum(profile, om, n=n, threads=threads)
    high = spectrum(profile, om, n=2 * n, threads=threads)
    return relative_l2(low, high)


def potential_recovery(profile: ImpedanceProfile, n: int = 2000):
    """``q`` from second differences of the reconstructed ``sqrt(zeta)``.

    Interior layer centres only; returns ``(x, q_recovered, q_true, rel_l2)``.
    """
    rec = reconstruct(profile, n)
    q = potential_from_samples(rec.zeta, rec.data.delta)[1:-1]
    x = rec.x[1:-1]
    truth = profile.potential(x)
    return x, q, truth, relative_l2(q, truth)


def born_figures(profile: ImpedanceProfile, n: int = 2000):
    """``(data residual, inversion error)`` of the Born approximation, both relative l2.

    The residual is normalised by the data; the inversion is compared with
    ``zeta`` at the nodes ``y_j``.
    """
    data = node_grid_data(profile, n)
    d = data.values
    born = born_approximation(profile, data.times, data.x0)
    y, zb = born_invert(data, zeta0=float(profile.zeta(profile.interval.x0)))
    residual = float(np.linalg.norm(d - born) / np.linalg.norm(d))
    return residual, relative_l2(zb, profile.zeta(y))


def noise_trial(profile: ImpedanceProfile, data: ReflectionSeries, fraction: float,
                seed: int):
    """Reconstruction error for one noisy copy of ``data``; ``None`` if inversion aborts."""
    noisy = add_noise(data.values, fraction, seed)
    zeta0 = float(profile.zeta(profile.interval.x0 + 0.5 * data.delta))
    try:
        inv = invert_scatter((data.times, noisy), x0=data.x0, zeta0=zeta0)
    except DataInconsistencyError:
        return None
    return relative_l2(inv.zeta, profile.zeta(inv.midpoints))


def noise_sweep(profile: ImpedanceProfile, n: int = 2000, fraction: float = 0.25,
                seeds=range(20), threads: int = 1):
    """Errors per seed (``None`` marks an abort)."""
    data = node_grid_data(profile, n)
    seeds = list(seeds)
    if threads <= 1:
        return seeds, [noise_trial(profile, data, fraction, s) for s in seeds]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        errs = list(pool.map(lambda s: noise_trial(profile, data, fraction, s), seeds))
    return seeds, errs

"""Automorphisms of the unit disk and reflection maps of step media.

An automorphism ``phi(mu, rho)(xi) = mu*(xi + rho)/(1 + conj(rho)*xi)`` is
represented projectively by ``[[mu, mu*rho], [conj(rho), 1]]``; matrix
products compose maps.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .media import StepMedium

_UNIT_TOL = 1e-12
_RENORM_EVERY = 32


@dataclass(frozen=True)
class Auto:
    """``xi -> mu*(xi + rho)/(1 + conj(rho)*xi)`` with ``|mu| = 1``, ``|rho| < 1``."""

    mu: complex
    rho: complex

    def __post_init__(self):
        mu, rho = complex(self.mu), complex(self.rho)
        if abs(abs(mu) - 1.0) > _UNIT_TOL:
            raise DomainError(f"|mu| must be 1, got {abs(mu)!r}")
        if not abs(rho) < 1.0:
            raise DomainError(f"|rho| must be < 1, got {abs(rho)!r}")
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "rho", rho)


@dataclass(frozen=True)
class Constant:
    """The constant map ``xi -> sigma`` with ``|sigma| = 1``."""

    sigma: complex

    def __post_init__(self):
        sigma = complex(self.sigma)
        if abs(abs(sigma) - 1.0) > _UNIT_TOL:
            raise DomainError(f"|sigma| must be 1, got {abs(sigma)!r}")
        object.__setattr__(self, "sigma", sigma)


DiskMap = Auto | Constant

IDENTITY = Auto(1.0, 0.0)


def homog_matrix(f: Auto) -> np.ndarray:
    return np.array([[f.mu, f.mu * f.rho], [np.conj(f.rho), 1.0]], dtype=complex)


def project(v) -> complex:
    """Projective quotient ``w/z`` of a homogeneous vector ``(w, z)``."""
    return complex(v[0] / v[1])


def from_matrix(m) -> Auto:
    """Read an automorphism off any nonzero multiple of its matrix."""
    m = np.asarray(m, dtype=complex)
    mu = m[0, 0] / m[1, 1]
    rho = m[0, 1] / m[0, 0]
    return Auto(mu / abs(mu), rho)


def apply(f: DiskMap, xi):
    """Evaluate ``f`` at ``xi`` in the closed disk (arrays allowed)."""
    x = np.asarray(xi, dtype=complex)
    if np.any(np.abs(x) > 1.0 + 1e-15):
        raise DomainError("argument outside the closed unit disk")
    if isinstance(f, Constant):
        out = np.full(x.shape, f.sigma, dtype=complex)
    else:
        out = f.mu * (x + f.rho) / (1.0 + np.conj(f.rho) * x)
    return complex(out) if out.ndim == 0 else out


def compose(f: DiskMap, g: DiskMap) -> DiskMap:
    """``f o g``."""
    if isinstance(g, Constant):
        return Constant(apply(f, g.sigma))
    if isinstance(f, Constant):
        return f
    mu1, r1, mu2, r2 = f.mu, f.rho, g.mu, g.rho
    # product of normalised matrices, written out
    a = mu1 * mu2 + mu1 * r1 * np.conj(r2)
    b = mu1 * mu2 * r2 + mu1 * r1
    d = np.conj(r1) * mu2 * r2 + 1.0
    return Auto(a / d / abs(a / d), b / a)


def invert(f: DiskMap) -> Auto:
    """Inverse automorphism ``phi(conj(mu), -mu*rho)``."""
    if isinstance(f, Constant):
        raise DomainError("constant maps are not invertible")
    return Auto(np.conj(f.mu), -f.mu * f.rho)


# ---------------------------------------------------------------------------
# step media
# ---------------------------------------------------------------------------


def transfer_product(m: StepMedium, omega, with_boundary: bool = False) -> np.ndarray:
    """Matrix product ``M1 ... M_{n+1}`` for each frequency.

    ``M_j = [[mu_j, mu_j*r_j], [r_j, 1]]`` with ``mu_j = exp(2i w_j omega)``,
    ``w_j`` the layer widths and ``r_{n+1} = 0``. With ``with_boundary`` the
    product is premultiplied by ``[[1, 1], [-1, 1]]`` so that the second
    column holds the two singular harmonic exponentials. The result has
    shape ``omega.shape + (2, 2)`` and is scaled by an arbitrary positive
    factor per frequency.
    """
    om = np.asarray(omega, dtype=float)
    flat = om.reshape(-1)
    r, w = m.reflectivities, m.widths
    rr = np.concatenate((r, [0.0]))
    p11 = np.ones(flat.shape, dtype=complex)
    p12 = np.zeros(flat.shape, dtype=complex)
    p21 = np.zeros(flat.shape, dtype=complex)
    p22 = np.ones(flat.shape, dtype=complex)
    if with_boundary:
        p21[:] = -1.0
        p12[:] = 1.0
    for j, (rj, wj) in enumerate(zip(rr, w)):
        mu = np.exp(2j * wj * flat)
        n11 = p11 * mu + p12 * rj
        n12 = p11 * mu * rj + p12
        n21 = p21 * mu + p22 * rj
        n22 = p21 * mu * rj + p22
        p11, p12, p21, p22 = n11, n12, n21, n22
        if (j + 1) % _RENORM_EVERY == 0:
            s = np.maximum.reduce([np.abs(p11), np.abs(p12), np.abs(p21), np.abs(p22)])
            p11, p12, p21, p22 = p11 / s, p12 / s, p21 / s, p22 / s
    out = np.stack([np.stack([p11, p12], -1), np.stack([p21, p22], -1)], -2)
    return out.reshape(om.shape + (2, 2))


def step_reflection_map(m: StepMedium, omega: float) -> Auto:
    """The disk automorphism ``xi -> g(xi)`` of a step medium at one frequency."""
    p = transfer_product(m, np.array([float(omega)]))[0]
    return from_matrix(p)


def step_reflection(m: StepMedium, omega):
    """Reflection coefficient ``R(omega) = g(0)``; arrays of omega allowed."""
    p = transfer_product(m, omega)
    out = p[..., 0, 1] / p[..., 1, 1]
    return complex(out) if np.ndim(out) == 0 else out


def step_reflection_composed(m: StepMedium, omega: float, xi: complex = 0.0) -> complex:
    """``g(xi)`` by direct nested composition of the layer maps.

    Slower than the matrix product; used as an independent check.
    """
    r, w = m.reflectivities, m.widths
    val = cmath.exp(2j * w[-1] * omega) * xi
    for rj, wj in zip(r[::-1], w[-2::-1]):
        mu = cmath.exp(2j * wj * omega)
        val = mu * (val + rj) / (1.0 + rj * val)
    return val

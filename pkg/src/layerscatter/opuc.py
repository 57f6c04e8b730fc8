"""Szego recursion for orthogonal polynomials on the unit circle.

With real Verblunsky coefficients ``r_1..r_n`` (the layer reflectivities)::

    Phi_{j+1}  = z Phi_j - r_{j+1} Phi*_j      Psi_{j+1}  = z Psi_j + r_{j+1} Psi*_j
    Phi*_{j+1} = Phi*_j - r_{j+1} z Phi_j      Psi*_{j+1} = Psi*_j + r_{j+1} z Psi_j

Coefficient arrays hold the coefficient of ``z**k`` at index ``k``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, DomainError, NumericError

MAX_QUADRATURE_NODES = 2 ** 20


@dataclass(frozen=True)
class OpucQuartet:
    n: int
    phi: np.ndarray = field(repr=False)
    psi: np.ndarray = field(repr=False)

    @property
    def phi_star(self) -> np.ndarray:
        return self.phi[::-1]

    @property
    def psi_star(self) -> np.ndarray:
        return self.psi[::-1]


def check_verblunsky(r) -> np.ndarray:
    r = np.asarray(r, dtype=float).reshape(-1)
    if r.size and not np.all(np.abs(r) < 1.0):
        bad = int(np.argmax(~(np.abs(r) < 1.0)))
        raise DomainError(f"Verblunsky coefficient {bad + 1} has modulus >= 1")
    return r


def _step(p: np.ndarray, j: int, rj: float) -> None:
    """In place: ``p[:j+2] <- z*p - rj*reverse(p)`` for a degree-j polynomial."""
    old = p[: j + 1].copy()
    p[1 : j + 2] = old
    p[0] = 0.0
    p[: j + 1] -= rj * old[::-1]


def opuc_recursion(r) -> OpucQuartet:
    """Run the recursion for ``Phi`` and ``Psi``; the starred duals are reversals."""
    r = check_verblunsky(r)
    n = r.size
    phi = np.zeros(n + 1)
    psi = np.zeros(n + 1)
    phi[0] = psi[0] = 1.0
    for j in range(n):
        _step(phi, j, r[j])
        _step(psi, j, -r[j])
    return OpucQuartet(n, phi, psi)


def horner(coeffs, z):
    """Evaluate ``sum coeffs[k] z**k`` (arrays of z allowed)."""
    z = np.asarray(z, dtype=complex)
    acc = np.zeros(z.shape, dtype=complex)
    for c in np.asarray(coeffs)[::-1]:
        acc = acc * z + c
    return acc


def star_values(r, z):
    """``(Psi*_n(z), Phi*_n(z))`` by running the recursion on point values.

    O(n) per point and no coefficient arrays; valid anywhere in the plane.
    """
    r = check_verblunsky(r)
    z = np.asarray(z, dtype=complex)
    ph = np.ones(z.shape, dtype=complex)
    phs = np.ones(z.shape, dtype=complex)
    ps = np.ones(z.shape, dtype=complex)
    pss = np.ones(z.shape, dtype=complex)
    for rj in r:
        ph, phs = z * ph - rj * phs, phs - rj * z * ph
        ps, pss = z * ps + rj * pss, pss + rj * z * ps
    return pss, phs


def opuc_reflection(r, delta: float, omega):
    """``(Psi* - Phi*)/(Psi* + Phi*)`` at ``z = exp(2i*delta*omega)``."""
    if not delta > 0:
        raise ConfigError("delta must be positive")
    z = np.exp(2j * delta * np.asarray(omega, dtype=float))
    pss, phs = star_values(r, z)
    out = (pss - phs) / (pss + phs)
    return complex(out) if np.ndim(out) == 0 else out


# ---------------------------------------------------------------------------
# double-double point values, for 1 - |R|^2 when it is far below |Psi*||Phi*|
# ---------------------------------------------------------------------------

_SPLIT = 134217729.0  # 2**27 + 1


def _two_sum(a, b):
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


def _two_prod(a, b):
    p = a * b
    t = _SPLIT * a
    ah = t - (t - a)
    t = _SPLIT * b
    bh = t - (t - b)
    al, bl = a - ah, b - bh
    return p, ((ah * bh - p) + ah * bl + al * bh) + al * bl


def _dd_add(x, y):
    s, e = _two_sum(x[0], y[0])
    return _two_sum(s, e + x[1] + y[1])


def _dd_mul(x, y):
    p, e = _two_prod(x[0], y[0])
    return _two_sum(p, e + x[0] * y[1] + x[1] * y[0])


def _dd_scale(x, d: float):
    p, e = _two_prod(x[0], d)
    return _two_sum(p, e + x[1] * d)


def _dd_neg(x):
    return -x[0], -x[1]


def _cdd_mul(u, v):
    (ur, ui), (vr, vi) = u, v
    return (_dd_add(_dd_mul(ur, vr), _dd_neg(_dd_mul(ui, vi))),
            _dd_add(_dd_mul(ur, vi), _dd_mul(ui, vr)))


def _cdd_axpy(u, rj: float, v):
    """``u + rj * v``."""
    return _dd_add(u[0], _dd_scale(v[0], rj)), _dd_add(u[1], _dd_scale(v[1], rj))


def _unit_circle_dd(z):
    """``z/|z|`` to double-double accuracy for ``|z| = 1`` up to rounding."""
    zr, zi = z.real.copy(), z.imag.copy()
    zero = np.zeros_like(zr)
    norm2 = _dd_add(_two_prod(zr, zr), _two_prod(zi, zi))
    # 1/sqrt(1 + d) = 1 - d/2 to first order, d ~ 1e-16
    corr = _dd_add((np.ones_like(zr), zero), _dd_scale(_dd_add(norm2, (-np.ones_like(zr), zero)),
                                                       -0.5))
    return _dd_mul((zr, zero), corr), _dd_mul((zi, zero), corr)


def _star_values_dd(r, z):
    """``(Psi*, Phi*)`` on the unit circle in double-double arithmetic."""
    zd = _unit_circle_dd(z)
    one = (np.ones(z.shape), np.zeros(z.shape))
    nil = (np.zeros(z.shape), np.zeros(z.shape))
    ph = phs = ps = pss = (one, nil)
    for rj in r:
        zph, zps = _cdd_mul(zd, ph), _cdd_mul(zd, ps)
        ph, phs = _cdd_axpy(zph, -rj, phs), _cdd_axpy(phs, -rj, zph)
        ps, pss = _cdd_axpy(zps, rj, pss), _cdd_axpy(pss, rj, zps)
    return pss, phs


def one_minus_abs2(r, delta: float, omega):
    """``1 - |R|^2`` computed as ``4 Re(Psi* conj Phi*)/|Psi* + Phi*|^2``.

    The numerator cancels badly when ``1 - |R|^2`` is far below
    ``|Psi*||Phi*|``; where a rounding bound says float64 cannot give 12
    digits, the recursion is rerun in double-double arithmetic.
    """
    r = check_verblunsky(r)
    z = np.exp(2j * delta * np.asarray(omega, dtype=float))
    pss, phs = star_values(r, z)
    num = np.real(pss * np.conj(phs))
    den = np.abs(pss + phs) ** 2
    bound = 8.0 * (r.size + 1) * np.finfo(float).eps * np.abs(pss) * np.abs(phs)
    if np.all(bound <= 1e-12 * np.abs(num)):
        return 4.0 * num / den
    zz = np.atleast_1d(z)
    (pr, pi), (fr, fi) = _star_values_dd(r, zz)
    hi, lo = _dd_add(_dd_mul(pr, fr), _dd_mul(pi, fi))
    out = 4.0 * (hi + lo) / np.abs((pr[0] + fr[0]) + 1j * (pi[0] + fi[0])) ** 2
    return out.reshape(np.shape(z))


def gauss_legendre_integral(f, a: float, b: float, rtol: float = 1e-10,
                            nodes: int = 16, max_nodes: int = MAX_QUADRATURE_NODES):
    """Adaptive composite Gauss-Legendre on ``(a, b)``.

    Each panel is compared with the sum over its two halves; panels whose
    disagreement exceeds their length-proportional share of ``rtol`` are
    halved again, the rest are kept. ``f`` takes an array of abscissae.
    Returns ``(value, achieved_tol, evaluations)``; raises ``NumericError``
    carrying the achieved tolerance once ``max_nodes`` evaluations are spent.
    """
    g, w = np.polynomial.legendre.leggauss(nodes)
    length = b - a

    def rule(lo, hi):
        half = 0.5 * (hi - lo)
        x = lo[:, None] + half[:, None] * (g[None, :] + 1.0)
        vals = np.asarray(f(x.ravel()), dtype=float).reshape(x.shape)
        return half * (vals @ w)

    lo, hi = np.array([a]), np.array([b])
    coarse = rule(lo, hi)
    used = nodes
    done_val = done_err = 0.0
    while True:
        mid = 0.5 * (lo + hi)
        left, right = rule(lo, mid), rule(mid, hi)
        used += 2 * nodes * lo.size
        fine = left + right
        if not np.all(np.isfinite(fine)):
            raise NumericError("integrand is not finite", achieved=math.inf)
        err = np.abs(fine - coarse)
        total = done_val + float(np.sum(fine))
        scale = max(abs(total), 1e-300)
        achieved = (done_err + float(np.sum(err))) / scale
        if achieved <= rtol:
            return total, achieved, used
        split = err > rtol * scale * (hi - lo) / length
        done_val += float(np.sum(fine[~split]))
        done_err += float(np.sum(err[~split]))
        if used + 4 * nodes * int(np.sum(split)) > max_nodes:
            raise NumericError("quadrature did not converge", achieved=achieved)
        lo = np.concatenate((lo[split], mid[split]))
        hi = np.concatenate((mid[split], hi[split]))
        coarse = np.concatenate((left[split], right[split]))


def szego_sum(r, delta: float, rtol: float = 1e-10):
    """Both sides of the Szego identity over one period of ``R``.

    Returns ``(lhs, rhs)`` where ``lhs = (delta/pi) * integral of
    -log(1 - |R|^2)`` over ``(-pi/(2 delta), pi/(2 delta))`` and
    ``rhs = sum(-log(1 - r_j^2))``.
    """
    r = check_verblunsky(r)
    if not delta > 0:
        raise ConfigError("delta must be positive")
    rhs = float(-np.sum(np.log1p(-r * r)))
    if r.size == 0:
        return 0.0, 0.0
    half = math.pi / (2.0 * delta)
    val, _, _ = gauss_legendre_integral(
        lambda w: -np.log(one_minus_abs2(r, delta, w)), -half, half, rtol=rtol)
    return delta / math.pi * val, rhs


def inner_with_one(p, m) -> float:
    """``<sum p_k z^k, 1>`` for the measure with moments ``m``: ``sum p_k m_k``."""
    p = np.asarray(p, dtype=float)
    m = np.asarray(m, dtype=float)
    if p.ndim != 1 or m.ndim != 1 or p.size > m.size:
        raise ConfigError("need at least as many moments as coefficients")
    return float(np.dot(p, m[: p.size]))


def moments_of(r, count: int) -> np.ndarray:
    """Moments ``m_0..m_count`` of the orthogonality measure of ``Phi``.

    Inverts the Verblunsky map directly: with ``Phi_j`` known, ``m_{j+1}``
    is the unique value making ``<Phi_{j+1}, 1> = 0``. The list is padded
    with zeros beyond its length (Bernstein-Szego continuation).
    """
    r = check_verblunsky(r)
    rr = np.zeros(count)
    rr[: min(count, r.size)] = r[:count]
    m = np.zeros(count + 1)
    m[0] = 1.0
    phi = np.zeros(count + 1)
    phi[0] = 1.0
    for j in range(count):
        # <z Phi_j, 1> = r_{j+1} <Phi*_j, 1>; leading term of z Phi_j is m_{j+1}
        rhs = rr[j] * float(np.dot(phi[: j + 1][::-1], m[: j + 1]))
        m[j + 1] = rhs - float(np.dot(phi[:j], m[1 : j + 1]))
        _step(phi, j, rr[j])
    return m

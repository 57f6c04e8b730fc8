"""Impedance profiles, step media and their standard approximants.

Coordinates are travel times, so a layer of width w delays an echo by 2w.
An impedance is a positive function ``zeta`` on an interval ``(x0, x1)``;
``alpha = -zeta'/(2 zeta)`` is its half log-derivative and
``q = alpha**2 - alpha'`` the associated Schrodinger potential.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import ConfigError, DomainError

#: Jumps whose reflectivity reaches this modulus are rejected.
REFLECTIVITY_LIMIT = 1.0 - 1e-12

ArrayFn = Callable[[np.ndarray], np.ndarray]


def reflectivity(left, right):
    """Reflectivity ``(left - right)/(left + right)`` of an interface.

    Works elementwise on arrays. Both impedances must be positive.
    """
    left = np.asarray(left, dtype=float)
    right = np.asarray(right, dtype=float)
    if np.any(~(left > 0)) or np.any(~(right > 0)):
        raise DomainError("impedances must be positive")
    r = (left - right) / (left + right)
    return float(r) if r.ndim == 0 else r


@dataclass(frozen=True)
class Interval:
    x0: float
    x1: float

    def __post_init__(self):
        if not (math.isfinite(self.x0) and math.isfinite(self.x1)):
            raise ConfigError("interval endpoints must be finite")
        if not self.x1 > self.x0:
            raise ConfigError(f"empty interval ({self.x0}, {self.x1})")

    @property
    def length(self) -> float:
        return self.x1 - self.x0


def _adjacent(a: float, b: float) -> bool:
    return abs(a - b) <= 1e-12 * max(1.0, abs(a), abs(b))


# ---------------------------------------------------------------------------
# step media
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class StepMedium:
    """Piecewise-constant impedance.

    ``values[j]`` is the impedance on ``(jumps[j-1], jumps[j])`` with the
    interval endpoints closing the first and last layers. ``removable``
    permits jumps across which the value does not change; the equally
    spaced media produced by standard approximants need this.
    """

    interval: Interval
    jumps: tuple = ()
    values: tuple = (1.0,)
    removable: bool = False

    def __post_init__(self):
        jumps = tuple(float(y) for y in self.jumps)
        values = tuple(float(c) for c in self.values)
        object.__setattr__(self, "jumps", jumps)
        object.__setattr__(self, "values", values)
        if len(values) != len(jumps) + 1:
            raise ConfigError("need exactly one more layer value than jumps")
        if any(not c > 0 or not math.isfinite(c) for c in values):
            raise ConfigError("layer values must be positive and finite")
        x0, x1 = self.interval.x0, self.interval.x1
        pts = (x0,) + jumps + (x1,)
        if any(not b > a for a, b in zip(pts, pts[1:])):
            raise ConfigError("jumps must be strictly increasing and interior")
        r = self.reflectivities
        if r.size and np.max(np.abs(r)) >= REFLECTIVITY_LIMIT:
            raise DomainError("a jump has |r| >= 1 - 1e-12")
        if not self.removable and np.any(r == 0.0):
            raise ConfigError("adjacent layer values must differ at every jump")

    # constructors -----------------------------------------------------
    @classmethod
    def constant(cls, value: float, x0: float, x1: float) -> "StepMedium":
        return cls(Interval(x0, x1), (), (value,))

    @classmethod
    def from_reflectivities(cls, interval: Interval, jumps: Sequence[float],
                            r: Sequence[float], zeta0: float = 1.0,
                            removable: bool = True) -> "StepMedium":
        """Build the medium with first-layer value ``zeta0`` and the given jumps."""
        r = np.asarray(r, dtype=float)
        if r.size != len(jumps):
            raise ConfigError("one reflectivity per jump")
        if r.size and np.max(np.abs(r)) >= REFLECTIVITY_LIMIT:
            raise DomainError("a reflectivity has |r| >= 1 - 1e-12")
        logs = math.log(zeta0) - 2.0 * np.concatenate(([0.0], np.cumsum(np.arctanh(r))))
        return cls(interval, tuple(jumps), tuple(np.exp(logs)), removable=removable)

    @classmethod
    def equally_spaced(cls, interval: Interval, r: Sequence[float],
                       zeta0: float = 1.0) -> "StepMedium":
        """Jumps at ``x0 + j*delta`` with ``delta = length/(n+1)``."""
        n = len(r)
        delta = interval.length / (n + 1)
        jumps = interval.x0 + delta * np.arange(1, n + 1)
        return cls.from_reflectivities(interval, jumps, r, zeta0)

    # derived quantities -------------------------------------------------
    @property
    def n(self) -> int:
        return len(self.jumps)

    @property
    def reflectivities(self) -> np.ndarray:
        v = np.asarray(self.values)
        return (v[:-1] - v[1:]) / (v[:-1] + v[1:])

    @property
    def widths(self) -> np.ndarray:
        """Layer widths ``(y1-x0, y2-y1, ..., x1-yn)``."""
        pts = np.concatenate(([self.interval.x0], self.jumps, [self.interval.x1]))
        return np.diff(pts)

    @property
    def log_variation(self) -> float:
        """Total variation of ``log(zeta)/2``."""
        return float(np.sum(np.abs(np.arctanh(self.reflectivities))))

    def zeta(self, x):
        """Right-continuous evaluation."""
        x = np.asarray(x, dtype=float)
        idx = np.searchsorted(np.asarray(self.jumps), x, side="right")
        out = np.asarray(self.values)[idx]
        return float(out) if out.ndim == 0 else out

    def reciprocal(self) -> "StepMedium":
        return StepMedium(self.interval, self.jumps,
                          tuple(1.0 / c for c in self.values), self.removable)

    def scaled(self, s: float) -> "StepMedium":
        if not s > 0:
            raise DomainError("scale factor must be positive")
        return StepMedium(self.interval, self.jumps,
                          tuple(s * c for c in self.values), self.removable)

    def tail(self) -> "StepMedium":
        """Medium seen from just beyond the first jump."""
        if not self.jumps:
            raise DomainError("a medium without jumps has no tail")
        return StepMedium(Interval(self.jumps[0], self.interval.x1),
                          self.jumps[1:], self.values[1:], self.removable)

    def canonical(self) -> "StepMedium":
        """Drop removable jumps."""
        keep = [j for j, r in enumerate(self.reflectivities) if r != 0.0]
        jumps = tuple(self.jumps[j] for j in keep)
        values = (self.values[0],) + tuple(self.values[j + 1] for j in keep)
        return StepMedium(self.interval, jumps, values)

    def to_profile(self) -> "ImpedanceProfile":
        pts = (self.interval.x0,) + self.jumps + (self.interval.x1,)
        pieces = tuple(_constant_piece(c, a, b)
                       for c, a, b in zip(self.values, pts, pts[1:]))
        return ImpedanceProfile(pieces, kind="step")


# ---------------------------------------------------------------------------
# continuous and piecewise-continuous profiles
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Piece:
    """A continuous stretch of impedance with optional closed forms.

    ``breaks`` lists interior points where alpha is merely continuous,
    so that quadrature can split there.
    """

    x0: float
    x1: float
    zeta: ArrayFn
    alpha: ArrayFn | None = None
    q: ArrayFn | None = None
    breaks: tuple = ()


def _constant_piece(c: float, x0: float, x1: float) -> Piece:
    return Piece(x0, x1,
                 zeta=lambda x, c=c: np.full(np.shape(x), c, dtype=float),
                 alpha=lambda x: np.zeros(np.shape(x)),
                 q=lambda x: np.zeros(np.shape(x)))


@dataclass(frozen=True)
class ImpedanceProfile:
    """Positive impedance on an interval, as a chain of continuous pieces.

    Junctions where the adjacent pieces disagree are jumps. ``floor`` is a
    declared lower bound for ``zeta``.
    """

    pieces: tuple
    kind: str = "custom"
    params: dict = field(default_factory=dict)
    floor: float = 0.0

    def __post_init__(self):
        pieces = tuple(self.pieces)
        object.__setattr__(self, "pieces", pieces)
        if not pieces:
            raise ConfigError("a profile needs at least one piece")
        for p in pieces:
            Interval(p.x0, p.x1)
        for a, b in zip(pieces, pieces[1:]):
            if not _adjacent(a.x1, b.x0):
                raise ConfigError("profile pieces must be contiguous")

    # constructors -----------------------------------------------------
    @classmethod
    def constant(cls, value: float = 1.0, x0: float = 0.0, x1: float = 1.0):
        if not value > 0:
            raise ConfigError("impedance must be positive")
        return cls((_constant_piece(float(value), x0, x1),), "const",
                   {"value": float(value)}, floor=float(value))

    @classmethod
    def exponential(cls, alpha0: float, x0: float = 0.0, x1: float = 1.0,
                    zeta0: float = 1.0):
        """``zeta(x) = zeta0*exp(-2*alpha0*(x - x0))``: constant alpha."""
        def z(x):
            return zeta0 * np.exp(-2.0 * alpha0 * (np.asarray(x, dtype=float) - x0))
        piece = Piece(x0, x1, z,
                      alpha=lambda x: np.full(np.shape(x), float(alpha0)),
                      q=lambda x: np.full(np.shape(x), float(alpha0) ** 2))
        lo = zeta0 * math.exp(-2.0 * max(alpha0 * (x1 - x0), 0.0))
        return cls((piece,), "exp", {"alpha0": alpha0, "zeta0": zeta0}, floor=lo)

    @classmethod
    def chirp(cls, x0: float = 0.0, x1: float = 30.0, a: float = 5.0,
              b: float = 15.0, c: float = 0.065, d: float = math.pi / 10):
        """``exp(-2c(b-x) sin(d(x-a)^2))`` on ``[a, b)``, 1 elsewhere."""
        return cls((_chirp_piece(x0, x1, a, b, c, d),), "chirp",
                   {"a": a, "b": b, "c": c, "d": d},
                   floor=math.exp(-2.0 * abs(c) * abs(b - a)))

    @classmethod
    def from_samples(cls, x, zeta):
        """Uniform samples, interpolated linearly in ``log zeta``."""
        x = np.asarray(x, dtype=float)
        z = np.asarray(zeta, dtype=float)
        if x.ndim != 1 or x.shape != z.shape or x.size < 2:
            raise ConfigError("need matching 1-D sample arrays of length >= 2")
        if np.any(~(z > 0)):
            raise ConfigError("samples must be positive")
        h = np.diff(x)
        if np.any(h <= 0):
            raise ConfigError("sample grid must be increasing")
        if np.max(np.abs(h - h.mean())) > 1e-9 * abs(h.mean()):
            raise ConfigError("sample grid must be uniform")
        logz = np.log(z)
        slope = np.gradient(logz, x)

        def zf(t):
            return np.exp(np.interp(t, x, logz))

        def af(t):
            return -0.5 * np.interp(t, x, slope)

        piece = Piece(float(x[0]), float(x[-1]), zf, alpha=af)
        return cls((piece,), "samples", {"n": int(x.size)}, floor=float(z.min()))

    # evaluation ---------------------------------------------------------
    @property
    def interval(self) -> Interval:
        return Interval(self.pieces[0].x0, self.pieces[-1].x1)

    def _piece_index(self, x: np.ndarray) -> np.ndarray:
        starts = np.array([p.x0 for p in self.pieces[1:]])
        return np.searchsorted(starts, x, side="right")

    def _dispatch(self, x, attr: str, left: bool = False):
        x = np.asarray(x, dtype=float)
        flat = np.atleast_1d(x)
        if left:
            starts = np.array([p.x0 for p in self.pieces[1:]])
            idx = np.searchsorted(starts, flat, side="left")
        else:
            idx = self._piece_index(flat)
        out = np.empty(flat.shape)
        for k in np.unique(idx):
            fn = getattr(self.pieces[k], attr)
            if fn is None:
                fn = _numeric_fallback(self.pieces[k], attr)
            sel = idx == k
            out[sel] = fn(flat[sel])
        return float(out[0]) if x.ndim == 0 else out.reshape(x.shape)

    def zeta(self, x):
        """Right-continuous evaluation of the impedance."""
        return self._dispatch(x, "zeta")

    def zeta_left(self, x):
        """Left limits of the impedance."""
        return self._dispatch(x, "zeta", left=True)

    def alpha(self, x):
        return self._dispatch(x, "alpha")

    def potential(self, x):
        """Closed-form (or finely differenced) ``q = alpha^2 - alpha'``."""
        return self._dispatch(x, "q")

    # structure ----------------------------------------------------------
    @property
    def junctions(self) -> tuple:
        return tuple(p.x0 for p in self.pieces[1:])

    @property
    def discontinuities(self) -> tuple:
        """``(y, zeta(y-), zeta(y+))`` at each genuine jump."""
        out = []
        for a, b in zip(self.pieces, self.pieces[1:]):
            left = float(a.zeta(np.array([a.x1]))[0])
            right = float(b.zeta(np.array([b.x0]))[0])
            if abs(left - right) > 1e-12 * max(left, right):
                out.append((b.x0, left, right))
        return tuple(out)

    @property
    def jumps(self) -> tuple:
        return tuple(d[0] for d in self.discontinuities)

    @property
    def is_continuous(self) -> bool:
        return not self.discontinuities

    @property
    def breaks(self) -> tuple:
        """Piece boundaries plus declared kinks of alpha, strictly interior."""
        pts = set(self.junctions)
        for p in self.pieces:
            pts.update(b for b in p.breaks if p.x0 < b < p.x1)
        return tuple(sorted(pts))

    def continuous_parts(self) -> list:
        """Split into profiles that are continuous, one per stretch between jumps."""
        groups, current = [], [self.pieces[0]]
        jumps = set(self.jumps)
        for p in self.pieces[1:]:
            if p.x0 in jumps:
                groups.append(current)
                current = []
            current.append(p)
        groups.append(current)
        return [ImpedanceProfile(tuple(g), self.kind, dict(self.params), self.floor)
                for g in groups]

    def restrict(self, x0: float, x1: float) -> "ImpedanceProfile":
        """The profile on a sub-interval."""
        iv = self.interval
        if not (iv.x0 <= x0 < x1 <= iv.x1):
            raise DomainError("restriction must lie inside the profile interval")
        out = []
        for p in self.pieces:
            lo, hi = max(p.x0, x0), min(p.x1, x1)
            if hi > lo:
                out.append(Piece(lo, hi, p.zeta, p.alpha, p.q,
                                 tuple(b for b in p.breaks if lo < b < hi)))
        return ImpedanceProfile(tuple(out), self.kind, dict(self.params), self.floor)

    def alpha_norms(self, nodes: int = 20, panels: int = 64) -> tuple:
        """``(integral |alpha|, integral alpha^2)`` over the regular part."""
        x, w = quadrature_grid(self.interval.x0, self.interval.x1,
                               self.breaks, nodes, panels)
        a = self.alpha(x)
        return float(np.dot(w, np.abs(a))), float(np.dot(w, a * a))

    def log_variation(self) -> float:
        """Total variation of ``log(zeta)/2``, regular plus jump parts."""
        l1, _ = self.alpha_norms()
        jumps = sum(abs(0.5 * math.log(left / right))
                    for _, left, right in self.discontinuities)
        return l1 + jumps

    def reciprocal(self) -> "ImpedanceProfile":
        pieces = tuple(
            Piece(p.x0, p.x1,
                  zeta=lambda x, f=p.zeta: 1.0 / f(x),
                  alpha=None if p.alpha is None else (lambda x, f=p.alpha: -f(x)),
                  q=None, breaks=p.breaks)
            for p in self.pieces)
        return ImpedanceProfile(pieces, self.kind, dict(self.params))

    def scaled(self, s: float) -> "ImpedanceProfile":
        if not s > 0:
            raise DomainError("scale factor must be positive")
        pieces = tuple(Piece(p.x0, p.x1, zeta=lambda x, f=p.zeta: s * f(x),
                             alpha=p.alpha, q=p.q, breaks=p.breaks)
                       for p in self.pieces)
        return ImpedanceProfile(pieces, self.kind, dict(self.params), s * self.floor)


def _chirp_piece(x0, x1, a, b, c, d) -> Piece:
    def inside(x):
        return (x >= a) & (x < b)

    def z(x):
        x = np.asarray(x, dtype=float)
        e = np.where(inside(x), -2.0 * c * (b - x) * np.sin(d * (x - a) ** 2), 0.0)
        return np.exp(e)

    def al(x):
        x = np.asarray(x, dtype=float)
        u = d * (x - a) ** 2
        v = 2.0 * c * d * (b - x) * (x - a) * np.cos(u) - c * np.sin(u)
        return np.where(inside(x), v, 0.0)

    def qq(x):
        x = np.asarray(x, dtype=float)
        u = d * (x - a) ** 2
        s, co = np.sin(u), np.cos(u)
        v = ((2.0 * c * d * (b - x) * (x - a) * co - c * s) ** 2
             + 4.0 * c * d * d * (b - x) * (x - a) ** 2 * s
             - 2.0 * c * d * (b + 2.0 * a - 3.0 * x) * co)
        return np.where(inside(x), v, 0.0)

    return Piece(x0, x1, z, alpha=al, q=qq, breaks=(a, b))


def _numeric_fallback(piece: Piece, attr: str) -> ArrayFn:
    """Central differences of log zeta when no closed form is attached."""
    h = 1e-5 * (piece.x1 - piece.x0)

    def logz(x):
        return np.log(piece.zeta(np.clip(x, piece.x0, piece.x1)))

    def alpha(x):
        lo = np.maximum(x - h, piece.x0)
        hi = np.minimum(x + h, piece.x1)
        return -0.5 * (logz(hi) - logz(lo)) / (hi - lo)

    if attr == "alpha":
        return alpha
    if attr == "q":
        def q(x):
            a = alpha(x)
            lo = np.maximum(x - h, piece.x0)
            hi = np.minimum(x + h, piece.x1)
            return a * a - (alpha(hi) - alpha(lo)) / (hi - lo)
        return q
    raise AttributeError(attr)


def quadrature_grid(x0: float, x1: float, breaks: Sequence[float] = (),
                    nodes: int = 20, panels: int = 64):
    """Composite Gauss-Legendre nodes and weights, split at ``breaks``."""
    g, gw = np.polynomial.legendre.leggauss(nodes)
    edges = np.unique(np.concatenate(([x0], [b for b in breaks if x0 < b < x1], [x1])))
    per = max(1, panels // (len(edges) - 1))
    xs, ws = [], []
    for a, b in zip(edges, edges[1:]):
        cuts = np.linspace(a, b, per + 1)
        for lo, hi in zip(cuts, cuts[1:]):
            half = 0.5 * (hi - lo)
            xs.append(lo + half * (g + 1.0))
            ws.append(half * gw)
    return np.concatenate(xs), np.concatenate(ws)


# ---------------------------------------------------------------------------
# standard approximants
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class StandardApproximant:
    """Equally spaced step medium matching ``zeta`` at cell midpoints."""

    source: ImpedanceProfile
    n: int
    delta: float
    reflectivities: np.ndarray = field(repr=False)

    @property
    def interval(self) -> Interval:
        return self.source.interval

    @property
    def positions(self) -> np.ndarray:
        """Jump locations ``y_j = x0 + j*delta``."""
        return self.interval.x0 + self.delta * np.arange(1, self.n + 1)

    @property
    def midpoints(self) -> np.ndarray:
        """Centres of the ``n + 1`` layers."""
        return self.interval.x0 + self.delta * (np.arange(self.n + 1) + 0.5)

    @property
    def values(self) -> np.ndarray:
        """Layer impedances, i.e. ``zeta`` at the layer centres."""
        return self.source.zeta(self.midpoints)

    def medium(self) -> StepMedium:
        return StepMedium(self.interval, tuple(self.positions),
                          tuple(self.values), removable=True)


def _check_n(n) -> int:
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise ConfigError(f"approximation degree must be a positive integer, got {n!r}")
    return int(n)


def standard_approximant(profile: ImpedanceProfile, n: int) -> StandardApproximant:
    """The n-jump equally spaced approximant of a continuous profile."""
    n = _check_n(n)
    if not profile.is_continuous:
        raise DomainError("standard approximants need a continuous profile; "
                          "use piecewise_approximant")
    iv = profile.interval
    delta = iv.length / (n + 1)
    y = iv.x0 + delta * np.arange(1, n + 1)
    r = reflectivity(profile.zeta(y - 0.5 * delta), profile.zeta(y + 0.5 * delta))
    r = np.atleast_1d(r)
    if np.max(np.abs(r)) >= REFLECTIVITY_LIMIT:
        raise DomainError("approximant has a reflectivity of modulus >= 1 - 1e-12")
    return StandardApproximant(profile, n, delta, r)


def piecewise_approximant(profile: ImpedanceProfile, n: int | Sequence[int]) -> StepMedium:
    """Concatenate standard approximants of the continuous parts.

    ``n`` is either one degree for every part or one per part.
    """
    parts = profile.continuous_parts()
    degrees = [n] * len(parts) if np.ndim(n) == 0 else list(n)
    if len(degrees) != len(parts):
        raise ConfigError("one degree per continuous part")
    media = [standard_approximant(p, k).medium() for p, k in zip(parts, degrees)]
    out = media[0]
    for m in media[1:]:
        out = _concat_steps(out, m, keep_removable=True)
    return out


# ---------------------------------------------------------------------------
# alpha and q
# ---------------------------------------------------------------------------


def alpha_of(profile: ImpedanceProfile, x):
    """``-(log zeta)'/2`` at interior points away from jumps."""
    xa = np.atleast_1d(np.asarray(x, dtype=float))
    iv = profile.interval
    if np.any(xa <= iv.x0) or np.any(xa >= iv.x1):
        raise DomainError("alpha is evaluated at interior points only")
    if profile.jumps and np.any(np.isin(xa, profile.jumps)):
        raise DomainError("alpha is undefined at a jump")
    return profile.alpha(x)


def potential_from_samples(samples, h: float) -> np.ndarray:
    """``(sqrt zeta)''/sqrt zeta`` by second divided differences.

    Central stencils inside, one-sided three-point stencils at the ends.
    """
    z = np.asarray(samples, dtype=float)
    if z.ndim != 1 or z.size < 3:
        raise ConfigError("need at least 3 samples")
    if not h > 0:
        raise ConfigError("grid spacing must be positive")
    s = np.sqrt(z)
    d2 = np.empty_like(s)
    d2[1:-1] = s[2:] - 2.0 * s[1:-1] + s[:-2]
    d2[0] = s[2] - 2.0 * s[1] + s[0]
    d2[-1] = s[-1] - 2.0 * s[-2] + s[-3]
    return d2 / (h * h) / s


def potential_of(profile: ImpedanceProfile, h: float, x=None):
    """Sampled potential on a grid of spacing ``h``.

    The grid defaults to ``x0, x0 + h, ...`` up to ``x1``. Returns ``(x, q)``.
    """
    if not h > 0:
        raise ConfigError("grid spacing must be positive")
    if not profile.is_continuous:
        raise DomainError("potential needs a continuous profile")
    iv = profile.interval
    if x is None:
        count = int(math.floor(iv.length / h * (1 + 1e-12))) + 1
        x = iv.x0 + h * np.arange(count)
    x = np.asarray(x, dtype=float)
    return x, potential_from_samples(profile.zeta(x), h)


# ---------------------------------------------------------------------------
# concatenation and factorisation
# ---------------------------------------------------------------------------


def _concat_steps(m1: StepMedium, m2: StepMedium, keep_removable=False) -> StepMedium:
    y = m1.interval.x1
    jumps = list(m1.jumps)
    values = list(m1.values)
    if m1.values[-1] != m2.values[0] or keep_removable:
        jumps.append(y)
        values.append(m2.values[0])
    jumps.extend(m2.jumps)
    values.extend(m2.values[1:])
    removable = keep_removable or m1.removable or m2.removable
    return StepMedium(Interval(m1.interval.x0, m2.interval.x1), tuple(jumps),
                      tuple(values), removable=removable)


def concatenate(m1, m2):
    """Place ``m2`` to the right of ``m1``; their intervals must abut."""
    if not _adjacent(m1.interval.x1, m2.interval.x0):
        raise ConfigError("media must be adjacent to concatenate")
    if isinstance(m1, StepMedium) and isinstance(m2, StepMedium):
        return _concat_steps(m1, m2)
    p1 = m1.to_profile() if isinstance(m1, StepMedium) else m1
    p2 = m2.to_profile() if isinstance(m2, StepMedium) else m2
    x = m2.interval.x0
    last = p1.pieces[-1]
    p1_pieces = p1.pieces[:-1] + (Piece(last.x0, x, last.zeta, last.alpha,
                                        last.q, last.breaks),)
    kind = p1.kind if p1.kind == p2.kind else "custom"
    floor = min(p1.floor, p2.floor)
    return ImpedanceProfile(p1_pieces + p2.pieces, kind, {}, floor)


def factor(profile: ImpedanceProfile):
    """Split into a continuous factor and a step factor equal to 1 at ``x0+``.

    Returns ``(zeta1, zeta2)`` with ``zeta1*zeta2 == profile`` off the jumps.
    """
    disc = profile.discontinuities
    iv = profile.interval
    ratios = [right / left for _, left, right in disc]
    step_values = [1.0]
    for q in ratios:
        step_values.append(step_values[-1] * q)
    zeta2 = StepMedium(iv, tuple(d[0] for d in disc), tuple(step_values))
    if not disc:
        return profile, zeta2
    pieces = []
    for p in profile.pieces:
        s = zeta2.zeta(0.5 * (p.x0 + p.x1))
        pieces.append(Piece(p.x0, p.x1, zeta=lambda x, f=p.zeta, s=s: f(x) / s,
                            alpha=p.alpha, q=p.q, breaks=p.breaks))
    zeta1 = ImpedanceProfile(tuple(pieces), profile.kind, dict(profile.params))
    return zeta1, zeta2

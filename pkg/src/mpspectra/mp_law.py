"""Marchenko-Pastur reference law.

Density, distribution function, support and Stieltjes transform of the
Marchenko-Pastur law with aspect parameter ``c``.  The Stieltjes transform is
available both in closed form and as the solution of the self-consistent
equation ``m = 1 / (c - 1 - z - z m)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import ConvergenceError, DomainError

QUAD_NODES = 256
_CDF_CHUNK = 4096


def mp_support(c: float) -> tuple[float, float]:
    """Return the edges ``((1 - sqrt c)^2, (1 + sqrt c)^2)`` of the continuous part."""
    if not c > 0 or not math.isfinite(c):
        raise DomainError(f"aspect parameter must be positive and finite, got {c!r}")
    r = math.sqrt(c)
    return (1.0 - r) ** 2, (1.0 + r) ** 2


@dataclass(frozen=True)
class MPLaw:
    """Marchenko-Pastur law with parameter ``c``.

    ``atom_mass`` is the point mass at the origin, ``1 - c`` when ``c < 1``.
    """

    c: float
    a: float = field(init=False)
    b: float = field(init=False)
    atom_mass: float = field(init=False)

    def __post_init__(self):
        a, b = mp_support(self.c)
        object.__setattr__(self, "c", float(self.c))
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "atom_mass", max(0.0, 1.0 - self.c))

    def density(self, x):
        return mp_density(self, x)

    def cdf(self, x):
        return mp_cdf(self, x)

    def stieltjes(self, z):
        return mp_stieltjes_closed(self, z)


@dataclass(frozen=True)
class StieltjesGrid:
    """Horizontal segment ``{u + i v : |u| <= alpha}`` sampled at equally spaced ``u``."""

    alpha: float
    v: float
    points: tuple[complex, ...]

    def __post_init__(self):
        if not self.alpha > 0:
            raise DomainError(f"alpha must be positive, got {self.alpha!r}")
        if not 0 < self.v <= 1:
            raise DomainError(f"v must lie in (0, 1], got {self.v!r}")
        re = [p.real for p in self.points]
        if any(abs(r) > self.alpha * (1 + 1e-15) for r in re):
            raise DomainError("grid point outside [-alpha, alpha]")
        if any(p.imag != self.v for p in self.points):
            raise DomainError("all grid points must share imaginary part v")
        if any(r1 >= r2 for r1, r2 in zip(re, re[1:])):
            raise DomainError("grid real parts must be strictly increasing")

    @classmethod
    def uniform(cls, alpha: float, v: float, count: int) -> StieltjesGrid:
        if count < 1:
            raise DomainError(f"grid needs at least one point, got {count}")
        us = [0.0] if count == 1 else np.linspace(-alpha, alpha, count).tolist()
        return cls(alpha=float(alpha), v=float(v), points=tuple(complex(u, v) for u in us))

    def as_array(self) -> np.ndarray:
        return np.asarray(self.points, dtype=complex)


def mp_density(law: MPLaw, x):
    """Continuous part of the law; the atom at zero is not included.

    Zero outside ``[a, b]`` and at ``x = 0`` (relevant only when ``c = 1``).
    """
    xa = np.asarray(x, dtype=float)
    inside = (xa >= law.a) & (xa <= law.b) & (xa > 0)
    safe = np.where(inside, xa, 1.0)
    val = np.sqrt(np.clip((safe - law.a) * (law.b - safe), 0.0, None)) / (2.0 * np.pi * safe)
    out = np.where(inside, val, 0.0)
    return float(out) if out.ndim == 0 else out


@lru_cache(maxsize=4)
def _gauss_legendre(n: int) -> tuple[np.ndarray, np.ndarray]:
    nodes, weights = np.polynomial.legendre.leggauss(n)
    return nodes, weights


def _continuous_mass(law: MPLaw, x: np.ndarray) -> np.ndarray:
    """Integral of the density over ``[a, x]`` for ``a <= x <= b``.

    With ``t = a + (b - a) sin^2(theta)`` both square-root edge singularities
    vanish and the integrand becomes
    ``(b - a)^2 sin^2 cos^2 / (pi (a + (b - a) sin^2))``.
    """
    a, b = law.a, law.b
    w = b - a
    frac = np.clip((x - a) / w, 0.0, 1.0)
    upper = np.arcsin(np.sqrt(frac))
    nodes, weights = _gauss_legendre(QUAD_NODES)
    out = np.empty_like(upper)
    for lo in range(0, upper.size, _CDF_CHUNK):
        u = upper[lo:lo + _CDF_CHUNK, None]
        theta = 0.5 * u * (nodes + 1.0)
        s2 = np.sin(theta) ** 2
        c2 = 1.0 - s2
        if a == 0.0:
            # c = 1: the sin^2 factor cancels exactly against the denominator
            integrand = w * c2 / np.pi
        else:
            integrand = w * w * s2 * c2 / (np.pi * (a + w * s2))
        out[lo:lo + _CDF_CHUNK] = 0.5 * u[:, 0] * (integrand @ weights)
    return out


def mp_cdf(law: MPLaw, x):
    """Distribution function, right-continuous, including the atom at zero."""
    xa = np.asarray(x, dtype=float)
    flat = xa.reshape(-1)
    out = np.zeros_like(flat)
    out[flat >= 0.0] = law.atom_mass
    body = (flat >= law.a) & (flat < law.b)
    if body.any():
        out[body] = law.atom_mass + _continuous_mass(law, flat[body])
    out[flat >= law.b] = 1.0
    out = np.clip(out, 0.0, 1.0).reshape(xa.shape)
    return float(out) if out.ndim == 0 else out


def _require_upper(z) -> np.ndarray:
    za = np.asarray(z, dtype=complex)
    if np.any(~(za.imag > 0)):
        raise DomainError("Stieltjes argument must satisfy Im z > 0")
    return za


def mp_stieltjes_closed(law: MPLaw, z):
    """Closed-form Stieltjes transform.

    Both roots of ``z m^2 + (z + 1 - c) m + 1 = 0`` are formed and the one with
    ``Im(z m) >= 0`` is kept; ties go to the root with larger ``Im m``.
    """
    za = _require_upper(z)
    c = law.c
    p = za + 1.0 - c
    disc = np.sqrt(p * p - 4.0 * za)
    m1 = (-p + disc) / (2.0 * za)
    m2 = (-p - disc) / (2.0 * za)
    k1 = (za * m1).imag
    k2 = (za * m2).imag
    pick_first = (k1 > k2) | ((k1 == k2) & (m1.imag >= m2.imag))
    m = np.where(pick_first, m1, m2)
    return complex(m) if m.ndim == 0 else m


def fixed_point_map(c: float, z: complex, m: complex) -> complex:
    return 1.0 / (c - 1.0 - z - z * m)


def mp_stieltjes_fixed_point(
    c: float,
    z: complex,
    tol: float = 1e-12,
    damping: float = 0.5,
    max_iter: int = 100_000,
) -> complex:
    """Solve ``m = 1 / (c - 1 - z - z m)`` on the branch ``Im(z m) >= 0``.

    Damped iteration of the map above, started at ``-1/z``.  The map is a
    Moebius transformation whose two fixed-point multipliers multiply to one,
    so near ``z = 0`` with ``c < 1`` the wanted root repels and the iteration
    settles on the other one.  In that case the inverse map
    ``m -> (c - 1 - z - 1/m) / z`` is iterated instead; it attracts exactly
    the roots the forward map repels.

    The residual ``|m - map(m)|`` is divided by ``max(1, |m|)``.  Raises
    ConvergenceError with the last residual if no attempt reaches ``tol``
    on the correct branch within ``max_iter`` steps.
    """
    if not c > 0:
        raise DomainError(f"aspect parameter must be positive, got {c!r}")
    z = complex(z)
    if not z.imag > 0:
        raise DomainError("Stieltjes argument must satisfy Im z > 0")
    if not tol > 0:
        raise DomainError(f"tol must be positive, got {tol!r}")
    shift = c - 1.0 - z
    forward = lambda m: 1.0 / (shift - z * m)  # noqa: E731
    inverse = lambda m: (shift - 1.0 / m) / z  # noqa: E731
    best = math.inf
    for step, omega in ((forward, damping), (inverse, damping), (forward, 1.0), (inverse, 1.0)):
        m = -1.0 / z
        for _ in range(max_iter):
            # relative once |m| > 1: near the atom at 0, |m| ~ 1/|z| is large
            resid = abs(m - forward(m)) / max(1.0, abs(m))
            if resid <= tol:
                break
            m = (1.0 - omega) * m + omega * step(m)
        else:
            best = min(best, resid)
            continue
        if (z * m).imag >= -tol:
            return m
    raise ConvergenceError("fixed-point iteration did not converge", best, max_iter)

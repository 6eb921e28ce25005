"""Empirical spectral distributions and their distance to the Marchenko-Pastur law."""

from __future__ import annotations

import struct
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

import numpy as np

from . import linalg
from .ensembles import EnsembleSpec, MatrixSample
from .errors import CacheFormatError, DomainError
from .mp_law import MPLaw, mp_cdf
from .seeding import Seed

CACHE_MAGIC = b"ESD1"
CACHE_VERSION = 1
_HEADER = struct.Struct("<4sIQQQQQ")


@dataclass(frozen=True, eq=False)
class SpectralSample:
    """Sorted eigenvalues of ``(1/n) A A^T``.

    Eigenvalues within the zero threshold of :mod:`mpspectra.linalg` are stored
    as exact zeros and counted in ``zero_multiplicity``.
    """

    eigenvalues: np.ndarray
    zero_multiplicity: int
    spec: EnsembleSpec | None = None
    seed: Seed | None = None

    @property
    def n(self) -> int:
        return int(self.eigenvalues.size)

    @classmethod
    def from_eigenvalues(cls, eigenvalues, spec=None, seed=None) -> SpectralSample:
        vals = np.sort(np.asarray(eigenvalues, dtype=float))
        if vals.ndim != 1 or vals.size == 0:
            raise DomainError("need a non-empty 1-d array of eigenvalues")
        zeros = linalg.zero_mask(vals)
        vals = np.where(zeros, 0.0, vals)
        vals.setflags(write=False)
        return cls(vals, int(zeros.sum()), spec, seed)

    def esd(self) -> ESD:
        return ESD(self.eigenvalues)

    def __eq__(self, other):
        if not isinstance(other, SpectralSample):
            return NotImplemented
        return (
            np.array_equal(self.eigenvalues, other.eigenvalues)
            and self.zero_multiplicity == other.zero_multiplicity
            and self.spec == other.spec
            and self.seed == other.seed
        )


class ESD:
    """Right-continuous step distribution putting equal mass on each stored value."""

    def __init__(self, values):
        vals = np.sort(np.asarray(values, dtype=float).ravel())
        if vals.size == 0:
            raise DomainError("an ESD needs at least one eigenvalue")
        self.values = vals

    def __len__(self):
        return self.values.size

    def __call__(self, x):
        return esd_eval(self, x)

    def jumps(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Distinct atoms with the distribution values just before and at each."""
        atoms, counts = np.unique(self.values, return_counts=True)
        after = np.cumsum(counts) / self.values.size
        before = np.concatenate([[0.0], after[:-1]])
        return atoms, before, after


def esd_from_matrix(sample: MatrixSample, method: str = "lapack") -> SpectralSample:
    vals = linalg.eigenvalues_sym(linalg.gram(sample.matrix), method=method)
    return SpectralSample.from_eigenvalues(vals, sample.spec, sample.seed)


def esd_eval(esd: ESD, x):
    xa = np.asarray(x, dtype=float)
    out = np.searchsorted(esd.values, xa, side="right") / esd.values.size
    return float(out) if out.ndim == 0 else out


def empirical_stieltjes(s: SpectralSample | ESD, z):
    """``(1/n) sum 1/(lambda_i - z)``; ``z`` may be a scalar or an array."""
    vals = s.eigenvalues if isinstance(s, SpectralSample) else s.values
    za = np.asarray(z, dtype=complex)
    if np.any(~(za.imag > 0)):
        raise DomainError("Stieltjes argument must satisfy Im z > 0")
    flat = za.reshape(-1)
    out = np.empty(flat.shape, dtype=complex)
    step = max(1, 2_000_000 // vals.size)
    for lo in range(0, flat.size, step):
        out[lo:lo + step] = np.mean(1.0 / (vals[None, :] - flat[lo:lo + step, None]), axis=1)
    out = out.reshape(za.shape)
    return complex(out) if out.ndim == 0 else out


def kolmogorov_distance(esd: ESD, law: MPLaw, cdf=None) -> float:
    """Exact ``sup_x |F_emp(x) - F_c(x)|``.

    Between consecutive atoms the empirical function is flat and ``F_c`` is
    nondecreasing, so the supremum is reached at an atom, approached from the
    left or attained on the right.  The atom of ``F_c`` at zero is handled by
    taking the left limit ``F_c(0-) = F_c(0) - atom``.

    ``cdf`` may supply precomputed values of ``F_c`` at the atoms; it defaults
    to :func:`mp_cdf`.
    """
    atoms, before, after = esd.jumps()
    ref = mp_cdf(law, atoms) if cdf is None else cdf(atoms)
    ref_left = np.where(atoms == 0.0, ref - law.atom_mass, ref)
    dist = max(np.max(np.abs(after - ref)), np.max(np.abs(before - ref_left)))
    if law.atom_mass > 0:
        at_zero = esd_eval(esd, 0.0)
        below_zero = np.searchsorted(esd.values, 0.0, side="left") / len(esd)
        dist = max(dist, abs(at_zero - mp_cdf(law, 0.0)), abs(below_zero))
    return float(min(max(dist, 0.0), 1.0))


def average_esd(samples: Iterable[SpectralSample]) -> ESD:
    """Pool the eigenvalues of several samples of equal order ``n``."""
    samples = list(samples)
    if not samples:
        raise DomainError("need at least one sample to average")
    sizes = {s.n for s in samples}
    if len(sizes) != 1:
        raise DomainError(f"samples must share n, got orders {sorted(sizes)}")
    return ESD(np.concatenate([s.eigenvalues for s in samples]))


def write_spectral_sample(path, s: SpectralSample) -> None:
    """Write the ``ESD1`` little-endian binary cache format."""
    if s.spec is None or s.seed is None:
        raise DomainError("only samples with known spec and seed can be cached")
    header = _HEADER.pack(CACHE_MAGIC, CACHE_VERSION, s.spec.n, s.spec.N, s.seed.master, s.seed.trial, s.n)
    Path(path).write_bytes(header + np.ascontiguousarray(s.eigenvalues, dtype="<f8").tobytes())


def read_spectral_sample(path, spec: EnsembleSpec | None = None) -> SpectralSample:
    raw = Path(path).read_bytes()
    if len(raw) < _HEADER.size:
        raise CacheFormatError(f"{path}: truncated header")
    magic, version, n, cols, master, trial, count = _HEADER.unpack_from(raw)
    if magic != CACHE_MAGIC:
        raise CacheFormatError(f"{path}: bad magic {magic!r}")
    if version != CACHE_VERSION:
        raise CacheFormatError(f"{path}: unsupported version {version}")
    body = raw[_HEADER.size:]
    if len(body) != 8 * count:
        raise CacheFormatError(f"{path}: expected {count} eigenvalues, found {len(body) / 8:g}")
    vals = np.frombuffer(body, dtype="<f8").astype(float)
    if np.any(np.diff(vals) < 0):
        raise CacheFormatError(f"{path}: eigenvalues are not sorted")
    if spec is not None and (spec.n, spec.N) != (n, cols):
        raise CacheFormatError(f"{path}: cached shape {n}x{cols} does not match {spec.n}x{spec.N}")
    return SpectralSample.from_eigenvalues(vals, spec, Seed(master, trial))

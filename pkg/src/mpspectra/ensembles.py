"""Random matrix ensembles with independent or finitely dependent rows.

``MOVING_AVERAGE_ROWS`` is NOT a condition-C0 ensemble: its rows have
nonzero conditional means given their neighbours.  It exists only to realize
an exact dependence range ``beta`` (rows further than ``beta`` apart are
independent) for the Stieltjes-transform variance experiments.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import DomainError, SpecError
from .seeding import Seed


class Kind(str, enum.Enum):
    IID_GAUSSIAN = "IID_GAUSSIAN"
    IID_RADEMACHER = "IID_RADEMACHER"
    SUM_ZERO_BERNOULLI_ROWS = "SUM_ZERO_BERNOULLI_ROWS"
    MOVING_AVERAGE_ROWS = "MOVING_AVERAGE_ROWS"

    @property
    def independent_rows(self) -> bool:
        return self is not Kind.MOVING_AVERAGE_ROWS


def parse_aspect(value) -> Fraction:
    """Accept a Fraction, an int, or a string such as ``"2/1"``.

    Floats are refused: the aspect ratio must be exact.
    """
    if isinstance(value, bool) or isinstance(value, float):
        raise SpecError(f"aspect must be an exact rational, got {value!r}")
    try:
        frac = Fraction(value)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise SpecError(f"cannot parse aspect {value!r}") from exc
    if frac <= 0:
        raise SpecError(f"aspect must be positive, got {frac}")
    return frac


@dataclass(frozen=True)
class EnsembleSpec:
    kind: Kind
    n: int
    aspect: Fraction
    beta: int = 0

    def __post_init__(self):
        try:
            kind = Kind(self.kind)
        except ValueError as exc:
            raise SpecError(f"unknown ensemble kind {self.kind!r}") from exc
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "aspect", parse_aspect(self.aspect))
        if isinstance(self.n, bool) or not isinstance(self.n, int) or self.n < 1:
            raise SpecError(f"n must be a positive integer, got {self.n!r}")
        if isinstance(self.beta, bool) or not isinstance(self.beta, int) or self.beta < 0:
            raise SpecError(f"beta must be a nonnegative integer, got {self.beta!r}")
        cols = self.aspect * self.n
        if cols.denominator != 1:
            raise SpecError(f"N = {self.aspect} * {self.n} = {cols} is not an integer")
        if kind is Kind.SUM_ZERO_BERNOULLI_ROWS and int(cols) % 2:
            raise SpecError(f"balanced rows need an even row length, got N = {int(cols)}")
        if kind is Kind.MOVING_AVERAGE_ROWS:
            if self.beta >= self.n:
                raise SpecError(f"beta = {self.beta} must be smaller than n = {self.n}")
        elif self.beta != 0:
            raise SpecError(f"beta applies only to MOVING_AVERAGE_ROWS, got beta = {self.beta}")

    @property
    def N(self) -> int:
        return int(self.aspect * self.n)

    @property
    def c_n(self) -> float:
        return self.N / self.n

    def with_n(self, n: int) -> EnsembleSpec:
        return EnsembleSpec(self.kind, n, self.aspect, self.beta)

    def to_json(self) -> dict:
        return {
            "kind": self.kind.value,
            "n": self.n,
            "aspect_num": self.aspect.numerator,
            "aspect_den": self.aspect.denominator,
            "beta": self.beta,
        }

    @classmethod
    def from_json(cls, obj: dict) -> EnsembleSpec:
        expected = {"kind", "n", "aspect_num", "aspect_den", "beta"}
        if set(obj) != expected:
            raise SpecError(f"ensemble keys must be exactly {sorted(expected)}, got {sorted(obj)}")
        num, den = obj["aspect_num"], obj["aspect_den"]
        if not all(isinstance(v, int) and not isinstance(v, bool) for v in (num, den)) or den == 0:
            raise SpecError("aspect_num and aspect_den must be integers with aspect_den != 0")
        return cls(obj["kind"], obj["n"], Fraction(num, den), obj["beta"])


@dataclass(frozen=True)
class MatrixSample:
    spec: EnsembleSpec
    seed: Seed
    matrix: np.ndarray


def balanced_row(length: int, stream: np.random.Generator) -> np.ndarray:
    """Uniformly random +-1 vector of even ``length`` with zero sum.

    Fisher-Yates shuffle of the template ``(+1,...,+1,-1,...,-1)``.
    """
    if length < 2 or length % 2:
        raise SpecError(f"balanced rows need a positive even length, got {length}")
    row = np.repeat(np.array([1, -1], dtype=np.int8), length // 2)
    stream.shuffle(row)
    return row


def balanced_rows(count: int, length: int, stream: np.random.Generator) -> np.ndarray:
    """``count`` independent balanced rows as an int8 array, shuffled row by row."""
    if length < 2 or length % 2:
        raise SpecError(f"balanced rows need a positive even length, got {length}")
    template = np.repeat(np.array([1, -1], dtype=np.int8), length // 2)
    return stream.permuted(np.broadcast_to(template, (count, length)), axis=1)


def moving_average_rows(n: int, cols: int, beta: int, stream: np.random.Generator) -> np.ndarray:
    """Rows ``(g_k + ... + g_{k+beta}) / sqrt(beta + 1)`` of i.i.d. Gaussian rows ``g``."""
    g = stream.standard_normal((n + beta, cols))
    out = g[:n].copy()
    for shift in range(1, beta + 1):
        out += g[shift:shift + n]
    if beta:
        out /= math.sqrt(beta + 1)
    return out


def sample(spec: EnsembleSpec, seed: Seed) -> MatrixSample:
    """Draw one ``n x N`` matrix; a pure function of ``(spec, seed)``."""
    rng = seed.stream()
    n, cols = spec.n, spec.N
    if spec.kind is Kind.IID_GAUSSIAN:
        a = rng.standard_normal((n, cols))
    elif spec.kind is Kind.IID_RADEMACHER:
        a = (2 * rng.integers(0, 2, size=(n, cols), dtype=np.int8) - 1).astype(float)
    elif spec.kind is Kind.SUM_ZERO_BERNOULLI_ROWS:
        rows = balanced_rows(n, cols, rng)
        if np.any(rows.sum(axis=1, dtype=np.int64) != 0):
            raise AssertionError("balanced row generator produced a nonzero row sum")
        a = rows.astype(float)
    else:
        a = moving_average_rows(n, cols, spec.beta, rng)
    a.setflags(write=False)
    return MatrixSample(spec=spec, seed=seed, matrix=a)


def ensemble_moments(kind: Kind | str, length: int) -> tuple[float, float]:
    """Exact ``E[z_i z_j]`` and ``E[z_i z_j z_l z_m]`` (distinct indices) within a row.

    For a balanced +-1 row of length ``L`` these are ``-1/(L-1)`` and
    ``3/((L-1)(L-3))``.
    """
    try:
        kind = Kind(kind)
    except ValueError as exc:
        raise DomainError(f"unknown ensemble kind {kind!r}") from exc
    if kind in (Kind.IID_GAUSSIAN, Kind.IID_RADEMACHER):
        return 0.0, 0.0
    if kind is Kind.SUM_ZERO_BERNOULLI_ROWS:
        if length < 4 or length % 2:
            raise DomainError(f"balanced-row moments need an even length >= 4, got {length}")
        L = length
        return -1.0 / (L - 1), 3.0 / ((L - 1) * (L - 3))
    raise DomainError(f"no closed-form row moments for {kind.value}")

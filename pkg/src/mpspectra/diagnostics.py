"""Monte Carlo diagnostics for the dependence conditions and the self-consistent equation.

Conditional expectations given the other rows collapse to plain row moments
when rows are independent, which is the only case estimated here.  Suprema
over index tuples are taken over fixed panels: all pairs and the first twenty
4-tuples (lexicographic) drawn from the first eight columns.  For the
exchangeable ensembles provided this matches the full supremum in
distribution.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from itertools import combinations
from typing import Callable

import numpy as np

from . import linalg
from .ensembles import EnsembleSpec, Kind, sample
from .errors import DomainError, UnsupportedEnsembleError
from .mp_law import StieltjesGrid
from .parallel import derive_master, map_trials
from .seeding import Seed
from .spectral_stats import SpectralSample, empirical_stieltjes

PANEL_COLUMNS = 8
PANEL_QUADS = 20

Perturbation = Callable[[np.ndarray], np.ndarray]


def _panel(cols: int):
    idx = list(range(min(cols, PANEL_COLUMNS)))
    pairs = list(combinations(idx, 2))
    quads = list(combinations(idx, 4))[:PANEL_QUADS]
    return idx, pairs, quads


@dataclass
class C0Report:
    q_hat: float
    pair_corr_sup: float
    quad_mixed_sup: float
    rho_hat: float
    fourth_moment_max: float
    trials: int
    rows: int
    standard_errors: dict[str, float]
    # signed panel averages; their sign is lost in the suprema above
    pair_corr_mean: float = 0.0
    quad_mixed_mean: float = 0.0

    def to_json(self) -> dict:
        return asdict(self)


class _Moments:
    """Running sums of per-row statistics, merged in trial order."""

    def __init__(self, cols: int):
        self.idx, self.pairs, self.quads = _panel(cols)
        k = len(self.idx)
        self.count = 0
        self.col_sq = np.zeros(cols)
        self.col_sq2 = np.zeros(cols)
        self.pair = np.zeros((len(self.pairs), 2))
        self.quad = np.zeros((len(self.quads), 2))
        self.prod_sq = np.zeros((k, k, 2))
        self.fourth = np.zeros((k, 2))
        self.pair_avg = np.zeros(2)
        self.quad_avg = np.zeros(2)

    def add_rows(self, a: np.ndarray) -> None:
        sq = a * a
        self.count += a.shape[0]
        self.col_sq += sq.sum(axis=0)
        self.col_sq2 += (sq * sq).sum(axis=0)
        p = a[:, self.idx]
        if self.pairs:
            i, j = np.array(self.pairs).T
            prod = p[:, i] * p[:, j]
            self.pair += np.stack([prod.sum(0), (prod * prod).sum(0)], axis=1)
            avg = prod.mean(axis=1)
            self.pair_avg += [avg.sum(), (avg * avg).sum()]
        if self.quads:
            i, j, l, m = np.array(self.quads).T
            prod = p[:, i] * p[:, j] * p[:, l] * p[:, m]
            self.quad += np.stack([prod.sum(0), (prod * prod).sum(0)], axis=1)
            avg = prod.mean(axis=1)
            self.quad_avg += [avg.sum(), (avg * avg).sum()]
        psq = p * p
        cross = psq[:, :, None] * psq[:, None, :]
        self.prod_sq[..., 0] += cross.sum(0)
        self.prod_sq[..., 1] += (cross * cross).sum(0)
        self.fourth += np.stack([(psq * psq).sum(0), (psq ** 4).sum(0)], axis=1)

    def merge(self, other: _Moments) -> None:
        self.count += other.count
        for name in ("col_sq", "col_sq2", "pair", "quad", "prod_sq", "fourth", "pair_avg", "quad_avg"):
            setattr(self, name, getattr(self, name) + getattr(other, name))


def _mean_se(sums: np.ndarray, count: int) -> tuple[np.ndarray, np.ndarray]:
    mean = sums[..., 0] / count
    var = np.maximum(sums[..., 1] / count - mean * mean, 0.0)
    denom = max(count - 1, 1)
    return mean, np.sqrt(var * count / denom / count)


def estimate_c0(spec: EnsembleSpec, trials: int, seed: Seed, workers: int | None = None) -> C0Report:
    """Estimate the C0 quantities from ``trials * n`` independent rows."""
    if not spec.kind.independent_rows:
        raise UnsupportedEnsembleError(
            f"{spec.kind.value} has dependent rows; conditional moments cannot be estimated by row averages"
        )
    if trials < 1:
        raise DomainError(f"trials must be positive, got {trials}")
    n, cols = spec.n, spec.N
    master = derive_master(seed.master, n, spec.beta)

    def one(t: int) -> _Moments:
        acc = _Moments(cols)
        acc.add_rows(sample(spec, Seed(master, t)).matrix)
        return acc

    parts = map_trials(one, trials, workers)
    acc = parts[0]
    for part in parts[1:]:
        acc.merge(part)
    rows = acc.count

    m2 = acc.col_sq / rows
    v2 = np.maximum(acc.col_sq2 / rows - m2 * m2, 0.0) / max(rows - 1, 1)
    q_hat = float(np.abs(m2 - 1.0).sum() / n)
    q_se = float(math.sqrt(v2.sum()) / n)

    def sup(sums):
        if sums.shape[0] == 0:
            return 0.0, 0.0
        mean, se = _mean_se(sums, rows)
        k = int(np.argmax(np.abs(mean)))
        return float(abs(mean[k])), float(se[k])

    pair_sup, pair_se = sup(acc.pair)
    quad_sup, quad_se = sup(acc.quad)

    fourth_mean, fourth_se = _mean_se(acc.fourth, rows)
    k = int(np.argmax(fourth_mean))
    fourth_max, fourth_max_se = float(fourth_mean[k]), float(fourth_se[k])

    ps_mean, ps_se = _mean_se(acc.prod_sq, rows)
    kk = ps_mean.shape[0]
    diag = np.eye(kk, dtype=bool)
    dev = np.abs(ps_mean - 1.0)
    rho_hat = cols * dev[diag].mean() / n**2
    rho_se = cols * ps_se[diag].mean() / n**2
    if kk > 1:
        rho_hat += cols * (cols - 1) * dev[~diag].mean() / n**2
        rho_se += cols * (cols - 1) * ps_se[~diag].mean() / n**2

    pair_avg, pair_avg_se = _mean_se(acc.pair_avg, rows) if acc.pairs else (0.0, 0.0)
    quad_avg, quad_avg_se = _mean_se(acc.quad_avg, rows) if acc.quads else (0.0, 0.0)

    return C0Report(
        q_hat=q_hat,
        pair_corr_sup=pair_sup,
        quad_mixed_sup=quad_sup,
        rho_hat=float(rho_hat),
        fourth_moment_max=fourth_max,
        trials=trials,
        rows=rows,
        standard_errors={
            "q_hat": q_se,
            "pair_corr_sup": pair_se,
            "quad_mixed_sup": quad_se,
            "rho_hat": float(rho_se),
            "fourth_moment_max": fourth_max_se,
            "pair_corr_mean": float(pair_avg_se),
            "quad_mixed_mean": float(quad_avg_se),
        },
        pair_corr_mean=float(pair_avg),
        quad_mixed_mean=float(quad_avg),
    )


def spectrum(spec: EnsembleSpec, seed: Seed, perturb: Perturbation | None = None) -> SpectralSample:
    """Eigenvalues of one draw, optionally after transforming the raw matrix."""
    a = sample(spec, seed).matrix
    if perturb is not None:
        a = perturb(a)
    vals = linalg.eigenvalues_sym(linalg.gram(a))
    return SpectralSample.from_eigenvalues(vals, spec, seed)


def inflate_columns(fraction: float = 0.1, scale: float = 1.2) -> Perturbation:
    """Control perturbation: multiply the leading ``fraction`` of columns by ``scale``.

    Breaks the unit-variance condition while keeping everything else intact.
    """

    def apply(a: np.ndarray) -> np.ndarray:
        out = np.array(a, dtype=float)
        k = int(round(fraction * out.shape[1]))
        out[:, :k] *= scale
        return out

    return apply


@dataclass
class ResidualReport:
    grid: StieltjesGrid
    residuals: list[float]
    sup_residual: float
    standard_errors: list[float]
    sup_se: float
    trials: int
    mean_stieltjes: list[complex] = field(repr=False, default_factory=list)

    def to_json(self) -> dict:
        return {
            "alpha": self.grid.alpha,
            "v": self.grid.v,
            "points": [[p.real, p.imag] for p in self.grid.points],
            "residuals": list(self.residuals),
            "sup_residual": self.sup_residual,
            "standard_errors": [None if math.isnan(s) else s for s in self.standard_errors],
            "sup_se": None if math.isnan(self.sup_se) else self.sup_se,
            "trials": self.trials,
            "mean_stieltjes": [[m.real, m.imag] for m in self.mean_stieltjes],
        }


def _complex_spread(values: np.ndarray) -> np.ndarray:
    """Sample variance ``E|X - EX|^2`` along axis 0 (ddof = 1); NaN for one sample."""
    t = values.shape[0]
    if t < 2:
        return np.full(values.shape[1:], np.nan)
    centered = values - values.mean(axis=0)
    return (np.abs(centered) ** 2).sum(axis=0) / (t - 1)


def lemma41_residual(
    spec: EnsembleSpec,
    trials: int,
    alpha: float,
    v: float,
    grid_points: int,
    seed: Seed,
    perturb: Perturbation | None = None,
    workers: int | None = None,
) -> ResidualReport:
    """Distance of the trial-averaged Stieltjes transform from its own fixed-point image.

    At each ``z = u + iv`` reports ``|S - 1/(c_n - 1 - z - z S)|`` with ``S``
    the mean of ``s_n(z)`` over trials.  Standard errors use the linearization
    ``|1 - z / w^2| * SE(S)`` with ``w = c_n - 1 - z - z S``.
    """
    if trials < 1:
        raise DomainError(f"trials must be positive, got {trials}")
    grid = StieltjesGrid.uniform(alpha, v, grid_points)
    zs = grid.as_array()
    master = derive_master(seed.master, spec.n, spec.beta)

    def one(t: int) -> np.ndarray:
        return empirical_stieltjes(spectrum(spec, Seed(master, t), perturb), zs)

    values = np.array(map_trials(one, trials, workers))
    mean = values.mean(axis=0)
    w = spec.c_n - 1.0 - zs - zs * mean
    resid = np.abs(mean - 1.0 / w)
    se = np.abs(1.0 - zs / w**2) * np.sqrt(_complex_spread(values) / trials)
    k = int(np.argmax(resid))
    return ResidualReport(
        grid=grid,
        residuals=resid.tolist(),
        sup_residual=float(resid[k]),
        standard_errors=se.tolist(),
        sup_se=float(se[k]),
        trials=trials,
        mean_stieltjes=mean.tolist(),
    )


@dataclass
class VarianceRow:
    n: int
    beta: int
    z: complex
    trials: int
    var_hat: float
    normalized: float
    var_se: float

    def to_json(self) -> dict:
        d = asdict(self)
        d["z"] = [self.z.real, self.z.imag]
        for key in ("var_hat", "normalized", "var_se"):
            if math.isnan(d[key]):
                d[key] = None
        return d


@dataclass
class VarianceScalingTable:
    rows: list[VarianceRow]

    def to_json(self) -> dict:
        return {"rows": [r.to_json() for r in self.rows]}

    def normalized_by_beta(self) -> dict[int, dict[int, float]]:
        out: dict[int, dict[int, float]] = {}
        for r in self.rows:
            out.setdefault(r.beta, {})[r.n] = r.normalized
        return out


def variance_scaling(
    n_list,
    beta_list,
    z: complex,
    trials: int,
    seed: Seed,
    aspect=2,
    kind: Kind | str = Kind.MOVING_AVERAGE_ROWS,
    workers: int | None = None,
) -> VarianceScalingTable:
    """Sample variance of ``s_n(z)`` for every ``(n, beta)`` cell.

    ``normalized = n * var * (Im z)^2 / (beta + 1)^2`` is the quantity the
    variance bound keeps below a constant.
    """
    z = complex(z)
    if not z.imag > 0:
        raise DomainError("Stieltjes argument must satisfy Im z > 0")
    if trials < 1:
        raise DomainError(f"trials must be positive, got {trials}")
    rows = []
    for beta in beta_list:
        for n in n_list:
            spec = EnsembleSpec(Kind(kind), n, aspect, beta)
            master = derive_master(seed.master, n, beta)
            values = np.array(
                map_trials(lambda t: empirical_stieltjes(spectrum(spec, Seed(master, t)), z), trials, workers)
            )
            var = float(_complex_spread(values[:, None])[0])
            if trials >= 2:
                dev2 = np.abs(values - values.mean()) ** 2
                var_se = float(np.std(dev2, ddof=1) / math.sqrt(trials))
            else:
                var_se = math.nan
            rows.append(
                VarianceRow(
                    n=n,
                    beta=beta,
                    z=z,
                    trials=trials,
                    var_hat=var,
                    normalized=n * var * z.imag**2 / (beta + 1) ** 2,
                    var_se=var_se,
                )
            )
    return VarianceScalingTable(rows)


def gram_norm(matrix: np.ndarray) -> float:
    """``(1/n) ||A A^T||`` for one matrix."""
    return linalg.spectral_norm(linalg.gram(matrix))


def norm_check(spec: EnsembleSpec, trials: int, seed: Seed, workers: int | None = None) -> tuple[float, float]:
    """Mean and max over trials of ``(1/n) ||A A^T||``."""
    if trials < 1:
        raise DomainError(f"trials must be positive, got {trials}")
    master = derive_master(seed.master, spec.n, spec.beta)
    norms = map_trials(lambda t: gram_norm(sample(spec, Seed(master, t)).matrix), trials, workers)
    return float(np.mean(norms)), float(np.max(norms))

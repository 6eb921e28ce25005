"""Experiment drivers: convergence sweeps, diagnostics runs and rate fitting."""

from __future__ import annotations

import logging
import math
import time

import numpy as np

from .. import diagnostics
from ..ensembles import EnsembleSpec, sample
from ..errors import CapacityError, InsufficientDataError
from ..mp_law import MPLaw, mp_cdf, mp_density
from ..parallel import derive_master, map_trials
from ..seeding import Seed
from ..spectral_stats import ESD, SpectralSample, average_esd, kolmogorov_distance
from .cache import EigenCache
from .config import Experiment, ExperimentConfig
from .results import (
    DiagnoseResult,
    NormcheckResult,
    NormRow,
    ResidualResult,
    RunInfo,
    SweepResult,
    SweepRow,
    VarcheckResult,
)

log = logging.getLogger(__name__)


def _info(cfg: ExperimentConfig) -> RunInfo:
    return RunInfo(
        experiment=cfg.experiment.value,
        kind=cfg.kind.value,
        aspect=cfg.aspect,
        beta=cfg.beta,
        trials=cfg.trials,
        master_seed=cfg.master_seed,
        reference=cfg.reference.value,
    )


def _spectrum(spec: EnsembleSpec, seed: Seed, cache: EigenCache | None) -> SpectralSample:
    if cache is not None:
        hit = cache.get(spec, seed)
        if hit is not None:
            return hit
    s = diagnostics.spectrum(spec, seed)
    if cache is not None:
        cache.put(s)
    return s


def _jackknife_se(samples: list[SpectralSample], pooled: ESD, law: MPLaw) -> float:
    """Jackknife standard error of the averaged-ESD distance over trials."""
    t = len(samples)
    if t < 2:
        return math.nan
    atoms = np.unique(pooled.values)
    ref = mp_cdf(law, atoms)

    def lookup(x):
        return ref[np.searchsorted(atoms, x)]

    loo = np.empty(t)
    for k in range(t):
        rest = ESD(np.concatenate([s.eigenvalues for j, s in enumerate(samples) if j != k]))
        loo[k] = kolmogorov_distance(rest, law, cdf=lookup)
    return float(math.sqrt((t - 1) / t * np.sum((loo - loo.mean()) ** 2)))


def run_sweep(cfg: ExperimentConfig, workers: int | None = None) -> SweepResult:
    """Distance to the reference law for single trials and for their average, per n.

    A capacity failure at one ``n`` is recorded in ``result.errors`` and the
    remaining sizes still run.
    """
    result = SweepResult(_info(cfg))
    cache = EigenCache(cfg.cache_dir) if cfg.cache_dir else None
    for n in cfg.n_list:
        start = time.perf_counter()
        spec = cfg.spec(n)
        master = derive_master(cfg.master_seed, n, spec.beta)
        law = MPLaw(cfg.reference_c(spec))
        try:
            samples = map_trials(lambda t: _spectrum(spec, Seed(master, t), cache), cfg.trials, workers)
        except CapacityError as exc:
            log.warning("skipping n=%d: %s", n, exc)
            result.errors.append({"n": n, "error": str(exc)})
            continue
        singles = np.array([kolmogorov_distance(s.esd(), law) for s in samples])
        pooled = average_esd(samples)
        se_single = float(np.std(singles, ddof=1) / math.sqrt(len(singles))) if len(singles) > 1 else math.nan
        result.rows.append(
            SweepRow(
                n=n,
                N=spec.N,
                c_n=spec.c_n,
                trials=cfg.trials,
                kdist_mean_single=float(singles.mean()),
                kdist_of_average=kolmogorov_distance(pooled, law),
                se=_jackknife_se(samples, pooled, law),
                se_single=se_single,
                wall_time_s=time.perf_counter() - start,
            )
        )
        log.info("n=%d done in %.2fs", n, result.rows[-1].wall_time_s)
    return result


def rate_fit(result: SweepResult) -> tuple[float, float]:
    """Least-squares slope of log(kdist_of_average) against log(n), with R^2."""
    pts = [(r.n, r.kdist_of_average) for r in result.rows if r.kdist_of_average > 0]
    if len(pts) < 3:
        raise InsufficientDataError(f"rate fit needs at least 3 rows with positive distance, got {len(pts)}")
    x = np.log([p[0] for p in pts])
    y = np.log([p[1] for p in pts])
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 if ss_tot == 0.0 else 1.0 - float(np.sum(resid**2)) / ss_tot
    return float(slope), r2


def run_diagnose(cfg: ExperimentConfig, workers: int | None = None) -> DiagnoseResult:
    result = DiagnoseResult(_info(cfg))
    for n in cfg.n_list:
        result.reports[n] = diagnostics.estimate_c0(cfg.spec(n), cfg.trials, Seed(cfg.master_seed), workers)
    return result


def run_residual(cfg: ExperimentConfig, workers: int | None = None) -> ResidualResult:
    result = ResidualResult(_info(cfg))
    for n in cfg.n_list:
        result.reports[n] = diagnostics.lemma41_residual(
            cfg.spec(n), cfg.trials, cfg.alpha, cfg.v, cfg.points, Seed(cfg.master_seed), workers=workers
        )
    return result


def run_varcheck(cfg: ExperimentConfig, workers: int | None = None) -> VarcheckResult:
    table = diagnostics.variance_scaling(
        cfg.n_list,
        cfg.beta_list,
        cfg.z,
        cfg.trials,
        Seed(cfg.master_seed),
        aspect=cfg.aspect,
        kind=cfg.kind,
        workers=workers,
    )
    return VarcheckResult(_info(cfg), table)


def run_normcheck(cfg: ExperimentConfig, workers: int | None = None) -> NormcheckResult:
    result = NormcheckResult(_info(cfg))
    for n in cfg.n_list:
        spec = cfg.spec(n)
        master = derive_master(cfg.master_seed, n, spec.beta)
        norms = np.array(
            map_trials(lambda t: diagnostics.gram_norm(sample(spec, Seed(master, t)).matrix), cfg.trials, workers)
        )
        se = float(norms.std(ddof=1) / math.sqrt(norms.size)) if norms.size > 1 else math.nan
        result.rows.append(NormRow(n=n, mean_norm=float(norms.mean()), max_norm=float(norms.max()), se=se))
    return result


RUNNERS = {
    Experiment.SWEEP: run_sweep,
    Experiment.DIAGNOSE: run_diagnose,
    Experiment.RESIDUAL: run_residual,
    Experiment.VARCHECK: run_varcheck,
    Experiment.NORMCHECK: run_normcheck,
}


def run_experiment(cfg: ExperimentConfig, workers: int | None = None):
    return RUNNERS[cfg.experiment](cfg, workers)


def mp_eval(c: float, x_min: float, x_max: float, points: int) -> dict[str, np.ndarray]:
    """Density and distribution function of the law on an even grid."""
    law = MPLaw(c)
    x = np.linspace(x_min, x_max, points)
    return {"x": x, "density": mp_density(law, x), "cdf": mp_cdf(law, x)}

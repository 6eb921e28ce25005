"""Experiment configuration: strict JSON in, validated ExperimentConfig out."""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from fractions import Fraction

from ..ensembles import EnsembleSpec, Kind, parse_aspect
from ..errors import ConfigError, SpecError

DEFAULTS = {
    "trials": 20,
    "alpha": 8.0,
    "v": 0.5,
    "points": 33,
    "reference": "LAW_AT_CN",
    "beta": 0,
    "beta_list": None,
    "z": [1.0, 1.0],
    "c_limit": None,
    "out": None,
    "format": "csv",
    "figure": None,
    "cache_dir": None,
}
REQUIRED = ("experiment", "kind", "aspect", "n_list", "master_seed")


class Experiment(str, enum.Enum):
    SWEEP = "SWEEP"
    DIAGNOSE = "DIAGNOSE"
    VARCHECK = "VARCHECK"
    RESIDUAL = "RESIDUAL"
    NORMCHECK = "NORMCHECK"


class Reference(str, enum.Enum):
    LAW_AT_C = "LAW_AT_C"
    LAW_AT_CN = "LAW_AT_CN"


@dataclass(frozen=True)
class ExperimentConfig:
    """Validated experiment description.

    ``reference`` picks the comparison law: ``LAW_AT_CN`` uses the finite-n
    aspect ``N/n``; ``LAW_AT_C`` uses ``c_limit`` (default: the configured
    aspect).  ``alpha``/``v``/``points`` define the Stieltjes grid for
    RESIDUAL, ``z`` the evaluation point and ``beta_list`` the dependence
    ranges for VARCHECK.
    """

    experiment: Experiment
    kind: Kind
    aspect: Fraction
    n_list: tuple[int, ...]
    master_seed: int
    trials: int = 20
    beta: int = 0
    beta_list: tuple[int, ...] = (0,)
    reference: Reference = Reference.LAW_AT_CN
    c_limit: Fraction | None = None
    alpha: float = 8.0
    v: float = 0.5
    points: int = 33
    z: complex = 1 + 1j
    out: str | None = None
    format: str = "csv"
    figure: str | None = None
    cache_dir: str | None = None

    def spec(self, n: int, beta: int | None = None) -> EnsembleSpec:
        return EnsembleSpec(self.kind, n, self.aspect, self.beta if beta is None else beta)

    def reference_c(self, spec: EnsembleSpec) -> float:
        if self.reference is Reference.LAW_AT_CN:
            return spec.c_n
        return float(self.c_limit if self.c_limit is not None else self.aspect)

    def to_json(self) -> dict:
        return {
            "experiment": self.experiment.value,
            "kind": self.kind.value,
            "aspect": f"{self.aspect.numerator}/{self.aspect.denominator}",
            "n_list": list(self.n_list),
            "master_seed": self.master_seed,
            "trials": self.trials,
            "beta": self.beta,
            "beta_list": list(self.beta_list),
            "reference": self.reference.value,
            "c_limit": None if self.c_limit is None else f"{self.c_limit.numerator}/{self.c_limit.denominator}",
            "alpha": self.alpha,
            "v": self.v,
            "points": self.points,
            "z": [self.z.real, self.z.imag],
            "out": self.out,
            "format": self.format,
            "figure": self.figure,
            "cache_dir": self.cache_dir,
        }


def _reject_duplicates(pairs):
    obj = {}
    for key, value in pairs:
        if key in obj:
            raise ConfigError("duplicate key", key=key)
        obj[key] = value
    return obj


def _int(value, key, minimum=None):
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"expected an integer, got {value!r}", key=key)
    if minimum is not None and value < minimum:
        raise ConfigError(f"must be >= {minimum}, got {value}", key=key)
    return value


def _real(value, key):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"expected a number, got {value!r}", key=key)
    return float(value)


def _enum(cls, value, key):
    try:
        return cls(value)
    except ValueError:
        allowed = ", ".join(m.value for m in cls)
        raise ConfigError(f"expected one of {allowed}, got {value!r}", key=key) from None


def parse_config(text: str) -> ExperimentConfig:
    """Parse and validate a JSON experiment description.

    Duplicate or unknown keys are errors; so is any value that would make an
    ensemble inadmissible for some ``n`` in ``n_list``.
    """
    try:
        obj = json.loads(text, object_pairs_hook=_reject_duplicates)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(obj, dict):
        raise ConfigError("configuration must be a JSON object")
    return config_from_dict(obj)


def config_from_dict(obj: dict) -> ExperimentConfig:
    unknown = sorted(set(obj) - set(REQUIRED) - set(DEFAULTS))
    if unknown:
        raise ConfigError("unknown key", key=unknown[0])
    for key in REQUIRED:
        if key not in obj:
            raise ConfigError("missing required key", key=key)
    merged = {**DEFAULTS, **obj}

    experiment = _enum(Experiment, merged["experiment"], "experiment")
    kind = _enum(Kind, merged["kind"], "kind")
    try:
        aspect = parse_aspect(merged["aspect"])
    except SpecError as exc:
        raise ConfigError(str(exc), key="aspect") from None

    n_list = merged["n_list"]
    if not isinstance(n_list, list) or not n_list:
        raise ConfigError("expected a non-empty list of positive integers", key="n_list")
    n_list = tuple(_int(n, "n_list", 1) for n in n_list)
    if any(b <= a for a, b in zip(n_list, n_list[1:])):
        raise ConfigError("must be strictly increasing", key="n_list")

    master_seed = _int(merged["master_seed"], "master_seed", 0)
    if master_seed >= 1 << 64:
        raise ConfigError("must fit in 64 bits", key="master_seed")
    trials = _int(merged["trials"], "trials", 1)
    beta = _int(merged["beta"], "beta", 0)
    if merged["beta_list"] is None:
        beta_list = (beta,)
    else:
        if not isinstance(merged["beta_list"], list) or not merged["beta_list"]:
            raise ConfigError("expected a non-empty list of nonnegative integers", key="beta_list")
        beta_list = tuple(_int(b, "beta_list", 0) for b in merged["beta_list"])
    reference = _enum(Reference, merged["reference"], "reference")
    c_limit = None
    if merged["c_limit"] is not None:
        try:
            c_limit = parse_aspect(merged["c_limit"])
        except SpecError as exc:
            raise ConfigError(str(exc), key="c_limit") from None

    alpha = _real(merged["alpha"], "alpha")
    if not alpha > 0:
        raise ConfigError("must be positive", key="alpha")
    v = _real(merged["v"], "v")
    if not 0 < v <= 1:
        raise ConfigError("must lie in (0, 1]", key="v")
    points = _int(merged["points"], "points", 1)
    zval = merged["z"]
    if not (isinstance(zval, list) and len(zval) == 2):
        raise ConfigError("expected [re, im]", key="z")
    z = complex(_real(zval[0], "z"), _real(zval[1], "z"))
    if not z.imag > 0:
        raise ConfigError("imaginary part must be positive", key="z")

    fmt = merged["format"]
    if fmt not in ("csv", "json"):
        raise ConfigError(f"expected 'csv' or 'json', got {fmt!r}", key="format")
    for key in ("out", "figure", "cache_dir"):
        if merged[key] is not None and not isinstance(merged[key], str):
            raise ConfigError("expected a path string", key=key)

    cfg = ExperimentConfig(
        experiment=experiment,
        kind=kind,
        aspect=aspect,
        n_list=n_list,
        master_seed=master_seed,
        trials=trials,
        beta=beta,
        beta_list=beta_list,
        reference=reference,
        c_limit=c_limit,
        alpha=alpha,
        v=v,
        points=points,
        z=z,
        out=merged["out"],
        format=fmt,
        figure=merged["figure"],
        cache_dir=merged["cache_dir"],
    )
    betas = beta_list if experiment is Experiment.VARCHECK else (beta,)
    for n in n_list:
        for b in betas:
            try:
                cfg.spec(n, b)
            except SpecError as exc:
                raise ConfigError(f"n = {n}: {exc}", key="n_list") from None
    return cfg

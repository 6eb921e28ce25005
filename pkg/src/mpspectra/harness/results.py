"""Result containers for each experiment and their flattening into metric rows."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction

from ..diagnostics import C0Report, ResidualReport, VarianceRow, VarianceScalingTable
from ..mp_law import StieltjesGrid

CSV_COLUMNS = (
    "experiment",
    "kind",
    "n",
    "N",
    "c_num",
    "c_den",
    "beta",
    "trials",
    "master_seed",
    "metric_name",
    "metric_value",
    "stderr",
)


@dataclass(frozen=True)
class RunInfo:
    experiment: str
    kind: str
    aspect: Fraction
    beta: int
    trials: int
    master_seed: int
    reference: str = "LAW_AT_CN"

    def to_json(self) -> dict:
        d = asdict(self)
        d["aspect"] = f"{self.aspect.numerator}/{self.aspect.denominator}"
        return d

    @classmethod
    def from_json(cls, obj: dict) -> RunInfo:
        return cls(**{**obj, "aspect": Fraction(obj["aspect"])})

    def metric(self, n: int, name: str, value: float, stderr: float, beta: int | None = None) -> dict:
        return {
            "experiment": self.experiment,
            "kind": self.kind,
            "n": n,
            "N": int(self.aspect * n),
            "c_num": self.aspect.numerator,
            "c_den": self.aspect.denominator,
            "beta": self.beta if beta is None else beta,
            "trials": self.trials,
            "master_seed": self.master_seed,
            "metric_name": name,
            "metric_value": value,
            "stderr": stderr,
        }


def _nan_to_none(x):
    return None if isinstance(x, float) and math.isnan(x) else x


def _none_to_nan(x):
    return math.nan if x is None else x


@dataclass
class SweepRow:
    n: int
    N: int
    c_n: float
    trials: int
    kdist_mean_single: float
    kdist_of_average: float
    se: float
    se_single: float
    wall_time_s: float = field(default=0.0, compare=False)


@dataclass
class SweepResult:
    """Per-n distances of single-trial and trial-averaged ESDs to the reference law.

    ``se`` is the jackknife standard error of ``kdist_of_average``;
    ``se_single`` the standard error of ``kdist_mean_single``.
    """

    info: RunInfo
    rows: list[SweepRow] = field(default_factory=list)
    errors: list[dict] = field(default_factory=list)

    def metrics(self) -> list[dict]:
        out = []
        for r in self.rows:
            out.append(self.info.metric(r.n, "kdist_mean_single", r.kdist_mean_single, r.se_single))
            out.append(self.info.metric(r.n, "kdist_of_average", r.kdist_of_average, r.se))
        return out

    def to_json(self) -> dict:
        return {
            "info": self.info.to_json(),
            "rows": [{k: _nan_to_none(v) for k, v in asdict(r).items()} for r in self.rows],
            "errors": list(self.errors),
        }

    @classmethod
    def from_json(cls, obj: dict) -> SweepResult:
        rows = [SweepRow(**{k: _none_to_nan(v) for k, v in r.items()}) for r in obj["rows"]]
        return cls(RunInfo.from_json(obj["info"]), rows, list(obj.get("errors", [])))


C0_METRICS = ("q_hat", "pair_corr_sup", "quad_mixed_sup", "rho_hat", "fourth_moment_max", "pair_corr_mean", "quad_mixed_mean")


@dataclass
class DiagnoseResult:
    info: RunInfo
    reports: dict[int, C0Report] = field(default_factory=dict)

    def metrics(self) -> list[dict]:
        out = []
        for n, rep in self.reports.items():
            for name in C0_METRICS:
                out.append(self.info.metric(n, name, getattr(rep, name), rep.standard_errors[name]))
        return out

    def to_json(self) -> dict:
        return {"info": self.info.to_json(), "reports": {str(n): r.to_json() for n, r in self.reports.items()}}

    @classmethod
    def from_json(cls, obj: dict) -> DiagnoseResult:
        return cls(RunInfo.from_json(obj["info"]), {int(n): C0Report(**r) for n, r in obj["reports"].items()})


@dataclass
class ResidualResult:
    info: RunInfo
    reports: dict[int, ResidualReport] = field(default_factory=dict)

    def metrics(self) -> list[dict]:
        out = []
        for n, rep in self.reports.items():
            out.append(self.info.metric(n, "sup_residual", rep.sup_residual, rep.sup_se))
            for z, r, se in zip(rep.grid.points, rep.residuals, rep.standard_errors):
                out.append(self.info.metric(n, f"residual[u={z.real:.17g}]", r, se))
        return out

    def to_json(self) -> dict:
        return {"info": self.info.to_json(), "reports": {str(n): r.to_json() for n, r in self.reports.items()}}

    @classmethod
    def from_json(cls, obj: dict) -> ResidualResult:
        reports = {}
        for n, r in obj["reports"].items():
            grid = StieltjesGrid(r["alpha"], r["v"], tuple(complex(a, b) for a, b in r["points"]))
            reports[int(n)] = ResidualReport(
                grid=grid,
                residuals=list(r["residuals"]),
                sup_residual=r["sup_residual"],
                standard_errors=[_none_to_nan(s) for s in r["standard_errors"]],
                sup_se=_none_to_nan(r["sup_se"]),
                trials=r["trials"],
                mean_stieltjes=[complex(a, b) for a, b in r["mean_stieltjes"]],
            )
        return cls(RunInfo.from_json(obj["info"]), reports)


@dataclass
class VarcheckResult:
    info: RunInfo
    table: VarianceScalingTable

    def metrics(self) -> list[dict]:
        out = []
        for r in self.table.rows:
            scale = r.n * r.z.imag**2 / (r.beta + 1) ** 2
            out.append(self.info.metric(r.n, "var_hat", r.var_hat, r.var_se, beta=r.beta))
            out.append(self.info.metric(r.n, "normalized", r.normalized, r.var_se * scale, beta=r.beta))
        return out

    def to_json(self) -> dict:
        return {"info": self.info.to_json(), "table": self.table.to_json()}

    @classmethod
    def from_json(cls, obj: dict) -> VarcheckResult:
        rows = []
        for r in obj["table"]["rows"]:
            rows.append(
                VarianceRow(
                    n=r["n"],
                    beta=r["beta"],
                    z=complex(*r["z"]),
                    trials=r["trials"],
                    var_hat=_none_to_nan(r["var_hat"]),
                    normalized=_none_to_nan(r["normalized"]),
                    var_se=_none_to_nan(r["var_se"]),
                )
            )
        return cls(RunInfo.from_json(obj["info"]), VarianceScalingTable(rows))


@dataclass
class NormRow:
    n: int
    mean_norm: float
    max_norm: float
    se: float


@dataclass
class NormcheckResult:
    info: RunInfo
    rows: list[NormRow] = field(default_factory=list)

    def metrics(self) -> list[dict]:
        out = []
        for r in self.rows:
            out.append(self.info.metric(r.n, "mean_norm", r.mean_norm, r.se))
            out.append(self.info.metric(r.n, "max_norm", r.max_norm, math.nan))
        return out

    def to_json(self) -> dict:
        return {
            "info": self.info.to_json(),
            "rows": [{k: _nan_to_none(v) for k, v in asdict(r).items()} for r in self.rows],
        }

    @classmethod
    def from_json(cls, obj: dict) -> NormcheckResult:
        return cls(RunInfo.from_json(obj["info"]), [NormRow(**{k: _none_to_nan(v) for k, v in r.items()}) for r in obj["rows"]])


RESULT_TYPES = {
    "SWEEP": SweepResult,
    "DIAGNOSE": DiagnoseResult,
    "RESIDUAL": ResidualResult,
    "VARCHECK": VarcheckResult,
    "NORMCHECK": NormcheckResult,
}

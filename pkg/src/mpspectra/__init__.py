"""Spectral statistics of sample-covariance matrices with dependent entries.

Simulates random matrix ensembles, computes the eigenvalues of ``(1/n) A A^T``
and measures their distance to the Marchenko-Pastur law.
"""

from .ensembles import EnsembleSpec, Kind, MatrixSample, balanced_row, ensemble_moments, sample
from .errors import (
    CapacityError,
    ConfigError,
    ConvergenceError,
    DomainError,
    InsufficientDataError,
    MPSpectraError,
    NumericalError,
    SpecError,
    UnsupportedEnsembleError,
)
from .linalg import eigenvalues_sym, gram, spectral_norm
from .mp_law import (
    MPLaw,
    StieltjesGrid,
    mp_cdf,
    mp_density,
    mp_stieltjes_closed,
    mp_stieltjes_fixed_point,
    mp_support,
)
from .seeding import Seed
from .spectral_stats import (
    ESD,
    SpectralSample,
    average_esd,
    empirical_stieltjes,
    esd_eval,
    esd_from_matrix,
    kolmogorov_distance,
)

__version__ = "0.1.0"

"""Wigner-Yanase-Dyson skew information and its uncertainty relations, checked numerically."""

from .errors import (
    ConvergenceError,
    DimensionError,
    EigenFloorError,
    InvalidStateError,
    NotHermitianError,
    NumericalError,
    SkewlabError,
)
from .hermitian import SpectralDecomposition, anti_commutator, commutator, eig_hermitian, frac_power, trace_product
from .inequalities import InequalityVerdict
from .skew import QuantityReport, Region, SkewParams, report, skew_I, skew_I_spectral, skew_J, u_geo, u_luo
from .states import (
    CenteredObservable,
    DensityMatrix,
    Observable,
    SamplerConfig,
    center,
    covariance,
    pauli,
    sample_density,
    sample_observable,
    validate_density,
    variance,
)

__version__ = "0.1.0"

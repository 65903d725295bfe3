"""Exact spectra, stability indices and moduli dimension counts for SL cones."""

__version__ = "0.1.0"

from .errors import (
    ConfigError,
    InconsistencyError,
    ResourceLimitError,
    SLConeError,
    SpectrumTruncatedError,
)
from .lattice import hl_eigenvalue, hl_eigenvectors, hl_spectrum
from .moduli import (
    ModuliReport,
    MultiEndCone,
    Plane,
    SingularConfig,
    TopologyData,
    dim_E,
    dim_I,
    dim_K,
    dim_O,
    dim_O_multi_end,
    expected_dim_family,
    expected_dim_moduli,
    fredholm_index,
    mclean_dims,
    stability_index_in_family,
)
from .spectrum import (
    ConeDescriptor,
    GrowthRate,
    LinkSpectrum,
    admissible_rate_sup,
    check_lower_bounds,
    counting_N,
    growth_rates,
    mult_at_rate,
    stability_index,
)

"""Exact Frobenius-Perron invariants: certified spectral radii, quivers,
finite Hom tables, stable tubes and Calabi-Yau formulas."""

from .errors import (
    ConstructionMismatch,
    ConvergenceError,
    DegenerateSet,
    DomainError,
    FPError,
    Indeterminate,
    InfinityNotAllowed,
    InsufficientData,
    InvalidDecomposition,
    MatrixSyntaxError,
    MissingData,
    QuiverSyntaxError,
    UnknownDescriptor,
)
from .specmat import (
    DEFAULT_TOL,
    INF,
    ExtMatrix,
    SpectralBounds,
    extended_spectral_radius,
    parse_matrix,
    spectral_radius,
)
from .quiver import (
    DynkinType,
    Quiver,
    WeightClass,
    adjacency_matrix,
    classify_weights,
    coxeter_number,
    dynkin_quiver,
    fpdim_quiver,
    parse_quiver,
)
from .fincat import (
    CategoryData,
    Flavor,
    SigmaDecomposition,
    enumerate_brick_sets,
    fpdim,
    fpdim_n,
    fpg_estimate,
    fpv_estimate,
    ratio_spectral_radius,
    sigma_decomposition_bound,
)
from .tube import TubeObject, build_tube_model, tube_fpdim, verify_tube
from .cycat import (
    FractionalCYModel,
    RationalSeries,
    SpectrumQuery,
    catalog_lookup,
    cy_tensor_sum,
    fp_kodaira_gorenstein,
    fpcy_fractional,
    hilbert_growth,
    spectrum_membership,
    veronese_series,
)

__version__ = "0.1.0"

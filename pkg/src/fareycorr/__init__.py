"""Correlation statistics of Farey fractions.

Generation of Farey sequences, empirical nu-level correlation measures of
point sets on the unit circle, the exact limiting correlation formulas
(pair density in closed form; nu-level measures by certified quadrature),
and exponential-sum identity audits — plus a CLI front end for
reproducible data files and figures.
"""

from .errors import (
    ConvergenceError,
    FareyCorrError,
    InputValidationError,
    SizingError,
)
from .numtheory import SieveTables, build_sieves, farey_cardinality, sieve_ceiling
from .farey import FareyFraction, FareySequence, farey_sequence, iter_farey
from .spacing import (
    BoxRegion,
    CorrelationEstimate,
    PairHistogram,
    axis_pieces,
    circle_positions,
    empirical_correlation,
    pair_correlation_histogram,
    symmetric_correlation,
)
from .theory import (
    AreaResult,
    CorrelationTerm,
    MonteCarloArea,
    NuLevelResult,
    RegionOmega,
    SUPPORT_THRESHOLD,
    enumerate_terms,
    g2,
    g2_asymptotic_diagnostic,
    g2_integral,
    g_reference,
    map_T_AB,
    map_T_forward,
    map_T_inverse,
    monte_carlo_term_area,
    nu_level_measure,
    omega_region,
    term_area,
    weighted_totient_log_sum,
)
from .expsum import farey_exponential_sum_direct, farey_exponential_sum_identity
from .cli import CorrelationReport, RunConfig, execute, main

__version__ = "0.1.0"

__all__ = [
    "AreaResult",
    "BoxRegion",
    "ConvergenceError",
    "CorrelationEstimate",
    "CorrelationReport",
    "CorrelationTerm",
    "FareyCorrError",
    "FareyFraction",
    "FareySequence",
    "InputValidationError",
    "MonteCarloArea",
    "NuLevelResult",
    "PairHistogram",
    "RegionOmega",
    "RunConfig",
    "SUPPORT_THRESHOLD",
    "SieveTables",
    "SizingError",
    "axis_pieces",
    "build_sieves",
    "circle_positions",
    "empirical_correlation",
    "enumerate_terms",
    "execute",
    "farey_cardinality",
    "farey_exponential_sum_direct",
    "farey_exponential_sum_identity",
    "farey_sequence",
    "g2",
    "g2_asymptotic_diagnostic",
    "g2_integral",
    "g_reference",
    "iter_farey",
    "main",
    "map_T_AB",
    "map_T_forward",
    "map_T_inverse",
    "monte_carlo_term_area",
    "nu_level_measure",
    "omega_region",
    "pair_correlation_histogram",
    "sieve_ceiling",
    "symmetric_correlation",
    "term_area",
    "weighted_totient_log_sum",
]

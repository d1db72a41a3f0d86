"""Exact probability engine for identical particles in k levels.

Classical, Bose-Einstein and Fermi-Dirac statistics over occupation vectors,
with rational conditioning, the large-n Beta law, and a Monte Carlo oracle.
"""

from .asymptotics import BetaPosterior, beta_density, beta_function, beta_mean, beta_moment, finite_n_deviation
from .ensemble import (
    DrawRecord,
    Ensemble,
    condition_on_draw,
    condition_on_presence,
    condition_on_record,
    expectation_fraction,
    fraction_distribution,
    prepare_equal_weight,
)
from .errors import (
    EmptyConditioning,
    FermionOverfill,
    NoAcceptedTrials,
    QstatError,
    StateSpaceTooLarge,
    ZeroProbabilityDraw,
)
from .fock import (
    BOSE_EINSTEIN,
    CLASSICAL,
    FERMI_DIRAC,
    StatisticsKind,
    enumerate_support,
    multinomial_weight,
    state_count,
)

__version__ = "0.1.0"

__all__ = [
    "BOSE_EINSTEIN",
    "CLASSICAL",
    "FERMI_DIRAC",
    "BetaPosterior",
    "DrawRecord",
    "EmptyConditioning",
    "Ensemble",
    "FermionOverfill",
    "NoAcceptedTrials",
    "QstatError",
    "StateSpaceTooLarge",
    "StatisticsKind",
    "ZeroProbabilityDraw",
    "beta_density",
    "beta_function",
    "beta_mean",
    "beta_moment",
    "condition_on_draw",
    "condition_on_presence",
    "condition_on_record",
    "enumerate_support",
    "expectation_fraction",
    "finite_n_deviation",
    "fraction_distribution",
    "multinomial_weight",
    "prepare_equal_weight",
    "state_count",
]

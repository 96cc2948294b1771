"""Exact fermionic multiplicity formulas, classical and quantum Q-systems,
and their cluster-algebra realisation."""

__version__ = "0.1.0"

from .cartan import CartanData, cartan
from .errors import (
    ConfigurationError,
    DomainError,
    InadmissibleWeight,
    InvariantViolation,
    NotDivisible,
    QFermionError,
    VerificationFailure,
)
from .fermionic import FermionicInstance, m_sum, n_sum
from .laurent import Laurent, MultiLaurent
from .partitions import DominantWeight, MultiPartition, Partition

__all__ = [
    "__version__",
    "CartanData",
    "cartan",
    "ConfigurationError",
    "DomainError",
    "InadmissibleWeight",
    "InvariantViolation",
    "NotDivisible",
    "QFermionError",
    "VerificationFailure",
    "FermionicInstance",
    "m_sum",
    "n_sum",
    "Laurent",
    "MultiLaurent",
    "DominantWeight",
    "MultiPartition",
    "Partition",
]

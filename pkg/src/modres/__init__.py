"""Degree residues modulo q in random graphs: exact probabilities, searches, thresholds."""

from .errors import CapacityError, GraphFormatError, InputDomainError
from .graph import (Graph, as_mask, decode, degrees_mod, encode, is_good, is_good_alpha,
                    members, sample_gnp)
from .params import DistributionSpec, ModParams

__all__ = [
    "CapacityError", "GraphFormatError", "InputDomainError",
    "Graph", "as_mask", "decode", "degrees_mod", "encode", "is_good", "is_good_alpha",
    "members", "sample_gnp", "DistributionSpec", "ModParams",
]
__version__ = "0.1.0"

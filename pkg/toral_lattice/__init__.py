__version__ = "0.1.0"

from .exceptions import (AlignmentRequired, CapacityExceeded,  # noqa
                         DimensionMismatch, InvalidPartition, NonUnimodular,
                         ThresholdUnmet, ToralLatticeError, TrivialMatrix)
from .maps import Family, ToralMatrix, classify  # noqa
from .lattice import LatticeConfig, Permutation, build_permutation  # noqa

# -*- coding:utf-8 -*-
"""
Exceptions raised by ``toral_lattice``.

Everything that is a bad *value* (a matrix that is not unimodular, a
partition that does not tile the torus, a lattice that is too coarse for the
requested horizon) derives from ``ValueError`` so callers and form fields can
treat it as invalid input. ``CapacityExceeded`` is a resource limit and is
reported separately by the command line (exit code 3).
"""


class ToralLatticeError(Exception):
    pass


class NonUnimodular(ToralLatticeError, ValueError):
    """Matrix determinant is not 1."""


class TrivialMatrix(ToralLatticeError, ValueError):
    """Matrix is ``+1`` or ``-1`` times the identity."""


class InvalidPartition(ToralLatticeError, ValueError):
    """Atoms overlap, or do not cover the torus."""


class ThresholdUnmet(ToralLatticeError, ValueError):
    """Lattice size is below the shadowing threshold for the horizon."""


class AlignmentRequired(ToralLatticeError, ValueError):
    """Unaligned partition whose weighted string table is too large."""


class DimensionMismatch(ToralLatticeError, ValueError):
    """Probability tables with different ``(n, D)``."""


class CapacityExceeded(ToralLatticeError):
    """Requested table is larger than the configured limit."""

    def __init__(self, requested, limit, setting):
        self.requested = requested
        self.limit = limit
        self.setting = setting
        super(CapacityExceeded, self).__init__(
            "%d entries requested, limit is %d (TORAL_LATTICE_%s)" % (requested, limit, setting)
        )

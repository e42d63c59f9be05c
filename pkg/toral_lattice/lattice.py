# -*- coding:utf-8 -*-
"""
The ``N x N`` lattice ``(Z/NZ)^2`` and the discrete dynamics on it.

Lattice point ``(p1, p2)`` sits at ``(p1 / N, p2 / N)`` on the torus; its
cell is the ``1/N`` square centred there, half-open so that rounding with
``floor(N x + 1/2)`` picks exactly one cell for every torus point. The
discrete map ``U_T`` is ``T`` acting on integer vectors mod ``N``, which is a
permutation of the ``N**2`` lattice points. Flat indices are row-major,
``index = p1 * N + p2``.
"""

import csv
import logging
import math
from collections import namedtuple

import numpy as np

from .conf import get_setting
from .exceptions import CapacityExceeded
from .maps import matrix_power, multiply
from .utils import map_chunks

logger = logging.getLogger(__name__)


class LatticeConfig(namedtuple("LatticeConfig", "N")):
    __slots__ = ()

    def __new__(cls, N):
        if isinstance(N, bool) or int(N) != N or N < 2:
            raise ValueError("N must be an integer >= 2, got %r" % (N,))
        return super(LatticeConfig, cls).__new__(cls, int(N))

    @property
    def script_N(self):
        """Number of lattice points, the dimension of the diagonal algebra."""
        return self.N * self.N


LatticePoint = namedtuple("LatticePoint", "p1 p2")


def _wrap(value):
    value = float(value) % 1.0
    # -1e-20 % 1.0 == 1.0 in floating point
    return 0.0 if value == 1.0 else value


class TorusPoint(namedtuple("TorusPoint", "x1 x2")):
    __slots__ = ()

    def __new__(cls, x1, x2):
        return super(TorusPoint, cls).__new__(cls, _wrap(x1), _wrap(x2))


def torus_distance(x, y):
    """Length of the shortest segment joining ``x`` and ``y`` on the torus."""
    return float(torus_distance_array(np.asarray(x, dtype=float), np.asarray(y, dtype=float)))


def torus_distance_array(x, y):
    delta = np.abs(np.mod(x, 1.0) - np.mod(y, 1.0))
    delta = np.minimum(delta, 1.0 - delta)
    return np.hypot(delta[..., 0], delta[..., 1])


def round_array(points, N):
    """Vectorised ``round_to_lattice`` for an array of shape ``(..., 2)``."""
    return np.mod(np.floor(N * np.asarray(points, dtype=float) + 0.5).astype(np.int64), N)


def round_to_lattice(x, cfg):
    p1, p2 = round_array(np.asarray(x, dtype=float), cfg.N)
    return LatticePoint(int(p1), int(p2))


def step_array(T, points, N, j=1):
    """``U_T^j`` on an integer array of shape ``(..., 2)``, exact mod ``N``."""
    a, b, c, d = matrix_power(T, j, modulus=N)
    points = np.asarray(points, dtype=np.int64)
    p1, p2 = points[..., 0], points[..., 1]
    return np.stack([(a * p1 + b * p2) % N, (c * p1 + d * p2) % N], axis=-1)


def discrete_step(T, point, cfg, j=1):
    a, b, c, d = matrix_power(T, j, modulus=cfg.N)
    p1, p2 = point
    return LatticePoint((a * p1 + b * p2) % cfg.N, (c * p1 + d * p2) % cfg.N)


def evolve_array(T, points, j=1):
    """
    Continuous ``T^j`` on the torus for an array of shape ``(..., 2)``,
    reducing mod 1 after every step.
    """
    a, b, c, d = (float(v) for v in (T.inverse() if j < 0 else T))
    x1 = np.mod(np.asarray(points, dtype=float)[..., 0], 1.0)
    x2 = np.mod(np.asarray(points, dtype=float)[..., 1], 1.0)
    for _ in range(abs(j)):
        x1, x2 = np.mod(a * x1 + b * x2, 1.0), np.mod(c * x1 + d * x2, 1.0)
    return np.stack([x1, x2], axis=-1)


def evolve_torus(T, x, j=1):
    x1, x2 = evolve_array(T, np.asarray(x, dtype=float), j)
    return TorusPoint(x1, x2)


def check_capacity(points, setting="MAX_LATTICE_POINTS"):
    limit = get_setting(setting)
    if points > limit:
        raise CapacityExceeded(points, limit, setting)


class Permutation(object):
    """
    A bijection of ``{0, ..., N**2 - 1}``, stored as the array ``forward``
    with ``forward[l]`` the image of ``l``.

    Built from ``U_T`` it sends ``l`` to ``U_T(l)``; ``apply`` then realises
    the induced automorphism of diagonal observables,
    ``(Theta X)_l = X_{U_T(l)}``.
    """

    def __init__(self, forward, N):
        self.forward = np.asarray(forward, dtype=np.int64)
        self.forward.setflags(write=False)
        self.N = N
        if self.forward.shape != (N * N,):
            raise ValueError("expected %d entries, got %s" % (N * N, self.forward.shape))

    def __len__(self):
        return len(self.forward)

    def __eq__(self, other):
        return isinstance(other, Permutation) and self.N == other.N and np.array_equal(self.forward, other.forward)

    def __ne__(self, other):
        return not self == other

    __hash__ = None

    def __repr__(self):
        return "<Permutation N=%d>" % self.N

    @classmethod
    def identity(cls, N):
        return cls(np.arange(N * N), N)

    def is_bijection(self):
        return np.array_equal(np.sort(self.forward), np.arange(len(self.forward)))

    def inverse(self):
        backward = np.empty_like(self.forward)
        backward[self.forward] = np.arange(len(self.forward))
        return Permutation(backward, self.N)

    def then(self, other):
        """Apply ``self`` first, then ``other``."""
        return Permutation(other.forward[self.forward], self.N)

    def compose(self, other):
        """``self`` after ``other``."""
        return other.then(self)

    def power(self, j):
        if j < 0:
            return self.inverse().power(-j)
        result = Permutation.identity(self.N)
        base = self
        while j:
            if j & 1:
                result = result.then(base)
            base = base.then(base)
            j >>= 1
        return result

    def apply(self, entries):
        """Evolve the diagonal of an observable one step."""
        entries = np.asarray(entries)
        if entries.shape[-1] != len(self.forward):
            raise ValueError("diagonal has %d entries, lattice has %d" % (entries.shape[-1], len(self.forward)))
        return entries[..., self.forward]

    def cycle_lengths(self):
        seen = np.zeros(len(self.forward), dtype=bool)
        lengths = []
        for start in range(len(self.forward)):
            if seen[start]:
                continue
            length = 0
            index = start
            while not seen[index]:
                seen[index] = True
                index = self.forward[index]
                length += 1
            lengths.append(length)
        return lengths

    def period(self):
        result = 1
        for length in set(self.cycle_lengths()):
            result = result * length // math.gcd(result, length)
        return result

    def to_csv(self, stream):
        csv.writer(stream, lineterminator="\n").writerow(self.forward.tolist())

    def to_binary(self, stream):
        stream.write(self.forward.astype("<i8").tobytes())

    @classmethod
    def from_csv(cls, stream, N):
        row = next(csv.reader(stream))
        return cls([int(v) for v in row], N)

    @classmethod
    def from_binary(cls, stream, N):
        return cls(np.frombuffer(stream.read(), dtype="<i8"), N)


def build_permutation(T, cfg, j=1):
    """Permutation table of ``U_T^j`` over all ``N**2`` lattice points."""
    N = cfg.N
    check_capacity(cfg.script_N)
    logger.debug("building permutation of %s on N=%d (j=%d)", T, N, j)

    def chunk(start, stop):
        index = np.arange(start, stop, dtype=np.int64)
        image = step_array(T, np.stack([index // N, index % N], axis=-1), N, j)
        return image[:, 0] * N + image[:, 1]

    return Permutation(np.concatenate(map_chunks(chunk, cfg.script_N)), N)


def orbit_period(T, cfg):
    """
    Least ``p >= 1`` with ``U_T^p`` the identity of ``(Z/NZ)^2``. That is
    the order of ``T`` mod ``N`` (images of the two basis vectors), which
    never exceeds ``3 N``.
    """
    N = cfg.N
    base = tuple(v % N for v in T)
    identity = (1 % N, 0, 0, 1 % N)
    power = base
    for p in range(1, 6 * N + 1):
        if power == identity:
            return p
        power = multiply(power, base, N)
    raise AssertionError("no period found for %s mod %d" % (T, N))

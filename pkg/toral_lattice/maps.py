# -*- coding:utf-8 -*-
"""
Integer unimodular matrices acting on the 2-torus.

A ``ToralMatrix`` is a 2x2 integer matrix with determinant 1, different from
``+1`` and ``-1``. ``classify`` splits them into the hyperbolic, parabolic
and elliptic families by the semi-trace ``t = Tr(T) / 2`` and computes the
spectral data every other module relies on: the expanding eigenvalue
``lam``, the angle ``beta`` between the eigen-directions, the operator norm
``eta`` of ``T``, the shear strength ``J`` and the rotation angle ``phi``.

Diameters ``D_T(n)`` use the max-radius convention: the largest ``|T^n v|``
over unit vectors ``v``. For a determinant one matrix ``M`` the two singular
values are ``s`` and ``1/s`` with ``s + 1/s = sqrt(|M|_F^2 + 2)``, so every
quantity here has a closed form in the integer entries.
"""

import enum
import math
from collections import namedtuple
from fractions import Fraction

import numpy as np

from .exceptions import NonUnimodular, ThresholdUnmet, TrivialMatrix

MAX_ELLIPTIC_ORDER = 12

# search horizon for the explicit N_0(gamma, d0)
MAX_N0_SEARCH = 10 ** 6


class Family(enum.Enum):
    HYPERBOLIC = "hyperbolic"
    PARABOLIC = "parabolic"
    ELLIPTIC = "elliptic"

    def __str__(self):
        return self.value


class ToralMatrix(namedtuple("ToralMatrix", "t11 t12 t21 t22")):
    """
    ``T = [[t11, t12], [t21, t22]]`` acting as ``x -> T x (mod 1)``.

    Entries must be integers, ``det T == 1`` and ``T != +-1``.
    """

    __slots__ = ()

    def __new__(cls, t11, t12, t21, t22):
        entries = []
        for value in (t11, t12, t21, t22):
            if isinstance(value, bool) or int(value) != value:
                raise NonUnimodular("matrix entries must be integers, got %r" % (value,))
            entries.append(int(value))
        a, b, c, d = entries
        if a * d - b * c != 1:
            raise NonUnimodular("det = %d, expected 1" % (a * d - b * c))
        if b == 0 and c == 0 and a == d:
            raise TrivialMatrix("T = %+d times the identity has no dynamics" % a)
        return super(ToralMatrix, cls).__new__(cls, a, b, c, d)

    @classmethod
    def from_sequence(cls, values):
        values = list(values)
        if len(values) != 4:
            raise NonUnimodular("a 2x2 matrix needs 4 entries, got %d" % len(values))
        return cls(*values)

    @property
    def trace(self):
        return self.t11 + self.t22

    @property
    def entries(self):
        return tuple(self)

    def inverse(self):
        return ToralMatrix(self.t22, -self.t12, -self.t21, self.t11)

    def negated(self):
        return ToralMatrix(-self.t11, -self.t12, -self.t21, -self.t22)

    def as_array(self):
        return np.array([[self.t11, self.t12], [self.t21, self.t22]], dtype=float)

    def __str__(self):
        return "[[%d, %d], [%d, %d]]" % tuple(self)


def multiply(a, b, modulus=None):
    result = (
        a[0] * b[0] + a[1] * b[2],
        a[0] * b[1] + a[1] * b[3],
        a[2] * b[0] + a[3] * b[2],
        a[2] * b[1] + a[3] * b[3],
    )
    if modulus is not None:
        result = tuple(v % modulus for v in result)
    return result


def matrix_power(T, j, modulus=None):
    """
    Exact entries ``(a, b, c, d)`` of ``T**j`` as Python integers, optionally
    reduced mod ``modulus``. Negative ``j`` uses the integer inverse.
    """
    base = tuple(T.inverse()) if j < 0 else tuple(T)
    if modulus is not None:
        base = tuple(v % modulus for v in base)
    result = (1, 0, 0, 1)
    j = abs(j)
    while j:
        if j & 1:
            result = multiply(result, base, modulus)
        base = multiply(base, base, modulus)
        j >>= 1
    return result


def _is_identity(m):
    return m == (1, 0, 0, 1)


def _largest_singular_value(m):
    frobenius = sum(float(v) * float(v) for v in m)
    # s - 1/s = sqrt(|M|_F^2 - 2) for det M = 1
    gap = math.sqrt(max(frobenius - 2.0, 0.0))
    return (gap + math.sqrt(gap * gap + 4.0)) / 2.0


def elliptic_period(T):
    """Order of ``T``: least ``p >= 1`` with ``T**p == 1`` (exact), one of 3, 4, 6."""
    power = (1, 0, 0, 1)
    for p in range(1, MAX_ELLIPTIC_ORDER + 1):
        power = multiply(power, tuple(T))
        if _is_identity(power):
            return p
    raise AssertionError("%s has no finite order up to %d" % (T, MAX_ELLIPTIC_ORDER))


SpectralData = namedtuple("SpectralData", "family semitrace eta lam beta sin_beta J phi xi period")
SpectralData.__new__.__defaults__ = (None,) * 7


def _eigenvector(T, mu):
    if T.t12 != 0:
        return (float(T.t12), mu - T.t11)
    return (mu - T.t22, float(T.t21))


def classify(T):
    """
    Family and spectral data of ``T``; fields that do not apply to the
    family are ``None``.
    """
    if not isinstance(T, ToralMatrix):
        T = ToralMatrix.from_sequence(T)
    trace = T.trace
    semitrace = Fraction(trace, 2)
    eta = _largest_singular_value(tuple(T))

    if abs(semitrace) > 1:
        root = math.sqrt(trace * trace - 4)
        sign = 1 if trace > 0 else -1
        lam = (trace + sign * root) / 2.0
        lam_inv = (trace - sign * root) / 2.0
        e_plus = _eigenvector(T, lam)
        e_minus = _eigenvector(T, lam_inv)
        cross = e_plus[0] * e_minus[1] - e_plus[1] * e_minus[0]
        dot = e_plus[0] * e_minus[0] + e_plus[1] * e_minus[1]
        if cross < 0:
            cross, dot = -cross, -dot
        beta = math.atan2(cross, dot)
        sin_beta = root / (eta - 1.0 / eta)
        return SpectralData(
            Family.HYPERBOLIC, semitrace, eta, lam=lam, beta=beta, sin_beta=sin_beta, xi=math.log(abs(lam))
        )
    if abs(semitrace) == 1:
        return SpectralData(Family.PARABOLIC, semitrace, eta, J=(eta - 1.0 / eta) / 2.0, xi=0.0)
    return SpectralData(
        Family.ELLIPTIC, semitrace, eta, phi=math.acos(float(semitrace)), xi=0.0, period=elliptic_period(T)
    )


def diameter_formula(S, n):
    """
    ``D_T(n)``: radius of the union of the evolved unit balls up to time
    ``n``. Hyperbolic and parabolic diameters are increasing in ``n``; the
    elliptic one is ``eta`` from ``n = 1`` on.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    if S.family is Family.HYPERBOLIC:
        growth = abs(S.lam) ** n - abs(S.lam) ** -n
        if growth == 0:
            return 1.0
        half = growth / (2.0 * S.sin_beta)
        return half * (1.0 + math.sqrt(1.0 + (1.0 / half) ** 2))
    if S.family is Family.PARABOLIC:
        return n * S.J + math.sqrt(n * n * S.J * S.J + 1.0)
    return 1.0 if n == 0 else S.eta


def evolved_ball_radius(T, n):
    """Largest ``|T^n v|`` over unit ``v``, for the single time ``n``."""
    return _largest_singular_value(matrix_power(T, n))


def diameter_bruteforce(T, n, samples):
    """
    Sampled ``D_T(n)``: the maximum of ``|T^p v|`` over ``|p| <= n`` and
    ``samples`` unit vectors evenly spaced on the upper half circle (the
    evolved balls are centrally symmetric). Doubling ``samples`` keeps all
    previous directions, so the result never decreases under refinement.
    """
    if samples < 64:
        raise ValueError("samples must be at least 64")
    if n < 0:
        raise ValueError("n must be non-negative")
    angles = np.pi * np.arange(samples) / samples
    directions = np.vstack([np.cos(angles), np.sin(angles)])
    radius = 1.0
    # inverse powers have the same singular values
    for p in range(1, n + 1):
        power = np.array(matrix_power(T, p), dtype=float).reshape(2, 2)
        radius = max(radius, float(np.max(np.hypot(*(power @ directions)))))
    return radius


def diameter_bound(S, n):
    if S.family is Family.HYPERBOLIC:
        return abs(S.lam) ** n / S.sin_beta
    if S.family is Family.PARABOLIC:
        return 2.0 * n * S.J + 1.0
    return S.eta


def diameter_asymptote(S, n):
    if S.family is Family.HYPERBOLIC:
        return abs(S.lam) ** n / S.sin_beta
    if S.family is Family.PARABOLIC:
        return 2.0 * n * S.J
    return S.eta


def scaling_function(S, n):
    """``Gamma_T(n)``: ``n log|lam|``, ``log n`` or ``0`` by family."""
    if n < 1:
        raise ValueError("the scaling function is defined for n >= 1")
    if S.family is Family.HYPERBOLIC:
        return n * S.xi
    if S.family is Family.PARABOLIC:
        return math.log(n)
    return 0.0


def breaking_time_estimate(S, N, gamma):
    """
    Largest ``n`` with ``Gamma_T(n) < log(N) / gamma``, or ``None`` when
    every ``n`` qualifies (elliptic family).
    """
    if N < 2:
        raise ValueError("N must be at least 2")
    if gamma <= 1:
        raise ValueError("gamma must be greater than 1")
    if S.family is Family.ELLIPTIC:
        return None
    limit = math.log(N) / gamma

    def below(n):
        return n < 1 or scaling_function(S, n) < limit

    if S.family is Family.HYPERBOLIC:
        n = max(int(math.ceil(limit / S.xi)) - 1, 0)
    else:
        n = int(math.floor(math.exp(limit)))
    while n > 0 and not below(n):
        n -= 1
    while below(n + 1):
        n += 1
    return n


def shadowing_threshold(S, n):
    """Lattice size above which discrete orbits shadow continuous ones up to ``n``."""
    return math.sqrt(2.0) * diameter_bound(S, n)


def localization_threshold(S, n, d0):
    """
    ``N_M(n)``: above it, ``d(T^n x, y) >= d0`` forces the evolved kernel to
    vanish. Independent of ``n`` for elliptic maps.
    """
    if d0 <= 0:
        raise ValueError("d0 must be positive")
    root2 = math.sqrt(2.0)
    if S.family is Family.HYPERBOLIC:
        bound = diameter_bound(S, n)
        return max((1.0 + bound) / (d0 * root2), root2 * bound)
    if S.family is Family.PARABOLIC:
        return max(root2 / d0 * (n * S.J + 1.0), root2 * (2.0 * n * S.J + 1.0))
    return max((S.eta + 1.0) / (d0 * root2), S.eta * root2)


def localization_n0(S, gamma, d0):
    """
    Explicit ``(n_bar, N_0)`` for dynamical localization: ``n_bar`` is the
    first time at which the growth function (``|lam|^(gamma n)`` or
    ``n^gamma``) catches up with ``N_M(n)`` and ``N_0 = N_M(n_bar)``.
    Elliptic maps have ``n_bar = 0``.
    """
    if gamma <= 1:
        raise ValueError("gamma must be greater than 1")
    if S.family is Family.ELLIPTIC:
        return 0, localization_threshold(S, 0, d0)
    for n in range(1, MAX_N0_SEARCH):
        if S.family is Family.HYPERBOLIC:
            growth = gamma * n * S.xi
        else:
            growth = gamma * math.log(n)
        threshold = localization_threshold(S, n, d0)
        if math.log(threshold) <= growth:
            return n, threshold
    raise ThresholdUnmet("no n_bar below %d for gamma=%g, d0=%g" % (MAX_N0_SEARCH, gamma, d0))


PRESETS = {
    "cat": ToralMatrix(2, 1, 1, 1),
    "cat-3211": ToralMatrix(3, 2, 1, 1),
    "shear": ToralMatrix(1, 1, 0, 1),
    "shear-1021": ToralMatrix(1, 0, 2, 1),
    "rotation": ToralMatrix(0, 1, -1, 0),
    "hexagonal": ToralMatrix(1, 1, -1, 0),
}

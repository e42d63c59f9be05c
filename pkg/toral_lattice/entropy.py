# -*- coding:utf-8 -*-
"""
Classical and coherent-state entropies of partition codings.

A ``Partition`` of the torus into rectangles codes an orbit as a string of
atom indices. The classical side estimates the volumes of the refined atoms
by Monte Carlo orbit coding. The lattice side reduces the multi-time
coherent-state integrals to cell overlaps along discrete orbits, which is
exact (rational) when the partition is aligned with the cell edges.

Strings ``i0 i1 ... i_{n-1}`` are packed into integers in base ``D`` with
``i0`` as the most significant digit.
"""

import logging
import math
from collections import namedtuple
from fractions import Fraction

import numpy as np

from .conf import get_setting
from .exceptions import (AlignmentRequired, CapacityExceeded,
                         DimensionMismatch, InvalidPartition)
from .geometry import Interval, Rectangle, clip_polygon, polygon_area
from .lattice import (LatticeConfig, check_capacity, evolve_array, round_array,
                      step_array)
from .maps import Family, classify
from .utils import map_chunks

logger = logging.getLogger(__name__)

MAX_CODE = 2 ** 62


class Partition(object):
    """
    Finite partition of the torus into rectangles (products of half-open
    arcs). Atoms must be pairwise disjoint and of total area exactly 1.
    """

    def __init__(self, atoms, name=None):
        self.atoms = tuple(atom if isinstance(atom, Rectangle) else Rectangle(*atom) for atom in atoms)
        self.name = name
        if not self.atoms:
            raise InvalidPartition("a partition needs at least one atom")
        for a, first in enumerate(self.atoms):
            for b in range(a + 1, len(self.atoms)):
                if first.overlap(self.atoms[b]):
                    raise InvalidPartition("atoms %d and %d overlap" % (a, b))
        total = sum((atom.measure for atom in self.atoms), Fraction(0))
        if total != 1:
            raise InvalidPartition("atoms cover %s of the torus, expected 1" % total)

    def __len__(self):
        return len(self.atoms)

    def __iter__(self):
        return iter(self.atoms)

    def __eq__(self, other):
        return isinstance(other, Partition) and self.atoms == other.atoms

    def __ne__(self, other):
        return not self == other

    def __hash__(self):
        return hash(self.atoms)

    def __str__(self):
        return self.name or ";".join(str(atom) for atom in self.atoms)

    def __repr__(self):
        return "<Partition %s>" % self

    @classmethod
    def parse(cls, text):
        """A preset name, or rectangles ``"a1:b1,a2:b2"`` joined by ``;``."""
        text = text.strip()
        if text in PRESETS:
            return PRESETS[text]
        return cls([Rectangle.parse(part) for part in text.split(";") if part.strip()])

    def measures(self):
        return [atom.measure for atom in self.atoms]

    def boundaries(self):
        """Boundary coordinates mod 1 along each axis, skipping full arcs."""
        xs, ys = set(), set()
        for atom in self.atoms:
            for side, values in zip(atom, (xs, ys)):
                if not side.is_full:
                    values.update((side.start % 1, side.stop % 1))
        return sorted(xs), sorted(ys)

    def is_aligned(self, N):
        """Every boundary sits on a cell edge ``(k + 1/2) / N``."""
        for values in self.boundaries():
            for value in values:
                scaled = 2 * value * N
                if scaled.denominator != 1 or scaled.numerator % 2 != 1:
                    return False
        return True

    def snap(self, N):
        """
        Nearest aligned partition for ``N``, and the largest distance any
        boundary moved. Raises ``InvalidPartition`` if an atom collapses.
        """

        def nearest(value):
            return (math.floor(value * N) + Fraction(1, 2)) / N

        atoms = []
        distance = Fraction(0)
        for atom in self.atoms:
            sides = []
            for side in atom:
                if side.is_full:
                    sides.append(side)
                    continue
                start, stop = nearest(side.start), nearest(side.stop)
                distance = max(distance, abs(start - side.start), abs(stop - side.stop))
                if start == stop:
                    raise InvalidPartition("atom %s vanishes on the %d-lattice" % (atom, N))
                sides.append(Interval(start, stop))
            atoms.append(Rectangle(*sides))
        name = "%s@%d" % (self.name, N) if self.name else None
        return Partition(atoms, name=name), distance

    def atom_index_array(self, points):
        """Index of the atom holding each point of an array of shape ``(..., 2)``."""
        points = np.asarray(points, dtype=float)
        membership = np.stack([atom.contains_array(points) for atom in self.atoms])
        # a point lost to float round-off at an edge falls to atom 0
        return np.argmax(membership, axis=0).astype(np.int64)


def _halves():
    return Partition([Rectangle((0, "1/2"), (0, 1)), Rectangle(("1/2", 1), (0, 1))], name="halves")


def _quadrants():
    half = Fraction(1, 2)
    return Partition(
        [
            Rectangle((0, half), (0, half)),
            Rectangle((0, half), (half, 1)),
            Rectangle((half, 1), (0, half)),
            Rectangle((half, 1), (half, 1)),
        ],
        name="quadrants",
    )


PRESETS = {"halves": _halves(), "quadrants": _quadrants()}


class SymbolString(tuple):
    """A string ``i0 ... i_{n-1}`` over ``{0, ..., D - 1}``."""

    def __new__(cls, symbols, D):
        symbols = tuple(int(s) for s in symbols)
        if not symbols:
            raise ValueError("symbol strings have length at least 1")
        if any(s < 0 or s >= D for s in symbols):
            raise ValueError("symbols must lie in 0..%d" % (D - 1))
        self = super(SymbolString, cls).__new__(cls, symbols)
        self.D = D
        return self

    @classmethod
    def decode(cls, code, n, D):
        symbols = []
        for _ in range(n):
            code, digit = divmod(int(code), D)
            symbols.append(digit)
        return cls(reversed(symbols), D)

    def encode(self):
        code = 0
        for symbol in self:
            code = code * self.D + symbol
        return code

    def reversed(self):
        return SymbolString(self[::-1], self.D)

    def __str__(self):
        return ("" if self.D <= 10 else ".").join(str(s) for s in self)


def reverse_codes(codes, n, D):
    codes = np.asarray(codes, dtype=np.int64)
    result = np.zeros_like(codes)
    for _ in range(n):
        result = result * D + codes % D
        codes = codes // D
    return result


def _check_code_range(D, n):
    if n < 1:
        raise ValueError("string length must be at least 1")
    if D ** n > MAX_CODE:
        raise ValueError("%d**%d strings do not fit 64-bit codes" % (D, n))


def _count_codes(codes, size):
    """Observed codes and their counts, dense bincount for small alphabets."""
    if size <= get_setting("DENSE_TABLE_LIMIT"):
        counts = np.bincount(codes, minlength=size)
        observed = np.flatnonzero(counts)
        return observed, counts[observed]
    return np.unique(codes, return_counts=True)


def _merge_counts(parts):
    codes = np.concatenate([part[0] for part in parts]).astype(np.int64)
    counts = np.concatenate([part[1] for part in parts]).astype(np.int64)
    merged, inverse = np.unique(codes, return_inverse=True)
    totals = np.zeros(len(merged), dtype=np.int64)
    np.add.at(totals, inverse, counts)
    return merged, totals


class ProbabilityTable(object):
    """
    Probabilities of the strings of length ``n`` over ``D`` symbols, stored
    sparsely as sorted codes with non-zero probability.

    Tables built from counts (Monte Carlo histograms, or lattice histograms
    with ``total = N**2``) also know their exact rational entries.
    """

    def __init__(self, n, D, codes, probabilities, counts=None, total=None, fractions=None, stochastic=False):
        _check_code_range(D, n)
        self.n = n
        self.D = D
        order = np.argsort(np.asarray(codes, dtype=np.int64), kind="stable")
        self.codes = np.asarray(codes, dtype=np.int64)[order]
        self.probabilities = np.asarray(probabilities, dtype=float)[order]
        self.counts = None if counts is None else np.asarray(counts, dtype=np.int64)[order]
        self.total = total
        self._fractions = None if fractions is None else [fractions[i] for i in order]
        self.stochastic = stochastic
        if np.any(self.probabilities < 0):
            raise ValueError("probabilities must be non-negative")

    def __len__(self):
        return len(self.codes)

    def __repr__(self):
        return "<ProbabilityTable n=%d D=%d strings=%d>" % (self.n, self.D, len(self))

    @classmethod
    def from_counts(cls, n, D, parts, total, stochastic=False):
        codes, counts = _merge_counts(parts)
        return cls(n, D, codes, counts / float(total), counts=counts, total=total, stochastic=stochastic)

    @property
    def size(self):
        return self.D ** self.n

    def fractions(self):
        if self._fractions is not None:
            return list(self._fractions)
        if self.counts is None:
            raise ValueError("table has no exact rational entries")
        return [Fraction(int(count), self.total) for count in self.counts]

    def exact(self):
        """``{code: Fraction}`` of the non-zero entries."""
        return dict(zip(self.codes.tolist(), self.fractions()))

    def total_probability(self):
        if self._fractions is not None or self.counts is not None:
            return sum(self.fractions(), Fraction(0))
        return math.fsum(self.probabilities)

    def standard_errors(self):
        if not self.stochastic:
            return np.zeros_like(self.probabilities)
        p = self.probabilities
        return np.sqrt(p * (1.0 - p) / self.total)

    def values_at(self, codes):
        codes = np.asarray(codes, dtype=np.int64)
        position = np.clip(np.searchsorted(self.codes, codes), 0, max(len(self.codes) - 1, 0))
        if not len(self.codes):
            return np.zeros(codes.shape)
        return np.where(self.codes[position] == codes, self.probabilities[position], 0.0)

    def probability(self, symbols):
        if not isinstance(symbols, SymbolString):
            symbols = SymbolString(symbols, self.D)
        if len(symbols) != self.n:
            raise DimensionMismatch("expected a string of length %d" % self.n)
        return float(self.values_at([symbols.encode()])[0])

    def reversed(self):
        """Table of the reversed strings ``i_{n-1} ... i0``."""
        return ProbabilityTable(
            self.n,
            self.D,
            reverse_codes(self.codes, self.n, self.D),
            self.probabilities,
            counts=self.counts,
            total=self.total,
            fractions=self._fractions,
            stochastic=self.stochastic,
        )

    def marginal(self, n, keep="prefix"):
        """
        Distribution of the first (``prefix``) or last (``suffix``) ``n``
        symbols.
        """
        if not 1 <= n <= self.n:
            raise ValueError("marginal length must be in 1..%d" % self.n)
        if keep == "prefix":
            codes = self.codes // self.D ** (self.n - n)
        elif keep == "suffix":
            codes = self.codes % self.D ** n
        else:
            raise ValueError("keep must be 'prefix' or 'suffix'")
        merged, inverse = np.unique(codes, return_inverse=True)
        probabilities = np.zeros(len(merged))
        np.add.at(probabilities, inverse, self.probabilities)
        counts = None
        if self.counts is not None:
            counts = np.zeros(len(merged), dtype=np.int64)
            np.add.at(counts, inverse, self.counts)
            probabilities = counts / float(self.total)
        fractions = None
        if self._fractions is not None:
            fractions = [Fraction(0)] * len(merged)
            for index, value in zip(inverse.tolist(), self._fractions):
                fractions[index] += value
        return ProbabilityTable(
            n, self.D, merged, probabilities, counts=counts, total=self.total, fractions=fractions,
            stochastic=self.stochastic,
        )

    def dense(self):
        if self.size > get_setting("DENSE_TABLE_LIMIT"):
            raise CapacityExceeded(self.size, get_setting("DENSE_TABLE_LIMIT"), "DENSE_TABLE_LIMIT")
        values = np.zeros(self.size)
        values[self.codes] = self.probabilities
        return values

    def rows(self):
        """``(string, code, probability)`` for every non-zero entry, by code."""
        for code, probability in zip(self.codes.tolist(), self.probabilities.tolist()):
            yield str(SymbolString.decode(code, self.n, self.D)), code, probability


def shannon_entropy(tbl):
    """``-sum p log p`` in nats, with ``0 log 0 = 0``."""
    p = tbl.probabilities[tbl.probabilities > 0]
    return -math.fsum((p * np.log(p)).tolist())


def eta_tilde(x):
    """``-x log x`` up to ``1/e``, then constant ``1/e``."""
    if x <= 0:
        return 0.0
    if x <= 1.0 / math.e:
        return -x * math.log(x)
    return 1.0 / math.e


def classical_probabilities_mc(T, P, n, samples, seed):
    """
    Monte Carlo volumes of the refined atoms ``E_i0 & T^-1 E_i1 & ...``:
    code uniform points by the atoms visited along ``x, T x, ...``.
    ``T=None`` stands for the identity.
    """
    if samples < 1000:
        raise ValueError("samples must be at least 1000")
    D = len(P)
    _check_code_range(D, n)

    def chunk(start, stop, rng):
        points = rng.random((stop - start, 2))
        codes = np.zeros(stop - start, dtype=np.int64)
        for k in range(n):
            if k and T is not None:
                points = evolve_array(T, points, 1)
            codes = codes * D + P.atom_index_array(points)
        return _count_codes(codes, D ** n)

    logger.debug("classical coding of %d samples, n=%d, D=%d", samples, n, D)
    return ProbabilityTable.from_counts(n, D, map_chunks(chunk, samples, seed=seed), samples, stochastic=True)


def polygon_probabilities(T, P, n):
    """
    Exact atom volumes for ``n <= 2``: every piece of ``E_i`` is clipped
    against the preimages of the integer translates of ``E_j``.
    """
    if n not in (1, 2):
        raise ValueError("exact atom volumes are available for n = 1 or 2")
    D = len(P)
    values = {}
    if n == 1:
        values = {a: atom.measure for a, atom in enumerate(P)}
    else:
        a, b, c, d = T.inverse()
        span = max(abs(T.t11) + abs(T.t12), abs(T.t21) + abs(T.t22)) + 1

        def preimage(point):
            return (a * point[0] + b * point[1], c * point[0] + d * point[1])

        for i, first in enumerate(P):
            for j, second in enumerate(P):
                area = Fraction(0)
                for x0, x1, y0, y1 in first.pieces():
                    for u0, u1, v0, v1 in second.pieces():
                        for m1 in range(-span, span + 1):
                            for m2 in range(-span, span + 1):
                                corners = [(u0 + m1, v0 + m2), (u1 + m1, v0 + m2), (u1 + m1, v1 + m2), (u0 + m1, v1 + m2)]
                                clipped = clip_polygon([preimage(p) for p in corners], x0, x1, y0, y1)
                                if len(clipped) >= 3:
                                    area += polygon_area(clipped)
                if area:
                    values[i * D + j] = area
    codes = sorted(values)
    fractions = [values[code] for code in codes]
    return ProbabilityTable(n, D, codes, [float(v) for v in fractions], fractions=fractions)


EntropyRate = namedtuple("EntropyRate", "n entropy rate increment")


def ks_entropy_rate(T, P, n_max, samples, seed):
    """
    ``S(n)``, ``S(n)/n`` and ``S(n) - S(n-1)`` for ``n = 1..n_max`` from a
    single Monte Carlo coding of length ``n_max`` and its prefixes.
    """
    if n_max < 2:
        raise ValueError("n_max must be at least 2")
    table = classical_probabilities_mc(T, P, n_max, samples, seed)
    rows = []
    previous = 0.0
    for n in range(1, n_max + 1):
        entropy = shannon_entropy(table.marginal(n, "prefix"))
        rows.append(EntropyRate(n, entropy, entropy / n, entropy - previous))
        previous = entropy
    return rows


class CellWeightTable(object):
    """
    Overlaps ``w(l, E) = N**2 mu(cell(l) & E)`` for every lattice cell and
    atom, kept as per-axis factors: ``w = N |x-overlap| * N |y-overlap|``.
    """

    def __init__(self, partition, cfg):
        self.partition = partition
        self.cfg = cfg
        N = cfg.N
        cells = [Interval.cell(index, N) for index in range(N)]
        self.factors = [
            tuple([N * cell.overlap(side) for cell in cells] for side in atom) for atom in partition.atoms
        ]
        self._x = np.array([[float(v) for v in fx] for fx, _ in self.factors])
        self._y = np.array([[float(v) for v in fy] for _, fy in self.factors])
        self.aligned = all(v in (0, 1) for fx, fy in self.factors for v in fx + fy)

    def weight(self, point, atom):
        """Exact weight of lattice point ``point`` in atom ``atom``."""
        fx, fy = self.factors[atom]
        return fx[point[0]] * fy[point[1]]

    def weights(self, cells):
        """Float weights of shape ``(m, D)`` for integer cells of shape ``(m, 2)``."""
        cells = np.asarray(cells, dtype=np.int64)
        return (self._x[:, cells[:, 0]] * self._y[:, cells[:, 1]]).T

    def atoms_of(self, cells):
        if not self.aligned:
            raise AlignmentRequired("cells straddle atoms of %s" % self.partition)
        return np.argmax(self.weights(cells), axis=1).astype(np.int64)


def cell_weights(P, cfg):
    return CellWeightTable(P, cfg)


def _lattice_cells(N, start, stop):
    index = np.arange(start, stop, dtype=np.int64)
    return np.stack([index // N, index % N], axis=-1)


def cs_probabilities(T, cfg, P, n, method="auto"):
    """
    Coherent-state string probabilities under the tracial state:

        P_i = N**-2 sum_l prod_k w(U_T^k l, E_{i_{n-1-k}})

    ``T=None`` gives the identity dynamics. ``histogram`` (aligned
    partitions) counts the one string each lattice orbit produces and is
    exact; ``weighted`` expands every orbit over all ``D**n`` strings.
    ``auto`` picks ``histogram`` whenever the partition is aligned.
    """
    if method not in ("auto", "histogram", "weighted"):
        raise ValueError("method must be auto, histogram or weighted")
    D = len(P)
    _check_code_range(D, n)
    check_capacity(cfg.script_N)
    N = cfg.N
    weights = cell_weights(P, cfg)
    if method == "auto":
        method = "histogram" if weights.aligned else "weighted"

    if method == "histogram":
        if not weights.aligned:
            raise AlignmentRequired("%s is not aligned with the %d-lattice; snap it first" % (P, N))

        def histogram(start, stop):
            cells = _lattice_cells(N, start, stop)
            codes = np.zeros(stop - start, dtype=np.int64)
            place = 1
            for k in range(n):
                if k and T is not None:
                    cells = step_array(T, cells, N, 1)
                codes += weights.atoms_of(cells) * place
                place *= D
            return _count_codes(codes, D ** n)

        return ProbabilityTable.from_counts(n, D, map_chunks(histogram, cfg.script_N), cfg.script_N)

    requested = D ** n * cfg.script_N
    limit = get_setting("MAX_TABLE_CELLS")
    if requested > limit:
        if weights.aligned:
            raise CapacityExceeded(requested, limit, "MAX_TABLE_CELLS")
        raise AlignmentRequired(
            "%s is not aligned with the %d-lattice and its string table needs %d cells (limit %d)"
            % (P, N, requested, limit)
        )

    def weighted(start, stop):
        cells = _lattice_cells(N, start, stop)
        acc = np.ones((stop - start, 1))
        for k in range(n):
            if k and T is not None:
                cells = step_array(T, cells, N, 1)
            w = weights.weights(cells)
            # digit k of the orbit is the symbol of weight D**k
            acc = np.concatenate([acc * w[:, a:a + 1] for a in range(D)], axis=1)
        return acc.sum(axis=0)

    total = None
    for part in map_chunks(weighted, cfg.script_N):
        total = part if total is None else total + part
    probabilities = total / cfg.script_N
    codes = np.flatnonzero(probabilities)
    return ProbabilityTable(n, D, codes, probabilities[codes])


def cs_probabilities_mc(T, cfg, P, n, samples, seed):
    """
    Direct Monte Carlo of the multi-time coherent-state integral: a uniform
    starting point fixes the lattice orbit, and every later time draws a
    uniform point inside the current cell and records its atom.
    """
    if samples < 1000:
        raise ValueError("samples must be at least 1000")
    D = len(P)
    _check_code_range(D, n)
    N = cfg.N

    def chunk(start, stop, rng):
        points = rng.random((stop - start, 2))
        cells = round_array(points, N)
        codes = np.zeros(stop - start, dtype=np.int64)
        place = 1
        for k in range(n):
            if k:
                if T is not None:
                    cells = step_array(T, cells, N, 1)
                points = np.mod((cells + rng.random((stop - start, 2)) - 0.5) / N, 1.0)
            codes += P.atom_index_array(points) * place
            place *= D
        return _count_codes(codes, D ** n)

    return ProbabilityTable.from_counts(n, D, map_chunks(chunk, samples, seed=seed), samples, stochastic=True)


def _paired(a, b):
    if (a.n, a.D) != (b.n, b.D):
        raise DimensionMismatch("tables have (n, D) = (%d, %d) and (%d, %d)" % (a.n, a.D, b.n, b.D))
    codes = np.union1d(a.codes, b.codes)
    return a.values_at(codes), b.values_at(codes)


def reversal_gap(cs_table, classical_table):
    """``max_i |P_rev(i) - mu_i|``: how far the reversed lattice table is from the classical one."""
    p, q = _paired(cs_table.reversed(), classical_table)
    return float(np.max(np.abs(p - q))) if len(p) else 0.0


def cs_entropy(T, cfg, P, n, method="auto"):
    return shannon_entropy(cs_probabilities(T, cfg, P, n, method))


EntropyComponents = namedtuple("EntropyComponents", "total measurement dynamical")


def entropy_components(T, cfg, P, n):
    """Total, measurement (identity dynamics) and dynamical parts of the coherent-state entropy."""
    total = cs_entropy(T, cfg, P, n)
    measurement = cs_entropy(None, cfg, P, n)
    return EntropyComponents(total, measurement, total - measurement)


def fannes_gap_bound(tbl_a, tbl_b):
    """
    ``(delta, bound)`` with ``delta`` the l1 distance of the two tables and
    ``bound = delta log D**n + eta_tilde(delta)``. Fails with
    ``AssertionError`` if the entropy gap exceeds the bound.
    """
    p, q = _paired(tbl_a, tbl_b)
    delta = math.fsum(np.abs(p - q).tolist())
    bound = delta * tbl_a.n * math.log(tbl_a.D) + eta_tilde(delta)
    gap = abs(shannon_entropy(tbl_a) - shannon_entropy(tbl_b))
    if gap > bound + 1e-12:
        raise AssertionError("entropy gap %.6g exceeds the continuity bound %.6g" % (gap, bound))
    return delta, bound


def theorem3_comparison(T, P, n_max, sizes, samples, seed, rate_fraction=None, absolute_gap=None):
    """
    Per-step gap ``|S_cs(n, N) - S_ks(n)| / n`` over ``n = 1..n_max`` and the
    lattice sizes ``sizes``. ``T=None`` compares the identity dynamics.

    For every ``N`` the partition is snapped to the lattice, the classical
    side is coded with ``samples`` orbits seeded by ``(seed, N)``, and the
    lattice tables (with and without dynamics) are computed once at
    ``n_max`` and marginalised. The breaking time of ``N`` is the first
    ``n`` whose gap exceeds ``rate_fraction * xi`` (hyperbolic) or
    ``absolute_gap``; a least-squares line of breaking time against
    ``log N`` gives the slope ``alpha``.
    """
    S = classify(T) if T is not None else None
    hyperbolic = S is not None and S.family is Family.HYPERBOLIC
    rate_fraction = get_setting("BREAKING_RATE_FRACTION") if rate_fraction is None else rate_fraction
    absolute_gap = get_setting("BREAKING_ABSOLUTE_GAP") if absolute_gap is None else absolute_gap
    threshold = rate_fraction * S.xi if hyperbolic else absolute_gap

    rows = []
    breaking = {}
    epsilon = {}
    snaps = {}
    for N in sizes:
        cfg = LatticeConfig(N)
        aligned, distance = (P, Fraction(0)) if P.is_aligned(N) else P.snap(N)
        snaps[N] = distance
        classical = classical_probabilities_mc(T, aligned, n_max, samples, [seed, N])
        lattice = cs_probabilities(T, cfg, aligned, n_max)
        measurement = lattice if T is None else cs_probabilities(None, cfg, aligned, n_max)
        previous = 0.0
        breaking[N] = None
        epsilon[N] = 0.0
        for n in range(1, n_max + 1):
            ks = classical.marginal(n, "prefix")
            cs = lattice.marginal(n, "suffix")
            s_ks, s_cs = shannon_entropy(ks), shannon_entropy(cs)
            s_measurement = shannon_entropy(measurement.marginal(n, "suffix"))
            gap = abs(s_cs - s_ks) / n
            eps = reversal_gap(cs, ks)
            delta, bound = fannes_gap_bound(cs.reversed(), ks)
            rows.append({
                "n": n,
                "N": N,
                "S_cs": s_cs,
                "S_ks": s_ks,
                "gap": gap,
                "rate": s_cs - previous,
                "S_measurement": s_measurement,
                "S_dynamical": s_cs - s_measurement,
                "epsilon": eps,
                "delta": delta,
                "fannes_bound": bound,
            })
            previous = s_cs
            epsilon[N] = max(epsilon[N], eps)
            if breaking[N] is None and gap > threshold:
                breaking[N] = n
        logger.info("N=%d: breaking time %s, epsilon %.4g", N, breaking[N], epsilon[N])

    fitted = [(math.log(N), n) for N, n in sorted(breaking.items()) if n is not None]
    alpha = None
    if len(set(x for x, _ in fitted)) >= 2:
        alpha = float(np.polyfit([x for x, _ in fitted], [n for _, n in fitted], 1)[0])
    return {
        "operation": "theorem3_comparison",
        "parameters": {
            "matrix": list(T) if T is not None else None,
            "partition": str(P),
            "n_max": n_max,
            "sizes": list(sizes),
            "samples": samples,
            "rate_fraction": rate_fraction,
            "absolute_gap": absolute_gap,
        },
        "seed": seed,
        "family": S.family.value if S is not None else "identity",
        "threshold": threshold,
        "rows": rows,
        "breaking": breaking,
        "epsilon": epsilon,
        "snaps": snaps,
        "alpha": alpha,
        "expected_alpha": 1.0 / S.xi if hyperbolic else None,
    }

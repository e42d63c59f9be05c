# -*- coding:utf-8 -*-
"""
Anti-Wick discretization of torus functions onto the lattice, and back.

``discretize_aw`` averages a function over every lattice cell, giving the
diagonal of an ``N**2 x N**2`` observable; ``dediscretize_aw`` reads that
diagonal back as a step function. Sandwiching the discrete dynamics between
the two and comparing with the continuous one gives the Egorov defect. The
evolved lattice-state kernel is a periodic Kronecker delta, which is what
makes dynamical localization and orbit shadowing checkable exactly.
"""

import logging
import math

import numpy as np

from .exceptions import ThresholdUnmet
from .geometry import Interval, Rectangle
from .lattice import (LatticeConfig, evolve_array, round_array, step_array,
                      torus_distance_array)
from .maps import (Family, breaking_time_estimate, classify,
                   localization_threshold, scaling_function,
                   shadowing_threshold)
from .utils import map_chunks

logger = logging.getLogger(__name__)


class Observable(object):
    """
    A torus function ``f`` together with a declared bound ``|f| <= bound``.

    ``func`` takes an array of points of shape ``(..., 2)`` and returns the
    values with shape ``(...)``. ``integral``, when known in closed form, is
    the mean of ``f`` over the torus.
    """

    integral = None

    def __init__(self, func, bound, name=None, integral=None):
        self.func = func
        self.bound = bound
        self.name = name or getattr(func, "__name__", "f")
        if integral is not None:
            self.integral = integral

    def __repr__(self):
        return "<Observable %s>" % self.name

    def __str__(self):
        return self.name

    def __call__(self, points):
        values = np.asarray(self.func(np.asarray(points, dtype=float)))
        if values.size and np.max(np.abs(values)) > self.bound * (1 + 1e-12):
            raise ValueError("%s exceeds its declared bound %g" % (self.name, self.bound))
        return values

    def cell_averages(self, cells, N, quadrature=1):
        """
        Midpoint-rule average of ``f`` over the cells ``cells`` (integer array
        of shape ``(m, 2)``) on a ``quadrature x quadrature`` sub-grid. The
        sub-samples sit at cell-interior midpoints, never on cell edges.
        """
        if quadrature < 1:
            raise ValueError("quadrature must be at least 1")
        centres = np.asarray(cells, dtype=float) / N
        offsets = ((np.arange(quadrature) + 0.5) / quadrature - 0.5) / N
        total = None
        for dx in offsets:
            for dy in offsets:
                values = self(centres + np.array([dx, dy]))
                total = values if total is None else total + values
        return total / (quadrature * quadrature)


class ConstantObservable(Observable):
    def __init__(self, value):
        super(ConstantObservable, self).__init__(
            lambda points: np.full(points.shape[:-1], value), abs(value), name="const(%g)" % value, integral=value
        )


class TrigObservable(Observable):
    """``amplitude * sin(2 pi (k1 x1 + k2 x2))`` (or ``cos``)."""

    def __init__(self, k1=1, k2=0, amplitude=1.0, kind="sin"):
        if kind not in ("sin", "cos"):
            raise ValueError("kind must be 'sin' or 'cos'")
        wave = np.sin if kind == "sin" else np.cos
        self.modes = (k1, k2)

        def func(points):
            return amplitude * wave(2 * np.pi * (k1 * points[..., 0] + k2 * points[..., 1]))

        integral = amplitude if (kind == "cos" and k1 == 0 and k2 == 0) else 0.0
        super(TrigObservable, self).__init__(
            func, abs(amplitude), name="%s(2pi(%dx1+%dx2))" % (kind, k1, k2), integral=integral
        )


class IndicatorObservable(Observable):
    """
    Indicator of a rectangle. Cell averages are exact interval overlaps,
    so the quadrature order is ignored.
    """

    def __init__(self, rectangle):
        if not isinstance(rectangle, Rectangle):
            rectangle = Rectangle(*rectangle)
        self.rectangle = rectangle
        self._weights = {}
        super(IndicatorObservable, self).__init__(
            lambda points: rectangle.contains_array(points).astype(float),
            1.0,
            name="1[%s]" % (rectangle,),
            integral=float(rectangle.measure),
        )

    def axis_weights(self, N):
        """``N`` times the overlap of every cell arc with each side, as floats."""
        if N not in self._weights:
            self._weights[N] = tuple(
                np.array([float(N * Interval.cell(index, N).overlap(side)) for index in range(N)])
                for side in self.rectangle
            )
        return self._weights[N]

    def cell_averages(self, cells, N, quadrature=1):
        wx, wy = self.axis_weights(N)
        cells = np.asarray(cells, dtype=np.int64)
        return wx[cells[..., 0]] * wy[cells[..., 1]]


OBSERVABLES = {
    "sin-x1": lambda: TrigObservable(1, 0),
    "cos-x2": lambda: TrigObservable(0, 1, kind="cos"),
    "sin-sum": lambda: TrigObservable(1, 1),
    "half": lambda: IndicatorObservable(Rectangle((0, "1/2"), (0, 1))),
}


class DiagonalObservable(object):
    """Diagonal of an element of the lattice algebra, row-major over cells."""

    def __init__(self, cfg, entries):
        self.cfg = cfg
        self.entries = np.asarray(entries)
        if self.entries.shape != (cfg.script_N,):
            raise ValueError("expected %d entries, got %s" % (cfg.script_N, self.entries.shape))
        if not np.all(np.isfinite(self.entries)):
            raise ValueError("diagonal entries must be finite")

    @classmethod
    def identity(cls, cfg):
        return cls(cfg, np.ones(cfg.script_N))

    def mean(self):
        """The uniform trace state."""
        if np.iscomplexobj(self.entries):
            return complex(math.fsum(self.entries.real), math.fsum(self.entries.imag)) / self.cfg.script_N
        return math.fsum(self.entries) / self.cfg.script_N

    def evolve(self, permutation):
        return DiagonalObservable(self.cfg, permutation.apply(self.entries))

    def at_cells(self, cells):
        cells = np.asarray(cells, dtype=np.int64)
        return self.entries[cells[..., 0] * self.cfg.N + cells[..., 1]]


def _all_cells(N, start, stop):
    index = np.arange(start, stop, dtype=np.int64)
    return np.stack([index // N, index % N], axis=-1)


def discretize_aw(f, cfg, quadrature=1):
    """Cell averages of ``f``: the entry at ``l`` is ``N**2`` times its integral over the cell."""
    if quadrature < 1:
        raise ValueError("quadrature must be at least 1")
    N = cfg.N
    chunks = map_chunks(lambda start, stop: f.cell_averages(_all_cells(N, start, stop), N, quadrature), cfg.script_N)
    return DiagonalObservable(cfg, np.concatenate(chunks))


def dediscretize_aw(X, x):
    """Value of the step function of ``X`` at the torus point ``x``."""
    return X.at_cells(round_array(np.asarray(x, dtype=float), X.cfg.N))


def dediscretize_array(X, points):
    return X.at_cells(round_array(points, X.cfg.N))


def kernel(T, cfg, n, x, y):
    """``1`` if ``U_T^n`` sends the lattice state of ``x`` to that of ``y``, else ``0``."""
    return int(kernel_array(T, cfg, n, np.asarray(x, dtype=float), np.asarray(y, dtype=float)))


def kernel_array(T, cfg, n, x, y):
    image = step_array(T, round_array(x, cfg.N), cfg.N, n)
    return np.all(image == round_array(y, cfg.N), axis=-1).astype(np.int64)


def _mesh(grid, start, stop, rng):
    # one uniform sample in each mesh square
    index = np.arange(start, stop, dtype=np.int64)
    squares = np.stack([index // grid, index % grid], axis=-1)
    return (squares + rng.random(squares.shape)) / grid


def _cell_quadrature(f, N, quadrature):
    """The ``quadrature x quadrature`` sub-grid points of every cell and the values of ``f`` there."""
    offsets = ((np.arange(quadrature) + 0.5) / quadrature - 0.5) / N
    shifts = np.stack(np.meshgrid(offsets, offsets, indexing="ij"), axis=-1).reshape(-1, 2)
    centres = _all_cells(N, 0, N * N) / float(N)
    points = np.mod(centres[:, None, :] + shifts[None, :, :], 1.0).reshape(-1, 2)
    return points, f(points)


def _kernel_smeared(T, cfg, n, x, y, fy, block=256):
    # N**2 times the mean of f(y) K_n(x, y) over the sample y
    scale = float(cfg.script_N) / len(y)
    smeared = np.empty(len(x), dtype=fy.dtype)
    for start in range(0, len(x), block):
        K = kernel_array(T, cfg, n, x[start:start + block, None, :], y[None, :, :])
        smeared[start:start + block] = scale * (K @ fy)
    return smeared


def egorov_profile(T, cfg, f, j_max, grid, quadrature=1, direct=False, seed=0):
    """
    Egorov defects for ``j = 0, ..., j_max``: the L2 norm over the torus of
    ``f(T^j x)`` minus the de-discretized ``j``-step discrete evolution of the
    discretized ``f``. The norm is estimated with one uniform sample, drawn
    from ``seed``, in each square of a ``grid x grid`` mesh.

    With ``direct=True`` the discrete term is not read from the table of cell
    averages but computed from the kernel as ``N**2 int f(y) |K(x, y)|^2 dy``
    over the cell sub-grid points ``y``.
    """
    if grid < cfg.N:
        raise ValueError("grid (%d) must be at least N (%d)" % (grid, cfg.N))
    if quadrature < 1:
        raise ValueError("quadrature must be at least 1")
    if j_max < 0:
        T, j_max = T.inverse(), -j_max
    N = cfg.N
    if direct:
        y, fy = _cell_quadrature(f, N, quadrature)
    else:
        table = discretize_aw(f, cfg, quadrature)

    def chunk(start, stop, rng):
        origins = _mesh(grid, start, stop, rng)
        points = origins
        cells = round_array(points, N)
        sums = []
        for j in range(j_max + 1):
            if j:
                points = evolve_array(T, points, 1)
                cells = step_array(T, cells, N, 1)
            if direct:
                discrete = _kernel_smeared(T, cfg, j, origins, y, fy)
            else:
                discrete = table.at_cells(cells)
            sums.append(float(np.sum(np.abs(f(points) - discrete) ** 2)))
        return sums

    partials = map_chunks(chunk, grid * grid, seed=seed)
    total = grid * grid
    return [math.sqrt(math.fsum(partial[j] for partial in partials) / total) for j in range(j_max + 1)]


def egorov_defect(T, cfg, f, j, grid, quadrature=1, seed=0):
    return egorov_profile(T, cfg, f, j, grid, quadrature, seed=seed)[-1]


def prop41_defect(T, cfg, f, n, grid, quadrature=1, direct=False, seed=0):
    """
    L2 distance between the kernel-smeared ``f`` and ``f(T^n .)``. The two
    coincide with the Egorov defect; ``direct=True`` integrates ``f``
    against the kernel instead of reading the discretized table.
    """
    return egorov_profile(T, cfg, f, n, grid, quadrature, direct=direct, seed=seed)[-1]


def crossing_time(profile, threshold):
    """
    Fractional time at which ``profile`` first exceeds ``threshold``,
    interpolated linearly in ``log(defect)`` between the neighbouring steps;
    ``None`` if it never does.
    """
    for j, defect in enumerate(profile):
        if defect > threshold:
            if j == 0:
                return 0.0
            previous = profile[j - 1]
            if previous <= 0:
                return float(j)
            return (j - 1) + (math.log(threshold) - math.log(previous)) / (math.log(defect) - math.log(previous))
    return None


def egorov_sweep(T, f, sizes, j_max, grid_factor=1, threshold=0.1, quadrature=1, seed=0):
    """
    Defect rows ``(j, N, defect)`` for every ``N`` in ``sizes``, the first
    ``j`` at which the defect exceeds ``threshold`` for each ``N``, the
    interpolated crossing times and the least-squares slope of the crossing
    time against ``log N``.
    """
    S = classify(T)
    rows = []
    transitions = {}
    crossings = {}
    for N in sizes:
        cfg = LatticeConfig(N)
        profile = egorov_profile(T, cfg, f, j_max, grid_factor * N, quadrature, seed=seed)
        logger.info("egorov N=%d: %s", N, " ".join("%.4f" % value for value in profile))
        rows.extend((j, N, defect) for j, defect in enumerate(profile))
        transitions[N] = next((j for j, defect in enumerate(profile) if defect > threshold), None)
        crossings[N] = crossing_time(profile, threshold)
    fitted = [(math.log(N), t) for N, t in sorted(crossings.items()) if t is not None]
    slope = None
    if len(fitted) >= 2 and len(set(x for x, _ in fitted)) >= 2:
        slope = float(np.polyfit([x for x, _ in fitted], [t for _, t in fitted], 1)[0])
    return {
        "rows": rows,
        "transitions": transitions,
        "crossings": crossings,
        "slope": slope,
        "expected_slope": 1.0 / S.xi if S.family is Family.HYPERBOLIC else None,
    }


def verify_dynamical_localization(T, cfg, n, gamma, d0, trials, seed):
    """
    Sample ``trials`` pairs ``(x, y)``, keep those with ``d(T^n x, y) >= d0``
    and count how many still have a non-vanishing evolved kernel. When
    ``N > N_M(n)`` there must be none.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    S = classify(T)
    N = cfg.N
    threshold = localization_threshold(S, n, d0)
    premise = N > threshold
    breaking = breaking_time_estimate(S, N, gamma)
    within = n < 1 or breaking is None or n <= breaking

    def chunk(start, stop, rng):
        x = rng.random((stop - start, 2))
        y = rng.random((stop - start, 2))
        far = torus_distance_array(evolve_array(T, x, n), y) >= d0
        hits = kernel_array(T, cfg, n, x[far], y[far])
        return int(np.count_nonzero(far)), int(np.sum(hits))

    results = map_chunks(chunk, trials, seed=seed)
    tested = sum(r[0] for r in results)
    violations = sum(r[1] for r in results)
    if violations and premise:
        logger.error("%d localization violations with N=%d above N_M=%.3f", violations, N, threshold)
    elif not premise:
        logger.warning("N=%d is below N_M(%d)=%.3f; violations are allowed", N, n, threshold)
    return {
        "operation": "verify_dynamical_localization",
        "parameters": {"matrix": list(T), "N": N, "n": n, "gamma": gamma, "d0": d0, "trials": trials},
        "seed": seed,
        "family": S.family.value,
        "counts": {"tested": tested, "violations": violations},
        "threshold": threshold,
        "premise_holds": premise,
        "within_breaking_time": within,
        "scaling": scaling_function(S, n) if n >= 1 else 0.0,
    }


def verify_orbit_shadowing(T, cfg, n, trials, seed):
    """
    Follow sampled points and their lattice states for ``p = 0, ..., n``
    steps and report the worst ``d(T^p x, U_T^p(x_N) / N) * 2N / N_tilde``,
    which never exceeds 1 above the shadowing threshold ``N_tilde``.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    S = classify(T)
    N = cfg.N
    threshold = shadowing_threshold(S, n)
    if N <= threshold:
        raise ThresholdUnmet("N=%d is not above the shadowing threshold %.3f for n=%d" % (N, threshold, n))
    scale = 2.0 * N / threshold

    def chunk(start, stop, rng):
        points = rng.random((stop - start, 2))
        cells = round_array(points, N)
        worst = 0.0
        exceeding = 0
        for p in range(n + 1):
            if p:
                points = evolve_array(T, points, 1)
                cells = step_array(T, cells, N, 1)
            ratio = torus_distance_array(points, cells / float(N)) * scale
            worst = max(worst, float(np.max(ratio)))
            exceeding += int(np.count_nonzero(ratio > 1.0))
        return worst, exceeding

    results = map_chunks(chunk, trials, seed=seed)
    return {
        "operation": "verify_orbit_shadowing",
        "parameters": {"matrix": list(T), "N": N, "n": n, "trials": trials},
        "seed": seed,
        "family": S.family.value,
        "counts": {"samples": trials, "exceeding": sum(r[1] for r in results)},
        "threshold": threshold,
        "max_ratio": max(r[0] for r in results),
    }

# -*- coding:utf-8 -*-
"""
Exact rational geometry on the torus.

Intervals are half-open arcs ``[start, stop)`` of the circle ``R/Z`` with
``0 <= start < 1`` and ``start < stop <= start + 1``; a ``stop`` above 1
wraps around. Rectangles are products of two such arcs. All endpoint
arithmetic uses ``fractions.Fraction``; floats only appear when points are
tested for membership.
"""

import math
from collections import namedtuple
from fractions import Fraction

import numpy as np

from .exceptions import InvalidPartition


def as_fraction(value):
    if isinstance(value, float):
        return Fraction(value).limit_denominator(10 ** 12)
    return Fraction(value)


def _linear_overlap(a0, a1, b0, b1):
    return max(Fraction(0), min(a1, b1) - max(a0, b0))


class Interval(namedtuple("Interval", "start stop")):
    __slots__ = ()

    def __new__(cls, start, stop):
        start, stop = as_fraction(start), as_fraction(stop)
        shift = math.floor(start)
        start, stop = start - shift, stop - shift
        if not start < stop <= start + 1:
            raise InvalidPartition("[%s, %s) is not an arc of the circle" % (start, stop))
        return super(Interval, cls).__new__(cls, start, stop)

    @classmethod
    def cell(cls, index, N):
        """Arc of lattice cell ``index``: ``[(index - 1/2) / N, (index + 1/2) / N)``."""
        start = Fraction(2 * index - 1, 2 * N)
        return cls(start, start + Fraction(1, N))

    @property
    def length(self):
        return self.stop - self.start

    @property
    def is_full(self):
        return self.length == 1

    def overlap(self, other):
        """Exact length of the intersection of two arcs."""
        return sum(
            (_linear_overlap(self.start, self.stop, other.start + k, other.stop + k) for k in (-1, 0, 1)),
            Fraction(0),
        )

    def contains_array(self, values):
        return np.mod(np.asarray(values, dtype=float) - float(self.start), 1.0) < float(self.length)

    def pieces(self):
        """The arc as one or two ordinary intervals inside ``[0, 1]``."""
        if self.stop <= 1:
            return [(self.start, self.stop)]
        return [(self.start, Fraction(1)), (Fraction(0), self.stop - 1)]

    def __str__(self):
        return "%s:%s" % (self.start, self.stop)


class Rectangle(namedtuple("Rectangle", "x y")):
    __slots__ = ()

    def __new__(cls, x, y):
        if not isinstance(x, Interval):
            x = Interval(*x)
        if not isinstance(y, Interval):
            y = Interval(*y)
        return super(Rectangle, cls).__new__(cls, x, y)

    @classmethod
    def parse(cls, text):
        """``"a1:b1,a2:b2"`` with rational endpoints, e.g. ``"0:1/2,0:1"``."""
        try:
            x, y = (part.split(":") for part in text.strip().split(","))
            return cls(Interval(Fraction(x[0]), Fraction(x[1])), Interval(Fraction(y[0]), Fraction(y[1])))
        except (ValueError, IndexError, ZeroDivisionError):
            raise InvalidPartition("cannot read rectangle %r, expected 'a1:b1,a2:b2'" % text)

    @property
    def measure(self):
        return self.x.length * self.y.length

    def overlap(self, other):
        return self.x.overlap(other.x) * self.y.overlap(other.y)

    def contains_array(self, points):
        points = np.asarray(points, dtype=float)
        return self.x.contains_array(points[..., 0]) & self.y.contains_array(points[..., 1])

    def pieces(self):
        """Axis-aligned pieces inside the unit square, as ``(x0, x1, y0, y1)``."""
        return [(x0, x1, y0, y1) for x0, x1 in self.x.pieces() for y0, y1 in self.y.pieces()]

    def __str__(self):
        return "%s,%s" % (self.x, self.y)


def polygon_area(vertices):
    """Shoelace area of a simple polygon, exact for rational vertices."""
    total = Fraction(0)
    for (x0, y0), (x1, y1) in zip(vertices, vertices[1:] + vertices[:1]):
        total += x0 * y1 - x1 * y0
    return abs(total) / 2


def clip_polygon(vertices, x0, x1, y0, y1):
    """
    Sutherland-Hodgman clipping of a convex polygon against the box
    ``[x0, x1] x [y0, y1]``.
    """
    edges = (
        (lambda p: p[0] >= x0, lambda p, q: _cross(p, q, 0, x0)),
        (lambda p: p[0] <= x1, lambda p, q: _cross(p, q, 0, x1)),
        (lambda p: p[1] >= y0, lambda p, q: _cross(p, q, 1, y0)),
        (lambda p: p[1] <= y1, lambda p, q: _cross(p, q, 1, y1)),
    )
    for inside, intersect in edges:
        if not vertices:
            break
        clipped = []
        for current, previous in zip(vertices, vertices[-1:] + vertices[:-1]):
            if inside(current):
                if not inside(previous):
                    clipped.append(intersect(previous, current))
                clipped.append(current)
            elif inside(previous):
                clipped.append(intersect(previous, current))
        vertices = clipped
    return vertices


def _cross(p, q, axis, value):
    t = (value - p[axis]) / (q[axis] - p[axis])
    point = [p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])]
    point[axis] = value
    return tuple(point)

# -*- coding:utf-8 -*-
"""
Deterministic chunking and seeding for data-parallel loops.

Work is cut into chunks whose boundaries depend only on the amount of work
and ``TORAL_LATTICE_CHUNK_SIZE``. Every chunk gets its own generator spawned
from the run seed, and results come back in chunk order, so the output is
the same whatever ``TORAL_LATTICE_THREADS`` says.
"""

import logging
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .conf import get_setting

logger = logging.getLogger(__name__)


def chunk_bounds(total, chunk_size=None):
    chunk_size = chunk_size or get_setting("CHUNK_SIZE")
    return [(start, min(start + chunk_size, total)) for start in range(0, total, chunk_size)]


def spawn_generators(seed, count):
    return [np.random.default_rng(child) for child in np.random.SeedSequence(seed).spawn(count)]


def parallel_map(func, items):
    items = list(items)
    threads = get_setting("THREADS")
    if threads <= 1 or len(items) <= 1:
        return [func(item) for item in items]
    logger.debug("mapping %d chunks on %d threads", len(items), threads)
    with ThreadPoolExecutor(max_workers=threads) as executor:
        return list(executor.map(func, items))


def map_chunks(func, total, seed=None, chunk_size=None):
    """
    Call ``func(start, stop)`` (or ``func(start, stop, rng)`` when ``seed``
    is given) for every chunk of ``range(total)``; results in chunk order.
    """
    bounds = chunk_bounds(total, chunk_size)
    if seed is None:
        return parallel_map(lambda bound: func(*bound), bounds)
    generators = spawn_generators(seed, len(bounds))
    return parallel_map(lambda item: func(item[0][0], item[0][1], item[1]), zip(bounds, generators))

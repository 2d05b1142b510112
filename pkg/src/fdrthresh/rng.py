"""Replicate-keyed random streams.

Replicate ``i`` of an experiment with seed ``s`` draws from PCG64 seeded by
``SeedSequence(s, spawn_key=(i,))``, the same stream numpy hands out as the
i-th child of ``SeedSequence(s).spawn``. Uniforms are (m + 0.5) / 2^53 for
53-bit integers m, which never hit 0 or 1, and normals are their images
under the inverse normal CDF. Streams therefore do not depend on the order
in which replicates are evaluated.
"""

from __future__ import annotations

import numpy as np

from .gauss import inverse_cdf

_TWO53 = float(2 ** 53)


def replicate_generator(seed: int, replicate: int) -> np.random.Generator:
    ss = np.random.SeedSequence(int(seed), spawn_key=(int(replicate),))
    return np.random.Generator(np.random.PCG64(ss))


def open_uniforms(gen: np.random.Generator, size) -> np.ndarray:
    m = gen.integers(0, 2 ** 53, size=size, dtype=np.int64)
    return (m + 0.5) / _TWO53


def replicate_normals(seed: int, replicate: int, size) -> np.ndarray:
    """Standard normal draws for one replicate."""
    return inverse_cdf(open_uniforms(replicate_generator(seed, replicate), size))

"""Seeded sampling helpers; every randomized search is reproducible."""

from __future__ import annotations

import random
from fractions import Fraction

from .linalg import Matrix, det
from .scalars import Scalar


def rng_for(seed, tag):
    """Independent deterministic stream for (seed, tag)."""
    return random.Random(f"{seed}:{tag}")


def rand_int_matrix(rng, rows, cols, bound):
    return Matrix.from_rows(
        [[Scalar(rng.randint(-bound, bound)) for _ in range(cols)] for _ in range(rows)]
    )


def rand_int_tuple(rng, g, n, bound):
    return tuple(rand_int_matrix(rng, n, n, bound) for _ in range(g))


def rand_rational(rng, bound, den_bound=6):
    return Scalar(Fraction(rng.randint(-bound, bound), rng.randint(1, den_bound)))


def rand_invertible(rng, n, bound=3, attempts=64):
    for _ in range(attempts):
        m = rand_int_matrix(rng, n, n, bound)
        if det(m):
            return m
    raise RuntimeError("no invertible sample found (pathological bound)")

"""Seeded random instances for property suites."""

from __future__ import annotations

from fractions import Fraction
from typing import List, Optional, Sequence

import numpy as np

from .semimetric import Semimetric, SemimetricSpace


def random_masses(rng: np.random.Generator, n: int, max_weight: int = 9) -> List[Fraction]:
    w = rng.integers(1, max_weight + 1, size=n)
    total = int(w.sum())
    return [Fraction(int(x), total) for x in w]


def random_metric(rng: np.random.Generator, n: int, den: int = 12,
                  twin_prob: float = 0.15, density: float = 0.6) -> Semimetric:
    """Shortest-path closure of random integer edge lengths, scaled into [0, 1].

    Some atoms are glued to an earlier one (distance 0) so that genuine
    semimetrics, not only metrics, show up.
    """
    big = 10 * den
    w = np.full((n, n), big, dtype=np.int64)
    np.fill_diagonal(w, 0)
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < density or j == i + 1:
                w[i, j] = w[j, i] = int(rng.integers(1, den + 1))
    for k in range(n):
        w = np.minimum(w, w[:, k][:, None] + w[k, :][None, :])
    # glue twins after closure so the triangle inequality survives
    for j in range(1, n):
        if rng.random() < twin_prob:
            i = int(rng.integers(0, j))
            w[j, :] = w[i, :]
            w[:, j] = w[:, i]
            w[j, j] = 0
            w[i, j] = w[j, i] = 0
    top = max(int(w.max()), 1)
    return Semimetric(w, top)._reduced()


def random_space(rng: np.random.Generator, n: int, den: int = 12,
                 twin_prob: float = 0.15) -> SemimetricSpace:
    return SemimetricSpace(range(n), random_masses(rng, n), random_metric(rng, n, den, twin_prob))


EPS_POOL = (Fraction(1, 2), Fraction(1, 3), Fraction(1, 4), Fraction(1, 5), Fraction(1, 6),
            Fraction(1, 8), Fraction(1, 10), Fraction(2, 5), Fraction(3, 7), Fraction(3, 10),
            Fraction(2, 3), Fraction(3, 4), Fraction(5, 12), Fraction(1, 12))


def random_eps(rng: np.random.Generator, pool: Sequence[Fraction] = EPS_POOL,
               below: Optional[Fraction] = None) -> Fraction:
    choices = [e for e in pool if below is None or e < below]
    return choices[int(rng.integers(0, len(choices)))]


def random_labels(rng: np.random.Generator, n: int, m: int) -> List[int]:
    """Random block labels in ``0..m-1`` for ``n`` atoms (some may be unused)."""
    return [int(x) for x in rng.integers(0, m, size=n)]

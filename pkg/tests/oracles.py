"""Brute-force oracles, independent of the solvers they check."""

from fractions import Fraction
from itertools import combinations

import numpy as np


def _subset_sum(a, n, sign=1):
    """Zeta (sign 1) or Möbius (sign -1) transform over subsets, in place."""
    for b in range(n):
        view = a.reshape(-1, 2, 1 << b)
        view[:, 1, :] += sign * view[:, 0, :]
    return a


def min_blocks_bruteforce(space, eps):
    """Minimal block count by inclusion–exclusion over all atom subsets.

    ``cliques(T)`` counts the subsets of ``T`` of diameter < eps (empty set
    included); the number of ordered k-tuples of such subsets whose union is
    exactly ``U`` is the Möbius transform of ``cliques(T)**k``.  A set ``U``
    is coverable by k blocks iff that count is positive.  No clique
    enumeration or branch and bound is shared with the solver.
    """
    n = space.n
    eps = Fraction(eps)
    dist = [[space.rho[i, j] for j in range(n)] for i in range(n)]
    size = 1 << n
    is_block = np.zeros(size, dtype=object)
    is_block[0] = 1
    for m in range(1, size):
        low = (m & -m).bit_length() - 1
        rest = m & (m - 1)
        ok = is_block[rest] == 1 and all(dist[low][j] < eps for j in range(n) if rest >> j & 1)
        is_block[m] = 1 if ok else 0
    zeta = _subset_sum(is_block.copy(), n)
    masses = [sum((space.mass[i] for i in range(n) if m >> i & 1), Fraction(0)) for m in range(size)]
    good = [masses[m] > 1 - eps for m in range(size)]
    if good[0]:
        return 0
    for k in range(1, n + 1):
        powered = _subset_sum(zeta ** k, n, sign=-1)
        if any(good[m] and powered[m] > 0 for m in range(size)):
            return k
    raise AssertionError("unreachable: singletons always cover")


def max_separated_bruteforce(space, eps):
    n = space.n
    best = 1
    for r in range(2, n + 1):
        found = False
        for sub in combinations(range(n), r):
            if all(space.rho[a, b] >= eps for a, b in combinations(sub, 2)):
                found = True
                break
        if not found:
            break
        best = r
    return best


def min_spanning_bruteforce(space, eps):
    n = space.n
    for r in range(1, n + 1):
        for centers in combinations(range(n), r):
            if all(any(space.rho[c, j] < eps for c in centers) for j in range(n)):
                return r
    raise AssertionError

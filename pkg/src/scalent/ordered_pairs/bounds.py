"""ε-entropy bounds for mixtures of weighted binary cubes.

Under μ^σ_{S,N,k} the window splits into groups of equal coordinates and
the groups are independent fair bits, so ({0,1}^S, μ^σ_{S,N,k}, ρ^H) is a
uniform cube whose coordinates carry the group sizes as weights.  The
offset average is a finite mixture of such cubes.  For mixtures the ball
masses are computable exactly, which gives certified bounds long after the
support is too big for the general solver.

Lower bound: a block of diameter < ε lies in the open ε-ball around any of
its points, so its mass is at most ``M = Σ_r c_r V_r(ε)`` and more than
``(1 - ε) / M`` blocks are needed.

Upper bound: ``K`` random centres of open ε/2-balls leave each point of a
cube uncovered with probability ``(1 - V(ε/2))^K <= exp(-K V(ε/2))``;
choosing ``K`` per component so this is below the allowance and summing
gives a cover with exceptional mass < ε.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Mapping, Optional, Sequence, Tuple

import numpy as np

from .._rational import hi, ival, iv
from ..semimetric import EntropyResult

DP_BUDGET = 50_000_000


def _max_sum(total: int, eps: Fraction) -> int:
    """Largest integer m with m < eps * total."""
    num = eps.numerator * total
    return -(-num // eps.denominator) - 1


def ball_count(sizes: Sequence[int], eps: Fraction) -> Optional[int]:
    """Number of group subsets with total size < eps * sum(sizes).

    This is 2^d times the mass of an open ε-ball in the weighted cube.
    Returns None when the dynamic programme would exceed its budget.
    """
    total = sum(sizes)
    limit = _max_sum(total, eps)
    if limit < 0:
        return 0
    if len(sizes) * (limit + 1) > DP_BUDGET:
        return None
    counts = np.zeros(limit + 1, dtype=object)
    counts[0] = 1
    for s in sizes:
        if s <= limit:
            counts[s:] = counts[s:] + counts[: limit + 1 - s]
    return int(sum(counts))


def ball_mass(sizes: Sequence[int], eps: Fraction) -> Optional[Fraction]:
    c = ball_count(sizes, eps)
    return None if c is None else Fraction(c, 1 << len(sizes))


def ball_mass_upper(sizes: Sequence[int], eps: Fraction) -> Fraction:
    """An upper bound on the open ε-ball mass: exact when affordable,
    otherwise Hoeffding (valid for ε < 1/2) or the trivial 1."""
    m = ball_mass(sizes, eps)
    if m is not None:
        return m
    if eps < Fraction(1, 2):
        total = sum(sizes)
        gap = total * (Fraction(1, 2) - eps)
        bound = iv.exp(-2 * ival(gap * gap) / ival(sum(s * s for s in sizes)))
        return Fraction(hi(bound)).limit_denominator(1 << 60) + Fraction(1, 1 << 60)
    return Fraction(1)


def _cover_size(v: Fraction, allowance: Fraction, d: int) -> int:
    """Smallest K with exp(-K v) < allowance, capped by the 2^d points."""
    if v <= 0:
        return 1 << d
    q = iv.log(1 / ival(allowance)) / ival(v)
    k = int(math.floor(hi(q))) + 1
    return min(k, 1 << d)


def _single_cube_blocks(sizes: Sequence[int], eps: Fraction) -> Optional[int]:
    """Exact block count of one uniform weighted cube when blocks hold at
    most two words.

    A cover needs m = floor((1 - ε) 2^d) + 1 words.  If no group is lighter
    than ε|S| every block is a single word; if additionally no two groups
    together are, a block is a single word or an edge of the cube (three
    words cannot pairwise differ in one group) and the edges along the
    lightest group form a perfect matching, so ceil(m / 2) blocks suffice.
    """
    sizes = sorted(sizes)
    total, d = sum(sizes), len(sizes)
    m = int((1 - eps) * (1 << d)) + 1
    if sizes[0] >= eps * total:
        return m
    if d >= 2 and sizes[0] + sizes[1] >= eps * total:
        return -(-m // 2)
    return None


@dataclass(frozen=True)
class MixtureBounds:
    lower_blocks: int
    upper_blocks: Optional[int]
    max_block_mass: Fraction
    components: int


def mixture_bounds(law: Mapping[Tuple[int, ...], Fraction], eps: Fraction) -> MixtureBounds:
    """Bounds on the minimal block count for a mixture of weighted cubes.

    ``law`` maps a tuple of group sizes to its mixture weight.
    """
    eps = Fraction(eps)
    if not 0 < eps <= 1:
        raise ValueError("epsilon must lie in (0, 1]")
    weights = {tuple(s): Fraction(c) for s, c in law.items() if c > 0}
    if sum(weights.values()) != 1:
        raise ValueError("mixture weights must sum to 1")
    big_m = sum((c * ball_mass_upper(s, eps) for s, c in weights.items()), Fraction(0))
    lower = int((1 - eps) // big_m) + 1 if big_m > 0 else 1

    half: Optional[Dict[Tuple[int, ...], Fraction]] = {}
    for s in weights:
        m = ball_mass(s, eps / 2)
        if m is None:
            half = None
            break
        half[s] = m
    upper = None
    if half is not None:
        # spend the whole allowance on coverage failures
        upper = sum(_cover_size(half[s], eps, len(s)) for s in weights)
        # or drop the lightest components (total < ε/2) and halve the allowance
        order = sorted(weights, key=lambda s: weights[s])
        dropped, acc = set(), Fraction(0)
        for s in order:
            if acc + weights[s] < eps / 2:
                acc += weights[s]
                dropped.add(s)
        alt = sum(_cover_size(half[s], eps / 2, len(s)) for s in weights if s not in dropped)
        upper = max(min(upper, max(alt, 1)), lower)
    if len(weights) == 1:
        exact = _single_cube_blocks(next(iter(weights)), eps)
        if exact is not None:
            lower = upper = exact
    return MixtureBounds(lower, upper, big_m, len(weights))


def sizes_law(law: Mapping[Tuple[int, ...], Fraction]) -> Dict[Tuple[int, ...], Fraction]:
    """Collapse a law on group labellings to a law on sorted group sizes."""
    out: Dict[Tuple[int, ...], Fraction] = {}
    for lab, c in law.items():
        counts: Dict[int, int] = {}
        for x in lab:
            counts[x] = counts.get(x, 0) + 1
        key = tuple(sorted(counts.values(), reverse=True))
        out[key] = out.get(key, Fraction(0)) + c
    return out


def mixture_entropy(law: Mapping[Tuple[int, ...], Fraction], eps: Fraction,
                    sampled: bool = False, samples: Optional[int] = None,
                    seed: Optional[int] = None) -> EntropyResult:
    """Wrap :func:`mixture_bounds` as an :class:`EntropyResult`."""
    b = mixture_bounds(sizes_law(law), eps)
    if sampled:
        method = "sampled"
    elif b.upper_blocks == b.lower_blocks:
        method = "exact"
    else:
        method = "separated-bound"
    return EntropyResult(Fraction(eps), method, b.lower_blocks, b.upper_blocks,
                         samples=samples if sampled else None,
                         seed=seed if sampled else None,
                         note=f"cube-mixture bounds over {b.components} group patterns")

"""Inductive choice of the zero positions of σ.

Given zeros q_1..q_p, look for the next window index l (past the previous
one and past 2^{2 q_p + 2}) whose windows all have certified ε-entropy
above |S|/φ(l) for every σ starting with exactly those zeros, then put the
next zero at q_{p+1} = N + 1 with N = n(l) + 2.

The certificate is the chain used for the lower bound: the entropy at ε of
the true window law is at least the 2ε-entropy of the level-N law, which is
at least the smallest 2ε-entropy over the single-offset laws μ^σ_{S,N,k}.
Each of those is a weighted cube, bounded below exactly by ball masses.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, List, Optional, Sequence, Union

from .._rational import RationalLike, as_fraction, certified_lt, ilog2, ival, iv
from .adic import SigmaSequence
from .bounds import mixture_bounds
from .windows import RESIDUE_CAP, group_labels, group_sizes, residue_weights, window_tuple

Number = Union[int, float, Fraction]


@dataclass
class CertificateEntry:
    l: int
    level: int
    certified: bool
    worst_blocks: Optional[int]
    threshold: float
    note: str = ""


@dataclass
class DesignResult:
    sigma: SigmaSequence
    zeros: List[int]
    ns: List[int]
    complete: bool
    degenerate: bool = False
    log: List[CertificateEntry] = field(default_factory=list)


def _window_exponent(family: Sequence[Sequence[int]]) -> int:
    return max(max(S).bit_length() for S in family)


def _value(x: Number):
    # floats are exact binary numbers, so they enter the interval as is
    return iv.mpf(x) if isinstance(x, float) else ival(x)


def certify_window(sigma: SigmaSequence, S: Sequence[int], level: int,
                   epsilon: Fraction, cap: int = RESIDUE_CAP) -> int:
    """Certified lower bound on the minimal block count of the level-N
    window law at 2ε, minimized over offsets."""
    S = window_tuple(S)
    if sigma.mask(level) == 0:
        weights = {0: 1}
    else:
        _, weights = residue_weights(sigma, S, level, cap)
    worst = None
    seen = {}
    for r in weights:
        sizes = group_sizes(group_labels(sigma, S, level, r))
        if sizes not in seen:
            seen[sizes] = mixture_bounds({sizes: Fraction(1)}, 2 * epsilon).lower_blocks
        worst = seen[sizes] if worst is None else min(worst, seen[sizes])
    return worst


def design_sigma(window_families: Callable[[int], Sequence[Sequence[int]]],
                 phi: Callable[[int], Number], epsilon: RationalLike,
                 level_budget: int, zeros_wanted: int = 1,
                 l_max: int = 1 << 12, cap: int = RESIDUE_CAP) -> DesignResult:
    """Greedy realization of the zero-placement induction.

    ``window_families(l)`` returns the sets S_l^i (nonnegative integers);
    ``phi(l)`` may be ``math.inf``.  Stops after ``zeros_wanted`` zeros or
    when the next zero would not fit in ``level_budget`` bits.
    """
    eps = as_fraction(epsilon)
    if not 0 < eps < Fraction(1, 10):
        raise ValueError("epsilon must lie in (0, 1/10)")
    zeros: List[int] = []
    ns: List[int] = []
    log: List[CertificateEntry] = []
    seen_window = False
    l = 0
    while len(zeros) < zeros_wanted:
        q_p = zeros[-1] if zeros else 0
        l = max(l + 1, (1 << (2 * q_p + 2)) + 1)
        placed = False
        while l <= l_max:
            family = [window_tuple(S) for S in window_families(l)]
            if not family:
                l += 1
                continue
            seen_window = True
            level = _window_exponent(family) + 2
            if level + 1 > level_budget:
                break
            sigma = SigmaSequence.with_zeros_at(zeros, level)
            ph = phi(l)
            ok, worst, threshold = True, None, 0.0
            for S in family:
                k = certify_window(sigma, S, level, eps, cap)
                worst = k if worst is None else min(worst, k)
                need = ival(0) if ph == math.inf else ival(len(S)) / _value(ph)
                threshold = max(threshold, float(need.b))
                if certified_lt(need, ilog2(max(k, 1))) is not True:
                    ok = False
                    break
            log.append(CertificateEntry(l, level, ok, worst, threshold))
            if ok:
                ns.append(l)
                zeros.append(level + 1)
                placed = True
                break
            l += 1
        if not placed:
            if not seen_window:
                # vacuous criterion: nothing to certify, no ones are needed
                return DesignResult(SigmaSequence.zeros(level_budget), [], [], False,
                                    degenerate=True, log=log)
            return DesignResult(SigmaSequence.with_zeros_at(zeros, level_budget),
                                zeros, ns, False, log=log)
    return DesignResult(SigmaSequence.with_zeros_at(zeros, level_budget), zeros, ns, True, log=log)

"""Finite partitions of a semimetric space: Shannon entropy, joins, cut
semimetrics, and the two checks relating Shannon entropy to ε-entropy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Hashable, List, Optional, Protocol, Sequence, Tuple

import numpy as np

from ._rational import RationalLike, as_fraction, ilog2, ival, iv
from .report import InequalityReport
from .semimetric import (
    EXACT_ATOM_CAP,
    RootScale,
    Semimetric,
    SemimetricSpace,
    average_semimetrics,
    eps_entropy,
)


class Partition:
    """Blocks of atom indices covering a host space without overlap."""

    def __init__(self, host: SemimetricSpace, blocks: Sequence[Sequence[int]],
                 names: Optional[Sequence[str]] = None):
        frozen = tuple(frozenset(int(a) for a in b) for b in blocks)
        if any(not b for b in frozen):
            raise ValueError("empty block")
        seen: set = set()
        for b in frozen:
            if seen & b:
                raise ValueError("blocks overlap")
            seen |= b
        if seen != set(range(host.n)):
            raise ValueError("blocks do not exhaust the atoms")
        self.host = host
        self.blocks = frozen
        self.names = tuple(names) if names is not None else tuple(f"B{i}" for i in range(len(frozen)))
        if len(self.names) != len(frozen):
            raise ValueError("one name per block")
        self._label = np.empty(host.n, dtype=np.int64)
        for i, b in enumerate(frozen):
            for a in b:
                self._label[a] = i

    @classmethod
    def from_labels(cls, host: SemimetricSpace, labels: Sequence[Hashable]) -> "Partition":
        """Atoms sharing a label form a block (labels need not be contiguous)."""
        if len(labels) != host.n:
            raise ValueError("one label per atom")
        groups: Dict[Hashable, List[int]] = {}
        for i, lab in enumerate(labels):
            groups.setdefault(lab, []).append(i)
        keys = list(groups)
        return cls(host, [groups[k] for k in keys], [str(k) for k in keys])

    @classmethod
    def whole(cls, host: SemimetricSpace) -> "Partition":
        return cls(host, [range(host.n)], ["X"])

    @classmethod
    def singletons(cls, host: SemimetricSpace) -> "Partition":
        return cls(host, [[i] for i in range(host.n)], [str(a) for a in host.atoms])

    @property
    def labels(self) -> np.ndarray:
        return self._label.copy()

    def __len__(self) -> int:
        return len(self.blocks)

    def block_masses(self) -> List[Fraction]:
        return [sum((self.host.mass[a] for a in b), Fraction(0)) for b in self.blocks]

    def same_blocks(self, other: "Partition") -> bool:
        return set(self.blocks) == set(other.blocks)

    def __repr__(self) -> str:
        return f"Partition({len(self.blocks)} blocks on {self.host.n} atoms)"


# ---------------------------------------------------------------------------

def entropy_of_masses_interval(masses: Sequence[Fraction]):
    total = iv.mpf(0)
    for m in masses:
        if m > 0 and m != 1:
            total -= ival(m) * ilog2(m)
    return total


def entropy_of_masses_exact(masses: Sequence[Fraction]) -> Optional[Fraction]:
    """Exact value when every mass is a power of two (else None)."""
    total = Fraction(0)
    for m in masses:
        if m.numerator != 1 or m.denominator & (m.denominator - 1):
            return None
        total += m * (m.denominator.bit_length() - 1)
    return total


def shannon_entropy(p: Partition) -> float:
    """``-sum_B mass(B) log2 mass(B)``."""
    exact = entropy_of_masses_exact(p.block_masses())
    if exact is not None:
        return float(exact)
    return float(sum(-float(m) * math.log2(m) for m in p.block_masses()))


def shannon_entropy_exact(p: Partition) -> Optional[Fraction]:
    return entropy_of_masses_exact(p.block_masses())


def shannon_entropy_interval(p: Partition):
    exact = shannon_entropy_exact(p)
    if exact is not None:
        return ival(exact)
    return entropy_of_masses_interval(p.block_masses())


def refine(p: Partition, q: Partition) -> Partition:
    """Common refinement: the nonempty pairwise intersections."""
    if p.host is not q.host:
        raise ValueError("partitions live on different hosts")
    pairs = list(zip(p.labels.tolist(), q.labels.tolist()))
    return Partition.from_labels(p.host, pairs)


def join(parts: Sequence[Partition]) -> Partition:
    if not parts:
        raise ValueError("empty family")
    host = parts[0].host
    if any(q.host is not host for q in parts):
        raise ValueError("partitions live on different hosts")
    keys = list(zip(*(q.labels.tolist() for q in parts)))
    return Partition.from_labels(host, keys)


def cut_semimetric(p: Partition) -> Semimetric:
    """0 inside a block, 1 across blocks."""
    lab = p.labels
    return Semimetric((lab[:, None] != lab[None, :]).astype(np.int64), 1)


# ---------------------------------------------------------------------------
# lemma checks
# ---------------------------------------------------------------------------

def _entropy_lower(space: SemimetricSpace, eps: Fraction, cap: int):
    res = eps_entropy(space, eps, cap=cap)
    return res, ilog2(max(res.lower_blocks, 1)), res.is_exact


def _entropy_upper(space: SemimetricSpace, eps: Fraction, cap: int):
    res = eps_entropy(space, eps, cap=cap)
    return res, ilog2(max(res.upper_blocks, 1)), res.is_exact


def check_lemma_partitions_1(p: Partition, epsilon: RationalLike,
                             cap: int = EXACT_ATOM_CAP) -> InequalityReport:
    """``H_eps(X, mu, rho_xi) <= H(xi) / eps``."""
    eps = as_fraction(epsilon)
    if not 0 < eps < 1:
        raise ValueError("epsilon must lie in (0, 1)")
    space = p.host.with_semimetric(cut_semimetric(p))
    res, lhs, exact = _entropy_upper(space, eps, cap)
    rhs = shannon_entropy_interval(p) / ival(eps)
    return InequalityReport("partitions-1", lhs, rhs, exact_inputs=exact,
                            detail={"epsilon": str(eps), "blocks": len(p),
                                    "eps_entropy_blocks": res.upper_blocks})


def binary_entropy_interval(eps: Fraction):
    eps = as_fraction(eps)
    return -(ival(eps) * ilog2(eps)) - ival(1 - eps) * ilog2(1 - eps)


def check_lemma_partitions_2(parts: Sequence[Partition], epsilon: RationalLike,
                             m: Optional[int] = None,
                             cap: int = EXACT_ATOM_CAP) -> InequalityReport:
    """``H(join)/k <= H_eps(avg cut)/k + 2 eps log m - eps log eps
    - (1 - eps) log(1 - eps) + 1/k`` for a family of k partitions with at most
    m blocks each.  Logarithms are base 2.
    """
    eps = as_fraction(epsilon)
    if not 0 < eps < Fraction(1, 2):
        raise ValueError("epsilon must lie in (0, 1/2)")
    k = len(parts)
    m = max(len(q) for q in parts) if m is None else m
    if any(len(q) > m for q in parts):
        raise ValueError("a partition has more than m blocks")
    host = parts[0].host
    rho = average_semimetrics([cut_semimetric(q) for q in parts])
    res, h_eps, exact = _entropy_lower(host.with_semimetric(rho), eps, cap)
    lhs = shannon_entropy_interval(join(parts)) / k
    rhs = (h_eps / k + 2 * ival(eps) * ilog2(m) + binary_entropy_interval(eps)
           + ival(Fraction(1, k)))
    return InequalityReport("partitions-2", lhs, rhs, exact_inputs=exact,
                            detail={"epsilon": str(eps), "k": k, "m": m,
                                    "eps_entropy_blocks": res.lower_blocks})


def check_lemma_averaging(space: SemimetricSpace, rhos: Sequence[Semimetric],
                          epsilon: RationalLike,
                          cap: int = EXACT_ATOM_CAP) -> InequalityReport:
    """``H_{2 sqrt eps}(avg rho_i) <= 2 sum_i H_eps(rho_i)`` for rho_i <= 1
    with every ``H_eps(rho_i) > 0``.
    """
    eps = as_fraction(epsilon)
    if not 0 < eps < 1:
        raise ValueError("epsilon must lie in (0, 1)")
    if any(r.max_value() > 1 for r in rhos):
        raise ValueError("semimetrics must be bounded by 1")
    lowers = []
    exact = True
    for r in rhos:
        res, h, ex = _entropy_lower(space.with_semimetric(r), eps, cap)
        if res.lower_blocks <= 1 and res.is_exact:
            raise ValueError("hypothesis H_eps(rho_i) > 0 fails")
        lowers.append(h)
        exact &= ex
    avg = space.with_semimetric(average_semimetrics(rhos))
    radius = RootScale(2, eps).simplified()
    if not _le_one(radius):
        # every distance is at most 1 < radius and mass 1 > radius: one block
        lhs, ex_l, blocks = iv.mpf(0), True, 1
    else:
        res, lhs, ex_l = _entropy_upper(avg, radius, cap)
        blocks = res.upper_blocks
    exact &= ex_l
    rhs = 2 * sum(lowers, iv.mpf(0))
    return InequalityReport("averaging", lhs, rhs, exact_inputs=exact,
                            detail={"epsilon": str(eps), "k": len(rhos),
                                    "avg_blocks": blocks})


def _le_one(scale) -> bool:
    if isinstance(scale, RootScale):
        return scale.square() <= 1
    return scale <= 1


# ---------------------------------------------------------------------------
# entropy rate tables
# ---------------------------------------------------------------------------

class JoinedSystem(Protocol):
    max_n: int

    def joined_masses(self, n: int) -> List[Fraction]:
        """Block masses of the join of the first n pulled-back partitions."""


class FiniteSystem:
    """A map on the atoms of a finite space together with a partition."""

    def __init__(self, partition: Partition, step: Sequence[int], max_n: int = 64):
        self.partition = partition
        self.step = [int(s) for s in step]
        if sorted(self.step) != list(range(partition.host.n)):
            raise ValueError("step must permute the atoms")
        self.max_n = max_n

    def joined_masses(self, n: int) -> List[Fraction]:
        host = self.partition.host
        lab = self.partition.labels
        keys = []
        for x in range(host.n):
            word, y = [], x
            for _ in range(n):
                word.append(int(lab[y]))
                y = self.step[y]
            keys.append(tuple(word))
        return Partition.from_labels(host, keys).block_masses()


@dataclass
class RateRow:
    n: int
    entropy: float
    ratio: float
    exact: Optional[Fraction]


def entropy_rate_estimate(system: JoinedSystem, ns: Sequence[int]) -> Tuple[List[RateRow], str]:
    """Table of ``H(zeta_n) / n`` plus a monotone-trend label.

    Only finite-n ratios are produced; no limit is claimed.
    """
    rows = []
    for n in ns:
        if n < 1:
            raise ValueError("window sizes must be positive")
        if n > system.max_n:
            raise ValueError(f"truncation insufficient for n={n} (max {system.max_n})")
        masses = system.joined_masses(n)
        exact = entropy_of_masses_exact(masses)
        h = float(exact) if exact is not None else float(
            sum(-float(m) * math.log2(m) for m in masses))
        rows.append(RateRow(n, h, h / n, exact))
    ratios = [r.ratio for r in rows]
    if all(a >= b for a, b in zip(ratios, ratios[1:])):
        trend = "nonincreasing"
    elif all(a <= b for a, b in zip(ratios, ratios[1:])):
        trend = "nondecreasing"
    else:
        trend = "mixed"
    return rows, trend

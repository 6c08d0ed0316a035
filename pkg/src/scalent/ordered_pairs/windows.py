"""Window distributions μ^σ_{S,N} and μ^σ_{S,N,k} on {0,1}^S.

A window ``S`` (nonnegative integers, ``max(S) < 2^n``) read at offset ``k``
of a uniform vertex of V_N^σ gives the word ``(v_{k+j})_{j in S}``.  The
exact law averages over ``k < 2^N - 2^n``, the orbit range that never
overflows the level-N truncation.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from .._rational import fraction_str
from ..semimetric import SemimetricSpace, hamming_semimetric
from .adic import SigmaSequence

RESIDUE_CAP = 1 << 14
WORD_CAP = 1 << 16


class ResidueCapExceeded(ValueError):
    """The k-average has too many distinct residues for exact mode."""


def window_tuple(S: Iterable[int]) -> Tuple[int, ...]:
    w = tuple(sorted(set(int(j) for j in S)))
    if not w:
        raise ValueError("window must be nonempty")
    if w[0] < 0:
        raise ValueError("window positions must be nonnegative")
    return w


def window_exponent(S: Sequence[int]) -> int:
    """Smallest n with max(S) < 2^n."""
    return max(S).bit_length()


def offset_range(S: Sequence[int], level: int, relax: bool = False) -> int:
    """Number of admissible offsets ``2^N - 2^n``.

    With ``relax`` a window that leaves no headroom is read at the single
    offset 0, provided it fits in the word at all.
    """
    n = window_exponent(S)
    count = (1 << level) - (1 << n)
    if count > 0:
        return count
    if relax and max(S) < 1 << level:
        return 1
    raise ValueError(f"window needs level > {n} (got N={level}); use headroom N >= n + 2")


# ---------------------------------------------------------------------------
# constraint recursion
# ---------------------------------------------------------------------------

def constraint_probability(sigma: SigmaSequence, level: int, constraints: Mapping[int, int]) -> Fraction:
    """ν_N^σ(v : v_p = b for every (p, b) in constraints).

    σ_n = 1 splits the constraints between the two independent halves and
    multiplies; σ_n = 0 folds the upper half onto the lower one (a conflict
    gives 0); level 0 is a fair bit.
    """
    sigma.require(level)
    for p in constraints:
        if not 0 <= p < 1 << level:
            raise ValueError(f"position {p} outside the level-{level} word")
    return _prob(sigma, level, dict(constraints))


def _prob(sigma: SigmaSequence, n: int, q: Dict[int, int]) -> Fraction:
    if not q:
        return Fraction(1)
    if n == 0:
        return Fraction(1, 2)
    half = 1 << (n - 1)
    if sigma[n] == 1:
        low = {p: b for p, b in q.items() if p < half}
        high = {p - half: b for p, b in q.items() if p >= half}
        out = _prob(sigma, n - 1, low)
        return out * _prob(sigma, n - 1, high) if out else out
    folded: Dict[int, int] = {}
    for p, b in q.items():
        r = p & (half - 1)
        if folded.setdefault(r, b) != b:
            return Fraction(0)
    return _prob(sigma, n - 1, folded)


# ---------------------------------------------------------------------------
# group structure
# ---------------------------------------------------------------------------

def group_labels(sigma: SigmaSequence, S: Sequence[int], level: int, k: int) -> Tuple[int, ...]:
    """Canonical labels of the groups of equal coordinates at offset k.

    Coordinates j, j' of the window coincide almost surely iff positions
    k+j and k+j' share their masked key; distinct groups are independent
    fair bits.  Labels are numbered by first appearance.
    """
    mask = sigma.mask(level)
    seen: Dict[int, int] = {}
    return tuple(seen.setdefault((k + j) & mask, len(seen)) for j in S)


def group_sizes(labels: Sequence[int]) -> Tuple[int, ...]:
    """Sorted multiset of group sizes (what the Hamming geometry sees)."""
    return tuple(sorted(Counter(labels).values(), reverse=True))


def residue_weights(sigma: SigmaSequence, S: Sequence[int], level: int,
                    cap: int = RESIDUE_CAP, relax: bool = False) -> Tuple[int, Dict[int, int]]:
    """Offsets k < 2^N - 2^n reduced modulo 2^q, q the last zero of σ.

    Offsets congruent mod 2^q give identical summands, so the k-average
    equals a weighted average over residues.  Returns (modulus, weights).
    """
    count = offset_range(S, level, relax)
    q = sigma.last_zero(level)
    modulus = 1 << q
    if modulus > cap:
        raise ResidueCapExceeded(f"2^{q} residues exceed the cap {cap}; use sampled mode")
    full, rest = divmod(count, modulus)
    weights = {}
    for r in range(min(modulus, count)):
        weights[r] = full + (1 if r < rest else 0)
    return modulus, weights


def pattern_law_exact(sigma: SigmaSequence, S: Sequence[int], level: int,
                      cap: int = RESIDUE_CAP, relax: bool = False) -> Dict[Tuple[int, ...], Fraction]:
    """Exact law of the group labelling over the offset average."""
    S = window_tuple(S)
    if sigma.mask(level) & ((1 << level) - 1) == 0:
        # no ones below N: every offset is one group
        offset_range(S, level, relax)
        return {(0,) * len(S): Fraction(1)}
    modulus, weights = residue_weights(sigma, S, level, cap, relax)
    total = sum(weights.values())
    law: Dict[Tuple[int, ...], int] = {}
    for r, w in weights.items():
        lab = group_labels(sigma, S, level, r)
        law[lab] = law.get(lab, 0) + w
    return {lab: Fraction(c, total) for lab, c in law.items()}


def pattern_law_sampled(sigma: SigmaSequence, S: Sequence[int], level: int,
                        samples: int, seed: int, relax: bool = False) -> Dict[Tuple[int, ...], Fraction]:
    """Empirical law of the group labelling over uniformly drawn offsets."""
    if samples < 1:
        raise ValueError("samples must be positive")
    S = window_tuple(S)
    count = offset_range(S, level, relax)
    rng = np.random.default_rng(seed)
    ks = rng.integers(0, count, size=samples)
    law: Counter = Counter()
    mask = sigma.mask(level)
    for k, c in zip(*np.unique(ks, return_counts=True)):
        k = int(k)
        seen: Dict[int, int] = {}
        lab = tuple(seen.setdefault((k + j) & mask, len(seen)) for j in S)
        law[lab] += int(c)
    return {lab: Fraction(c, samples) for lab, c in sorted(law.items())}


# ---------------------------------------------------------------------------
# distributions
# ---------------------------------------------------------------------------

@dataclass
class WindowDistribution:
    """A law on {0,1}^S; words are strings listing the bits in window order."""

    window: Tuple[int, ...]
    level: int
    probabilities: Dict[str, Fraction]
    mode: str = "exact"
    samples: Optional[int] = None
    seed: Optional[int] = None
    sigma: Optional[str] = None

    def __post_init__(self):
        if self.mode not in ("exact", "sampled"):
            raise ValueError("mode must be exact or sampled")
        if self.mode == "sampled" and (self.samples is None or self.seed is None):
            raise ValueError("sampled distributions carry their sample count and seed")
        if sum(self.probabilities.values(), Fraction(0)) != 1:
            raise ValueError("probabilities must sum to 1")

    @property
    def support(self) -> List[str]:
        return sorted(w for w, p in self.probabilities.items() if p > 0)

    def __getitem__(self, word: str) -> Fraction:
        return self.probabilities.get(word, Fraction(0))

    def total_variation(self, other: "WindowDistribution") -> Fraction:
        keys = set(self.probabilities) | set(other.probabilities)
        return sum((abs(self[w] - other[w]) for w in keys), Fraction(0)) / 2

    def is_dyadic(self) -> bool:
        return all(p.denominator & (p.denominator - 1) == 0 for p in self.probabilities.values())

    def to_json(self) -> str:
        body = {w: fraction_str(self.probabilities[w]) for w in sorted(self.probabilities)}
        head = {"window": list(self.window), "level": self.level, "mode": self.mode,
                "sigma": self.sigma, "samples": self.samples, "seed": self.seed}
        return json.dumps({**head, "probabilities": body}, indent=1, sort_keys=False)


def _words_for_labels(labels: Sequence[int]) -> List[str]:
    g = max(labels) + 1
    if g > 20:
        raise ValueError("too many independent groups to list the support")
    out = []
    for code in range(1 << g):
        out.append("".join(str((code >> lab) & 1) for lab in labels))
    return out


def distribution_from_law(law: Mapping[Tuple[int, ...], Fraction]) -> Dict[str, Fraction]:
    probs: Dict[str, Fraction] = {}
    for lab, c in law.items():
        words = _words_for_labels(lab)
        share = c / len(words)
        for w in words:
            probs[w] = probs.get(w, Fraction(0)) + share
    return probs


def window_distribution_k(sigma: SigmaSequence, S: Iterable[int], level: int, k: int) -> WindowDistribution:
    """μ^σ_{S,N,k} by the constraint recursion, one word at a time."""
    S = window_tuple(S)
    if k < 0 or k + S[-1] >= 1 << level:
        raise ValueError("offset places the window outside the word")
    probs = {}
    for code in range(1 << len(S)):
        word = "".join(str((code >> i) & 1) for i in range(len(S)))
        p = constraint_probability(sigma, level, {k + j: int(b) for j, b in zip(S, word)})
        if p:
            probs[word] = p
    return WindowDistribution(S, level, probs, sigma=str(sigma))


def window_distribution_exact(sigma: SigmaSequence, S: Iterable[int], level: int,
                              cap: int = RESIDUE_CAP, relax: bool = False,
                              method: str = "auto") -> WindowDistribution:
    """μ^σ_{S,N}: the offset average of μ^σ_{S,N,k}.

    ``method="recursion"`` evaluates every word of {0,1}^S with the
    constraint recursion at each residue; ``"groups"`` reads the same law off
    the group structure.  ``"auto"`` uses the recursion for |S| <= 8.
    """
    S = window_tuple(S)
    if method == "auto":
        method = "recursion" if len(S) <= 8 else "groups"
    if method == "groups":
        law = pattern_law_exact(sigma, S, level, cap, relax)
        return WindowDistribution(S, level, distribution_from_law(law), sigma=str(sigma))
    if method != "recursion":
        raise ValueError(f"unknown method {method!r}")
    if sigma.mask(level) & ((1 << level) - 1) == 0:
        offset_range(S, level, relax)
        weights, total = {0: 1}, 1
    else:
        _, weights = residue_weights(sigma, S, level, cap, relax)
        total = sum(weights.values())
    probs: Dict[str, Fraction] = {}
    for r, w in weights.items():
        for word, p in window_distribution_k(sigma, S, level, r).probabilities.items():
            probs[word] = probs.get(word, Fraction(0)) + p * Fraction(w, total)
    return WindowDistribution(S, level, probs, sigma=str(sigma))


def window_distribution_sampled(sigma: SigmaSequence, S: Iterable[int], level: int,
                                samples: int, rng_seed: int, relax: bool = False) -> WindowDistribution:
    """Empirical law of (v_{k+j})_{j in S} with v uniform on V_N^σ and k
    uniform on the admissible offsets.

    Each draw assigns fresh fair bits to the masked keys the window touches,
    which is exactly what a lazily sampled vertex would return there.
    """
    if samples < 1:
        raise ValueError("samples must be positive")
    S = window_tuple(S)
    count = offset_range(S, level, relax)
    rng = np.random.default_rng(rng_seed)
    mask = sigma.mask(level)
    ks = rng.integers(0, count, size=samples)
    pos = np.asarray(S, dtype=np.int64)
    tally: Counter = Counter()
    for k in ks:
        _, inv = np.unique((int(k) + pos) & mask, return_inverse=True)
        bits = rng.integers(0, 2, size=int(inv.max()) + 1)
        tally["".join(map(str, bits[inv]))] += 1
    probs = {w: Fraction(c, samples) for w, c in sorted(tally.items())}
    return WindowDistribution(S, level, probs, mode="sampled", samples=samples,
                              seed=rng_seed, sigma=str(sigma))


def averaged_window_space(dist: WindowDistribution) -> SemimetricSpace:
    """Support words with their masses and the normalized Hamming distance."""
    words = dist.support
    if not words:
        raise ValueError("empty support")
    if len(words) > WORD_CAP:
        raise ValueError(f"support of {len(words)} words exceeds {WORD_CAP}")
    rows = [[int(c) for c in w] for w in words]
    return SemimetricSpace(words, [dist.probabilities[w] for w in words], hamming_semimetric(rows))


class AdicWindowSystem:
    """The current-bit partition joined over n adic steps.

    The block of a path in the join of T^{-j} ξ (j < n) is its window word on
    [0, n), so the block masses are the exact window law.  Plugs into
    :func:`scalent.partitions.entropy_rate_estimate`.
    """

    def __init__(self, sigma: SigmaSequence, level: int):
        sigma.require(level)
        self.sigma = sigma
        self.level = level
        self.max_n = 1 << (level - 1)

    def joined_masses(self, n: int) -> List[Fraction]:
        law = pattern_law_exact(self.sigma, range(n), self.level)
        probs = distribution_from_law(law)
        return [probs[w] for w in sorted(probs)]

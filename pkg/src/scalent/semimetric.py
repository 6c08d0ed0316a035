"""Finite semimetric measure spaces and their ε-entropy.

A space is a finite list of atoms with exact rational masses summing to one
and an exact rational semimetric.  Distances are stored as an integer
numerator matrix over a single common denominator, so every threshold test
``dist < eps`` is an exact integer comparison.

The ε-entropy is ``log2 k`` for the least ``k`` such that the atoms split as
``X_0, X_1, ..., X_k`` with ``mass(X_0) < eps`` and ``diam(X_i) < eps``.
Blocks of diameter below ``eps`` are exactly the cliques of the graph
joining atoms at distance ``< eps``, so the exact solver enumerates maximal
cliques (Bron–Kerbosch with pivoting) and runs a branch-and-bound search
for the fewest cliques covering mass ``> 1 - eps``.
"""

from __future__ import annotations

import heapq
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from ._rational import (
    RationalLike,
    as_fraction,
    common_denominator,
    fraction_str,
    ilog2,
    int_array,
)

log = logging.getLogger(__name__)

EXACT_ATOM_CAP = 24


class ExactCapExceeded(ValueError):
    """Raised when the exact solver is asked for more atoms than its cap."""

    def __init__(self, n_atoms: int, cap: int):
        super().__init__(
            f"{n_atoms} atoms exceed the exact-mode cap of {cap}; "
            "use eps_entropy_bounds"
        )
        self.n_atoms = n_atoms
        self.cap = cap


class SearchBudgetExceeded(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# semimetrics
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Semimetric:
    """Exact semimetric ``num / den`` on atoms ``0..n-1``."""

    num: np.ndarray
    den: int = 1

    def __post_init__(self):
        num = self.num
        if not isinstance(num, np.ndarray):
            num = int_array(num)
            object.__setattr__(self, "num", num)
        if num.ndim != 2 or num.shape[0] != num.shape[1]:
            raise ValueError("semimetric must be a square matrix")
        if self.den <= 0:
            raise ValueError("denominator must be positive")
        if np.any(num < 0):
            raise ValueError("semimetric values must be nonnegative")
        if np.any(np.diagonal(num) != 0):
            raise ValueError("semimetric must vanish on the diagonal")
        if np.any(num != num.T):
            raise ValueError("semimetric must be symmetric")
        num.setflags(write=False)

    @classmethod
    def from_fractions(cls, matrix) -> "Semimetric":
        rows = [[as_fraction(v) for v in row] for row in matrix]
        den = common_denominator(v for row in rows for v in row)
        num = int_array([[v.numerator * (den // v.denominator) for v in row] for row in rows])
        return cls(num, den)._reduced()

    @classmethod
    def zero(cls, n: int) -> "Semimetric":
        return cls(np.zeros((n, n), dtype=np.int64), 1)

    @classmethod
    def discrete(cls, n: int) -> "Semimetric":
        return cls(1 - np.eye(n, dtype=np.int64), 1)

    def _reduced(self) -> "Semimetric":
        g = self.den
        for v in self.num.flat:
            g = math.gcd(g, int(v))
            if g == 1:
                return self
        if g in (0, 1):
            return self
        return Semimetric(int_array(self.num // g), self.den // g)

    @property
    def n(self) -> int:
        return self.num.shape[0]

    def __getitem__(self, ij) -> Fraction:
        i, j = ij
        return Fraction(int(self.num[i, j]), self.den)

    def fractions(self) -> np.ndarray:
        out = np.empty(self.num.shape, dtype=object)
        for idx, v in np.ndenumerate(self.num):
            out[idx] = Fraction(int(v), self.den)
        return out

    def below(self, eps: Fraction) -> np.ndarray:
        """Boolean matrix of ``dist < eps`` (exact)."""
        eps = as_fraction(eps)
        lhs = _safe_mul(self.num, eps.denominator)
        rhs = eps.numerator * self.den
        if lhs.dtype != object and abs(rhs) >= 2**62:
            lhs = lhs.astype(object)
        return np.asarray(lhs < rhs, dtype=bool)

    def at_least(self, eps: Fraction) -> np.ndarray:
        return ~self.below(eps)

    def max_value(self) -> Fraction:
        if self.n == 0:
            return Fraction(0)
        return Fraction(int(self.num.max()), self.den)

    def satisfies_triangle(self) -> bool:
        """O(n^3) check of ``d(a,c) <= d(a,b) + d(b,c)``."""
        d = self.num
        for b in range(self.n):
            if np.any(d > d[:, b][:, None] + d[b, :][None, :]):
                return False
        return True

    def __eq__(self, other) -> bool:
        if not isinstance(other, Semimetric):
            return NotImplemented
        if other.n != self.n:
            return False
        return bool(np.all(self.num * other.den == other.num * self.den))

    def __le__(self, other: "Semimetric") -> bool:
        return bool(np.all(self.num * other.den <= other.num * self.den))

    def __hash__(self):
        return hash((self.n, self.den, self.num.tobytes() if self.num.dtype != object else tuple(self.num.flat)))

    def __repr__(self) -> str:
        return f"Semimetric(n={self.n}, den={self.den})"


def _safe_mul(a: np.ndarray, c: int) -> np.ndarray:
    if a.dtype == object:
        return a * c
    if a.size and int(np.abs(a).max()) * abs(c) >= 2**62:
        return a.astype(object) * c
    return a * c


# ---------------------------------------------------------------------------
# spaces
# ---------------------------------------------------------------------------

class SemimetricSpace:
    """Finite atom set with exact masses and an exact semimetric.

    Parameters
    ----------
    atoms : sequence of hashable ids
    mass : sequence of positive rationals summing to exactly one
    rho : :class:`Semimetric` or a square matrix of rationals
    check_triangle : run the O(n^3) triangle validator
    """

    def __init__(self, atoms: Sequence, mass: Sequence[RationalLike], rho,
                 check_triangle: bool = False):
        atoms = tuple(atoms)
        mass = tuple(as_fraction(m) for m in mass)
        if not isinstance(rho, Semimetric):
            rho = Semimetric.from_fractions(rho)
        if len(set(atoms)) != len(atoms):
            raise ValueError("duplicate atom ids")
        if not (len(atoms) == len(mass) == rho.n):
            raise ValueError("atoms, masses and semimetric disagree in size")
        if not atoms:
            raise ValueError("a space needs at least one atom")
        if any(m <= 0 for m in mass):
            raise ValueError("atom masses must be positive")
        if sum(mass) != 1:
            raise ValueError(f"masses sum to {sum(mass)}, not 1")
        if check_triangle and not rho.satisfies_triangle():
            raise ValueError("semimetric violates the triangle inequality")
        self.atoms = atoms
        self.mass = mass
        self.rho = rho
        self._index = {a: i for i, a in enumerate(atoms)}

    @property
    def n(self) -> int:
        return len(self.atoms)

    def __len__(self) -> int:
        return len(self.atoms)

    def index(self, atom) -> int:
        return self._index[atom]

    def dist(self, a, b) -> Fraction:
        return self.rho[self._index[a], self._index[b]]

    def with_semimetric(self, rho: Semimetric) -> "SemimetricSpace":
        return SemimetricSpace(self.atoms, self.mass, rho)

    def integer_masses(self) -> Tuple[List[int], int]:
        """Masses scaled to integers over their common denominator."""
        den = common_denominator(self.mass)
        return [int(v * den) for v in self.mass], den

    def diameter(self, idx: Iterable[int]) -> Fraction:
        idx = list(idx)
        if len(idx) <= 1:
            return Fraction(0)
        sub = self.rho.num[np.ix_(idx, idx)]
        return Fraction(int(sub.max()), self.rho.den)

    def __repr__(self) -> str:
        return f"SemimetricSpace(n={self.n})"

    @classmethod
    def uniform(cls, atoms: Sequence, rho) -> "SemimetricSpace":
        atoms = tuple(atoms)
        return cls(atoms, [Fraction(1, len(atoms))] * len(atoms), rho)


def hamming_semimetric(words: Sequence[Sequence[int]], normalized: bool = True,
                       weights: Optional[Sequence[int]] = None) -> Semimetric:
    """(Weighted) Hamming distance between equal-length words.

    With ``normalized`` the count is divided by the total weight, giving the
    averaged cut semimetric of the coordinate partitions.
    """
    arr = np.asarray(words, dtype=np.int64)
    if arr.ndim != 2:
        raise ValueError("words must be a 2-d array")
    length = arr.shape[1]
    w = np.ones(length, dtype=np.int64) if weights is None else np.asarray(weights, dtype=np.int64)
    diff = (arr[:, None, :] != arr[None, :, :]).astype(np.int64)
    num = diff @ w
    den = int(w.sum()) if normalized else 1
    return Semimetric(num, max(den, 1))._reduced()


def hamming_cube(d: int, normalized: bool = True) -> SemimetricSpace:
    """Uniform measure on {0,1}^d with the (normalized) Hamming distance."""
    words = [[(x >> (d - 1 - b)) & 1 for b in range(d)] for x in range(2**d)]
    ids = ["".join(map(str, w)) for w in words]
    return SemimetricSpace.uniform(ids, hamming_semimetric(words, normalized))


# ---------------------------------------------------------------------------
# combinators
# ---------------------------------------------------------------------------

def _check_common(rhos: Sequence[Semimetric]) -> int:
    if not rhos:
        raise ValueError("need at least one semimetric")
    n = rhos[0].n
    for r in rhos:
        if r.n != n:
            raise ValueError("semimetrics live on mismatched atom sets")
    return n


def average_semimetrics(rhos: Sequence[Semimetric],
                        weights: Optional[Sequence[RationalLike]] = None) -> Semimetric:
    """Weighted average ``(sum s_i rho_i) / (sum s_i)``, exact."""
    _check_common(rhos)
    ws = [Fraction(1)] * len(rhos) if weights is None else [as_fraction(w) for w in weights]
    if len(ws) != len(rhos):
        raise ValueError("one weight per semimetric")
    if any(w <= 0 for w in ws):
        raise ValueError("weights must be positive")
    coeffs = [w / r.den for w, r in zip(ws, rhos)]
    den = common_denominator(coeffs)
    total = sum(ws)
    acc = np.zeros(rhos[0].num.shape, dtype=object)
    for c, r in zip(coeffs, rhos):
        acc = acc + r.num.astype(object) * int(c * den)
    out_den = total * den
    # acc / (total * den) with total rational
    num = acc * out_den.denominator
    return Semimetric(int_array(num), out_den.numerator)._reduced()


def max_semimetric(rhos: Sequence[Semimetric]) -> Semimetric:
    """Pointwise maximum."""
    _check_common(rhos)
    den = common_denominator(Fraction(1, r.den) for r in rhos)
    scaled = [r.num.astype(object) * (den // r.den) for r in rhos]
    out = scaled[0]
    for s in scaled[1:]:
        out = np.maximum(out, s)
    return Semimetric(int_array(out), den)._reduced()


def pullback_semimetric(space: SemimetricSpace, mapping, rho: Optional[Semimetric] = None) -> Semimetric:
    """``(x, y) -> rho(map x, map y)``.

    ``mapping`` is a dict from atom ids to atom ids, a callable on ids, or a
    sequence of target indices.
    """
    rho = space.rho if rho is None else rho
    if rho.n != space.n:
        raise ValueError("semimetric does not live on this space")
    if callable(mapping):
        target = [space.index(mapping(a)) for a in space.atoms]
    elif isinstance(mapping, Mapping):
        target = [space.index(mapping[a]) for a in space.atoms]
    else:
        target = [int(t) for t in mapping]
    if len(target) != space.n:
        raise ValueError("map must be total on atoms")
    idx = np.asarray(target, dtype=np.int64)
    return Semimetric(int_array(rho.num[np.ix_(idx, idx)]), rho.den)


# ---------------------------------------------------------------------------
# scales
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RootScale:
    """The scale ``coef * sqrt(radicand)``, compared exactly.

    Entropies at ``2 sqrt(eps)`` are needed for the averaging bound; all
    comparisons reduce to rational ones because distances and masses are
    nonnegative.
    """

    coef: Fraction
    radicand: Fraction

    def __post_init__(self):
        object.__setattr__(self, "coef", as_fraction(self.coef))
        object.__setattr__(self, "radicand", as_fraction(self.radicand))
        if self.coef <= 0 or self.radicand <= 0:
            raise ValueError("scale must be positive")

    def square(self) -> Fraction:
        return self.coef**2 * self.radicand

    def simplified(self):
        """A plain Fraction when the value is rational."""
        sq = self.square()
        rn, rd = math.isqrt(sq.numerator), math.isqrt(sq.denominator)
        if rn * rn == sq.numerator and rd * rd == sq.denominator:
            return Fraction(rn, rd)
        return self

    def below(self, rho: Semimetric) -> np.ndarray:
        sq = self.square()
        d2 = rho.num.astype(object) ** 2 * sq.denominator
        return np.asarray(d2 < sq.numerator * rho.den**2, dtype=bool)

    def ceil_times(self, den: int) -> int:
        # value irrational here, so ceil(v * den) = floor(v * den) + 1
        x = self.square() * den * den
        return math.isqrt(x.numerator // x.denominator) + 1

    def interval(self):
        from ._rational import isqrt_ival, ival
        return ival(self.coef) * isqrt_ival(self.radicand)

    def __str__(self) -> str:
        return f"{fraction_str(self.coef)}*sqrt({fraction_str(self.radicand)})"


# ---------------------------------------------------------------------------
# results
# ---------------------------------------------------------------------------

METHODS = ("exact", "greedy", "separated-bound", "sampled")


@dataclass(frozen=True)
class EntropyResult:
    """ε-entropy value or two-sided bounds, counted in blocks.

    ``lower_blocks`` and ``upper_blocks`` bracket the minimal block count;
    ``upper_blocks is None`` means no finite upper bound was produced.  The
    base-2 logarithms are derived, with ``log2 max(k, 1)`` so that the
    degenerate ``k = 0`` case reports 0.
    """

    epsilon: "Fraction | RootScale"
    method: str
    lower_blocks: int
    upper_blocks: Optional[int]
    exceptional_mass: Optional[Fraction] = None
    cover: Optional[Tuple[Tuple[int, ...], ...]] = None
    samples: Optional[int] = None
    seed: Optional[int] = None
    note: str = ""

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}")
        if self.upper_blocks is not None and self.lower_blocks > self.upper_blocks:
            raise ValueError("lower bound exceeds upper bound")
        if self.method == "exact" and self.lower_blocks != self.upper_blocks:
            raise ValueError("exact results need matching bounds")

    @property
    def is_exact(self) -> bool:
        return self.upper_blocks is not None and self.lower_blocks == self.upper_blocks

    @property
    def blocks(self) -> Optional[int]:
        return self.lower_blocks if self.is_exact else None

    @property
    def lower_log2(self) -> float:
        return math.log2(max(self.lower_blocks, 1))

    @property
    def upper_log2(self) -> float:
        return math.inf if self.upper_blocks is None else math.log2(max(self.upper_blocks, 1))

    @property
    def value_log2(self) -> Optional[float]:
        return self.lower_log2 if self.is_exact else None

    def lower_interval(self):
        return ilog2(max(self.lower_blocks, 1))

    def upper_interval(self):
        if self.upper_blocks is None:
            return None
        return ilog2(max(self.upper_blocks, 1))

    def to_json(self) -> dict:
        out = {
            "epsilon": str(self.epsilon) if isinstance(self.epsilon, RootScale) else fraction_str(self.epsilon),
            "method": self.method,
            "lower_blocks": self.lower_blocks,
            "upper_blocks": self.upper_blocks,
            "lower_log2": self.lower_log2,
            "upper_log2": None if self.upper_blocks is None else self.upper_log2,
        }
        if self.is_exact:
            out["blocks"] = self.lower_blocks
            out["value_log2"] = self.lower_log2
        if self.exceptional_mass is not None:
            out["exceptional_mass"] = fraction_str(self.exceptional_mass)
        if self.samples is not None:
            out["samples"] = self.samples
            out["seed"] = self.seed
        if self.note:
            out["note"] = self.note
        return out


@dataclass
class ScalingProfile:
    """Φ(n, ε) samples on a grid."""

    values: Dict[Tuple[int, Fraction], EntropyResult] = field(default_factory=dict)
    equipment: str = ""
    semimetric: str = ""

    def __setitem__(self, key, result: EntropyResult):
        n, eps = key
        self.values[(int(n), as_fraction(eps))] = result

    def __getitem__(self, key) -> EntropyResult:
        n, eps = key
        return self.values[(int(n), as_fraction(eps))]

    def monotone_in_eps(self) -> bool:
        """For fixed n, lower/upper bounds never increase as ε grows."""
        by_n: Dict[int, List[Tuple[Fraction, EntropyResult]]] = {}
        for (n, eps), r in self.values.items():
            by_n.setdefault(n, []).append((eps, r))
        for rows in by_n.values():
            rows.sort(key=lambda t: t[0])
            for (_, small), (_, big) in zip(rows, rows[1:]):
                # certified: the coarser ε cannot need more blocks than the finer
                if small.upper_blocks is not None and big.lower_blocks > small.upper_blocks:
                    return False
        return True


# ---------------------------------------------------------------------------
# graph machinery on int bitsets
# ---------------------------------------------------------------------------

def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _adjacency(close: np.ndarray) -> List[int]:
    n = close.shape[0]
    adj = []
    for i in range(n):
        row = close[i].copy()
        row[i] = False
        m = 0
        for j in np.flatnonzero(row):
            m |= 1 << int(j)
        adj.append(m)
    return adj


class _Weigher:
    """Fast sum of integer atom weights over a bitmask (8-bit chunk tables)."""

    def __init__(self, weights: Sequence[int]):
        self.n = len(weights)
        self.tables = []
        for start in range(0, self.n, 8):
            chunk = weights[start:start + 8]
            table = [0] * 256
            for byte in range(1, 256):
                low = byte & -byte
                b = low.bit_length() - 1
                table[byte] = table[byte ^ low] + (chunk[b] if b < len(chunk) else 0)
            self.tables.append(table)

    def __call__(self, mask: int) -> int:
        total = 0
        for table in self.tables:
            if not mask:
                break
            total += table[mask & 0xFF]
            mask >>= 8
        return total


def maximal_cliques(adj: Sequence[int], nodes: Optional[int] = None,
                    budget: Optional[int] = None) -> List[int]:
    """Bron–Kerbosch with pivoting; returns cliques as bitmasks."""
    n = len(adj)
    if nodes is None:
        nodes = (1 << n) - 1
    out: List[int] = []

    def bk(r: int, p: int, x: int):
        if not p and not x:
            out.append(r)
            if budget is not None and len(out) > budget:
                raise SearchBudgetExceeded("maximal clique budget exhausted")
            return
        px = p | x
        u = max(_bits(px), key=lambda v: (p & adj[v]).bit_count())
        cand = p & ~adj[u]
        while cand:
            low = cand & -cand
            v = low.bit_length() - 1
            bk(r | low, p & adj[v], x & adj[v])
            p &= ~low
            x |= low
            cand ^= low

    # degeneracy-free outer loop over components keeps recursion shallow
    bk(0, nodes, 0)
    return out


def _twin_classes(rho: Semimetric) -> List[List[int]]:
    """Atoms with identical distance rows (hence at distance 0)."""
    groups: Dict[bytes, List[int]] = {}
    num = rho.num
    for i in range(rho.n):
        key = num[i].tobytes() if num.dtype != object else repr(tuple(num[i]))
        groups.setdefault(key, []).append(i)
    # rows i and j identical implies d(i,j) = d(i,i) = 0
    return list(groups.values())


@dataclass
class _CoverProblem:
    """Covering instance after twin collapse, in integer units."""

    weights: List[int]      # per node
    members: List[List[int]]  # original atoms per node
    adj: List[int]
    threshold: int          # uncovered weight must be < threshold
    total: int

    @classmethod
    def build(cls, space: SemimetricSpace, eps) -> "_CoverProblem":
        classes = _twin_classes(space.rho)
        ints, den = space.integer_masses()
        threshold = _ceil_scaled(eps, den)
        reps = [c[0] for c in classes]
        close = _dist_below(space.rho, eps)[np.ix_(reps, reps)]
        weights = [sum(ints[i] for i in c) for c in classes]
        return cls(weights, classes, _adjacency(close), threshold, den)


def _greedy_cover(prob: _CoverProblem, cliques: Optional[List[int]], weigh: _Weigher) -> List[int]:
    n = len(prob.weights)
    uncovered = (1 << n) - 1
    cover: List[int] = []
    # lazy greedy: a clique's residual weight can only shrink
    heap = [(-weigh(c), i) for i, c in enumerate(cliques)] if cliques is not None else []
    heapq.heapify(heap)
    while weigh(uncovered) >= prob.threshold:
        if cliques is not None:
            while True:
                neg, i = heapq.heappop(heap)
                fresh = weigh(cliques[i] & uncovered)
                if not heap or fresh >= -heap[0][0]:
                    break
                heapq.heappush(heap, (-fresh, i))
            block = cliques[i] & uncovered
        else:
            a = max(_bits(uncovered), key=lambda v: prob.weights[v])
            block = 1 << a
            cand = prob.adj[a] & uncovered
            while cand:
                v = max(_bits(cand), key=lambda u: prob.weights[u])
                block |= 1 << v
                cand &= prob.adj[v] & ~(1 << v)
        cover.append(block)
        uncovered &= ~block
    return cover


def _clique_lower_bound(prob: _CoverProblem, clique_weights: List[int]) -> int:
    """Fewest blocks whose summed weight could exceed total - threshold."""
    need = prob.total - prob.threshold  # covered weight must be > need
    acc = 0
    for j, w in enumerate(sorted(clique_weights, reverse=True), start=1):
        acc += w
        if acc > need:
            return j
    return len(clique_weights) + (0 if acc > need else 1)


def _separated_lower_bound(prob: _CoverProblem) -> Tuple[int, List[int]]:
    """Greedy heaviest-first set of nodes pairwise at distance >= eps.

    Each block holds at most one of them and the ones left out must weigh
    less than the threshold.
    """
    order = sorted(range(len(prob.weights)), key=lambda v: -prob.weights[v])
    chosen: List[int] = []
    blocked = 0
    for v in order:
        if not (blocked >> v) & 1:
            chosen.append(v)
            blocked |= prob.adj[v] | (1 << v)
    dropped_weight = 0
    dropped = 0
    for v in sorted(chosen, key=lambda u: prob.weights[u]):
        if dropped_weight + prob.weights[v] < prob.threshold:
            dropped_weight += prob.weights[v]
            dropped += 1
        else:
            break
    return len(chosen) - dropped, chosen


def _feasible(prob: _CoverProblem, k: int, cliques: List[int], weigh: _Weigher,
              by_atom: List[List[int]], node_budget: Optional[int]) -> Optional[List[int]]:
    """Branch and bound: can k cliques leave uncovered weight < threshold?"""
    n = len(prob.weights)
    failed: Dict[Tuple[int, int], int] = {}
    nodes = [0]

    def rec(undecided: int, excluded: int, r: int) -> Optional[List[int]]:
        nodes[0] += 1
        if node_budget is not None and nodes[0] > node_budget:
            raise SearchBudgetExceeded("cover search budget exhausted")
        if excluded >= prob.threshold:
            return None
        rest = weigh(undecided)
        if excluded + rest < prob.threshold:
            return []
        if r == 0:
            return None
        key = (undecided, r)
        if key in failed and excluded >= failed[key]:
            return None
        gains = sorted((weigh(c & undecided) for c in cliques), reverse=True)[:r]
        if excluded + rest - sum(gains) >= prob.threshold:
            failed[key] = min(failed.get(key, excluded), excluded)
            return None
        a = max(_bits(undecided), key=lambda v: prob.weights[v])
        seen = set()
        options = []
        for c in by_atom[a]:
            blk = c & undecided
            if blk not in seen:
                seen.add(blk)
                options.append(blk)
        # drop options dominated by a superset option
        options.sort(key=lambda b: -b.bit_count())
        kept: List[int] = []
        for b in options:
            if not any(b & o == b for o in kept):
                kept.append(b)
        kept.sort(key=lambda b: -weigh(b))
        for blk in kept:
            sub = rec(undecided & ~blk, excluded, r - 1)
            if sub is not None:
                return [blk] + sub
        sub = rec(undecided & ~(1 << a), excluded + prob.weights[a], r)
        if sub is not None:
            return sub
        prev = failed.get(key)
        failed[key] = excluded if prev is None else min(prev, excluded)
        return None

    return rec((1 << n) - 1, 0, k)


def _expand(prob: _CoverProblem, cover: List[int]) -> Tuple[Tuple[int, ...], ...]:
    out = []
    for blk in cover:
        atoms: List[int] = []
        for v in _bits(blk):
            atoms.extend(prob.members[v])
        out.append(tuple(sorted(atoms)))
    return tuple(out)


def _exceptional(space: SemimetricSpace, cover) -> Fraction:
    covered = set(a for blk in cover for a in blk)
    return sum((m for i, m in enumerate(space.mass) if i not in covered), Fraction(0))


def _validate_eps(eps):
    if isinstance(eps, RootScale):
        return eps.simplified()
    eps = as_fraction(eps)
    if eps <= 0:
        raise ValueError("epsilon must be positive")
    return eps


def _dist_below(rho: Semimetric, eps) -> np.ndarray:
    if isinstance(eps, RootScale):
        return eps.below(rho)
    return rho.below(eps)


def _ceil_scaled(eps, den: int) -> int:
    """Least integer >= eps * den, so ``m / den < eps`` iff ``m < result``."""
    if isinstance(eps, RootScale):
        return eps.ceil_times(den)
    return -((-eps.numerator * den) // eps.denominator)


def _scale_le_one(eps) -> bool:
    if isinstance(eps, RootScale):
        return eps.coef**2 * eps.radicand <= 1
    return eps <= 1


# ---------------------------------------------------------------------------
# public entropy operations
# ---------------------------------------------------------------------------

def eps_entropy_exact(space: SemimetricSpace, epsilon: RationalLike,
                      cap: int = EXACT_ATOM_CAP,
                      node_budget: Optional[int] = None) -> EntropyResult:
    """Exact ε-entropy (as the minimal block count) of a finite space.

    Raises :class:`ExactCapExceeded` above ``cap`` atoms (counted after
    merging twin atoms, i.e. atoms with identical distance rows).
    """
    eps = _validate_eps(epsilon)
    if not _scale_le_one(eps):
        raise ValueError("epsilon must lie in (0, 1]")
    prob = _CoverProblem.build(space, eps)
    n = len(prob.weights)
    if n > cap:
        raise ExactCapExceeded(n, cap)
    if prob.total < prob.threshold:
        return EntropyResult(eps, "exact", 0, 0, exceptional_mass=Fraction(1), cover=())
    weigh = _Weigher(prob.weights)
    cliques = maximal_cliques(prob.adj)
    by_atom: List[List[int]] = [[] for _ in range(n)]
    for c in cliques:
        for v in _bits(c):
            by_atom[v].append(c)
    greedy = _greedy_cover(prob, cliques, weigh)
    lower = max(
        _clique_lower_bound(prob, [weigh(c) for c in cliques]),
        _separated_lower_bound(prob)[0],
    )
    best = greedy
    for k in range(lower, len(greedy)):
        found = _feasible(prob, k, cliques, weigh, by_atom, node_budget)
        if found is not None:
            best = found
            break
    cover = _expand(prob, best)
    return EntropyResult(eps, "exact", len(best), len(best),
                         exceptional_mass=_exceptional(space, cover), cover=cover)


def eps_entropy_bounds(space: SemimetricSpace, epsilon: RationalLike,
                       clique_budget: int = 200_000) -> EntropyResult:
    """Certified lower bound and greedy upper bound on the block count.

    The lower bound is the larger of a separated-set count (each block holds
    at most one point of an ε-separated set, and the points dropped into the
    exceptional set must weigh less than ε) and a clique-mass count (the
    blocks must carry mass > 1 - ε).  The upper bound is a greedy cover.
    """
    eps = _validate_eps(epsilon)
    prob = _CoverProblem.build(space, eps)
    n = len(prob.weights)
    if prob.total < prob.threshold:
        return EntropyResult(eps, "exact", 0, 0, exceptional_mass=Fraction(1), cover=())
    weigh = _Weigher(prob.weights)
    try:
        cliques: Optional[List[int]] = maximal_cliques(prob.adj, budget=clique_budget)
        clique_weights = [weigh(c) for c in cliques]
    except SearchBudgetExceeded:
        cliques = None
        clique_weights = [weigh(prob.adj[v] | (1 << v)) for v in range(n)]
    greedy = _greedy_cover(prob, cliques, weigh)
    lower = max(_clique_lower_bound(prob, clique_weights), _separated_lower_bound(prob)[0])
    lower = min(lower, len(greedy))
    cover = _expand(prob, greedy)
    method = "exact" if lower == len(greedy) else "greedy"
    return EntropyResult(eps, method, lower, len(greedy),
                         exceptional_mass=_exceptional(space, cover), cover=cover)


def eps_entropy(space: SemimetricSpace, epsilon: RationalLike,
                cap: int = EXACT_ATOM_CAP) -> EntropyResult:
    """Exact when the twin-collapsed space fits under ``cap``, else bounds."""
    try:
        return eps_entropy_exact(space, epsilon, cap=cap)
    except ExactCapExceeded:
        return eps_entropy_bounds(space, epsilon)


def max_block_mass(space: SemimetricSpace, epsilon) -> Fraction:
    """Largest mass of an atom set with diameter < ε (a max-weight clique)."""
    eps = _validate_eps(epsilon)
    prob = _CoverProblem.build(space, eps)
    weigh = _Weigher(prob.weights)
    best = max(weigh(c) for c in maximal_cliques(prob.adj))
    return Fraction(best, prob.total)


# ---------------------------------------------------------------------------
# spanning / separated counts
# ---------------------------------------------------------------------------

def _far_adjacency(space: SemimetricSpace, eps: Fraction) -> List[int]:
    far = space.rho.at_least(eps)
    np.fill_diagonal(far, False)
    return _adjacency(far)


def _max_clique_size(adj: List[int]) -> int:
    best = [0]

    def expand(size: int, p: int):
        if not p:
            best[0] = max(best[0], size)
            return
        if size + p.bit_count() <= best[0]:
            return
        while p:
            if size + p.bit_count() <= best[0]:
                return
            low = p & -p
            v = low.bit_length() - 1
            expand(size + 1, p & adj[v])
            p ^= low

    expand(0, (1 << len(adj)) - 1)
    return best[0]


def sep_count(space: SemimetricSpace, epsilon: RationalLike, cap: int = EXACT_ATOM_CAP) -> int:
    """Size of a largest set of atoms pairwise at distance >= ε.

    Exact up to ``cap`` atoms; beyond it a greedy separated set is returned
    (a lower bound) and a warning is logged.
    """
    eps = _validate_eps(epsilon)
    adj = _far_adjacency(space, eps)
    if space.n <= cap:
        return _max_clique_size(adj)
    log.warning("sep_count: %d atoms above cap %d, greedy value", space.n, cap)
    chosen, blocked = 0, 0
    for v in range(space.n):
        if not (blocked >> v) & 1:
            chosen += 1
            blocked |= ~adj[v] | (1 << v)
    return chosen


def spn_count(space: SemimetricSpace, epsilon: RationalLike, cap: int = EXACT_ATOM_CAP) -> int:
    """Fewest open ε-balls centred at atoms that cover every atom."""
    eps = _validate_eps(epsilon)
    close = space.rho.below(eps)
    n = space.n
    balls = []
    for i in range(n):
        m = 0
        for j in np.flatnonzero(close[i]):
            m |= 1 << int(j)
        balls.append(m)
    full = (1 << n) - 1

    def greedy() -> int:
        left, count = full, 0
        while left:
            left &= ~max(balls, key=lambda b: (b & left).bit_count())
            count += 1
        return count

    upper = greedy()
    if n > cap:
        log.warning("spn_count: %d atoms above cap %d, greedy value", n, cap)
        return upper
    covering = [[b for b in balls if (b >> v) & 1] for v in range(n)]
    best = [upper]

    def rec(left: int, used: int):
        if not left:
            best[0] = min(best[0], used)
            return
        largest = max((b & left).bit_count() for b in balls)
        if used + -(-left.bit_count() // largest) >= best[0]:
            return
        v = min(_bits(left), key=lambda u: len(covering[u]))
        for b in sorted(covering[v], key=lambda b: -(b & left).bit_count()):
            rec(left & ~b, used + 1)

    rec(full, 0)
    return best[0]

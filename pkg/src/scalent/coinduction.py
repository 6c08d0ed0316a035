"""Finite pieces of the action of ℤ² coinduced from an adic ℤ-action.

H = ℤ × {0} sits inside G = ℤ² with coset representatives g_i = (0, i).
Then g g_i = g_{i+b} (a, 0) for g = (a, b), and the coinduced action moves
coordinate i - b to slot i while applying T^a to it.  Points keep the
coordinates of a contiguous coset range; requests that would need a
coordinate outside the system's range fail instead of wrapping.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from ._rational import RationalLike, as_fraction, ilog2, ival, iv, log2_int_exact
from .amenable import GroupWindow, coset_slices
from .ordered_pairs.adic import (AdicPathPrefix, OverflowSignal, SigmaSequence,
                                 adic_power, sample_vertex)
from .ordered_pairs.windows import averaged_window_space, window_distribution_exact
from .report import InequalityReport
from .semimetric import (EXACT_ATOM_CAP, Semimetric, SemimetricSpace, _twin_classes,
                         eps_entropy, eps_entropy_exact, max_block_mass)

Element = Tuple[int, int]


class CosetBoundaryError(ValueError):
    """The request needs a coordinate outside the truncated coset range."""


def cocycle(i: int, g: Element) -> Tuple[int, int]:
    """(k(i, g), h(i, g)) with g g_i = g_k h."""
    a, b = g
    return i + b, a


def inverse(g: Element) -> Element:
    return (-g[0], -g[1])


def compose(g2: Element, g1: Element) -> Element:
    return (g2[0] + g1[0], g2[1] + g1[1])


@dataclass(frozen=True)
class CoinducedPoint:
    """Coordinates x_lo .. x_hi of a point of the product space."""

    lo: int
    coords: Tuple[AdicPathPrefix, ...]

    @property
    def hi(self) -> int:
        return self.lo + len(self.coords) - 1

    def __getitem__(self, i: int) -> AdicPathPrefix:
        if not self.lo <= i <= self.hi:
            raise CosetBoundaryError(f"coordinate {i} outside [{self.lo}, {self.hi}]")
        return self.coords[i - self.lo]

    def indices(self) -> range:
        return range(self.lo, self.hi + 1)


@dataclass
class CoinducedSystem:
    sigma: SigmaSequence
    level: int
    radius: int  # coset range I = [-M, M]

    def __post_init__(self):
        self.sigma.require(self.level)
        if self.radius < 0:
            raise ValueError("coset radius must be nonnegative")

    def in_range(self, i: int) -> bool:
        return -self.radius <= i <= self.radius

    def sample_point(self, seed: int, lo: Optional[int] = None, hi: Optional[int] = None,
                     positions: Optional[Sequence[int]] = None) -> CoinducedPoint:
        """Independent coordinates: a uniform vertex and a uniform position each."""
        lo = -self.radius if lo is None else lo
        hi = self.radius if hi is None else hi
        if not (self.in_range(lo) and self.in_range(hi)) or lo > hi:
            raise CosetBoundaryError("requested coordinates leave the coset range")
        rng = np.random.default_rng(seed)
        coords = []
        for j, i in enumerate(range(lo, hi + 1)):
            v = sample_vertex(self.sigma, self.level, int(rng.integers(0, 2**62)))
            pos = int(rng.integers(0, 1 << self.level)) if positions is None else positions[j]
            coords.append(AdicPathPrefix.at(v, pos))
        return CoinducedPoint(lo, tuple(coords))

    def cocycle(self, i: int, g: Element) -> Tuple[int, int]:
        k, h = cocycle(i, g)
        if not (self.in_range(i) and self.in_range(k)):
            raise CosetBoundaryError(f"cocycle leaves the coset range: {i} -> {k}")
        return k, h


def coinduced_apply(sys: CoinducedSystem, g: Element,
                    x: CoinducedPoint) -> Union[CoinducedPoint, OverflowSignal]:
    """g(x)_i = h(i, g^{-1})^{-1} (x_{k(i, g^{-1})}), i.e. T^a x_{i-b}."""
    a, b = g
    lo, hi = x.lo + b, x.hi + b
    if not (sys.in_range(lo) and sys.in_range(hi)):
        raise CosetBoundaryError(f"shift by {b} leaves the coset range")
    out = []
    for i in range(lo, hi + 1):
        k, h = cocycle(i, inverse(g))
        y = adic_power(x[k], -h)
        if isinstance(y, OverflowSignal):
            return y
        out.append(y)
    return CoinducedPoint(lo, tuple(out))


def current_bit_distance(x: AdicPathPrefix, y: AdicPathPrefix) -> int:
    """ρ̃: the cut semimetric of the level-0 vertex."""
    return int(x.current_bit() != y.current_bit())


# ---------------------------------------------------------------------------
# averaged semimetric and its decomposition
# ---------------------------------------------------------------------------

def averaged_distance(sys: CoinducedSystem, W: GroupWindow,
                      x: CoinducedPoint, y: CoinducedPoint) -> Fraction:
    """G_av^W ρ(x, y) = (1/|W|) Σ_{w in W} ρ̃((wx)_0, (wy)_0), evaluated by
    moving the whole points."""
    total = 0
    for w in W.sorted_points():
        wx, wy = coinduced_apply(sys, w, x), coinduced_apply(sys, w, y)
        if isinstance(wx, OverflowSignal) or isinstance(wy, OverflowSignal):
            raise OverflowError(f"orbit of {w} leaves the truncation")
        total += current_bit_distance(wx[0], wy[0])
    return Fraction(total, len(W))


def slice_distance(S: Sequence[int], xi: AdicPathPrefix, yi: AdicPathPrefix) -> Fraction:
    """ρ_i(x_i, y_i): Hamming distance of the orbit windows of one coordinate,
    read off the terminal words (no adic iteration)."""
    diff = 0
    for s in S:
        px, py = xi.o + s, yi.o + s
        if not (0 <= px < 1 << xi.level and 0 <= py < 1 << yi.level):
            raise OverflowError("window leaves the truncation")
        diff += int(xi.vertex.bit(px) != yi.vertex.bit(py))
    return Fraction(diff, len(S))


def weighted_slice_distance(W: GroupWindow, x: CoinducedPoint, y: CoinducedPoint) -> Fraction:
    """(Σ_i |S^i| ρ_i(x_i, y_i)) / (Σ_i |S^i|)."""
    dec = coset_slices(W, 0)
    num, den = Fraction(0), 0
    for (i,), S in dec.nonempty().items():
        num += len(S) * slice_distance(sorted(S), x[i], y[i])
        den += len(S)
    return num / den


# ---------------------------------------------------------------------------
# weighted families and the product estimate
# ---------------------------------------------------------------------------

class HypothesisError(ValueError):
    """φ^{-1} s_i < H_{4ε}(X_i) < s_i fails for some component."""


def _log2_gt(k: int, x: Fraction) -> bool:
    """log2 k > x, exactly."""
    if x < 0:
        return True
    return k ** x.denominator > 2 ** x.numerator


def _log2_lt(k: int, x: Fraction) -> bool:
    if x <= 0:
        return False
    return k ** x.denominator < 2 ** x.numerator


@dataclass
class WeightedFamily:
    """Components (X_i, μ_i, ρ_i) with weights s_i, a ratio φ > 1 and ε."""

    spaces: List[SemimetricSpace]
    weights: List[Fraction]
    phi: Fraction
    epsilon: Fraction
    strict: bool = True
    cap: int = EXACT_ATOM_CAP
    blocks_4eps: List[Optional[int]] = field(init=False)
    hypothesis: List[Optional[bool]] = field(init=False)

    def __post_init__(self):
        self.weights = [as_fraction(s) for s in self.weights]
        self.phi = as_fraction(self.phi)
        self.epsilon = as_fraction(self.epsilon)
        if len(self.spaces) != len(self.weights) or not self.spaces:
            raise ValueError("one positive weight per component")
        if any(s <= 0 for s in self.weights):
            raise ValueError("weights must be positive")
        if self.phi <= 1:
            raise ValueError("phi must exceed 1")
        if not 0 < self.epsilon < Fraction(1, 4):
            raise ValueError("epsilon must lie in (0, 1/4)")
        self.blocks_4eps, self.hypothesis = [], []
        for sp, s in zip(self.spaces, self.weights):
            r = eps_entropy(sp, 4 * self.epsilon, cap=self.cap)
            if r.is_exact:
                k = max(r.blocks, 1)
                ok = _log2_gt(k, s / self.phi) and _log2_lt(k, s)
                self.blocks_4eps.append(k)
                self.hypothesis.append(ok)
            else:
                self.blocks_4eps.append(None)
                self.hypothesis.append(None)
        if self.strict and not all(h is True for h in self.hypothesis):
            raise HypothesisError(f"hypothesis fails or is undecided: {self.hypothesis}")

    @property
    def k(self) -> int:
        return len(self.spaces)

    def product_size(self) -> int:
        out = 1
        for sp in self.spaces:
            out *= sp.n
        return out


def lemma_estimate_bound(f: WeightedFamily):
    """(1/φ) ε³ Σ_i H_{4ε}(X_i) - k - 1.

    A Fraction when every block count is a power of two, else an interval.
    """
    if any(b is None for b in f.blocks_4eps):
        raise ValueError("component entropies are not exact")
    exact = [log2_int_exact(b) for b in f.blocks_4eps]
    scale = f.epsilon ** 3 / f.phi
    if all(e is not None for e in exact):
        return scale * sum(exact) - f.k - 1
    total = sum((ilog2(b) for b in f.blocks_4eps), iv.mpf(0))
    return ival(scale) * total - (f.k + 1)


def product_space(f: WeightedFamily) -> SemimetricSpace:
    """∏ (X_i, μ_i) with ρ = Σ s_i ρ_i / Σ s_i."""
    total = sum(f.weights)
    sizes = [sp.n for sp in f.spaces]
    atoms = list(product(*[range(n) for n in sizes]))
    mass = []
    for a in atoms:
        m = Fraction(1)
        for sp, i in zip(f.spaces, a):
            m *= sp.mass[i]
        mass.append(m)
    n = len(atoms)
    idx = np.array(atoms, dtype=np.int64).reshape(n, len(sizes))
    coefs = [s / total for s in f.weights]
    den = 1
    for c, sp in zip(coefs, f.spaces):
        den = math.lcm(den, c.denominator * sp.rho.den)
    num = np.zeros((n, n), dtype=object)
    for col, (c, sp) in enumerate(zip(coefs, f.spaces)):
        mult = c.numerator * den // (c.denominator * sp.rho.den)
        sel = idx[:, col]
        num = num + mult * sp.rho.num[np.ix_(sel, sel)].astype(object)
    return SemimetricSpace(atoms, mass, Semimetric(num, den)._reduced())


def _twin_masses(sp: SemimetricSpace) -> List[Fraction]:
    return [sum((sp.mass[i] for i in c), Fraction(0)) for c in _twin_classes(sp.rho)]


def _min_positive(sp: SemimetricSpace) -> Optional[Fraction]:
    vals = [sp.rho[i, j] for i in range(sp.n) for j in range(i + 1, sp.n) if sp.rho[i, j] > 0]
    return min(vals) if vals else None


def verify_lemma_estimate(f: WeightedFamily, mode: str = "exact",
                          cap: int = 64) -> InequalityReport:
    """Check H_{ε⁴}(∏ X_i, ρ) >= (1/φ) ε³ Σ H_{4ε}(X_i) - k - 1.

    ``exact`` runs the general solver on the product (at most ``cap``
    atoms).  ``sampled`` never builds the product semimetric: if every
    coordinate is discrete at its scale the blocks are products of twin
    classes and the count is read off the sorted product masses; otherwise
    a block of ρ-diameter < δ projects to ρ_i-diameter < δ Σs / s_i, which
    bounds its mass by ∏ M_i and gives a certified lower bound.
    """
    delta = f.epsilon ** 4
    rhs = lemma_estimate_bound(f)
    if mode == "exact":
        if f.product_size() > cap:
            raise ValueError(f"product has {f.product_size()} atoms, cap is {cap}")
        res = eps_entropy_exact(product_space(f), delta, cap=cap)
        lhs, how, exact = ilog2(max(res.blocks, 1)), "exact", True
        blocks = res.blocks
    elif mode == "sampled":
        total = sum(f.weights)
        radii = [delta * total / s for s in f.weights]
        discrete = all((_min_positive(sp) is None or r <= _min_positive(sp))
                       for sp, r in zip(f.spaces, radii))
        if discrete:
            blocks = _discrete_product_blocks(f, delta)
            lhs, how, exact = ilog2(max(blocks, 1)), "exact-discrete", True
        else:
            bound = Fraction(1)
            for sp, r in zip(f.spaces, radii):
                bound *= max_block_mass(sp, r)
            blocks = int((1 - delta) // bound) + 1
            lhs, how, exact = ilog2(max(blocks, 1)), "product-mass-bound", False
    else:
        raise ValueError("mode must be exact or sampled")
    rhs_i = ival(rhs) if isinstance(rhs, Fraction) else rhs
    return InequalityReport("estimate", rhs_i, lhs, exact_inputs=exact,
                            detail={"k": f.k, "epsilon": str(f.epsilon), "phi": str(f.phi),
                                    "method": how, "blocks": blocks})


def _discrete_product_blocks(f: WeightedFamily, delta: Fraction) -> int:
    """Minimal number of product twin classes carrying mass > 1 - δ."""
    dens, parts = 1, []
    for sp in f.spaces:
        ms = _twin_masses(sp)
        d = 1
        for m in ms:
            d = math.lcm(d, m.denominator)
        parts.append([int(m * d) for m in ms])
        dens *= d
    masses = np.array([1], dtype=object)
    for p in parts:
        masses = np.multiply.outer(masses, np.array(p, dtype=object)).ravel()
    masses = sorted(masses.tolist(), reverse=True)
    need = (1 - delta) * dens
    acc = 0
    for count, m in enumerate(masses, start=1):
        acc += m
        if acc > need:
            return count
    return len(masses)


# ---------------------------------------------------------------------------
# decomposition of a window into weighted components
# ---------------------------------------------------------------------------

def decompose_average(sys: CoinducedSystem, W: GroupWindow, epsilon: RationalLike,
                      phi: RationalLike, cap: int = EXACT_ATOM_CAP) -> Tuple[WeightedFamily, Dict[int, Tuple[int, ...]]]:
    """Components ρ_i = slice-averaged window spaces with weights |S^i|.

    Each nonempty slice is translated to start at 0 (T preserves μ^σ, so
    the triple does not change).  Returns the family (hypothesis recorded,
    not enforced) and the translated slices by coset index.
    """
    if W.dim != 2:
        raise ValueError("windows must live in Z^2")
    dec = coset_slices(W, 0)
    spaces, weights, slices = [], [], {}
    for (i,), S in dec.nonempty().items():
        if not sys.in_range(i):
            raise CosetBoundaryError(f"slice at coset {i} outside the coset range")
        lo = min(S)
        shifted = tuple(sorted(s - lo for s in S))
        dist = window_distribution_exact(sys.sigma, shifted, sys.level)
        spaces.append(averaged_window_space(dist))
        weights.append(Fraction(len(S)))
        slices[i] = shifted
    fam = WeightedFamily(spaces, weights, as_fraction(phi), as_fraction(epsilon),
                         strict=False, cap=cap)
    return fam, slices

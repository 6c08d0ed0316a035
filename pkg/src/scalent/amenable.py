"""Finite windows in ℤ and ℤ^d, invariance defects, coset slices and the
Følner reduction into slice-wise invariant windows.

Points are integer tuples; ℤ itself is dimension 1.  The subgroup H = ℤ is
a coordinate axis and the coset representatives are g_i = (0, i) (the
other coordinates), so the point ``s g_i^{-1}`` is ``(s, -i)`` and the slice
of a window over coset i is ``{s : (s, -i) in W}``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import count, product
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple

from ._rational import RationalLike, as_fraction, certified_lt, isqrt_ival, ival, iv

Point = Tuple[int, ...]
CosetIndex = Tuple[int, ...]


@dataclass(frozen=True)
class GroupWindow:
    """A nonempty finite subset of ℤ^d (d <= 3)."""

    dim: int
    points: FrozenSet[Point]

    def __post_init__(self):
        if not 1 <= self.dim <= 3:
            raise ValueError("only Z, Z^2 and Z^3 are supported")
        if not self.points:
            raise ValueError("window must be nonempty")
        if any(len(p) != self.dim for p in self.points):
            raise ValueError("point dimension mismatch")

    @classmethod
    def from_points(cls, points: Iterable[Sequence[int]], dim: Optional[int] = None) -> "GroupWindow":
        pts = [tuple(int(c) for c in p) for p in points]
        if len(set(pts)) != len(pts):
            raise ValueError("duplicate points")
        if dim is None:
            if not pts:
                raise ValueError("window must be nonempty")
            dim = len(pts[0])
        return cls(dim, frozenset(pts))

    @classmethod
    def from_integers(cls, values: Iterable[int]) -> "GroupWindow":
        return cls.from_points([(int(v),) for v in values], 1)

    def __len__(self) -> int:
        return len(self.points)

    def __contains__(self, p) -> bool:
        return tuple(p) in self.points

    def translate(self, g: Sequence[int]) -> "GroupWindow":
        g = _element(g, self.dim)
        return GroupWindow(self.dim, frozenset(tuple(a + b for a, b in zip(p, g)) for p in self.points))

    def sorted_points(self) -> List[Point]:
        return sorted(self.points)

    def to_text(self) -> str:
        return "".join(" ".join(map(str, p)) + "\n" for p in self.sorted_points())


def _element(g, dim: int) -> Point:
    if isinstance(g, int):
        g = (g,)
    g = tuple(int(c) for c in g)
    if len(g) != dim:
        raise ValueError(f"group element {g} is not in Z^{dim}")
    return g


def folner_window(dim: int, n: int, shape: str = "box") -> GroupWindow:
    """[0, n) for ℤ and [0, n)^d for ℤ^d (``interval`` is the d = 1 box)."""
    if n < 1:
        raise ValueError("n must be positive")
    if shape not in ("interval", "box"):
        raise ValueError("shape must be interval or box")
    if shape == "interval" and dim != 1:
        raise ValueError("intervals live in Z")
    return GroupWindow(dim, frozenset(product(range(n), repeat=dim)))


def invariance_defect(w: GroupWindow, g) -> Fraction:
    """|gW Δ W| / |W|."""
    moved = w.translate(g).points
    return Fraction(len(moved ^ w.points), len(w))


def _int_set(S: Iterable[int]) -> FrozenSet[int]:
    s = frozenset(int(x) for x in S)
    if not s:
        raise ValueError("set must be nonempty")
    return s


def shift_defect(S: Iterable[int], h: int = 1) -> int:
    """|(S + h) Δ S|."""
    s = _int_set(S)
    return len({x + h for x in s} ^ s)


def is_eps_invariant(S: Iterable[int], eps: RationalLike) -> bool:
    """|(S+1) Δ S| < ε|S| (strict)."""
    s = _int_set(S)
    return shift_defect(s, 1) < as_fraction(eps) * len(s)


def interval_count(S: Iterable[int]) -> int:
    s = sorted(_int_set(S))
    return 1 + sum(1 for a, b in zip(s, s[1:]) if b != a + 1)


# ---------------------------------------------------------------------------
# coset slices
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CosetDecomposition:
    """W = ∪_i S^i g_i^{-1} with H the chosen axis."""

    dim: int
    axis: int
    slices: Dict[CosetIndex, FrozenSet[int]]

    def representative(self, i: CosetIndex) -> Point:
        """g_i: zero on the axis, i on the other coordinates."""
        rest = list(i)
        return tuple(0 if c == self.axis else rest.pop(0) for c in range(self.dim))

    def point(self, s: int, i: CosetIndex) -> Point:
        """The point s g_i^{-1}."""
        g = self.representative(i)
        return tuple(s if c == self.axis else -g[c] for c in range(self.dim))

    def reconstruct(self) -> GroupWindow:
        pts = [self.point(s, i) for i, sl in self.slices.items() for s in sl]
        return GroupWindow.from_points(pts, self.dim)

    def nonempty(self) -> Dict[CosetIndex, FrozenSet[int]]:
        return {i: s for i, s in self.slices.items() if s}

    def sizes(self) -> Dict[CosetIndex, int]:
        return {i: len(s) for i, s in self.slices.items()}


def coset_slices(w: GroupWindow, axis: int = 0) -> CosetDecomposition:
    if not 0 <= axis < w.dim:
        raise ValueError("axis out of range")
    slices: Dict[CosetIndex, set] = {}
    for p in w.points:
        i = tuple(-p[c] for c in range(w.dim) if c != axis)
        slices.setdefault(i, set()).add(p[axis])
    return CosetDecomposition(w.dim, axis, {i: frozenset(s) for i, s in sorted(slices.items())})


# ---------------------------------------------------------------------------
# Følner reduction
# ---------------------------------------------------------------------------

def tau_enumeration() -> Iterator[int]:
    """0, 1, -1, 2, -2, ...: τ(h) is the position of h in this list."""
    yield 0
    for k in count(1):
        yield k
        yield -k


def tau(h: int) -> int:
    return 2 * h - 1 if h > 0 else -2 * h


@dataclass
class SliceCertificate:
    coset: CosetIndex
    size: int
    retained: bool
    # per processed h: (h, |hS Δ S|) with the threshold √ε(n,h)|S|
    defects: List[Tuple[int, int]] = field(default_factory=list)


@dataclass
class ReductionResult:
    original: GroupWindow
    trimmed: Optional[GroupWindow]
    removed: int
    processed: List[Tuple[int, Fraction]]
    certificates: List[SliceCertificate]
    bound_holds: Optional[bool]
    vacuous: bool
    degenerate: bool
    axis: int = 0

    @property
    def removed_fraction(self) -> Fraction:
        return Fraction(self.removed, len(self.original))

    def bound(self):
        """Σ √ε(n,h) |W̃| over the processed h, as an interval."""
        total = iv.mpf(0)
        for _, e in self.processed:
            total += isqrt_ival(e)
        return total * len(self.original)

    def to_json(self) -> dict:
        return {
            "size": len(self.original),
            "trimmed_size": 0 if self.trimmed is None else len(self.trimmed),
            "removed": self.removed,
            "processed": [[h, f"{e.numerator}/{e.denominator}"] for h, e in self.processed],
            "bound": float(self.bound().b),
            "bound_holds": self.bound_holds,
            "vacuous": self.vacuous,
            "degenerate": self.degenerate,
            "removed_cosets": [list(c.coset) for c in self.certificates if not c.retained],
        }


def _axis_element(h: int, dim: int, axis: int) -> Point:
    return tuple(h if c == axis else 0 for c in range(dim))


def reduce_window(w: GroupWindow, axis: int = 0) -> ReductionResult:
    """One step of the reduction for a single window W̃.

    Every h in H with ε(h) = |hW̃ Δ W̃|/|W̃| < 2^{-τ(h)} is processed and
    the slices with |hS Δ S| > √ε(h)|S| are removed.  Since ε(h) is a
    multiple of 1/|W̃| and vanishes only at h = 0, no h with
    2^{-τ(h)} <= 1/|W̃| can qualify, so the enumeration stops there.
    """
    dec = coset_slices(w, axis)
    size = len(w)
    processed: List[Tuple[int, Fraction]] = []
    for h in tau_enumeration():
        if (1 << tau(h)) >= size and h != 0:
            break
        e = invariance_defect(w, _axis_element(h, w.dim, axis))
        if e < Fraction(1, 1 << tau(h)):
            processed.append((h, e))
    certs = []
    removed_cosets = set()
    for i, s in dec.slices.items():
        cert = SliceCertificate(i, len(s), True)
        for h, e in processed:
            d = shift_defect(s, h)
            cert.defects.append((h, d))
            # |hS Δ S| > √ε |S|  <=>  d² > ε |S|², exactly
            if d * d > e * len(s) * len(s):
                cert.retained = False
        if not cert.retained:
            removed_cosets.add(i)
        certs.append(cert)
    kept = {i: s for i, s in dec.slices.items() if i not in removed_cosets}
    removed = sum(len(dec.slices[i]) for i in removed_cosets)
    trimmed = CosetDecomposition(w.dim, axis, kept).reconstruct() if kept else None
    result = ReductionResult(w, trimmed, removed, processed, certs, None,
                             vacuous=False, degenerate=trimmed is None, axis=axis)
    if all(e == 0 for _, e in processed):
        # only h = 0 qualified: the bound is 0 and nothing can be removed
        result.vacuous = True
        result.bound_holds = removed == 0
    else:
        result.bound_holds = certified_lt(ival(removed), result.bound())
    return result


def reduce_folner(windows: Sequence[GroupWindow], axis: int = 0) -> List[ReductionResult]:
    """The reduction applied to each window of a Følner sequence."""
    return [reduce_window(w, axis) for w in windows]


def check_certificate(result: ReductionResult) -> bool:
    """Recompute the certificate from scratch: the bound on the removed
    part and the √ε-invariance of every retained slice."""
    if result.trimmed is None:
        return False
    removed = len(result.original.points - result.trimmed.points)
    if removed != result.removed or not result.trimmed.points <= result.original.points:
        return False
    if result.vacuous:
        bound_ok = removed == 0
    else:
        total = sum((isqrt_ival(e) for _, e in result.processed), iv.mpf(0))
        bound_ok = certified_lt(ival(removed), total * len(result.original)) is True
    dec = coset_slices(result.trimmed, result.axis)
    for s in dec.slices.values():
        for h, e in result.processed:
            d = len({x + h for x in s} ^ s)
            if d * d > e * len(s) * len(s):
                return False
    return bound_ok

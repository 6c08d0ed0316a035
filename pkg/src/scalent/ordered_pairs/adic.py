"""The graph of ordered pairs, the vertex sets V_n^σ and the adic map.

A vertex of level N is a binary word of length 2^N.  Bit ``p`` of a word in
V_N^σ is decided by walking down the halving tree: at level n the top bit of
``p`` (bit n-1) picks the prefix or suffix half, and when σ_n = 0 both halves
are the same word, so that bit of ``p`` is irrelevant.  Hence the bit at
``p`` depends only on ``p & mask(σ, N)`` where the mask keeps bit ``b`` iff
σ_{b+1} = 1, and under the uniform measure on V_N^σ these keyed bits are
independent fair coins.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, Optional, Sequence, Tuple, Union


class SigmaSequence:
    """Bits σ_1..σ_L, indexed from 1."""

    def __init__(self, bits: Union[str, Iterable[int]]):
        if isinstance(bits, str):
            bits = bits.strip()
            if not bits or set(bits) - {"0", "1"}:
                raise ValueError(f"sigma must be a nonempty 0/1 string, got {bits!r}")
            bits = [int(c) for c in bits]
        bits = tuple(int(b) for b in bits)
        if not bits:
            raise ValueError("sigma must have at least one bit")
        if any(b not in (0, 1) for b in bits):
            raise ValueError("sigma bits must be 0 or 1")
        self.bits = bits

    @classmethod
    def zeros(cls, length: int) -> "SigmaSequence":
        return cls([0] * length)

    @classmethod
    def ones(cls, length: int) -> "SigmaSequence":
        return cls([1] * length)

    @classmethod
    def alternating(cls, length: int) -> "SigmaSequence":
        """1, 0, 1, 0, ... starting with σ_1 = 1."""
        return cls([(i + 1) % 2 for i in range(length)])

    @classmethod
    def with_zeros_at(cls, zeros: Iterable[int], length: int) -> "SigmaSequence":
        z = set(zeros)
        return cls([0 if i in z else 1 for i in range(1, length + 1)])

    def __len__(self) -> int:
        return len(self.bits)

    def __getitem__(self, i: int) -> int:
        """σ_i for 1 <= i <= L."""
        if not 1 <= i <= len(self.bits):
            raise IndexError(f"sigma index {i} outside 1..{len(self.bits)}")
        return self.bits[i - 1]

    def __str__(self) -> str:
        return "".join(map(str, self.bits))

    def __repr__(self) -> str:
        return f"SigmaSequence('{self}')"

    def __eq__(self, other) -> bool:
        return isinstance(other, SigmaSequence) and self.bits == other.bits

    def __hash__(self):
        return hash(self.bits)

    def s_sigma(self, t: int) -> int:
        """Σ_{1 <= i < t} σ_i."""
        if t - 1 > len(self.bits):
            raise IndexError(f"s_sigma({t}) needs {t - 1} bits, have {len(self.bits)}")
        return sum(self.bits[: max(t - 1, 0)])

    def require(self, level: int) -> None:
        if level > len(self.bits):
            raise ValueError(f"level {level} exceeds sigma length {len(self.bits)}")

    def mask(self, level: int) -> int:
        """Positions bits that matter at level N: bit b kept iff σ_{b+1} = 1."""
        self.require(level)
        m = 0
        for b in range(level):
            if self.bits[b]:
                m |= 1 << b
        return m

    def last_zero(self, level: int) -> int:
        """Largest q in [1, level] with σ_q = 0, or 0 if none."""
        self.require(level)
        for q in range(level, 0, -1):
            if self.bits[q - 1] == 0:
                return q
        return 0


def level_set_size(sigma: SigmaSequence, n: int) -> int:
    """log2 |V_n^σ| = 2^{#ones among σ_1..σ_n}."""
    if n < 0:
        raise ValueError("level must be nonnegative")
    sigma.require(n)
    return 1 << sum(sigma.bits[:n])


def predicted_scaling(sigma: SigmaSequence, n: int) -> int:
    """h_n = 2^{s^σ(ceil(log2 n))}."""
    if n < 1:
        raise ValueError("n must be positive")
    t = (n - 1).bit_length()  # ceil(log2 n)
    return 1 << sigma.s_sigma(t)


# ---------------------------------------------------------------------------
# vertices
# ---------------------------------------------------------------------------

class VertexHandle:
    """A vertex of V_N^σ with lazily drawn bits.

    Each tree path (the masked position) gets its own fair coin, derived from
    the seed by hashing and memoized, so repeated queries agree and no word
    of length 2^N is ever built.  ``from_word`` wraps an explicit word for
    enumeration.
    """

    def __init__(self, sigma: SigmaSequence, level: int, seed: int,
                 word: Optional[Sequence[int]] = None):
        sigma.require(level)
        self.sigma = sigma
        self.level = level
        self.seed = int(seed)
        self._mask = sigma.mask(level)
        self._cache: Dict[int, int] = {}
        self._word = None
        if word is not None:
            if len(word) != 1 << level:
                raise ValueError("word length must be 2^level")
            self._word = tuple(int(b) for b in word)
            if not in_level_set(sigma, level, self._word):
                raise ValueError("word is not in V_N^sigma")

    @classmethod
    def from_word(cls, sigma: SigmaSequence, level: int, word: Sequence[int]) -> "VertexHandle":
        return cls(sigma, level, 0, word)

    def key(self, p: int) -> int:
        return p & self._mask

    def bit(self, p: int) -> int:
        if not 0 <= p < 1 << self.level:
            raise IndexError(f"position {p} outside [0, 2^{self.level})")
        if self._word is not None:
            return self._word[p]
        k = p & self._mask
        b = self._cache.get(k)
        if b is None:
            digest = hashlib.blake2b(f"{self.seed}:{k}".encode(), digest_size=1).digest()
            b = digest[0] & 1
            self._cache[k] = b
        return b

    def bits(self, positions: Iterable[int]) -> Tuple[int, ...]:
        return tuple(self.bit(p) for p in positions)

    def word(self) -> Tuple[int, ...]:
        """Materialize the whole word (small levels only)."""
        if self.level > 20:
            raise ValueError("refusing to materialize a word longer than 2^20")
        return self.bits(range(1 << self.level))


def sample_vertex(sigma: SigmaSequence, level: int, rng_seed: int) -> VertexHandle:
    """A vertex distributed uniformly over V_N^σ."""
    return VertexHandle(sigma, level, rng_seed)


def in_level_set(sigma: SigmaSequence, level: int, word: Sequence[int]) -> bool:
    """Membership in V_N^σ by the defining recursion."""
    if len(word) != 1 << level:
        return False
    if level == 0:
        return word[0] in (0, 1)
    half = 1 << (level - 1)
    a, b = word[:half], word[half:]
    if sigma[level] == 0 and tuple(a) != tuple(b):
        return False
    return in_level_set(sigma, level - 1, a) and in_level_set(sigma, level - 1, b)


# ---------------------------------------------------------------------------
# paths
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class OverflowSignal:
    """The carry (or borrow) would leave the truncated path."""

    level: int
    direction: int = 1

    def __bool__(self) -> bool:
        return False


@dataclass(frozen=True)
class AdicPathPrefix:
    """A path of length N: terminal vertex and edge colors c_0..c_{N-1}.

    Color 0 means the lower vertex is the prefix of the upper one, 1 the
    suffix, so the colors spell the position of the level-0 vertex inside
    the terminal word.
    """

    vertex: VertexHandle
    colors: Tuple[int, ...]

    def __post_init__(self):
        if len(self.colors) != self.vertex.level:
            raise ValueError("need one color per level")
        if any(c not in (0, 1) for c in self.colors):
            raise ValueError("colors must be 0 or 1")

    @classmethod
    def at(cls, vertex: VertexHandle, position: int) -> "AdicPathPrefix":
        if not 0 <= position < 1 << vertex.level:
            raise ValueError("position out of range")
        return cls(vertex, tuple((position >> i) & 1 for i in range(vertex.level)))

    @property
    def level(self) -> int:
        return self.vertex.level

    @property
    def o(self) -> int:
        """𝔬_N = Σ c_i 2^i."""
        return sum(c << i for i, c in enumerate(self.colors))

    def b(self, n: Optional[int] = None) -> Tuple[int, ...]:
        """𝔟_n: the level-n vertex on the path, as an explicit word."""
        n = self.level if n is None else n
        if not 0 <= n <= self.level:
            raise ValueError("level out of range")
        length = 1 << n
        start = (self.o >> n) << n
        return self.vertex.bits(range(start, start + length))

    def current_bit(self) -> int:
        """The level-0 vertex, i.e. bit 𝔬_N of the terminal word."""
        return self.vertex.bit(self.o)

    def same_vertex(self, other: "AdicPathPrefix") -> bool:
        return self.vertex is other.vertex


def adic_step(x: AdicPathPrefix) -> Union[AdicPathPrefix, OverflowSignal]:
    """Flip the lowest 0 color to 1 and clear the colors below it."""
    c = list(x.colors)
    for n, ci in enumerate(c):
        if ci == 0:
            c[n] = 1
            for i in range(n):
                c[i] = 0
            return AdicPathPrefix(x.vertex, tuple(c))
    return OverflowSignal(x.level, 1)


def adic_step_inverse(x: AdicPathPrefix) -> Union[AdicPathPrefix, OverflowSignal]:
    """Flip the lowest 1 color to 0 and set the colors below it."""
    c = list(x.colors)
    for n, ci in enumerate(c):
        if ci == 1:
            c[n] = 0
            for i in range(n):
                c[i] = 1
            return AdicPathPrefix(x.vertex, tuple(c))
    return OverflowSignal(x.level, -1)


def adic_power(x: AdicPathPrefix, a: int) -> Union[AdicPathPrefix, OverflowSignal]:
    """T^a within the truncation; negative a uses the inverse map."""
    target = x.o + a
    if not 0 <= target < 1 << x.level:
        return OverflowSignal(x.level, 1 if a > 0 else -1)
    return AdicPathPrefix.at(x.vertex, target)


def path_mass(sigma: SigmaSequence, level: int) -> Fraction:
    """μ^σ_N of one finite path: 1 / (|V_N^σ| 2^N) by centrality."""
    return Fraction(1, (1 << level_set_size(sigma, level)) << level)


def enumerate_level_set(sigma: SigmaSequence, level: int) -> Iterable[Tuple[int, ...]]:
    """All words of V_N^σ (tiny levels only)."""
    d = level_set_size(sigma, level)
    if d > 16:
        raise ValueError("level set too large to enumerate")
    mask = sigma.mask(level)
    keys = sorted({p & mask for p in range(1 << level)})
    index = {k: i for i, k in enumerate(keys)}
    slots = [index[p & mask] for p in range(1 << level)]
    for code in range(1 << len(keys)):
        yield tuple((code >> s) & 1 for s in slots)

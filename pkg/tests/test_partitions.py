import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from scalent.instances import random_eps, random_labels, random_masses, random_space
from scalent.ordered_pairs import AdicWindowSystem, SigmaSequence
from scalent.partitions import (FiniteSystem, Partition, check_lemma_averaging,
                                check_lemma_partitions_1, check_lemma_partitions_2,
                                cut_semimetric, entropy_rate_estimate, join, refine,
                                shannon_entropy, shannon_entropy_exact)
from scalent.semimetric import Semimetric, SemimetricSpace, max_semimetric

seeds = st.integers(min_value=0, max_value=2**32 - 1)


def uniform(n):
    return SemimetricSpace(range(n), [Fraction(1, n)] * n, Semimetric.zero(n))


def space_with_masses(masses):
    return SemimetricSpace(range(len(masses)), masses, Semimetric.zero(len(masses)))


# --- Shannon entropy -----------------------------------------------------

def test_entropy_examples():
    host = space_with_masses([Fraction(1, 2), Fraction(1, 4), Fraction(1, 4)])
    assert shannon_entropy(Partition.whole(host)) == 0
    assert shannon_entropy_exact(Partition.singletons(host)) == Fraction(3, 2)
    assert shannon_entropy(Partition(uniform(4), [[0, 1], [2, 3]])) == 1


def test_non_dyadic_entropy_is_float():
    p = Partition.singletons(uniform(3))
    assert shannon_entropy_exact(p) is None
    assert shannon_entropy(p) == pytest.approx(math.log2(3))


def test_partition_validation():
    host = uniform(3)
    with pytest.raises(ValueError):
        Partition(host, [[0, 1], [1, 2]])
    with pytest.raises(ValueError):
        Partition(host, [[0, 1]])
    with pytest.raises(ValueError):
        Partition(host, [[0, 1, 2], []])


def test_refine_examples():
    host = uniform(4)
    p = Partition(host, [[0, 1], [2, 3]])
    q = Partition(host, [[0, 2], [1, 3]])
    assert refine(p, p).same_blocks(p)
    assert refine(p, Partition.whole(host)).same_blocks(p)
    r = refine(p, q)
    assert len(r) == 4 and r.block_masses() == [Fraction(1, 4)] * 4


def test_cut_semimetric_examples():
    host = uniform(3)
    assert cut_semimetric(Partition.whole(host)) == Semimetric.zero(3)
    assert cut_semimetric(Partition.singletons(host)) == Semimetric.discrete(3)
    cut = cut_semimetric(Partition(host, [[0, 1], [2]]))
    assert sum(cut[i, j] for i in range(3) for j in range(i + 1, 3)) == 2


@settings(max_examples=50, deadline=None)
@given(seeds)
def test_join_inequalities(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 12))
    host = space_with_masses(random_masses(rng, n))
    p = Partition.from_labels(host, random_labels(rng, n, 3))
    q = Partition.from_labels(host, random_labels(rng, n, 4))
    hp, hq, hj = shannon_entropy(p), shannon_entropy(q), shannon_entropy(refine(p, q))
    assert hj <= hp + hq + 1e-12
    assert hj >= max(hp, hq) - 1e-12
    # cut of the refinement is the pointwise max of the cuts
    assert cut_semimetric(refine(p, q)) == max_semimetric([cut_semimetric(p), cut_semimetric(q)])


# --- lemma checks --------------------------------------------------------

def test_lemma1_examples():
    host = uniform(4)
    r = check_lemma_partitions_1(Partition.whole(host), Fraction(1, 3))
    assert r.holds is True
    r = check_lemma_partitions_1(Partition(host, [[0, 1], [2, 3]]), Fraction(1, 4))
    assert r.detail["eps_entropy_blocks"] == 2
    assert r.holds is True and float(r.rhs.a) == 4


def test_lemma2_examples():
    host = uniform(4)
    assert check_lemma_partitions_2([Partition.whole(host)], Fraction(1, 4)).holds is True
    halves = [Partition(host, [[0, 1], [2, 3]]), Partition(host, [[0, 2], [1, 3]])]
    r = check_lemma_partitions_2(halves, Fraction(1, 8))
    assert r.holds is True and r.slack > 0


def test_lemma2_requires_small_eps():
    with pytest.raises(ValueError):
        check_lemma_partitions_2([Partition.whole(uniform(2))], Fraction(1, 2))


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_lemma1_random(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 13))
    sp = random_space(rng, n)
    p = Partition.from_labels(sp, random_labels(rng, n, int(rng.integers(1, 5))))
    assert check_lemma_partitions_1(p, random_eps(rng, below=Fraction(1))).holds is True


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_lemma2_random(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 40))
    host = space_with_masses(random_masses(rng, n))
    m = int(rng.integers(2, 5))
    parts = [Partition.from_labels(host, random_labels(rng, n, m)) for _ in range(int(rng.integers(1, 6)))]
    assert check_lemma_partitions_2(parts, random_eps(rng, below=Fraction(1, 2)), m=m).holds is True


def test_averaging_examples():
    host = uniform(4)
    cuts = [cut_semimetric(Partition(host, [[0, 1], [2, 3]])),
            cut_semimetric(Partition(host, [[0, 2], [1, 3]]))]
    r = check_lemma_averaging(host, cuts, Fraction(1, 16))
    # 2 sqrt(1/16) = 1/2: the average takes values 0, 1/2, 1 so blocks are
    # points, and two points leave mass 1/2, which is not < 1/2
    assert r.detail["avg_blocks"] == 3 and r.holds is True
    # scale above 1: one block
    r = check_lemma_averaging(host, cuts, Fraction(1, 3))
    assert r.detail["avg_blocks"] == 1


def test_averaging_hypothesis():
    host = uniform(2)
    with pytest.raises(ValueError):
        check_lemma_averaging(host, [Semimetric.zero(2)], Fraction(1, 4))
    with pytest.raises(ValueError):
        check_lemma_averaging(host, [Semimetric.from_fractions([[0, 2], [2, 0]])], Fraction(1, 4))


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_averaging_random_metrics(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 11))
    sp = random_space(rng, n)
    eps = random_eps(rng, below=Fraction(1, 2))
    rhos = [random_space(rng, n).rho for _ in range(int(rng.integers(1, 5)))]
    try:
        r = check_lemma_averaging(sp, rhos, eps)
    except ValueError:
        return  # some ρ_i has zero ε-entropy
    assert r.holds is True


# --- entropy rate tables -------------------------------------------------

def test_identity_system_rate_decreases():
    host = uniform(4)
    sys = FiniteSystem(Partition(host, [[0, 1], [2, 3]]), [0, 1, 2, 3])
    rows, trend = entropy_rate_estimate(sys, [1, 2, 4, 8])
    assert [r.ratio for r in rows] == [1, 0.5, 0.25, 0.125] and trend == "nonincreasing"


def test_rotation_rate():
    host = uniform(4)
    sys = FiniteSystem(Partition(host, [[0, 1], [2, 3]]), [1, 2, 3, 0])
    rows, _ = entropy_rate_estimate(sys, [1, 2, 3])
    assert [r.exact for r in rows] == [1, 2, 2]


def test_adic_rates():
    ones, _ = entropy_rate_estimate(AdicWindowSystem(SigmaSequence.ones(5), 5), range(1, 13))
    assert all(r.ratio == 1 for r in ones)
    zeros, _ = entropy_rate_estimate(AdicWindowSystem(SigmaSequence.zeros(5), 5), [1, 4, 12])
    assert all(r.exact == 1 for r in zeros)


def test_rate_truncation_guard():
    with pytest.raises(ValueError):
        entropy_rate_estimate(AdicWindowSystem(SigmaSequence.ones(3), 3), [8])


def test_join_of_family():
    host = uniform(8)
    bits = [Partition.from_labels(host, [(a >> b) & 1 for a in range(8)]) for b in range(3)]
    assert len(join(bits)) == 8 and shannon_entropy_exact(join(bits)) == 3

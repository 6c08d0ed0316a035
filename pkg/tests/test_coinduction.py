from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from scalent.amenable import GroupWindow, folner_window
from scalent.coinduction import (CoinducedSystem, CosetBoundaryError, HypothesisError,
                                 WeightedFamily, averaged_distance, cocycle, coinduced_apply,
                                 compose, decompose_average, inverse, lemma_estimate_bound,
                                 product_space, verify_lemma_estimate, weighted_slice_distance)
from scalent.ordered_pairs import OverflowSignal, SigmaSequence, adic_power
from scalent.semimetric import SemimetricSpace, eps_entropy_exact

ints = st.integers(-5, 5)
elements = st.tuples(ints, ints)


def two_atoms():
    return SemimetricSpace("ab", [Fraction(1, 2)] * 2, [[0, 1], [1, 0]])


def system(level=8, radius=6):
    return CoinducedSystem(SigmaSequence.alternating(level), level, radius)


def interior_point(sys, seed, lo=-2, hi=2):
    # positions well inside the word so small moves never overflow
    n = hi - lo + 1
    return sys.sample_point(seed, lo, hi, positions=[100 + 7 * j for j in range(n)])


# --- cocycle -------------------------------------------------------------

@given(ints, elements, elements)
def test_cocycle_identity(i, g1, g2):
    k1, h1 = cocycle(i, g1)
    k2, h2 = cocycle(k1, g2)
    k, h = cocycle(i, compose(g2, g1))
    assert (k, h) == (k2, h1 + h2)


@given(ints, elements)
def test_cocycle_defines_coset_action(i, g):
    # g g_i = g_k h in Z^2 with g_i = (0, i) and h in Z x {0}
    k, h = cocycle(i, g)
    assert compose(g, (0, i)) == compose((0, k), (h, 0))
    assert cocycle(i, (0, 0)) == (i, 0)
    assert cocycle(*cocycle(i, g)[:1], inverse(g))[0] == i


# --- the action ----------------------------------------------------------

def test_identity_acts_trivially():
    sys = system()
    x = interior_point(sys, 1)
    assert coinduced_apply(sys, (0, 0), x) == x


def test_unit_elements():
    sys = system()
    x = interior_point(sys, 2)
    y = coinduced_apply(sys, (1, 0), x)
    assert all(y[i].o == x[i].o + 1 and y[i].vertex is x[i].vertex for i in x.indices())
    z = coinduced_apply(sys, (0, 1), x)
    assert z.lo == x.lo + 1 and all(z[i + 1] == x[i] for i in x.indices())
    w = coinduced_apply(sys, (3, -1), x)
    assert all(w[i - 1].o == adic_power(x[i], 3).o for i in x.indices())


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 1000), st.tuples(st.integers(-3, 3), st.integers(-1, 1)),
       st.tuples(st.integers(-3, 3), st.integers(-1, 1)))
def test_action_composes(seed, g1, g2):
    sys = system()
    x = interior_point(sys, seed)
    lhs = coinduced_apply(sys, g2, coinduced_apply(sys, g1, x))
    rhs = coinduced_apply(sys, compose(g2, g1), x)
    assert lhs == rhs


def test_locality():
    # changing coordinate j changes only output coordinate j + b
    sys = system()
    x = interior_point(sys, 3)
    other = interior_point(sys, 4)
    coords = list(x.coords)
    coords[1] = other.coords[1]
    x2 = type(x)(x.lo, tuple(coords))
    g = (2, 1)
    y, y2 = coinduced_apply(sys, g, x), coinduced_apply(sys, g, x2)
    changed = [i for i in y.indices() if y[i] != y2[i]]
    assert changed == [x.lo + 1 + 1]


def test_boundaries():
    sys = system(radius=2)
    x = sys.sample_point(0)
    with pytest.raises(CosetBoundaryError):
        coinduced_apply(sys, (0, 1), x)
    with pytest.raises(CosetBoundaryError):
        sys.sample_point(0, -3, 0)
    with pytest.raises(CosetBoundaryError):
        x[3]
    end = sys.sample_point(0, positions=[(1 << 8) - 1] * 5)
    assert isinstance(coinduced_apply(sys, (1, 0), end), OverflowSignal)


def test_decomposition_identity_on_samples():
    sys = system(radius=8)
    W = GroupWindow.from_points([(a, b) for b in range(3) for a in range(3 + b)])
    for seed in range(20):
        x = sys.sample_point(seed, -4, 4, positions=[40 + seed + j for j in range(9)])
        y = sys.sample_point(seed + 99, -4, 4, positions=[90 + j for j in range(9)])
        assert averaged_distance(sys, W, x, y) == weighted_slice_distance(W, x, y)


# --- decomposition into components ---------------------------------------

def test_decompose_examples():
    sys = system()
    fam, slices = decompose_average(sys, GroupWindow.from_points([(s, 0) for s in range(4)]),
                                    Fraction(1, 10), 2)
    assert fam.k == 1 and fam.weights == [4] and slices == {0: (0, 1, 2, 3)}
    fam, slices = decompose_average(sys, folner_window(2, 2), Fraction(1, 10), 2)
    assert fam.k == 2 and fam.weights == [2, 2] and set(slices) == {0, -1}
    # slices are translated to start at 0
    fam, slices = decompose_average(sys, GroupWindow.from_points([(5, 0), (7, 0)]), Fraction(1, 10), 2)
    assert slices == {0: (0, 2)}


# --- the product estimate ------------------------------------------------

def test_bound_example():
    f = WeightedFamily([two_atoms(), two_atoms()], [Fraction(3, 2)] * 2, 2, Fraction(1, 10))
    assert f.blocks_4eps == [2, 2] and f.hypothesis == [True, True]
    assert lemma_estimate_bound(f) == Fraction(-2999, 1000)


def test_hypothesis_window_is_strict():
    # log2 2 = 1 is not < s = 1
    with pytest.raises(HypothesisError):
        WeightedFamily([two_atoms()], [1], 2, Fraction(1, 10))
    f = WeightedFamily([two_atoms()], [1], 2, Fraction(1, 10), strict=False)
    assert f.hypothesis == [False]
    with pytest.raises(ValueError):
        WeightedFamily([two_atoms()], [Fraction(3, 2)], 2, Fraction(1, 4))


def test_product_space():
    f = WeightedFamily([two_atoms(), two_atoms()], [Fraction(3, 2), Fraction(3, 2)], 2,
                       Fraction(1, 10))
    p = product_space(f)
    assert p.n == 4 and all(m == Fraction(1, 4) for m in p.mass)
    assert p.rho[0, 3] == 1 and p.rho[0, 1] == Fraction(1, 2)


@pytest.mark.parametrize("k", [1, 3])
def test_estimate_exact(k):
    f = WeightedFamily([two_atoms()] * k, [Fraction(3, 2)] * k, 2, Fraction(1, 10))
    r = verify_lemma_estimate(f)
    assert r.holds is True and r.detail["blocks"] == 2 ** k
    assert r.detail["blocks"] == eps_entropy_exact(product_space(f), Fraction(1, 10) ** 4).blocks


def test_estimate_sampled_k8():
    f = WeightedFamily([two_atoms()] * 8, [Fraction(3, 2)] * 8, 2, Fraction(1, 10))
    with pytest.raises(ValueError):
        verify_lemma_estimate(f, "exact")
    r = verify_lemma_estimate(f, "sampled")
    assert r.holds is True and r.detail["blocks"] == 256 and r.detail["method"] == "exact-discrete"


def test_sampled_agrees_with_exact_when_discrete():
    f = WeightedFamily([two_atoms()] * 2, [Fraction(3, 2)] * 2, 2, Fraction(1, 10))
    assert (verify_lemma_estimate(f, "sampled").detail["blocks"]
            == verify_lemma_estimate(f, "exact").detail["blocks"])

from fractions import Fraction
from itertools import islice

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from scalent.amenable import (GroupWindow, check_certificate, coset_slices, folner_window,
                              interval_count, invariance_defect, is_eps_invariant, reduce_folner,
                              reduce_window, shift_defect, tau, tau_enumeration)


def box_with_sparse_row(n):
    pts = [(a, b) for b in range(n) for a in range(n)]
    pts += [(a, n) for a in range(0, n, 2)]
    return GroupWindow.from_points(pts)


def test_window_validation():
    with pytest.raises(ValueError):
        GroupWindow.from_points([])
    with pytest.raises(ValueError):
        GroupWindow.from_points([(0, 0), (0, 0)])
    with pytest.raises(ValueError):
        GroupWindow.from_points([(0, 0, 0, 0)])
    with pytest.raises(ValueError):
        folner_window(2, 3, "interval")


def test_defect_examples():
    w = folner_window(1, 4)
    assert invariance_defect(w, 1) == Fraction(1, 2)
    assert invariance_defect(w, 0) == 0
    assert invariance_defect(folner_window(2, 4), (1, 0)) == Fraction(1, 2)
    assert invariance_defect(w, 10) == 2
    assert shift_defect([0, 1, 3], 1) == 4
    assert interval_count([0, 1, 3, 4, 7]) == 3


def test_strict_invariance():
    # defect 2 against ε|S| = 2 is not strict
    assert is_eps_invariant(range(10), Fraction(1, 4))
    assert not is_eps_invariant(range(10), Fraction(1, 5))


def test_tau():
    order = list(islice(tau_enumeration(), 7))
    assert order == [0, 1, -1, 2, -2, 3, -3]
    assert [tau(h) for h in order] == list(range(7))


def test_coset_slices_round_trip():
    w = box_with_sparse_row(3)
    dec = coset_slices(w)
    assert dec.sizes() == {(-3,): 2, (-2,): 3, (-1,): 3, (0,): 3}
    assert dec.reconstruct() == w
    assert dec.point(2, (-1,)) == (2, 1)


def test_box_keeps_everything():
    r = reduce_window(folner_window(2, 8))
    assert r.removed == 0 and r.bound_holds is True and check_certificate(r)
    assert [h for h, _ in r.processed] == [0, 1]


def test_sparse_row_is_removed():
    r = reduce_window(box_with_sparse_row(8))
    assert r.removed == 4 and r.trimmed == folner_window(2, 8)
    assert r.bound_holds is True and check_certificate(r)
    assert r.to_json()["removed_cosets"] == [[-8]]


def test_single_point_is_vacuous():
    r = reduce_window(GroupWindow.from_points([(0, 0)]))
    assert r.vacuous and r.removed == 0 and check_certificate(r)


def test_tampered_certificate_fails():
    r = reduce_window(box_with_sparse_row(8))
    r.removed = 0
    assert not check_certificate(r)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_reduction_certificates(seed):
    rng = np.random.default_rng(seed)
    rows = int(rng.integers(1, 8))
    pts = set()
    for b in range(rows):
        start, length = int(rng.integers(-3, 4)), int(rng.integers(0, 12))
        pts |= {(a, b) for a in range(start, start + length)}
    if not pts:
        return
    w = GroupWindow.from_points(sorted(pts))
    r = reduce_window(w)
    assert r.bound_holds is True
    assert r.degenerate or check_certificate(r)
    # trimmed slices are exactly the retained full slices of W
    if r.trimmed is not None:
        kept = coset_slices(r.trimmed).slices
        full = coset_slices(w).slices
        assert all(full[i] == s for i, s in kept.items())


def test_reduce_folner_family():
    results = reduce_folner([folner_window(2, n) for n in (4, 8, 16)])
    assert all(check_certificate(r) for r in results)

import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from projlens import gf
from projlens.gf import Subspace


def gaussian_binomial(n, k, q):
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


@pytest.mark.parametrize("n,k,q", [(3, 1, 2), (4, 2, 2), (4, 2, 3), (5, 2, 2), (4, 3, 3)])
def test_subspace_counts(n, k, q):
    assert len(gf.all_subspaces(n, k, q)) == gaussian_binomial(n, k, q)


def mats(q, n):
    return st.lists(st.lists(st.integers(0, q - 1), min_size=n, max_size=n), min_size=1, max_size=n)


@settings(max_examples=150, deadline=None)
@given(st.sampled_from([2, 3, 5]), st.data())
def test_dimension_formula(q, data):
    n = 4
    A = Subspace.from_rows(data.draw(mats(q, n)), q, n)
    B = Subspace.from_rows(data.draw(mats(q, n)), q, n)
    assert (A + B).dim + (A & B).dim == A.dim + B.dim
    assert (A & B) <= A and A <= (A + B)
    assert gf.annihilator(gf.annihilator(A)) == A


@settings(max_examples=100, deadline=None)
@given(st.sampled_from([2, 3]), st.data())
def test_points_of_a_subspace(q, data):
    A = Subspace.from_rows(data.draw(mats(q, 4)), q, 4)
    pts = gf.projective_points(A)
    assert len(pts) == (q**A.dim - 1) // (q - 1)
    assert all(Subspace.from_rows(p[None, :], q) <= A for p in pts)


def test_perp_and_inverse():
    q, m = 3, 3
    G = np.block([[np.zeros((m, m), int), np.eye(m, dtype=int)], [np.eye(m, dtype=int), np.zeros((m, m), int)]])
    S = Subspace.from_rows([[1, 0, 0, 0, 0, 0]], q)
    assert gf.perp(S, G).dim == 5
    M = np.array([[1, 2, 0], [0, 1, 1], [1, 0, 2]])
    Minv = gf.matrix_inverse(M, 3)
    assert np.array_equal(M @ Minv % 3, np.eye(3, dtype=int))
    with pytest.raises(ValueError):
        gf.matrix_inverse(np.array([[1, 1], [1, 1]]), 2)


def test_det_mod_against_enumeration():
    for entries in itertools.product(range(2), repeat=4):
        M = np.array(entries).reshape(2, 2)
        assert gf.det_mod(M, 2) == (M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0]) % 2


def test_bad_field():
    with pytest.raises(ValueError):
        gf.check_field(4)

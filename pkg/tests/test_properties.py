"""Property-based checks of structural invariants."""
import math

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from lcdunkl.corpus import make_gaussian
from lcdunkl.measure import IntervalSet, gamma_measure, lp_norm
from lcdunkl.special import dunkl_kernel, normalized_bessel_j
from lcdunkl.transform import CanonicalMatrix, lcdt_forward, lcdt_kernel, prefactor

orders = st.floats(-0.5, 4.0)
reals = st.floats(-60.0, 60.0)
nonzero = st.floats(0.05, 5.0).flatmap(lambda v: st.sampled_from((v, -v)))


@st.composite
def matrices(draw):
    # free a, b, d with b != 0; c = (ad - 1)/b closes the determinant
    a, d = draw(st.floats(-3.0, 3.0)), draw(st.floats(-3.0, 3.0))
    b = draw(nonzero)
    return CanonicalMatrix(a, b, (a * d - 1.0) / b, d)


@st.composite
def interval_sets(draw):
    # endpoints on a 1/8 grid keep every interval non-degenerate under dilation
    ticks = draw(st.lists(st.integers(-160, 160), min_size=0, max_size=8, unique=True))
    pts = sorted(t / 8.0 for t in ticks)
    pairs = [(pts[i], pts[i + 1]) for i in range(0, len(pts) - 1, 2)]
    return IntervalSet.from_pairs(pairs)


@given(orders, reals, reals)
@settings(max_examples=300, deadline=None)
def test_dunkl_kernel_bounded_by_one(k, lam, x):
    assert abs(dunkl_kernel(k, lam, x)) <= 1.0 + 1e-12


@given(matrices(), orders, reals, reals)
@settings(max_examples=200, deadline=None)
def test_lcdt_kernel_modulus(M, k, lam, x):
    # chirps are unimodular, so |K| = |E_k(-i lam/b, x)| <= 1 and the prefactor carries |b|^(-(k+1))
    K = lcdt_kernel(M, k, lam, x)
    assert abs(K) <= 1.0 + 1e-12
    assert math.isclose(abs(K), abs(dunkl_kernel(k, lam / M.b, x)), rel_tol=1e-13, abs_tol=1e-15)
    assert math.isclose(abs(prefactor(M, k)), abs(M.b) ** (-(k + 1)), rel_tol=1e-14)


@given(orders, st.floats(0.0, 80.0))
@settings(max_examples=300, deadline=None)
def test_normalized_bessel_even_and_bounded(k, x):
    v = normalized_bessel_j(k, x)
    assert v == normalized_bessel_j(k, -x)
    assert abs(v) <= 1.0 + 1e-12


@given(orders, reals, reals)
@settings(max_examples=200, deadline=None)
def test_kernel_conjugate_symmetry(k, lam, x):
    assert abs(dunkl_kernel(k, -lam, x) - np.conj(dunkl_kernel(k, lam, x))) < 1e-14


@given(matrices())
@settings(max_examples=200, deadline=None)
def test_matrix_inverse(M):
    ident = (M @ M.inverse()).as_tuple()
    scale = max(abs(v) for v in M.as_tuple()) ** 2
    np.testing.assert_allclose(ident, (1.0, 0.0, 0.0, 1.0), atol=1e-13 * scale)


@given(interval_sets(), interval_sets(), st.floats(-0.5, 3.0))
@settings(max_examples=200, deadline=None)
def test_gamma_measure_additive(A, B, k):
    # gamma(A) = gamma(A & B) + gamma(A & B^c)
    whole = gamma_measure(A, k)
    parts = gamma_measure(A.intersect(B), k) + gamma_measure(A.intersect(B.complement()), k)
    assert math.isclose(whole, parts, rel_tol=1e-12, abs_tol=1e-300)


@given(interval_sets(), st.floats(-0.5, 3.0), st.floats(0.1, 4.0))
@settings(max_examples=200, deadline=None)
def test_gamma_measure_dilation(A, k, r):
    # gamma(r A) = r^(2k+2) gamma(A)
    scaled = IntervalSet(tuple((r * a, r * b) for a, b in A.intervals))
    assert math.isclose(gamma_measure(scaled, k), r ** (2 * k + 2) * gamma_measure(A, k),
                        rel_tol=1e-12, abs_tol=1e-300)


@given(interval_sets())
@settings(max_examples=200, deadline=None)
def test_interval_set_complement_involution(A):
    assert A.complement().complement() == A
    assert A.intersect(A.complement()).total_length() == 0.0
    assert A.intersect(A) == A


@given(interval_sets(), interval_sets(), st.lists(st.floats(-25, 25), min_size=1, max_size=30))
@settings(max_examples=200, deadline=None)
def test_interval_set_membership(A, B, xs):
    x = np.array(xs)
    np.testing.assert_array_equal(A.intersect(B).contains(x), A.contains(x) & B.contains(x))


@given(st.sampled_from((2.0, -3.0, 0.5j, np.exp(0.7j))), st.floats(0.3, 3.0), orders)
@settings(max_examples=40, deadline=None)
def test_norm_and_transform_homogeneity(c, s, k):
    f = make_gaussian(s)
    g = f.scaled(c)
    assert math.isclose(lp_norm(g, 1.5, k), abs(c) * lp_norm(f, 1.5, k), rel_tol=1e-9)
    M = CanonicalMatrix(0.5, -1.0, 0.5, 1.0)
    lam = np.linspace(-3, 3, 7)
    np.testing.assert_allclose(lcdt_forward(g, M, k, lam).values,
                               c * lcdt_forward(f, M, k, lam).values, rtol=1e-9, atol=1e-15)

"""Truncated lambda complexes: bases, differentials, structural identities."""

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import golden_truncated_basis, random_valid_module
from topsquares import lambda_algebra as la
from topsquares.unstable import INF, sphere


def test_basis_matches_frozen_tables():
    for k in range(0, 4):
        for m in range(0, 11):
            got = la.lambda_k_m_basis(m, k)
            assert sorted(got) == sorted(golden_truncated_basis(m, k)), (m, k)


def test_basis_cardinality_doubles_with_truncation():
    for k in range(0, 6):
        for m in range(k, k + 5):
            assert len(la.lambda_k_m_basis(m, k)) == 2 ** k, (m, k)


def test_basis_words_admissible_with_bounded_length():
    for k in range(0, 5):
        for m in range(0, 9):
            for w in la.lambda_k_m_basis(m, k):
                assert la.is_admissible(w)
                assert len(w) <= k
                assert not la.in_gamma(w, m, k)
                if w:
                    assert w[0] < m


def test_sphere_complex_differentials_vanish_small_truncation():
    for k in range(0, 4):
        for m in range(0, 11):
            cx = la.sphere_complex(m, k)
            assert all(mat.is_zero() for mat in cx.mats.values()), (m, k)


adm_words = st.lists(st.integers(0, 12), min_size=1, max_size=4).filter(
    lambda w: all(2 * w[r] >= w[r + 1] for r in range(len(w) - 1))
).map(tuple)


@settings(max_examples=200, deadline=None)
@given(adm_words)
def test_differential_squares_to_zero(word):
    out = set()
    for w in la.d_lambda(word):
        out.symmetric_difference_update(la.d_lambda(w))
    dd = la.normalize_element(out)
    assert la.normalize_element([t for t in dd]) == frozenset() or not dd


@settings(max_examples=200, deadline=None)
@given(adm_words)
def test_differential_output_admissible_and_degree_correct(word):
    t = la.t_degree(word)
    s = la.s_degree(word)
    for w in la.d_lambda(word):
        assert la.is_admissible(w)
        assert la.t_degree(w) == t and la.s_degree(w) == s + 1


def test_single_generator_differential_goldens():
    # frozen small values of the generator differential
    assert la.d_lambda_gen(0) == frozenset()
    assert la.d_lambda_gen(1) == frozenset()
    assert la.d_lambda_gen(2) == frozenset({(1, 0)})
    assert la.d_lambda_gen(3) == frozenset()
    assert la.d_lambda_gen(4) == frozenset({(3, 0), (2, 1)})
    assert la.d_lambda_gen(5) == frozenset({(3, 1)})
    assert la.d_lambda_gen(6) == frozenset({(5, 0), (3, 2)})


def test_relation_rewrite_golden():
    # hand-expanded small products, frozen
    assert la.lambda_normalize((2, 5)) == frozenset()  # adjacent doubling-plus-one
    assert la.lambda_normalize((1, 4)) == frozenset({(2, 3)})
    assert la.lambda_normalize((0, 3)) == frozenset({(2, 1)})
    assert la.lambda_normalize((1, 2)) == frozenset({(1, 2)})  # already admissible


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(0, 10), min_size=1, max_size=3).map(tuple))
def test_normalize_output_admissible_same_bigrading(word):
    s, t = len(word), la.t_degree(word)
    for w in la.lambda_normalize(word):
        assert la.is_admissible(w)
        assert len(w) == s and la.t_degree(w) == t


@settings(max_examples=150, deadline=None)
@given(adm_words, st.integers(0, 8), st.integers(0, 5))
def test_gamma_is_closed_under_differential(word, m, k):
    if not la.in_gamma(word, m, k):
        return
    for w in la.d_lambda(word):
        assert la.in_gamma(w, m, k), (word, w, m, k)


@settings(max_examples=150, deadline=None)
@given(adm_words, st.integers(0, 10), st.integers(0, 5), st.integers(1, 5))
def test_dead_words_stay_dead_under_left_multiplication(word, m, k, i):
    # prepending an index below (m - 2i) + ... : if the word dies in the
    # degree-m truncation and m >= 2i, the product dies one sphere down
    if m < 2 * i or not la.in_gamma(word, m, k):
        return
    for w in la.normalize_element([(i - 1,) + word]):
        assert la.in_gamma(w, m - i, k), (word, w, m, k, i)


def test_no_words_above_stage_k():
    for k in range(0, 4):
        for m in range(0, 9):
            assert all(len(w) <= k for w in la.lambda_k_m_basis(m, k))


def test_untruncated_enumeration_requires_window():
    with pytest.raises(ValueError):
        la.lambda_k_m_basis(3, INF)
    words = la.lambda_k_m_basis(1, INF, t_max=6)
    # over the degree-1 sphere the words are iterated lambda_0's and friends
    assert (0,) in words and (0, 0) in words


def test_module_complex_of_sphere_matches_sphere_complex():
    for m in range(1, 6):
        for k in range(1, 4):
            mod = sphere(m, k, max_deg=m + 40)
            mcx = la.module_complex(mod, s_max=k + 1, a_max=m + 40)
            scx = la.sphere_complex(m, k)
            for (s, t), words in scx.basis.items():
                assert len(mcx.basis.get((s, m + t), [])) == len(words)


def test_module_complex_d2_on_random_modules():
    # construction asserts the zero composite internally
    rng = random.Random(42)
    for _ in range(10):
        mod = random_valid_module(rng, max_deg=14)
        s_cap = int(mod.k) + 1 if mod.k is not INF else 6
        la.module_complex(mod, s_max=s_cap, a_max=mod.max_deg)


def test_ehp_golden_maps():
    tri = la.ehp_maps(2, 2)
    mid_words = [w for ws in tri.mid.basis.values() for w in ws]
    for w in [(), (0,), (1,), (2,), (1, 2), (2, 3), (2, 4), (2, 4, 8)]:
        assert w in mid_words
    # the projection strips a leading index-2 generator
    for (s, t), h in tri.h_mats.items():
        words = tri.mid.basis[(s, t)]
        highs = tri.high.basis[(s - 1, t - 3)]
        for c, w in enumerate(words):
            for r, w2 in enumerate(highs):
                assert h.get(r, c) == (1 if w and w[0] == 2 and w[1:] == w2 else 0)
    # the embedded copy is the degree-2 truncation-2 basis, unchanged
    low_words = [w for ws in tri.low.basis.values() for w in ws]
    assert sorted(low_words) == sorted(golden_truncated_basis(2, 2))
    # projection drops a leading lambda_2 onto the degree-5 complex
    high_words = [w for ws in tri.high.basis.values() for w in ws]
    assert sorted(high_words) == sorted(golden_truncated_basis(5, 2))

import math
from fractions import Fraction

import pytest

from influence_lab import fourier, measures
from influence_lab.bounds import (
    correlation_decay,
    degree_lb_block_sensitivity,
    degree_lb_influence,
    displacement_lower_bound,
    displacement_upper_bound,
    flip_prob_bruteforce,
    flip_prob_spectral,
    query_lb_block_sensitivity,
    query_lb_degree,
    query_lb_influence,
    query_lb_influence_best,
    query_lb_influence_k,
)
from influence_lab.errors import CapacityError, InputError
from influence_lab.truthtable import TruthTable, builtin, random_table

AND2 = TruthTable.from_bits([0, 0, 0, 1])


def test_flip_prob_routes_agree(small_corpus):
    for n in (2, 3, 4, 5):
        for t in small_corpus[n][:6]:
            spec = fourier.wht(t)
            for k in (1, 3, 5):
                assert flip_prob_spectral(spec, k) == flip_prob_bruteforce(t, k)


def test_flip_prob_parity_is_one():
    spec = fourier.wht(builtin("parity", 4))
    for k in (1, 3, 5, 7, 9):
        assert flip_prob_spectral(spec, k) == 1
    assert flip_prob_bruteforce(builtin("parity", 4), 3) == 1


def test_flip_prob_k1_is_avg_influence(small_corpus):
    for t in small_corpus[4][:8]:
        assert flip_prob_spectral(fourier.wht(t), 1) == measures.avg_influence(t)


def test_flip_prob_and2():
    assert flip_prob_bruteforce(AND2, 1) == Fraction(1, 2)


def test_flip_prob_constant_zero():
    spec = fourier.wht(TruthTable(4, 0))
    for k in (1, 3):
        assert flip_prob_spectral(spec, k) == 0


def test_flip_prob_rejects_even_k():
    spec = fourier.wht(AND2)
    for k in (0, 2, -1, 4):
        with pytest.raises(InputError):
            flip_prob_spectral(spec, k)
        with pytest.raises(InputError):
            flip_prob_bruteforce(AND2, k)


def test_flip_prob_capacity():
    with pytest.raises(CapacityError):
        flip_prob_bruteforce(random_table(16, 0), 5)


def test_query_lb_influence_parity():
    assert query_lb_influence(1.0, 8, 0.0) == (4.0, False)
    # random-function corollary shape: rho = 1/2 gives (1 - 2 sqrt(eps))/4 * n
    b = query_lb_influence(0.5, 8, 0.04)
    assert b.value == pytest.approx((1 - 2 * 0.2) / 4 * 8, abs=1e-12)
    assert query_lb_influence(0.0, 8, 0.0).value == 0.0


def test_query_lb_influence_vacuous():
    assert query_lb_influence(1.0, 4, 0.25).vacuous
    assert query_lb_influence(1.0, 4, 0.3) == (0.0, True)
    assert not query_lb_influence(1.0, 4, 0.2).vacuous


def test_query_lb_monotone_in_eps():
    for fn in (
        lambda e: query_lb_influence(0.7, 6, e).value,
        lambda e: degree_lb_influence(0.7, 6, e),
    ):
        values = [fn(e) for e in (0.0, 0.05, 0.1, 0.2, 0.3, 0.45)]
        assert values == sorted(values, reverse=True)


def test_query_lb_k1_reduces_to_influence_bound(small_corpus):
    for t in small_corpus[5][:8]:
        spec = fourier.wht(t)
        rho = float(measures.avg_influence(t))
        for eps in (0.0, 0.04, 1 / 3, 0.6):
            assert query_lb_influence_k(spec, eps, 1).value == pytest.approx(
                query_lb_influence(rho, t.n, eps).value, abs=1e-12
            )


def test_query_lb_k_parity_exact():
    for n in (2, 5, 8):
        spec = fourier.wht(builtin("parity", n))
        for k in range(1, 16, 2):
            assert query_lb_influence_k(spec, 0.0, k).value == n / 2


def test_query_lb_k_constant():
    spec = fourier.wht(TruthTable(4, 0))
    assert query_lb_influence_k(spec, 0.0, 3).value == 0.0


def test_query_lb_k_rejects_even():
    spec = fourier.wht(AND2)
    with pytest.raises(InputError):
        query_lb_influence_k(spec, 0.0, 2)


def test_query_lb_best_picks_smallest_tie():
    spec = fourier.wht(builtin("parity", 4))
    k_star, best = query_lb_influence_best(spec, 0.0, 15)
    assert k_star == 1
    assert best.value == 2.0


def test_fixed_form_bounds():
    assert query_lb_block_sensitivity(9) == 0.75
    assert degree_lb_block_sensitivity(9) == pytest.approx(math.sqrt(1.5), abs=1e-15)
    assert query_lb_degree(0) == 0.0
    assert query_lb_degree(5) == 2.5
    # iterated family: BS = 3^k
    for k in (1, 2):
        assert degree_lb_block_sensitivity(3**k) == pytest.approx(
            math.sqrt(3**k / 6), abs=1e-15
        )
    with pytest.raises(InputError):
        query_lb_block_sensitivity(-1)


def test_degree_lb_influence_values():
    assert degree_lb_influence(1.0, 8, 1 / 3) == pytest.approx(8 / 64, abs=1e-12)
    assert degree_lb_influence(0.5, 8, 0.0) == 0.5 * 8 / 4
    assert degree_lb_influence(0.0, 8, 0.1) == 0.0
    with pytest.raises(InputError):
        degree_lb_influence(1.0, 8, 0.5)


def test_displacement_bounds_shapes():
    spec = fourier.wht(builtin("parity", 4))
    assert displacement_lower_bound(spec, 0.25, 1) == 0.0  # 2 - 4 sqrt(1/4) = 0
    assert displacement_lower_bound(spec, 1.0, 1) == 0.0  # clamped when negative
    assert displacement_upper_bound(4, 4, 3) == 4.0  # (-1)^3
    assert displacement_upper_bound(2, 4, 1) == 2.0  # zero base
    assert displacement_upper_bound(2, 4, 1, stated_form=True) == 1.0
    with pytest.raises(InputError):
        displacement_lower_bound(spec, 1.5, 1)
    with pytest.raises(InputError):
        displacement_upper_bound(5, 4, 1)
    with pytest.raises(InputError):
        displacement_upper_bound(2, 4, 2)


def test_correlation_decay_parseval_link():
    # at k=1 the decay is 1 - 2 rho, an exact identity through Parseval
    for seed in range(5):
        t = random_table(4, 700 + seed)
        spec = fourier.wht(t)
        assert correlation_decay(spec, 1) == 1 - 2 * measures.avg_influence(t)

from fractions import Fraction

import pytest

from influence_lab import fourier, oracles
from influence_lab.errors import CapacityError, InputError
from influence_lab.measures import (
    avg_influence,
    avg_sensitivity,
    block_sensitivity,
    block_sensitivity_at,
    influence,
    influences,
    max_sensitivity,
    measure_report,
    sensitivity_at,
    sensitivity_profile,
)
from influence_lab.truthtable import (
    TruthTable,
    builtin,
    complement,
    iterate,
    permute_variables,
    random_table,
)

AND2 = TruthTable.from_bits([0, 0, 0, 1])
PAPER_F = builtin("paper_f", 4)


def test_influence_families():
    for i in range(4):
        assert influence(builtin("parity", 4), i) == 1
    assert influence(AND2, 0) == Fraction(1, 2)
    assert influence(TruthTable(3, 0), 1) == 0
    with pytest.raises(InputError):
        influence(AND2, 2)


def test_avg_influence_equals_spectral(small_corpus):
    for tables in small_corpus.values():
        for t in tables:
            assert avg_influence(t) == fourier.avg_influence(fourier.wht(t))


def test_avg_sensitivity_equals_definition(small_corpus):
    for tables in small_corpus.values():
        for t in tables:
            by_enum = Fraction(int(sensitivity_profile(t).sum()), t.size)
            assert avg_sensitivity(t) == by_enum
            assert avg_sensitivity(t) == avg_influence(t) * t.n


def test_paper_family_avg_sensitivity():
    assert avg_sensitivity(PAPER_F) == Fraction(5, 2)
    assert avg_sensitivity(iterate(PAPER_F, 2)) == Fraction(25, 4)


def test_parity_avg_sensitivity():
    for n in (2, 5):
        assert avg_sensitivity(builtin("parity", n)) == n


def test_sensitivity_examples():
    assert sensitivity_at(AND2, (1, 1)) == 2
    assert sensitivity_at(TruthTable(4, 0), 5) == 0
    # case analysis for the 4-variable base function: S(x) = 2 + [x1 != x3]
    for x in range(16):
        x1, x3 = (x >> 1) & 1, (x >> 3) & 1
        assert sensitivity_at(PAPER_F, x) == 2 + (1 if x1 != x3 else 0)
    ms = max_sensitivity(PAPER_F)
    assert ms.value == 3
    assert sensitivity_at(PAPER_F, ms.witness) == 3


def test_sensitivity_profile_matches_pointwise():
    t = random_table(5, 77)
    profile = sensitivity_profile(t)
    for x in range(t.size):
        assert profile[x] == sensitivity_at(t, x)


def test_block_sensitivity_paper_f():
    result = block_sensitivity(PAPER_F)
    assert result.value == 3
    assert result.exact
    value, blocks = block_sensitivity_at(PAPER_F, 0b0001)  # x = (1,0,0,0)
    assert value == 3
    assert set(blocks) == {0b0010, 0b0100, 0b1001}  # {x1}, {x2}, {x0, x3}


def test_block_sensitivity_parity():
    for n in (3, 6):
        result = block_sensitivity(builtin("parity", n))
        assert result.value == n
        assert len(result.witness_blocks) == n


def test_block_sensitivity_witness_valid(small_corpus):
    for t in small_corpus[5][:6]:
        result = block_sensitivity(t)
        assert result.exact
        fx = t.bit_at(result.witness_input)
        combined = 0
        for block in result.witness_blocks:
            assert block != 0
            assert combined & block == 0  # pairwise disjoint
            combined |= block
            assert t.bit_at(result.witness_input ^ block) != fx
        assert len(result.witness_blocks) == result.value


def test_block_sensitivity_matches_naive(small_corpus):
    for n, tables in small_corpus.items():
        for t in tables:
            assert block_sensitivity(t).value == oracles.block_sensitivity_naive(t)


def test_block_sensitivity_at_matches_naive():
    for seed in range(8):
        t = random_table(4, 600 + seed)
        for x in range(t.size):
            value, blocks = block_sensitivity_at(t, x)
            assert value == oracles.block_sensitivity_naive_at(t, x)
            assert len(blocks) == value


def test_block_sensitivity_budget_flags_partial():
    t = random_table(10, 3)
    result = block_sensitivity(t, budget_seconds=0.0)
    assert not result.exact
    assert result.inputs_scanned < t.size
    assert result.value <= block_sensitivity(t).value


def test_block_sensitivity_capacity():
    with pytest.raises(CapacityError):
        block_sensitivity(random_table(17, 0))
    with pytest.raises(CapacityError):
        block_sensitivity_at(random_table(17, 0), 0)


def test_measures_invariant_under_complement():
    for seed in range(6):
        t = random_table(4, 400 + seed)
        c = complement(t)
        assert influences(t) == influences(c)
        assert max_sensitivity(t).value == max_sensitivity(c).value
        assert block_sensitivity(t).value == block_sensitivity(c).value


def test_measures_invariant_under_permutation():
    perm = [3, 0, 2, 1]
    for seed in range(6):
        t = random_table(4, 500 + seed)
        p = permute_variables(t, perm)
        assert sorted(influences(t)) == sorted(influences(p))
        assert avg_influence(t) == avg_influence(p)
        assert max_sensitivity(t).value == max_sensitivity(p).value
        assert block_sensitivity(t).value == block_sensitivity(p).value


def test_influence_spectral_identity(small_corpus):
    # Inf_i = sum of squared coefficients over masks containing i
    for t in small_corpus[4]:
        spec = fourier.wht(t)
        den = spec.denominator**2
        for i in range(t.n):
            masks = [s for s in range(t.size) if (s >> i) & 1]
            num = sum(int(spec.sums[s]) ** 2 for s in masks)
            assert influence(t, i) == Fraction(num, den)


def test_measure_report_consistency():
    report = measure_report(PAPER_F)
    assert report.avg_sensitivity == report.rho * report.n
    assert report.block_sensitivity is not None
    assert report.block_sensitivity.value == 3
    assert report.max_sensitivity == 3
    skipped = measure_report(PAPER_F, include_block_sensitivity=False)
    assert skipped.block_sensitivity is None
    assert skipped.bs_skipped_reason == "disabled"
    big = measure_report(random_table(17, 1))
    assert big.block_sensitivity is None
    assert "exceeds exact cap" in big.bs_skipped_reason

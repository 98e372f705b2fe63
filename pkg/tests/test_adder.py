"""Unit tests for the scalar adder model."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cesa.adder import (AdderConfig, BlockOperands, Variant, Word, add_approx,
                        add_exact, block_sum, ceu, estimate_block_carry,
                        exact_carry_at, perl, su)


def test_ceu_known_cases():
    assert ceu(1, 1, 0, 0) == 1  # top pair generates
    assert ceu(0, 0, 1, 1) == 0  # top pair kills, lower bits irrelevant
    assert ceu(1, 0, 1, 1) == 1  # lower pair generates into a propagating top
    assert ceu(0, 1, 0, 1) == 0  # both pairs propagate -> guess 0


def test_perl_equals_ceu_on_all_16_combinations():
    for combo in range(16):
        bits = ((combo >> 3) & 1, (combo >> 2) & 1, (combo >> 1) & 1, combo & 1)
        assert perl(*bits) == ceu(*bits)


def test_perl_generate_under_propagate():
    assert perl(1, 0, 1, 1) == 1
    assert perl(0, 0, 0, 0) == 0


def test_su_cases():
    assert su(1, 0, 0, 1) == 1  # both pairs propagate
    assert su(1, 1, 0, 1) == 0  # top pair generates
    assert su(0, 0, 0, 0) == 0  # top pair kills


def test_block_sum_examples():
    assert block_sum(0b1111, 0b0001, 0, 4) == (0b0000, 1)
    assert block_sum(0b0000, 0b0000, 1, 4) == (0b0001, 0)
    assert block_sum(0b1010, 0b0101, 0, 4) == (0b1111, 0)


def test_block_sum_exhaustive_k3():
    for a in range(8):
        for b in range(8):
            for cin in (0, 1):
                total = a + b + cin
                assert block_sum(a, b, cin, 3) == (total & 7, total >> 3)


def test_block_sum_rejects_out_of_range():
    with pytest.raises(ValueError):
        block_sum(16, 0, 0, 4)
    with pytest.raises(ValueError):
        block_sum(0, 0, 2, 4)


@pytest.mark.parametrize("width,block,variant", [
    (8, 4, Variant.CESA),
    (8, 2, Variant.CESA),
    (32, 8, Variant.CESA_PERL),
    (8, 8, Variant.EXACT),
])
def test_config_accepts_valid(width, block, variant):
    config = AdderConfig(width, block, variant)
    assert config.n_blocks == width // block
    assert config.boundary_positions[-1] == width


@pytest.mark.parametrize("width,block,variant", [
    (8, 3, Variant.CESA),          # k does not divide n
    (8, 1, Variant.CESA),          # below CESA minimum
    (8, 2, Variant.CESA_PERL),     # below CESA-PERL minimum
    (1, 1, Variant.EXACT),         # width too small
    (80, 8, Variant.CESA),         # width too large
])
def test_config_rejects_invalid(width, block, variant):
    with pytest.raises(ValueError):
        AdderConfig(width, block, variant)


def test_variant_parsing():
    assert Variant.from_string("cesa-perl") is Variant.CESA_PERL
    assert Variant.from_string("CESA_PERL") is Variant.CESA_PERL
    with pytest.raises(ValueError):
        Variant.from_string("carry-select")


def test_word_validation():
    assert Word(255, 8).value == 255
    with pytest.raises(ValueError):
        Word(256, 8)
    with pytest.raises(ValueError):
        Word(-1, 8)


def test_estimator_disagreement_on_15_plus_1():
    # top pairs propagate: CESA guesses 0 while the exact carry is 1; PERL
    # spots the generate at bit 0 and rectifies
    block = BlockOperands(0b1111, 0b0001, 0)
    plain = estimate_block_carry(block, AdderConfig(8, 4, Variant.CESA))
    assert (plain.c_ceu, plain.sel, plain.c_perl, plain.c_out) == (0, 1, None, 0)
    rectified = estimate_block_carry(block, AdderConfig(8, 4, Variant.CESA_PERL))
    assert (rectified.c_perl, rectified.c_out) == (1, 1)
    assert exact_carry_at(0b1111, 0b0001, 4) == 1


def test_estimator_all_kill_block():
    block = BlockOperands(0, 0, 0)
    for variant in (Variant.CESA, Variant.CESA_PERL):
        assert estimate_block_carry(block, AdderConfig(8, 4, variant)).c_out == 0


def test_estimator_rejects_exact_variant():
    with pytest.raises(ValueError):
        estimate_block_carry(BlockOperands(0, 0, 0), AdderConfig(8, 4, Variant.EXACT))


def test_carry_selection_contract():
    # c_out follows c_ceu when sel = 0 and c_perl when sel = 1
    config = AdderConfig(8, 4, Variant.CESA_PERL)
    for a in range(16):
        for b in range(16):
            signals = estimate_block_carry(BlockOperands(a, b, 0), config)
            expected = signals.c_perl if signals.sel else signals.c_ceu
            assert signals.c_out == expected


def test_add_approx_15_plus_1():
    cesa = add_approx(15, 1, AdderConfig(8, 4, Variant.CESA))
    assert cesa.extended_value == 0
    assert cesa.sum.value == 0
    assert cesa.carry_out == 0
    rectified = add_approx(15, 1, AdderConfig(8, 4, Variant.CESA_PERL))
    assert rectified.extended_value == 16
    assert rectified.sum.value == 0b00010000


def test_add_approx_zero_identity():
    for variant in (Variant.CESA, Variant.CESA_PERL):
        config = AdderConfig(8, 4, variant)
        assert add_approx(0, 0, config).extended_value == 0
        for x in range(256):
            assert add_approx(x, 0, config).extended_value == x
            assert add_approx(0, x, config).extended_value == x


def test_add_approx_boundary_carries_shape():
    config = AdderConfig(8, 2, Variant.CESA)
    result = add_approx(201, 73, config)
    assert len(result.boundary_carries) == 4
    assert result.boundary_carries[-1] == result.carry_out


def test_add_exact_basics():
    result = add_exact(255, 255, 8)
    assert result.extended_value == 510
    assert result.carry_out == 1
    assert add_exact(15, 1, 8).extended_value == 16
    # true carry crosses bit 4 for 15 + 1
    assert add_exact(15, 1, 8, block_size=4).boundary_carries == (1, 0)


def test_add_exact_boundaries_are_true_carries():
    result = add_exact(0b10110101, 0b01101011, 8, block_size=2)
    for pos, carry in zip((2, 4, 6, 8), result.boundary_carries):
        assert carry == exact_carry_at(0b10110101, 0b01101011, pos)


def test_add_approx_exact_variant_delegates():
    config = AdderConfig(8, 4, Variant.EXACT)
    result = add_approx(200, 100, config)
    assert result.extended_value == 300
    assert result.boundary_carries == (
        exact_carry_at(200, 100, 4), exact_carry_at(200, 100, 8))


def test_operand_validation():
    config = AdderConfig(8, 4, Variant.CESA)
    with pytest.raises(ValueError):
        add_approx(256, 0, config)
    with pytest.raises(ValueError):
        add_approx(Word(3, 16), Word(1, 16), config)
    assert add_approx(Word(15, 8), Word(1, 8), config).extended_value == 0


def test_single_block_matches_exact_sampled():
    for variant in (Variant.CESA, Variant.CESA_PERL):
        config = AdderConfig(8, 8, variant)
        for a in range(0, 256, 7):
            for b in range(0, 256, 5):
                assert add_approx(a, b, config).extended_value == a + b


def _config_strategy():
    def build(width):
        choices = []
        for variant in (Variant.CESA, Variant.CESA_PERL):
            for k in range(variant.min_block_size(), width + 1):
                if width % k == 0:
                    choices.append(AdderConfig(width, k, variant))
        return st.sampled_from(choices)
    return st.integers(min_value=4, max_value=24).flatmap(build)


@settings(max_examples=200, deadline=None)
@given(data=st.data(), config=_config_strategy())
def test_property_commutative_and_under_approximate(data, config):
    top = (1 << config.width) - 1
    a = data.draw(st.integers(min_value=0, max_value=top))
    b = data.draw(st.integers(min_value=0, max_value=top))
    left = add_approx(a, b, config)
    right = add_approx(b, a, config)
    assert left.extended_value == right.extended_value
    assert left.extended_value <= a + b
    assert len(left.boundary_carries) == config.n_blocks
    assert left.boundary_carries[-1] == left.carry_out
    # estimated boundary carries never overshoot the exact ones
    exact = add_exact(a, b, config.width, config.block_size)
    for est, true in zip(left.boundary_carries[:-1], exact.boundary_carries):
        assert est <= true

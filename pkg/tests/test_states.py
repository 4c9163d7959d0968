"""Tests for state constructors and the exchange-flip symmetry."""

from math import comb

import numpy as np
import pytest

from merminkit.states import (
    StateVector,
    dicke,
    exchange_flip,
    ghz,
    is_exchange_symmetric,
    pack_basis_word,
    sym_coeff_count,
    sym_dicke,
    unpack_basis_word,
)

from conftest import random_nonzero_coeffs


class TestBasisPacking:
    def test_qubit_one_is_most_significant(self):
        assert pack_basis_word((2, 1, 1)) == 0b100
        assert pack_basis_word((1, 1, 2)) == 0b001

    def test_round_trip(self):
        for index in range(16):
            assert pack_basis_word(unpack_basis_word(index, 4)) == index

    def test_rejects_bad_letters(self):
        with pytest.raises(ValueError):
            pack_basis_word((1, 0, 2))


class TestGhz:
    @pytest.mark.parametrize("n", [3, 4])
    def test_two_unit_amplitudes(self, n):
        v = ghz(n)
        assert v.amps[0] == 1
        assert v.amps[(1 << n) - 1] == 1
        assert np.count_nonzero(v.amps) == 2

    def test_exchange_symmetric(self):
        for n in (3, 4):
            assert exchange_flip(ghz(n)) == ghz(n)

    def test_unsupported_size(self):
        with pytest.raises(ValueError):
            ghz(2)


class TestDicke:
    @pytest.mark.parametrize("n,m", [(3, 1), (4, 1), (4, 2)])
    def test_weight_m_support(self, n, m):
        v = dicke(n, m)
        assert np.count_nonzero(v.amps) == comb(n, m)
        for index in range(1 << n):
            weight = bin(index).count("1")
            assert v.amps[index] == (1 if weight == m else 0)

    def test_w_state_layout(self):
        v = dicke(3, 1)
        for word in ((1, 1, 2), (1, 2, 1), (2, 1, 1)):
            assert v.amps[pack_basis_word(word)] == 1

    def test_not_exchange_symmetric_when_unbalanced(self):
        assert exchange_flip(dicke(4, 1)) != dicke(4, 1)
        assert not is_exchange_symmetric(dicke(3, 1))

    def test_degree_out_of_range(self):
        with pytest.raises(ValueError):
            dicke(3, 2)
        with pytest.raises(ValueError):
            dicke(4, 0)


class TestSymDicke:
    def test_w_family_all_ones(self):
        v = sym_dicke(3, 1)
        for word in ((1, 1, 2), (1, 2, 1), (2, 1, 1),
                     (2, 2, 1), (2, 1, 2), (1, 2, 2)):
            assert v.amps[pack_basis_word(word)] == 1
        assert np.count_nonzero(v.amps) == 6

    def test_w_family_pair_layout(self):
        v = sym_dicke(3, 1, (1, 2, 5))
        expected = {0b100: 1, 0b011: 1, 0b010: 2, 0b101: 2, 0b001: 5, 0b110: 5}
        for index in range(8):
            assert v.amps[index] == expected.get(index, 0)

    def test_four_qubit_degree_one_layout(self):
        # direct construction: coefficient k weights the pair whose
        # representative has e2 on qubit k
        v = sym_dicke(4, 1, (1, 2, 3, 4))
        expected = {
            0b1000: 1, 0b0111: 1,
            0b0100: 2, 0b1011: 2,
            0b0010: 3, 0b1101: 3,
            0b0001: 4, 0b1110: 4,
        }
        for index in range(16):
            assert v.amps[index] == expected.get(index, 0)

    def test_balanced_family_with_unit_coeffs_is_plain_dicke(self):
        assert sym_dicke(4, 2, (1, 1, 1)) == dicke(4, 2)

    def test_w_symmetrization_is_state_plus_flip(self):
        v = dicke(3, 1)
        combined = StateVector(3, v.amps + exchange_flip(v).amps)
        assert sym_dicke(3, 1) == combined

    def test_flip_invariant_for_random_coeffs(self, rng):
        for n, m in ((3, 1), (4, 1), (4, 2)):
            for k in range(20):
                coeffs = random_nonzero_coeffs(
                    rng, sym_coeff_count(n, m), complex_valued=(k % 2 == 0)
                )
                v = sym_dicke(n, m, coeffs)
                assert exchange_flip(v) == v

    def test_zero_coefficient_rejected(self):
        with pytest.raises(ValueError):
            sym_dicke(3, 1, (1, 0, 1))

    def test_wrong_count_rejected(self):
        with pytest.raises(ValueError):
            sym_dicke(4, 1, (1, 2, 3))

    def test_unknown_family_rejected(self):
        with pytest.raises(ValueError):
            sym_dicke(4, 3)
        with pytest.raises(ValueError):
            sym_coeff_count(5, 1)


class TestExchangeFlip:
    def test_moves_amplitudes_to_complement(self, rng):
        amps = rng.standard_normal(8) + 1j * rng.standard_normal(8)
        v = StateVector(3, amps)
        flipped = exchange_flip(v)
        for index in range(8):
            assert flipped.amps[7 ^ index] == amps[index]

    def test_involution(self, rng):
        amps = rng.standard_normal(16) + 1j * rng.standard_normal(16)
        v = StateVector(4, amps)
        assert exchange_flip(exchange_flip(v)) == v


class TestStateVector:
    def test_shape_validation(self):
        with pytest.raises(ValueError):
            StateVector(3, np.zeros(4))

    def test_immutable(self):
        v = ghz(3)
        with pytest.raises(AttributeError):
            v.n = 4
        with pytest.raises(ValueError):
            v.amps[0] = 5

    def test_json_round_trip(self, rng):
        amps = rng.standard_normal(8) + 1j * rng.standard_normal(8)
        v = StateVector(3, amps)
        assert StateVector.from_json_dict(v.to_json_dict()) == v

    def test_norm_sq(self):
        assert dicke(3, 1).norm_sq == 3.0
        assert ghz(4).norm_sq == 2.0

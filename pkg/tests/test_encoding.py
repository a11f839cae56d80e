import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracle
from catdiscord.discord import brute_force_discord, build_K, geometric_discord
from catdiscord.encoding import (
    discord_encoded,
    encode,
    l_values,
    logical_amplitudes,
    r_tensor,
    scheme_equivalence_report,
)
from catdiscord.errors import DimensionError
from catdiscord.fano_bloch import full_tensor, recursive_tensor
from catdiscord.states import CatSpec, Parity, reduced_density

TOL = 1e-12


@st.composite
def cat_points(draw, max_n=8, min_k=2, max_k=8):
    n = draw(st.integers(max(2, min_k), max_n))
    k = draw(st.integers(min_k, min(n, max_k)))
    p = draw(st.floats(0.0, 0.99))
    return CatSpec(n, p, draw(st.sampled_from([Parity.EVEN, Parity.ODD]))), k


def logical_isometry(spec, k):
    """Columns: |0_L>, |1_L> spanned by the (k-1)-fold coherent products."""
    plus = oracle.kron_all([oracle.coherent_qubit(spec.p, 1)] * (k - 1))
    minus = oracle.kron_all([oracle.coherent_qubit(spec.p, -1)] * (k - 1))
    bp, bm = logical_amplitudes(spec, k)
    zero_l = (plus + minus) / (2 * bp)
    one_l = (plus - minus) / (2 * bm)
    return np.column_stack([zero_l, one_l])


class TestEncode:
    @given(st.integers(2, 7), st.floats(0, 0.99), st.sampled_from([Parity.EVEN, Parity.ODD]))
    def test_one_qubit_encoding_is_identity(self, n, p, parity):
        spec = CatSpec(n, p, parity)
        np.testing.assert_allclose(encode(spec, 2).matrix, reduced_density(spec, 2), atol=TOL)

    def test_entry_value(self):
        enc = encode(CatSpec(4, 0.5), 3)
        assert enc.matrix[0, 0].real == pytest.approx(45 / 68, abs=TOL)
        assert enc.b_plus**2 == pytest.approx(5 / 8)

    @settings(max_examples=30)
    @given(cat_points(max_n=7, min_k=3))
    def test_isometry_oracle(self, point):
        # conjugating the reduced state by the logical isometry gives the encoded state
        spec, k = point
        V = np.kron(np.eye(2), logical_isometry(spec, k))
        rho = oracle.reduced(spec.n, k, spec.p, int(spec.parity))
        np.testing.assert_allclose(V.conj().T @ rho @ V, encode(spec, k).matrix, atol=1e-11)

    @settings(max_examples=30)
    @given(cat_points())
    def test_density_invariants(self, point):
        spec, k = point
        m = encode(spec, k).matrix
        assert np.trace(m).real == pytest.approx(1.0, abs=TOL)
        np.testing.assert_allclose(m, m.conj().T, atol=TOL)
        assert np.linalg.eigvalsh(m)[0] >= -1e-12
        # X state: zero outside diagonal and antidiagonal
        mask = ~(np.eye(4, dtype=bool) | np.eye(4, dtype=bool)[::-1])
        assert np.max(np.abs(m[mask])) == 0

    def test_bad_k(self):
        with pytest.raises(DimensionError):
            encode(CatSpec(3, 0.2), 1)
        with pytest.raises(DimensionError):
            encode(CatSpec(3, 0.2), 4)


class TestRTensor:
    def test_two_qubits_match_tensor(self):
        spec = CatSpec(4, 0.5)
        np.testing.assert_allclose(r_tensor(spec, 2).as_matrix(), recursive_tensor(spec, 2).cube, atol=TOL)

    @pytest.mark.parametrize("n, k", [(3, 2), (5, 3), (6, 5)])
    def test_ghz_limit(self, n, k):
        R = r_tensor(CatSpec(n, 0.0), k).as_matrix()
        expected = np.zeros((4, 4))
        expected[0, 0] = expected[1, 1] = 1
        np.testing.assert_allclose(R, expected, atol=TOL)

    def test_value(self):
        R = r_tensor(CatSpec(4, 0.5), 3)
        assert R.r11 == pytest.approx(16 / 17 * math.sqrt(0.75 * 0.9375), abs=TOL)
        assert R.r11 == pytest.approx(0.789200, abs=1e-6)

    @settings(max_examples=30)
    @given(cat_points())
    def test_matches_tensor_of_encoded_state(self, point):
        spec, k = point
        np.testing.assert_allclose(full_tensor(encode(spec, k).matrix).cube, r_tensor(spec, k).as_matrix(), atol=TOL)


class TestLogicalDiscord:
    def test_bell(self):
        assert discord_encoded(CatSpec(2, 0.0), 2) == pytest.approx(0.5, abs=1e-14)

    def test_three_qubits(self):
        spec = CatSpec(4, 0.5)
        assert discord_encoded(spec, 3) == pytest.approx(geometric_discord(spec, 3), abs=1e-14)
        assert discord_encoded(spec, 3) == pytest.approx(0.194637, abs=1e-6)

    @pytest.mark.parametrize("n, k", [(3, 2), (5, 2), (5, 4), (8, 6)])
    def test_product_limit(self, n, k):
        assert discord_encoded(CatSpec(n, 1.0), k) <= 1e-15

    @settings(max_examples=40)
    @given(cat_points())
    def test_spectrum_scaling(self, point):
        spec, k = point
        K = build_K(recursive_tensor(spec, k))
        scaled = 2 ** (k - 2) * np.array(l_values(spec, k))
        scale = max(np.max(np.abs(scaled)), 1e-300)
        assert np.max(np.abs(np.diag(K) - scaled)) / scale <= 1e-10

    def test_four_qubits_scaling(self):
        spec = CatSpec(6, 0.3)
        K = build_K(recursive_tensor(spec, 4))
        np.testing.assert_allclose(np.diag(K), 4 * np.array(l_values(spec, 4)), atol=1e-10)

    @settings(max_examples=15, deadline=None)
    @given(cat_points(max_n=7, max_k=7))
    def test_brute_force_on_encoded_state(self, point):
        spec, k = point
        d, _ = brute_force_discord(encode(spec, k).matrix)
        assert d == pytest.approx(discord_encoded(spec, k), abs=1e-8)


class TestSchemeEquivalence:
    def test_two_qubits(self):
        rep = scheme_equivalence_report(CatSpec(4, 0.5), 2)
        assert rep.ratio == pytest.approx(1.0)
        assert set(rep.relations) == {"1", "2^(k-2)"}

    def test_three_qubits_odd(self):
        rep = scheme_equivalence_report(CatSpec(5, 0.6, Parity.ODD), 3)
        assert rep.ratio == pytest.approx(1.0, abs=1e-12)
        assert rep.relations == ("1",)
        assert set(rep.brute_matches) == {"recursive", "encoded"}

    def test_vanishing_discord(self):
        rep = scheme_equivalence_report(CatSpec(5, 0.0), 3)
        assert math.isnan(rep.ratio)
        assert rep.d_brute <= 1e-12

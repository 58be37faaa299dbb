"""Code-set construction, fixtures, and matrix formatting."""

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from udcdma import codebook


def test_fixture_c4x5(c4_eq14):
    assert np.array_equal(c4_eq14.entries, codebook.load_fixture("c4x5_eq14.txt"))


def test_fixture_c8x13_eq14(c8_eq14):
    assert np.array_equal(c8_eq14.entries,
                          codebook.load_fixture("c8x13_eq14.txt"))


def test_fixture_c8x13_eq10(c8_eq10):
    assert np.array_equal(c8_eq10.entries,
                          codebook.load_fixture("c8x13_eq10.txt"))


def test_fixture_c16x33_eq14(c16_eq14):
    assert np.array_equal(c16_eq14.entries,
                          codebook.load_fixture("c16x33_eq14.txt"))


def test_shapes_and_overload():
    for L, K in ((4, 5), (8, 13), (16, 33)):
        C = codebook.build_code_set(L, "eq14")
        assert (C.L, C.K) == (L, K)
        assert C.entries.shape == (L, K)
        assert K > L  # overloaded: more users than chips


def test_gamma():
    assert codebook.gamma(8) == 12
    assert codebook.gamma(16) == 32


def test_sylvester_hadamard():
    for p in (1, 2, 3, 4):
        H = codebook.sylvester_hadamard(p)
        n = 1 << p
        assert H.shape == (n, n)
        assert np.array_equal(H @ H.T, n * np.eye(n, dtype=np.int64))
        assert np.all(H[0] == 1) and np.all(H[:, 0] == 1)


def test_first_l_columns_are_hadamard():
    for L in (4, 8, 16):
        C = codebook.build_code_set(L, "eq14")
        H = codebook.sylvester_hadamard(L.bit_length() - 1)
        assert np.array_equal(C.entries[:, :L], H)


def test_entries_are_antipodal():
    for L, var in ((8, "eq10"), (16, "eq14")):
        C = codebook.build_code_set(L, var)
        assert set(np.unique(C.entries)) == {-1, 1}


def test_non_power_of_two_length():
    C = codebook.build_code_set(12, "eq14")
    assert (C.L, C.K) == (12, 20)
    assert np.all(C.entries[0] == 1)
    assert set(np.unique(C.entries)) == {-1, 1}


def test_rejects_bad_length_and_variant():
    with pytest.raises(ValueError):
        codebook.build_code_set(6, "eq14")
    with pytest.raises(ValueError):
        codebook.build_code_set(8, "eq99")


def test_to_binary(c8_eq14):
    B = codebook.to_binary(c8_eq14)
    assert (B.L, B.K) == (8, 13)
    assert set(np.unique(B.entries)) <= {0, 1}
    assert np.all(B.entries[0] == 1)
    # the binary image is the sign-normalized antipodal set shifted to {0,1}
    A = c8_eq14.entries * c8_eq14.entries[0:1, :]
    assert np.array_equal(2 * B.entries.astype(np.int64) - 1, A)


def test_format_parse_round_trip(c8_eq10):
    E = c8_eq10.entries
    assert np.array_equal(codebook.parse_figure(codebook.format_figure(E)), E)


def test_format_csv(c4_eq14):
    text = codebook.format_csv(c4_eq14.entries)
    rows = [r.split(",") for r in text.splitlines()]
    assert len(rows) == 4 and all(len(r) == 5 for r in rows)
    assert set(v for r in rows for v in r) <= {"1", "-1"}


@given(arrays(np.int8, (6, 9), elements=st.sampled_from([-1, 1])))
def test_parse_figure_inverts_format_figure(E):
    assert np.array_equal(codebook.parse_figure(codebook.format_figure(E)), E)

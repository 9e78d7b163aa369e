import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wavematch.compress import prd
from wavematch.errors import PlanError, ShapeError
from wavematch.filterbank import NAMED_WAVELETS, filter_pair, pollen_filter
from wavematch.transform import DwtCoeffs, coeff_csv_rows, dwt, idwt

from oracles import dwt_matrix_oracle, transform_matrix

HAAR = filter_pair("haar")


def _filters(rng, n_random=5):
    fs = [filter_pair(name) for name in NAMED_WAVELETS]
    fs += [pollen_filter(tuple(rng.uniform(-math.pi, math.pi, 2))) for _ in range(n_random)]
    return fs


def test_haar_constant_one_level():
    c = dwt([1, 1, 1, 1], HAAR, 1)
    np.testing.assert_allclose(c.details[0], [0, 0], atol=1e-15)
    np.testing.assert_allclose(c.approx, [math.sqrt(2), math.sqrt(2)])


def test_haar_constant_two_levels():
    c = dwt([1, 1, 1, 1], HAAR, 2)
    np.testing.assert_allclose(c.details[0], [0, 0], atol=1e-15)
    np.testing.assert_allclose(c.details[1], [0], atol=1e-15)
    np.testing.assert_allclose(c.approx, [2.0])


@pytest.mark.parametrize("n", [8, 16])
def test_matches_matrix_oracle(rng, n):
    for f in _filters(rng):
        for levels in range(1, int(math.log2(n)) + 1):
            x = rng.standard_normal(n)
            got = dwt(x, f, levels).flat()
            np.testing.assert_allclose(got, dwt_matrix_oracle(x, f.h, f.g, levels), atol=1e-10)


def test_oracle_matrix_is_orthonormal(rng):
    for f in _filters(rng):
        q = transform_matrix(16, f.h, f.g, 4)
        np.testing.assert_allclose(q.T @ q, np.eye(16), atol=1e-10)


def test_haar_matrix_rows_by_hand():
    q = transform_matrix(4, HAAR.h, HAAR.g, 2)
    expected = np.array([
        [0.5, 0.5, 0.5, 0.5],
        [0.5, 0.5, -0.5, -0.5],
        [1 / math.sqrt(2), -1 / math.sqrt(2), 0, 0],
        [0, 0, 1 / math.sqrt(2), -1 / math.sqrt(2)],
    ])
    np.testing.assert_allclose(q, expected, atol=1e-15)


def test_matrix_oracle_refuses_large_n():
    with pytest.raises(ValueError):
        transform_matrix(64, HAAR.h, HAAR.g, 1)


def test_perfect_reconstruction_and_parseval(rng):
    for f in _filters(rng, n_random=10):
        for levels in (1, 5, 12):
            x = rng.standard_normal(4096)
            c = dwt(x, f, levels)
            assert len(c) == 4096
            assert abs(c.energy() - x @ x) <= 1e-9 * (x @ x)
            y = idwt(c, f)
            assert np.max(np.abs(y - x)) < 1e-10
            assert prd(x, y) < 1e-8


def test_level_lengths():
    c = dwt(np.arange(64.0), filter_pair("db3"), 4)
    assert [len(d) for d in c.details] == [32, 16, 8, 4]
    assert len(c.approx) == 4


@given(st.floats(-5, 5), st.floats(-5, 5))
@settings(max_examples=50, deadline=None)
def test_linearity(alpha, beta):
    rng = np.random.default_rng(7)
    x, y = rng.standard_normal((2, 256))
    f = filter_pair("coif1")
    lhs = dwt(alpha * x + beta * y, f, 6).flat()
    rhs = alpha * dwt(x, f, 6).flat() + beta * dwt(y, f, 6).flat()
    np.testing.assert_allclose(lhs, rhs, atol=1e-10)


def test_zero_coefficients_give_zero_signal():
    c = DwtCoeffs.from_flat(np.zeros(64), 3)
    np.testing.assert_array_equal(idwt(c, filter_pair("db2")), np.zeros(64))


@pytest.mark.parametrize("levels", [1, 2, 3, 5])
def test_haar_unit_approximation_coefficient(levels):
    # synthesis of a_J0 = e_0 is a block of 2**J0 samples of height 2**(-J0/2)
    flat = np.zeros(32)
    flat[0] = 1.0
    y = idwt(DwtCoeffs.from_flat(flat, levels), HAAR)
    expected = np.zeros(32)
    expected[:2 ** levels] = 2.0 ** (-levels / 2)
    np.testing.assert_allclose(y, expected, atol=1e-15)


def test_flat_roundtrip(rng):
    x = rng.standard_normal(128)
    c = dwt(x, filter_pair("db3"), 5)
    c2 = DwtCoeffs.from_flat(c.flat(), 5)
    np.testing.assert_array_equal(c2.flat(), c.flat())
    assert c.flat()[:4].tolist() == c.approx.tolist()
    assert c.flat()[-64:].tolist() == c.details[0].tolist()


@pytest.mark.parametrize("n", [0, 1, 3, 6, 100])
def test_rejects_non_power_of_two(n):
    with pytest.raises(ShapeError):
        dwt(np.ones(n), HAAR, 1)


def test_rejects_non_finite():
    x = np.ones(8)
    x[3] = np.nan
    with pytest.raises(ShapeError):
        dwt(x, HAAR, 1)


@pytest.mark.parametrize("levels", [0, 4, -1])
def test_rejects_bad_levels(levels):
    with pytest.raises(PlanError):
        dwt(np.ones(8), HAAR, levels)


def test_idwt_rejects_mismatched_levels():
    c = DwtCoeffs([np.zeros(4), np.zeros(3)], np.zeros(2))
    with pytest.raises(ShapeError):
        idwt(c, HAAR)


def test_coeff_csv():
    c = dwt([1.0, 2.0, 3.0, 4.0], HAAR, 1)
    rows = list(coeff_csv_rows(c))
    assert rows[0] == "level,index,value"
    assert [r.split(",")[:2] for r in rows[1:]] == [["0", "0"], ["0", "1"], ["1", "0"], ["1", "1"]]
    assert float(rows[1].split(",")[2]) == c.approx[0]

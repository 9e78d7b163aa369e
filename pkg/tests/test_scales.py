import math

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from wavematch.errors import InvalidParameterError
from wavematch.filterbank import NAMED_WAVELETS, PollenPoint, Wavelet, filter_pair
from wavematch.scales import (SPECIES_FC_CPM, center_frequency, pseudo_frequencies, scale_selection,
                              select_levels)

REFERENCE_J0 = {  # wavelet: (canine J0, human J0)
    "haar": (7, 8),
    "db2": (6, 7),
    "db3": (7, 7),
    "coif1": (7, 7),
}


@pytest.mark.parametrize("name,approx", [("haar", 0.996), ("db2", 0.667), ("db3", 0.80), ("coif1", 0.80)])
def test_center_frequency_values(name, approx):
    assert center_frequency(name) == pytest.approx(approx, abs=5e-3)


@pytest.mark.parametrize("name,bin_", [("haar", 1), ("db2", 2), ("db3", 4), ("coif1", 4)])
def test_center_frequency_is_support_window_bin(name, bin_):
    # the DFT window is the support [0, L - 1]
    support = len(filter_pair(name)) - 1
    assert center_frequency(name) == pytest.approx(bin_ / support, rel=1e-12)


def test_haar_zero_padded_peak_matches_continuous_spectrum():
    # |Psi(f)| = 2 sin^2(pi f / 2) / (pi f) peaks where tan(x) = 2x, x = pi f / 2
    x = 1.1655611852072114
    for _ in range(50):
        x -= (math.tan(x) - 2 * x) / (1 / math.cos(x) ** 2 - 2)
    assert center_frequency("haar", oversample=64) == pytest.approx(2 * x / math.pi, abs=1e-3)


def test_center_frequency_bounds(rng):
    ws = [Wavelet(n) for n in NAMED_WAVELETS]
    ws += [Wavelet.pollen(*rng.uniform(-math.pi, math.pi, 2)) for _ in range(20)]
    for w in ws:
        f = center_frequency(w)
        assert 0 < f < len(filter_pair(w))


def test_center_frequency_accepts_points():
    assert center_frequency(PollenPoint(0.3, -0.4)) == center_frequency(Wavelet.pollen(0.3, -0.4))


@pytest.mark.parametrize("name", NAMED_WAVELETS)
def test_reference_scale_counts(name):
    canine = select_levels(center_frequency(name), 0.1, SPECIES_FC_CPM["canine"] / 60, 12)
    human = select_levels(center_frequency(name), 0.1, SPECIES_FC_CPM["human"] / 60, 12)
    assert (canine, human) == REFERENCE_J0[name]


def test_haar_canine_pseudo_frequency_in_band():
    f = pseudo_frequencies(center_frequency("haar"), 0.1, 12)[6] * 60
    assert 4 <= f <= 6


def test_tie_goes_to_fewer_levels():
    # pseudo-frequencies 0.5, 0.25: f_c = 0.375 is equidistant
    assert select_levels(1.0, 1.0, 0.375, 4) == 1


@given(st.floats(0.1, 2.0), st.floats(0.01, 1.0), st.floats(1e-3, 1.0))
def test_pseudo_frequency_decreasing_and_argmin(f_psi, ts, fc):
    p = pseudo_frequencies(f_psi, ts, 12)
    assert np.all(np.diff(p) < 0)
    j = select_levels(f_psi, ts, fc, 12)
    assert abs(p[j - 1] - fc) == np.min(np.abs(p - fc))


@given(st.floats(0.1, 2.0), st.floats(0.01, 1.0), st.floats(1e-3, 1.0))
def test_doubling_sample_period_drops_one_level(f_psi, ts, fc):
    j = select_levels(f_psi, ts, fc, 14)
    j2 = select_levels(f_psi, 2 * ts, fc, 14)
    assume(2 < j < 14)
    assume(abs(abs(pseudo_frequencies(f_psi, ts, 14)[j - 1] - fc)
               - np.sort(np.abs(pseudo_frequencies(f_psi, ts, 14) - fc))[1]) > 1e-12)
    assert j2 == j - 1


@pytest.mark.parametrize("args", [(0, 0.1, 0.1, 5), (1, 0, 0.1, 5), (1, 0.1, -1, 5), (1, 0.1, 0.1, 0)])
def test_select_levels_errors(args):
    with pytest.raises(InvalidParameterError):
        select_levels(*args)


def test_report_lines():
    sel = scale_selection("haar", 5.0)
    lines = sel.report_lines()
    assert lines[-1] == "J0=7"
    assert any(line.startswith("7,") and line.endswith("*") for line in lines)
    assert sel.pseudo_frequencies[6] * 60 == pytest.approx(center_frequency("haar") / 12.8 * 60)

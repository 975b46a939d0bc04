import math

import numpy as np
import pytest

from cloakforge import layered as ly
from cloakforge.designer import REFERENCE_PROFILES
from cloakforge.errors import InvalidArgumentError
from cloakforge.lowfreq import (ExpansionTable, extract_expansion, label_name, max_log_power,
                                nonzero_coefficient_list, transfer_row_series, w_series)
from cloakforge.powerlog import series_inv

from conftest import random_structure, w_reference

BARE = ly.bare_neumann_disk()


def test_bare_disk_leading_coefficient_vs_richardson():
    ts = [1e-2, 1e-3, 1e-4]
    q = [ly.scattering_coefficient(BARE, t, 1) / t ** 2 for t in ts]
    # remainder ~ t^2 ln t: eliminate it between the two smallest points
    lim = q[2] + (q[2] - q[1]) * (ts[2] ** 2 * math.log(ts[2])) / (
        ts[1] ** 2 * math.log(ts[1]) - ts[2] ** 2 * math.log(ts[2]))
    w10 = extract_expansion(BARE, 2).w0[1]
    assert abs(w10 - lim) < 1e-6 * abs(lim)
    assert w10 == pytest.approx(-math.pi, rel=1e-13)


def test_single_layer_profile_cancels_t2():
    tab0 = extract_expansion(BARE, 1)
    tab1 = extract_expansion(REFERENCE_PROFILES[1], 1)
    assert abs(tab1.w0[1]) * 100 < abs(tab0.w0[1])
    assert abs(tab1.wlj[(0, 1, 0)]) * 100 < abs(tab0.wlj[(0, 1, 0)])


def test_table_shape_and_log_bound():
    for L in (0, 1, 2):
        s = REFERENCE_PROFILES[L]
        for N in range(4):
            tab = extract_expansion(s, N)
            for (n, l, j) in tab.wlj:
                assert 1 <= l <= N - n and 0 <= j <= max_log_power(n, l, N, L)
            assert set(tab.w0) == set(range(N + 1))


def test_window_independence():
    s = REFERENCE_PROFILES[2]
    a, b = extract_expansion(s, 2), extract_expansion(s, 2, extra=2)
    for lab, v in a.items():
        assert abs(v - b.value(lab)) < 1e-10 * (1 + abs(v))


def test_w0_starts_at_t2():
    w = w_series(REFERENCE_PROFILES[2], 0, 4)
    assert w.kmin >= 2 or all(abs(w.coefficient(k, j)) < 1e-14 for k in range(w.kmin, 2) for j in range(w.jmax + 1))


def test_g0_leading_coefficient():
    rng = np.random.default_rng(5)
    for _ in range(5):
        s = random_structure(rng)
        _, p22 = transfer_row_series(s, 0, 3)
        lead = p22.coefficient(p22.kmin, 0)
        mus = [m.mu for m in (s.background, *s.layers)]
        expected = 2j / math.pi / math.sqrt(s.layers[-1].mu * s.layers[-1].eps)
        for j in range(1, s.L + 1):
            expected *= mus[j] / mus[j - 1]
        assert p22.kmin == -1
        assert abs(lead - expected) < 1e-10 * abs(expected)


def test_matched_layer_p22_inverse():
    matched = ly.neumann_coated((1.0,), (1.0,), (1.8, 1.0))
    for n in range(3):
        a = series_inv(transfer_row_series(matched, n, 6)[1])
        b = series_inv(transfer_row_series(BARE, n, 6)[1])
        for k in range(a.kmin, min(a.kmax, b.kmax) + 1):
            for j in range(max(a.jmax, b.jmax) + 1):
                assert abs(a.coefficient(k, j) - b.coefficient(k, j)) < 1e-12 * (1 + abs(b.coefficient(k, j)))
        # and against the numeric reciprocal of p22 at small t
        p21, p22 = ly.transfer_p(n, BARE, 1e-4)
        w_direct = 4j * (-p21 / p22)
        w_series_val = extract_expansion(matched, 2).evaluate(n, 1e-4)
        assert abs(w_series_val - w_direct) < 1e-8 * abs(w_direct)


def test_nonzero_lists():
    labels = [label_name(x) for x in nonzero_coefficient_list(2, 2)]
    assert labels == ["W_0^{1,0}", "W_0^{2,0}", "W_0^{2,1}", "W_1^0", "W_1^{1,0}", "W_1^{1,1}", "W_2^0"]
    assert [label_name(x) for x in nonzero_coefficient_list(1, 2)] == ["W_0^{1,0}", "W_1^0"]
    assert nonzero_coefficient_list(0, 2) == []


def test_bare_disk_has_no_zero_entries_in_list():
    tab = extract_expansion(BARE, 2)
    for lab in nonzero_coefficient_list(2, 0):
        assert abs(tab.value(lab)) > 0.1


@pytest.mark.parametrize("seed", range(4))
def test_series_consistency(seed):
    s = random_structure(np.random.default_rng(100 + seed))
    N = 2
    tab = extract_expansion(s, N, precision="extended")
    for n in range(N + 1):
        e = [abs(w_reference(s, t, n) - tab.evaluate(n, t)) for t in (1e-3, 1e-4)]
        assert e[1] == 0 or math.log10(e[0] / e[1]) > 2 * N - 2 * n + 1.5


def test_double_precision_tracks_direct_values():
    s = REFERENCE_PROFILES[2]
    tab = extract_expansion(s, 2)
    for n in range(3):
        t = 1e-3
        direct = ly.scattering_coefficient(s, t, n)
        # relative remainder is O(t^2 |ln t|) for the highest order
        assert abs(tab.evaluate(n, t) - direct) < 1e-4 * abs(direct)


def test_errors():
    with pytest.raises(InvalidArgumentError):
        extract_expansion(ly.matched_structure(), 1)
    with pytest.raises(InvalidArgumentError):
        extract_expansion(BARE, 5)
    with pytest.raises(ValueError):
        extract_expansion(BARE, 1, precision="quad")


def test_to_dict_labels():
    d = extract_expansion(BARE, 1).to_dict()
    assert [c["label"] for c in d["coefficients"]] == ["W_0^0", "W_0^{1,0}", "W_0^{1,1}", "W_1^0"]
    assert isinstance(extract_expansion(BARE, 0), ExpansionTable)

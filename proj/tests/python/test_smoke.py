import math
import random

import pytest

import haarq


def test_worked_example():
    g, pyramid = haarq.quantize_haar_optimal([0.3, -0.2, 0.4, 0.1])
    assert g == [0, 0, 1, 0]
    assert pyramid == [[1], [0, 1], [0, 0, 1, 0]]
    report = haarq.verify_theorem1([0.3, -0.2, 0.4, 0.1], g)
    assert report.all_ok
    assert report.hf_dc == pytest.approx(0.15, abs=1e-15)


def test_round_trip_and_bounds():
    rng = random.Random(5)
    n = 8
    f = [rng.uniform(-0.5, 0.5) for _ in range(2**n)]
    back = haarq.haar_synthesize(haarq.haar_analyze(f))
    assert max(abs(a - b) for a, b in zip(back, f)) <= 1e-12
    g, _ = haarq.quantize_haar_optimal(f)
    assert haarq.verify_theorem1(f, g).all_ok
    table = haarq.spectrum_error(f, g)
    assert table.all_pass
    assert len(table.rows) == 2**n


def test_simple_baseline_and_ties():
    assert haarq.quantize_simple([0.6, -0.7]) == [1, -1]
    assert haarq.quantize_simple([0.5]) == [0]
    assert haarq.quantize_haar_optimal([0.5, 0.5])[0] == [1, 0]
    assert haarq.quantize_haar_optimal([0.5, 0.5], tie_break="up")[0] == [0, 1]
    assert haarq.choose_parity_constrained(0.4, odd=True) == 1


def test_spectral_helpers():
    assert haarq.frequencies(2) == [-1, 0, 1, 2]
    assert haarq.fourier_error_bound_exact(1, 1) == pytest.approx(0.5)
    assert haarq.fourier_error_bound_linear(1, 10) == pytest.approx(10 * math.pi**2 / 4096)
    h = haarq.haar_basis(1, 1, 3)
    spectrum = haarq.dft(h)
    closed = haarq.haar_fourier_coefficient(1, 1, 1, 3)
    assert abs(spectrum[haarq.frequencies(3).index(1)] - closed) <= 1e-12


def test_errors_map_to_python_exceptions():
    with pytest.raises(ValueError):
        haarq.quantize_haar_optimal([0.1, 0.2, 0.3])
    with pytest.raises(ValueError):
        haarq.check_range([0.0, 0.0], 0, 2, [0, 0])
    with pytest.raises(OverflowError):
        haarq.quantize_haar_optimal([3e18, 3e18])

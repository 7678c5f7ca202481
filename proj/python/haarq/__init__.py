"""Haar-optimal quantization of sampled signals with verified error bounds."""

from ._haarq import (
    MAX_EXPONENT,
    HaarErrorReport,
    NoiseBoundRow,
    NoiseBoundTable,
    check_range,
    choose_parity_constrained,
    dft,
    fourier_error_bound_exact,
    fourier_error_bound_linear,
    frequencies,
    grid_samples,
    haar_analyze,
    haar_basis,
    haar_fourier_coefficient,
    haar_index,
    haar_synthesize,
    inner_product,
    quantize_haar_optimal,
    quantize_simple,
    spectrum_error,
    totals_pyramid,
    verify_theorem1,
)

__all__ = [name for name in dir() if not name.startswith("_")]

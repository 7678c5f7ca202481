#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "haarq/haar.hpp"
#include "haarq/quantizer.hpp"

namespace haarq {

/// Integer frequencies (-2^(N-1), 2^(N-1)] for a 2^N-point grid.
class FrequencyGrid {
 public:
  explicit FrequencyGrid(int n_exponent);

  int n_exponent() const noexcept { return n_; }
  std::size_t size() const noexcept { return std::size_t{1} << n_; }
  std::int64_t min() const noexcept { return n_ == 0 ? 0 : -(std::int64_t{1} << (n_ - 1)) + 1; }
  std::int64_t max() const noexcept { return n_ == 0 ? 0 : std::int64_t{1} << (n_ - 1); }
  bool contains(std::int64_t xi) const noexcept { return xi >= min() && xi <= max(); }

  /// Position of xi in ascending order.
  std::size_t position(std::int64_t xi) const;
  std::vector<std::int64_t> frequencies() const;

 private:
  int n_;
};

class FourierSpectrum {
 public:
  FourierSpectrum(FrequencyGrid grid, std::vector<std::complex<double>> values);

  const FrequencyGrid& grid() const noexcept { return grid_; }
  std::complex<double> at(std::int64_t xi) const { return values_[grid_.position(xi)]; }
  /// Values in ascending frequency order.
  std::span<const std::complex<double>> values() const noexcept { return values_; }

 private:
  FrequencyGrid grid_;
  std::vector<std::complex<double>> values_;
};

/// Ff[xi] = 2^-N sum_n exp(-2 pi i t[n] xi) f[n] on the midpoint grid.
/// Direct summation for N <= kDirectDftMaxExponent, FFT beyond.
FourierSpectrum dft(const Signal& f);
FourierSpectrum dft(std::span<const double> values);

inline constexpr int kDirectDftMaxExponent = 12;

/// Reference O(4^N) summation with an exactly reduced phase table.
FourierSpectrum dft_direct(std::span<const double> values);
/// FFT with the half-sample phase correction applied afterwards.
FourierSpectrum dft_fft(std::span<const double> values);

/// Closed-form Fourier coefficient of Haar[k,j] at frequency xi.
std::complex<double> haar_fourier_coefficient(std::int64_t xi, HaarIndex index, int n_exponent);

/// Sum over k of 2^(-2N+2(k-1)) (1 - cos(2 pi xi / 2^k)) / |sin(pi xi / 2^N)|, xi != 0.
double fourier_error_bound_exact(std::int64_t xi, int n_exponent);

/// Single term k of the sum above.
double fourier_envelope_term(std::int64_t xi, int k, int n_exponent);

/// N pi^2 |xi| / 2^(N+2), xi != 0.
double fourier_error_bound_linear(std::int64_t xi, int n_exponent);

/// Bound on the DC error, 2^(-N-1).
double fourier_dc_bound(int n_exponent);

inline constexpr double kSpectralBoundSlack = 1e-10;
inline constexpr double kBaselineBound = 0.5;

struct NoiseBoundRow {
  std::int64_t xi = 0;
  double measured = 0.0;
  double bound_exact = 0.0;
  double bound_linear = 0.0;
  double baseline_bound = kBaselineBound;
  bool pass = false;
};

struct NoiseBoundTable {
  int n_exponent = 0;
  std::vector<NoiseBoundRow> rows;  // ascending xi

  bool all_pass() const;
  /// Mean measured error over rows with |xi| <= max_abs_xi.
  double low_band_mean(std::int64_t max_abs_xi) const;
  double rms() const;
};

/// |F(f - g)[xi]| for every xi next to the guaranteed envelopes.
NoiseBoundTable spectrum_error(const Signal& f, const QuantizedSignal& g);

}  // namespace haarq

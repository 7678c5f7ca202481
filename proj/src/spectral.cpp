#include "haarq/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace haarq {

namespace {

constexpr double kPi = std::numbers::pi;

void require_frequency(const FrequencyGrid& grid, std::int64_t xi) {
  if (!grid.contains(xi)) {
    throw std::invalid_argument("frequency " + std::to_string(xi) + " is outside the grid for N = " +
                                std::to_string(grid.n_exponent()));
  }
}

void require_nonzero(std::int64_t xi) {
  if (xi == 0) throw std::invalid_argument("envelope is defined for nonzero frequencies; use the DC bound at 0");
}

// Non-negative remainder of a modulo 2^bits.
std::int64_t mod_pow2(std::int64_t a, int bits) {
  const std::int64_t mask = (std::int64_t{1} << bits) - 1;
  return a & mask;
}

// 1 - cos(2 pi xi / 2^k), with the argument reduced exactly first.
double one_minus_cos_dyadic(std::int64_t xi, int k) {
  const std::int64_t r = mod_pow2(xi, k);
  if (r == 0) return 0.0;
  const double half_angle = kPi * std::ldexp(static_cast<double>(r), -k);
  // 1 - cos(2a) = 2 sin^2(a) avoids cancellation near multiples of 2 pi.
  const double s = std::sin(half_angle);
  return 2.0 * s * s;
}

// FFTW planning is not thread-safe; execution on distinct plans is.
std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

FrequencyGrid::FrequencyGrid(int n_exponent) : n_(TimeGrid(n_exponent).n_exponent()) {}

std::size_t FrequencyGrid::position(std::int64_t xi) const {
  require_frequency(*this, xi);
  return static_cast<std::size_t>(xi - min());
}

std::vector<std::int64_t> FrequencyGrid::frequencies() const {
  std::vector<std::int64_t> out(size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = min() + static_cast<std::int64_t>(i);
  return out;
}

FourierSpectrum::FourierSpectrum(FrequencyGrid grid, std::vector<std::complex<double>> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) throw std::invalid_argument("spectrum length does not match frequency grid");
}

FourierSpectrum dft_direct(std::span<const double> values) {
  const int n = exponent_for_length(values.size());
  const FrequencyGrid grid(n);
  const std::int64_t size = static_cast<std::int64_t>(values.size());
  const int period_bits = n + 1;

  // exp(-i pi m / 2^N) for m in [0, 2^(N+1)); t[n] xi reduces to m / 2^(N+1) exactly.
  std::vector<std::complex<double>> table(std::size_t{1} << period_bits);
  for (std::size_t m = 0; m < table.size(); ++m) {
    table[m] = std::polar(1.0, -kPi * std::ldexp(static_cast<double>(m), -n));
  }

  std::vector<std::complex<double>> out(grid.size());
  for (std::int64_t xi = grid.min(); xi <= grid.max(); ++xi) {
    std::complex<double> acc{0.0, 0.0};
    std::int64_t m = mod_pow2((1 - size) * xi, period_bits);
    const std::int64_t step = mod_pow2(2 * xi, period_bits);
    for (std::int64_t i = 0; i < size; ++i) {
      acc += table[static_cast<std::size_t>(m)] * values[static_cast<std::size_t>(i)];
      m = mod_pow2(m + step, period_bits);
    }
    out[grid.position(xi)] = std::ldexp(1.0, -n) * acc;
  }
  return FourierSpectrum(grid, std::move(out));
}

FourierSpectrum dft_fft(std::span<const double> values) {
  const int n = exponent_for_length(values.size());
  const FrequencyGrid grid(n);
  const int size = static_cast<int>(values.size());

  struct FftwFree {
    void operator()(void* p) const { fftw_free(p); }
  };
  std::unique_ptr<double, FftwFree> in(fftw_alloc_real(size));
  std::unique_ptr<fftw_complex, FftwFree> spec(fftw_alloc_complex(size / 2 + 1));
  fftw_plan plan;
  {
    std::lock_guard lock(fftw_planner_mutex());
    plan = fftw_plan_dft_r2c_1d(size, in.get(), spec.get(), FFTW_ESTIMATE);
  }
  std::copy(values.begin(), values.end(), in.get());
  fftw_execute(plan);
  {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(plan);
  }

  // With t[n] = (2(n-1) + 1 - 2^N) / 2^(N+1), the midpoint phase is
  // exp(-i pi xi (1 - 2^N) / 2^N) = (-1)^xi exp(-i pi xi / 2^N).
  std::vector<std::complex<double>> out(grid.size());
  for (std::int64_t xi = grid.min(); xi <= grid.max(); ++xi) {
    const std::int64_t q = xi < 0 ? -xi : xi;
    std::complex<double> bin{spec.get()[q][0], spec.get()[q][1]};
    if (xi < 0) bin = std::conj(bin);
    const double sign = (xi & 1) != 0 ? -1.0 : 1.0;
    const std::complex<double> phase = std::polar(1.0, -kPi * std::ldexp(static_cast<double>(xi), -n));
    out[grid.position(xi)] = std::ldexp(sign, -n) * phase * bin;
  }
  return FourierSpectrum(grid, std::move(out));
}

FourierSpectrum dft(std::span<const double> values) {
  exponent_for_length(values.size());
  if (values.size() <= (std::size_t{1} << kDirectDftMaxExponent)) return dft_direct(values);
  return dft_fft(values);
}

FourierSpectrum dft(const Signal& f) { return dft(f.values()); }

std::complex<double> haar_fourier_coefficient(std::int64_t xi, HaarIndex index, int n_exponent) {
  const FrequencyGrid grid(n_exponent);
  require_frequency(grid, xi);
  if (!index.valid_for(n_exponent)) throw std::invalid_argument("Haar index is invalid for this grid");
  if (index.k == 0) return xi == 0 ? 1.0 : 0.0;
  if (xi == 0) return 0.0;

  const double magnitude_numer = one_minus_cos_dyadic(xi, index.k);
  const double denom = std::sin(kPi * std::ldexp(static_cast<double>(xi), -n_exponent));
  // exp(-2 pi i P xi) with P = -1/2 + (2j - 1)/2^k; reduce (2j - 1) xi modulo 2^k.
  const std::int64_t r = mod_pow2((2 * index.j - 1) * xi, index.k);
  const double angle = -2.0 * kPi * (std::ldexp(static_cast<double>(r), -index.k) - 0.5 * static_cast<double>(xi & 1));
  const std::complex<double> phase = std::polar(1.0, angle);
  // 1 / i = -i
  const std::complex<double> inv_i{0.0, -1.0};
  return half_power(index.k - 1 - 2 * n_exponent) * phase * inv_i * (magnitude_numer / denom);
}

double fourier_envelope_term(std::int64_t xi, int k, int n_exponent) {
  const FrequencyGrid grid(n_exponent);
  require_frequency(grid, xi);
  require_nonzero(xi);
  if (k < 1 || k > n_exponent) throw std::invalid_argument("envelope level out of range");
  const double denom = std::fabs(std::sin(kPi * std::ldexp(static_cast<double>(xi), -n_exponent)));
  return std::ldexp(1.0, -2 * n_exponent + 2 * (k - 1)) * one_minus_cos_dyadic(xi, k) / denom;
}

double fourier_error_bound_exact(std::int64_t xi, int n_exponent) {
  require_frequency(FrequencyGrid(n_exponent), xi);
  require_nonzero(xi);
  double sum = 0.0;
  for (int k = 1; k <= n_exponent; ++k) sum += fourier_envelope_term(xi, k, n_exponent);
  return sum;
}

double fourier_error_bound_linear(std::int64_t xi, int n_exponent) {
  require_frequency(FrequencyGrid(n_exponent), xi);
  require_nonzero(xi);
  const double abs_xi = static_cast<double>(xi < 0 ? -xi : xi);
  return static_cast<double>(n_exponent) * kPi * kPi * abs_xi * std::ldexp(1.0, -(n_exponent + 2));
}

double fourier_dc_bound(int n_exponent) { return std::ldexp(1.0, -n_exponent - 1); }

bool NoiseBoundTable::all_pass() const {
  return std::all_of(rows.begin(), rows.end(), [](const NoiseBoundRow& r) { return r.pass; });
}

double NoiseBoundTable::low_band_mean(std::int64_t max_abs_xi) const {
  double sum = 0.0;
  std::size_t count = 0;
  for (const auto& r : rows) {
    if (r.xi >= -max_abs_xi && r.xi <= max_abs_xi) {
      sum += r.measured;
      ++count;
    }
  }
  return count == 0 ? 0.0 : sum / static_cast<double>(count);
}

double NoiseBoundTable::rms() const {
  if (rows.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& r : rows) sum += r.measured * r.measured;
  return std::sqrt(sum / static_cast<double>(rows.size()));
}

NoiseBoundTable spectrum_error(const Signal& f, const QuantizedSignal& g) {
  if (!(f.grid() == g.grid())) throw std::invalid_argument("signal and quantized signal are on different grids");
  const int n = f.grid().n_exponent();
  std::vector<double> diff(f.size());
  for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = f[i] - static_cast<double>(g[i]);
  const FourierSpectrum spectrum = dft(diff);

  NoiseBoundTable table;
  table.n_exponent = n;
  const FrequencyGrid& grid = spectrum.grid();
  table.rows.reserve(grid.size());
  for (std::int64_t xi = grid.min(); xi <= grid.max(); ++xi) {
    NoiseBoundRow row;
    row.xi = xi;
    row.measured = std::abs(spectrum.at(xi));
    if (xi == 0) {
      row.bound_exact = fourier_dc_bound(n);
      row.bound_linear = fourier_dc_bound(n);
    } else {
      row.bound_exact = fourier_error_bound_exact(xi, n);
      row.bound_linear = fourier_error_bound_linear(xi, n);
    }
    row.pass = row.measured <= row.bound_exact + kSpectralBoundSlack;
    table.rows.push_back(row);
  }
  return table;
}

}  // namespace haarq

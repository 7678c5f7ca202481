#include "haarq/haar.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace haarq {

TimeGrid::TimeGrid(int n_exponent) : n_(n_exponent) {
  if (n_exponent < 0 || n_exponent > kMaxExponent) {
    throw std::invalid_argument("grid exponent must lie in [0, " + std::to_string(kMaxExponent) +
                                "], got " + std::to_string(n_exponent));
  }
}

double TimeGrid::sample(std::size_t n) const {
  if (n < 1 || n > size()) throw std::out_of_range("grid sample index out of range");
  // Exact: numerator and power-of-two denominator are both representable.
  return -0.5 + std::ldexp(static_cast<double>(2 * n - 1), -(n_ + 1));
}

std::vector<double> TimeGrid::samples() const {
  std::vector<double> t(size());
  for (std::size_t n = 1; n <= size(); ++n) t[n - 1] = sample(n);
  return t;
}

TimeGrid make_grid(int n_exponent) { return TimeGrid(n_exponent); }

int exponent_for_length(std::size_t length) {
  if (length == 0 || !std::has_single_bit(length)) {
    throw std::invalid_argument("signal length " + std::to_string(length) +
                                " is not a power of two");
  }
  return std::countr_zero(length);
}

Signal::Signal(TimeGrid grid, std::vector<double> values) : grid_(grid), values_(std::move(values)) { validate(); }

Signal::Signal(std::vector<double> values)
    : grid_(exponent_for_length(values.size())), values_(std::move(values)) {
  validate();
}

void Signal::validate() const {
  if (values_.size() != grid_.size()) {
    throw std::invalid_argument("signal length " + std::to_string(values_.size()) +
                                " does not match grid size " + std::to_string(grid_.size()));
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw std::invalid_argument("signal value at sample " + std::to_string(i + 1) +
                                  " is not finite");
    }
  }
}

bool HaarIndex::valid_for(int n_exponent) const noexcept {
  if (k == 0) return j == 1;
  return k >= 1 && k <= n_exponent && j >= 1 && j <= (std::int64_t{1} << (k - 1));
}

std::size_t flat_index(HaarIndex index) noexcept {
  if (index.k == 0) return 0;
  return (std::size_t{1} << (index.k - 1)) + static_cast<std::size_t>(index.j - 1);
}

HaarIndex index_at(std::size_t flat) noexcept {
  if (flat == 0) return {0, 1};
  const int k = std::bit_width(flat);
  return {k, static_cast<std::int64_t>(flat - (std::size_t{1} << (k - 1))) + 1};
}

double index_point(HaarIndex index) {
  return -0.5 + std::ldexp(static_cast<double>(2 * index.j - 1), -index.k);
}

double half_power(int twice_exponent) {
  // 2^(e/2) as a power of two times 1 or sqrt(2).
  const int whole = twice_exponent >= 0 ? twice_exponent / 2 : -((1 - twice_exponent) / 2);
  const bool odd = (twice_exponent % 2) != 0;
  return std::ldexp(odd ? std::numbers::sqrt2 : 1.0, whole);
}

double haar_scale(int n_exponent, int k) { return half_power(k - 1 - 2 * n_exponent); }

namespace {

void require_index(HaarIndex index, int n_exponent) {
  if (!index.valid_for(n_exponent)) {
    throw std::invalid_argument("Haar index (" + std::to_string(index.k) + "," +
                                std::to_string(index.j) + ") is invalid for N = " +
                                std::to_string(n_exponent));
  }
}

}  // namespace

HaarCoefficients::HaarCoefficients(int n_exponent, std::vector<double> flat)
    : n_(TimeGrid(n_exponent).n_exponent()), flat_(std::move(flat)) {
  if (flat_.size() != (std::size_t{1} << n_)) {
    throw std::invalid_argument("Haar coefficient count " + std::to_string(flat_.size()) +
                                " does not equal 2^N");
  }
}

HaarCoefficients::HaarCoefficients(int n_exponent)
    : HaarCoefficients(n_exponent, std::vector<double>(std::size_t{1} << TimeGrid(n_exponent).n_exponent())) {}

double HaarCoefficients::at(HaarIndex index) const {
  require_index(index, n_);
  return flat_[flat_index(index)];
}

double& HaarCoefficients::at(HaarIndex index) {
  require_index(index, n_);
  return flat_[flat_index(index)];
}

std::span<const double> HaarCoefficients::level(int k) const {
  if (k < 0 || k > n_) throw std::out_of_range("Haar level out of range");
  if (k == 0) return std::span<const double>(flat_).first(1);
  return std::span<const double>(flat_).subspan(std::size_t{1} << (k - 1), std::size_t{1} << (k - 1));
}

double inner_product(const Signal& f, const Signal& g) {
  if (!(f.grid() == g.grid())) throw std::invalid_argument("inner product of signals on different grids");
  double sum = 0.0;
  for (std::size_t n = 0; n < f.size(); ++n) sum += f[n] * g[n];
  return std::ldexp(sum, -f.grid().n_exponent());
}

Signal haar_basis(HaarIndex index, const TimeGrid& grid) {
  require_index(index, grid.n_exponent());
  std::vector<double> values(grid.size(), 1.0);
  if (index.k == 0) return Signal(grid, std::move(values));

  const double amplitude = half_power(index.k - 1);
  const double point = index_point(index);
  for (std::size_t n = 1; n <= grid.size(); ++n) {
    const double s = std::ldexp(grid.sample(n) - point, index.k - 1);
    double mother = 0.0;
    if (s > 0.0 && s < 0.5) {
      mother = 1.0;
    } else if (s > -0.5 && s < 0.0) {
      mother = -1.0;
    }
    values[n - 1] = amplitude * mother;
  }
  return Signal(grid, std::move(values));
}

namespace {

template <typename T>
TotalsPyramid<T> build_pyramid(std::span<const T> values) {
  const int n = exponent_for_length(values.size());
  TimeGrid{n};
  TotalsPyramid<T> pyramid(n);
  auto finest = pyramid.level(n);
  std::copy(values.begin(), values.end(), finest.begin());
  for (int k = n; k >= 1; --k) {
    auto child = pyramid.level(k);
    auto parent = pyramid.level(k - 1);
    for (std::size_t j = 0; j < parent.size(); ++j) parent[j] = child[2 * j] + child[2 * j + 1];
  }
  return pyramid;
}

}  // namespace

RealPyramid totals_pyramid(std::span<const double> values) { return build_pyramid(values); }

RealPyramid totals_pyramid(const Signal& f) { return build_pyramid(f.values()); }

IntegerPyramid totals_pyramid(std::span<const std::int64_t> values) { return build_pyramid(values); }

HaarCoefficients haar_analyze(const RealPyramid& totals) {
  const int n = totals.n_exponent();
  std::vector<double> flat(std::size_t{1} << n);
  flat[0] = std::ldexp(totals.at(0, 1), -n);
  for (int k = 1; k <= n; ++k) {
    const double scale = haar_scale(n, k);
    const auto v = totals.level(k);
    const std::size_t offset = std::size_t{1} << (k - 1);
    for (std::size_t j = 0; j < offset; ++j) flat[offset + j] = scale * (v[2 * j + 1] - v[2 * j]);
  }
  return HaarCoefficients(n, std::move(flat));
}

HaarCoefficients haar_analyze(const Signal& f) { return haar_analyze(totals_pyramid(f)); }

Signal haar_synthesize(const HaarCoefficients& c) {
  const int n = c.n_exponent();
  // Walk the pyramid downward: V[k,2j] = (V[k-1,j] + d) / 2, V[k,2j-1] = (V[k-1,j] - d) / 2.
  std::vector<double> current{std::ldexp(c.flat()[0], n)};
  std::vector<double> next;
  for (int k = 1; k <= n; ++k) {
    const double inv_scale = half_power(2 * n - k + 1);
    const auto coeffs = c.level(k);
    next.resize(current.size() * 2);
    for (std::size_t j = 0; j < current.size(); ++j) {
      const double diff = coeffs[j] * inv_scale;
      next[2 * j + 1] = 0.5 * (current[j] + diff);
      next[2 * j] = 0.5 * (current[j] - diff);
    }
    current.swap(next);
  }
  return Signal(TimeGrid(n), std::move(current));
}

}  // namespace haarq

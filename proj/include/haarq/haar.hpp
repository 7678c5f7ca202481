#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace haarq {

/// Largest supported block exponent. Keeps 2^N-sample blocks and their
/// 64-bit integer totals comfortably in range.
inline constexpr int kMaxExponent = 24;

/// Midpoint-sampled dyadic grid on [-1/2, 1/2] with 2^N points,
/// t[n] = -1/2 + (2n - 1) / 2^(N+1) for n = 1..2^N.
class TimeGrid {
 public:
  explicit TimeGrid(int n_exponent);

  int n_exponent() const noexcept { return n_; }
  std::size_t size() const noexcept { return std::size_t{1} << n_; }

  /// 1-based sample position.
  double sample(std::size_t n) const;
  std::vector<double> samples() const;

  friend bool operator==(const TimeGrid&, const TimeGrid&) = default;

 private:
  int n_;
};

TimeGrid make_grid(int n_exponent);

/// Exponent N such that 2^N == length; throws if length is not a power of two.
int exponent_for_length(std::size_t length);

/// Real-valued samples on a TimeGrid. All values are finite.
class Signal {
 public:
  Signal(TimeGrid grid, std::vector<double> values);
  /// Grid deduced from the length, which must be a power of two.
  explicit Signal(std::vector<double> values);

  const TimeGrid& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return values_.size(); }
  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }

 private:
  void validate() const;

  TimeGrid grid_;
  std::vector<double> values_;
};

/// Haar index (k, j): either (0, 1) or 1 <= k <= N, 1 <= j <= 2^(k-1).
struct HaarIndex {
  int k = 0;
  std::int64_t j = 1;

  bool valid_for(int n_exponent) const noexcept;
  friend bool operator==(const HaarIndex&, const HaarIndex&) = default;
};

/// Flat position of (k, j) in level order: (0,1) -> 0, (k,j) -> 2^(k-1) + j - 1.
std::size_t flat_index(HaarIndex index) noexcept;
HaarIndex index_at(std::size_t flat) noexcept;

/// Index point P[k,j] = -1/2 + (2j - 1) / 2^k.
double index_point(HaarIndex index);

/// 2^(e/2) for an integer e, exact up to one rounding of sqrt(2).
double half_power(int twice_exponent);

/// Scale 2^(-N + (k-1)/2) relating totals differences to Haar coefficients.
double haar_scale(int n_exponent, int k);

/// Coefficients over the Haar index set, 2^N entries in level order.
class HaarCoefficients {
 public:
  HaarCoefficients(int n_exponent, std::vector<double> flat);
  /// All-zero coefficient set.
  explicit HaarCoefficients(int n_exponent);

  int n_exponent() const noexcept { return n_; }
  std::size_t size() const noexcept { return flat_.size(); }

  double at(HaarIndex index) const;
  double& at(HaarIndex index);
  double operator()(int k, std::int64_t j) const { return at({k, j}); }

  /// Coefficients of level k >= 1 (2^(k-1) entries), or the DC entry for k = 0.
  std::span<const double> level(int k) const;
  std::span<const double> flat() const noexcept { return flat_; }

 private:
  int n_;
  std::vector<double> flat_;
};

/// Totals V[k,j] over the Haar domains D[k,j], k = 0..N, j = 1..2^k.
/// Each coarser level is the pairwise sum of the finer one.
template <typename T>
class TotalsPyramid {
 public:
  using value_type = T;

  explicit TotalsPyramid(int n_exponent) : n_(n_exponent), levels_(n_exponent + 1) {
    for (int k = 0; k <= n_exponent; ++k) levels_[k].assign(std::size_t{1} << k, T{});
  }

  int n_exponent() const noexcept { return n_; }

  /// 1-based position, as in V[k,j].
  T at(int k, std::int64_t j) const { return levels_.at(k).at(j - 1); }
  T& at(int k, std::int64_t j) { return levels_.at(k).at(j - 1); }

  std::span<const T> level(int k) const { return levels_.at(k); }
  std::span<T> level(int k) { return levels_.at(k); }

  friend bool operator==(const TotalsPyramid&, const TotalsPyramid&) = default;

 private:
  int n_;
  std::vector<std::vector<T>> levels_;
};

using RealPyramid = TotalsPyramid<double>;
using IntegerPyramid = TotalsPyramid<std::int64_t>;

/// (1/2^N) sum f[n] g[n]. Throws std::invalid_argument on grid mismatch.
double inner_product(const Signal& f, const Signal& g);

/// Sampled Haar[k,j] evaluated from its defining formula.
Signal haar_basis(HaarIndex index, const TimeGrid& grid);

RealPyramid totals_pyramid(const Signal& f);
RealPyramid totals_pyramid(std::span<const double> values);
IntegerPyramid totals_pyramid(std::span<const std::int64_t> values);

/// Haar transform via the totals pyramid, O(2^N).
HaarCoefficients haar_analyze(const Signal& f);
HaarCoefficients haar_analyze(const RealPyramid& totals);

/// Inverse transform via the inverse pyramid, O(2^N).
Signal haar_synthesize(const HaarCoefficients& c);

}  // namespace haarq

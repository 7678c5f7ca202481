#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "haarq/haar.hpp"

namespace haarq {

/// Integer-valued samples on a TimeGrid.
class QuantizedSignal {
 public:
  QuantizedSignal(TimeGrid grid, std::vector<std::int64_t> values);
  explicit QuantizedSignal(std::vector<std::int64_t> values);

  const TimeGrid& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return values_.size(); }
  std::span<const std::int64_t> values() const noexcept { return values_; }
  std::int64_t operator[](std::size_t i) const { return values_[i]; }

  Signal to_signal() const;

  friend bool operator==(const QuantizedSignal&, const QuantizedSignal&) = default;

 private:
  TimeGrid grid_;
  std::vector<std::int64_t> values_;
};

/// Resolution of exact ties, which occur only on a measure-zero set of inputs.
enum class TieBreak { toward_negative, toward_positive };

enum class Parity { even, odd };

Parity parity_of(std::int64_t value) noexcept;

struct QuantizerConfig {
  TieBreak tie_break = TieBreak::toward_negative;
  /// Width of uniform dither added to every sample, u in [-eps/2, eps/2].
  double dither_amplitude = 0.0;
  std::uint64_t dither_seed = 0;

  /// Throws std::invalid_argument for a negative or non-finite amplitude.
  void validate() const;
  /// Message when the dither is large enough to disturb the Haar bounds.
  std::optional<std::string> warning_for(int n_exponent) const;
};

/// Integer D with D = parity (mod 2) and |target - D| <= 1.
std::int64_t choose_parity_constrained(double target, Parity parent_parity, TieBreak tie_break);

/// Nearest integer, exact half-integers resolved by tie_break.
std::int64_t round_with_tie(double value, TieBreak tie_break);

struct QuantizationResult {
  QuantizedSignal signal;
  IntegerPyramid pyramid;
};

/// Haar-domain error-optimal quantization.
///
/// Builds integer totals G[k,j] top-down from the real totals V[k,j] of the
/// input: G[0,1] is the rounded grand total, and at every node the child
/// difference D = G[k,2j] - G[k,2j-1] is the integer of the parent's parity
/// closest to V[k,2j] - V[k,2j-1]. The finest level is the output. Every
/// Haar coefficient error at level k is then at most 2^(-N+(k-1)/2), and
/// the DC error at most 2^(-N-1).
///
/// Throws std::overflow_error when totals exceed the 64-bit working range.
QuantizationResult quantize_haar_optimal(const Signal& f, const QuantizerConfig& config = {});

/// Per-sample rounding to the nearest integer, half-integers toward negative.
QuantizedSignal quantize_simple(const Signal& f);

/// The input plus the configured dither (a copy of f when the amplitude is 0).
Signal apply_dither(const Signal& f, const QuantizerConfig& config);

/// Guaranteed bound on |Hf[k,j] - Hg[k,j]| for level k; 2^(-N-1) at k = 0.
double haar_error_bound(int n_exponent, int k);

/// Guaranteed bound on sup |f - g|: 1 - 2^(-N-1).
double sup_error_bound(int n_exponent);

inline constexpr double kHaarBoundSlack = 1e-12;

struct HaarErrorReport {
  int n_exponent = 0;
  /// |Hf - Hg| in level order.
  HaarCoefficients errors{0};
  double hf_dc = 0.0;
  double hg_dc = 0.0;
  double sup_error = 0.0;

  /// Per-level maximum of errors, entry k for k = 0..N.
  std::vector<double> level_max_error;
  std::vector<double> level_bound;
  double sup_bound = 0.0;

  bool dc_ok = false;
  std::vector<bool> level_ok;  // entries k = 1..N stored at index k; index 0 mirrors dc_ok
  bool sup_ok = false;

  bool levels_ok() const;
  bool all_ok() const { return dc_ok && levels_ok() && sup_ok; }
};

/// Haar-domain and sup-norm errors of g against f, with a pass flag for
/// each guaranteed bound (1e-12 slack).
HaarErrorReport verify_theorem1(const Signal& f, const QuantizedSignal& g);

/// True iff every f value lies in [ell+1, m-1] and every g value in [ell, m].
/// Throws std::invalid_argument unless ell + 2 < m.
bool check_range(const Signal& f, std::int64_t ell, std::int64_t m, const QuantizedSignal& g);

}  // namespace haarq

#include "haarq/quantizer.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace haarq {

namespace {

// Totals beyond this cannot be converted and doubled safely in int64.
constexpr double kIntegerLimit = 4611686018427387904.0;  // 2^62

void require_integer_range(double value, const char* what) {
  if (!(std::fabs(value) < kIntegerLimit)) {
    throw std::overflow_error(std::string(what) + " exceeds the 64-bit integer working range");
  }
}

}  // namespace

QuantizedSignal::QuantizedSignal(TimeGrid grid, std::vector<std::int64_t> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) {
    throw std::invalid_argument("quantized signal length " + std::to_string(values_.size()) +
                                " does not match grid size " + std::to_string(grid_.size()));
  }
}

QuantizedSignal::QuantizedSignal(std::vector<std::int64_t> values)
    : grid_(exponent_for_length(values.size())), values_(std::move(values)) {}

Signal QuantizedSignal::to_signal() const {
  return Signal(grid_, std::vector<double>(values_.begin(), values_.end()));
}

Parity parity_of(std::int64_t value) noexcept { return (value & 1) != 0 ? Parity::odd : Parity::even; }

void QuantizerConfig::validate() const {
  if (!std::isfinite(dither_amplitude) || dither_amplitude < 0.0) {
    throw std::invalid_argument("dither amplitude must be finite and non-negative");
  }
}

std::optional<std::string> QuantizerConfig::warning_for(int n_exponent) const {
  if (dither_amplitude >= std::ldexp(1.0, -n_exponent - 1)) {
    return "dither amplitude " + std::to_string(dither_amplitude) + " is not below 2^-(N+1) for N = " +
           std::to_string(n_exponent) + "; errors are measured against the undithered input";
  }
  return std::nullopt;
}

std::int64_t choose_parity_constrained(double target, Parity parent_parity, TieBreak tie_break) {
  if (!std::isfinite(target)) throw std::invalid_argument("parity target is not finite");
  require_integer_range(target, "parity target");
  const double floored = std::floor(target);
  const double frac = target - floored;  // exact, in [0, 1)
  const auto base = static_cast<std::int64_t>(floored);
  if (parity_of(base) == parent_parity) return base;
  // Candidates base - 1 and base + 1 sit at distances 1 + frac and 1 - frac.
  if (frac > 0.0) return base + 1;
  return tie_break == TieBreak::toward_negative ? base - 1 : base + 1;
}

std::int64_t round_with_tie(double value, TieBreak tie_break) {
  if (!std::isfinite(value)) throw std::invalid_argument("rounding target is not finite");
  require_integer_range(value, "rounding target");
  const double floored = std::floor(value);
  const double frac = value - floored;
  const auto base = static_cast<std::int64_t>(floored);
  if (frac < 0.5) return base;
  if (frac > 0.5) return base + 1;
  return tie_break == TieBreak::toward_negative ? base : base + 1;
}

Signal apply_dither(const Signal& f, const QuantizerConfig& config) {
  config.validate();
  std::vector<double> values(f.values().begin(), f.values().end());
  if (config.dither_amplitude > 0.0) {
    std::mt19937_64 rng(config.dither_seed);
    for (double& v : values) {
      // 53 random bits mapped to [0, 1); avoids the implementation-defined
      // std::uniform_real_distribution so streams match across toolchains.
      const double unit = std::ldexp(static_cast<double>(rng() >> 11), -53);
      v += config.dither_amplitude * (unit - 0.5);
    }
  }
  return Signal(f.grid(), std::move(values));
}

QuantizationResult quantize_haar_optimal(const Signal& f, const QuantizerConfig& config) {
  config.validate();
  const Signal input = apply_dither(f, config);
  const RealPyramid totals = totals_pyramid(input);
  const int n = totals.n_exponent();

  IntegerPyramid g(n);
  require_integer_range(totals.at(0, 1), "signal total");
  g.at(0, 1) = round_with_tie(totals.at(0, 1), config.tie_break);

  for (int k = 1; k <= n; ++k) {
    const auto v = totals.level(k);
    const auto parent = g.level(k - 1);
    auto child = g.level(k);
    for (std::size_t j = 0; j < parent.size(); ++j) {
      const double target = v[2 * j + 1] - v[2 * j];
      const std::int64_t d = choose_parity_constrained(target, parity_of(parent[j]), config.tie_break);
      // parent and d share parity, so both halves are exact integers.
      child[2 * j + 1] = (parent[j] + d) / 2;
      child[2 * j] = (parent[j] - d) / 2;
    }
  }

  const auto finest = g.level(n);
  QuantizedSignal out(f.grid(), std::vector<std::int64_t>(finest.begin(), finest.end()));
  return {std::move(out), std::move(g)};
}

QuantizedSignal quantize_simple(const Signal& f) {
  std::vector<std::int64_t> values(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) values[i] = round_with_tie(f[i], TieBreak::toward_negative);
  return QuantizedSignal(f.grid(), std::move(values));
}

double haar_error_bound(int n_exponent, int k) {
  if (k == 0) return std::ldexp(1.0, -n_exponent - 1);
  return haar_scale(n_exponent, k);
}

double sup_error_bound(int n_exponent) { return 1.0 - std::ldexp(1.0, -n_exponent - 1); }

bool HaarErrorReport::levels_ok() const {
  return std::all_of(level_ok.begin() + (level_ok.empty() ? 0 : 1), level_ok.end(), [](bool b) { return b; });
}

HaarErrorReport verify_theorem1(const Signal& f, const QuantizedSignal& g) {
  if (!(f.grid() == g.grid())) throw std::invalid_argument("signal and quantized signal are on different grids");
  const int n = f.grid().n_exponent();
  const Signal gs = g.to_signal();
  const HaarCoefficients hf = haar_analyze(f);
  const HaarCoefficients hg = haar_analyze(gs);

  HaarErrorReport report;
  report.n_exponent = n;
  std::vector<double> errors(hf.size());
  for (std::size_t i = 0; i < errors.size(); ++i) errors[i] = std::fabs(hf.flat()[i] - hg.flat()[i]);
  report.errors = HaarCoefficients(n, std::move(errors));
  report.hf_dc = hf.flat()[0];
  report.hg_dc = hg.flat()[0];

  for (std::size_t i = 0; i < f.size(); ++i) {
    report.sup_error = std::max(report.sup_error, std::fabs(f[i] - gs[i]));
  }

  report.level_max_error.assign(n + 1, 0.0);
  report.level_bound.assign(n + 1, 0.0);
  report.level_ok.assign(n + 1, false);
  for (int k = 0; k <= n; ++k) {
    const auto level = report.errors.level(k);
    report.level_max_error[k] = *std::max_element(level.begin(), level.end());
    report.level_bound[k] = haar_error_bound(n, k);
    report.level_ok[k] = report.level_max_error[k] <= report.level_bound[k] + kHaarBoundSlack;
  }
  report.dc_ok = report.level_ok[0];
  report.sup_bound = sup_error_bound(n);
  report.sup_ok = report.sup_error <= report.sup_bound + kHaarBoundSlack;
  return report;
}

bool check_range(const Signal& f, std::int64_t ell, std::int64_t m, const QuantizedSignal& g) {
  if (!(ell + 2 < m)) {
    throw std::invalid_argument("range check requires ell + 2 < m, got ell = " + std::to_string(ell) +
                                ", m = " + std::to_string(m));
  }
  const double lo = static_cast<double>(ell + 1);
  const double hi = static_cast<double>(m - 1);
  const bool f_inside = std::all_of(f.values().begin(), f.values().end(),
                                    [&](double v) { return v >= lo && v <= hi; });
  const bool g_inside = std::all_of(g.values().begin(), g.values().end(),
                                    [&](std::int64_t v) { return v >= ell && v <= m; });
  return f_inside && g_inside;
}

}  // namespace haarq

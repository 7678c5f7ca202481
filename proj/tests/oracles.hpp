#pragma once

// Independent reference computations for the test suites. Nothing here goes
// through the pyramid code paths under test.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "haarq/haar.hpp"
#include "haarq/quantizer.hpp"

namespace haarq::oracle {

inline constexpr double kPi = std::numbers::pi;

inline std::vector<double> uniform_values(std::mt19937_64& rng, std::size_t n, double lo, double hi) {
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = dist(rng);
  return v;
}

inline Signal random_signal(std::mt19937_64& rng, int n_exponent, double lo = -0.5, double hi = 0.5) {
  return Signal(TimeGrid(n_exponent), uniform_values(rng, std::size_t{1} << n_exponent, lo, hi));
}

/// t[n] straight from its definition, in long double.
inline long double grid_point(int n_exponent, std::size_t n) {
  return -0.5L + (2.0L * static_cast<long double>(n) - 1.0L) / std::pow(2.0L, n_exponent + 1);
}

/// Haar coefficients as inner products with the sampled basis, O(4^N).
inline std::vector<double> naive_haar(const Signal& f) {
  std::vector<double> out(f.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = inner_product(haar_basis(index_at(i), f.grid()), f);
  return out;
}

/// DFT by literal summation of exp(-2 pi i t[n] xi) in long double.
inline std::complex<double> naive_dft_at(const std::vector<double>& values, std::int64_t xi) {
  const int n = exponent_for_length(values.size());
  std::complex<long double> acc{0.0L, 0.0L};
  for (std::size_t i = 1; i <= values.size(); ++i) {
    const long double angle = -2.0L * std::numbers::pi_v<long double> * grid_point(n, i) * static_cast<long double>(xi);
    acc += std::complex<long double>(std::cos(angle), std::sin(angle)) * static_cast<long double>(values[i - 1]);
  }
  acc /= static_cast<long double>(values.size());
  return {static_cast<double>(acc.real()), static_cast<double>(acc.imag())};
}

/// exp(-2 pi i t[n] xi) in long double, row per xi (ascending), column per sample.
inline std::vector<std::vector<std::complex<long double>>> naive_dft_matrix(int n_exponent) {
  const std::int64_t size = std::int64_t{1} << n_exponent;
  const std::int64_t lo = n_exponent == 0 ? 0 : -size / 2 + 1;
  std::vector<std::vector<std::complex<long double>>> rows;
  for (std::int64_t xi = lo; xi < lo + size; ++xi) {
    auto& row = rows.emplace_back(static_cast<std::size_t>(size));
    for (std::int64_t i = 1; i <= size; ++i) {
      const long double angle = -2.0L * std::numbers::pi_v<long double> *
                                grid_point(n_exponent, static_cast<std::size_t>(i)) * static_cast<long double>(xi);
      row[static_cast<std::size_t>(i - 1)] = {std::cos(angle), std::sin(angle)};
    }
  }
  return rows;
}

/// Every integer D of the given parity within distance 1 of target, ascending.
inline std::vector<std::int64_t> parity_candidates(double target, Parity parity) {
  std::vector<std::int64_t> out;
  const auto lo = static_cast<std::int64_t>(std::floor(target)) - 3;
  for (std::int64_t d = lo; d <= lo + 7; ++d) {
    const bool odd = (d % 2) != 0;
    if (odd != (parity == Parity::odd)) continue;
    if (std::fabs(target - static_cast<double>(d)) <= 1.0) out.push_back(d);
  }
  return out;
}

/// Candidate selection: nearest, then tie rule among equally near ones.
inline std::int64_t parity_choice(double target, Parity parity, TieBreak tie) {
  const auto c = parity_candidates(target, parity);
  std::int64_t best = c.front();
  for (const auto d : c) {
    const double db = std::fabs(target - static_cast<double>(best));
    const double dd = std::fabs(target - static_cast<double>(d));
    if (dd < db || (dd == db && tie == TieBreak::toward_positive)) best = d;
  }
  return best;
}

/// Theorem-1 check from naive Haar coefficients.
inline bool satisfies_haar_bounds(const Signal& f, const std::vector<std::int64_t>& g, double slack = 1e-12) {
  const int n = f.grid().n_exponent();
  const Signal gs(f.grid(), std::vector<double>(g.begin(), g.end()));
  const auto hf = naive_haar(f);
  const auto hg = naive_haar(gs);
  for (std::size_t i = 0; i < hf.size(); ++i) {
    const int k = index_at(i).k;
    const double bound = k == 0 ? std::pow(2.0, -n - 1) : std::pow(2.0, -n + (k - 1) / 2.0);
    if (std::fabs(hf[i] - hg[i]) > bound + slack) return false;
  }
  double sup = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) sup = std::max(sup, std::fabs(f[i] - gs[i]));
  return sup <= 1.0 - std::pow(2.0, -n - 1) + slack;
}

/// All integer g with sup |f - g| < 1 that satisfy every Haar bound.
inline std::vector<std::vector<std::int64_t>> brute_force_valid_quantizations(const Signal& f) {
  std::vector<std::vector<std::int64_t>> choices(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    const auto fl = static_cast<std::int64_t>(std::floor(f[i]));
    for (std::int64_t c = fl - 1; c <= fl + 2; ++c) {
      if (std::fabs(f[i] - static_cast<double>(c)) < 1.0) choices[i].push_back(c);
    }
  }
  std::vector<std::vector<std::int64_t>> valid;
  std::vector<std::size_t> pick(f.size(), 0);
  std::vector<std::int64_t> g(f.size());
  while (true) {
    for (std::size_t i = 0; i < f.size(); ++i) g[i] = choices[i][pick[i]];
    if (satisfies_haar_bounds(f, g)) valid.push_back(g);
    std::size_t i = 0;
    while (i < f.size() && ++pick[i] == choices[i].size()) pick[i++] = 0;
    if (i == f.size()) break;
  }
  return valid;
}

}  // namespace haarq::oracle

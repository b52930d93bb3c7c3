// Copyright 2026 The swingfill Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "swingfill/noise.hpp"

namespace swingfill {

/// Bit width of a memory word. Bit b carries squared-error weight 4^b.
class WordFormat {
 public:
  static constexpr int kMaxBits = 64;

  explicit WordFormat(int bits) : bits_(bits) {
    if (bits < 1 || bits > kMaxBits)
      throw std::invalid_argument("bit width must lie in [1, 64], got " + std::to_string(bits));
  }

  int bits() const { return bits_; }

  /// 4^b, exact in binary floating point for every b < 64.
  static double weight(int b) { return std::ldexp(1.0, 2 * b); }

  /// sum_b 4^b = (4^B - 1) / 3.
  double weight_sum() const {
    double s = 0.0;
    for (int b = 0; b < bits_; ++b) s += weight(b);
    return s;
  }

  /// MSE with every swing at zero: (4^B - 1) / 6.
  double zero_swing_mse() const { return 0.5 * weight_sum(); }

  /// Peak word value 2^B - 1.
  double peak() const { return std::ldexp(1.0, bits_) - 1.0; }

  friend bool operator==(const WordFormat&, const WordFormat&) = default;

 private:
  int bits_;
};

/// Per-bit-position read swings, index 0 is the LSB.
class SwingVector {
 public:
  SwingVector() = default;
  explicit SwingVector(std::size_t bits, double value = 0.0) : swings_(bits, value) { validate(); }
  explicit SwingVector(std::vector<double> swings) : swings_(std::move(swings)) { validate(); }
  SwingVector(std::initializer_list<double> swings) : swings_(swings) { validate(); }

  std::size_t size() const { return swings_.size(); }
  int bits() const { return static_cast<int>(swings_.size()); }
  double operator[](std::size_t b) const { return swings_[b]; }
  std::span<const double> values() const { return swings_; }
  auto begin() const { return swings_.begin(); }
  auto end() const { return swings_.end(); }

  void set(std::size_t b, double value) {
    check(value);
    swings_.at(b) = value;
  }

  /// Multiply every swing by `factor` (used to rescale sigma-relative solutions).
  SwingVector scaled(double factor) const {
    std::vector<double> out(swings_);
    for (double& v : out) v *= factor;
    return SwingVector(std::move(out));
  }

  friend bool operator==(const SwingVector&, const SwingVector&) = default;

 private:
  static void check(double v) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw std::domain_error("swings must be finite and nonnegative");
  }
  void validate() const {
    if (swings_.size() > static_cast<std::size_t>(WordFormat::kMaxBits))
      throw std::invalid_argument("swing vector longer than 64 bits");
    for (double v : swings_) check(v);
  }

  std::vector<double> swings_;
};

/// MSE budget V on the retrieved word.
class FidelitySpec {
 public:
  explicit FidelitySpec(double mse_budget) : mse_budget_(mse_budget) {
    if (!(mse_budget >= 0.0) || !std::isfinite(mse_budget))
      throw std::domain_error("MSE budget must be finite and nonnegative");
  }

  static FidelitySpec from_psnr(double psnr_db, const WordFormat& format);

  double mse_budget() const { return mse_budget_; }
  double psnr(const WordFormat& format) const;

  /// Positive swings are needed to meet the budget.
  bool solvable_with_positive_swings(const WordFormat& format) const {
    return mse_budget_ > 0.0 && mse_budget_ <= format.zero_swing_mse();
  }

 private:
  double mse_budget_;
};

/// First- and second-order bit statistics of a non-uniform source.
///
/// `agreement(b, b')` is Pr(x_b = x_b') - Pr(x_b != x_b'), symmetric with unit diagonal.
class SourceStats {
 public:
  SourceStats(std::vector<double> marginals, std::vector<double> agreement)
      : marginals_(std::move(marginals)), agreement_(std::move(agreement)) {
    const std::size_t n = marginals_.size();
    if (n == 0 || n > static_cast<std::size_t>(WordFormat::kMaxBits))
      throw std::invalid_argument("source stats need 1..64 bits");
    if (agreement_.size() != n * n) throw std::invalid_argument("agreement matrix must be B x B");
    for (double p : marginals_)
      if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("marginal probability outside [0, 1]");
    for (double phi : agreement_)
      if (!(phi >= -1.0 && phi <= 1.0)) throw std::domain_error("agreement coefficient outside [-1, 1]");
  }

  /// Uniform source: Pr(x_b = 1) = 1/2 and zero agreement off the diagonal.
  static SourceStats uniform(int bits) {
    const auto n = static_cast<std::size_t>(bits);
    std::vector<double> phi(n * n, 0.0);
    for (std::size_t b = 0; b < n; ++b) phi[b * n + b] = 1.0;
    return SourceStats(std::vector<double>(n, 0.5), std::move(phi));
  }

  int bits() const { return static_cast<int>(marginals_.size()); }
  double marginal(int b) const { return marginals_.at(static_cast<std::size_t>(b)); }
  double agreement(int b, int bp) const {
    return agreement_.at(static_cast<std::size_t>(b) * marginals_.size() + static_cast<std::size_t>(bp));
  }
  std::span<const double> marginals() const { return marginals_; }

 private:
  std::vector<double> marginals_;
  std::vector<double> agreement_;
};

/// MSE of a uniformly distributed word: sum_b 4^b tail(delta_b).
inline double mse_uniform(const SwingVector& swings, const NoiseModel& noise) {
  double mse = 0.0;
  for (int b = 0; b < swings.bits(); ++b) mse += WordFormat::weight(b) * noise.tail(swings[b]);
  return mse;
}

/// MSE of a non-uniform source, including the cross terms
/// 2 * sum_{b > b'} 2^(b+b') p_b p_b' phi(b, b').
inline double mse_nonuniform(const SwingVector& swings, const NoiseModel& noise,
                             const SourceStats& stats) {
  if (stats.bits() != swings.bits())
    throw std::invalid_argument("source stats and swing vector disagree on bit width");
  const int n = swings.bits();
  std::vector<double> p(static_cast<std::size_t>(n));
  for (int b = 0; b < n; ++b) p[b] = noise.tail(swings[b]);
  double diag = 0.0;
  double cross = 0.0;
  for (int b = 0; b < n; ++b) {
    diag += WordFormat::weight(b) * p[b];
    for (int bp = 0; bp < b; ++bp)
      cross += std::ldexp(1.0, b + bp) * p[b] * p[bp] * stats.agreement(b, bp);
  }
  return diag + 2.0 * cross;
}

inline double psnr_from_mse(double mse, const WordFormat& format) {
  if (!(mse > 0.0)) throw std::domain_error("PSNR needs a positive MSE");
  const double peak = format.peak();
  return 10.0 * std::log10(peak * peak / mse);
}

inline double mse_from_psnr(double psnr_db, const WordFormat& format) {
  if (!std::isfinite(psnr_db)) throw std::domain_error("PSNR must be finite");
  const double peak = format.peak();
  return peak * peak / std::pow(10.0, psnr_db / 10.0);
}

inline FidelitySpec FidelitySpec::from_psnr(double psnr_db, const WordFormat& format) {
  return FidelitySpec(mse_from_psnr(psnr_db, format));
}

inline double FidelitySpec::psnr(const WordFormat& format) const {
  return psnr_from_mse(mse_budget_, format);
}

inline double energy(const SwingVector& swings) {
  return std::accumulate(swings.begin(), swings.end(), 0.0);
}

/// rho = max_b delta_b; proportional to the slowest bit's read delay.
inline double max_swing(const SwingVector& swings) {
  return swings.size() == 0 ? 0.0 : *std::max_element(swings.begin(), swings.end());
}

inline double edp(const SwingVector& swings) { return energy(swings) * max_swing(swings); }

/// Peak-to-average swing ratio rho / (E / B).
inline double pasr(const SwingVector& swings) {
  const double e = energy(swings);
  if (!(e > 0.0)) throw std::domain_error("PASR is undefined for an all-zero swing vector");
  return max_swing(swings) / (e / static_cast<double>(swings.size()));
}

/// Sum of per-bit error probabilities.
inline double overall_ber(const SwingVector& swings, const NoiseModel& noise) {
  double s = 0.0;
  for (double d : swings) s += noise.tail(d);
  return s;
}

}  // namespace swingfill

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

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>

#include <boost/math/special_functions/erf.hpp>

namespace swingfill {

enum class NoiseKind { Gaussian, Laplace, BoundedUniform };

inline std::string_view to_string(NoiseKind kind) {
  switch (kind) {
    case NoiseKind::Gaussian: return "gaussian";
    case NoiseKind::Laplace: return "laplace";
    case NoiseKind::BoundedUniform: return "uniform";
  }
  return "unknown";
}

inline NoiseKind parse_noise_kind(std::string_view name) {
  if (name == "gaussian") return NoiseKind::Gaussian;
  if (name == "laplace") return NoiseKind::Laplace;
  if (name == "uniform" || name == "bounded-uniform") return NoiseKind::BoundedUniform;
  throw std::invalid_argument("unknown noise kind: " + std::string(name));
}

/// Zero-mean, unimodal, symmetric sense-amplifier noise.
///
/// `sigma` is the standard deviation for every kind, so the three models are
/// directly comparable: Laplace uses scale sigma/sqrt(2) and the bounded
/// uniform model has support [-sigma*sqrt(3), sigma*sqrt(3)].
///
/// A bit read with swing `delta` is flipped when the noise exceeds `delta`,
/// so its error probability is `tail(delta)`.
class NoiseModel {
 public:
  explicit NoiseModel(NoiseKind kind = NoiseKind::Gaussian, double sigma = 1.0)
      : kind_(kind), sigma_(sigma) {
    if (!(sigma > 0.0) || !std::isfinite(sigma))
      throw std::domain_error("noise scale must be positive and finite");
  }

  static NoiseModel gaussian(double sigma = 1.0) { return NoiseModel(NoiseKind::Gaussian, sigma); }
  static NoiseModel laplace(double sigma = 1.0) { return NoiseModel(NoiseKind::Laplace, sigma); }
  static NoiseModel bounded_uniform(double sigma = 1.0) {
    return NoiseModel(NoiseKind::BoundedUniform, sigma);
  }

  NoiseKind kind() const { return kind_; }
  double sigma() const { return sigma_; }

  /// Laplace scale parameter b (std = b*sqrt(2)).
  double laplace_scale() const { return sigma_ / std::numbers::sqrt2; }
  /// Half-width a of the bounded uniform support (std = a/sqrt(3)).
  double uniform_half_width() const { return sigma_ * std::numbers::sqrt3; }

  /// Pr(noise > delta) for delta >= 0.
  double tail(double delta) const {
    check_swing(delta);
    switch (kind_) {
      case NoiseKind::Gaussian:
        return 0.5 * std::erfc(delta / (sigma_ * std::numbers::sqrt2));
      case NoiseKind::Laplace:
        return 0.5 * std::exp(-delta / laplace_scale());
      case NoiseKind::BoundedUniform: {
        const double a = uniform_half_width();
        return delta >= a ? 0.0 : 0.5 * (a - delta) / a;
      }
    }
    return 0.0;
  }

  /// Smallest delta >= 0 with tail(delta) = p, for p in (0, 1/2].
  double inverse_tail(double p) const {
    if (!(p > 0.0 && p <= 0.5))
      throw std::domain_error("inverse_tail: probability must lie in (0, 1/2]");
    if (p == 0.5) return 0.0;
    switch (kind_) {
      case NoiseKind::Gaussian: {
        double x = sigma_ * std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p);
        // One Newton step on the forward tail removes the residual of erfc_inv.
        const double d = pdf(x);
        if (d > 0.0) x = std::max(0.0, x + (tail(x) - p) / d);
        return x;
      }
      case NoiseKind::Laplace:
        return -laplace_scale() * std::log(2.0 * p);
      case NoiseKind::BoundedUniform:
        return uniform_half_width() * (1.0 - 2.0 * p);
    }
    return 0.0;
  }

  double pdf(double t) const {
    const double x = std::abs(t);
    switch (kind_) {
      case NoiseKind::Gaussian: {
        const double z = x / sigma_;
        return std::exp(-0.5 * z * z) / (std::sqrt(2.0 * std::numbers::pi) * sigma_);
      }
      case NoiseKind::Laplace: {
        const double b = laplace_scale();
        return std::exp(-x / b) / (2.0 * b);
      }
      case NoiseKind::BoundedUniform: {
        const double a = uniform_half_width();
        return x <= a ? 0.5 / a : 0.0;
      }
    }
    return 0.0;
  }

  double log_pdf(double t) const {
    const double x = std::abs(t);
    switch (kind_) {
      case NoiseKind::Gaussian: {
        const double z = x / sigma_;
        return -0.5 * z * z - std::log(std::sqrt(2.0 * std::numbers::pi) * sigma_);
      }
      case NoiseKind::Laplace: {
        const double b = laplace_scale();
        return -x / b - std::log(2.0 * b);
      }
      case NoiseKind::BoundedUniform: {
        const double a = uniform_half_width();
        return x <= a ? -std::log(2.0 * a) : -std::numeric_limits<double>::infinity();
      }
    }
    return 0.0;
  }

  /// Water depth of a swing: log pdf(0) - log pdf(delta).
  /// Equals delta^2 / (2 sigma^2) for Gaussian noise.
  double depth(double delta) const {
    switch (kind_) {
      case NoiseKind::Gaussian: {
        const double z = delta / sigma_;
        return 0.5 * z * z;
      }
      case NoiseKind::Laplace:
        return std::abs(delta) / laplace_scale();
      case NoiseKind::BoundedUniform:
        return std::abs(delta) <= uniform_half_width() ? 0.0
                                                        : std::numeric_limits<double>::infinity();
    }
    return 0.0;
  }

  /// True when the density strictly decreases on [0, inf), i.e. depth() is invertible.
  bool has_strict_density() const { return kind_ != NoiseKind::BoundedUniform; }

  /// Swing with the given water depth.
  double inverse_depth(double d) const {
    if (d <= 0.0) return 0.0;
    switch (kind_) {
      case NoiseKind::Gaussian: return sigma_ * std::sqrt(2.0 * d);
      case NoiseKind::Laplace: return laplace_scale() * d;
      case NoiseKind::BoundedUniform:
        throw std::domain_error("bounded uniform noise has a flat density; depth is not invertible");
    }
    return 0.0;
  }

  friend bool operator==(const NoiseModel&, const NoiseModel&) = default;

 private:
  static void check_swing(double delta) {
    if (!(delta >= 0.0)) throw std::domain_error("swing must be nonnegative");
  }

  NoiseKind kind_;
  double sigma_;
};

inline double tail_prob(const NoiseModel& noise, double delta) { return noise.tail(delta); }

inline double inverse_tail(const NoiseModel& noise, double p) { return noise.inverse_tail(p); }

}  // namespace swingfill

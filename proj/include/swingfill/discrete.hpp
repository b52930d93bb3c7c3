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

// Greedy allocation of swings in multiples of a step beta.
//
// Every greedy here starts from zero swings and adds one step per iteration
// until the MSE budget is met. Ties in an argmin go to the lowest bit index.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "swingfill/continuous.hpp"
#include "swingfill/metrics.hpp"
#include "swingfill/noise.hpp"

namespace swingfill {

/// Swing quantum beta.
class Granularity {
 public:
  explicit Granularity(double step) : step_(step) {
    if (!(step > 0.0) || !std::isfinite(step)) throw std::domain_error("granularity must be positive");
  }
  double step() const { return step_; }

 private:
  double step_;
};

/// A greedy exceeded its iteration cap.
class IterationLimit : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Exhaustive search would exceed its enumeration budget.
class BudgetExceeded : public std::length_error {
 public:
  BudgetExceeded(double required, double budget)
      : std::length_error("enumeration needs " + std::to_string(required) + " points, budget is " +
                          std::to_string(budget)),
        required_(required) {}
  double required() const { return required_; }

 private:
  double required_;
};

struct DiscreteOptions {
  std::size_t max_iterations = 10'000'000;
  bool record_trace = false;
};

struct DiscreteResult {
  SwingVector swings;
  std::vector<std::int64_t> steps;  ///< delta_b / beta
  std::vector<double> cap_duals;    ///< sand poured per bit (sand-pouring only)
  std::size_t iterations = 0;
  double achieved_mse = 0.0;
  std::vector<double> mse_trace;    ///< MSE after each iteration when requested

  double energy() const { return swingfill::energy(swings); }
  double rho() const { return max_swing(swings); }
  double edp() const { return swingfill::edp(swings); }
};

namespace detail {

inline std::size_t argmin_lowest(const std::vector<double>& v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i] < v[best]) best = i;
  return best;
}

/// Shared greedy loop; `choose` picks the bit that receives the next step.
template <class Choose>
DiscreteResult greedy_fill(const WordFormat& format, const NoiseModel& noise, const FidelitySpec& fidelity,
                           const Granularity& beta, const DiscreteOptions& opts, Choose choose) {
  if (!(fidelity.mse_budget() > 0.0)) throw Infeasible("MSE budget must be positive");
  const auto n = static_cast<std::size_t>(format.bits());
  DiscreteResult res;
  res.steps.assign(n, 0);
  std::vector<double> swing(n, 0.0);
  std::vector<double> tails(n, 0.5);
  auto total = [&] {
    double m = 0.0;
    for (std::size_t b = 0; b < n; ++b) m += WordFormat::weight(static_cast<int>(b)) * tails[b];
    return m;
  };
  double mse = total();
  while (mse > fidelity.mse_budget()) {
    if (res.iterations >= opts.max_iterations)
      throw IterationLimit("greedy swing allocation exceeded " + std::to_string(opts.max_iterations) +
                           " iterations");
    const std::size_t b = choose(swing);
    ++res.steps[b];
    swing[b] = static_cast<double>(res.steps[b]) * beta.step();
    tails[b] = noise.tail(swing[b]);
    mse = total();
    ++res.iterations;
    if (opts.record_trace) res.mse_trace.push_back(mse);
  }
  res.swings = SwingVector(swing);
  res.achieved_mse = mse;
  return res;
}

}  // namespace detail

/// Discrete water-filling: add one step to the bit with the lowest water
/// level g_b + depth(delta_b).
///
/// MinEnergy uses the noise ground levels g_b = -log(4^b f(0)). MaxSpeed uses a
/// flat ground, so the level reduces to the swing itself and the fill cycles
/// through all bits.
inline DiscreteResult discrete_water_fill(Criterion criterion, const WordFormat& format, const NoiseModel& noise,
                                          const FidelitySpec& fidelity, const Granularity& beta,
                                          const DiscreteOptions& opts = {}) {
  const int n = format.bits();
  std::vector<double> ground(static_cast<std::size_t>(n), 0.0);
  switch (criterion) {
    case Criterion::MinEnergy:
      for (int b = 0; b < n; ++b) ground[b] = detail::ground_level(noise, b);
      break;
    case Criterion::MaxSpeed:
      break;
    case Criterion::MinEdp:
      throw std::invalid_argument("discrete water-filling handles min-energy and max-speed only");
  }
  std::vector<double> level(static_cast<std::size_t>(n));
  auto res = detail::greedy_fill(format, noise, fidelity, beta, opts, [&](const std::vector<double>& swing) {
    for (int b = 0; b < n; ++b)
      level[b] = criterion == Criterion::MaxSpeed ? swing[b] : ground[b] + noise.depth(swing[b]);
    return detail::argmin_lowest(level);
  });
  if (criterion == Criterion::MaxSpeed && !res.steps.empty()) {
    // The fill may stop partway through a cycle; complete it.
    const auto k = *std::max_element(res.steps.begin(), res.steps.end());
    for (auto& s : res.steps) s = k;
    res.swings = SwingVector(static_cast<std::size_t>(n), static_cast<double>(k) * beta.step());
    res.achieved_mse = mse_uniform(res.swings, noise);
  }
  return res;
}

/// Levin-Campello loading: add one step where it buys the largest MSE
/// reduction, 4^b (tail(delta_b) - tail(delta_b + beta)). Optimal on the
/// beta-grid because the MSE is a sum of per-bit convex terms.
inline DiscreteResult levin_campello(const WordFormat& format, const NoiseModel& noise,
                                     const FidelitySpec& fidelity, const Granularity& beta,
                                     const DiscreteOptions& opts = {}) {
  const int n = format.bits();
  std::vector<double> gain(static_cast<std::size_t>(n));
  return detail::greedy_fill(format, noise, fidelity, beta, opts, [&](const std::vector<double>& swing) {
    for (int b = 0; b < n; ++b)
      gain[b] = WordFormat::weight(b) * (noise.tail(swing[b] + beta.step()) - noise.tail(swing[b]));
    return detail::argmin_lowest(gain);
  });
}

/// Sand-pouring with discrete water-filling for the EDP objective.
///
/// Each iteration pours one step of sand at the lowest sand level g_b + s_b,
/// recomputes every sand depth s_b = log(1 + eta_b / rho) for the current
/// rho = max(delta), then adds one step of water at the lowest water level
/// g_b + s_b + depth(delta_b). Sand depths are zero while rho = 0.
inline DiscreteResult sand_pour_water_fill(const WordFormat& format, const NoiseModel& noise,
                                           const FidelitySpec& fidelity, const Granularity& beta,
                                           const DiscreteOptions& opts = {}) {
  if (!(fidelity.mse_budget() > 0.0)) throw Infeasible("MSE budget must be positive");
  const auto n = static_cast<std::size_t>(format.bits());
  std::vector<double> ground(n);
  for (std::size_t b = 0; b < n; ++b) ground[b] = detail::ground_level(noise, static_cast<int>(b));

  DiscreteResult res;
  res.steps.assign(n, 0);
  res.cap_duals.assign(n, 0.0);
  std::vector<double> swing(n, 0.0);
  std::vector<double> sand(n, 0.0);
  std::vector<double> level(n);

  auto mse_of = [&] {
    double m = 0.0;
    for (std::size_t b = 0; b < n; ++b) m += WordFormat::weight(static_cast<int>(b)) * noise.tail(swing[b]);
    return m;
  };
  double mse = mse_of();
  while (mse > fidelity.mse_budget()) {
    if (res.iterations >= opts.max_iterations)
      throw IterationLimit("sand-pouring exceeded " + std::to_string(opts.max_iterations) + " iterations");
    double rho = 0.0;
    for (double d : swing) rho = std::max(rho, d);

    for (std::size_t b = 0; b < n; ++b) level[b] = ground[b] + sand[b];
    res.cap_duals[detail::argmin_lowest(level)] += beta.step();
    for (std::size_t b = 0; b < n; ++b) sand[b] = rho > 0.0 ? std::log1p(res.cap_duals[b] / rho) : 0.0;

    for (std::size_t b = 0; b < n; ++b) level[b] = ground[b] + sand[b] + noise.depth(swing[b]);
    const std::size_t w = detail::argmin_lowest(level);
    ++res.steps[w];
    swing[w] = static_cast<double>(res.steps[w]) * beta.step();

    mse = mse_of();
    ++res.iterations;
    if (opts.record_trace) res.mse_trace.push_back(mse);
  }
  res.swings = SwingVector(swing);
  res.achieved_mse = mse;
  return res;
}

struct BruteForceResult {
  struct Best {
    SwingVector swings;
    double value = std::numeric_limits<double>::infinity();
    bool found = false;
  };
  Best energy;
  Best rho;
  Best edp;
  std::size_t evaluated = 0;
  std::size_t feasible = 0;
};

/// Exhaustive search over {0, beta, ..., swing_cap}^B for the feasible
/// minimizers of energy, rho and EDP. Objectives are compared in integer
/// step units, so ties resolve to the first point in enumeration order
/// (bit 0 varies fastest).
inline BruteForceResult brute_force_discrete(const WordFormat& format, const NoiseModel& noise,
                                             const FidelitySpec& fidelity, const Granularity& beta,
                                             double swing_cap, double budget = 1e8) {
  if (!(swing_cap > 0.0)) throw std::domain_error("swing cap must be positive");
  const int n = format.bits();
  const auto levels = static_cast<std::int64_t>(std::floor(swing_cap / beta.step() + 1e-9)) + 1;
  const double required = std::pow(static_cast<double>(levels), n);
  if (required > budget) throw BudgetExceeded(required, budget);

  std::vector<double> weighted_tail(static_cast<std::size_t>(n * levels));
  for (int b = 0; b < n; ++b)
    for (std::int64_t k = 0; k < levels; ++k)
      weighted_tail[b * levels + k] = WordFormat::weight(b) * noise.tail(static_cast<double>(k) * beta.step());

  BruteForceResult out;
  std::int64_t best_e = std::numeric_limits<std::int64_t>::max();
  std::int64_t best_r = best_e;
  std::int64_t best_p = best_e;
  std::vector<std::int64_t> k(static_cast<std::size_t>(n), 0), ke, kr, kp;
  const auto total = static_cast<std::int64_t>(required);
  for (std::int64_t idx = 0; idx < total; ++idx) {
    ++out.evaluated;
    double mse = 0.0;
    std::int64_t sum = 0;
    std::int64_t mx = 0;
    for (int b = 0; b < n; ++b) {
      mse += weighted_tail[b * levels + k[b]];
      sum += k[b];
      mx = std::max(mx, k[b]);
    }
    if (mse <= fidelity.mse_budget()) {
      ++out.feasible;
      if (sum < best_e) { best_e = sum; ke = k; }
      if (mx < best_r) { best_r = mx; kr = k; }
      if (sum * mx < best_p) { best_p = sum * mx; kp = k; }
    }
    for (int b = 0; b < n; ++b) {
      if (++k[b] < levels) break;
      k[b] = 0;
    }
  }

  auto to_best = [&](const std::vector<std::int64_t>& steps, double value) {
    BruteForceResult::Best best;
    if (steps.empty()) return best;
    std::vector<double> d(steps.size());
    for (std::size_t b = 0; b < steps.size(); ++b) d[b] = static_cast<double>(steps[b]) * beta.step();
    best.swings = SwingVector(std::move(d));
    best.value = value;
    best.found = true;
    return best;
  };
  const double s = beta.step();
  out.energy = to_best(ke, static_cast<double>(best_e) * s);
  out.rho = to_best(kr, static_cast<double>(best_r) * s);
  out.edp = to_best(kp, static_cast<double>(best_p) * s * s);
  return out;
}

}  // namespace swingfill

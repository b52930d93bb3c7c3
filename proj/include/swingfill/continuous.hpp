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

// Continuous swing optimization under an MSE budget.
//
// All three programs share the same water-filling picture. Bit b sits on a
// ground level g_b = -log(4^b f(0)) where f is the noise density, and a swing
// delta has water depth log f(0) - log f(delta). For Gaussian noise these are
// log(sqrt(2 pi) sigma / 4^b) and delta^2 / (2 sigma^2).
//
//   MinEnergy  water is poured to level log(nu); every bit whose ground lies
//              below the level receives the depth it is submerged by.
//   MaxSpeed   the cap duals eta_b flatten the ground completely, so every bit
//              ends at the same swing rho.
//   MinEdp     sand (eta_b) is poured only on the deepest bits until their
//              swing is capped at rho; rho is then chosen to minimize rho * E.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "swingfill/metrics.hpp"
#include "swingfill/noise.hpp"

namespace swingfill {

enum class Criterion { MinEnergy, MaxSpeed, MinEdp };

inline constexpr std::array<Criterion, 3> kAllCriteria = {Criterion::MinEnergy, Criterion::MaxSpeed,
                                                          Criterion::MinEdp};

inline std::string_view to_string(Criterion c) {
  switch (c) {
    case Criterion::MinEnergy: return "min-energy";
    case Criterion::MaxSpeed: return "max-speed";
    case Criterion::MinEdp: return "min-edp";
  }
  return "unknown";
}

inline Criterion parse_criterion(std::string_view name) {
  if (name == "min-energy") return Criterion::MinEnergy;
  if (name == "max-speed") return Criterion::MaxSpeed;
  if (name == "min-edp") return Criterion::MinEdp;
  throw std::invalid_argument("unknown criterion: " + std::string(name));
}

/// The MSE budget cannot be met (V <= 0).
class Infeasible : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Root finding did not reach the requested tolerance.
class SolverFailure : public std::runtime_error {
 public:
  SolverFailure(const std::string& what, double residual)
      : std::runtime_error(what + " (residual " + std::to_string(residual) + ")"), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

struct SolverOptions {
  /// Relative tolerance on the MSE constraint; KKT residuals above 1000 * tol fail.
  double tol = 1e-9;
};

struct SolverSolution {
  Criterion criterion = Criterion::MinEnergy;
  SwingVector swings;
  double water_level = 0.0;           ///< nu, dual of the MSE constraint
  std::vector<double> nonneg_duals;   ///< lambda_b
  std::vector<double> cap_duals;      ///< eta_b (all zero for MinEnergy)
  std::vector<double> sand_depths;    ///< s_b = log(1 + eta_b / rho), MinEdp only
  std::vector<bool> capped;           ///< delta_b == rho and eta_b carries the cap
  double achieved_mse = 0.0;
  double rho = 0.0;
  double kkt_residual = 0.0;
  bool saturated = false;             ///< budget at or above the zero-swing MSE
  bool edp_scan_unimodal = true;      ///< MinEdp: the coarse rho scan looked unimodal

  double energy() const { return swingfill::energy(swings); }
  double edp() const { return swingfill::edp(swings); }
  int capped_count() const { return static_cast<int>(std::count(capped.begin(), capped.end(), true)); }
};

namespace detail {

/// Ground level g_b = -log(4^b f(0)).
inline double ground_level(const NoiseModel& noise, int b) {
  return -(2.0 * b * std::numbers::ln2) - noise.log_pdf(0.0);
}

/// 4^b f(delta), the magnitude of d/d(delta) of bit b's weighted error.
inline double weighted_density(const NoiseModel& noise, int b, double delta) {
  return WordFormat::weight(b) * noise.pdf(delta);
}

/// Swing of bit b under water level w, optionally capped.
inline double filled_swing(const NoiseModel& noise, double ground, double level,
                           double cap = std::numeric_limits<double>::infinity()) {
  if (level <= ground) return 0.0;
  return std::min(cap, noise.inverse_depth(level - ground));
}

/// Bisection for the smallest level with mse(level) <= budget, given a
/// nonincreasing mse. Requires mse(lo) > budget >= mse(hi); runs to machine precision.
template <class MseAt>
double lowest_level_meeting(MseAt mse_at, double budget, double lo, double hi) {
  for (int it = 0; it < 2000; ++it) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    if (mse_at(mid) > budget)
      lo = mid;
    else
      hi = mid;
  }
  return hi;
}

inline void require_budget(const FidelitySpec& fidelity) {
  if (!(fidelity.mse_budget() > 0.0)) throw Infeasible("MSE budget must be positive");
}

inline void require_strict_density(const NoiseModel& noise) {
  if (!noise.has_strict_density())
    throw std::domain_error(
        "continuous water-filling needs a strictly decreasing noise density; use the discrete solvers");
}

inline SolverSolution saturated_solution(Criterion c, const WordFormat& format, const NoiseModel& noise) {
  const auto n = static_cast<std::size_t>(format.bits());
  SolverSolution sol;
  sol.criterion = c;
  sol.swings = SwingVector(n, 0.0);
  sol.nonneg_duals.assign(n, c == Criterion::MinEnergy ? 1.0 : 0.0);
  sol.cap_duals.assign(n, 0.0);
  sol.sand_depths.assign(n, 0.0);
  sol.capped.assign(n, false);
  sol.achieved_mse = mse_uniform(sol.swings, noise);
  sol.saturated = true;
  return sol;
}

}  // namespace detail

double kkt_residuals(const SolverSolution& solution, Criterion criterion, const WordFormat& format,
                     const NoiseModel& noise, const FidelitySpec& fidelity);

namespace detail {

inline void finish(SolverSolution& sol, const WordFormat& format, const NoiseModel& noise,
                   const FidelitySpec& fidelity, const SolverOptions& opts) {
  sol.rho = max_swing(sol.swings);
  sol.achieved_mse = mse_uniform(sol.swings, noise);
  const double v = fidelity.mse_budget();
  // The level parametrization resolves a barely wet bit only to about sqrt(eps).
  // Solve the most significant uncapped wet bit for the exact budget instead.
  if (std::abs(sol.achieved_mse - v) > opts.tol * v) {
    for (int b = format.bits() - 1; b >= 0; --b) {
      const bool capped = static_cast<std::size_t>(b) < sol.capped.size() && sol.capped[b];
      if (capped || !(sol.swings[b] > 0.0)) continue;
      const double w = WordFormat::weight(b);
      const double p = (v - (sol.achieved_mse - w * noise.tail(sol.swings[b]))) / w;
      if (p > 0.0 && p < 0.5) {
        const double d = noise.inverse_tail(p);
        if (sol.criterion != Criterion::MinEdp || d <= sol.rho) {
          sol.swings.set(static_cast<std::size_t>(b), d);
          sol.rho = max_swing(sol.swings);
          if (static_cast<std::size_t>(b) < sol.nonneg_duals.size()) {
            const double price = sol.criterion == Criterion::MinEdp ? sol.rho : 1.0;
            sol.nonneg_duals[b] = price - sol.water_level * weighted_density(noise, b, d);
          }
          sol.achieved_mse = mse_uniform(sol.swings, noise);
        }
      }
      break;
    }
  }
  if (std::abs(sol.achieved_mse - v) > opts.tol * v)
    throw SolverFailure(std::string(to_string(sol.criterion)) + ": MSE constraint not met",
                        std::abs(sol.achieved_mse - v) / v);
  sol.kkt_residual = kkt_residuals(sol, sol.criterion, format, noise, fidelity);
  if (sol.kkt_residual > 1e3 * opts.tol)
    throw SolverFailure(std::string(to_string(sol.criterion)) + ": KKT conditions not met",
                        sol.kkt_residual);
}

}  // namespace detail

/// Minimum read energy sum_b delta_b subject to MSE <= V.
///
/// Bit b is active iff the water level log(nu) exceeds its ground level, and
/// then log(nu) = g_b + depth(delta_b). The level is found by bisection since
/// the MSE falls strictly as the level rises.
inline SolverSolution solve_min_energy(const WordFormat& format, const NoiseModel& noise,
                                       const FidelitySpec& fidelity, const SolverOptions& opts = {}) {
  detail::require_budget(fidelity);
  if (fidelity.mse_budget() >= format.zero_swing_mse())
    return detail::saturated_solution(Criterion::MinEnergy, format, noise);
  detail::require_strict_density(noise);

  const int n = format.bits();
  std::vector<double> ground(static_cast<std::size_t>(n));
  for (int b = 0; b < n; ++b) ground[b] = detail::ground_level(noise, b);

  auto swings_at = [&](double level) {
    std::vector<double> d(static_cast<std::size_t>(n));
    for (int b = 0; b < n; ++b) d[b] = detail::filled_swing(noise, ground[b], level);
    return d;
  };
  auto mse_at = [&](double level) {
    double m = 0.0;
    for (int b = 0; b < n; ++b) m += WordFormat::weight(b) * noise.tail(detail::filled_swing(noise, ground[b], level));
    return m;
  };

  const double v = fidelity.mse_budget();
  const double lo = ground[n - 1];
  double step = 1.0;
  double hi = lo + step;
  while (mse_at(hi) > v) {
    step *= 2.0;
    hi = lo + step;
    if (!std::isfinite(hi)) throw SolverFailure("min-energy: could not bracket the water level", mse_at(hi) / v);
  }
  const double level = detail::lowest_level_meeting(mse_at, v, lo, hi);

  SolverSolution sol;
  sol.criterion = Criterion::MinEnergy;
  sol.swings = SwingVector(swings_at(level));
  sol.water_level = std::exp(level);
  sol.cap_duals.assign(static_cast<std::size_t>(n), 0.0);
  sol.sand_depths.assign(static_cast<std::size_t>(n), 0.0);
  sol.capped.assign(static_cast<std::size_t>(n), false);
  sol.nonneg_duals.resize(static_cast<std::size_t>(n));
  for (int b = 0; b < n; ++b)
    sol.nonneg_duals[b] = 1.0 - sol.water_level * detail::weighted_density(noise, b, sol.swings[b]);
  detail::finish(sol, format, noise, fidelity, opts);
  return sol;
}

/// Minimum peak swing rho subject to MSE <= V: the uniform assignment
/// rho = tail^-1(3V / (4^B - 1)) with cap duals eta_b = 3 * 4^b / (4^B - 1).
inline SolverSolution solve_max_speed(const WordFormat& format, const NoiseModel& noise,
                                      const FidelitySpec& fidelity, const SolverOptions& opts = {}) {
  detail::require_budget(fidelity);
  const double p = fidelity.mse_budget() / (2.0 * format.zero_swing_mse());
  if (p >= 0.5) return detail::saturated_solution(Criterion::MaxSpeed, format, noise);

  const auto n = static_cast<std::size_t>(format.bits());
  const double rho = noise.inverse_tail(p);
  const double wsum = format.weight_sum();

  SolverSolution sol;
  sol.criterion = Criterion::MaxSpeed;
  sol.swings = SwingVector(n, rho);
  sol.water_level = 1.0 / (wsum * noise.pdf(rho));
  sol.cap_duals.resize(n);
  sol.nonneg_duals.resize(n);
  sol.sand_depths.resize(n);
  sol.capped.assign(n, true);
  for (int b = 0; b < format.bits(); ++b) {
    sol.cap_duals[b] = WordFormat::weight(b) / wsum;
    sol.nonneg_duals[b] = sol.cap_duals[b] - sol.water_level * detail::weighted_density(noise, b, rho);
    sol.sand_depths[b] = rho > 0.0 ? std::log1p(sol.cap_duals[b] / rho) : 0.0;
  }
  detail::finish(sol, format, noise, fidelity, opts);
  return sol;
}

namespace detail {

/// Minimum-energy allocation with every swing capped at rho.
///
/// When every bit is either capped or dry, the MSE does not move while the
/// level rises from `level` to `level_max`, so the duals are not pinned by the
/// budget. `settle` then picks the level from the first-order condition in rho.
struct CappedFill {
  bool feasible = false;
  double rho = 0.0;
  double level = 0.0;             ///< log(nu / rho), lowest level meeting the budget
  double level_max = 0.0;         ///< highest level with the same swings
  double cap_depth = 0.0;
  double energy = 0.0;
  double scaled_eta_sum = 0.0;    ///< sum_b eta_b / rho
  std::vector<double> ground;
  std::vector<double> swings;
  std::vector<double> scaled_eta; ///< eta_b / rho
  std::vector<bool> capped;

  double edp() const { return rho * energy; }

  double scaled_eta_sum_at(double lvl) const {
    double sum = 0.0;
    for (std::size_t b = 0; b < swings.size(); ++b)
      if (capped[b]) sum += std::max(0.0, std::expm1(lvl - ground[b] - cap_depth));
    return sum;
  }

  /// Sign of d(rho * E*(rho)) / d(rho) = E - rho * sum(eta_b / rho): +1 or -1
  /// when every admissible level agrees, 0 when some level makes it vanish.
  int stationarity_sign() const {
    const double at_low = energy / rho - scaled_eta_sum_at(level);
    if (at_low < 0.0) return -1;
    if (!std::isfinite(level_max)) return 0;
    const double at_high = energy / rho - scaled_eta_sum_at(level_max);
    return at_high > 0.0 ? 1 : 0;
  }

  /// Move the level inside [level, level_max] so that sum(eta) = E.
  void settle() {
    if (!(level_max > level)) return;
    double weight = 0.0;
    int k = 0;
    for (std::size_t b = 0; b < swings.size(); ++b)
      if (capped[b]) {
        weight += std::exp(-ground[b] - cap_depth);
        ++k;
      }
    if (k == 0) return;
    const double target = std::log((energy / rho + k) / weight);
    level = std::clamp(target, level, level_max);
    scaled_eta_sum = 0.0;
    for (std::size_t b = 0; b < swings.size(); ++b) {
      scaled_eta[b] = capped[b] ? std::max(0.0, std::expm1(level - ground[b] - cap_depth)) : 0.0;
      scaled_eta_sum += scaled_eta[b];
    }
  }

};

class CappedFiller {
 public:
  CappedFiller(const WordFormat& format, const NoiseModel& noise, double budget)
      : noise_(noise), budget_(budget), n_(format.bits()) {
    ground_.resize(static_cast<std::size_t>(n_));
    for (int b = 0; b < n_; ++b) ground_[b] = ground_level(noise, b);
  }

  CappedFill operator()(double rho) const {
    CappedFill out;
    out.rho = rho;
    const double cap_depth = noise_.depth(rho);
    // Depths within a few ulps of the cap count as capped; inverse_depth(depth(rho))
    // need not return rho exactly.
    const double cap_slack = 1e-13 * (1.0 + std::abs(cap_depth));
    auto swing_of = [&](int b, double level) {
      const double submerged = level - ground_[b];
      if (submerged >= cap_depth - cap_slack) return rho;
      return filled_swing(noise_, ground_[b], level, rho);
    };
    auto mse_at = [&](double level) {
      double m = 0.0;
      for (int b = 0; b < n_; ++b) m += WordFormat::weight(b) * noise_.tail(swing_of(b, level));
      return m;
    };
    const double lo = ground_[n_ - 1];
    // At this level every bit is capped; the MSE cannot fall further.
    const double all_capped = ground_[0] + cap_depth;
    const double floor_mse = mse_at(all_capped);
    if (floor_mse > budget_ * (1.0 + 1e-12)) return out;
    out.feasible = true;
    if (floor_mse >= budget_)
      out.level = all_capped;
    else
      out.level = lowest_level_meeting(mse_at, budget_, lo, all_capped);

    const auto n = static_cast<std::size_t>(n_);
    out.ground = ground_;
    out.cap_depth = cap_depth;
    out.swings.resize(n);
    out.scaled_eta.assign(n, 0.0);
    out.capped.assign(n, false);
    out.level_max = std::numeric_limits<double>::infinity();
    for (int b = 0; b < n_; ++b) {
      const double submerged = out.level - ground_[b];
      if (submerged >= cap_depth - cap_slack) {
        out.swings[b] = rho;
        out.capped[b] = true;
        out.scaled_eta[b] = std::max(0.0, std::expm1(submerged - cap_depth));
      } else {
        out.swings[b] = filled_swing(noise_, ground_[b], out.level, rho);
        // A wet uncapped bit ties the level to the budget; a dry one bounds it.
        out.level_max = std::min(out.level_max, out.swings[b] > 0.0 ? out.level : ground_[b]);
      }
      out.energy += out.swings[b];
      out.scaled_eta_sum += out.scaled_eta[b];
    }
    return out;
  }

 private:
  const NoiseModel& noise_;
  double budget_;
  int n_;
  std::vector<double> ground_;
};

}  // namespace detail

/// Minimum energy-delay product rho * sum_b delta_b subject to MSE <= V.
///
/// For a fixed cap rho the inner problem is capped water-filling. The outer
/// search runs over rho in [rho_speed, rho_energy]: a 64-point scan, golden
/// section around the best scan point, then bisection on the stationarity
/// condition sum(eta) = sum(delta) to pin rho to machine precision.
inline SolverSolution solve_min_edp(const WordFormat& format, const NoiseModel& noise,
                                    const FidelitySpec& fidelity, const SolverOptions& opts = {}) {
  detail::require_budget(fidelity);
  if (fidelity.mse_budget() >= format.zero_swing_mse())
    return detail::saturated_solution(Criterion::MinEdp, format, noise);
  detail::require_strict_density(noise);

  const double rho_lo = solve_max_speed(format, noise, fidelity, opts).rho;
  const double rho_hi = solve_min_energy(format, noise, fidelity, opts).rho;
  const detail::CappedFiller fill(format, noise, fidelity.mse_budget());

  auto edp_at = [&](double rho) {
    const auto f = fill(rho);
    return f.feasible ? f.edp() : std::numeric_limits<double>::infinity();
  };
  // Sign of the first-order condition; negative left of the optimum.
  auto sign_at = [&](double rho) {
    const auto f = fill(rho);
    return f.feasible ? f.stationarity_sign() : -1;
  };

  double rho_star = rho_lo;
  bool unimodal = true;
  if (rho_hi > rho_lo * (1.0 + 1e-12) && sign_at(rho_lo) < 0) {
    constexpr int kScan = 64;
    std::array<double, kScan> grid{};
    std::array<double, kScan> vals{};
    for (int i = 0; i < kScan; ++i) {
      grid[i] = rho_lo + (rho_hi - rho_lo) * static_cast<double>(i) / (kScan - 1);
      vals[i] = edp_at(grid[i]);
    }
    const int best = static_cast<int>(std::min_element(vals.begin(), vals.end()) - vals.begin());
    for (int i = 1; i <= best; ++i)
      if (vals[i] > vals[i - 1] * (1.0 + 1e-12)) unimodal = false;
    for (int i = best + 1; i < kScan; ++i)
      if (vals[i] < vals[i - 1] * (1.0 - 1e-12)) unimodal = false;
    // A non-unimodal scan falls back to refining around the global scan minimum.

    double a = grid[std::max(best - 1, 0)];
    double b = grid[std::min(best + 1, kScan - 1)];
    const double scan_a = a;
    const double scan_b = b;

    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = edp_at(c);
    double fd = edp_at(d);
    while (b - a > 1e-7 * rho_hi) {
      if (fc <= fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - inv_phi * (b - a);
        fc = edp_at(c);
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + inv_phi * (b - a);
        fd = edp_at(d);
      }
    }
    rho_star = 0.5 * (a + b);

    auto polish = [&](double lo, double hi) {
      for (int it = 0; it < 200; ++it) {
        const double mid = lo + 0.5 * (hi - lo);
        if (mid <= lo || mid >= hi) break;
        const int sg = sign_at(mid);
        if (sg == 0) return mid;
        (sg < 0 ? lo : hi) = mid;
      }
      return 0.5 * (lo + hi);
    };
    if (sign_at(rho_hi) <= 0) {
      rho_star = rho_hi;
    } else if (sign_at(a) < 0 && sign_at(b) > 0) {
      rho_star = polish(a, b);
    } else if (sign_at(scan_a) < 0 && sign_at(scan_b) > 0) {
      rho_star = polish(scan_a, scan_b);
    } else if (sign_at(rho_star) != 0) {
      rho_star = polish(rho_lo, rho_hi);
    }
  }

  auto f = fill(rho_star);
  if (!f.feasible) throw SolverFailure("min-edp: chosen cap is infeasible", rho_star);
  f.settle();

  const auto n = static_cast<std::size_t>(format.bits());
  SolverSolution sol;
  sol.criterion = Criterion::MinEdp;
  sol.swings = SwingVector(f.swings);
  sol.capped = f.capped;
  sol.edp_scan_unimodal = unimodal;
  sol.water_level = rho_star * std::exp(f.level);
  sol.cap_duals.resize(n);
  sol.sand_depths.resize(n);
  sol.nonneg_duals.resize(n);
  for (int b = 0; b < format.bits(); ++b) {
    sol.cap_duals[b] = rho_star * f.scaled_eta[b];
    sol.sand_depths[b] = std::log1p(f.scaled_eta[b]);
    sol.nonneg_duals[b] = rho_star + sol.cap_duals[b] -
                          sol.water_level * detail::weighted_density(noise, b, sol.swings[b]);
  }
  detail::finish(sol, format, noise, fidelity, opts);
  return sol;
}

inline SolverSolution solve(Criterion criterion, const WordFormat& format, const NoiseModel& noise,
                            const FidelitySpec& fidelity, const SolverOptions& opts = {}) {
  switch (criterion) {
    case Criterion::MinEnergy: return solve_min_energy(format, noise, fidelity, opts);
    case Criterion::MaxSpeed: return solve_max_speed(format, noise, fidelity, opts);
    case Criterion::MinEdp: return solve_min_edp(format, noise, fidelity, opts);
  }
  throw std::invalid_argument("unknown criterion");
}

/// Largest violation of the KKT system of `criterion`, evaluated from the
/// solution's swings and duals. Every term is dimensionless: stationarity and
/// slackness products are normalized by sigma (and by rho for MinEdp), and the
/// MSE terms are relative to V. The nonnegativity duals are recomputed from
/// stationarity rather than trusted.
inline double kkt_residuals(const SolverSolution& solution, Criterion criterion, const WordFormat& format,
                            const NoiseModel& noise, const FidelitySpec& fidelity) {
  const int n = format.bits();
  if (solution.swings.bits() != n) throw std::invalid_argument("solution width does not match format");
  const double v = fidelity.mse_budget();
  const double sigma = noise.sigma();
  const SwingVector& d = solution.swings;
  const double mse = mse_uniform(d, noise);
  const double rho = max_swing(d);

  double r = std::max(0.0, mse - v) / v;
  if (solution.saturated) {
    // Zero swings with nu = 0 satisfy every condition once the budget holds.
    return std::max(r, rho / sigma);
  }
  r = std::max(r, std::abs(mse - v) / v);
  if (!(solution.water_level > 0.0)) r = std::max(r, 1.0);

  const double nu = solution.water_level;
  auto eta = [&](int b) {
    return static_cast<std::size_t>(b) < solution.cap_duals.size() ? solution.cap_duals[b] : 0.0;
  };

  switch (criterion) {
    case Criterion::MinEnergy:
      for (int b = 0; b < n; ++b) {
        const double lambda = 1.0 - nu * detail::weighted_density(noise, b, d[b]);
        r = std::max({r, -lambda, std::abs(lambda) * d[b] / sigma});
      }
      break;
    case Criterion::MaxSpeed: {
      double eta_sum = 0.0;
      for (int b = 0; b < n; ++b) {
        const double lambda = eta(b) - nu * detail::weighted_density(noise, b, d[b]);
        r = std::max({r, -lambda, -eta(b), std::abs(lambda) * d[b] / sigma,
                      eta(b) * std::abs(rho - d[b]) / sigma});
        eta_sum += eta(b);
      }
      r = std::max(r, std::abs(eta_sum - 1.0));
      break;
    }
    case Criterion::MinEdp: {
      if (!(rho > 0.0)) return std::max(r, 1.0);
      double eta_sum = 0.0;
      for (int b = 0; b < n; ++b) {
        const double lambda = (rho + eta(b) - nu * detail::weighted_density(noise, b, d[b])) / rho;
        r = std::max({r, -lambda, -eta(b) / rho, std::abs(lambda) * d[b] / sigma,
                      (eta(b) / rho) * std::abs(rho - d[b]) / sigma});
        eta_sum += eta(b);
      }
      r = std::max(r, std::abs(eta_sum - energy(d)) / rho);
      break;
    }
  }
  return r;
}

/// Sand depth on the MSB when it is the only capped bit: log(1 + E / rho).
inline double single_cap_sand_capacity(double energy, double rho) {
  if (!(rho > 0.0) || !(energy >= 0.0)) throw std::domain_error("sand capacity needs rho > 0 and E >= 0");
  return std::log1p(energy / rho);
}

inline double single_cap_sand_capacity(const SolverSolution& solution) {
  const int n = solution.swings.bits();
  if (solution.capped_count() != 1 || !solution.capped.at(static_cast<std::size_t>(n - 1)))
    throw std::invalid_argument("sand capacity requires exactly one capped bit, the MSB");
  return single_cap_sand_capacity(solution.energy(), solution.rho);
}

/// PASR implied by the MSB sand depth of a single-cap solution: B / (exp(s) - 1).
inline double pasr_from_sand_capacity(int bits, double sand_depth) {
  if (!(sand_depth > 0.0)) throw std::domain_error("sand depth must be positive");
  return static_cast<double>(bits) / std::expm1(sand_depth);
}

}  // namespace swingfill

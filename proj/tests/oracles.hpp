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

// Test-only reference computations. Nothing here calls into the solvers; the
// Gaussian tail is evaluated from its own series / continued fraction.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

namespace oracle {

/// erfc by Maclaurin series of erf for x < 2.5 and a Lentz continued
/// fraction above, both in long double.
inline long double erfc_ref(long double x) {
  const long double pi = 3.141592653589793238462643383279502884L;
  if (x < 0) return 2.0L - erfc_ref(-x);
  if (x < 2.5L) {
    long double term = x;
    long double sum = x;
    for (int n = 1; n < 200; ++n) {
      term *= -x * x / n;
      const long double add = term / (2 * n + 1);
      sum += add;
      if (std::fabs(add) < 1e-22L * std::fabs(sum)) break;
    }
    return 1.0L - 2.0L / std::sqrt(pi) * sum;
  }
  // erfc(x) = exp(-x^2)/sqrt(pi) * 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))
  const long double tiny = 1e-300L;
  long double f = x, c = x, d = 0.0L;
  for (int n = 1; n < 500; ++n) {
    const long double a = n * 0.5L;
    d = x + a * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = x + a / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0L / d;
    const long double delta = c * d;
    f *= delta;
    if (std::fabs(delta - 1.0L) < 1e-21L) break;
  }
  return std::exp(-x * x) / std::sqrt(pi) / f;
}

/// Gaussian tail Q(x / sigma).
inline double q_ref(double x, double sigma = 1.0) {
  return static_cast<double>(0.5L * erfc_ref(static_cast<long double>(x) / (sigma * std::sqrt(2.0L))));
}

/// Bisection inverse of q_ref on [0, 40].
inline double q_inverse_ref(double p, double sigma = 1.0) {
  double lo = 0.0, hi = 40.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (q_ref(mid, sigma) > p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

/// Exact E[(xhat - x)^2] for a 2-bit source by enumerating every word and
/// every error pattern. `source[x]` is Pr(x), p[b] the flip probabilities.
inline double mse_two_bit_exhaustive(const double source[4], const double p[2]) {
  double mse = 0.0;
  for (int x = 0; x < 4; ++x)
    for (int e = 0; e < 4; ++e) {
      double pe = 1.0;
      for (int b = 0; b < 2; ++b) pe *= ((e >> b) & 1) ? p[b] : 1.0 - p[b];
      const double err = static_cast<double>(x ^ e) - x;
      mse += source[x] * pe * err * err;
    }
  return mse;
}

/// Exact minimum of sum_b k_b * step subject to sum_b 4^b Q(k_b * step) <= budget
/// over integer k_b in [0, levels), by dynamic programming over total steps.
/// Returns the minimal total step count, or -1 if infeasible.
inline std::int64_t grid_min_energy_steps(int bits, double step, int levels, double budget, int cap_levels = -1) {
  const int max_k = cap_levels < 0 ? levels - 1 : std::min(levels - 1, cap_levels);
  const int total = bits * max_k;
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> best(static_cast<std::size_t>(total + 1), inf);
  best[0] = 0.0;
  int reach = 0;
  for (int b = 0; b < bits; ++b) {
    const double w = std::ldexp(1.0, 2 * b);
    std::vector<double> next(best.size(), inf);
    for (int s = 0; s <= reach; ++s) {
      if (best[s] == inf) continue;
      for (int k = 0; k <= max_k; ++k) {
        const double v = best[s] + w * q_ref(k * step);
        if (v < next[s + k]) next[s + k] = v;
      }
    }
    reach += max_k;
    best.swap(next);
  }
  for (int s = 0; s <= total; ++s)
    if (best[s] <= budget) return s;
  return -1;
}

}  // namespace oracle

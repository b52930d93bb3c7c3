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

#include <gtest/gtest.h>

#include <algorithm>
#include <limits>
#include <random>

#include "oracles.hpp"
#include "swingfill/metrics.hpp"
#include "swingfill/noise.hpp"

namespace swingfill {
namespace {

TEST(TailProb, ZeroSwingIsOneHalfForEveryModel) {
  for (auto kind : {NoiseKind::Gaussian, NoiseKind::Laplace, NoiseKind::BoundedUniform}) {
    NoiseModel noise(kind, 1.7);
    EXPECT_EQ(tail_prob(noise, 0.0), 0.5) << to_string(kind);
  }
}

TEST(TailProb, GaussianMatchesSeriesOracle) {
  const NoiseModel g;
  // Frozen from oracle::q_ref (series / continued fraction erfc).
  EXPECT_NEAR(tail_prob(g, 1.2816), 0.0999915000976752, 1e-15);
  EXPECT_NEAR(tail_prob(g, 1.0), 0.158655253931457, 1e-15);
  EXPECT_NEAR(tail_prob(g, 4.0) / 3.16712418331199e-05, 1.0, 1e-13);
  for (double x = 0.0; x < 12.0; x += 0.173) {
    const double ref = oracle::q_ref(x);
    EXPECT_NEAR(tail_prob(g, x) / ref, 1.0, 1e-13) << x;
  }
}

TEST(TailProb, ScaleInvariance) {
  EXPECT_NEAR(tail_prob(NoiseModel::gaussian(2.0), 2.5632), tail_prob(NoiseModel::gaussian(1.0), 1.2816), 1e-16);
  EXPECT_NEAR(tail_prob(NoiseModel::gaussian(2.0), 2.5632), 0.1, 1e-4);
}

TEST(TailProb, RejectsBadInputs) {
  EXPECT_THROW(tail_prob(NoiseModel(), -0.1), std::domain_error);
  EXPECT_THROW(NoiseModel(NoiseKind::Gaussian, 0.0), std::domain_error);
  EXPECT_THROW(NoiseModel(NoiseKind::Laplace, -1.0), std::domain_error);
}

TEST(TailProb, NonincreasingAndConvexOnHalfLine) {
  for (auto kind : {NoiseKind::Gaussian, NoiseKind::Laplace, NoiseKind::BoundedUniform}) {
    NoiseModel noise(kind, 1.0);
    const double h = 0.01;
    for (double x = h; x < 5.0; x += h) {
      EXPECT_LE(noise.tail(x + h), noise.tail(x));
      EXPECT_GE(noise.tail(x - h) - 2.0 * noise.tail(x) + noise.tail(x + h), -1e-15) << to_string(kind) << x;
    }
  }
}

TEST(InverseTail, MatchesBisectionOracle) {
  const NoiseModel g;
  EXPECT_EQ(inverse_tail(g, 0.5), 0.0);
  EXPECT_NEAR(inverse_tail(g, 0.1), 1.2815515655446, 1e-12);
  EXPECT_NEAR(inverse_tail(g, 0.0029766), 2.75034802081779, 1e-12);
  EXPECT_NEAR(inverse_tail(g, 0.0029766), 2.75, 1e-3);
}

TEST(InverseTail, RoundTripsEveryModel) {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> logp(-30.0, std::log(0.5));
  for (auto kind : {NoiseKind::Gaussian, NoiseKind::Laplace, NoiseKind::BoundedUniform}) {
    NoiseModel noise(kind, 1.3);
    // The uniform tail is linear near its support edge, so tiny p loses
    // relative precision to cancellation in a - delta.
    const double floor = kind == NoiseKind::BoundedUniform ? -8.0 : -30.0;
    for (int i = 0; i < 200; ++i) {
      const double p = std::exp(std::max(floor, logp(gen)));
      EXPECT_NEAR(noise.tail(noise.inverse_tail(p)) / p, 1.0, 1e-12) << to_string(kind) << " p=" << p;
    }
  }
}

TEST(InverseTail, RejectsOutOfRange) {
  const NoiseModel g;
  EXPECT_THROW(inverse_tail(g, 0.0), std::domain_error);
  EXPECT_THROW(inverse_tail(g, 0.6), std::domain_error);
  EXPECT_THROW(inverse_tail(g, -0.1), std::domain_error);
}

TEST(WordFormat, WeightsArePowersOfFour) {
  EXPECT_THROW(WordFormat(0), std::invalid_argument);
  EXPECT_THROW(WordFormat(65), std::invalid_argument);
  for (int b = 0; b < 32; ++b) EXPECT_EQ(WordFormat::weight(b), static_cast<double>(1ULL << (2 * b)));
  EXPECT_EQ(WordFormat(63).weight(63), std::ldexp(1.0, 126));
  EXPECT_EQ(WordFormat(8).zero_swing_mse(), 10922.5);
}

TEST(SwingVector, RejectsNegativeAndNonFinite) {
  EXPECT_THROW(SwingVector({1.0, -0.5}), std::domain_error);
  EXPECT_THROW(SwingVector({std::numeric_limits<double>::infinity()}), std::domain_error);
  SwingVector s(3);
  EXPECT_THROW(s.set(1, -1.0), std::domain_error);
}

TEST(MseUniform, Examples) {
  const NoiseModel g;
  EXPECT_DOUBLE_EQ(mse_uniform(SwingVector(8, 0.0), g), 65535.0 / 6.0);
  EXPECT_NEAR(mse_uniform(SwingVector{1.2816}, g), 0.0999915000976752, 1e-15);
  EXPECT_LT(mse_uniform(SwingVector(8, 40.0), g), 1e-300);
}

TEST(MseUniform, ConvexAlongRandomChords) {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> swing(0.0, 6.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (auto kind : {NoiseKind::Gaussian, NoiseKind::Laplace, NoiseKind::BoundedUniform}) {
    NoiseModel noise(kind, 1.0);
    for (int trial = 0; trial < 300; ++trial) {
      std::vector<double> a(8), b(8), m(8);
      const double t = unit(gen);
      for (int i = 0; i < 8; ++i) {
        a[i] = swing(gen);
        b[i] = swing(gen);
        m[i] = t * a[i] + (1 - t) * b[i];
      }
      const double lhs = mse_uniform(SwingVector(m), noise);
      const double rhs = t * mse_uniform(SwingVector(a), noise) + (1 - t) * mse_uniform(SwingVector(b), noise);
      EXPECT_LE(lhs, rhs * (1 + 1e-12) + 1e-12);
    }
  }
}

TEST(MseUniform, StrictlyDecreasingInEachCoordinate) {
  const NoiseModel g;
  std::vector<double> base = {0.3, 1.0, 0.0, 2.2};
  for (int b = 0; b < 4; ++b) {
    auto up = base;
    up[b] += 0.05;
    EXPECT_LT(mse_uniform(SwingVector(up), g), mse_uniform(SwingVector(base), g));
  }
}

TEST(MseNonuniform, ReducesToUniformWhenAgreementVanishes) {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> swing(0.0, 4.0);
  const NoiseModel g;
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> d(8);
    for (auto& x : d) x = swing(gen);
    const SwingVector s(d);
    EXPECT_EQ(mse_nonuniform(s, g, SourceStats::uniform(8)), mse_uniform(s, g));
  }
}

TEST(MseNonuniform, TwoBitExhaustiveOracle) {
  const NoiseModel g;
  const SwingVector zero(2, 0.0);
  const double p[2] = {0.5, 0.5};
  // x in {00, 11} equiprobable: phi(1,0) = +1.
  const double agree[4] = {0.5, 0.0, 0.0, 0.5};
  const double ref_agree = oracle::mse_two_bit_exhaustive(agree, p);
  EXPECT_DOUBLE_EQ(ref_agree, 3.5);
  SourceStats same({0.5, 0.5}, {1.0, 1.0, 1.0, 1.0});
  EXPECT_DOUBLE_EQ(mse_nonuniform(zero, g, same), ref_agree);
  // x in {01, 10}: phi(1,0) = -1.
  const double disagree[4] = {0.0, 0.5, 0.5, 0.0};
  const double ref_disagree = oracle::mse_two_bit_exhaustive(disagree, p);
  EXPECT_DOUBLE_EQ(ref_disagree, 1.5);
  SourceStats opposite({0.5, 0.5}, {1.0, -1.0, -1.0, 1.0});
  EXPECT_DOUBLE_EQ(mse_nonuniform(zero, g, opposite), ref_disagree);

  // Unequal flip probabilities against the same enumeration.
  const SwingVector s{0.7, 1.9};
  const double q[2] = {g.tail(0.7), g.tail(1.9)};
  EXPECT_NEAR(mse_nonuniform(s, g, same), oracle::mse_two_bit_exhaustive(agree, q), 1e-14);
  EXPECT_NEAR(mse_nonuniform(s, g, opposite), oracle::mse_two_bit_exhaustive(disagree, q), 1e-14);
}

TEST(MseNonuniform, DimensionMismatchThrows) {
  EXPECT_THROW(mse_nonuniform(SwingVector(3, 1.0), NoiseModel(), SourceStats::uniform(4)), std::invalid_argument);
}

TEST(MseNonuniform, CrossTermBoundedWhenLsbErrorIsSmall) {
  // With p_0 the largest flip probability, each cross-term coefficient obeys
  // |c_b| <= 2^(b+1) (2^b - 1) p_0, which bounds the relative deviation.
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> p0(1e-6, 0.05);
  const NoiseModel g;
  const int n = 8;
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> phi(n * n, 1.0);
    for (int b = 0; b < n; ++b)
      for (int bp = 0; bp < b; ++bp) phi[b * n + bp] = phi[bp * n + b] = unit(gen);
    SourceStats stats(std::vector<double>(n, 0.5), phi);
    // Nondecreasing swings keep p_0 the largest flip probability.
    std::vector<double> d(n);
    d[0] = g.inverse_tail(p0(gen));
    for (int b = 1; b < n; ++b) d[b] = d[b - 1] + 0.5 * (unit(gen) + 1.0);
    const SwingVector s(d);
    const double uni = mse_uniform(s, g);
    const double non = mse_nonuniform(s, g, stats);
    double bound = 0.0;
    for (int b = 1; b < n; ++b) bound += std::ldexp(1.0, b + 1) * (std::ldexp(1.0, b) - 1.0) * g.tail(d[0]) * g.tail(d[b]);
    EXPECT_LE(std::abs(non - uni) / uni, bound / uni * (1 + 1e-12));
  }
}

TEST(Psnr, Examples) {
  const WordFormat b8(8), b16(16);
  EXPECT_NEAR(psnr_from_mse(65.025, b8), 30.0, 1e-12);
  EXPECT_NEAR(psnr_from_mse(10922.5, b8), 7.74758307486304, 1e-12);
  EXPECT_NEAR(mse_from_psnr(30.0, b16), 4294836.225, 1e-6);
  EXPECT_THROW(psnr_from_mse(0.0, b8), std::domain_error);
  for (double db = -5.0; db < 80.0; db += 3.7) EXPECT_NEAR(psnr_from_mse(mse_from_psnr(db, b8), b8), db, 1e-10);
}

TEST(FidelitySpec, PsnrConversion) {
  const WordFormat b8(8);
  const auto f = FidelitySpec::from_psnr(30.0, b8);
  EXPECT_NEAR(f.mse_budget(), 65.025, 1e-12);
  EXPECT_TRUE(f.solvable_with_positive_swings(b8));
  EXPECT_FALSE(FidelitySpec(0.0).solvable_with_positive_swings(b8));
  EXPECT_THROW(FidelitySpec(-1.0), std::domain_error);
}

TEST(Metrics, Arithmetic) {
  const SwingVector d{1.0, 2.0, 3.0};
  EXPECT_EQ(energy(d), 6.0);
  EXPECT_EQ(max_swing(d), 3.0);
  EXPECT_EQ(edp(d), 18.0);
  EXPECT_EQ(pasr(d), 1.5);
  EXPECT_DOUBLE_EQ(pasr(SwingVector(5, 2.25)), 1.0);
  EXPECT_THROW(pasr(SwingVector(4, 0.0)), std::domain_error);
  EXPECT_NEAR(overall_ber(SwingVector{0.0, 0.0, 4.0}, NoiseModel()), 1.00003167124183, 1e-14);
}

TEST(Metrics, UniformSwingMinimizesOverallBerAtFixedEnergy) {
  std::mt19937_64 gen(19);
  std::normal_distribution<double> jitter(0.0, 0.4);
  const NoiseModel g;
  const SwingVector uniform(8, 2.0);
  const double best = overall_ber(uniform, g);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<double> d(8, 2.0);
    for (int i = 0; i + 1 < 8; i += 2) {
      // Pairwise transfers keep the sum fixed and the swings nonnegative.
      const double t = std::clamp(jitter(gen), -2.0, 2.0);
      d[i] += t;
      d[i + 1] -= t;
    }
    EXPECT_NEAR(energy(SwingVector(d)), 16.0, 1e-12);
    EXPECT_GE(overall_ber(SwingVector(d), g), best - 1e-15);
  }
}

}  // namespace
}  // namespace swingfill

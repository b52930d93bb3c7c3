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

// Monte-Carlo model of the read channel.
//
// Each bit b of a stored word is read by drawing a noise sample and flipping
// the bit when the sample exceeds the swing delta_b. Nothing here evaluates
// the analytic tail probabilities, so the estimates are an independent check
// of the closed-form MSE.

#pragma once

#include <algorithm>
#include <atomic>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iterator>
#include <numbers>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "swingfill/hamming.hpp"
#include "swingfill/metrics.hpp"
#include "swingfill/noise.hpp"

namespace swingfill {

/// SplitMix64 finalizer; maps (seed, stream) pairs to well-mixed engine seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// One reproducible random stream: a 64-bit Mersenne Twister (std::mt19937_64)
/// seeded with splitmix64(splitmix64(seed) ^ stream). The engine and every
/// transform below are fully specified, so draws are identical across
/// platforms and standard libraries.
class StreamRng {
 public:
  explicit StreamRng(std::uint64_t seed, std::uint64_t stream = 0)
      : engine_(splitmix64(splitmix64(seed) ^ stream)) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform on (0, 1].
  double uniform_positive() { return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53; }

  /// Uniform integer in [0, n). Modulo bias is below n / 2^64.
  std::uint64_t below(std::uint64_t n) { return next() % n; }

 private:
  std::mt19937_64 engine_;
};

/// One noise sample. Gaussian uses the cosine branch of Box-Muller; Laplace a
/// random sign times an exponential; bounded uniform a scaled uniform.
inline double sample_noise(const NoiseModel& noise, StreamRng& rng) {
  switch (noise.kind()) {
    case NoiseKind::Gaussian: {
      const double r = std::sqrt(-2.0 * std::log(rng.uniform_positive()));
      return noise.sigma() * r * std::cos(2.0 * std::numbers::pi * rng.uniform());
    }
    case NoiseKind::Laplace: {
      const double mag = -noise.laplace_scale() * std::log(rng.uniform_positive());
      return (rng.next() >> 63) ? -mag : mag;
    }
    case NoiseKind::BoundedUniform:
      return noise.uniform_half_width() * (2.0 * rng.uniform() - 1.0);
  }
  return 0.0;
}

inline constexpr int kMaxSimBits = 32;

inline std::uint64_t word_mask(int bits) {
  return bits >= 64 ? ~0ULL : (1ULL << bits) - 1ULL;
}

/// x XOR eps: the retrieved word for a given error pattern.
inline std::uint64_t apply_error_pattern(std::uint64_t word, std::uint64_t pattern) { return word ^ pattern; }

/// Read `word` once through the noisy channel.
inline std::uint64_t simulate_read(std::uint64_t word, const SwingVector& swings, const NoiseModel& noise,
                                   StreamRng& rng) {
  if (word > word_mask(swings.bits())) throw std::out_of_range("word does not fit in the swing vector's width");
  std::uint64_t pattern = 0;
  for (int b = 0; b < swings.bits(); ++b)
    if (sample_noise(noise, rng) > swings[b]) pattern |= 1ULL << b;
  return apply_error_pattern(word, pattern);
}

struct UniformSource {};

/// Words drawn uniformly at random (with replacement) from a corpus.
struct CorpusSource {
  std::vector<std::uint64_t> words;
};

using Source = std::variant<UniformSource, CorpusSource>;

struct SimConfig {
  std::uint64_t samples = 1'000'000;
  std::uint64_t seed = 1;
  /// Worker threads; 0 picks hardware concurrency. Does not affect results.
  unsigned workers = 0;
};

struct MseEstimate {
  double mean = 0.0;
  std::optional<double> std_error;  ///< sample std / sqrt(N); empty when N < 2
  std::uint64_t n = 0;
  double mean_abs_error = 0.0;
};

/// Empirical E[(xhat - x)^2] over `config.samples` reads.
///
/// Samples are split into 64 fixed blocks, each with its own stream
/// (seed, block). Block sums are reduced in block order, so the estimate does
/// not depend on the number of worker threads.
inline MseEstimate monte_carlo_mse(const SwingVector& swings, const NoiseModel& noise, const SimConfig& config,
                                   const Source& source = UniformSource{}) {
  if (config.samples < 1) throw std::invalid_argument("sample count must be at least 1");
  const int bits = swings.bits();
  if (bits < 1 || bits > kMaxSimBits) throw std::invalid_argument("simulation supports 1..32 bit words");
  const auto* corpus = std::get_if<CorpusSource>(&source);
  if (corpus) {
    if (corpus->words.empty()) throw std::invalid_argument("corpus is empty");
    for (auto w : corpus->words)
      if (w > word_mask(bits)) throw std::out_of_range("corpus word wider than the swing vector");
  }

  constexpr std::uint64_t kBlocks = 64;
  struct Partial {
    double sum = 0.0, sum_sq = 0.0, sum_abs = 0.0;
  };
  std::vector<Partial> partial(kBlocks);
  std::atomic<std::uint64_t> next_block{0};
  auto worker = [&] {
    for (std::uint64_t blk = next_block++; blk < kBlocks; blk = next_block++) {
      const std::uint64_t begin = config.samples * blk / kBlocks;
      const std::uint64_t end = config.samples * (blk + 1) / kBlocks;
      StreamRng rng(config.seed, blk);
      Partial acc;
      for (std::uint64_t i = begin; i < end; ++i) {
        const std::uint64_t x =
            corpus ? corpus->words[rng.below(corpus->words.size())] : (rng.next() & word_mask(bits));
        const std::uint64_t xhat = simulate_read(x, swings, noise, rng);
        const double e = static_cast<double>(xhat) - static_cast<double>(x);
        acc.sum += e * e;
        acc.sum_sq += e * e * e * e;
        acc.sum_abs += std::abs(e);
      }
      partial[blk] = acc;
    }
  };
  unsigned threads = config.workers ? config.workers : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, kBlocks);
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  Partial total;
  for (const auto& p : partial) {
    total.sum += p.sum;
    total.sum_sq += p.sum_sq;
    total.sum_abs += p.sum_abs;
  }
  const double n = static_cast<double>(config.samples);
  MseEstimate est;
  est.n = config.samples;
  est.mean = total.sum / n;
  est.mean_abs_error = total.sum_abs / n;
  if (config.samples >= 2) {
    const double var = std::max(0.0, (total.sum_sq - n * est.mean * est.mean) / (n - 1.0));
    est.std_error = std::sqrt(var / n);
  }
  return est;
}

/// Bytes of a binary PGM (P5, maxval 255) image in raster order.
inline std::vector<std::uint8_t> read_pgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  auto token = [&]() {
    std::string t;
    char c;
    while (in.get(c)) {
      if (c == '#') {
        std::string skip;
        std::getline(in, skip);
        continue;
      }
      if (std::isspace(static_cast<unsigned char>(c))) {
        if (!t.empty()) break;
        continue;
      }
      t.push_back(c);
    }
    return t;
  };
  if (token() != "P5") throw std::runtime_error(path + ": not a binary PGM (P5)");
  std::size_t width = 0, height = 0, maxval = 0;
  try {
    width = std::stoul(token());
    height = std::stoul(token());
    maxval = std::stoul(token());
  } catch (const std::exception&) {
    throw std::runtime_error(path + ": malformed PGM header");
  }
  if (maxval != 255) throw std::runtime_error(path + ": only maxval 255 is supported");
  std::vector<std::uint8_t> pixels(width * height);
  in.read(reinterpret_cast<char*>(pixels.data()), static_cast<std::streamsize>(pixels.size()));
  if (static_cast<std::size_t>(in.gcount()) != pixels.size()) throw std::runtime_error(path + ": truncated PGM data");
  return pixels;
}

inline std::vector<std::uint8_t> read_raw_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

/// Group bytes into B-bit words: one byte per word for B = 8, big-endian byte
/// pairs for B = 16.
inline std::vector<std::uint64_t> words_from_bytes(const std::vector<std::uint8_t>& bytes, int bits) {
  std::vector<std::uint64_t> words;
  if (bits == 8) {
    words.assign(bytes.begin(), bytes.end());
  } else if (bits == 16) {
    if (bytes.size() % 2) throw std::invalid_argument("16-bit corpus needs an even byte count");
    words.reserve(bytes.size() / 2);
    for (std::size_t i = 0; i + 1 < bytes.size(); i += 2)
      words.push_back((static_cast<std::uint64_t>(bytes[i]) << 8) | bytes[i + 1]);
  } else {
    throw std::invalid_argument("corpus words must be 8 or 16 bits");
  }
  return words;
}

/// Load a PGM (detected by its P5 magic) or raw byte file as B-bit words.
inline std::vector<std::uint64_t> load_corpus(const std::string& path, int bits) {
  std::vector<std::uint8_t> bytes;
  {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    char magic[2] = {0, 0};
    in.read(magic, 2);
    const bool pgm = in.gcount() == 2 && magic[0] == 'P' && magic[1] == '5';
    if (pgm && bits != 8) throw std::invalid_argument(path + ": PGM pixels are 8-bit words");
    bytes = pgm ? read_pgm(path) : read_raw_bytes(path);
  }
  auto words = words_from_bytes(bytes, bits);
  if (words.empty()) throw std::runtime_error(path + ": corpus is empty");
  return words;
}

/// Empirical bit marginals Pr(x_b = 1) and agreements phi(b, b').
inline SourceStats extract_source_stats(const std::vector<std::uint64_t>& words, int bits) {
  if (words.empty()) throw std::invalid_argument("cannot extract statistics from an empty corpus");
  WordFormat format(bits);
  const auto n = static_cast<std::size_t>(bits);
  std::vector<std::uint64_t> ones(n, 0);
  std::vector<std::uint64_t> agree(n * n, 0);
  for (std::uint64_t w : words) {
    for (std::size_t b = 0; b < n; ++b) {
      const auto xb = (w >> b) & 1ULL;
      ones[b] += xb;
      for (std::size_t bp = 0; bp < b; ++bp) agree[b * n + bp] += (xb == ((w >> bp) & 1ULL));
    }
  }
  const double total = static_cast<double>(words.size());
  std::vector<double> marginals(n);
  std::vector<double> phi(n * n, 1.0);
  for (std::size_t b = 0; b < n; ++b) {
    marginals[b] = static_cast<double>(ones[b]) / total;
    for (std::size_t bp = 0; bp < b; ++bp) {
      const double a = static_cast<double>(agree[b * n + bp]) / total;
      phi[b * n + bp] = phi[bp * n + b] = std::clamp(2.0 * a - 1.0, -1.0, 1.0);
    }
  }
  return SourceStats(std::move(marginals), std::move(phi));
}

struct PostDecodingEstimate {
  std::vector<double> rates;  ///< per data bit
  double mean_rate = 0.0;     ///< averaged over the data bits
  double mean_rate_std_error = 0.0;
  std::uint64_t trials = 0;
};

/// Monte-Carlo post-decoding error rate per data bit: random data, each
/// codeword bit flipped with probability p, syndrome decoding. The standard
/// error of the bit-averaged rate comes from per-trial error counts, so it
/// accounts for errors that hit several data bits of one codeword together.
inline PostDecodingEstimate monte_carlo_post_decoding(const HammingCode& code, double p, std::uint64_t trials,
                                                      std::uint64_t seed) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("bit error probability outside [0, 1]");
  if (trials < 2) throw std::invalid_argument("need at least two trials");
  StreamRng rng(seed, 0);
  std::vector<std::uint64_t> errors(static_cast<std::size_t>(code.k()), 0);
  double sum = 0.0, sum_sq = 0.0;
  const std::uint64_t data_mask = (1ULL << code.k()) - 1ULL;
  for (std::uint64_t t = 0; t < trials; ++t) {
    const auto data = static_cast<std::uint32_t>(rng.next() & data_mask);
    std::uint32_t word = code.encode(data);
    for (int j = 0; j < code.n(); ++j)
      if (rng.uniform() < p) word ^= 1u << j;
    const std::uint32_t diff = code.decode(word) ^ data;
    for (int j = 0; j < code.k(); ++j) errors[j] += (diff >> j) & 1u;
    const double frac = static_cast<double>(std::popcount(diff)) / code.k();
    sum += frac;
    sum_sq += frac * frac;
  }
  PostDecodingEstimate est;
  est.trials = trials;
  const double n = static_cast<double>(trials);
  for (auto e : errors) est.rates.push_back(static_cast<double>(e) / n);
  est.mean_rate = sum / n;
  est.mean_rate_std_error = std::sqrt(std::max(0.0, (sum_sq - n * est.mean_rate * est.mean_rate) / (n - 1.0)) / n);
  return est;
}

}  // namespace swingfill

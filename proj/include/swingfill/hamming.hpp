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

#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <mutex>
#include <shared_mutex>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace swingfill {

/// Systematic single-error-correcting Hamming code, (7,4) or (15,11).
///
/// Codeword layout is [d_0 .. d_{k-1}, c_0 .. c_{r-1}]. Column j of the parity
/// check matrix is the r-bit syndrome produced by an error in position j: data
/// positions take the non-power-of-two values 3, 5, 6, 7, ... in increasing
/// order, and parity position i takes 2^i.
class HammingCode {
 public:
  HammingCode(int n, int k) : n_(n), k_(k) {
    if (!((n == 7 && k == 4) || (n == 15 && k == 11)))
      throw std::invalid_argument("only Hamming (7,4) and (15,11) are supported");
    const int r = n - k;
    for (std::uint32_t v = 1; v <= static_cast<std::uint32_t>(n); ++v)
      if (!std::has_single_bit(v)) columns_.push_back(v);
    for (int i = 0; i < r; ++i) columns_.push_back(1u << i);
    position_of_syndrome_.assign(static_cast<std::size_t>(n) + 1, -1);
    for (int j = 0; j < n; ++j) position_of_syndrome_[columns_[j]] = j;

    // residual_counts_[w * k + j]: error patterns of weight w that leave data
    // bit j wrong after correction.
    residual_counts_.assign(static_cast<std::size_t>((n + 1) * k), 0);
    for (std::uint32_t e = 1; e < (1u << n); ++e) {
      const std::uint32_t residual = correct(e) & data_mask();
      const int w = std::popcount(e);
      for (int j = 0; j < k; ++j)
        if ((residual >> j) & 1u) ++residual_counts_[static_cast<std::size_t>(w * k + j)];
    }
  }

  static HammingCode h74() { return HammingCode(7, 4); }
  static HammingCode h1511() { return HammingCode(15, 11); }

  int n() const { return n_; }
  int k() const { return k_; }
  int parity_bits() const { return n_ - k_; }
  std::uint32_t column(int j) const { return columns_.at(static_cast<std::size_t>(j)); }

  /// (n - k) x n binary matrix, row i holds bit i of each column.
  std::vector<std::vector<std::uint8_t>> parity_check_matrix() const {
    std::vector<std::vector<std::uint8_t>> h(static_cast<std::size_t>(parity_bits()),
                                             std::vector<std::uint8_t>(static_cast<std::size_t>(n_)));
    for (int i = 0; i < parity_bits(); ++i)
      for (int j = 0; j < n_; ++j) h[i][j] = static_cast<std::uint8_t>((columns_[j] >> i) & 1u);
    return h;
  }

  std::uint32_t syndrome(std::uint32_t word) const {
    std::uint32_t s = 0;
    for (int j = 0; j < n_; ++j)
      if ((word >> j) & 1u) s ^= columns_[j];
    return s;
  }

  std::uint32_t encode(std::uint32_t data) const {
    std::uint32_t parity = 0;
    for (int j = 0; j < k_; ++j)
      if ((data >> j) & 1u) parity ^= columns_[j];
    return (data & data_mask()) | (parity << k_);
  }

  /// Flip the position named by a nonzero syndrome. Every nonzero syndrome
  /// names a position because the code is perfect.
  std::uint32_t correct(std::uint32_t word) const {
    const std::uint32_t s = syndrome(word);
    return s == 0 ? word : word ^ (1u << position_of_syndrome_[s]);
  }

  std::uint32_t decode(std::uint32_t received) const { return correct(received) & data_mask(); }

  std::vector<std::uint8_t> encode(std::span<const std::uint8_t> data) const {
    if (data.size() != static_cast<std::size_t>(k_))
      throw std::invalid_argument("encode expects " + std::to_string(k_) + " data bits");
    return unpack(encode(pack(data)), n_);
  }

  std::vector<std::uint8_t> decode(std::span<const std::uint8_t> received) const {
    if (received.size() != static_cast<std::size_t>(n_))
      throw std::invalid_argument("decode expects " + std::to_string(n_) + " codeword bits");
    return unpack(decode(pack(received)), k_);
  }

  /// Per-data-bit error probability after decoding, with every codeword bit
  /// flipped independently with probability p. Exact: all 2^n error patterns
  /// are enumerated once at construction and grouped by weight, so this sums
  /// n + 1 terms per bit. The code is linear, so the data word does not matter.
  std::vector<double> post_decoding_error_rates(double p) const {
    if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("bit error probability outside [0, 1]");
    std::vector<double> rates(static_cast<std::size_t>(k_), 0.0);
    for (int w = 1; w <= n_; ++w) {
      const double prob = std::pow(p, w) * std::pow(1.0 - p, n_ - w);
      for (int j = 0; j < k_; ++j)
        rates[j] += prob * static_cast<double>(residual_counts_[static_cast<std::size_t>(w * k_ + j)]);
    }
    return rates;
  }

  friend bool operator==(const HammingCode& a, const HammingCode& b) { return a.n_ == b.n_ && a.k_ == b.k_; }

 private:
  std::uint32_t data_mask() const { return (1u << k_) - 1u; }

  static std::uint32_t pack(std::span<const std::uint8_t> bits) {
    std::uint32_t v = 0;
    for (std::size_t j = 0; j < bits.size(); ++j) {
      if (bits[j] > 1) throw std::invalid_argument("bits must be 0 or 1");
      v |= static_cast<std::uint32_t>(bits[j]) << j;
    }
    return v;
  }
  static std::vector<std::uint8_t> unpack(std::uint32_t v, int len) {
    std::vector<std::uint8_t> bits(static_cast<std::size_t>(len));
    for (int j = 0; j < len; ++j) bits[j] = static_cast<std::uint8_t>((v >> j) & 1u);
    return bits;
  }

  int n_;
  int k_;
  std::vector<std::uint32_t> columns_;
  std::vector<int> position_of_syndrome_;
  std::vector<std::uint64_t> residual_counts_;
};

/// Memoized post_decoding_error_rates, keyed by (n, p). Safe for concurrent readers.
class PostDecodingCache {
 public:
  std::vector<double> get(const HammingCode& code, double p) {
    const std::pair<int, double> key{code.n(), p};
    {
      std::shared_lock lock(mu_);
      if (auto it = table_.find(key); it != table_.end()) return it->second;
    }
    auto rates = code.post_decoding_error_rates(p);
    std::unique_lock lock(mu_);
    return table_.try_emplace(key, std::move(rates)).first->second;
  }

  static PostDecodingCache& shared() {
    static PostDecodingCache cache;
    return cache;
  }

 private:
  std::shared_mutex mu_;
  std::map<std::pair<int, double>, std::vector<double>> table_;
};

}  // namespace swingfill

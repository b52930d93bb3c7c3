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

// Reference swing schemes: LSB dropping and selective ECC.
//
// A bit whose value is not stored (dropped, or overwritten by parity) is
// priced as a zero-swing bit, i.e. it is wrong with probability 1/2.

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "swingfill/hamming.hpp"
#include "swingfill/metrics.hpp"
#include "swingfill/noise.hpp"

namespace swingfill {

inline void check_dropped_count(const WordFormat& format, int dropped) {
  if (dropped < 0 || dropped >= format.bits())
    throw std::invalid_argument("LSB dropping needs 0 <= L < B, got L = " + std::to_string(dropped));
}

/// MSE when the L LSBs are not stored and the rest are read at a uniform swing.
inline double lsb_dropping_mse(const WordFormat& format, int dropped, double swing, const NoiseModel& noise) {
  check_dropped_count(format, dropped);
  const double p = noise.tail(swing);
  double mse = 0.0;
  for (int b = 0; b < format.bits(); ++b) mse += WordFormat::weight(b) * (b < dropped ? 0.5 : p);
  return mse;
}

inline double lsb_dropping_energy(const WordFormat& format, int dropped, double swing) {
  check_dropped_count(format, dropped);
  return static_cast<double>(format.bits() - dropped) * swing;
}

inline SwingVector lsb_dropping_swings(const WordFormat& format, int dropped, double swing) {
  check_dropped_count(format, dropped);
  SwingVector s(static_cast<std::size_t>(format.bits()), swing);
  for (int b = 0; b < dropped; ++b) s.set(static_cast<std::size_t>(b), 0.0);
  return s;
}

/// PSNR reached as the swing grows without bound: the dropped bits alone
/// contribute (4^L - 1) / 6. Infinite for L = 0.
inline double lsb_dropping_psnr_ceiling(const WordFormat& format, int dropped) {
  check_dropped_count(format, dropped);
  if (dropped == 0) return std::numeric_limits<double>::infinity();
  return psnr_from_mse(WordFormat(dropped).zero_swing_mse(), format);
}

struct BitPosition {
  int word = 0;
  int bit = 0;
  friend auto operator<=>(const BitPosition&, const BitPosition&) = default;
};

/// Where a selective-ECC scheme puts data, parity and unprotected bits across
/// a group of `words` B-bit words. `protected_bits[i]` holds data bit i of the
/// codeword, `parity_bits[i]` parity bit i. Every (word, bit) slot falls in
/// exactly one of the four sets; discarded slots hold neither data nor parity.
struct SelectiveEccLayout {
  int words = 1;
  int bits = 8;
  std::vector<BitPosition> protected_bits;
  std::vector<BitPosition> parity_bits;
  std::vector<BitPosition> stored_bits;
  std::vector<BitPosition> discarded_bits;

  void validate(const HammingCode& code) const {
    if (words < 1) throw std::invalid_argument("layout needs at least one word");
    WordFormat format(bits);
    if (static_cast<int>(protected_bits.size()) != code.k())
      throw std::invalid_argument("layout protects " + std::to_string(protected_bits.size()) +
                                  " bits but the code carries " + std::to_string(code.k()));
    if (static_cast<int>(parity_bits.size()) != code.parity_bits())
      throw std::invalid_argument("layout holds " + std::to_string(parity_bits.size()) +
                                  " parity bits but the code has " + std::to_string(code.parity_bits()));
    std::set<BitPosition> seen;
    for (const auto* group : {&protected_bits, &parity_bits, &stored_bits, &discarded_bits}) {
      for (const auto& pos : *group) {
        if (pos.word < 0 || pos.word >= words || pos.bit < 0 || pos.bit >= bits)
          throw std::invalid_argument("layout position out of range");
        if (!seen.insert(pos).second) throw std::invalid_argument("layout assigns a bit position twice");
      }
    }
    if (seen.size() != static_cast<std::size_t>(words * bits))
      throw std::invalid_argument("layout does not cover every bit position");
  }

  int read_positions() const {
    return static_cast<int>(protected_bits.size() + parity_bits.size() + stored_bits.size());
  }

  /// One word: data in the k MSBs, parity in the n - k LSBs, the middle bits
  /// stored unprotected (or discarded when `discard_middle`).
  static SelectiveEccLayout single_word(const WordFormat& format, const HammingCode& code,
                                        bool discard_middle = false) {
    const int b = format.bits();
    if (b < code.n()) throw std::invalid_argument("word too narrow for the codeword");
    SelectiveEccLayout l;
    l.words = 1;
    l.bits = b;
    for (int i = 0; i < code.k(); ++i) l.protected_bits.push_back({0, b - code.k() + i});
    for (int i = 0; i < code.parity_bits(); ++i) l.parity_bits.push_back({0, i});
    for (int i = code.parity_bits(); i < b - code.k(); ++i)
      (discard_middle ? l.discarded_bits : l.stored_bits).push_back({0, i});
    return l;
  }

  /// Spread one codeword over `words` words: parity bits fill the LSB of each
  /// word in turn (then the next bit up), and data bits take the MSBs
  /// round-robin across words from the most significant position down.
  static SelectiveEccLayout round_robin(const WordFormat& format, int words, const HammingCode& code) {
    const int b = format.bits();
    if (words < 1 || words * b < code.n()) throw std::invalid_argument("word group too small for the codeword");
    SelectiveEccLayout l;
    l.words = words;
    l.bits = b;
    std::set<BitPosition> used;
    for (int i = 0; i < code.parity_bits(); ++i) {
      BitPosition pos{i % words, i / words};
      l.parity_bits.push_back(pos);
      used.insert(pos);
    }
    for (int bit = b - 1; bit >= 0 && static_cast<int>(l.protected_bits.size()) < code.k(); --bit)
      for (int w = 0; w < words && static_cast<int>(l.protected_bits.size()) < code.k(); ++w) {
        BitPosition pos{w, bit};
        if (used.count(pos)) throw std::invalid_argument("data and parity positions collide");
        l.protected_bits.push_back(pos);
        used.insert(pos);
      }
    for (int w = 0; w < words; ++w)
      for (int bit = 0; bit < b; ++bit)
        if (!used.count({w, bit})) l.stored_bits.push_back({w, bit});
    return l;
  }
};

/// Per-word MSE of selective ECC read at one uniform swing.
inline double selective_ecc_mse(const SelectiveEccLayout& layout, const HammingCode& code, double swing,
                                const NoiseModel& noise) {
  layout.validate(code);
  const double p = noise.tail(swing);
  const auto post = PostDecodingCache::shared().get(code, p);
  double total = 0.0;
  for (const auto& pos : layout.parity_bits) total += WordFormat::weight(pos.bit) * 0.5;
  for (const auto& pos : layout.discarded_bits) total += WordFormat::weight(pos.bit) * 0.5;
  for (const auto& pos : layout.stored_bits) total += WordFormat::weight(pos.bit) * p;
  for (std::size_t i = 0; i < layout.protected_bits.size(); ++i)
    total += WordFormat::weight(layout.protected_bits[i].bit) * post[i];
  return total / static_cast<double>(layout.words);
}

/// Per-word read energy: every stored slot (data, parity, unprotected) is read at `swing`.
inline double selective_ecc_energy(const SelectiveEccLayout& layout, double swing) {
  return swing * static_cast<double>(layout.read_positions()) / static_cast<double>(layout.words);
}

/// Per-word MSE as the swing grows without bound: only the unstored slots remain.
inline double selective_ecc_mse_floor(const SelectiveEccLayout& layout) {
  double total = 0.0;
  for (const auto& pos : layout.parity_bits) total += WordFormat::weight(pos.bit) * 0.5;
  for (const auto& pos : layout.discarded_bits) total += WordFormat::weight(pos.bit) * 0.5;
  return total / static_cast<double>(layout.words);
}

}  // namespace swingfill

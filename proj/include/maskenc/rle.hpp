// Copyright 2026 the maskenc authors
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

#include <cstdint>
#include <string>
#include <vector>

#include "maskenc/errors.hpp"
#include "maskenc/mask.hpp"

namespace maskenc {

/// COCO-style run-length encoding: runs alternate 0/1 in column-major pixel
/// order, starting with a zero run (which may have length 0).
struct RunLengthEncoding {
  int height = 0;
  int width = 0;
  std::vector<std::uint32_t> counts;

  bool operator==(const RunLengthEncoding&) const = default;
};

inline RunLengthEncoding rle_encode(const BinaryMask& mask) {
  RunLengthEncoding rle{mask.height, mask.width, {}};
  std::uint32_t run = 0;
  std::uint8_t cur = 0;
  for (int c = 0; c < mask.width; ++c)
    for (int r = 0; r < mask.height; ++r) {
      std::uint8_t v = mask.at(r, c) ? 1 : 0;
      if (v != cur) {
        rle.counts.push_back(run);
        run = 0;
        cur = v;
      }
      ++run;
    }
  rle.counts.push_back(run);
  return rle;
}

inline BinaryMask rle_decode(const RunLengthEncoding& rle) {
  const std::uint64_t total =
      static_cast<std::uint64_t>(rle.height) * rle.width;
  std::uint64_t sum = 0;
  for (auto c : rle.counts) sum += c;
  if (sum != total)
    throw format_error("malformed RLE: counts sum " + std::to_string(sum) +
                       " != " + std::to_string(total));
  BinaryMask mask = BinaryMask::zeros(rle.height, rle.width);
  std::uint64_t pos = 0;
  std::uint8_t val = 0;
  for (auto c : rle.counts) {
    if (val)
      for (std::uint64_t i = 0; i < c; ++i) {
        std::uint64_t p = pos + i;
        mask.at(static_cast<int>(p % rle.height),
                static_cast<int>(p / rle.height)) = 1;
      }
    pos += c;
    val ^= 1;
  }
  return mask;
}

// Compressed string form, matching the reference COCO toolkit byte for
// byte: counts are delta-coded against counts[i-2] from the fourth entry
// on, then emitted low-order-first in 6-bit words (bits 0-4 data, bit 5
// continuation) as ASCII characters offset by 48. Negative deltas rely on
// sign extension, terminated once the remaining bits are all sign bits.

inline std::string rle_to_string(const RunLengthEncoding& rle) {
  std::string s;
  const auto& counts = rle.counts;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    std::int64_t x = static_cast<std::int64_t>(counts[i]);
    if (i > 2) x -= static_cast<std::int64_t>(counts[i - 2]);
    bool more = true;
    while (more) {
      int word = static_cast<int>(x & 0x1f);
      x >>= 5;
      more = (word & 0x10) ? x != -1 : x != 0;
      if (more) word |= 0x20;
      s.push_back(static_cast<char>(word + 48));
    }
  }
  return s;
}

inline RunLengthEncoding rle_from_string(const std::string& s, int height,
                                         int width) {
  RunLengthEncoding rle{height, width, {}};
  const std::int64_t total = static_cast<std::int64_t>(height) * width;
  std::size_t k = 0;
  while (k < s.size()) {
    std::int64_t x = 0;
    int shift = 0;
    bool more = true;
    while (more) {
      if (k >= s.size())
        throw parse_error("truncated compressed RLE value", k);
      const int ch = static_cast<unsigned char>(s[k]) - 48;
      if (ch < 0 || ch > 63)
        throw parse_error("invalid compressed RLE character", k);
      x |= static_cast<std::int64_t>(ch & 0x1f) << shift;
      shift += 5;
      more = (ch & 0x20) != 0;
      if (!more && (ch & 0x10)) x |= ~std::int64_t{0} << shift;
      ++k;
    }
    if (rle.counts.size() > 2)
      x += static_cast<std::int64_t>(rle.counts[rle.counts.size() - 2]);
    if (x < 0 || x > total)
      throw parse_error("compressed RLE count out of range", k);
    rle.counts.push_back(static_cast<std::uint32_t>(x));
  }
  return rle;
}

}  // namespace maskenc

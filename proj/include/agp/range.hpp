/*
 * Copyright 2026 The Abstract Grammar Parser Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef AGP_RANGE_HPP
#define AGP_RANGE_HPP

#include <compare>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace agp {

using Token = std::string;
using Word = std::vector<Token>;
using WordTuple = std::vector<Word>;

// A span (start, end) of input positions, 1-based with end exclusive.
// start == end denotes the empty word at that position.
struct Range {
  int start = 1;
  int end = 1;

  constexpr int length() const noexcept { return end - start; }
  constexpr bool empty() const noexcept { return start == end; }
  friend constexpr auto operator<=>(const Range &, const Range &) = default;
};

using RangeTuple = std::vector<Range>;

// Partial concatenation: defined iff a.end == b.start.
constexpr std::optional<Range> range_concat(const Range &a, const Range &b) noexcept {
  if (a.end != b.start)
    return std::nullopt;
  return Range{a.start, b.end};
}

// Two ranges overlap when they share at least one token.
constexpr bool overlaps(const Range &a, const Range &b) noexcept {
  return a.start < b.end && b.start < a.end;
}

int total_length(const RangeTuple &ranges) noexcept;
bool valid_range(const Range &r, std::size_t input_length) noexcept;

// The substring homomorphism: component-wise extraction of the words the
// ranges denote. Throws std::out_of_range on endpoints beyond |input|+1.
Word rho(const Range &r, std::span<const Token> input);
WordTuple rho(const RangeTuple &rt, std::span<const Token> input);

std::string to_string(const Range &r);
std::string to_string(const RangeTuple &rt);

struct RangeTupleHash {
  std::size_t operator()(const RangeTuple &rt) const noexcept;
};

} // namespace agp

#endif // AGP_RANGE_HPP

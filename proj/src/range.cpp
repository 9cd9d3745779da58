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

#include "agp/range.hpp"

#include <stdexcept>

namespace agp {

int total_length(const RangeTuple &ranges) noexcept {
  int n = 0;
  for (const auto &r : ranges)
    n += r.length();
  return n;
}

bool valid_range(const Range &r, std::size_t input_length) noexcept {
  const auto limit = static_cast<int>(input_length) + 1;
  return r.start >= 1 && r.start <= r.end && r.end <= limit;
}

Word rho(const Range &r, std::span<const Token> input) {
  if (!valid_range(r, input.size()))
    throw std::out_of_range("range " + to_string(r) + " outside input of length " +
                            std::to_string(input.size()));
  return Word(input.begin() + (r.start - 1), input.begin() + (r.end - 1));
}

WordTuple rho(const RangeTuple &rt, std::span<const Token> input) {
  WordTuple out;
  out.reserve(rt.size());
  for (const auto &r : rt)
    out.push_back(rho(r, input));
  return out;
}

std::string to_string(const Range &r) {
  return "(" + std::to_string(r.start) + "," + std::to_string(r.end) + ")";
}

std::string to_string(const RangeTuple &rt) {
  std::string s = "(";
  for (std::size_t i = 0; i < rt.size(); ++i) {
    if (i)
      s += ",";
    s += to_string(rt[i]);
  }
  return s + ")";
}

std::size_t RangeTupleHash::operator()(const RangeTuple &rt) const noexcept {
  std::size_t h = rt.size();
  for (const auto &r : rt) {
    h = h * 1000003u ^ static_cast<std::size_t>(r.start);
    h = h * 1000003u ^ static_cast<std::size_t>(r.end);
  }
  return h;
}

} // namespace agp

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

/**
 * @file
 *
 * Derivation trees read off a parse forest.
 */

#ifndef AGP_DERIVATION_HPP
#define AGP_DERIVATION_HPP

#include <optional>
#include <string>
#include <vector>

#include "agp/range.hpp"

namespace agp {

struct DerivationNode {
  std::string category;
  std::string rule; // empty for terminal pass-through nodes
  RangeTuple ranges;
  std::optional<Token> word; // set on lexical leaves; empty string for <eps>
  std::vector<DerivationNode> children;

  bool is_leaf() const noexcept { return children.empty(); }
  std::size_t size() const noexcept;
  std::size_t internal_nodes() const noexcept;
  friend bool operator==(const DerivationNode &, const DerivationNode &) = default;
};

// (c {move1} (+wh c, -wh {merge_R1} ...)); leaves print as (n {lex} 'cooks'),
// pass-through terminals as 'a'.
std::string to_bracketed(const DerivationNode &node);

// Shape and labels only: category, rule and word, recursively.
bool same_shape(const DerivationNode &a, const DerivationNode &b);

} // namespace agp

#endif // AGP_DERIVATION_HPP

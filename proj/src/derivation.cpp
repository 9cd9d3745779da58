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

#include "agp/derivation.hpp"

namespace agp {

std::size_t DerivationNode::size() const noexcept {
  std::size_t n = 1;
  for (const auto &c : children)
    n += c.size();
  return n;
}

std::size_t DerivationNode::internal_nodes() const noexcept {
  if (children.empty())
    return 0;
  std::size_t n = 1;
  for (const auto &c : children)
    n += c.internal_nodes();
  return n;
}

namespace {

std::string quoted_word(const Token &w) { return w.empty() ? "<eps>" : "'" + w + "'"; }

void print(const DerivationNode &node, std::string &out) {
  if (node.rule.empty() && node.word && node.children.empty()) {
    out += quoted_word(*node.word);
    return;
  }
  out += '(' + node.category + " {" + node.rule + '}';
  if (node.word)
    out += ' ' + quoted_word(*node.word);
  for (const auto &c : node.children) {
    out += ' ';
    print(c, out);
  }
  out += ')';
}

} // namespace

std::string to_bracketed(const DerivationNode &node) {
  std::string out;
  print(node, out);
  return out;
}

bool same_shape(const DerivationNode &a, const DerivationNode &b) {
  if (a.category != b.category || a.rule != b.rule || a.word != b.word || a.children.size() != b.children.size())
    return false;
  for (std::size_t i = 0; i < a.children.size(); ++i)
    if (!same_shape(a.children[i], b.children[i]))
      return false;
  return true;
}

} // namespace agp

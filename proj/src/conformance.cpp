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

#include "agp/conformance.hpp"

#include <set>

namespace agp {

namespace {

CategorySequence rhs_from_image(const Image &image, const GrammarDefinition &def, std::optional<Token> &leaf) {
  if (const auto *seq = std::get_if<CategorySequence>(&image)) {
    if (seq->size() == 1 && seq->front().is_terminal())
      leaf = seq->front().payload;
    return *seq;
  }
  (void)def;
  const FlatImage flat = flatten(std::get<CallExpression>(image));
  if (flat.leaf)
    leaf = flat.leaf;
  CategorySequence rhs;
  for (const auto &a : flat.arguments)
    rhs.push_back(a.terminal ? Category::terminal(a.name) : Category::nonterminal(a.name));
  return rhs;
}

} // namespace

ConformanceInput<AbstractGrammar> conformance_input(const AbstractGrammar &g, std::size_t max_state_length) {
  ConformanceInput<AbstractGrammar> in;
  const auto &def = g.definition();
  std::set<CategorySequence> prefixes;
  std::set<Category> cats;
  for (const auto &f : def.functions)
    for (const auto &c : f.cases) {
      std::optional<Token> leaf;
      CategorySequence rhs = rhs_from_image(c.image, def, leaf);
      cats.insert(c.lhs);
      if (leaf) {
        cats.insert(Category::terminal(*leaf));
        in.leaves.push_back({c.lhs, f.name, *leaf});
        continue;
      }
      in.rewrites.push_back({c.lhs, f.name, rhs});
      CategorySequence p;
      for (const auto &x : rhs) {
        cats.insert(x);
        p.push_back(x);
        prefixes.insert(p);
      }
    }
  in.categories.assign(cats.begin(), cats.end());

  std::set<CategorySequence> states{CategorySequence{}};
  std::vector<CategorySequence> layer{CategorySequence{}};
  for (std::size_t len = 1; len <= max_state_length; ++len) {
    std::vector<CategorySequence> next;
    for (const auto &s : layer)
      for (const auto &c : in.categories) {
        auto t = s;
        t.push_back(c);
        next.push_back(t);
        states.insert(t);
      }
    layer = std::move(next);
  }
  states.insert(prefixes.begin(), prefixes.end());
  in.states.assign(states.begin(), states.end());

  const bool filter = g.prefix_filter();
  in.transition_defined = [prefixes, filter](const CategorySequence &s, const Category &c) {
    if (!filter)
      return true;
    auto t = s;
    t.push_back(c);
    return prefixes.count(t) > 0;
  };
  in.probabilistic = true;
  return in;
}

ConformanceInput<MinimalistGrammar> conformance_input(const MinimalistGrammar &g, std::size_t max_categories) {
  ConformanceInput<MinimalistGrammar> in;
  std::set<CategoryTuple> cats;
  for (const auto &item : g.lexicon()) {
    CategoryTuple c{{item.features}};
    cats.insert(c);
    if (!item.phon.empty())
      in.leaves.push_back({c, "lex", item.phon.front()});
  }
  // closure under merge and move
  for (bool grew = true; grew && cats.size() < max_categories;) {
    grew = false;
    const std::vector<CategoryTuple> current(cats.begin(), cats.end());
    for (const auto &a : current) {
      for (const auto &m : mg_move(a).results)
        grew |= cats.insert(m.result).second;
      for (const auto &b : current)
        for (const auto &m : mg_merge(a, b))
          grew |= cats.insert(m.result).second;
    }
  }
  in.categories.assign(cats.begin(), cats.end());
  if (in.categories.size() > max_categories)
    in.categories.resize(max_categories);

  for (const auto &a : in.categories) {
    for (const auto &m : mg_move(a).results)
      in.rewrites.push_back({m.result, to_string(m.tag), {a}});
    for (const auto &b : in.categories)
      for (const auto &m : mg_merge(a, b))
        in.rewrites.push_back({m.result, to_string(m.tag), {a, b}});
  }

  in.states.push_back(MgState{});
  for (const auto &a : in.categories)
    in.states.push_back(MgState{{a}, false});
  for (const auto &rw : in.rewrites)
    if (rw.rhs.size() == 2)
      in.states.push_back(MgState{rw.rhs, true});

  // Feature inspection: the head of the pending category must start with a
  // selector for the other head's first feature and keep something after it.
  in.transition_defined = [](const MgState &s, const CategoryTuple &c) {
    if (s.categories.empty())
      return !s.isfinal;
    if (s.isfinal)
      return false;
    const auto &head = s.categories[0].chains[0];
    const auto &other = c.chains[0];
    if (head.size() < 2 || other.empty())
      return false;
    const bool selector = head[0].polarity == Polarity::select_left || head[0].polarity == Polarity::select_right;
    return selector && other[0].polarity == Polarity::selectee && other[0].name == head[0].name;
  };
  in.probabilistic = false;
  return in;
}

} // namespace agp

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

// Test-only helpers for minimalist grammars: a string-level derivation
// enumerator written directly from the merge/move definitions (it shares no
// code with the chart parser), and the small feature universe used by the
// exhaustive checks.

#ifndef AGP_TEST_MG_REFERENCE_HPP
#define AGP_TEST_MG_REFERENCE_HPP

#include <functional>
#include <set>
#include <string>
#include <vector>

#include "agp/minimalist.hpp"

namespace agp::test {

struct StringChain {
  Word phon;
  FeatureSequence features;
  friend auto operator<=>(const StringChain &, const StringChain &) = default;
};

using Expression = std::vector<StringChain>;

inline Word join(const Word &a, const Word &b) {
  Word out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

inline bool selects(const Feature &f, const Feature &g) {
  return (f.polarity == Polarity::select_right || f.polarity == Polarity::select_left) &&
         g.polarity == Polarity::selectee && f.name == g.name;
}

inline std::vector<Expression> string_merge(const Expression &a, const Expression &b) {
  const auto &s = a[0];
  const auto &t = b[0];
  if (s.features.size() < 2 || t.features.empty() || !selects(s.features[0], t.features[0]))
    return {};
  const FeatureSequence gamma(s.features.begin() + 1, s.features.end());
  const FeatureSequence delta(t.features.begin() + 1, t.features.end());
  const bool right = s.features[0].polarity == Polarity::select_right;
  Expression out;
  if (delta.empty())
    out.push_back({right ? join(s.phon, t.phon) : join(t.phon, s.phon), gamma});
  else
    out.push_back({s.phon, gamma});
  out.insert(out.end(), a.begin() + 1, a.end());
  if (!delta.empty())
    out.push_back({t.phon, delta});
  out.insert(out.end(), b.begin() + 1, b.end());
  return {out};
}

inline std::vector<Expression> string_move(const Expression &a) {
  const auto &s = a[0];
  if (s.features.size() < 2 || s.features[0].polarity != Polarity::licensor)
    return {};
  std::vector<std::size_t> hits;
  for (std::size_t i = 1; i < a.size(); ++i)
    if (a[i].features[0].polarity == Polarity::licensee && a[i].features[0].name == s.features[0].name)
      hits.push_back(i);
  if (hits.size() != 1)
    return {};
  const std::size_t i = hits[0];
  const FeatureSequence gamma(s.features.begin() + 1, s.features.end());
  Expression out = a;
  if (a[i].features.size() == 1) {
    out[0] = {join(a[i].phon, s.phon), gamma};
    out.erase(out.begin() + static_cast<std::ptrdiff_t>(i));
  } else {
    out[0].features = gamma;
    out[i].features.erase(out[i].features.begin());
  }
  return {out};
}

// Every expression derivable in at most `depth` rounds of merge and move.
inline std::set<Expression> enumerate_expressions(const std::vector<LexicalItem> &lexicon, int depth) {
  std::set<Expression> all;
  for (const auto &item : lexicon)
    all.insert(Expression{{item.phon, item.features}});
  for (int round = 0; round < depth; ++round) {
    const std::vector<Expression> current(all.begin(), all.end());
    std::set<Expression> next = all;
    for (const auto &a : current) {
      for (auto &e : string_move(a))
        next.insert(std::move(e));
      for (const auto &b : current)
        for (auto &e : string_merge(a, b))
          next.insert(std::move(e));
    }
    if (next.size() == all.size())
      break;
    all = std::move(next);
  }
  return all;
}

// Yields of complete expressions of category `start`.
inline std::set<Word> enumerate_language(const std::vector<LexicalItem> &lexicon, const std::string &start, int depth) {
  std::set<Word> out;
  for (const auto &e : enumerate_expressions(lexicon, depth))
    if (e.size() == 1 && e[0].features == FeatureSequence{Feature{Polarity::selectee, start}})
      out.insert(e[0].phon);
  return out;
}

// The exhaustive universe: three feature names x, y, z with x selected from
// the right, y from the left and z as the licensing pair.
inline const std::vector<Feature> &universe_features() {
  static const std::vector<Feature> fs{{Polarity::selectee, "x"}, {Polarity::select_right, "x"},
                                       {Polarity::selectee, "y"}, {Polarity::select_left, "y"},
                                       {Polarity::licensor, "z"}, {Polarity::licensee, "z"}};
  return fs;
}

// All feature sequences of length 1..max_length over the universe.
inline std::vector<FeatureSequence> universe_chains(std::size_t max_length) {
  std::vector<FeatureSequence> out;
  std::vector<FeatureSequence> layer{{}};
  for (std::size_t len = 1; len <= max_length; ++len) {
    std::vector<FeatureSequence> next;
    for (const auto &prefix : layer)
      for (const auto &f : universe_features()) {
        auto s = prefix;
        s.push_back(f);
        next.push_back(s);
      }
    out.insert(out.end(), next.begin(), next.end());
    layer = std::move(next);
  }
  return out;
}

// Calls visit on every category tuple with 1..max_chains chains drawn from
// `chains`.
inline void for_each_tuple(const std::vector<FeatureSequence> &chains, std::size_t max_chains,
                           const std::function<void(const CategoryTuple &)> &visit) {
  CategoryTuple t;
  std::function<void()> rec = [&] {
    if (!t.chains.empty())
      visit(t);
    if (t.chains.size() == max_chains)
      return;
    for (const auto &c : chains) {
      t.chains.push_back(c);
      rec();
      t.chains.pop_back();
    }
  };
  rec();
}

struct UniverseStats {
  std::size_t merges_tried = 0;
  std::size_t merges_fired = 0;
  std::size_t moves_tried = 0;
  std::size_t moves_fired = 0;
  std::size_t smc_blocked = 0;
  std::size_t violations = 0;
  std::vector<std::string> failures;
};

// The feature accounting law (every successful operation deletes exactly two
// features) and SMC blocking over all tuples with at most three chains of
// length at most `max_length`. Merge inputs together have at most three
// chains.
inline UniverseStats check_universe(std::size_t max_length) {
  UniverseStats st;
  const auto chains = universe_chains(max_length);
  auto fail = [&](const std::string &msg) {
    ++st.violations;
    if (st.failures.size() < 20)
      st.failures.push_back(msg);
  };

  for_each_tuple(chains, 3, [&](const CategoryTuple &a) {
    ++st.moves_tried;
    const auto out = mg_move(a);
    // independent count of chains that would answer the licensor
    std::size_t hits = 0;
    const auto &head = a.chains[0];
    if (head[0].polarity == Polarity::licensor)
      for (std::size_t i = 1; i < a.chains.size(); ++i)
        if (a.chains[i][0].polarity == Polarity::licensee && a.chains[i][0].name == head[0].name)
          ++hits;
    if (out.smc_violation != (hits >= 2))
      fail("SMC flag wrong for " + to_string(a));
    if (hits >= 2) {
      ++st.smc_blocked;
      if (!out.results.empty())
        fail("move fired despite SMC on " + to_string(a));
    }
    if (out.results.size() > 1)
      fail("move is not deterministic on " + to_string(a));
    if (hits == 1 && head.size() >= 2 && out.results.size() != 1)
      fail("move missed on " + to_string(a));
    for (const auto &r : out.results) {
      ++st.moves_fired;
      if (feature_count(r.result) + 2 != feature_count(a))
        fail("move broke the feature count on " + to_string(a));
      for (const auto &c : r.result.chains)
        if (c.empty())
          fail("move left an empty chain on " + to_string(a));
    }
  });

  std::vector<CategoryTuple> one, two;
  for_each_tuple(chains, 2, [&](const CategoryTuple &t) { (t.chains.size() == 1 ? one : two).push_back(t); });
  auto merge_pair = [&](const CategoryTuple &a, const CategoryTuple &b) {
    ++st.merges_tried;
    const auto out = mg_merge(a, b);
    const bool expected = a.chains[0].size() >= 2 && selects(a.chains[0][0], b.chains[0][0]);
    if (expected != !out.empty())
      fail("merge applicability wrong for " + to_string(a) + " / " + to_string(b));
    for (const auto &r : out) {
      ++st.merges_fired;
      if (feature_count(r.result) + 2 != feature_count(a) + feature_count(b))
        fail("merge broke the feature count on " + to_string(a) + " / " + to_string(b));
      const std::size_t chains_out = a.dimension() + b.dimension() - (b.chains[0].size() == 1 ? 1 : 0);
      if (r.result.dimension() != chains_out)
        fail("merge chain count wrong on " + to_string(a) + " / " + to_string(b));
    }
  };
  for (const auto &a : one) {
    for (const auto &b : one)
      merge_pair(a, b);
    for (const auto &b : two)
      merge_pair(a, b);
  }
  for (const auto &a : two)
    for (const auto &b : one)
      merge_pair(a, b);
  return st;
}

} // namespace agp::test

#endif // AGP_TEST_MG_REFERENCE_HPP

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
 * Minimalist grammars: features, lexicon, merge and move at the feature
 * level, the tuple operations that build yields, and the reduction automaton
 * the chart parser runs on.
 *
 * A category is the feature projection of an expression: one feature
 * sequence per chain, head chain first. Strings never live here; they are
 * carried by the ranges of chart items and built by the tuple operations.
 */

#ifndef AGP_MINIMALIST_HPP
#define AGP_MINIMALIST_HPP

#include <compare>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "agp/grammar_interface.hpp"
#include "agp/range.hpp"
#include "agp/score.hpp"
#include "agp/term_function.hpp"

namespace agp {

enum class Polarity { selectee, select_right, select_left, licensor, licensee };

struct Feature {
  Polarity polarity = Polarity::selectee;
  std::string name;

  friend auto operator<=>(const Feature &, const Feature &) = default;
};

using FeatureSequence = std::vector<Feature>;

// "d", "=d", "d=", "+wh", "-wh". Throws std::invalid_argument naming the token.
Feature parse_feature(const std::string &token);
std::string to_string(const Feature &f);
std::string to_string(const FeatureSequence &fs);

struct CategoryTuple {
  std::vector<FeatureSequence> chains;

  std::size_t dimension() const noexcept { return chains.size(); }
  friend auto operator<=>(const CategoryTuple &, const CategoryTuple &) = default;
};

// Chains separated by ", ": "+wh c, -wh".
std::string to_string(const CategoryTuple &c);
std::size_t feature_count(const CategoryTuple &c);

// =x or x= against x; +x against -x.
bool feature_match(const Feature &f, const Feature &g);

enum class MergeCase { R1, L1, R2, L2 };
enum class MoveCase { move1, move2 };

std::string to_string(MergeCase c);
std::string to_string(MoveCase c);

struct MergeResult {
  CategoryTuple result;
  MergeCase tag;
};

struct MoveResult {
  CategoryTuple result;
  MoveCase tag;
  std::size_t mover = 0; // 0-based index of the moving chain
};

struct MoveOutcome {
  std::vector<MoveResult> results;
  bool smc_violation = false;
};

// Results whose head chain would run out of features are not expressions
// and are dropped.
std::vector<MergeResult> mg_merge(const CategoryTuple &a, const CategoryTuple &b);
MoveOutcome mg_move(const CategoryTuple &a);

// Tuple operations. m, n are the dimensions of the inputs; i is the 0-based
// index of the moving component.
TermFunctionPtr merge_operation(MergeCase c, int m, int n);
TermFunctionPtr move1_operation(int m, int i);
TermFunctionPtr move2_operation(int m);

struct LexicalItem {
  Word phon; // empty or a single token
  FeatureSequence features;
  double score = 1.0;

  friend bool operator==(const LexicalItem &, const LexicalItem &) = default;
};

std::string to_string(const LexicalItem &item);

struct MgState {
  std::vector<CategoryTuple> categories;
  bool isfinal = false;

  friend bool operator==(const MgState &, const MgState &) = default;
};

std::string to_string(const MgState &s);

class MgValidationError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

} // namespace agp

template <>
struct std::hash<agp::CategoryTuple> {
  std::size_t operator()(const agp::CategoryTuple &c) const noexcept {
    std::size_t h = c.chains.size();
    for (const auto &chain : c.chains) {
      h = h * 131 + chain.size();
      for (const auto &f : chain)
        h = h * 31 + std::hash<std::string>{}(f.name) * 5 + static_cast<std::size_t>(f.polarity);
    }
    return h;
  }
};

template <>
struct std::hash<agp::MgState> {
  std::size_t operator()(const agp::MgState &s) const noexcept {
    std::size_t h = s.isfinal ? 7 : 3;
    for (const auto &c : s.categories)
      h = h * 1000003 + std::hash<agp::CategoryTuple>{}(c);
    return h;
  }
};

namespace agp {

class MinimalistGrammar {
public:
  using State = MgState;
  using Category = CategoryTuple;
  using Terminal = Token;
  using Record = CompletionRecord<CategoryTuple>;

  // Throws MgValidationError listing every problem with the lexicon.
  MinimalistGrammar(std::vector<LexicalItem> lexicon, std::vector<std::string> start);

  bool tran_possible(const State &s, const Category &c) const;
  State tran(const State &s, const Category &c) const;
  std::vector<Record> comp(const State &s) const;
  const std::vector<Record> &comp_terminal(const Token &t) const;
  const std::vector<Record> &comp_empty() const noexcept { return empty_; }
  std::vector<State> startstates() const { return {State{}}; }
  std::vector<Category> startcategories() const;
  RangeFilter range_filter() const noexcept { return RangeFilter::disjoint; }
  int dimension(const Category &c) const noexcept { return static_cast<int>(c.dimension()); }
  std::vector<std::string> diagnose(const State &s) const;

  const std::vector<LexicalItem> &lexicon() const noexcept { return lexicon_; }
  const std::vector<std::string> &start() const noexcept { return start_; }
  // Chain bound implied by the SMC: one head plus one chain per licensee.
  int chain_bound() const noexcept { return chain_bound_; }
  // The lexical constants plus every structure-building operation up to the
  // chain bound.
  std::vector<TermFunctionPtr> tuple_operations() const;
  // The rule behind a lexical category, for tests.
  std::vector<Record> lexical_records() const;

private:
  RulePtr<CategoryTuple> make_rule(const CategoryTuple &lhs, const std::string &name,
                                   TermFunctionPtr function, std::vector<CategoryTuple> rhs) const;

  std::vector<LexicalItem> lexicon_;
  std::vector<std::string> start_;
  int chain_bound_ = 1;
  std::map<Token, std::vector<Record>> lexical_;
  std::vector<Record> empty_;
};

} // namespace agp

#endif // AGP_MINIMALIST_HPP

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
 * The abstract grammar interface consumed by the chart parser.
 *
 * A grammar frontend is a reduction automaton: states, a partial transition
 * over one category at a time, and completion functions that say which
 * categories a state (or a terminal) reduces to, by which rule and with
 * which probability.
 *
 * Required members of a frontend G:
 *
 *   G::State, G::Category, G::Terminal   (State and Category hashable)
 *   bool  tran_possible(const State&, const Category&) const
 *   State tran(const State&, const Category&) const      // throws if undefined
 *   R     comp(const State&) const                       // R: range of CompletionRecord
 *   R     comp_terminal(const Terminal&) const
 *   std::vector<State>    startstates() const
 *   std::vector<Category> startcategories() const
 *
 * Optional members, detected by the parser:
 *
 *   R           comp_empty() const            // lexical entries with empty phonology
 *   RangeFilter range_filter() const          // positional side condition, default any
 *   int         dimension(const Category&) const
 *   std::vector<std::string> diagnose(const State&) const
 */

#ifndef AGP_GRAMMAR_INTERFACE_HPP
#define AGP_GRAMMAR_INTERFACE_HPP

#include <concepts>
#include <functional>
#include <memory>
#include <optional>
#include <ranges>
#include <span>
#include <string>
#include <vector>

#include "agp/score.hpp"
#include "agp/term_function.hpp"

namespace agp {

// One rewrite: lhs is rewritten to function[rhs...]. Lexical rules have an
// empty rhs and a constant (or no) function.
template <class Category>
struct Rule {
  Category lhs;
  std::string name;
  TermFunctionPtr function;
  std::vector<Category> rhs;
};

template <class Category>
using RulePtr = std::shared_ptr<const Rule<Category>>;

template <class Category>
struct CompletionRecord {
  Category lhs;
  RulePtr<Category> rule;
  LogProb score;
};

// Side condition the fundamental rule checks before combining an edge with a
// constituent.
//   any       no positional constraint
//   adjacent  context-free: edges carry one contiguous span, the constituent
//             must start where the edge ends
//   disjoint  the constituent's ranges must not share a token with the edge's
enum class RangeFilter { any, adjacent, disjoint };

template <class T>
concept Hashable = requires(const T &t) {
  { std::hash<T>{}(t) } -> std::convertible_to<std::size_t>;
};

template <class R, class Category>
concept CompletionRange =
    std::ranges::input_range<R> &&
    std::convertible_to<std::ranges::range_value_t<R>, CompletionRecord<Category>>;

template <class G>
concept GrammarContract =
    requires(const G &g, const typename G::State &s, const typename G::Category &c,
             const typename G::Terminal &t) {
      typename G::State;
      typename G::Category;
      typename G::Terminal;
      requires std::equality_comparable<typename G::State>;
      requires std::equality_comparable<typename G::Category>;
      requires Hashable<typename G::State>;
      requires Hashable<typename G::Category>;
      { g.tran_possible(s, c) } -> std::convertible_to<bool>;
      { g.tran(s, c) } -> std::convertible_to<typename G::State>;
      { g.comp(s) } -> CompletionRange<typename G::Category>;
      { g.comp_terminal(t) } -> CompletionRange<typename G::Category>;
      { g.startstates() } -> std::convertible_to<std::vector<typename G::State>>;
      { g.startcategories() } -> std::convertible_to<std::vector<typename G::Category>>;
    };

// Folds tran over a sequence of categories; empty if some step is undefined.
template <GrammarContract G>
std::optional<typename G::State> tran_sequence(const G &g, typename G::State s,
                                               std::span<const typename G::Category> categories) {
  for (const auto &c : categories) {
    if (!g.tran_possible(s, c))
      return std::nullopt;
    s = g.tran(s, c);
  }
  return s;
}

} // namespace agp

#endif // AGP_GRAMMAR_INTERFACE_HPP

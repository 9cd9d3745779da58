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
 * Agenda-driven, semiring-weighted chart parser over any grammar frontend.
 *
 * Items are edges (an automaton state plus the ranges of the categories it
 * consumed) and constituents (a category plus the range tuple it covers).
 * Every item keeps its backpointers; its score is the semiring sum over them.
 * Items pass through the agenda at least twice: the first dequeue fires the
 * item's own inference rule (complete for edges, introduce for
 * constituents), later dequeues either repeat that when the score moved by
 * more than the tolerance, or settle the item in the chart and combine it
 * with chart partners. A settled item whose score moves again is reopened.
 * Cyclic grammars therefore converge by fixed-point iteration.
 */

#ifndef AGP_CHART_PARSER_HPP
#define AGP_CHART_PARSER_HPP

#include <algorithm>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

#include "agp/derivation.hpp"
#include "agp/grammar_interface.hpp"
#include "agp/range.hpp"
#include "agp/score.hpp"

namespace agp {

template <class G>
concept HasCompEmpty = requires(const G &g) {
  { g.comp_empty() } -> CompletionRange<typename G::Category>;
};

template <class G>
concept HasRangeFilter = requires(const G &g) {
  { g.range_filter() } -> std::convertible_to<RangeFilter>;
};

template <class G>
concept HasDiagnose = requires(const G &g, const typename G::State &s) {
  { g.diagnose(s) } -> std::convertible_to<std::vector<std::string>>;
};

struct ParserOptions {
  // Log-domain change below which a dequeued item counts as settled.
  double tolerance = 1e-12;
  std::size_t item_budget = 1000000;
  // Ignore the frontend's range filter and combine every edge with every
  // constituent, leaving all pruning to the range action.
  bool literal = false;
};

struct ParseDiagnostics {
  std::vector<Token> unknown_tokens;
  std::size_t items = 0;
  std::size_t edges = 0;
  std::size_t constituents = 0;
  std::size_t dequeues = 0;
  std::size_t requeues = 0;
  std::size_t reopened = 0;
  std::size_t smc_violations = 0;
  bool aborted = false;
  std::vector<std::string> messages;
};

class ParseAborted : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

template <GrammarContract G, Semiring S>
class ChartParser;

/**
 * The result of a parse: logbook and chart, read-only.
 */
template <GrammarContract G, Semiring S>
class ParseForest {
public:
  using Category = typename G::Category;
  using State = typename G::State;
  using Value = typename S::value_type;
  using RulePtrT = RulePtr<Category>;

  struct Traversal {
    int edge = -1; // -1: seeded from a start state
    int constituent = -1;
    Value score{};
  };

  struct Completion {
    bool terminal = false;
    int edge = -1;     // edge completions
    int position = 0;  // terminal completions: 1-based token position
    RulePtrT rule;
    Value score{};
  };

  struct Item {
    int id = 0;
    bool is_edge = false;
    int symbol = 0; // interned state (edges) or category (constituents)
    std::vector<RangeTuple> edge_ranges;
    RangeTuple range;
    Value score = S::zero();
    Value lastpop = S::zero();
    bool popped = false;
    int length = 0;
    std::vector<Traversal> traversals;
    std::vector<Completion> completions;
  };

  const std::vector<Token> &input() const noexcept { return input_; }
  const std::vector<Item> &items() const noexcept { return items_; }
  const ParseDiagnostics &diagnostics() const noexcept { return diagnostics_; }
  const State &state(int id) const { return states_.at(static_cast<std::size_t>(id)); }
  const Category &category(int id) const { return categories_.at(static_cast<std::size_t>(id)); }
  RangeTuple goal_range() const { return {Range{1, static_cast<int>(input_.size()) + 1}}; }

  std::optional<int> find_constituent(const Category &c, const RangeTuple &r) const {
    auto cit = category_ids_.find(c);
    if (cit == category_ids_.end())
      return std::nullopt;
    auto it = constituent_keys_.find({cit->second, r});
    if (it == constituent_keys_.end())
      return std::nullopt;
    return it->second;
  }

  std::vector<int> goals() const {
    std::vector<int> out;
    for (const auto &s : start_)
      if (auto id = find_constituent(s, goal_range()))
        out.push_back(*id);
    return out;
  }

  Value inside() const {
    Value v = S::zero();
    for (int id : goals())
      v = S::plus(v, items_[static_cast<std::size_t>(id)].score);
    return v;
  }

  bool recognized() const { return !(inside() == S::zero()); }

  // Highest-scoring derivation of the best goal, following the largest
  // backpointer at every node (ties to the earliest) and skipping
  // backpointers that would revisit an item on the current path.
  std::optional<DerivationNode> best() const {
    std::optional<int> goal;
    for (int id : goals())
      if (!goal || S::less(items_[static_cast<std::size_t>(*goal)].score, items_[static_cast<std::size_t>(id)].score))
        goal = id;
    if (!goal || items_[static_cast<std::size_t>(*goal)].score == S::zero())
      return std::nullopt;
    std::set<int> path;
    return build_constituent(*goal, path);
  }

private:
  friend class ChartParser<G, S>;

  template <class T>
  static std::vector<std::size_t> ranked(const std::vector<T> &bps) {
    std::vector<std::size_t> order(bps.size());
    for (std::size_t i = 0; i < order.size(); ++i)
      order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return S::less(bps[b].score, bps[a].score); });
    return order;
  }

  std::optional<DerivationNode> build_constituent(int id, std::set<int> &path) const {
    const Item &item = items_[static_cast<std::size_t>(id)];
    if (!path.insert(id).second)
      return std::nullopt;
    std::optional<DerivationNode> result;
    for (std::size_t k : ranked(item.completions)) {
      const Completion &c = item.completions[k];
      if (c.score == S::zero())
        continue;
      DerivationNode node;
      node.category = to_string(categories_[static_cast<std::size_t>(item.symbol)]);
      node.rule = c.rule->name;
      node.ranges = item.range;
      if (c.terminal) {
        node.word = item.range.front().empty() ? Token{} : input_[static_cast<std::size_t>(c.position - 1)];
        result = std::move(node);
        break;
      }
      std::vector<DerivationNode> kids;
      if (build_edge(c.edge, path, kids)) {
        node.children = std::move(kids);
        result = std::move(node);
        break;
      }
    }
    path.erase(id);
    return result;
  }

  bool build_edge(int id, std::set<int> &path, std::vector<DerivationNode> &out) const {
    const Item &item = items_[static_cast<std::size_t>(id)];
    if (!path.insert(id).second)
      return false;
    bool ok = false;
    for (std::size_t k : ranked(item.traversals)) {
      const Traversal &t = item.traversals[k];
      if (t.score == S::zero())
        continue;
      std::vector<DerivationNode> kids;
      if (t.edge >= 0 && !build_edge(t.edge, path, kids))
        continue;
      auto last = build_constituent(t.constituent, path);
      if (!last)
        continue;
      kids.push_back(std::move(*last));
      out = std::move(kids);
      ok = true;
      break;
    }
    path.erase(id);
    return ok;
  }

  std::vector<Token> input_;
  std::vector<Category> start_;
  std::vector<Item> items_;
  std::vector<State> states_;
  std::vector<Category> categories_;
  std::unordered_map<Category, int> category_ids_;
  std::map<std::pair<int, RangeTuple>, int> constituent_keys_;
  std::map<std::pair<int, std::vector<RangeTuple>>, int> edge_keys_;
  ParseDiagnostics diagnostics_;
};

template <GrammarContract G, Semiring S>
class ChartParser {
public:
  using Forest = ParseForest<G, S>;
  using Category = typename G::Category;
  using State = typename G::State;
  using Value = typename S::value_type;
  using Record = CompletionRecord<Category>;
  using Item = typename Forest::Item;

  ChartParser(const G &grammar, ParserOptions options) : g_(grammar), options_(options) {
    filter_ = RangeFilter::any;
    if constexpr (HasRangeFilter<G>)
      filter_ = grammar.range_filter();
    if (options_.literal)
      filter_ = RangeFilter::any;
    collapsed_ = filter_ == RangeFilter::adjacent;
  }

  Forest run(std::span<const Token> input) {
    f_ = Forest{};
    f_.input_.assign(input.begin(), input.end());
    f_.start_ = g_.startcategories();
    agenda_.clear();
    where_.clear();
    cells_.clear();
    tran_cache_.clear();
    comp_cache_.clear();
    try {
      axioms();
      loop();
    } catch (const ParseAborted &e) {
      f_.diagnostics_.aborted = true;
      f_.diagnostics_.messages.push_back(e.what());
    }
    auto &d = f_.diagnostics_;
    d.items = f_.items_.size();
    for (const auto &item : f_.items_)
      (item.is_edge ? d.edges : d.constituents)++;
    return std::move(f_);
  }

private:
  enum class Where { agenda, chart };

  struct Cell {
    std::map<int, std::vector<int>> edges;        // by state
    std::map<int, std::vector<int>> constituents; // by category
  };

  // ---- interning ----------------------------------------------------------

  int state_id(const State &s) {
    auto it = state_ids_.find(s);
    if (it != state_ids_.end())
      return it->second;
    const int id = static_cast<int>(f_.states_.size());
    f_.states_.push_back(s);
    state_ids_.emplace(s, id);
    return id;
  }

  int category_id(const Category &c) {
    auto it = f_.category_ids_.find(c);
    if (it != f_.category_ids_.end())
      return it->second;
    const int id = static_cast<int>(f_.categories_.size());
    f_.categories_.push_back(c);
    f_.category_ids_.emplace(c, id);
    return id;
  }

  // Successor state id, or -1 when the transition is undefined.
  int transition(int state, int category) {
    auto key = std::make_pair(state, category);
    auto it = tran_cache_.find(key);
    if (it != tran_cache_.end())
      return it->second;
    int next = -1;
    const State &s = f_.states_[static_cast<std::size_t>(state)];
    const Category &c = f_.categories_[static_cast<std::size_t>(category)];
    if (g_.tran_possible(s, c)) {
      State t = g_.tran(s, c);
      next = state_id(t);
    }
    tran_cache_.emplace(key, next);
    return next;
  }

  const std::vector<Record> &completions(int state) {
    auto it = comp_cache_.find(state);
    if (it != comp_cache_.end())
      return it->second;
    const State &s = f_.states_[static_cast<std::size_t>(state)];
    std::vector<Record> records;
    for (const auto &r : g_.comp(s))
      records.push_back(r);
    if constexpr (HasDiagnose<G>)
      if (!g_.diagnose(s).empty())
        ++f_.diagnostics_.smc_violations;
    return comp_cache_.emplace(state, std::move(records)).first->second;
  }

  // ---- items --------------------------------------------------------------

  Item &item(int id) { return f_.items_[static_cast<std::size_t>(id)]; }

  int new_item(Item it) {
    if (f_.items_.size() >= options_.item_budget)
      throw ParseAborted("item budget of " + std::to_string(options_.item_budget) + " exhausted after " +
                         std::to_string(f_.items_.size()) + " items");
    it.id = static_cast<int>(f_.items_.size());
    f_.items_.push_back(std::move(it));
    return static_cast<int>(f_.items_.size()) - 1;
  }

  int edge_for(int state, std::vector<RangeTuple> ranges) {
    auto key = std::make_pair(state, ranges);
    auto it = f_.edge_keys_.find(key);
    if (it != f_.edge_keys_.end())
      return it->second;
    Item e;
    e.is_edge = true;
    e.symbol = state;
    for (const auto &r : ranges)
      e.length += total_length(r);
    e.edge_ranges = std::move(ranges);
    const int id = new_item(std::move(e));
    f_.edge_keys_.emplace(std::move(key), id);
    return id;
  }

  int constituent_for(int category, RangeTuple range) {
    auto key = std::make_pair(category, range);
    auto it = f_.constituent_keys_.find(key);
    if (it != f_.constituent_keys_.end())
      return it->second;
    Item c;
    c.symbol = category;
    c.length = total_length(range);
    c.range = std::move(range);
    const int id = new_item(std::move(c));
    f_.constituent_keys_.emplace(std::move(key), id);
    return id;
  }

  void recompute(Item &it) {
    Value v = S::zero();
    for (const auto &t : it.traversals)
      v = S::plus(v, t.score);
    for (const auto &c : it.completions)
      v = S::plus(v, c.score);
    it.score = v;
  }

  // After a backpointer changed: schedule new items, reopen settled ones
  // whose score moved noticeably.
  void touched(int id) {
    Item &it = item(id);
    recompute(it);
    auto w = where_.find(id);
    if (w == where_.end()) {
      push(id);
      return;
    }
    if (w->second == Where::chart &&
        noteworthy_change(S::log_value(it.lastpop), S::log_value(it.score), options_.tolerance)) {
      unchart(id);
      ++f_.diagnostics_.reopened;
      ++f_.diagnostics_.requeues;
      push(id);
    }
  }

  void upsert_traversal(int target, int edge, int constituent, Value score) {
    Item &it = item(target);
    for (auto &t : it.traversals)
      if (t.edge == edge && t.constituent == constituent) {
        if (t.score == score)
          return;
        t.score = score;
        touched(target);
        return;
      }
    it.traversals.push_back({edge, constituent, score});
    touched(target);
  }

  void upsert_completion(int target, typename Forest::Completion c) {
    Item &it = item(target);
    for (auto &old : it.completions)
      if (old.terminal == c.terminal && old.edge == c.edge && old.position == c.position && old.rule == c.rule) {
        if (old.score == c.score)
          return;
        old.score = c.score;
        touched(target);
        return;
      }
    it.completions.push_back(std::move(c));
    touched(target);
  }

  // ---- agenda and chart ---------------------------------------------------

  using AgendaKey = std::tuple<int, int, int>; // length, kind (edges first), id

  AgendaKey agenda_key(int id) {
    const Item &it = item(id);
    return {it.length, it.is_edge ? 0 : 1, id};
  }

  void push(int id) {
    agenda_.insert(agenda_key(id));
    where_[id] = Where::agenda;
  }

  // Chart cell an item is indexed under: edges by the end of their last
  // range, constituents by the start of their first.
  int cell_of(const Item &it) const {
    return it.is_edge ? it.edge_ranges.back().back().end : it.range.front().start;
  }

  void enchart(int id) {
    const Item &it = item(id);
    auto &cell = cells_[cell_of(it)];
    (it.is_edge ? cell.edges : cell.constituents)[it.symbol].push_back(id);
    where_[id] = Where::chart;
  }

  void unchart(int id) {
    const Item &it = item(id);
    auto &cell = cells_[cell_of(it)];
    auto &ids = (it.is_edge ? cell.edges : cell.constituents)[it.symbol];
    ids.erase(std::find(ids.begin(), ids.end(), id));
  }

  // ---- deduction ----------------------------------------------------------

  void axioms() {
    const auto &input = f_.input_;
    const int m = static_cast<int>(input.size());
    for (int i = 1; i <= m; ++i) {
      const Token &w = input[static_cast<std::size_t>(i - 1)];
      bool any = false;
      for (const auto &r : g_.comp_terminal(w)) {
        any = true;
        const int c = constituent_for(category_id(r.lhs), RangeTuple{Range{i, i + 1}});
        upsert_completion(c, {true, -1, i, r.rule, S::lift(r.score)});
      }
      if (!any &&
          std::find(f_.diagnostics_.unknown_tokens.begin(), f_.diagnostics_.unknown_tokens.end(), w) ==
              f_.diagnostics_.unknown_tokens.end())
        f_.diagnostics_.unknown_tokens.push_back(w);
    }
    if constexpr (HasCompEmpty<G>) {
      for (const auto &r : g_.comp_empty())
        for (int i = 1; i <= m + 1; ++i) {
          const int c = constituent_for(category_id(r.lhs), RangeTuple{Range{i, i}});
          upsert_completion(c, {true, -1, i, r.rule, S::lift(r.score)});
        }
    }
  }

  void loop() {
    while (!agenda_.empty()) {
      const int id = std::get<2>(*agenda_.begin());
      agenda_.erase(agenda_.begin());
      where_.erase(id);
      ++f_.diagnostics_.dequeues;
      Item &it = item(id);
      if (it.popped && !noteworthy_change(S::log_value(it.lastpop), S::log_value(it.score), options_.tolerance)) {
        enchart(id);
        fundamental(id);
        continue;
      }
      it.popped = true;
      it.lastpop = it.score;
      if (it.is_edge)
        complete_edge(id);
      else
        introduce_edge(id);
      if (!where_.count(id)) {
        push(id);
        ++f_.diagnostics_.requeues;
      }
    }
  }

  void introduce_edge(int id) {
    const Item cons = item(id);
    for (const auto &s0 : g_.startstates()) {
      const int next = transition(state_id(s0), cons.symbol);
      if (next < 0)
        continue;
      const int e = edge_for(next, {cons.range});
      upsert_traversal(e, -1, id, cons.score);
    }
  }

  void complete_edge(int id) {
    const Item edge = item(id);
    const auto records = completions(edge.symbol); // copy: interning may grow caches
    for (const auto &r : records) {
      std::optional<RangeTuple> range;
      if (collapsed_)
        range = edge.edge_ranges.front();
      else
        range = r.rule->function->apply_ranges(edge.edge_ranges);
      if (!range)
        continue;
      const int c = constituent_for(category_id(r.lhs), std::move(*range));
      upsert_completion(c, {false, id, 0, r.rule, S::times(S::lift(r.score), edge.score)});
    }
  }

  bool compatible(const Item &edge, const Item &cons) const {
    switch (filter_) {
    case RangeFilter::adjacent:
      return edge.edge_ranges.front().front().end == cons.range.front().start;
    case RangeFilter::disjoint:
      for (const auto &rt : edge.edge_ranges)
        for (const auto &a : rt)
          for (const auto &b : cons.range)
            if (overlaps(a, b))
              return false;
      return true;
    case RangeFilter::any:
      return true;
    }
    return true;
  }

  void combine(int edge_id, int cons_id) {
    const Item &edge = item(edge_id);
    const Item &cons = item(cons_id);
    const int next = transition(edge.symbol, cons.symbol);
    if (next < 0 || !compatible(edge, cons))
      return;
    std::vector<RangeTuple> ranges;
    if (collapsed_) {
      ranges = {RangeTuple{Range{edge.edge_ranges.front().front().start, cons.range.front().end}}};
    } else {
      ranges = edge.edge_ranges;
      ranges.push_back(cons.range);
    }
    const Value score = S::times(edge.score, cons.score);
    const int e = edge_for(next, std::move(ranges));
    upsert_traversal(e, edge_id, cons_id, score);
  }

  void fundamental(int id) {
    const bool is_edge = item(id).is_edge;
    std::vector<int> partners;
    if (filter_ == RangeFilter::adjacent) {
      auto cell = cells_.find(cell_of(item(id)));
      if (cell != cells_.end())
        for (const auto &[symbol, ids] : is_edge ? cell->second.constituents : cell->second.edges)
          partners.insert(partners.end(), ids.begin(), ids.end());
    } else {
      for (const auto &[pos, cell] : cells_)
        for (const auto &[symbol, ids] : is_edge ? cell.constituents : cell.edges)
          partners.insert(partners.end(), ids.begin(), ids.end());
    }
    for (int p : partners) {
      if (is_edge)
        combine(id, p);
      else
        combine(p, id);
    }
  }

  const G &g_;
  ParserOptions options_;
  RangeFilter filter_ = RangeFilter::any;
  bool collapsed_ = false;
  Forest f_;
  std::set<AgendaKey> agenda_;
  std::unordered_map<int, Where> where_;
  std::map<int, Cell> cells_;
  std::unordered_map<State, int> state_ids_;
  std::map<std::pair<int, int>, int> tran_cache_;
  std::unordered_map<int, std::vector<Record>> comp_cache_;
};

template <Semiring S, GrammarContract G>
ParseForest<G, S> run_chartparser(const G &grammar, std::span<const Token> input, ParserOptions options = {}) {
  return ChartParser<G, S>(grammar, options).run(input);
}

} // namespace agp

#endif // AGP_CHART_PARSER_HPP

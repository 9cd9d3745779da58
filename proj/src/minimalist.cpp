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

#include "agp/minimalist.hpp"

#include <algorithm>
#include <mutex>
#include <set>
#include <sstream>
#include <tuple>

namespace agp {

namespace {

bool valid_name(const std::string &name) {
  return !name.empty() && name.find_first_of("=+-@:#' \t") == std::string::npos;
}

} // namespace

Feature parse_feature(const std::string &token) {
  Feature f;
  std::string name = token;
  if (!token.empty() && token.front() == '=') {
    f.polarity = Polarity::select_right;
    name = token.substr(1);
  } else if (!token.empty() && token.back() == '=') {
    f.polarity = Polarity::select_left;
    name = token.substr(0, token.size() - 1);
  } else if (!token.empty() && token.front() == '+') {
    f.polarity = Polarity::licensor;
    name = token.substr(1);
  } else if (!token.empty() && token.front() == '-') {
    f.polarity = Polarity::licensee;
    name = token.substr(1);
  }
  if (!valid_name(name))
    throw std::invalid_argument("bad feature '" + token + "'");
  f.name = std::move(name);
  return f;
}

std::string to_string(const Feature &f) {
  switch (f.polarity) {
  case Polarity::selectee:
    return f.name;
  case Polarity::select_right:
    return "=" + f.name;
  case Polarity::select_left:
    return f.name + "=";
  case Polarity::licensor:
    return "+" + f.name;
  case Polarity::licensee:
    return "-" + f.name;
  }
  return f.name;
}

std::string to_string(const FeatureSequence &fs) {
  std::string out;
  for (const auto &f : fs) {
    if (!out.empty())
      out += ' ';
    out += to_string(f);
  }
  return out;
}

std::string to_string(const CategoryTuple &c) {
  std::string out;
  for (const auto &chain : c.chains) {
    if (!out.empty())
      out += ", ";
    out += to_string(chain);
  }
  return out;
}

std::size_t feature_count(const CategoryTuple &c) {
  std::size_t n = 0;
  for (const auto &chain : c.chains)
    n += chain.size();
  return n;
}

bool feature_match(const Feature &f, const Feature &g) {
  if (f.name != g.name)
    return false;
  if (f.polarity == Polarity::select_right || f.polarity == Polarity::select_left)
    return g.polarity == Polarity::selectee;
  return f.polarity == Polarity::licensor && g.polarity == Polarity::licensee;
}

std::string to_string(MergeCase c) {
  switch (c) {
  case MergeCase::R1:
    return "merge_R1";
  case MergeCase::L1:
    return "merge_L1";
  case MergeCase::R2:
    return "merge_R2";
  case MergeCase::L2:
    return "merge_L2";
  }
  return "merge";
}

std::string to_string(MoveCase c) { return c == MoveCase::move1 ? "move1" : "move2"; }

std::vector<MergeResult> mg_merge(const CategoryTuple &a, const CategoryTuple &b) {
  std::vector<MergeResult> out;
  if (a.chains.empty() || b.chains.empty() || a.chains[0].empty() || b.chains[0].empty())
    return out;
  const Feature &sel = a.chains[0][0];
  if (!feature_match(sel, b.chains[0][0]) || sel.polarity == Polarity::licensor)
    return out;
  FeatureSequence gamma(a.chains[0].begin() + 1, a.chains[0].end());
  if (gamma.empty())
    return out;
  const bool right = sel.polarity == Polarity::select_right;
  FeatureSequence delta(b.chains[0].begin() + 1, b.chains[0].end());

  CategoryTuple r;
  r.chains.push_back(std::move(gamma));
  r.chains.insert(r.chains.end(), a.chains.begin() + 1, a.chains.end());
  MergeCase tag;
  if (delta.empty()) {
    tag = right ? MergeCase::R1 : MergeCase::L1;
  } else {
    tag = right ? MergeCase::R2 : MergeCase::L2;
    r.chains.push_back(std::move(delta));
  }
  r.chains.insert(r.chains.end(), b.chains.begin() + 1, b.chains.end());
  out.push_back({std::move(r), tag});
  return out;
}

MoveOutcome mg_move(const CategoryTuple &a) {
  MoveOutcome out;
  if (a.chains.empty() || a.chains[0].empty() || a.chains[0][0].polarity != Polarity::licensor)
    return out;
  const Feature &lic = a.chains[0][0];
  std::vector<std::size_t> targets;
  for (std::size_t i = 1; i < a.chains.size(); ++i)
    if (!a.chains[i].empty() && feature_match(lic, a.chains[i][0]))
      targets.push_back(i);
  if (targets.empty())
    return out;
  if (targets.size() > 1) {
    out.smc_violation = true;
    return out;
  }
  const std::size_t i = targets[0];
  FeatureSequence gamma(a.chains[0].begin() + 1, a.chains[0].end());
  if (gamma.empty())
    return out;
  CategoryTuple r = a;
  r.chains[0] = std::move(gamma);
  if (a.chains[i].size() == 1) {
    r.chains.erase(r.chains.begin() + static_cast<std::ptrdiff_t>(i));
    out.results.push_back({std::move(r), MoveCase::move1, i});
  } else {
    r.chains[i].erase(r.chains[i].begin());
    out.results.push_back({std::move(r), MoveCase::move2, i});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Tuple operations, built once per shape and shared.

namespace {

std::mutex cache_mutex;
std::map<std::tuple<int, int, int>, TermFunctionPtr> cache;

TermFunctionPtr cached(std::tuple<int, int, int> key, const std::function<TermFunctionPtr()> &make) {
  std::lock_guard<std::mutex> lock(cache_mutex);
  auto it = cache.find(key);
  if (it != cache.end())
    return it->second;
  return cache.emplace(key, make()).first->second;
}

std::string shape(int m, int n) { return "[" + std::to_string(m) + "," + std::to_string(n) + "]"; }

} // namespace

TermFunctionPtr merge_operation(MergeCase c, int m, int n) {
  if (m < 1 || n < 1)
    throw std::invalid_argument("merge operation needs positive dimensions");
  return cached({static_cast<int>(c), m, n}, [&] {
    ComponentFlow flow;
    if (c == MergeCase::R1 || c == MergeCase::L1) {
      if (c == MergeCase::R1)
        flow.push_back({FlowSymbol::arg(0, 0), FlowSymbol::arg(1, 0)});
      else
        flow.push_back({FlowSymbol::arg(1, 0), FlowSymbol::arg(0, 0)});
      for (int k = 1; k < m; ++k)
        flow.push_back({FlowSymbol::arg(0, k)});
      for (int k = 1; k < n; ++k)
        flow.push_back({FlowSymbol::arg(1, k)});
    } else {
      for (int k = 0; k < m; ++k)
        flow.push_back({FlowSymbol::arg(0, k)});
      for (int k = 0; k < n; ++k)
        flow.push_back({FlowSymbol::arg(1, k)});
    }
    return TermFunction::from_flow(to_string(c) + shape(m, n), {m, n}, std::move(flow));
  });
}

TermFunctionPtr move1_operation(int m, int i) {
  if (m < 2 || i < 1 || i >= m)
    throw std::invalid_argument("move1 needs 0 < i < m");
  return cached({10, m, i}, [&] {
    // the mover lands in front of the head
    ComponentFlow flow{{FlowSymbol::arg(0, i), FlowSymbol::arg(0, 0)}};
    for (int k = 1; k < m; ++k)
      if (k != i)
        flow.push_back({FlowSymbol::arg(0, k)});
    return TermFunction::from_flow("move1" + shape(m, i), {m}, std::move(flow));
  });
}

TermFunctionPtr move2_operation(int m) {
  if (m < 2)
    throw std::invalid_argument("move2 needs a mover");
  return cached({11, m, 0}, [&] {
    ComponentFlow flow;
    for (int k = 0; k < m; ++k)
      flow.push_back({FlowSymbol::arg(0, k)});
    return TermFunction::from_flow("move2[" + std::to_string(m) + "]", {m}, std::move(flow));
  });
}

std::string to_string(const LexicalItem &item) {
  std::ostringstream os;
  os << (item.phon.empty() ? std::string("<eps>") : item.phon.front()) << " :: " << to_string(item.features);
  return os.str();
}

std::string to_string(const MgState &s) {
  std::string out = "<";
  for (std::size_t i = 0; i < s.categories.size(); ++i)
    out += (i ? " | " : "") + to_string(s.categories[i]);
  return out + (s.isfinal ? ">*" : ">");
}

// ---------------------------------------------------------------------------

namespace {

TermFunctionPtr lexical_constant(const LexicalItem &item) {
  const std::string name = "f[" + to_string(item) + "]";
  if (!item.phon.empty()) {
    ComponentFlow flow{{FlowSymbol::word(item.phon.front())}};
    return TermFunction::from_flow(name, {}, std::move(flow));
  }
  // the empty word; its position comes from the chart seed, not the function
  return std::make_shared<const TermFunction>(
      name, Signature{{}, 1}, [](std::span<const WordTuple>) -> std::optional<WordTuple> { return WordTuple{Word{}}; },
      TermFunction::RangeEvaluator{});
}

} // namespace

MinimalistGrammar::MinimalistGrammar(std::vector<LexicalItem> lexicon, std::vector<std::string> start)
    : lexicon_(std::move(lexicon)), start_(std::move(start)) {
  std::vector<std::string> problems;
  if (lexicon_.empty())
    problems.push_back("lexicon is empty");
  if (start_.empty())
    problems.push_back("no start category declared");
  for (const auto &s : start_)
    if (!valid_name(s))
      problems.push_back("bad start category '" + s + "'");
  std::set<std::string> licensees;
  for (const auto &item : lexicon_) {
    if (item.phon.size() > 1)
      problems.push_back("lexical item '" + to_string(item) + "' has more than one token");
    if (item.features.empty())
      problems.push_back("lexical item for '" + (item.phon.empty() ? std::string("<eps>") : item.phon.front()) +
                         "' has no features");
    if (!(item.score >= 0.0 && item.score <= 1.0))
      problems.push_back("score of '" + to_string(item) + "' outside [0,1]");
    for (const auto &f : item.features) {
      if (!valid_name(f.name))
        problems.push_back("bad feature name in '" + to_string(item) + "'");
      if (f.polarity == Polarity::licensee)
        licensees.insert(f.name);
    }
  }
  if (!problems.empty()) {
    std::string msg;
    for (const auto &p : problems)
      msg += (msg.empty() ? "" : "\n") + p;
    throw MgValidationError(msg);
  }
  chain_bound_ = 1 + static_cast<int>(licensees.size());

  for (const auto &item : lexicon_) {
    CategoryTuple cat{{item.features}};
    auto rule = make_rule(cat, "lex", lexical_constant(item), {});
    Record record{cat, rule, LogProb::from_probability(item.score)};
    if (item.phon.empty())
      empty_.push_back(std::move(record));
    else
      lexical_[item.phon.front()].push_back(std::move(record));
  }
}

RulePtr<CategoryTuple> MinimalistGrammar::make_rule(const CategoryTuple &lhs, const std::string &name,
                                                   TermFunctionPtr function, std::vector<CategoryTuple> rhs) const {
  return std::make_shared<const Rule<CategoryTuple>>(
      Rule<CategoryTuple>{lhs, name, std::move(function), std::move(rhs)});
}

bool MinimalistGrammar::tran_possible(const State &s, const Category &c) const {
  if (s.categories.empty())
    return !s.isfinal;
  if (s.isfinal || s.categories.size() != 1)
    return false;
  return !mg_merge(s.categories[0], c).empty();
}

MgState MinimalistGrammar::tran(const State &s, const Category &c) const {
  if (!tran_possible(s, c))
    throw std::logic_error("transition from " + to_string(s) + " over [" + to_string(c) + "] is undefined");
  MgState next = s;
  next.categories.push_back(c);
  next.isfinal = next.categories.size() == 2;
  return next;
}

std::vector<MinimalistGrammar::Record> MinimalistGrammar::comp(const State &s) const {
  std::vector<Record> out;
  if (s.categories.size() == 2) {
    const auto &a = s.categories[0];
    const auto &b = s.categories[1];
    for (auto &m : mg_merge(a, b)) {
      auto op = merge_operation(m.tag, static_cast<int>(a.dimension()), static_cast<int>(b.dimension()));
      out.push_back(Record{m.result, make_rule(m.result, to_string(m.tag), op, {a, b}), LogProb::one()});
    }
  } else if (s.categories.size() == 1) {
    const auto &a = s.categories[0];
    const int m = static_cast<int>(a.dimension());
    for (auto &mv : mg_move(a).results) {
      auto op = mv.tag == MoveCase::move1 ? move1_operation(m, static_cast<int>(mv.mover)) : move2_operation(m);
      out.push_back(Record{mv.result, make_rule(mv.result, to_string(mv.tag), op, {a}), LogProb::one()});
    }
  }
  return out;
}

const std::vector<MinimalistGrammar::Record> &MinimalistGrammar::comp_terminal(const Token &t) const {
  static const std::vector<Record> none;
  auto it = lexical_.find(t);
  return it == lexical_.end() ? none : it->second;
}

std::vector<CategoryTuple> MinimalistGrammar::startcategories() const {
  std::vector<CategoryTuple> out;
  for (const auto &s : start_)
    out.push_back(CategoryTuple{{{Feature{Polarity::selectee, s}}}});
  return out;
}

std::vector<std::string> MinimalistGrammar::diagnose(const State &s) const {
  if (s.categories.size() == 1 && mg_move(s.categories[0]).smc_violation)
    return {"SMC violation"};
  return {};
}

std::vector<TermFunctionPtr> MinimalistGrammar::tuple_operations() const {
  std::vector<TermFunctionPtr> out;
  for (const auto &r : lexical_records())
    out.push_back(r.rule->function);
  const int k = chain_bound_;
  for (auto c : {MergeCase::R1, MergeCase::L1, MergeCase::R2, MergeCase::L2})
    for (int m = 1; m <= k; ++m)
      for (int n = 1; n <= k; ++n)
        out.push_back(merge_operation(c, m, n));
  for (int m = 2; m <= k; ++m) {
    for (int i = 1; i < m; ++i)
      out.push_back(move1_operation(m, i));
    out.push_back(move2_operation(m));
  }
  return out;
}

std::vector<MinimalistGrammar::Record> MinimalistGrammar::lexical_records() const {
  std::vector<Record> out;
  for (const auto &[t, records] : lexical_)
    out.insert(out.end(), records.begin(), records.end());
  out.insert(out.end(), empty_.begin(), empty_.end());
  return out;
}

} // namespace agp

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

#include "agp/oracle.hpp"

#include <algorithm>
#include <stdexcept>

namespace agp {

namespace {

bool has_nonterminal(const CategorySequence &form) {
  return std::any_of(form.begin(), form.end(), [](const Category &c) { return !c.is_terminal(); });
}

Word yield(const CategorySequence &form) {
  Word w;
  for (const auto &c : form)
    w.push_back(c.payload);
  return w;
}

CategorySequence replace_at(const CategorySequence &form, std::size_t i, const CategorySequence &image) {
  CategorySequence out(form.begin(), form.begin() + static_cast<std::ptrdiff_t>(i));
  out.insert(out.end(), image.begin(), image.end());
  out.insert(out.end(), form.begin() + static_cast<std::ptrdiff_t>(i) + 1, form.end());
  return out;
}

void finish(OracleResult &result, double frontier_mass, const OracleOptions &options) {
  result.residual = frontier_mass;
  result.converged = frontier_mass <= options.tolerance;
}

} // namespace

OracleResult oracle_generate(const GrammarDefinition &def, const OracleOptions &options) {
  for (const auto &f : def.functions)
    for (const auto &c : f.cases)
      if (!std::holds_alternative<CategorySequence>(c.image))
        throw std::invalid_argument("sentential-form oracle needs sequence images; function " + f.name +
                                    " has a call expression");

  OracleResult result;
  std::map<CategorySequence, double> frontier;
  for (const auto &s : def.start)
    frontier[CategorySequence{s}] += 1.0;

  while (!frontier.empty() && result.steps < options.max_steps) {
    ++result.steps;
    std::map<CategorySequence, double> next;
    for (const auto &[form, mass] : frontier) {
      if (options.leftmost) {
        const auto it = std::find_if(form.begin(), form.end(), [](const Category &c) { return !c.is_terminal(); });
        const auto i = static_cast<std::size_t>(it - form.begin());
        for (const auto &g : def.functions) {
          const RewriteCase *rc = g.at(*it);
          if (!rc || rc->probability == 0.0)
            continue;
          auto beta = replace_at(form, i, std::get<CategorySequence>(rc->image));
          if (beta.size() <= options.max_length)
            next[std::move(beta)] += mass * rc->probability;
        }
        continue;
      }
      // every occurrence; splits collapses occurrences that give the same form
      for (const auto &g : def.functions) {
        std::map<CategorySequence, Category> rewritten;
        for (std::size_t i = 0; i < form.size(); ++i) {
          const RewriteCase *rc = g.at(form[i]);
          if (!rc || form[i].is_terminal() || rc->probability == 0.0)
            continue;
          auto beta = replace_at(form, i, std::get<CategorySequence>(rc->image));
          if (beta.size() <= options.max_length)
            rewritten.emplace(std::move(beta), form[i]);
        }
        for (const auto &[beta, a] : rewritten) {
          const double p = g.at(a)->probability;
          next[beta] += mass * static_cast<double>(splits(g, a, form, beta)) * p;
        }
      }
    }
    frontier.clear();
    for (auto &[form, mass] : next) {
      if (has_nonterminal(form))
        frontier.emplace(form, mass);
      else
        result.probabilities[yield(form)] += mass;
    }
  }
  double rest = 0.0;
  for (const auto &[form, mass] : frontier)
    rest += mass;
  finish(result, rest, options);
  return result;
}

// ---------------------------------------------------------------------------
// Tree forms. A form is the preorder list of its nodes: a rule index for an
// expanded node (its nonterminal children follow), or -1 - c for an open
// node of nonterminal c. Terminal arguments of a rule are implied by the rule.

namespace {

struct TreeTables {
  const std::vector<AbstractGrammar::CompiledRule> *rules = nullptr;
  std::map<Category, int> category_ids;
  std::vector<std::vector<int>> rules_by_category; // by category id
  std::vector<std::vector<int>> children;          // nonterminal child category ids per rule
  std::vector<int> fixed_tokens;                   // terminal leaves a rule contributes directly
};

int category_id(TreeTables &t, const Category &c) {
  auto [it, inserted] = t.category_ids.emplace(c, static_cast<int>(t.category_ids.size()));
  if (inserted)
    t.rules_by_category.emplace_back();
  return it->second;
}

TreeTables build_tables(const AbstractGrammar &g) {
  TreeTables t;
  t.rules = &g.rules();
  for (std::size_t r = 0; r < g.rules().size(); ++r) {
    const auto &rule = *g.rules()[r].rule;
    const int lhs = category_id(t, rule.lhs);
    if (g.rules()[r].score.is_zero()) {
      t.children.emplace_back();
      t.fixed_tokens.push_back(0);
      continue;
    }
    t.rules_by_category[static_cast<std::size_t>(lhs)].push_back(static_cast<int>(r));
    std::vector<int> kids;
    int fixed = g.rules()[r].leaf ? 1 : 0;
    for (const auto &c : rule.rhs) {
      if (c.is_terminal())
        ++fixed;
      else
        kids.push_back(category_id(t, c));
    }
    t.children.push_back(std::move(kids));
    t.fixed_tokens.push_back(fixed);
  }
  return t;
}

// Lower bound on the yield length of a form of a non-deleting grammar.
std::size_t length_bound(const TreeTables &t, const std::vector<int> &form) {
  std::size_t n = 0;
  for (int tok : form)
    n += tok < 0 ? 1 : static_cast<std::size_t>(t.fixed_tokens[static_cast<std::size_t>(tok)]);
  return n;
}

std::optional<WordTuple> evaluate_tree(const TreeTables &t, const std::vector<int> &form, std::size_t &pos) {
  const int r = form[pos++];
  const auto &compiled = (*t.rules)[static_cast<std::size_t>(r)];
  std::vector<WordTuple> args;
  for (const auto &c : compiled.rule->rhs) {
    if (c.is_terminal()) {
      args.push_back(WordTuple{Word{c.payload}});
      continue;
    }
    auto sub = evaluate_tree(t, form, pos);
    if (!sub)
      return std::nullopt;
    args.push_back(std::move(*sub));
  }
  return compiled.rule->function->evaluate(args);
}

} // namespace

OracleResult oracle_generate(const AbstractGrammar &grammar, const OracleOptions &options) {
  TreeTables t = build_tables(grammar);
  const bool prune = grammar.non_deleting();

  OracleResult result;
  std::map<std::vector<int>, double> frontier;
  for (const auto &s : grammar.startcategories())
    frontier[{-1 - category_id(t, s)}] += 1.0;

  while (!frontier.empty() && result.steps < options.max_steps) {
    ++result.steps;
    std::map<std::vector<int>, double> next;
    for (const auto &[form, mass] : frontier) {
      const auto it = std::find_if(form.begin(), form.end(), [](int tok) { return tok < 0; });
      const auto cat = static_cast<std::size_t>(-1 - *it);
      for (int r : t.rules_by_category[cat]) {
        std::vector<int> expanded(form.begin(), it);
        expanded.push_back(r);
        for (int kid : t.children[static_cast<std::size_t>(r)])
          expanded.push_back(-1 - kid);
        expanded.insert(expanded.end(), it + 1, form.end());
        if (prune && length_bound(t, expanded) > options.max_length)
          continue;
        next[std::move(expanded)] += mass * (*t.rules)[static_cast<std::size_t>(r)].score.probability();
      }
    }
    frontier.clear();
    for (auto &[form, mass] : next) {
      if (std::any_of(form.begin(), form.end(), [](int tok) { return tok < 0; })) {
        frontier.emplace(form, mass);
        continue;
      }
      std::size_t pos = 0;
      auto value = evaluate_tree(t, form, pos);
      if (!value || value->size() != 1)
        continue;
      if (value->front().size() <= options.max_length)
        result.probabilities[value->front()] += mass;
    }
  }
  double rest = 0.0;
  for (const auto &[form, mass] : frontier)
    rest += mass;
  finish(result, rest, options);
  return result;
}

} // namespace agp

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
 * Property checks every grammar frontend must pass, run over an explicit
 * enumeration of states and categories supplied by the caller:
 *
 *   - tran is defined exactly where tran_possible says so, and is a function
 *   - every declared rewrite A -> f[B1..Bn] is found again in
 *     comp(tran(...tran(s0, B1)..., Bn)), every leaf in comp_terminal
 *   - completion scores lie in [0,1]
 *   - for probabilistic frontends, the rules of each left-hand side carry
 *     mass 1
 *
 * The expected transition relation is passed in as a predicate so it can be
 * computed independently of the frontend under test.
 */

#ifndef AGP_CONFORMANCE_HPP
#define AGP_CONFORMANCE_HPP

#include <cmath>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "agp/acfg.hpp"
#include "agp/grammar_interface.hpp"
#include "agp/minimalist.hpp"

namespace agp {

template <GrammarContract G>
struct ConformanceInput {
  using State = typename G::State;
  using Category = typename G::Category;
  using Terminal = typename G::Terminal;

  struct Rewrite {
    Category lhs;
    std::string rule;
    std::vector<Category> rhs;
  };
  struct Leaf {
    Category lhs;
    std::string rule;
    Terminal terminal;
  };

  std::vector<State> states;
  std::vector<Category> categories;
  std::function<bool(const State &, const Category &)> transition_defined;
  std::vector<Rewrite> rewrites;
  std::vector<Leaf> leaves;
  bool probabilistic = true;
  double mass_tolerance = 1e-9;
};

struct ConformanceReport {
  std::size_t checks = 0;
  std::vector<std::string> failures;
  bool ok() const noexcept { return failures.empty(); }
};

template <GrammarContract G>
ConformanceReport check_conformance(const G &g, const ConformanceInput<G> &input) {
  using Category = typename G::Category;
  ConformanceReport report;
  auto fail = [&](const std::string &what) {
    if (report.failures.size() < 50)
      report.failures.push_back(what);
  };

  // tran coherence
  for (const auto &s : input.states)
    for (const auto &c : input.categories) {
      ++report.checks;
      const bool possible = g.tran_possible(s, c);
      const bool expected = input.transition_defined(s, c);
      if (possible != expected) {
        fail("tran_possible(" + to_string(s) + ", " + to_string(c) + ") = " + (possible ? "true" : "false"));
        continue;
      }
      if (possible) {
        try {
          if (!(g.tran(s, c) == g.tran(s, c)))
            fail("tran(" + to_string(s) + ", " + to_string(c) + ") is not deterministic");
        } catch (const std::exception &e) {
          fail("tran(" + to_string(s) + ", " + to_string(c) + ") threw: " + e.what());
        }
      } else {
        bool threw = false;
        try {
          (void)g.tran(s, c);
        } catch (const std::exception &) {
          threw = true;
        }
        if (!threw)
          fail("tran(" + to_string(s) + ", " + to_string(c) + ") should fault");
      }
    }

  auto check_scores = [&](const auto &records, const std::string &where) {
    for (const auto &r : records) {
      ++report.checks;
      const double p = r.score.probability();
      if (!(p >= 0.0 && p <= 1.0 + 1e-12))
        fail("score " + std::to_string(p) + " out of range in " + where);
    }
  };

  std::vector<std::pair<Category, double>> masses;
  for (const auto &rw : input.rewrites) {
    ++report.checks;
    bool found = false;
    for (const auto &s0 : g.startstates()) {
      auto s = tran_sequence(g, s0, std::span<const Category>(rw.rhs));
      if (!s)
        continue;
      const auto &records = g.comp(*s);
      check_scores(records, "comp(" + to_string(*s) + ")");
      for (const auto &r : records)
        if (r.lhs == rw.lhs && r.rule->name == rw.rule) {
          found = true;
          masses.emplace_back(rw.lhs, r.score.probability());
          break;
        }
      if (found)
        break;
    }
    if (!found) {
      std::string rhs;
      for (const auto &c : rw.rhs)
        rhs += " [" + to_string(c) + "]";
      fail("rewrite " + rw.rule + ": " + to_string(rw.lhs) + " ->" + rhs + " not found through comp(tran(...))");
    }
  }
  for (const auto &leaf : input.leaves) {
    ++report.checks;
    const auto &records = g.comp_terminal(leaf.terminal);
    check_scores(records, "comp_terminal(" + leaf.terminal + ")");
    bool found = false;
    for (const auto &r : records)
      if (r.lhs == leaf.lhs && r.rule->name == leaf.rule) {
        found = true;
        masses.emplace_back(leaf.lhs, r.score.probability());
        break;
      }
    if (!found)
      fail("leaf " + leaf.rule + ": " + to_string(leaf.lhs) + " -> " + leaf.terminal + " missing from comp_terminal");
  }
  for (const auto &s : input.states)
    check_scores(g.comp(s), "comp(" + to_string(s) + ")");

  if (input.probabilistic) {
    std::map<Category, double> total;
    for (const auto &[lhs, p] : masses)
      total[lhs] += p;
    for (const auto &[lhs, p] : total) {
      ++report.checks;
      if (std::abs(p - 1.0) > input.mass_tolerance) {
        std::ostringstream os;
        os.precision(12);
        os << "mass at " << to_string(lhs) << " is " << p;
        fail(os.str());
      }
    }
  }
  return report;
}

// Exhaustive inputs for the two frontends. States are all category
// sequences up to max_state_length (plus every rule prefix) for the ACFG;
// for the MG, categories are the closure of the lexicon under merge and
// move, capped at max_categories.
ConformanceInput<AbstractGrammar> conformance_input(const AbstractGrammar &g, std::size_t max_state_length = 2);
ConformanceInput<MinimalistGrammar> conformance_input(const MinimalistGrammar &g, std::size_t max_categories = 200);

} // namespace agp

#endif // AGP_CONFORMANCE_HPP

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
 * Probabilistic abstract grammars with partial rewrite functions.
 *
 * A rewrite function is a partial map from nonterminals to images; several
 * nonterminals may share one function and therefore one probability
 * parameter. Images are either category sequences (the context-free case)
 * or call expressions over the tuple algebra. Each nonterminal carries a
 * distribution over the functions defined at it.
 *
 * GrammarDefinition is the raw, declaration-ordered form that loaders build
 * and validate_grammar checks. AbstractGrammar compiles a valid definition
 * into the reduction automaton the chart parser consumes.
 */

#ifndef AGP_ACFG_HPP
#define AGP_ACFG_HPP

#include <compare>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <variant>
#include <vector>

#include "agp/grammar_interface.hpp"
#include "agp/score.hpp"
#include "agp/term_function.hpp"

namespace agp {

struct Category {
  enum class Kind { terminal, nonterminal };
  Kind kind = Kind::nonterminal;
  std::string payload;

  static Category terminal(std::string payload) { return {Kind::terminal, std::move(payload)}; }
  static Category nonterminal(std::string payload) { return {Kind::nonterminal, std::move(payload)}; }
  bool is_terminal() const noexcept { return kind == Kind::terminal; }
  friend auto operator<=>(const Category &, const Category &) = default;
};

using CategorySequence = std::vector<Category>;

// Terminals are quoted: 'x'.
std::string to_string(const Category &c);
std::string to_string(const CategorySequence &s);

} // namespace agp

template <>
struct std::hash<agp::Category> {
  std::size_t operator()(const agp::Category &c) const noexcept {
    return std::hash<std::string>{}(c.payload) * 2 + (c.is_terminal() ? 1 : 0);
  }
};

template <>
struct std::hash<agp::CategorySequence> {
  std::size_t operator()(const agp::CategorySequence &s) const noexcept {
    std::size_t h = s.size();
    for (const auto &c : s)
      h = h * 31 + std::hash<agp::Category>{}(c);
    return h;
  }
};

namespace agp {

using Image = std::variant<CategorySequence, CallExpression>;

struct RewriteCase {
  Category lhs;
  Image image;
  double probability = 0.0;
};

struct RewriteFunction {
  std::string name;
  std::vector<RewriteCase> cases;

  // The (first) case defined at `lhs`, if any.
  const RewriteCase *at(const Category &lhs) const;
};

struct GrammarDefinition {
  std::map<std::string, int> dimensions; // nonterminals of dimension > 1
  std::vector<TermFunctionPtr> operations;
  std::vector<RewriteFunction> functions;
  std::vector<Category> start;

  // Appends a case to `function`, creating the function on first use.
  void add_case(const std::string &function, Category lhs, Image image, double probability);
  int dimension(const std::string &nonterminal) const;
  bool has_call_expressions() const;
  const RewriteFunction *function(const std::string &name) const;
  TermFunctionPtr operation(const std::string &name) const;
};

bool operator==(const GrammarDefinition &a, const GrammarDefinition &b);

// Per nonterminal: function name -> P(X_A = g).
using NonterminalDistribution = std::map<Category, std::map<std::string, double>>;
NonterminalDistribution distribution(const GrammarDefinition &def);

struct ValidationReport {
  std::vector<std::string> errors;
  std::vector<std::string> warnings;

  bool ok() const noexcept { return errors.empty(); }
  std::string summary() const;
};

class GrammarValidationError : public std::runtime_error {
public:
  explicit GrammarValidationError(ValidationReport report)
      : std::runtime_error(report.summary()), report_(std::move(report)) {}
  const ValidationReport &report() const noexcept { return report_; }

private:
  ValidationReport report_;
};

inline constexpr double kMassTolerance = 1e-9;

ValidationReport validate_grammar(const GrammarDefinition &def);

// Number of decompositions alpha = a1 A a2 with a1 g(A) a2 = beta.
std::size_t splits(const RewriteFunction &g, const Category &a, std::span<const Category> alpha,
                   std::span<const Category> beta);

// Classical context-free rules, and the conversion in both directions.
struct ClassicalRule {
  Category lhs;
  CategorySequence rhs;
  friend auto operator<=>(const ClassicalRule &, const ClassicalRule &) = default;
};

// Union of all (A, g(A)) over sequence-valued functions.
std::set<ClassicalRule> classical_rules(const GrammarDefinition &def);
// Each rule becomes its own rewrite function r1, r2, ... with the given
// probability.
GrammarDefinition from_classical_rules(const std::vector<std::pair<ClassicalRule, double>> &rules,
                                       std::vector<Category> start);

/**
 * The compiled grammar: a reduction automaton over category sequences.
 *
 * States are the category sequences consumed so far; transition appends a
 * category and, with prefix filtering on, is only defined when the result
 * is a prefix of some rule's right-hand side. Completion of a state returns
 * every rule whose right-hand side equals it.
 */
class AbstractGrammar {
public:
  using State = CategorySequence;
  using Category = agp::Category;
  using Terminal = Token;
  using Record = CompletionRecord<Category>;

  struct CompiledRule {
    RulePtr<Category> rule;
    LogProb score;
    std::optional<Token> leaf; // set for rules rewriting to a single terminal
  };

  struct Options {
    bool prefix_filter = true;
  };

  // Throws GrammarValidationError when validate_grammar reports errors.
  static AbstractGrammar compile(GrammarDefinition def, Options options);
  static AbstractGrammar compile(GrammarDefinition def) { return compile(std::move(def), Options{}); }

  bool tran_possible(const State &s, const Category &c) const;
  State tran(const State &s, const Category &c) const;
  const std::vector<Record> &comp(const State &s) const;
  const std::vector<Record> &comp_terminal(const Token &t) const;
  std::vector<State> startstates() const { return {State{}}; }
  std::vector<Category> startcategories() const { return def_.start; }
  RangeFilter range_filter() const noexcept {
    return context_free_ ? RangeFilter::adjacent : RangeFilter::any;
  }
  int dimension(const Category &c) const;

  const GrammarDefinition &definition() const noexcept { return def_; }
  const std::vector<CompiledRule> &rules() const noexcept { return rules_; }
  const ValidationReport &report() const noexcept { return report_; }
  bool context_free() const noexcept { return context_free_; }
  bool non_deleting() const noexcept { return non_deleting_; }
  bool prefix_filter() const noexcept { return options_.prefix_filter; }
  // Terminal alphabet, sorted.
  std::vector<Token> terminals() const;
  // Every category occurring in some rule, sorted.
  std::vector<Category> categories() const;

private:
  GrammarDefinition def_;
  Options options_;
  ValidationReport report_;
  std::vector<CompiledRule> rules_;
  std::unordered_map<State, std::vector<Record>> completions_;
  std::unordered_map<Token, std::vector<Record>> lexical_;
  std::unordered_set<State> prefixes_;
  bool context_free_ = true;
  bool non_deleting_ = true;
};

} // namespace agp

#endif // AGP_ACFG_HPP

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

#include "agp/acfg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace agp {

std::string to_string(const Category &c) {
  return c.is_terminal() ? "'" + c.payload + "'" : c.payload;
}

std::string to_string(const CategorySequence &s) {
  std::string out;
  for (const auto &c : s) {
    if (!out.empty())
      out += ' ';
    out += to_string(c);
  }
  return out;
}

const RewriteCase *RewriteFunction::at(const Category &lhs) const {
  for (const auto &c : cases)
    if (c.lhs == lhs)
      return &c;
  return nullptr;
}

void GrammarDefinition::add_case(const std::string &function, Category lhs, Image image,
                                 double probability) {
  auto it = std::find_if(functions.begin(), functions.end(),
                         [&](const RewriteFunction &f) { return f.name == function; });
  if (it == functions.end()) {
    functions.push_back(RewriteFunction{function, {}});
    it = std::prev(functions.end());
  }
  it->cases.push_back(RewriteCase{std::move(lhs), std::move(image), probability});
}

int GrammarDefinition::dimension(const std::string &nonterminal) const {
  auto it = dimensions.find(nonterminal);
  return it == dimensions.end() ? 1 : it->second;
}

bool GrammarDefinition::has_call_expressions() const {
  for (const auto &f : functions)
    for (const auto &c : f.cases)
      if (std::holds_alternative<CallExpression>(c.image))
        return true;
  return false;
}

const RewriteFunction *GrammarDefinition::function(const std::string &name) const {
  for (const auto &f : functions)
    if (f.name == name)
      return &f;
  return nullptr;
}

TermFunctionPtr GrammarDefinition::operation(const std::string &name) const {
  for (const auto &op : operations)
    if (op->name() == name)
      return op;
  return nullptr;
}

bool operator==(const GrammarDefinition &a, const GrammarDefinition &b) {
  if (a.dimensions != b.dimensions || a.start != b.start)
    return false;
  if (a.operations.size() != b.operations.size() || a.functions.size() != b.functions.size())
    return false;
  for (std::size_t i = 0; i < a.operations.size(); ++i)
    if (!(*a.operations[i] == *b.operations[i]))
      return false;
  for (std::size_t i = 0; i < a.functions.size(); ++i) {
    const auto &f = a.functions[i];
    const auto &g = b.functions[i];
    if (f.name != g.name || f.cases.size() != g.cases.size())
      return false;
    for (std::size_t j = 0; j < f.cases.size(); ++j)
      if (f.cases[j].lhs != g.cases[j].lhs || !(f.cases[j].image == g.cases[j].image) ||
          f.cases[j].probability != g.cases[j].probability)
        return false;
  }
  return true;
}

NonterminalDistribution distribution(const GrammarDefinition &def) {
  NonterminalDistribution d;
  for (const auto &f : def.functions)
    for (const auto &c : f.cases)
      d[c.lhs][f.name] += c.probability;
  return d;
}

std::string ValidationReport::summary() const {
  std::ostringstream os;
  for (const auto &e : errors)
    os << "error: " << e << '\n';
  for (const auto &w : warnings)
    os << "warning: " << w << '\n';
  return os.str();
}

namespace {

FlatImage flatten_image(const Image &image, const GrammarDefinition &def) {
  if (const auto *seq = std::get_if<CategorySequence>(&image)) {
    FlatImage flat;
    if (seq->size() == 1 && seq->front().is_terminal()) {
      flat.leaf = seq->front().payload;
      return flat;
    }
    std::vector<FlowSymbol> component;
    for (const auto &c : *seq) {
      const int dim = c.is_terminal() ? 1 : def.dimension(c.payload);
      if (dim != 1)
        throw std::invalid_argument("category " + c.payload + " of dimension " + std::to_string(dim) +
                                    " in a sequence image");
      component.push_back(FlowSymbol::arg(static_cast<int>(flat.arguments.size()), 0));
      flat.arguments.push_back({c.payload, c.is_terminal(), 1});
    }
    flat.flow.push_back(std::move(component));
    return flat;
  }
  return flatten(std::get<CallExpression>(image));
}

int image_dimension(const Image &image) {
  if (std::holds_alternative<CategorySequence>(image))
    return 1;
  return std::get<CallExpression>(image).dimension();
}

bool image_empty(const Image &image) {
  const auto *seq = std::get_if<CategorySequence>(&image);
  return seq && seq->empty();
}

void collect_variables(const CallExpression &e, std::vector<CallExpression::Variable> &out) {
  if (const auto *v = e.as_variable()) {
    out.push_back(*v);
    return;
  }
  for (const auto &a : e.as_application()->arguments)
    collect_variables(a, out);
}

std::string fmt_prob(double p) {
  std::ostringstream os;
  os.precision(12);
  os << p;
  return os.str();
}

CategorySequence rhs_of(const FlatImage &flat) {
  CategorySequence rhs;
  for (const auto &a : flat.arguments)
    rhs.push_back(a.terminal ? Category::terminal(a.name) : Category::nonterminal(a.name));
  return rhs;
}

} // namespace

ValidationReport validate_grammar(const GrammarDefinition &def) {
  ValidationReport report;
  auto error = [&](std::string s) { report.errors.push_back(std::move(s)); };
  auto warn = [&](std::string s) { report.warnings.push_back(std::move(s)); };

  if (def.functions.empty())
    error("grammar has no rules");
  if (def.start.empty())
    error("no start category declared");
  for (const auto &s : def.start) {
    if (s.is_terminal())
      error("start category " + to_string(s) + " is a terminal");
    else if (def.dimension(s.payload) != 1)
      error("start category " + s.payload + " must have dimension 1");
  }
  for (const auto &[name, dim] : def.dimensions)
    if (dim < 1)
      error("nonterminal " + name + " declared with dimension " + std::to_string(dim));

  std::set<std::string> op_names;
  for (const auto &op : def.operations) {
    if (!op_names.insert(op->name()).second)
      error("operation " + op->name() + " declared twice");
    if (op->flow() && !is_non_copying(*op->flow(), op->signature().argument_dims))
      error("operation " + op->name() + " copies an input component");
  }

  // rules as (lhs, flattened image), for the reachability pass below
  std::vector<std::pair<Category, FlatImage>> flat_rules;

  for (const auto &f : def.functions) {
    std::set<Category> seen;
    for (const auto &c : f.cases) {
      const std::string where = f.name + " at " + to_string(c.lhs);
      if (!seen.insert(c.lhs).second) {
        error("function " + f.name + " is not a function: declared twice at " + to_string(c.lhs));
        continue;
      }
      if (c.lhs.is_terminal()) {
        error("function " + f.name + " rewrites terminal " + to_string(c.lhs));
        continue;
      }
      if (!(c.probability >= 0.0 && c.probability <= 1.0))
        error("probability " + fmt_prob(c.probability) + " of " + where + " outside [0,1]");
      if (image_empty(c.image)) {
        error("erasing rule " + where + ": empty images are not supported");
        continue;
      }
      if (const auto *e = std::get_if<CallExpression>(&c.image)) {
        std::vector<CallExpression::Variable> vars;
        collect_variables(*e, vars);
        bool dims_ok = true;
        for (const auto &v : vars)
          if (v.dim != def.dimension(v.category)) {
            error("variable " + v.category + " in " + where + " has dimension " + std::to_string(v.dim) +
                  ", declared " + std::to_string(def.dimension(v.category)));
            dims_ok = false;
          }
        if (!dims_ok)
          continue;
      }
      const int want = def.dimension(c.lhs.payload);
      if (image_dimension(c.image) != want) {
        error("image of " + where + " has dimension " + std::to_string(image_dimension(c.image)) +
              ", expected " + std::to_string(want));
        continue;
      }
      FlatImage flat;
      try {
        flat = flatten_image(c.image, def);
      } catch (const std::exception &ex) {
        error(where + ": " + ex.what());
        continue;
      }
      const auto dims = flat.argument_dims();
      if (!flat.leaf && !is_non_copying(flat.flow, dims)) {
        error("image of " + where + " copies an input component");
        continue;
      }
      flat_rules.emplace_back(c.lhs, std::move(flat));
    }
  }

  for (const auto &[lhs, dist] : distribution(def)) {
    double mass = 0.0;
    for (const auto &[name, p] : dist)
      mass += p;
    if (std::abs(mass - 1.0) > kMassTolerance)
      error("mass " + fmt_prob(mass) + " != 1 at " + to_string(lhs));
  }

  // Productive nonterminals: least fixpoint over rules whose arguments are all
  // terminals or productive.
  std::set<std::string> productive;
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto &[lhs, flat] : flat_rules) {
      if (productive.count(lhs.payload))
        continue;
      const bool ok = std::all_of(flat.arguments.begin(), flat.arguments.end(), [&](const auto &a) {
        return a.terminal || productive.count(a.name);
      });
      if (ok) {
        productive.insert(lhs.payload);
        changed = true;
      }
    }
  }
  std::set<std::string> reachable;
  std::vector<std::string> work;
  for (const auto &s : def.start)
    if (reachable.insert(s.payload).second)
      work.push_back(s.payload);
  while (!work.empty()) {
    const std::string a = work.back();
    work.pop_back();
    for (const auto &[lhs, flat] : flat_rules)
      if (lhs.payload == a)
        for (const auto &arg : flat.arguments)
          if (!arg.terminal && reachable.insert(arg.name).second)
            work.push_back(arg.name);
  }
  for (const auto &s : def.start)
    if (!s.is_terminal() && !productive.count(s.payload))
      warn("start category " + s.payload + " derives no terminal string");
  std::set<std::string> lhs_names;
  for (const auto &[lhs, flat] : flat_rules)
    lhs_names.insert(lhs.payload);
  for (const auto &name : lhs_names)
    if (!reachable.count(name))
      warn("nonterminal " + name + " is unreachable from the start categories");
  return report;
}

std::size_t splits(const RewriteFunction &g, const Category &a, std::span<const Category> alpha,
                   std::span<const Category> beta) {
  const RewriteCase *c = g.at(a);
  if (!c)
    return 0;
  const auto *image = std::get_if<CategorySequence>(&c->image);
  if (!image)
    return 0;
  if (beta.size() + 1 != alpha.size() + image->size())
    return 0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    if (alpha[i] != a)
      continue;
    // beta must be alpha[0,i) image alpha(i,end)
    bool match = std::equal(alpha.begin(), alpha.begin() + static_cast<std::ptrdiff_t>(i), beta.begin()) &&
                 std::equal(image->begin(), image->end(), beta.begin() + static_cast<std::ptrdiff_t>(i)) &&
                 std::equal(alpha.begin() + static_cast<std::ptrdiff_t>(i) + 1, alpha.end(),
                            beta.begin() + static_cast<std::ptrdiff_t>(i + image->size()));
    if (match)
      ++count;
  }
  return count;
}

std::set<ClassicalRule> classical_rules(const GrammarDefinition &def) {
  std::set<ClassicalRule> rules;
  for (const auto &f : def.functions)
    for (const auto &c : f.cases)
      if (const auto *seq = std::get_if<CategorySequence>(&c.image))
        rules.insert(ClassicalRule{c.lhs, *seq});
  return rules;
}

GrammarDefinition from_classical_rules(const std::vector<std::pair<ClassicalRule, double>> &rules,
                                       std::vector<Category> start) {
  GrammarDefinition def;
  int n = 0;
  for (const auto &[rule, p] : rules)
    def.add_case("r" + std::to_string(++n), rule.lhs, rule.rhs, p);
  def.start = std::move(start);
  return def;
}

// ---------------------------------------------------------------------------

AbstractGrammar AbstractGrammar::compile(GrammarDefinition def, Options options) {
  ValidationReport report = validate_grammar(def);
  if (!report.ok())
    throw GrammarValidationError(std::move(report));

  AbstractGrammar g;
  g.options_ = options;
  g.report_ = std::move(report);
  std::set<Token> identity_terminals;

  for (const auto &f : def.functions) {
    for (const auto &c : f.cases) {
      FlatImage flat = flatten_image(c.image, def);
      const LogProb score = LogProb::from_probability(c.probability);
      if (flat.leaf) {
        auto rule = std::make_shared<const Rule<Category>>(
            Rule<Category>{c.lhs, f.name, TermFunction::constant(*flat.leaf), {}});
        g.rules_.push_back({rule, score, flat.leaf});
        g.lexical_[*flat.leaf].push_back(Record{c.lhs, rule, score});
        continue;
      }
      const auto dims = flat.argument_dims();
      if (!is_non_deleting(flat.flow, dims))
        g.non_deleting_ = false;
      bool in_order_concat = flat.flow.size() == 1;
      for (std::size_t i = 0; in_order_concat && i < flat.flow[0].size(); ++i)
        in_order_concat = flat.flow[0][i] == FlowSymbol::arg(static_cast<int>(i), 0);
      if (!in_order_concat || flat.flow[0].size() != flat.arguments.size() ||
          def.dimension(c.lhs.payload) != 1)
        g.context_free_ = false;

      CategorySequence rhs = rhs_of(flat);
      for (const auto &a : rhs)
        if (a.is_terminal())
          identity_terminals.insert(a.payload);
      auto function = TermFunction::from_flow(f.name, dims, flat.flow);
      auto rule = std::make_shared<const Rule<Category>>(Rule<Category>{c.lhs, f.name, function, rhs});
      g.rules_.push_back({rule, score, std::nullopt});
      g.completions_[rhs].push_back(Record{c.lhs, rule, score});
      State prefix;
      for (const auto &a : rhs) {
        prefix.push_back(a);
        g.prefixes_.insert(prefix);
      }
    }
  }
  for (const auto &t : identity_terminals) {
    const auto cat = Category::terminal(t);
    auto rule = std::make_shared<const Rule<Category>>(Rule<Category>{cat, "", TermFunction::constant(t), {}});
    g.lexical_[t].push_back(Record{cat, rule, LogProb::one()});
  }
  g.def_ = std::move(def);
  return g;
}

bool AbstractGrammar::tran_possible(const State &s, const Category &c) const {
  if (!options_.prefix_filter)
    return true;
  State next = s;
  next.push_back(c);
  return prefixes_.count(next) > 0;
}

AbstractGrammar::State AbstractGrammar::tran(const State &s, const Category &c) const {
  if (!tran_possible(s, c))
    throw std::logic_error("transition from <" + to_string(s) + "> over " + to_string(c) +
                           " is undefined");
  State next = s;
  next.push_back(c);
  return next;
}

const std::vector<AbstractGrammar::Record> &AbstractGrammar::comp(const State &s) const {
  static const std::vector<Record> none;
  auto it = completions_.find(s);
  return it == completions_.end() ? none : it->second;
}

const std::vector<AbstractGrammar::Record> &AbstractGrammar::comp_terminal(const Token &t) const {
  static const std::vector<Record> none;
  auto it = lexical_.find(t);
  return it == lexical_.end() ? none : it->second;
}

int AbstractGrammar::dimension(const Category &c) const {
  return c.is_terminal() ? 1 : def_.dimension(c.payload);
}

std::vector<Token> AbstractGrammar::terminals() const {
  std::vector<Token> out;
  for (const auto &[t, records] : lexical_)
    out.push_back(t);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Category> AbstractGrammar::categories() const {
  std::set<Category> all;
  for (const auto &r : rules_) {
    all.insert(r.rule->lhs);
    for (const auto &c : r.rule->rhs)
      all.insert(c);
    if (r.leaf)
      all.insert(Category::terminal(*r.leaf));
  }
  return {all.begin(), all.end()};
}

} // namespace agp

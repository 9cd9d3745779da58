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

#include "agp/term_function.hpp"

#include <map>
#include <set>

namespace agp {

namespace {

template <class Tuple>
void check_dims(const TermFunction &f, std::span<const Tuple> arguments) {
  const auto &dims = f.signature().argument_dims;
  if (arguments.size() != dims.size())
    throw DimensionError("'" + f.name() + "' expects " + std::to_string(dims.size()) +
                         " arguments, got " + std::to_string(arguments.size()));
  for (std::size_t i = 0; i < dims.size(); ++i)
    if (static_cast<int>(arguments[i].size()) != dims[i])
      throw DimensionError("'" + f.name() + "' argument " + std::to_string(i + 1) +
                           " has dimension " + std::to_string(arguments[i].size()) +
                           ", expected " + std::to_string(dims[i]));
}

std::vector<std::vector<bool>> usage_grid(std::span<const int> dims) {
  std::vector<std::vector<bool>> grid;
  for (int d : dims)
    grid.emplace_back(static_cast<std::size_t>(d), false);
  return grid;
}

std::string quote(const Token &w) { return "'" + w + "'"; }

} // namespace

bool is_non_copying(const ComponentFlow &flow, std::span<const int> argument_dims) {
  auto used = usage_grid(argument_dims);
  for (const auto &component : flow)
    for (const auto &s : component) {
      if (s.is_constant())
        continue;
      auto slot = used.at(static_cast<std::size_t>(s.argument)).at(static_cast<std::size_t>(s.component));
      if (slot)
        return false;
      slot = true;
    }
  return true;
}

bool is_non_deleting(const ComponentFlow &flow, std::span<const int> argument_dims) {
  auto used = usage_grid(argument_dims);
  for (const auto &component : flow)
    for (const auto &s : component)
      if (!s.is_constant())
        used.at(static_cast<std::size_t>(s.argument)).at(static_cast<std::size_t>(s.component)) = true;
  for (const auto &row : used)
    for (bool b : row)
      if (!b)
        return false;
  return true;
}

std::string to_string(const ComponentFlow &flow) {
  std::string s;
  for (std::size_t c = 0; c < flow.size(); ++c) {
    if (c)
      s += ", ";
    for (std::size_t k = 0; k < flow[c].size(); ++k) {
      const auto &sym = flow[c][k];
      if (k)
        s += ' ';
      if (sym.is_constant())
        s += quote(sym.constant);
      else
        s += "x" + std::to_string(sym.argument + 1) + "." + std::to_string(sym.component + 1);
    }
  }
  return s;
}

TermFunction::TermFunction(std::string name, Signature signature, Evaluator evaluator,
                           RangeEvaluator range_evaluator, std::optional<ComponentFlow> flow)
    : name_(std::move(name)), signature_(std::move(signature)), evaluator_(std::move(evaluator)),
      range_evaluator_(std::move(range_evaluator)), flow_(std::move(flow)) {
  if (!evaluator_)
    throw std::invalid_argument("term function '" + name_ + "' needs an evaluator");
}

TermFunctionPtr TermFunction::from_flow(std::string name, std::vector<int> argument_dims,
                                        ComponentFlow flow) {
  if (flow.empty())
    throw std::invalid_argument("flow of '" + name + "' has no components");
  bool constant_free = true;
  for (const auto &component : flow) {
    if (component.empty())
      throw std::invalid_argument("flow of '" + name + "' has an empty component");
    for (const auto &s : component) {
      if (s.is_constant()) {
        constant_free = false;
        continue;
      }
      if (s.argument >= static_cast<int>(argument_dims.size()) || s.component < 0 ||
          s.component >= argument_dims[static_cast<std::size_t>(s.argument)])
        throw std::invalid_argument("flow of '" + name + "' refers to x" +
                                    std::to_string(s.argument + 1) + "." +
                                    std::to_string(s.component + 1) + " outside its signature");
    }
  }

  Evaluator eval = [flow](std::span<const WordTuple> args) -> std::optional<WordTuple> {
    WordTuple out;
    out.reserve(flow.size());
    for (const auto &component : flow) {
      Word w;
      for (const auto &s : component) {
        if (s.is_constant()) {
          w.push_back(s.constant);
        } else {
          const auto &part = args[static_cast<std::size_t>(s.argument)][static_cast<std::size_t>(s.component)];
          w.insert(w.end(), part.begin(), part.end());
        }
      }
      out.push_back(std::move(w));
    }
    return out;
  };

  // Constants have no position, so only constant-free flows act on ranges.
  RangeEvaluator ranges;
  if (constant_free) {
    ranges = [flow](std::span<const RangeTuple> args) -> std::optional<RangeTuple> {
      RangeTuple out;
      out.reserve(flow.size());
      for (const auto &component : flow) {
        std::optional<Range> acc;
        for (const auto &s : component) {
          const Range &r = args[static_cast<std::size_t>(s.argument)][static_cast<std::size_t>(s.component)];
          acc = acc ? range_concat(*acc, r) : std::optional<Range>(r);
          if (!acc)
            return std::nullopt;
        }
        out.push_back(*acc);
      }
      return out;
    };
  }

  Signature sig{std::move(argument_dims), static_cast<int>(flow.size())};
  return std::make_shared<const TermFunction>(std::move(name), std::move(sig), std::move(eval),
                                              std::move(ranges), std::move(flow));
}

TermFunctionPtr TermFunction::constant(Token word) {
  return from_flow(quote(word), {}, {{FlowSymbol::word(word)}});
}

TermFunctionPtr TermFunction::concat(int arity) {
  if (arity < 1)
    throw std::invalid_argument("concat needs at least one argument");
  std::vector<FlowSymbol> component;
  for (int i = 0; i < arity; ++i)
    component.push_back(FlowSymbol::arg(i, 0));
  return from_flow("concat", std::vector<int>(static_cast<std::size_t>(arity), 1), {component});
}

TermFunctionPtr TermFunction::list(int arity) {
  if (arity < 1)
    throw std::invalid_argument("list needs at least one argument");
  ComponentFlow flow;
  for (int i = 0; i < arity; ++i)
    flow.push_back({FlowSymbol::arg(i, 0)});
  return from_flow("list", std::vector<int>(static_cast<std::size_t>(arity), 1), std::move(flow));
}

TermFunctionPtr TermFunction::projection(int component, int dim) {
  if (component < 1 || component > dim)
    throw std::invalid_argument("projection component out of range");
  return from_flow("pi" + std::to_string(component), {dim}, {{FlowSymbol::arg(0, component - 1)}});
}

std::optional<WordTuple> TermFunction::evaluate(std::span<const WordTuple> arguments) const {
  check_dims(*this, arguments);
  auto out = evaluator_(arguments);
  if (out && static_cast<int>(out->size()) != signature_.result_dim)
    throw std::logic_error("term function '" + name_ + "' produced a tuple of wrong dimension");
  return out;
}

std::optional<RangeTuple> TermFunction::apply_ranges(std::span<const RangeTuple> arguments) const {
  check_dims(*this, arguments);
  if (!range_evaluator_)
    return std::nullopt;
  auto out = range_evaluator_(arguments);
  if (out && static_cast<int>(out->size()) != signature_.result_dim)
    throw std::logic_error("term function '" + name_ + "' produced a range tuple of wrong dimension");
  return out;
}

// ---------------------------------------------------------------------------

CallExpression CallExpression::variable(std::string category, int dim) {
  if (dim < 1)
    throw DimensionError("variable '" + category + "' needs a positive dimension");
  return CallExpression(Variable{std::move(category), dim, 0});
}

CallExpression CallExpression::projected(std::string category, int dim, int component) {
  if (component < 1 || component > dim)
    throw DimensionError("projection " + category + "." + std::to_string(component) +
                         " outside dimension " + std::to_string(dim));
  return CallExpression(Variable{std::move(category), dim, component});
}

CallExpression CallExpression::apply(TermFunctionPtr function, std::vector<CallExpression> arguments) {
  const auto &dims = function->signature().argument_dims;
  if (dims.size() != arguments.size())
    throw DimensionError("'" + function->name() + "' expects " + std::to_string(dims.size()) +
                         " arguments, got " + std::to_string(arguments.size()));
  for (std::size_t i = 0; i < dims.size(); ++i)
    if (arguments[i].dimension() != dims[i])
      throw DimensionError("'" + function->name() + "' argument " + std::to_string(i + 1) +
                           " has dimension " + std::to_string(arguments[i].dimension()) +
                           ", expected " + std::to_string(dims[i]));
  return CallExpression(Application{std::move(function), std::move(arguments)});
}

CallExpression CallExpression::constant(Token word) {
  return apply(TermFunction::constant(std::move(word)), {});
}

int CallExpression::dimension() const {
  if (const auto *v = as_variable())
    return v->projection ? 1 : v->dim;
  return std::get<Application>(node_).function->signature().result_dim;
}

bool CallExpression::has_variables() const {
  if (is_variable())
    return true;
  for (const auto &a : std::get<Application>(node_).arguments)
    if (a.has_variables())
      return true;
  return false;
}

bool operator==(const CallExpression &a, const CallExpression &b) {
  if (a.is_variable() != b.is_variable())
    return false;
  if (a.is_variable())
    return *a.as_variable() == *b.as_variable();
  const auto &x = *a.as_application();
  const auto &y = *b.as_application();
  return *x.function == *y.function && x.arguments == y.arguments;
}

WordTuple evaluate_call_expression(const CallExpression &expression) {
  if (const auto *v = expression.as_variable())
    throw std::invalid_argument("cannot evaluate variable '" + v->category + "'");
  const auto &app = *expression.as_application();
  std::vector<WordTuple> values;
  values.reserve(app.arguments.size());
  for (const auto &arg : app.arguments)
    values.push_back(evaluate_call_expression(arg));
  auto out = app.function->evaluate(values);
  if (!out)
    throw EvaluationError(app.function->name());
  return std::move(*out);
}

std::string to_string(const CallExpression &expression) {
  if (const auto *v = expression.as_variable())
    return v->projection ? v->category + "." + std::to_string(v->projection) : v->category;
  const auto &app = *expression.as_application();
  if (app.function->is_constant() && app.function->flow())
    return app.function->name();
  std::string s = app.function->name() + "[";
  for (std::size_t i = 0; i < app.arguments.size(); ++i) {
    if (i)
      s += ", ";
    s += to_string(app.arguments[i]);
  }
  return s + "]";
}

// ---------------------------------------------------------------------------

std::vector<int> FlatImage::argument_dims() const {
  std::vector<int> dims;
  dims.reserve(arguments.size());
  for (const auto &a : arguments)
    dims.push_back(a.dim);
  return dims;
}

namespace {

// Intermediate symbol: component of a provisional argument, or a word.
struct Sym {
  int argument = -1;
  int component = 0;
  Token word;
};
using SymTuple = std::vector<std::vector<Sym>>;

struct Flattener {
  std::vector<FlatImage::Argument> arguments;
  std::map<std::string, int> projected;
  std::set<std::string> whole;

  SymTuple walk(const CallExpression &e) {
    if (const auto *v = e.as_variable()) {
      if (v->projection == 0) {
        if (projected.count(v->category))
          throw std::invalid_argument("variable '" + v->category + "' used both whole and projected");
        whole.insert(v->category);
        const int id = static_cast<int>(arguments.size());
        arguments.push_back({v->category, false, v->dim});
        SymTuple t;
        for (int c = 0; c < v->dim; ++c)
          t.push_back({Sym{id, c, {}}});
        return t;
      }
      if (whole.count(v->category))
        throw std::invalid_argument("variable '" + v->category + "' used both whole and projected");
      auto [it, fresh] = projected.emplace(v->category, static_cast<int>(arguments.size()));
      if (fresh)
        arguments.push_back({v->category, false, v->dim});
      else if (arguments[static_cast<std::size_t>(it->second)].dim != v->dim)
        throw std::invalid_argument("variable '" + v->category + "' projected with inconsistent dimensions");
      return {{Sym{it->second, v->projection - 1, {}}}};
    }
    const auto &app = *e.as_application();
    if (!app.function->flow())
      throw std::invalid_argument("term function '" + app.function->name() +
                                  "' has no component flow and cannot be flattened");
    std::vector<SymTuple> children;
    for (const auto &a : app.arguments)
      children.push_back(walk(a));
    SymTuple out;
    for (const auto &component : *app.function->flow()) {
      std::vector<Sym> syms;
      for (const auto &s : component) {
        if (s.is_constant()) {
          syms.push_back(Sym{-1, 0, s.constant});
        } else {
          const auto &part = children[static_cast<std::size_t>(s.argument)][static_cast<std::size_t>(s.component)];
          syms.insert(syms.end(), part.begin(), part.end());
        }
      }
      out.push_back(std::move(syms));
    }
    return out;
  }
};

} // namespace

FlatImage flatten(const CallExpression &expression) {
  Flattener fl;
  SymTuple result = fl.walk(expression);

  FlatImage image;
  if (fl.arguments.empty() && result.size() == 1 && result[0].size() == 1) {
    image.leaf = result[0][0].word;
    return image;
  }

  std::vector<int> renumber(fl.arguments.size(), -1);
  for (const auto &component : result) {
    std::vector<FlowSymbol> out;
    for (const auto &s : component) {
      if (s.argument < 0) {
        out.push_back(FlowSymbol::arg(static_cast<int>(image.arguments.size()), 0));
        image.arguments.push_back({s.word, true, 1});
        continue;
      }
      auto &slot = renumber[static_cast<std::size_t>(s.argument)];
      if (slot < 0) {
        slot = static_cast<int>(image.arguments.size());
        image.arguments.push_back(fl.arguments[static_cast<std::size_t>(s.argument)]);
      }
      out.push_back(FlowSymbol::arg(slot, s.component));
    }
    image.flow.push_back(std::move(out));
  }
  // Arguments whose components were all dropped still consume input.
  for (std::size_t i = 0; i < fl.arguments.size(); ++i)
    if (renumber[i] < 0) {
      renumber[i] = static_cast<int>(image.arguments.size());
      image.arguments.push_back(fl.arguments[i]);
    }
  return image;
}

} // namespace agp

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
 * The tuple algebra over words and its partial range algebra.
 *
 * A TermFunction maps tuples of word tuples to a word tuple and ships a
 * matching action on range tuples. Functions whose output is a rearrangement
 * of input components (plus terminal constants) can be described by a
 * ComponentFlow, from which both actions are derived; functions with an
 * opaque definition supply the two evaluators directly.
 */

#ifndef AGP_TERM_FUNCTION_HPP
#define AGP_TERM_FUNCTION_HPP

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "agp/range.hpp"

namespace agp {

struct Signature {
  std::vector<int> argument_dims;
  int result_dim = 1;

  std::size_t arity() const noexcept { return argument_dims.size(); }
  friend bool operator==(const Signature &, const Signature &) = default;
};

// One symbol of a result component: either component `component` of
// argument `argument` (both 0-based) or a terminal constant.
struct FlowSymbol {
  int argument = -1;
  int component = 0;
  Token constant;

  static FlowSymbol arg(int argument, int component) { return {argument, component, {}}; }
  static FlowSymbol word(Token w) { return {-1, 0, std::move(w)}; }
  bool is_constant() const noexcept { return argument < 0; }
  friend bool operator==(const FlowSymbol &, const FlowSymbol &) = default;
};

// Result components, each a concatenation of symbols.
using ComponentFlow = std::vector<std::vector<FlowSymbol>>;

// Each argument component is used at most once.
bool is_non_copying(const ComponentFlow &flow, std::span<const int> argument_dims);
// Each argument component is used at least once.
bool is_non_deleting(const ComponentFlow &flow, std::span<const int> argument_dims);
// "x1.1 x2.1, 'b' x1.2" (1-based indices).
std::string to_string(const ComponentFlow &flow);

class DimensionError : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

class EvaluationError : public std::runtime_error {
public:
  explicit EvaluationError(std::string function)
      : std::runtime_error("term function '" + function + "' is undefined on its arguments"),
        function_(std::move(function)) {}
  const std::string &function() const noexcept { return function_; }

private:
  std::string function_;
};

class TermFunction;
using TermFunctionPtr = std::shared_ptr<const TermFunction>;

class TermFunction {
public:
  using Evaluator = std::function<std::optional<WordTuple>(std::span<const WordTuple>)>;
  using RangeEvaluator = std::function<std::optional<RangeTuple>(std::span<const RangeTuple>)>;

  TermFunction(std::string name, Signature signature, Evaluator evaluator,
               RangeEvaluator range_evaluator, std::optional<ComponentFlow> flow = std::nullopt);

  // Derives both actions from the flow. Throws std::invalid_argument on an
  // empty component or an out-of-range argument reference.
  static TermFunctionPtr from_flow(std::string name, std::vector<int> argument_dims,
                                   ComponentFlow flow);

  static TermFunctionPtr constant(Token word);
  static TermFunctionPtr concat(int arity);
  static TermFunctionPtr list(int arity);
  static TermFunctionPtr projection(int component, int dim); // component is 1-based

  const std::string &name() const noexcept { return name_; }
  const Signature &signature() const noexcept { return signature_; }
  std::size_t arity() const noexcept { return signature_.arity(); }
  const std::optional<ComponentFlow> &flow() const noexcept { return flow_; }
  bool has_range_action() const noexcept { return static_cast<bool>(range_evaluator_); }
  bool is_constant() const noexcept { return signature_.argument_dims.empty(); }

  // Throws DimensionError if argument dimensions do not match the signature.
  std::optional<WordTuple> evaluate(std::span<const WordTuple> arguments) const;
  std::optional<RangeTuple> apply_ranges(std::span<const RangeTuple> arguments) const;

  friend bool operator==(const TermFunction &a, const TermFunction &b) {
    return a.name_ == b.name_ && a.signature_ == b.signature_ && a.flow_ == b.flow_;
  }

private:
  std::string name_;
  Signature signature_;
  Evaluator evaluator_;
  RangeEvaluator range_evaluator_;
  std::optional<ComponentFlow> flow_;
};

// Partial application in the range algebra; absent when some embedded
// concatenation is undefined.
inline std::optional<RangeTuple> apply_in_range_algebra(const TermFunction &f,
                                                        std::span<const RangeTuple> arguments) {
  return f.apply_ranges(arguments);
}

/**
 * A function call expression: a nonterminal variable (optionally projected
 * to one component) or a term function applied to subexpressions.
 */
class CallExpression {
public:
  struct Variable {
    std::string category;
    int dim = 1;
    int projection = 0; // 1-based component, 0 for the whole tuple
    friend bool operator==(const Variable &, const Variable &) = default;
  };
  struct Application {
    TermFunctionPtr function;
    std::vector<CallExpression> arguments;
  };

  static CallExpression variable(std::string category, int dim = 1);
  static CallExpression projected(std::string category, int dim, int component);
  // Throws DimensionError when argument dimensions violate the signature.
  static CallExpression apply(TermFunctionPtr function, std::vector<CallExpression> arguments);
  static CallExpression constant(Token word);

  int dimension() const;
  bool is_variable() const noexcept { return std::holds_alternative<Variable>(node_); }
  bool has_variables() const;
  const Variable *as_variable() const noexcept { return std::get_if<Variable>(&node_); }
  const Application *as_application() const noexcept { return std::get_if<Application>(&node_); }

  friend bool operator==(const CallExpression &a, const CallExpression &b);

private:
  explicit CallExpression(std::variant<Variable, Application> node) : node_(std::move(node)) {}
  std::variant<Variable, Application> node_;
};

// Evaluates a variable-free expression by structural recursion. Throws
// EvaluationError naming the function whose evaluator rejected its input,
// and std::invalid_argument if a variable is present.
WordTuple evaluate_call_expression(const CallExpression &expression);

// Prefix form: f[e1, e2], variables bare or as A.2, constants quoted.
std::string to_string(const CallExpression &expression);

/**
 * An expression flattened to a single term function over its leaves, in the
 * form f[N1, ..., Nn] the reduction automaton needs. Terminal constants turn
 * into singleton terminal arguments, so the flow itself is constant-free.
 * Arguments are numbered by first appearance in the result components.
 */
struct FlatImage {
  struct Argument {
    std::string name;
    bool terminal = false;
    int dim = 1;
    friend bool operator==(const Argument &, const Argument &) = default;
  };
  std::vector<Argument> arguments;
  ComponentFlow flow;
  // Set when the whole expression is a single terminal constant.
  std::optional<Token> leaf;

  std::vector<int> argument_dims() const;
};

// Throws std::invalid_argument if some applied function has no flow.
FlatImage flatten(const CallExpression &expression);

} // namespace agp

#endif // AGP_TERM_FUNCTION_HPP

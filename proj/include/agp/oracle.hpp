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
 * Brute-force generation oracle: exact string probabilities by breadth-first
 * expansion of partial derivations. Slow and exhaustive, meant for checking
 * the parser on small grammars.
 */

#ifndef AGP_ORACLE_HPP
#define AGP_ORACLE_HPP

#include <cstddef>
#include <map>

#include "agp/acfg.hpp"
#include "agp/range.hpp"

namespace agp {

struct OracleOptions {
  std::size_t max_length = 6;
  std::size_t max_steps = 50;
  double tolerance = 1e-9;
  // Expand only the leftmost nonterminal of each form. With this off, every
  // occurrence is rewritten and the splits factor weighs the result, which
  // counts a tree once per step order.
  bool leftmost = true;
};

struct OracleResult {
  std::map<Word, double> probabilities;
  // Mass still sitting in unfinished forms when the step limit hit.
  double residual = 0.0;
  std::size_t steps = 0;
  bool converged = true;

  double probability(const Word &w) const {
    auto it = probabilities.find(w);
    return it == probabilities.end() ? 0.0 : it->second;
  }
};

// Sentential-form expansion. Requires every image to be a category sequence;
// throws std::invalid_argument otherwise.
OracleResult oracle_generate(const GrammarDefinition &def, const OracleOptions &options);

// Derivation-tree expansion for grammars with tuple images. Forms are
// pruned by length only when the grammar is non-deleting.
OracleResult oracle_generate(const AbstractGrammar &grammar, const OracleOptions &options);

} // namespace agp

#endif // AGP_ORACLE_HPP

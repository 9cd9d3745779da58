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
 * Text formats for grammars.
 *
 * ACFG files, one declaration per line, '#' to end of line is a comment:
 *
 *   start S
 *   g: a -> A @ 0.7                       sequence image; 'x' quotes a terminal
 *   dim A 2                               nonterminal dimension (default 1)
 *   op g : 2 -> 2 = 'a' x1.1 , 'b' x1.2 'c'
 *   top: S -> concat[A.1, A.2] @ 1.0      call-expression image
 *
 * Lines sharing a function name form one partial rewrite function. Inside
 * call expressions, concat[...] and list[...] are built in, X.k projects
 * component k of X, and declared ops are applied by name.
 *
 * MG files:
 *
 *   start c
 *   cooked :: =d d= v @ 1.0
 *   <eps> :: =v +wh c @ 1.0
 */

#ifndef AGP_GRAMMAR_IO_HPP
#define AGP_GRAMMAR_IO_HPP

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "agp/acfg.hpp"
#include "agp/minimalist.hpp"

namespace agp {

class GrammarParseError : public std::runtime_error {
public:
  GrammarParseError(int line, int column, const std::string &message)
      : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " +
                           message),
        line_(line), column_(column) {}
  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

private:
  int line_;
  int column_;
};

// Syntax only; no validation.
GrammarDefinition parse_acfg(std::string_view text);
// Parses and compiles. Throws GrammarParseError or GrammarValidationError.
AbstractGrammar load_acfg(std::string_view text, AbstractGrammar::Options options = {});
std::string serialize_acfg(const GrammarDefinition &def);

struct MgDefinition {
  std::vector<LexicalItem> lexicon;
  std::vector<std::string> start;
  friend bool operator==(const MgDefinition &, const MgDefinition &) = default;
};

MgDefinition parse_mg(std::string_view text);
// Throws GrammarParseError or MgValidationError.
MinimalistGrammar load_mg(std::string_view text);
std::string serialize_mg(const MgDefinition &def);

// Throws std::runtime_error when the file cannot be read.
std::string read_text_file(const std::string &path);

} // namespace agp

#endif // AGP_GRAMMAR_IO_HPP

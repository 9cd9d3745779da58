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

#include <doctest.h>

#include "agp/chart_parser.hpp"
#include "agp/grammar_io.hpp"
#include "test_util.hpp"

using namespace agp;

namespace {

GrammarParseError parse_error(const std::string &text) {
  try {
    (void)parse_acfg(text);
  } catch (const GrammarParseError &e) {
    return e;
  }
  FAIL("no parse error for: " << text);
  return GrammarParseError(0, 0, "");
}

GrammarParseError mg_error(const std::string &text) {
  try {
    (void)parse_mg(text);
  } catch (const GrammarParseError &e) {
    return e;
  }
  FAIL("no parse error for: " << text);
  return GrammarParseError(0, 0, "");
}

} // namespace

TEST_SUITE("grammar_io") {

TEST_CASE("acfg syntax errors carry positions") {
  auto e = parse_error("start S\nh: S -> 'x @ 1.0\n");
  CHECK(e.line() == 2);
  CHECK(e.column() == 9);
  CHECK(std::string(e.what()).rfind("line 2, column 9: ", 0) == 0);

  e = parse_error("start S\n\n# comment\nh: S -> '' @ 1.0\n");
  CHECK(e.line() == 4);

  e = parse_error("h: S -> 'x' @ abc\nstart S\n");
  CHECK(e.line() == 1);
  CHECK(e.column() > 1);

  CHECK(parse_error("h S -> 'x' @ 1\n").line() == 1);
  CHECK(parse_error("start S\nh: S -> 'x'\n").line() == 2);
  CHECK(parse_error("start S\ntop: S -> nope[A] @ 1\n").line() == 2);
  CHECK(parse_error("start S\ndim A two\n").line() == 2);
}

TEST_CASE("validation errors are separate from syntax errors") {
  CHECK_THROWS_AS(load_acfg("start S\nh: S -> 'x' @ 0.5\n"), GrammarValidationError);
  CHECK_THROWS_AS(load_acfg("h: S -> 'x' @ 1.0\n"), GrammarValidationError);
  CHECK_THROWS_AS(load_acfg("start S\ne: S -> @ 1.0\n"), std::runtime_error);
  CHECK_NOTHROW(load_acfg("start S\nh: S -> 'x' @ 1.0\n"));
}

TEST_CASE("comments and blank lines") {
  const auto g = load_acfg("# header\n\nstart S   # trailing\nh: S -> 'x' @ 1.0 # leaf\n");
  CHECK(g.startcategories() == std::vector<Category>{Category::nonterminal("S")});
  CHECK(g.rules().size() == 1);
}

TEST_CASE("acfg round trip") {
  for (const char *file : {"ssx.acfg", "cyclic.acfg", "english.acfg", "abc_cf.acfg", "capitalization.acfg",
                           "copy_mcfg.acfg", "anbncn.acfg"}) {
    CAPTURE(file);
    const auto text = read_text_file(test::data_path(file));
    const auto once = serialize_acfg(parse_acfg(text));
    const auto twice = serialize_acfg(parse_acfg(once));
    CHECK(once == twice);
    // the reparsed grammar parses the same
    const auto a = load_acfg(text);
    const auto b = load_acfg(once);
    for (const auto &w : {Word{"x", "x"}, Word{"she", "sleeps"}, Word{"a", "b", "c"}, Word{"a", "b", "a", "b"},
                          Word{"A", "B"}})
      CHECK(InsideSemiring::probability(run_chartparser<InsideSemiring>(a, std::span<const Token>(w)).inside()) ==
            InsideSemiring::probability(run_chartparser<InsideSemiring>(b, std::span<const Token>(w)).inside()));
  }
}

TEST_CASE("probabilities survive serialization exactly") {
  GrammarDefinition def;
  def.start = {Category::nonterminal("S")};
  const double p = 0.1 + 0.2; // not a short decimal
  def.add_case("h", Category::nonterminal("S"), CategorySequence{Category::terminal("x")}, p);
  def.add_case("g", Category::nonterminal("S"),
              CategorySequence{Category::nonterminal("S"), Category::nonterminal("S")}, 1.0 - p);
  const auto back = parse_acfg(serialize_acfg(def));
  REQUIRE(back.functions.size() == 2);
  double seen = 0;
  for (const auto &f : back.functions)
    for (const auto &c : f.cases)
      if (f.name == "h")
        seen = c.probability;
  CHECK(seen == p);
}

TEST_CASE("mg syntax") {
  const auto def = parse_mg("start c\ncooked :: =d d= v @ 1.0\n<eps> :: =v +wh c @ 0.5\n");
  REQUIRE(def.lexicon.size() == 2);
  CHECK(def.lexicon[0].phon == Word{"cooked"});
  CHECK(def.lexicon[0].features.size() == 3);
  CHECK(def.lexicon[1].phon.empty());
  CHECK(def.lexicon[1].score == 0.5);
  CHECK(def.start == std::vector<std::string>{"c"});

  CHECK(mg_error("start c\na b :: c @ 1\n").line() == 2);
  CHECK(mg_error("a :: @ 1\n").line() == 1);
  CHECK(mg_error("a :: =d= c @ 1\n").line() == 1);
  CHECK(mg_error("a :: c @ x\n").line() == 1);
  CHECK(mg_error("a c @ 1\n").line() == 1);
  CHECK_THROWS_AS(load_mg("a :: c @ 2\nstart c\n"), MgValidationError);
}

TEST_CASE("mg round trip") {
  for (const char *file : {"wh_cooks.mg", "wh_cooks_prob.mg", "smc.mg"}) {
    CAPTURE(file);
    const auto def = parse_mg(read_text_file(test::data_path(file)));
    CHECK(parse_mg(serialize_mg(def)) == def);
  }
}

TEST_CASE("missing files") {
  CHECK_THROWS_AS(read_text_file(test::data_path("no-such-file.acfg")), std::runtime_error);
}

}

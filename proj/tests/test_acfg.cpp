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

#include <algorithm>

#include "agp/acfg.hpp"
#include "agp/grammar_io.hpp"
#include "test_util.hpp"

using namespace agp;

namespace {

Category nt(const std::string &s) { return Category::nonterminal(s); }
Category t(const std::string &s) { return Category::terminal(s); }

template <class Records>
bool has_record(const Records &records, const Category &lhs, const std::string &rule, double p) {
  return std::any_of(records.begin(), records.end(), [&](const auto &r) {
    return r.lhs == lhs && r.rule->name == rule && std::abs(r.score.probability() - p) < 1e-12;
  });
}

bool has_error(const ValidationReport &r, const std::string &needle) {
  return std::any_of(r.errors.begin(), r.errors.end(),
                     [&](const std::string &e) { return e.find(needle) != std::string::npos; });
}

} // namespace

TEST_SUITE("acfg") {

TEST_CASE("tran appends one category") {
  auto g = test::acfg_file("english.acfg");
  CHECK(g.tran({}, nt("NP")) == CategorySequence{nt("NP")});
  CHECK(g.tran({nt("NP")}, nt("VP")) == CategorySequence{nt("NP"), nt("VP")});
  const CategorySequence abc{nt("NP"), nt("VP")};
  CHECK(tran_sequence(g, CategorySequence{}, std::span<const Category>(abc)) == abc);
}

TEST_CASE("prefix filter and the total automaton") {
  auto filtered = test::acfg_file("english.acfg");
  CHECK(filtered.tran_possible({}, nt("NP")));
  CHECK_FALSE(filtered.tran_possible({}, nt("VP")));
  CHECK_THROWS_AS(filtered.tran({}, nt("VP")), std::logic_error);
  auto total = load_acfg(read_text_file(test::data_path("english.acfg")), {.prefix_filter = false});
  CHECK(total.tran_possible({}, nt("VP")));
  CHECK(total.tran({nt("X")}, nt("Y")) == CategorySequence{nt("X"), nt("Y")});
  CHECK(total.comp({nt("X"), nt("Y")}).empty());
}

TEST_CASE("comp returns preimages across shared functions") {
  auto g = test::acfg_file("capitalization.acfg");
  CHECK(has_record(g.comp({nt("A")}), nt("a"), "g", 0.7));
  CHECK(has_record(g.comp({nt("B")}), nt("b"), "g", 0.6));
  CHECK(has_record(g.comp({nt("a")}), nt("b"), "h", 0.4));
  CHECK(has_record(g.comp({nt("b")}), nt("a"), "h", 0.3));
  CHECK(g.comp({nt("A"), nt("A")}).empty());
  CHECK(has_record(g.comp_terminal("A"), nt("A"), "out", 1.0));
}

TEST_CASE("splits counts decompositions") {
  GrammarDefinition def;
  def.add_case("g", nt("a"), CategorySequence{nt("A")}, 1.0);
  const auto &g = def.functions[0];
  const CategorySequence aa{nt("a"), nt("a")};
  CHECK(splits(g, nt("a"), aa, CategorySequence{nt("A"), nt("a")}) == 1);
  CHECK(splits(g, nt("a"), aa, CategorySequence{nt("A"), nt("A")}) == 0);
  CHECK(splits(g, nt("a"), aa, CategorySequence{nt("a"), nt("A")}) == 1);
  CHECK(splits(g, nt("b"), aa, CategorySequence{nt("a"), nt("A")}) == 0);
  // two occurrences, same result: a a -> a a with g(a) = a
  GrammarDefinition id;
  id.add_case("i", nt("a"), CategorySequence{nt("a")}, 1.0);
  CHECK(splits(id.functions[0], nt("a"), aa, aa) == 2);
}

TEST_CASE("validation accepts a normalized distribution") {
  GrammarDefinition def;
  def.add_case("g", nt("a"), CategorySequence{t("A")}, 0.7);
  def.add_case("h", nt("a"), CategorySequence{t("B")}, 0.3);
  def.start = {nt("a")};
  CHECK(validate_grammar(def).ok());
}

TEST_CASE("validation reports missing mass") {
  GrammarDefinition def;
  def.add_case("g", nt("a"), CategorySequence{t("A")}, 0.7);
  def.start = {nt("a")};
  const auto r = validate_grammar(def);
  CHECK_FALSE(r.ok());
  CHECK(has_error(r, "mass 0.7"));
}

TEST_CASE("validation rejects a function declared twice at one category") {
  GrammarDefinition def;
  def.add_case("g", nt("a"), CategorySequence{t("A")}, 0.7);
  def.add_case("g", nt("a"), CategorySequence{t("B")}, 0.3);
  def.start = {nt("a")};
  CHECK(has_error(validate_grammar(def), "not a function"));
}

TEST_CASE("validation catches structural problems") {
  SUBCASE("empty grammar") {
    GrammarDefinition def;
    const auto r = validate_grammar(def);
    CHECK(has_error(r, "no rules"));
    CHECK(has_error(r, "no start"));
  }
  SUBCASE("erasing rule") {
    GrammarDefinition def;
    def.add_case("e", nt("S"), CategorySequence{}, 1.0);
    def.start = {nt("S")};
    CHECK(has_error(validate_grammar(def), "erasing"));
  }
  SUBCASE("terminal lhs") {
    GrammarDefinition def;
    def.add_case("g", t("x"), CategorySequence{nt("S")}, 1.0);
    def.start = {nt("S")};
    CHECK(has_error(validate_grammar(def), "rewrites terminal"));
  }
  SUBCASE("probability out of range") {
    GrammarDefinition def;
    def.add_case("g", nt("S"), CategorySequence{t("x")}, 1.5);
    def.start = {nt("S")};
    CHECK(has_error(validate_grammar(def), "outside [0,1]"));
  }
  SUBCASE("sequence image with a tuple nonterminal") {
    GrammarDefinition def;
    def.dimensions["A"] = 2;
    def.add_case("g", nt("S"), CategorySequence{nt("A")}, 1.0);
    def.add_case("h", nt("A"), CallExpression::apply(TermFunction::list(2), {CallExpression::constant("a"),
                                                                              CallExpression::constant("b")}),
                 1.0);
    def.start = {nt("S")};
    CHECK(has_error(validate_grammar(def), "dimension"));
  }
  SUBCASE("copying image") {
    GrammarDefinition def;
    def.add_case("dup", nt("S"),
                 CallExpression::apply(TermFunction::from_flow("dup", {1}, {{FlowSymbol::arg(0, 0), FlowSymbol::arg(0, 0)}}),
                                       {CallExpression::variable("T")}),
                 1.0);
    def.add_case("x", nt("T"), CategorySequence{t("x")}, 1.0);
    def.start = {nt("S")};
    CHECK(has_error(validate_grammar(def), "copies"));
  }
}

TEST_CASE("validation warnings do not block compilation") {
  GrammarDefinition def;
  def.add_case("g", nt("S"), CategorySequence{t("x")}, 1.0);
  def.add_case("h", nt("Z"), CategorySequence{t("z")}, 1.0);
  def.add_case("loop", nt("L"), CategorySequence{nt("L")}, 1.0);
  def.start = {nt("S")};
  const auto r = validate_grammar(def);
  CHECK(r.ok());
  CHECK(r.warnings.size() == 2);
  CHECK_NOTHROW(AbstractGrammar::compile(def));
}

TEST_CASE("compile rejects invalid grammars with the full report") {
  GrammarDefinition def;
  def.add_case("g", nt("S"), CategorySequence{t("x")}, 0.5);
  def.start = {nt("S")};
  try {
    (void)AbstractGrammar::compile(def);
    FAIL("expected a validation error");
  } catch (const GrammarValidationError &e) {
    CHECK(e.report().errors.size() == 1);
  }
}

TEST_CASE("classical rules survive the round trip through functions") {
  std::vector<std::pair<ClassicalRule, double>> rules{
      {{nt("S"), {nt("NP"), nt("VP")}}, 1.0}, {{nt("NP"), {t("she")}}, 1.0}, {{nt("VP"), {t("runs")}}, 0.5},
      {{nt("VP"), {nt("VP"), t("fast")}}, 0.5}};
  const auto def = from_classical_rules(rules, {nt("S")});
  CHECK(validate_grammar(def).ok());
  std::set<ClassicalRule> original;
  for (const auto &[r, p] : rules)
    original.insert(r);
  CHECK(classical_rules(def) == original);
  // and for a grammar with shared functions
  auto cap = test::acfg_file("capitalization.acfg");
  const auto back = classical_rules(cap.definition());
  CHECK(back.size() == 7);
  CHECK(back.count(ClassicalRule{nt("a"), {nt("A")}}));
  CHECK(back.count(ClassicalRule{nt("b"), {nt("a")}}));
}

TEST_CASE("context-free detection and terminal pass-through records") {
  auto cf = test::acfg_file("abc_cf.acfg");
  CHECK(cf.context_free());
  CHECK(cf.range_filter() == RangeFilter::adjacent);
  // 'a' inside a longer rhs gets an identity record
  CHECK(has_record(cf.comp_terminal("a"), t("a"), "", 1.0));
  CHECK(has_record(cf.comp({t("a"), t("b")}), nt("S"), "pair", 0.5));

  auto mcfg = test::acfg_file("anbncn.acfg");
  CHECK_FALSE(mcfg.context_free());
  CHECK(mcfg.non_deleting());
  CHECK(mcfg.range_filter() == RangeFilter::any);
  CHECK(mcfg.dimension(nt("A")) == 2);
  CHECK(mcfg.dimension(nt("S")) == 1);
  // the tuple leaf is normalized into a rule over singleton terminals
  CHECK(has_record(mcfg.comp({t("a"), t("b"), t("c")}), nt("A"), "base", 0.5));
  CHECK(has_record(mcfg.comp({t("a"), nt("A"), t("b"), t("c")}), nt("A"), "grow", 0.5));
  CHECK(has_record(mcfg.comp({nt("A")}), nt("S"), "top", 1.0));
}

TEST_CASE("compiled range actions of the tuple grammar") {
  auto g = test::acfg_file("anbncn.acfg");
  const auto &records = g.comp({t("a"), nt("A"), t("b"), t("c")});
  REQUIRE(records.size() == 1);
  const auto &f = *records[0].rule->function;
  // a [a b c -> (2,3),(4,6)] b c  over  a a b b c c
  std::vector<RangeTuple> args{{{1, 2}}, {{2, 3}, {4, 6}}, {{3, 4}}, {{6, 7}}};
  CHECK(f.apply_ranges(args) == RangeTuple{{1, 3}, {3, 7}});
  args[2] = {{5, 6}};
  CHECK_FALSE(f.apply_ranges(args));
}

}

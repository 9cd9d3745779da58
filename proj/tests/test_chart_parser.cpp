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
#include <cmath>
#include <map>
#include <set>
#include <tuple>

#include "agp/chart_parser.hpp"
#include "agp/derivation.hpp"
#include "agp/oracle.hpp"
#include "mg_reference.hpp"
#include "test_util.hpp"

using namespace agp;

namespace {

template <class S, class G>
auto parse(const G &g, const std::string &text, ParserOptions opts = {}) {
  const auto w = test::words(text);
  return run_chartparser<S>(g, std::span<const Token>(w), opts);
}

template <class G>
double inside(const G &g, const Word &w, ParserOptions opts = {}) {
  return InsideSemiring::probability(run_chartparser<InsideSemiring>(g, std::span<const Token>(w), opts).inside());
}

// All strings of length 1..max_length over the alphabet.
std::vector<Word> all_strings(const std::vector<Token> &alphabet, std::size_t max_length) {
  std::vector<Word> out, layer{{}};
  for (std::size_t n = 1; n <= max_length; ++n) {
    std::vector<Word> next;
    for (const auto &p : layer)
      for (const auto &t : alphabet) {
        auto w = p;
        w.push_back(t);
        next.push_back(w);
      }
    out.insert(out.end(), next.begin(), next.end());
    layer = std::move(next);
  }
  return out;
}

template <class Forest>
void check_forest_integrity(const Forest &f) {
  std::set<std::tuple<bool, int, std::vector<RangeTuple>, RangeTuple>> keys;
  const auto n = static_cast<int>(f.items().size());
  for (const auto &it : f.items()) {
    CHECK(keys.insert({it.is_edge, it.symbol, it.edge_ranges, it.range}).second);
    for (const auto &t : it.traversals) {
      CHECK(it.is_edge);
      if (t.edge < 0)
        continue;
      REQUIRE(t.edge < n);
      REQUIRE(t.constituent >= 0);
      REQUIRE(t.constituent < n);
      CHECK(f.items()[static_cast<std::size_t>(t.edge)].is_edge);
      CHECK_FALSE(f.items()[static_cast<std::size_t>(t.constituent)].is_edge);
    }
    for (const auto &c : it.completions) {
      CHECK_FALSE(it.is_edge);
      if (c.terminal) {
        CHECK(c.position >= 1);
        CHECK(c.position <= static_cast<int>(f.input().size()) + 1); // empty words sit anywhere
      } else {
        REQUIRE(c.edge >= 0);
        REQUIRE(c.edge < n);
        CHECK(f.items()[static_cast<std::size_t>(c.edge)].is_edge);
      }
    }
  }
}

} // namespace

TEST_SUITE("chart_parser") {

TEST_CASE("binary grammar: inside scores") {
  const auto g = test::acfg_file("ssx.acfg");
  CHECK(inside(g, {"x"}) == doctest::Approx(0.6).epsilon(1e-12));
  CHECK(inside(g, {"x", "x"}) == doctest::Approx(0.144).epsilon(1e-12));
  CHECK(inside(g, {"x", "x", "x"}) == doctest::Approx(0.06912).epsilon(1e-12));
  CHECK(inside(g, Word(6, "x")) == doctest::Approx(0.02006581248).epsilon(1e-12));
  CHECK(inside(g, {"y"}) == 0.0);
  CHECK(inside(g, {}) == 0.0);
}

TEST_CASE("cyclic grammar converges and requeues") {
  const auto g = test::acfg_file("cyclic.acfg");
  const auto f = parse<InsideSemiring>(g, "x");
  CHECK(InsideSemiring::probability(f.inside()) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(f.diagnostics().requeues > 0);
  CHECK_FALSE(f.diagnostics().aborted);
  // Viterbi takes the direct leaf rule
  const auto v = parse<ViterbiSemiring>(g, "x");
  CHECK(ViterbiSemiring::probability(v.inside()) == doctest::Approx(0.7));
  const auto best = v.best();
  REQUIRE(best);
  CHECK(best->rule == "h");
}

TEST_CASE("capitalization grammar with shared functions") {
  const auto g = test::acfg_file("capitalization.acfg");
  // a and b swap until each one capitalizes: P(a=>A) = 0.7/(1-0.12) etc.
  const double pa_a = 0.7 / (1 - 0.3 * 0.4), pb_b = 0.6 / (1 - 0.4 * 0.3);
  CHECK(inside(g, {"A", "B"}) == doctest::Approx(pa_a * pb_b).epsilon(1e-9));
  CHECK(inside(g, {"A", "B"}) == doctest::Approx(0.542355371901).epsilon(1e-9));
}

TEST_CASE("viterbi never exceeds inside; boolean agrees") {
  test::Gen gen(11);
  for (const char *file : {"ssx.acfg", "english.acfg", "abc_cf.acfg", "copy_mcfg.acfg", "anbncn.acfg"}) {
    CAPTURE(file);
    const auto g = test::acfg_file(file);
    const auto alphabet = g.terminals();
    for (int i = 0; i < 60; ++i) {
      Word w;
      const int len = gen.integer(1, 6);
      for (int k = 0; k < len; ++k)
        w.push_back(gen.pick(alphabet));
      CAPTURE(w.size());
      const auto in = run_chartparser<InsideSemiring>(g, std::span<const Token>(w));
      const auto vi = run_chartparser<ViterbiSemiring>(g, std::span<const Token>(w));
      const auto bo = run_chartparser<BooleanSemiring>(g, std::span<const Token>(w));
      CHECK(vi.inside().log() <= in.inside().log() + 1e-12);
      CHECK(bo.recognized() == in.recognized());
      CHECK(vi.recognized() == in.recognized());
      CHECK(static_cast<bool>(vi.best()) == vi.recognized());
    }
  }
}

TEST_CASE("item keys are unique and backpointers resolve") {
  const auto g = test::acfg_file("english.acfg");
  check_forest_integrity(parse<InsideSemiring>(g, "the cook cooked the soup"));
  check_forest_integrity(parse<InsideSemiring>(test::acfg_file("copy_mcfg.acfg"), "a b a b"));
  check_forest_integrity(parse<InsideSemiring>(test::acfg_file("ssx.acfg"), "x x x x"));
  check_forest_integrity(parse<InsideSemiring>(test::mg_file("wh_cooks.mg"), "what the cooks cooked"));
}

TEST_CASE("parser agrees with the generation oracle") {
  struct Case {
    const char *file;
    std::size_t max_length;
  };
  for (const Case c : {Case{"ssx.acfg", 5}, Case{"english.acfg", 5}, Case{"abc_cf.acfg", 5},
                       Case{"capitalization.acfg", 4}, Case{"cyclic.acfg", 4}, Case{"copy_mcfg.acfg", 6},
                       Case{"anbncn.acfg", 6}}) {
    CAPTURE(c.file);
    const auto g = test::acfg_file(c.file);
    const OracleOptions opts{.max_length = c.max_length, .max_steps = 120};
    const auto oracle = g.context_free() ? oracle_generate(g.definition(), opts) : oracle_generate(g, opts);
    const double slack = std::max(1e-9, oracle.residual);
    for (const auto &w : all_strings(g.terminals(), c.max_length)) {
      const double p = inside(g, w);
      const double q = oracle.probability(w);
      CAPTURE(w.size());
      CHECK(std::abs(p - q) <= slack + 1e-9 * q);
    }
  }
}

TEST_CASE("literal mode gives the same scores") {
  test::Gen gen(5);
  ParserOptions literal;
  literal.literal = true;
  for (const char *file : {"ssx.acfg", "english.acfg", "abc_cf.acfg", "copy_mcfg.acfg", "anbncn.acfg"}) {
    CAPTURE(file);
    const auto g = test::acfg_file(file);
    for (int i = 0; i < 30; ++i) {
      Word w;
      const int len = gen.integer(1, 5);
      for (int k = 0; k < len; ++k)
        w.push_back(gen.pick(g.terminals()));
      CHECK(inside(g, w, literal) == doctest::Approx(inside(g, w)).epsilon(1e-12));
    }
  }
  const auto mg = test::mg_file("wh_cooks_prob.mg");
  const Word w = test::words("what the cooks cooked");
  CHECK(inside(mg, w, literal) == doctest::Approx(inside(mg, w)).epsilon(1e-12));
}

TEST_CASE("minimalist grammar: probabilities multiply along the derivation") {
  const auto g = test::mg_file("wh_cooks_prob.mg");
  CHECK(inside(g, test::words("what the cooks cooked")) == doctest::Approx(0.1008).epsilon(1e-12));
  const auto f = parse<ViterbiSemiring>(g, "what the cooks cooked");
  const auto best = f.best();
  REQUIRE(best);
  CHECK(best->category == "c");
  CHECK(best->rule == "move1");
  CHECK(best->ranges == RangeTuple{Range{1, 5}});
}

TEST_CASE("minimalist grammar: every word order against the reference enumerator") {
  const auto g = test::mg_file("wh_cooks.mg");
  const auto language = test::enumerate_language(g.lexicon(), "c", 6);
  Word w = test::words("cooked cooks the what");
  std::sort(w.begin(), w.end());
  int accepted = 0, permutations = 0;
  do {
    ++permutations;
    const bool parsed = run_chartparser<BooleanSemiring>(g, std::span<const Token>(w)).recognized();
    CHECK(parsed == (language.count(w) == 1));
    accepted += parsed;
  } while (std::next_permutation(w.begin(), w.end()));
  CHECK(permutations == 24);
  CHECK(accepted == 2);
}

TEST_CASE("SMC violations are reported") {
  const auto g = test::mg_file("smc.mg");
  const auto f = parse<BooleanSemiring>(g, "saw who what");
  CHECK_FALSE(f.recognized());
  CHECK(f.diagnostics().smc_violations > 0);
}

TEST_CASE("item budget aborts cleanly") {
  const auto g = test::acfg_file("ssx.acfg");
  ParserOptions tight;
  tight.item_budget = 10;
  const auto f = parse<InsideSemiring>(g, "x x x x x x", tight);
  CHECK(f.diagnostics().aborted);
  CHECK(f.diagnostics().items <= 10);
  REQUIRE_FALSE(f.diagnostics().messages.empty());
}

TEST_CASE("unknown tokens and empty input") {
  const auto g = test::acfg_file("english.acfg");
  const auto f = parse<InsideSemiring>(g, "the dog sleeps");
  CHECK_FALSE(f.recognized());
  CHECK(f.diagnostics().unknown_tokens == std::vector<Token>{"dog"});
  const auto e = parse<InsideSemiring>(g, "");
  CHECK_FALSE(e.recognized());
  CHECK(e.goal_range() == RangeTuple{Range{1, 1}});
}

TEST_CASE("english: a tree") {
  const auto g = test::acfg_file("english.acfg");
  const auto f = parse<ViterbiSemiring>(g, "she cooked the soup");
  CHECK(ViterbiSemiring::probability(f.inside()) == doctest::Approx(0.4 * 0.7 * 0.6 * 0.5));
  const auto best = f.best();
  REQUIRE(best);
  CHECK(to_bracketed(*best) ==
        "(S {s} (NP {pro} 'she') (VP {vt} (V {v} 'cooked') (NP {np} (Det {det} 'the') (N {n2} 'soup'))))");
}

TEST_CASE("determinism across runs") {
  const auto g = test::mg_file("wh_cooks.mg");
  const auto a = parse<ViterbiSemiring>(g, "what the cooks cooked");
  const auto b = parse<ViterbiSemiring>(g, "what the cooks cooked");
  CHECK(a.items().size() == b.items().size());
  REQUIRE(a.best());
  CHECK(*a.best() == *b.best());
}

}

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

#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "agp/cli.hpp"
#include "agp/grammar_io.hpp"
#include "test_util.hpp"

using namespace agp;
using nlohmann::json;

namespace {

struct Run {
  int code = 0;
  std::string out, err;
};

Run run(std::vector<std::string> args, const std::string &stdin_text = "") {
  args.insert(args.begin(), "agparse");
  std::vector<const char *> argv;
  for (const auto &a : args)
    argv.push_back(a.c_str());
  std::istringstream in(stdin_text);
  std::ostringstream out, err;
  Run r;
  r.code = run_cli(static_cast<int>(argv.size()), argv.data(), in, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

// Compares against tests/golden/<name>; AGP_UPDATE_GOLDEN=1 rewrites it.
void check_golden(const std::string &name, const std::string &actual) {
  const std::string path = std::string(AGP_GOLDEN_DIR) + "/" + name;
  if (std::getenv("AGP_UPDATE_GOLDEN")) {
    std::ofstream(path) << actual;
    return;
  }
  CHECK(read_text_file(path) == actual);
}

} // namespace

TEST_SUITE("cli") {

TEST_CASE("exit codes") {
  const auto g = test::data_path("english.acfg");
  CHECK(run({"parse", "--grammar", g, "--input", "she sleeps"}).code == kExitRecognized);
  CHECK(run({"parse", "--grammar", g, "--input", "sleeps she"}).code == kExitUnrecognized);
  CHECK(run({"parse", "--grammar", test::data_path("nope.acfg"), "--input", "x"}).code == kExitError);
  CHECK(run({"parse", "--grammar", g}).code == kExitUsage);
  CHECK(run({"parse", "--grammar", g, "--input", "x", "--semiring", "tropical"}).code == kExitUsage);
  CHECK(run({"frobnicate"}).code == kExitUsage);
  CHECK(run({}).code == kExitUsage);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("json output fields") {
  const auto r = run({"parse", "--grammar", test::data_path("wh_cooks.mg"), "--input", "what the cooks cooked",
                      "--semiring", "viterbi"});
  REQUIRE(r.code == 0);
  const auto j = json::parse(r.out);
  CHECK(j["recognized"] == true);
  CHECK(j["score"].get<double>() == doctest::Approx(1.0));
  CHECK(j["tree"]["category"] == "c");
  CHECK(j["tree"]["rule"] == "move1");
  CHECK(j["tree"]["ranges"].size() == 1);
  const auto &d = j["diagnostics"];
  for (const char *key : {"semiring", "tokens", "unknown_tokens", "items", "edges", "constituents", "dequeues",
                          "requeues", "reopened", "smc_violations", "aborted", "messages"})
    CHECK(d.contains(key));
  CHECK(d["semiring"] == "viterbi");
  CHECK(d["aborted"] == false);
}

TEST_CASE("unrecognized input gives a null tree") {
  const auto r = run({"parse", "--grammar", test::data_path("english.acfg"), "--input", "the dog sleeps"});
  CHECK(r.code == kExitUnrecognized);
  const auto j = json::parse(r.out);
  CHECK(j["recognized"] == false);
  CHECK(j["tree"].is_null());
  CHECK(j["diagnostics"]["unknown_tokens"] == json::array({"dog"}));
}

TEST_CASE("stdin input and score output") {
  const auto r = run({"parse", "--grammar", test::data_path("ssx.acfg"), "--stdin", "--output", "score"}, "x\nx\n");
  CHECK(r.code == 0);
  CHECK(r.out == "recognized: true\nscore: 0.144\n");
}

TEST_CASE("golden outputs") {
  check_golden("wh_cooks_viterbi.json", run({"parse", "--grammar", test::data_path("wh_cooks.mg"), "--input",
                                         "what the cooks cooked", "--semiring", "viterbi"})
                                        .out);
  check_golden("english_tree.txt", run({"parse", "--grammar", test::data_path("english.acfg"), "--input",
                                        "she cooked the soup", "--semiring", "viterbi", "--output", "tree"})
                                       .out);
  check_golden("anbncn_inside.json",
               run({"parse", "--grammar", test::data_path("anbncn.acfg"), "--input", "a a b b c c"}).out);
  check_golden("ssx_oracle.txt", run({"oracle", "--grammar", test::data_path("ssx.acfg"), "--max-len", "4",
                                      "--max-steps", "40"})
                                     .out);
}

TEST_CASE("output is byte-identical across runs") {
  const std::vector<std::string> args{"parse", "--grammar", test::data_path("capitalization.acfg"), "--input", "A B"};
  const auto a = run(args), b = run(args);
  CHECK(a.out == b.out);
  CHECK(a.err == b.err);
}

TEST_CASE("oracle rejects minimalist grammars") {
  const auto r = run({"oracle", "--grammar", test::data_path("wh_cooks.mg")});
  CHECK(r.code != 0);
}

}

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

#include "agp/cli.hpp"

#include <cstdio>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "agp/acfg.hpp"
#include "agp/chart_parser.hpp"
#include "agp/grammar_io.hpp"
#include "agp/minimalist.hpp"
#include "agp/oracle.hpp"

namespace agp {

namespace {

using nlohmann::json;

struct ParseArgs {
  std::string grammar;
  std::string format;
  std::string input;
  bool use_stdin = false;
  std::string semiring = "inside";
  std::string output = "json";
  double tol = 1e-12;
  std::size_t budget = 1000000;
  bool literal = false;
};

struct OracleArgs {
  std::string grammar;
  std::size_t max_len = 6;
  std::size_t max_steps = 50;
  double tol = 1e-9;
};

std::string fmt(double v, const char *spec = "%.12g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

std::vector<Token> tokenize(const std::string &text) {
  std::istringstream is(text);
  return {std::istream_iterator<std::string>(is), std::istream_iterator<std::string>()};
}

json to_json(const DerivationNode &node) {
  json ranges = json::array();
  for (const auto &r : node.ranges)
    ranges.push_back({r.start, r.end});
  json j = {{"category", node.category}, {"rule", node.rule}, {"ranges", ranges}};
  if (node.word)
    j["word"] = *node.word;
  json kids = json::array();
  for (const auto &c : node.children)
    kids.push_back(to_json(c));
  j["children"] = kids;
  return j;
}

template <class S, class G>
int report(const G &grammar, const std::vector<Token> &tokens, const ParseArgs &args, std::ostream &out,
           std::ostream &err) {
  ParserOptions options;
  options.tolerance = args.tol;
  options.item_budget = args.budget;
  options.literal = args.literal;
  const auto forest = run_chartparser<S>(grammar, tokens, options);
  const auto &d = forest.diagnostics();
  for (const auto &t : d.unknown_tokens)
    err << "warning: unknown token '" << t << "'\n";
  for (const auto &m : d.messages)
    err << "error: " << m << '\n';

  const bool recognized = !d.aborted && forest.recognized();
  const auto value = forest.inside();
  const double probability = S::probability(value);
  const auto best = recognized ? forest.best() : std::nullopt;

  if (args.output == "json") {
    json diag = {{"semiring", std::string(S::name)},
                 {"tokens", tokens.size()},
                 {"unknown_tokens", d.unknown_tokens},
                 {"items", d.items},
                 {"edges", d.edges},
                 {"constituents", d.constituents},
                 {"dequeues", d.dequeues},
                 {"requeues", d.requeues},
                 {"reopened", d.reopened},
                 {"smc_violations", d.smc_violations},
                 {"aborted", d.aborted},
                 {"messages", d.messages}};
    json j = {{"recognized", recognized},
              {"score", probability},
              {"tree", best ? to_json(*best) : json(nullptr)},
              {"diagnostics", diag}};
    out << j.dump(2) << '\n';
  } else {
    out << "recognized: " << (recognized ? "true" : "false") << '\n';
    out << "score: " << fmt(probability) << '\n';
    if (args.output == "tree")
      out << (best ? to_bracketed(*best) : std::string("no parse")) << '\n';
  }
  if (d.aborted)
    return kExitError;
  return recognized ? kExitRecognized : kExitUnrecognized;
}

template <class G>
int dispatch(const G &grammar, const std::vector<Token> &tokens, const ParseArgs &args, std::ostream &out,
             std::ostream &err) {
  if (args.semiring == "viterbi")
    return report<ViterbiSemiring>(grammar, tokens, args, out, err);
  if (args.semiring == "bool")
    return report<BooleanSemiring>(grammar, tokens, args, out, err);
  return report<InsideSemiring>(grammar, tokens, args, out, err);
}

std::string infer_format(const std::string &path) {
  auto ends_with = [&](const std::string &suffix) {
    return path.size() >= suffix.size() && path.compare(path.size() - suffix.size(), suffix.size(), suffix) == 0;
  };
  if (ends_with(".mg"))
    return "mg";
  if (ends_with(".acfg") || ends_with(".cfg"))
    return "acfg";
  return "";
}

int cmd_parse(const ParseArgs &args, std::istream &in, std::ostream &out, std::ostream &err) {
  const std::string format = args.format.empty() ? infer_format(args.grammar) : args.format;
  if (format.empty()) {
    err << "error: cannot tell the grammar format of " << args.grammar << "; pass --format\n";
    return kExitUsage;
  }
  std::string text;
  if (args.use_stdin)
    text.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  else
    text = args.input;
  const auto tokens = tokenize(text);

  const std::string source = read_text_file(args.grammar);
  if (format == "mg")
    return dispatch(load_mg(source), tokens, args, out, err);
  const auto grammar = load_acfg(source);
  for (const auto &w : grammar.report().warnings)
    err << "warning: " << w << '\n';
  return dispatch(grammar, tokens, args, out, err);
}

int cmd_oracle(const OracleArgs &args, std::ostream &out, std::ostream &err) {
  if (infer_format(args.grammar) == "mg") {
    err << "error: the oracle handles ACFG grammars only\n";
    return kExitError;
  }
  const auto grammar = load_acfg(read_text_file(args.grammar));
  for (const auto &w : grammar.report().warnings)
    err << "warning: " << w << '\n';
  OracleOptions options;
  options.max_length = args.max_len;
  options.max_steps = args.max_steps;
  options.tolerance = args.tol;
  const auto result = grammar.definition().has_call_expressions() ? oracle_generate(grammar, options)
                                                                   : oracle_generate(grammar.definition(), options);
  for (const auto &[word, p] : result.probabilities) {
    std::string line;
    for (const auto &t : word)
      line += t + ' ';
    out << line << fmt(p) << '\n';
  }
  out << "# residual <= " << fmt(result.residual, "%.6g") << " after " << result.steps << " steps\n";
  if (!result.converged)
    err << "warning: residual mass " << fmt(result.residual, "%.6g") << " exceeds tolerance " << fmt(args.tol, "%g")
        << "; raise --max-steps\n";
  return kExitRecognized;
}

} // namespace

int run_cli(int argc, const char *const *argv, std::istream &in, std::ostream &out, std::ostream &err) {
  CLI::App app{"Probabilistic chart parser for abstract grammars", "agparse"};
  app.require_subcommand(1);

  ParseArgs pa;
  auto *parse = app.add_subcommand("parse", "parse a token sequence");
  parse->add_option("--grammar", pa.grammar, "grammar file")->required();
  parse->add_option("--format", pa.format, "grammar format (default: from extension)")
      ->check(CLI::IsMember({"acfg", "mg"}));
  auto *input_opt = parse->add_option("--input", pa.input, "whitespace-separated tokens");
  auto *stdin_opt = parse->add_flag("--stdin", pa.use_stdin, "read tokens from standard input");
  input_opt->excludes(stdin_opt);
  parse->add_option("--semiring", pa.semiring, "inside, viterbi or bool")
      ->check(CLI::IsMember({"inside", "viterbi", "bool"}));
  parse->add_option("--output", pa.output, "json, tree or score")->check(CLI::IsMember({"json", "tree", "score"}));
  parse->add_option("--tol", pa.tol, "convergence tolerance on log scores")->check(CLI::NonNegativeNumber);
  parse->add_option("--budget", pa.budget, "maximum number of chart items")->check(CLI::PositiveNumber);
  parse->add_flag("--literal", pa.literal, "combine every edge with every constituent");

  OracleArgs oa;
  auto *oracle = app.add_subcommand("oracle", "enumerate string probabilities by brute force");
  oracle->add_option("--grammar", oa.grammar, "ACFG grammar file")->required();
  oracle->add_option("--max-len", oa.max_len, "longest string to report");
  oracle->add_option("--max-steps", oa.max_steps, "expansion rounds");
  oracle->add_option("--tol", oa.tol, "residual mass tolerance")->check(CLI::NonNegativeNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError &e) {
    app.exit(e, out, err);
    err << app.help();
    return kExitUsage;
  }

  try {
    if (parse->parsed()) {
      if (parse->count("--input") == 0 && !pa.use_stdin) {
        err << "error: pass --input or --stdin\n" << parse->help();
        return kExitUsage;
      }
      return cmd_parse(pa, in, out, err);
    }
    return cmd_oracle(oa, out, err);
  } catch (const std::exception &e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
}

} // namespace agp

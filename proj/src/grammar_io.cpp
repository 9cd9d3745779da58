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

#include "agp/grammar_io.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace agp {

namespace {

enum class Tok { word, quoted, colon, arrow, lbracket, rbracket, comma, at, equals, end };

struct Lexeme {
  Tok kind = Tok::end;
  std::string text;
  int column = 0;
};

std::vector<std::string> split_lines(std::string_view text) {
  std::vector<std::string> lines;
  std::string cur;
  for (char ch : text) {
    if (ch == '\n') {
      lines.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur += ch;
    }
  }
  lines.push_back(cur);
  return lines;
}

bool is_special(char c) { return c == ':' || c == '[' || c == ']' || c == ',' || c == '@' || c == '=' || c == '\'' || c == '#'; }

std::vector<Lexeme> lex(const std::string &line, int lineno) {
  std::vector<Lexeme> out;
  std::size_t i = 0;
  while (i < line.size()) {
    const char c = line[i];
    const int col = static_cast<int>(i) + 1;
    if (c == ' ' || c == '\t') {
      ++i;
    } else if (c == '#') {
      break;
    } else if (c == '\'') {
      const auto close = line.find('\'', i + 1);
      if (close == std::string::npos)
        throw GrammarParseError(lineno, col, "unterminated quote");
      if (close == i + 1)
        throw GrammarParseError(lineno, col, "empty terminal ''");
      out.push_back({Tok::quoted, line.substr(i + 1, close - i - 1), col});
      i = close + 1;
    } else if (c == '-' && i + 1 < line.size() && line[i + 1] == '>') {
      out.push_back({Tok::arrow, "->", col});
      i += 2;
    } else if (is_special(c)) {
      static const std::string chars = ":[],@=";
      static const Tok kinds[] = {Tok::colon, Tok::lbracket, Tok::rbracket, Tok::comma, Tok::at, Tok::equals};
      out.push_back({kinds[chars.find(c)], std::string(1, c), col});
      ++i;
    } else {
      std::size_t j = i;
      while (j < line.size() && line[j] != ' ' && line[j] != '\t' && !is_special(line[j]) &&
             !(line[j] == '-' && j + 1 < line.size() && line[j + 1] == '>'))
        ++j;
      out.push_back({Tok::word, line.substr(i, j - i), col});
      i = j;
    }
  }
  out.push_back({Tok::end, "", static_cast<int>(line.size()) + 1});
  return out;
}

std::string describe(const Lexeme &l) { return l.kind == Tok::end ? "end of line" : "'" + l.text + "'"; }

class Cursor {
public:
  Cursor(std::vector<Lexeme> toks, int line) : toks_(std::move(toks)), line_(line) {}

  const Lexeme &peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  const Lexeme &next() {
    const Lexeme &l = peek();
    if (pos_ < toks_.size() - 1)
      ++pos_;
    return l;
  }
  const Lexeme &expect(Tok kind, const char *what) {
    if (peek().kind != kind)
      fail(peek(), std::string("expected ") + what + ", found " + describe(peek()));
    return next();
  }
  bool accept(Tok kind) {
    if (peek().kind != kind)
      return false;
    next();
    return true;
  }
  [[noreturn]] void fail(const Lexeme &at, const std::string &msg) const {
    throw GrammarParseError(line_, at.column, msg);
  }
  int line() const noexcept { return line_; }

private:
  std::vector<Lexeme> toks_;
  std::size_t pos_ = 0;
  int line_;
};

int parse_int(Cursor &cur, const char *what) {
  const Lexeme &l = cur.expect(Tok::word, what);
  char *end = nullptr;
  errno = 0;
  const long v = std::strtol(l.text.c_str(), &end, 10);
  if (*end != '\0' || errno || v < 0 || v > 1000)
    cur.fail(l, std::string("expected ") + what + ", found " + describe(l));
  return static_cast<int>(v);
}

double parse_probability(Cursor &cur) {
  const Lexeme &l = cur.expect(Tok::word, "a probability");
  char *end = nullptr;
  errno = 0;
  const double v = std::strtod(l.text.c_str(), &end);
  if (*end != '\0' || errno)
    cur.fail(l, "expected a probability, found " + describe(l));
  return v;
}

// xI or xI.J, 1-based
FlowSymbol parse_flow_variable(Cursor &cur, const Lexeme &l, const std::vector<int> &dims) {
  const std::string &t = l.text;
  int a = 0, c = 1;
  char tail = 0;
  if (t.size() < 2 || t[0] != 'x' ||
      (std::sscanf(t.c_str() + 1, "%d.%d%c", &a, &c, &tail) != 2 &&
       !(std::sscanf(t.c_str() + 1, "%d%c", &a, &tail) == 1 && (c = 1))))
    cur.fail(l, "expected xI or xI.J in operation flow, found " + describe(l));
  if (a < 1 || a > static_cast<int>(dims.size()) || c < 1 || c > dims[static_cast<std::size_t>(a - 1)])
    cur.fail(l, "flow variable " + t + " outside the signature");
  return FlowSymbol::arg(a - 1, c - 1);
}

struct AcfgParser {
  GrammarDefinition def;

  void header_line(Cursor &cur) {
    const Lexeme kw = cur.next();
    if (kw.text == "start") {
      if (cur.peek().kind == Tok::end)
        cur.fail(cur.peek(), "start needs at least one category");
      while (cur.peek().kind != Tok::end)
        def.start.push_back(Category::nonterminal(cur.expect(Tok::word, "a category").text));
    } else if (kw.text == "dim") {
      const std::string name = cur.expect(Tok::word, "a nonterminal").text;
      const Lexeme &at = cur.peek();
      const int d = parse_int(cur, "a dimension");
      if (d < 1)
        cur.fail(at, "dimension must be positive");
      def.dimensions[name] = d;
    } else if (kw.text == "op") {
      const Lexeme name = cur.expect(Tok::word, "an operation name");
      if (name.text == "concat" || name.text == "list")
        cur.fail(name, "'" + name.text + "' is built in");
      cur.expect(Tok::colon, "':'");
      std::vector<int> dims;
      while (cur.peek().kind == Tok::word)
        dims.push_back(parse_int(cur, "an argument dimension"));
      cur.expect(Tok::arrow, "'->'");
      const int result = parse_int(cur, "a result dimension");
      cur.expect(Tok::equals, "'='");
      ComponentFlow flow(1);
      while (cur.peek().kind != Tok::end) {
        const Lexeme &l = cur.next();
        if (l.kind == Tok::comma)
          flow.emplace_back();
        else if (l.kind == Tok::quoted)
          flow.back().push_back(FlowSymbol::word(l.text));
        else if (l.kind == Tok::word)
          flow.back().push_back(parse_flow_variable(cur, l, dims));
        else
          cur.fail(l, "unexpected " + describe(l) + " in operation flow");
      }
      if (static_cast<int>(flow.size()) != result)
        cur.fail(name, "operation " + name.text + " declares dimension " + std::to_string(result) + " but has " +
                           std::to_string(flow.size()) + " components");
      try {
        def.operations.push_back(TermFunction::from_flow(name.text, dims, std::move(flow)));
      } catch (const std::invalid_argument &e) {
        cur.fail(name, e.what());
      }
    } else {
      cur.fail(kw, "expected a rule, 'start', 'dim' or 'op', found " + describe(kw));
    }
  }

  CallExpression expression(Cursor &cur) {
    const Lexeme l = cur.next();
    try {
      if (l.kind == Tok::quoted)
        return CallExpression::constant(l.text);
      if (l.kind != Tok::word)
        cur.fail(l, "expected an expression, found " + describe(l));
      if (cur.accept(Tok::lbracket)) {
        std::vector<CallExpression> args;
        if (cur.peek().kind != Tok::rbracket) {
          args.push_back(expression(cur));
          while (cur.accept(Tok::comma))
            args.push_back(expression(cur));
        }
        cur.expect(Tok::rbracket, "']'");
        TermFunctionPtr f;
        if (l.text == "concat")
          f = TermFunction::concat(static_cast<int>(args.size()));
        else if (l.text == "list")
          f = TermFunction::list(static_cast<int>(args.size()));
        else
          f = def.operation(l.text);
        if (!f)
          cur.fail(l, "unknown operation '" + l.text + "'");
        return CallExpression::apply(std::move(f), std::move(args));
      }
      const auto dot = l.text.rfind('.');
      if (dot != std::string::npos && dot + 1 < l.text.size() &&
          l.text.find_first_not_of("0123456789", dot + 1) == std::string::npos) {
        const std::string name = l.text.substr(0, dot);
        return CallExpression::projected(name, def.dimension(name), std::stoi(l.text.substr(dot + 1)));
      }
      return CallExpression::variable(l.text, def.dimension(l.text));
    } catch (const DimensionError &e) {
      cur.fail(l, e.what());
    } catch (const std::invalid_argument &e) {
      cur.fail(l, e.what());
    }
  }

  void rule_line(Cursor &cur) {
    const std::string name = cur.expect(Tok::word, "a function name").text;
    cur.expect(Tok::colon, "':'");
    const Lexeme lhs = cur.next();
    if (lhs.kind == Tok::quoted)
      cur.fail(lhs, "terminal '" + lhs.text + "' cannot be rewritten");
    if (lhs.kind != Tok::word)
      cur.fail(lhs, "expected a nonterminal, found " + describe(lhs));
    cur.expect(Tok::arrow, "'->'");
    Image image;
    if (cur.peek(1).kind == Tok::lbracket) {
      image = expression(cur);
    } else {
      CategorySequence seq;
      while (cur.peek().kind == Tok::word || cur.peek().kind == Tok::quoted) {
        const Lexeme &l = cur.next();
        seq.push_back(l.kind == Tok::quoted ? Category::terminal(l.text) : Category::nonterminal(l.text));
      }
      image = std::move(seq);
    }
    cur.expect(Tok::at, "'@'");
    const double p = parse_probability(cur);
    if (cur.peek().kind != Tok::end)
      cur.fail(cur.peek(), "unexpected " + describe(cur.peek()) + " after probability");
    def.add_case(name, Category::nonterminal(lhs.text), std::move(image), p);
  }
};

std::string format_double(double v) {
  char buf[64];
  for (int prec = 12; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v)
      break;
  }
  return buf;
}

} // namespace

GrammarDefinition parse_acfg(std::string_view text) {
  const auto lines = split_lines(text);
  AcfgParser p;
  std::vector<std::pair<int, std::vector<Lexeme>>> rules;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const int lineno = static_cast<int>(i) + 1;
    auto toks = lex(lines[i], lineno);
    if (toks.front().kind == Tok::end)
      continue;
    if (toks.size() > 1 && toks[1].kind == Tok::colon) {
      rules.emplace_back(lineno, std::move(toks));
      continue;
    }
    Cursor cur(std::move(toks), lineno);
    p.header_line(cur);
  }
  // dims and ops may be declared after the rules that use them
  for (auto &[lineno, toks] : rules) {
    Cursor cur(std::move(toks), lineno);
    p.rule_line(cur);
  }
  return std::move(p.def);
}

AbstractGrammar load_acfg(std::string_view text, AbstractGrammar::Options options) {
  return AbstractGrammar::compile(parse_acfg(text), options);
}

std::string serialize_acfg(const GrammarDefinition &def) {
  std::ostringstream os;
  for (const auto &[name, d] : def.dimensions)
    os << "dim " << name << ' ' << d << '\n';
  for (const auto &op : def.operations) {
    if (!op->flow())
      throw std::invalid_argument("operation " + op->name() + " has no flow to write out");
    os << "op " << op->name() << " :";
    for (int d : op->signature().argument_dims)
      os << ' ' << d;
    os << " -> " << op->signature().result_dim << " = " << to_string(*op->flow()) << '\n';
  }
  for (const auto &f : def.functions)
    for (const auto &c : f.cases) {
      os << f.name << ": " << c.lhs.payload << " ->";
      if (const auto *seq = std::get_if<CategorySequence>(&c.image))
        for (const auto &cat : *seq)
          os << ' ' << to_string(cat);
      else
        os << ' ' << to_string(std::get<CallExpression>(c.image));
      os << " @ " << format_double(c.probability) << '\n';
    }
  if (!def.start.empty()) {
    os << "start";
    for (const auto &s : def.start)
      os << ' ' << s.payload;
    os << '\n';
  }
  return os.str();
}

// ---------------------------------------------------------------------------

namespace {

struct WordAt {
  std::string text;
  int column;
};

std::vector<WordAt> words(const std::string &s, int offset) {
  std::vector<WordAt> out;
  std::size_t i = 0;
  while (i < s.size()) {
    if (s[i] == ' ' || s[i] == '\t') {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t')
      ++j;
    out.push_back({s.substr(i, j - i), offset + static_cast<int>(i) + 1});
    i = j;
  }
  return out;
}

} // namespace

MgDefinition parse_mg(std::string_view text) {
  MgDefinition def;
  const auto lines = split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const int lineno = static_cast<int>(i) + 1;
    std::string line = lines[i];
    if (auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    const auto ws = words(line, 0);
    if (ws.empty())
      continue;
    if (ws[0].text == "start" && line.find("::") == std::string::npos) {
      if (ws.size() < 2)
        throw GrammarParseError(lineno, ws[0].column, "start needs a category");
      for (std::size_t k = 1; k < ws.size(); ++k)
        def.start.push_back(ws[k].text);
      continue;
    }
    const auto sep = line.find("::");
    if (sep == std::string::npos)
      throw GrammarParseError(lineno, ws[0].column, "expected 'PHON :: FEATURES @ PROB'");
    const auto at = line.find('@', sep);
    const auto phon = words(line.substr(0, sep), 0);
    const auto feats = words(line.substr(sep + 2, at == std::string::npos ? std::string::npos : at - sep - 2),
                             static_cast<int>(sep) + 2);
    LexicalItem item;
    if (phon.empty())
      throw GrammarParseError(lineno, 1, "missing phonology (use <eps> for the empty word)");
    if (phon.size() > 1)
      throw GrammarParseError(lineno, phon[1].column, "phonology must be a single token or <eps>");
    if (phon[0].text != "<eps>")
      item.phon.push_back(phon[0].text);
    if (feats.empty())
      throw GrammarParseError(lineno, static_cast<int>(sep) + 3, "lexical item has no features");
    for (const auto &f : feats) {
      try {
        item.features.push_back(parse_feature(f.text));
      } catch (const std::invalid_argument &e) {
        throw GrammarParseError(lineno, f.column, e.what());
      }
    }
    if (at != std::string::npos) {
      const auto prob = words(line.substr(at + 1), static_cast<int>(at) + 1);
      if (prob.size() != 1)
        throw GrammarParseError(lineno, static_cast<int>(at) + 2, "expected one probability after '@'");
      char *end = nullptr;
      item.score = std::strtod(prob[0].text.c_str(), &end);
      if (*end != '\0')
        throw GrammarParseError(lineno, prob[0].column, "bad probability '" + prob[0].text + "'");
    }
    def.lexicon.push_back(std::move(item));
  }
  return def;
}

MinimalistGrammar load_mg(std::string_view text) {
  MgDefinition def = parse_mg(text);
  return MinimalistGrammar(std::move(def.lexicon), std::move(def.start));
}

std::string serialize_mg(const MgDefinition &def) {
  std::ostringstream os;
  for (const auto &item : def.lexicon)
    os << to_string(item) << " @ " << format_double(item.score) << '\n';
  if (!def.start.empty()) {
    os << "start";
    for (const auto &s : def.start)
      os << ' ' << s;
    os << '\n';
  }
  return os.str();
}

std::string read_text_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw std::runtime_error("cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

} // namespace agp

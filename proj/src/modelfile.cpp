#include "flm/modelfile.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <set>
#include <sstream>

namespace flm {

std::string format_diagnostic(const Diagnostic& d) {
  std::ostringstream os;
  os << d.location.line << ':' << d.location.column << ": "
     << (d.severity == Severity::Error ? "error" : "warning") << '[' << d.code
     << "]: " << d.message;
  return os.str();
}

std::string_view to_string(DeclKind kind) {
  switch (kind) {
    case DeclKind::Space: return "space";
    case DeclKind::Metric: return "metric";
    case DeclKind::Matrix: return "matrix";
    case DeclKind::Graph: return "graph";
    case DeclKind::Poly: return "poly";
    case DeclKind::State: return "state";
    case DeclKind::Flcm: return "flcm";
    case DeclKind::Flrm: return "flrm";
    case DeclKind::Relation: return "relation";
    case DeclKind::Activation: return "activation";
    case DeclKind::Experts: return "experts";
  }
  return "?";
}

Activation ActivationDecl::as_function() const {
  std::map<Term, Term> table(mapping.begin(), mapping.end());
  return [table = std::move(table)](Term t) {
    auto it = table.find(t);
    return it == table.end() ? t : it->second;
  };
}

ExpertCollection ModelBundle::expert_collection(const std::string& name) const {
  auto it = experts.find(name);
  if (it == experts.end())
    throw Error(ErrorCode::InvalidModel, "no expert collection named '" + name + "'");
  std::vector<ConceptGraph> gs;
  for (const auto& g : it->second) {
    auto gi = graphs.find(g);
    if (gi == graphs.end())
      throw Error(ErrorCode::InvalidModel, "no graph named '" + g + "'");
    gs.push_back(gi->second);
  }
  return ExpertCollection(std::move(gs));
}

std::string ModelBundle::summary() const {
  struct Row {
    std::size_t n;
    const char* one;
    const char* many;
  };
  const Row rows[] = {
      {spaces.size(), "space", "spaces"},
      {metrics.size(), "metric", "metrics"},
      {matrices.size(), "matrix", "matrices"},
      {graphs.size(), "graph", "graphs"},
      {polynomials.size(), "polynomial", "polynomials"},
      {states.size(), "state", "states"},
      {flcm_models.size(), "flcm model", "flcm models"},
      {flrm_models.size(), "flrm model", "flrm models"},
      {relations.size(), "relation", "relations"},
      {activations.size(), "activation", "activations"},
      {experts.size(), "expert collection", "expert collections"},
  };
  std::string out;
  for (const auto& r : rows) {
    if (r.n == 0) continue;
    if (!out.empty()) out += ", ";
    out += std::to_string(r.n) + " " + (r.n == 1 ? r.one : r.many);
  }
  return out.empty() ? "empty" : out;
}

namespace {

enum class Tok { Word, Punct, Arrow, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  SourceLocation loc;
};

struct ParseError {
  std::string code;
  std::string message;
  SourceLocation loc;
};

struct Statement {
  std::vector<Token> tokens;
  SourceLocation start;
  bool lexically_broken = false;
};

bool word_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_';
}

bool is_punct_char(char c) {
  return std::string_view(":;,()[]{}<=+-^>").find(c) != std::string_view::npos;
}

// A line break inside a statement acts as ';' unless the surrounding tokens
// make it redundant.
bool drops_following_break(const Token& t) {
  if (t.kind == Tok::Arrow) return true;
  return t.kind == Tok::Punct && std::string_view(";[({,:+<=").find(t.text[0]) !=
                                    std::string_view::npos;
}

bool drops_preceding_break(const Token& t) {
  return t.kind == Tok::Punct && std::string_view(";])}").find(t.text[0]) !=
                                     std::string_view::npos;
}

// Splits the text into statements. A statement starts on a line whose first
// character is neither blank nor '#', and continues over indented lines and
// over any lines inside an open bracket.
std::vector<Statement> lex(std::string_view text, std::vector<Diagnostic>& diags) {
  std::vector<Statement> out;
  std::vector<Token> raw;  // tokens of the current statement, breaks as ';'
  int depth = 0;
  bool in_statement = false;
  bool broken = false;
  SourceLocation start;

  auto flush = [&]() {
    if (!in_statement) return;
    Statement st;
    st.start = start;
    st.lexically_broken = broken;
    for (std::size_t i = 0; i < raw.size(); ++i) {
      const Token& t = raw[i];
      const bool is_break = t.kind == Tok::Punct && t.text == "\n";
      if (!is_break) {
        st.tokens.push_back(t);
        continue;
      }
      if (st.tokens.empty() || drops_following_break(st.tokens.back())) continue;
      if (i + 1 >= raw.size() || drops_preceding_break(raw[i + 1])) continue;
      if (raw[i + 1].kind == Tok::Punct && raw[i + 1].text == "\n") continue;
      Token semi = t;
      semi.text = ";";
      st.tokens.push_back(semi);
    }
    Token end;
    end.kind = Tok::End;
    end.loc = raw.empty() ? start : raw.back().loc;
    st.tokens.push_back(end);
    out.push_back(std::move(st));
    raw.clear();
    in_statement = false;
    broken = false;
    depth = 0;
  };

  std::size_t line = 1;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view l = text.substr(pos, eol - pos);
    if (!l.empty() && l.back() == '\r') l.remove_suffix(1);

    std::size_t first = 0;
    while (first < l.size() && (l[first] == ' ' || l[first] == '\t')) ++first;
    const bool blank = first == l.size() || l[first] == '#';
    if (!blank) {
      if (first == 0 && depth == 0) flush();
      if (!in_statement) {
        in_statement = true;
        start = {line, first + 1};
      }
      std::size_t i = first;
      while (i < l.size()) {
        const char c = l[i];
        const SourceLocation loc{line, i + 1};
        if (c == '#') break;
        if (c == ' ' || c == '\t') {
          ++i;
          continue;
        }
        Token t;
        t.loc = loc;
        if (word_char(c)) {
          std::size_t j = i;
          while (j < l.size() &&
                 (word_char(l[j]) ||
                  (l[j] == '-' && j > i && j + 1 < l.size() && word_char(l[j + 1]))))
            ++j;
          t.kind = Tok::Word;
          t.text = std::string(l.substr(i, j - i));
          i = j;
        } else if (c == '-' && i + 1 < l.size() && l[i + 1] == '>') {
          t.kind = Tok::Arrow;
          t.text = "->";
          i += 2;
        } else if (is_punct_char(c)) {
          t.kind = Tok::Punct;
          t.text = std::string(1, c);
          if (c == '(' || c == '[' || c == '{') ++depth;
          if ((c == ')' || c == ']' || c == '}') && depth > 0) --depth;
          ++i;
        } else {
          diags.push_back({Severity::Error, loc,
                           "unexpected character (code " +
                               std::to_string(static_cast<unsigned char>(c)) + ")",
                           "syntax"});
          broken = true;
          ++i;
          continue;
        }
        raw.push_back(std::move(t));
      }
      Token brk;
      brk.kind = Tok::Punct;
      brk.text = "\n";
      brk.loc = {line, l.size() + 1};
      raw.push_back(brk);
    }
    pos = eol + 1;
    ++line;
  }
  flush();
  return out;
}

std::optional<std::size_t> parse_count(std::string_view s) {
  std::size_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) return std::nullopt;
  return v;
}

constexpr std::size_t kMaxDim = 4096;

class StatementParser {
 public:
  StatementParser(const Statement& st, ModelBundle& bundle, std::vector<Diagnostic>& diags)
      : toks_(st.tokens), start_(st.start), b_(bundle), diags_(diags) {}

  void run() {
    const Token& head = peek();
    if (head.kind != Tok::Word) fail("syntax", "expected a declaration keyword", head.loc);
    const std::string kw = head.text;
    ++pos_;
    if (kw == "space") parse_space();
    else if (kw == "metric") parse_metric();
    else if (kw == "matrix") parse_matrix();
    else if (kw == "graph") parse_graph();
    else if (kw == "flcm") parse_flcm();
    else if (kw == "flrm") parse_flrm();
    else if (kw == "state") parse_state();
    else if (kw == "poly") parse_poly();
    else if (kw == "relation") parse_relation();
    else if (kw == "activation") parse_activation();
    else if (kw == "experts") parse_experts();
    else fail("unknown-statement", "unknown declaration '" + kw + "'", head.loc);
  }

  // Entry point for standalone row literals.
  LingMatrix row_literal(const SpacePtr& space) {
    LingMatrix m = read_row(space);
    if (peek().kind != Tok::End) fail("syntax", "trailing input after row literal", peek().loc);
    return m;
  }

 private:
  // ---- token helpers ----------------------------------------------------
  const Token& peek(std::size_t k = 0) const {
    return toks_[std::min(pos_ + k, toks_.size() - 1)];
  }
  static bool is(const Token& t, char c) {
    return t.kind == Tok::Punct && t.text.size() == 1 && t.text[0] == c;
  }
  static bool is_word(const Token& t, std::string_view w) {
    return t.kind == Tok::Word && t.text == w;
  }
  [[noreturn]] void fail(std::string code, std::string msg, SourceLocation loc) const {
    throw ParseError{std::move(code), std::move(msg), loc};
  }
  [[noreturn]] void fail_here(const std::string& expected) const {
    const Token& t = peek();
    std::string got = t.kind == Tok::End ? "end of statement" : "'" + t.text + "'";
    fail("syntax", "expected " + expected + ", found " + got, t.loc);
  }
  bool accept(char c) {
    if (!is(peek(), c)) return false;
    ++pos_;
    return true;
  }
  void expect(char c) {
    if (!accept(c)) fail_here(std::string("'") + c + "'");
  }
  bool accept_word(std::string_view w) {
    if (!is_word(peek(), w)) return false;
    ++pos_;
    return true;
  }
  void expect_word(std::string_view w) {
    if (!accept_word(w)) fail_here("'" + std::string(w) + "'");
  }
  const Token& read_word(const std::string& what) {
    if (peek().kind != Tok::Word) fail_here(what);
    return toks_[pos_++];
  }
  bool at_end() const { return peek().kind == Tok::End; }
  bool at_clause_end() const { return at_end() || is(peek(), ';'); }
  void skip_separators() {
    while (is(peek(), ';') || is(peek(), ',')) ++pos_;
  }

  // A term name, possibly with a sign glued to it ("+often", "-much").
  std::pair<std::string, SourceLocation> read_term_name() {
    const Token& t = peek();
    if ((is(t, '+') || is(t, '-')) && peek(1).kind == Tok::Word &&
        peek(1).loc.line == t.loc.line && peek(1).loc.column == t.loc.column + 1) {
      pos_ += 2;
      return {t.text + toks_[pos_ - 1].text, t.loc};
    }
    const Token& w = read_word("a term");
    return {w.text, w.loc};
  }

  Term read_term(const LinguisticSpace& s) {
    auto [name, loc] = read_term_name();
    if (auto t = s.find(name)) return *t;
    fail("unknown-term", "unknown term '" + name + "' in space '" + s.name() + "'", loc);
  }

  std::vector<std::string> read_name_list() {
    std::vector<std::string> out;
    while (peek().kind == Tok::Word) {
      out.push_back(toks_[pos_++].text);
      accept(',');
    }
    if (out.empty()) fail_here("a name list");
    return out;
  }

  // ---- references and registration ---------------------------------------
  SpacePtr space_ref() {
    const Token& t = read_word("a space name");
    auto it = b_.spaces.find(t.text);
    if (it == b_.spaces.end())
      fail("unresolved-reference", "no space named '" + t.text + "'", t.loc);
    return it->second;
  }

  template <class Map, class Value>
  void add(Map& map, DeclKind kind, const Token& name, Value&& v) {
    if (map.count(name.text))
      fail("duplicate-name",
           std::string(to_string(kind)) + " '" + name.text + "' is already declared",
           name.loc);
    map.emplace(name.text, std::forward<Value>(v));
    b_.order.emplace_back(kind, name.text);
  }

  // Runs a library constructor and turns its failures into a diagnostic.
  template <class F>
  auto guarded(F&& f, SourceLocation loc) -> decltype(f()) {
    try {
      return f();
    } catch (const Error& e) {
      fail(std::string(to_string(e.code())), e.what(), loc);
    }
  }

  // ---- literals ----------------------------------------------------------
  std::optional<std::pair<std::size_t, std::size_t>> accept_shape() {
    const Token& t = peek();
    if (t.kind != Tok::Word) return std::nullopt;
    auto x = t.text.find('x');
    if (x == std::string::npos || x == 0 || x + 1 >= t.text.size()) return std::nullopt;
    auto r = parse_count(std::string_view(t.text).substr(0, x));
    auto c = parse_count(std::string_view(t.text).substr(x + 1));
    if (!r || !c) return std::nullopt;
    if (*r == 0 || *c == 0 || *r > kMaxDim || *c > kMaxDim)
      fail("shape-mismatch", "matrix shape '" + t.text + "' is out of range", t.loc);
    ++pos_;
    return std::pair{*r, *c};
  }

  LingMatrix read_matrix(const SpacePtr& space,
                         std::optional<std::pair<std::size_t, std::size_t>> shape) {
    const SourceLocation open = peek().loc;
    expect('[');
    std::vector<std::vector<Term>> rows;
    std::vector<SourceLocation> row_locs;
    std::vector<Term> cur;
    SourceLocation cur_loc = peek().loc;
    auto finish_row = [&]() {
      if (cur.empty()) return;
      rows.push_back(std::move(cur));
      row_locs.push_back(cur_loc);
      cur.clear();
    };
    while (true) {
      if (accept(']')) break;
      if (at_end()) fail("syntax", "unterminated matrix literal", open);
      if (accept(';')) {
        finish_row();
        cur_loc = peek().loc;
        continue;
      }
      if (accept(',')) continue;
      if (cur.empty()) cur_loc = peek().loc;
      cur.push_back(read_term(*space));
      if (cur.size() > kMaxDim) fail("shape-mismatch", "matrix row too long", cur_loc);
    }
    finish_row();
    if (rows.empty()) fail("shape-mismatch", "empty matrix literal", open);
    const std::size_t cols = shape ? shape->second : rows.front().size();
    for (std::size_t r = 0; r < rows.size(); ++r)
      if (rows[r].size() != cols)
        fail("shape-mismatch",
             "row " + std::to_string(r + 1) + " has " + std::to_string(rows[r].size()) +
                 " entries, expected " + std::to_string(cols),
             row_locs[r]);
    if (shape && rows.size() != shape->first)
      fail("shape-mismatch",
           "matrix has " + std::to_string(rows.size()) + " rows, expected " +
               std::to_string(shape->first),
           open);
    std::vector<Term> data;
    for (auto& r : rows) data.insert(data.end(), r.begin(), r.end());
    return LingMatrix(space, rows.size(), cols, std::move(data));
  }

  LingMatrix read_row(const SpacePtr& space) {
    const SourceLocation open = peek().loc;
    expect('(');
    std::vector<Term> data;
    while (!accept(')')) {
      if (at_end()) fail("syntax", "unterminated row literal", open);
      if (accept(',')) continue;
      data.push_back(read_term(*space));
      if (data.size() > kMaxDim) fail("shape-mismatch", "row literal too long", open);
    }
    if (data.empty()) fail("shape-mismatch", "empty row literal", open);
    const std::size_t n = data.size();
    return LingMatrix(space, 1, n, std::move(data));
  }

  // `matrix NAME` or `matrix over SPACE [RxC] [ ... ]`.
  std::pair<LingMatrix, std::optional<std::string>> read_matrix_clause() {
    if (accept_word("over")) {
      SpacePtr s = space_ref();
      auto shape = accept_shape();
      return {read_matrix(s, shape), std::nullopt};
    }
    const Token& name = read_word("a matrix name or 'over'");
    auto it = b_.matrices.find(name.text);
    if (it == b_.matrices.end())
      fail("unresolved-reference", "no matrix named '" + name.text + "'", name.loc);
    return {it->second, name.text};
  }

  OperatorPair read_pair() {
    const Token& t = read_word("an operator pair");
    if (auto p = parse_pair(t.text)) return *p;
    fail("syntax", "unknown operator pair '" + t.text + "'", t.loc);
  }

  void end_clause() {
    if (!at_clause_end()) fail_here("end of clause");
  }

  // ---- statements --------------------------------------------------------
  void parse_space() {
    const Token& name = read_word("a space name");
    expect(':');
    SpaceDecl d;
    d.name = name.text;
    const Token& kind = read_word("'chain', 'signed-chain' or 'poset'");
    auto read_chain = [&]() {
      std::vector<std::string> out{read_term_name().first};
      while (accept('<')) out.push_back(read_term_name().first);
      return out;
    };
    if (kind.text == "chain") {
      d.kind = OrderKind::Chain;
      d.chain = read_chain();
    } else if (kind.text == "signed-chain") {
      d.kind = OrderKind::SignedChain;
      d.chain = read_chain();
    } else if (kind.text == "poset") {
      d.kind = OrderKind::Poset;
      expect('{');
      auto note = [&](const std::string& t) {
        if (t != kZeroName && std::find(d.terms.begin(), d.terms.end(), t) == d.terms.end())
          d.terms.push_back(t);
      };
      while (!accept('}')) {
        if (at_end()) fail("syntax", "unterminated poset", kind.loc);
        if (accept(',') || accept(';')) continue;
        std::string prev = read_term_name().first;
        note(prev);
        while (accept('<')) {
          std::string next = read_term_name().first;
          note(next);
          d.covers.emplace_back(prev, next);
          prev = next;
        }
      }
    } else {
      fail("syntax", "unknown space kind '" + kind.text + "'", kind.loc);
    }
    end_clause();
    while (!at_end()) {
      skip_separators();
      if (at_end()) break;
      const Token& opt = read_word("a space option");
      if (opt.text == "greatest") {
        d.greatest = read_term_name().first;
        if (d.kind == OrderKind::Poset &&
            std::find(d.terms.begin(), d.terms.end(), *d.greatest) == d.terms.end())
          d.terms.push_back(*d.greatest);
      } else if (opt.text == "alias") {
        std::string alias = read_term_name().first;
        expect('=');
        d.aliases.emplace_back(alias, read_term_name().first);
      } else if (opt.text == "overlap-terms") {
        const bool braced = accept('{');
        while (true) {
          if (braced && accept('}')) break;
          if (!braced && at_clause_end()) break;
          if (at_end()) fail("syntax", "unterminated overlap-terms", opt.loc);
          if (accept(',')) continue;
          d.overlap_terms.push_back(read_term_name().first);
        }
      } else {
        fail("syntax", "unknown space option '" + opt.text + "'", opt.loc);
      }
      end_clause();
    }
    SpacePtr s = guarded([&] { return LinguisticSpace::build(d); }, name.loc);
    add(b_.spaces, DeclKind::Space, name, std::move(s));
  }

  void parse_metric() {
    const Token& name = read_word("a metric name");
    expect_word("over");
    SpacePtr src = space_ref();
    expect_word("dist");
    SpacePtr dst = space_ref();
    const bool partial = accept_word("partial");
    expect(':');
    std::vector<MetricTable::Entry> entries;
    while (true) {
      skip_separators();
      if (at_end()) break;
      expect('(');
      Term a = read_term(*src);
      expect(',');
      Term b = read_term(*src);
      expect(')');
      expect('=');
      Term d = read_term(*dst);
      entries.push_back({a, b, d});
    }
    MetricTable table = guarded(
        [&] { return MetricTable(src, dst, std::move(entries), partial); }, name.loc);
    for (const auto& issue : validate_metric(table))
      diags_.push_back({Severity::Warning, name.loc, issue.message,
                        "metric-" + std::string(to_string(issue.issue))});
    add(b_.metrics, DeclKind::Metric, name, std::move(table));
  }

  void parse_matrix() {
    const Token& name = read_word("a matrix name");
    expect_word("over");
    SpacePtr s = space_ref();
    expect(':');
    auto shape = accept_shape();
    LingMatrix m = read_matrix(s, shape);
    if (!at_end()) fail_here("end of statement");
    add(b_.matrices, DeclKind::Matrix, name, std::move(m));
  }

  std::size_t concept_index(std::vector<std::string>& concepts, const std::string& c) {
    auto it = std::find(concepts.begin(), concepts.end(), c);
    if (it != concepts.end()) return static_cast<std::size_t>(it - concepts.begin());
    concepts.push_back(c);
    return concepts.size() - 1;
  }

  // Parses `A -label-> B` (directed) or `A -label- B` (undirected).
  std::tuple<std::string, Term, std::string, bool> read_edge(const LinguisticSpace& s) {
    const Token& from = read_word("a node name");
    expect('-');
    Term label = read_term(s);
    bool directed = true;
    if (peek().kind == Tok::Arrow) {
      ++pos_;
    } else if (accept('-')) {
      directed = false;
    } else {
      fail_here("'->' or '-'");
    }
    const Token& to = read_word("a node name");
    return {from.text, label, to.text, directed};
  }

  void parse_graph() {
    const Token& name = read_word("a graph name");
    expect_word("over");
    SpacePtr s = space_ref();
    expect(':');
    std::vector<std::string> concepts;
    std::vector<Edge> edges;
    std::optional<bool> directed;
    while (true) {
      skip_separators();
      if (at_end()) break;
      if (accept_word("nodes")) {
        for (const auto& c : read_name_list()) concept_index(concepts, c);
        continue;
      }
      const SourceLocation loc = peek().loc;
      auto [from, label, to, dir] = read_edge(*s);
      if (directed && *directed != dir)
        fail("invalid-graph", "graph mixes directed and undirected edges", loc);
      directed = dir;
      const std::size_t i = concept_index(concepts, from);
      const std::size_t j = concept_index(concepts, to);
      edges.push_back({i, j, label});
    }
    if (concepts.size() > kMaxDim) fail("invalid-graph", "too many nodes", name.loc);
    ConceptGraph g = guarded(
        [&] {
          ConceptGraph out(s, concepts, edges, directed.value_or(true));
          graph_to_matrix(out);
          return out;
        },
        name.loc);
    add(b_.graphs, DeclKind::Graph, name, std::move(g));
  }

  void parse_flcm() {
    const Token& name = read_word("a model name");
    expect(':');
    std::optional<std::vector<std::string>> concepts;
    std::optional<std::pair<LingMatrix, std::optional<std::string>>> matrix;
    OperatorPair pair = OperatorPair::max_min();
    while (true) {
      skip_separators();
      if (at_end()) break;
      const Token& key = read_word("'concepts', 'matrix' or 'pair'");
      if (key.text == "concepts") concepts = read_name_list();
      else if (key.text == "matrix") matrix = read_matrix_clause();
      else if (key.text == "pair") pair = read_pair();
      else fail("syntax", "unknown flcm clause '" + key.text + "'", key.loc);
      end_clause();
    }
    if (!concepts) fail("invalid-model", "flcm model needs 'concepts'", name.loc);
    if (!matrix) fail("invalid-model", "flcm model needs 'matrix'", name.loc);
    FlcmDecl decl{FLCMModel{*concepts, matrix->first, pair}, matrix->second};
    guarded([&] { decl.model.validate(); }, name.loc);
    add(b_.flcm_models, DeclKind::Flcm, name, std::move(decl));
  }

  void parse_flrm() {
    const Token& name = read_word("a model name");
    expect(':');
    std::optional<std::vector<std::string>> domain, range;
    std::optional<std::pair<LingMatrix, std::optional<std::string>>> matrix;
    OperatorPair pair = OperatorPair::max_min();
    while (true) {
      skip_separators();
      if (at_end()) break;
      const Token& key = read_word("'domain', 'range', 'matrix' or 'pair'");
      if (key.text == "domain") domain = read_name_list();
      else if (key.text == "range") range = read_name_list();
      else if (key.text == "matrix") matrix = read_matrix_clause();
      else if (key.text == "pair") pair = read_pair();
      else fail("syntax", "unknown flrm clause '" + key.text + "'", key.loc);
      end_clause();
    }
    if (!domain || !range || !matrix)
      fail("invalid-model", "flrm model needs 'domain', 'range' and 'matrix'", name.loc);
    FlrmDecl decl{FLRMModel{*domain, *range, matrix->first, pair}, matrix->second};
    guarded([&] { decl.model.validate(); }, name.loc);
    add(b_.flrm_models, DeclKind::Flrm, name, std::move(decl));
  }

  void parse_state() {
    const Token& name = read_word("a state name");
    expect_word("over");
    SpacePtr s = space_ref();
    expect(':');
    LingMatrix values = read_row(s);
    if (!at_end()) fail_here("end of statement");
    add(b_.states, DeclKind::State, name, StateVector::initial(std::move(values)));
  }

  void parse_poly() {
    const Token& name = read_word("a polynomial name");
    expect_word("over");
    SpacePtr s = space_ref();
    expect(':');
    std::optional<LingPolynomial> poly;
    std::set<std::size_t> seen;
    while (true) {
      const SourceLocation loc = peek().loc;
      LingMatrix coeff = is(peek(), '(')   ? read_row(s)
                         : is(peek(), '[') ? read_matrix(s, std::nullopt)
                                           : LingMatrix(s, 1, 1, {read_term(*s)});
      const bool scalar = coeff.rows() == 1 && coeff.cols() == 1 &&
                          !is(toks_[pos_ - 1], ')') && !is(toks_[pos_ - 1], ']');
      std::size_t exponent = 0;
      if (accept_word("x")) {
        exponent = 1;
        if (accept('^')) {
          const Token& e = read_word("an exponent");
          auto v = parse_count(e.text);
          if (!v) fail("syntax", "bad exponent '" + e.text + "'", e.loc);
          exponent = *v;
        }
      }
      CoeffShape shape{scalar, coeff.rows(), coeff.cols()};
      if (!poly) poly.emplace(s, shape);
      if (poly->shape() != shape)
        fail("shape-mismatch", "coefficients of one polynomial must share a shape", loc);
      if (!seen.insert(exponent).second)
        fail("invalid-polynomial", "exponent " + std::to_string(exponent) + " given twice",
             loc);
      poly->set(exponent, coeff);
      if (!accept('+')) break;
    }
    if (!at_end()) fail_here("'+' or end of statement");
    add(b_.polynomials, DeclKind::Poly, name, std::move(*poly));
  }

  void parse_relation() {
    const Token& name = read_word("a relation name");
    expect_word("over");
    SpacePtr s = space_ref();
    expect(':');
    std::optional<std::vector<std::string>> left, right;
    std::vector<std::tuple<std::string, std::string, Term>> links;
    while (true) {
      skip_separators();
      if (at_end()) break;
      if (accept_word("left")) {
        left = read_name_list();
      } else if (accept_word("right")) {
        right = read_name_list();
      } else {
        const SourceLocation loc = peek().loc;
        auto [from, m, to, directed] = read_edge(*s);
        if (!directed) fail("syntax", "relation links are written 'x -m-> y'", loc);
        links.emplace_back(from, to, m);
      }
    }
    if (!left || !right) fail("invalid-model", "relation needs 'left' and 'right'", name.loc);
    RelationDecl decl = guarded(
        [&] {
          RelationDecl d{s, BipartiteRelation::from_labels(*left, *right, links)};
          relation_to_matrix(d.relation, s);
          return d;
        },
        name.loc);
    add(b_.relations, DeclKind::Relation, name, std::move(decl));
  }

  void parse_activation() {
    const Token& name = read_word("an activation name");
    expect_word("over");
    SpacePtr s = space_ref();
    expect(':');
    ActivationDecl decl{s, {}};
    std::set<Term> seen;
    while (true) {
      skip_separators();
      if (at_end()) break;
      const SourceLocation loc = peek().loc;
      Term from = read_term(*s);
      if (peek().kind != Tok::Arrow) fail_here("'->'");
      ++pos_;
      Term to = read_term(*s);
      if (!seen.insert(from).second)
        fail("invalid-model", "term '" + s->name_of(from) + "' mapped twice", loc);
      decl.mapping.emplace_back(from, to);
    }
    add(b_.activations, DeclKind::Activation, name, std::move(decl));
  }

  void parse_experts() {
    const Token& name = read_word("a collection name");
    expect(':');
    std::vector<std::string> graphs;
    while (true) {
      skip_separators();
      if (at_end()) break;
      const Token& g = read_word("a graph name");
      if (!b_.graphs.count(g.text))
        fail("unresolved-reference", "no graph named '" + g.text + "'", g.loc);
      graphs.push_back(g.text);
    }
    if (graphs.empty()) fail("empty-collection", "expert collection has no graphs", name.loc);
    guarded(
        [&] {
          std::vector<ConceptGraph> gs;
          for (const auto& g : graphs) gs.push_back(b_.graphs.at(g));
          ExpertCollection check(std::move(gs));
        },
        name.loc);
    add(b_.experts, DeclKind::Experts, name, std::move(graphs));
  }

  const std::vector<Token>& toks_;
  std::size_t pos_ = 0;
  SourceLocation start_;
  ModelBundle& b_;
  std::vector<Diagnostic>& diags_;
};

}  // namespace

ParseResult parse_model_file(std::string_view text) {
  ParseResult result;
  ModelBundle bundle;
  for (const auto& st : lex(text, result.diagnostics)) {
    if (st.lexically_broken) continue;
    try {
      StatementParser(st, bundle, result.diagnostics).run();
    } catch (const ParseError& e) {
      result.diagnostics.push_back({Severity::Error, e.loc, e.message, e.code});
    } catch (const Error& e) {
      result.diagnostics.push_back(
          {Severity::Error, st.start, e.what(), std::string(to_string(e.code()))});
    } catch (const std::exception& e) {
      result.diagnostics.push_back({Severity::Error, st.start, e.what(), "internal"});
    }
  }
  const bool failed =
      std::any_of(result.diagnostics.begin(), result.diagnostics.end(),
                  [](const Diagnostic& d) { return d.severity == Severity::Error; });
  if (!failed) result.bundle = std::move(bundle);
  return result;
}

LingMatrix parse_row_literal(const SpacePtr& space, std::string_view text) {
  std::vector<Diagnostic> diags;
  auto statements = lex(text, diags);
  if (!diags.empty() || statements.size() != 1)
    throw Error(ErrorCode::InvalidModel, "malformed row literal '" + std::string(text) + "'");
  ModelBundle scratch;
  try {
    return StatementParser(statements.front(), scratch, diags).row_literal(space);
  } catch (const ParseError& e) {
    throw Error(ErrorCode::InvalidModel, e.message);
  }
}

}  // namespace flm

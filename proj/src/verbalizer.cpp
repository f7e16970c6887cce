#include "graphlang/verbalizer.hpp"

#include <algorithm>
#include <set>

namespace graphlang {
namespace {

constexpr std::string_view kNodeList = "node_list";
constexpr std::string_view kEdgeList = "edge_list";
constexpr std::string_view kEntityList = "entity_list";
constexpr std::string_view kTripleList = "triple_list";
constexpr std::string_view kIndent = "    ";

bool is_ws(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }
bool is_quote(char c) { return c == '\'' || c == '"'; }
bool is_ident_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
}

bool is_bare_property_owner(std::string_view name) {
  return !name.empty() && std::all_of(name.begin(), name.end(), is_ident_char);
}

// Strips stray quotes and backslash escapes from an endpoint recovered out of
// a malformed edge, e.g. `'B'z\'` -> `B'z`.
std::string clean_fragment(std::string_view raw) {
  std::string t = trim(raw);
  if (t.size() >= 2 && t[t.size() - 2] == '\\' && is_quote(t.back())) {
    t.resize(t.size() - 2);
  } else if (!t.empty() && is_quote(t.back())) {
    t.pop_back();
  }
  if (!t.empty() && is_quote(t.front())) t.erase(0, 1);
  std::string out;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] == '\\' && i + 1 < t.size()) {
      ++i;
      out += t[i] == 'n' ? '\n' : t[i] == 'r' ? '\r' : t[i];
    } else {
      out += t[i];
    }
  }
  return trim(out);
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {
    line_starts_.push_back(0);
    for (std::size_t i = 0; i < text_.size(); ++i) {
      if (text_[i] == '\n') line_starts_.push_back(i + 1);
    }
  }

  ParseResult run() {
    std::size_t start = find_skeleton();
    if (start == std::string_view::npos) {
      throw UnparseableGraph({1, 1}, "no Graph[...] { ... } skeleton found");
    }
    pos_ = start + 5;
    skip_ws();
    ++pos_;  // '['
    parse_header();
    skip_ws();
    if (!consume('{')) throw UnparseableGraph(position(pos_), "expected '{' after graph header");
    parse_body();
    return finish();
  }

  // Single edge token, used for edit-log payloads.
  std::optional<ParsedEdge> run_edge() {
    skip_ws();
    if (peek() != '(') return std::nullopt;
    bare_endpoint_ = false;
    auto edge = parse_edge_strict();
    if (!edge) return std::nullopt;
    parse_attribute_groups(*edge);
    skip_ws();
    if (!at_end()) return std::nullopt;
    return ParsedEdge{*edge, bare_endpoint_ ? GraphKind::structure : GraphKind::knowledge};
  }

 private:
  struct Located {
    std::size_t offset;
  };

  std::string_view text_;
  std::size_t pos_ = 0;
  std::vector<std::size_t> line_starts_;
  std::vector<ParseDiagnostic> diagnostics_;
  std::optional<std::string> name_;
  std::optional<GraphKind> kind_;
  std::vector<NodeId> declared_;
  std::vector<std::pair<Edge, std::size_t>> edges_;
  std::vector<std::pair<NodeProperty, std::size_t>> properties_;
  bool bare_endpoint_ = false;

  bool at_end() const { return pos_ >= text_.size(); }
  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
  }
  bool consume(char c) {
    if (!at_end() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  bool consume_word(std::string_view w) {
    if (text_.substr(pos_).starts_with(w)) {
      pos_ += w.size();
      return true;
    }
    return false;
  }
  void skip_ws() {
    while (!at_end() && is_ws(text_[pos_])) ++pos_;
  }
  void skip_inline_ws() {
    while (!at_end() && (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\r')) ++pos_;
  }
  std::string read_identifier() {
    std::size_t b = pos_;
    while (!at_end() && is_ident_char(text_[pos_])) ++pos_;
    return std::string(text_.substr(b, pos_ - b));
  }
  // Reads up to (not including) the first char in `stops`, or end of input.
  std::string_view read_until(std::string_view stops) {
    std::size_t b = pos_;
    while (!at_end() && stops.find(text_[pos_]) == std::string_view::npos) ++pos_;
    return text_.substr(b, pos_ - b);
  }

  SourcePosition position(std::size_t offset) const {
    if (!text_.empty()) offset = std::min(offset, text_.size() - 1);
    auto it = std::upper_bound(line_starts_.begin(), line_starts_.end(), offset);
    std::size_t line = static_cast<std::size_t>(it - line_starts_.begin());
    return {line, offset - line_starts_[line - 1] + 1};
  }

  void note(std::size_t offset, std::string message, bool recovered) {
    diagnostics_.push_back({position(offset), std::move(message), recovered});
  }

  std::size_t find_skeleton() const {
    std::size_t at = 0;
    while ((at = text_.find("Graph", at)) != std::string_view::npos) {
      std::size_t i = at + 5;
      while (i < text_.size() && is_ws(text_[i])) ++i;
      if (i < text_.size() && text_[i] == '[') return at;
      ++at;
    }
    return std::string_view::npos;
  }

  // Scans a quoted string starting at the current quote character. A quote
  // only terminates the string when the next significant character is one of
  // `closers` (or end of input); otherwise it is kept as an interior
  // apostrophe. Raw newlines inside a string are not allowed. On failure the
  // cursor is restored.
  std::optional<std::string> scan_quoted(std::string_view closers) {
    const std::size_t save = pos_;
    const char q = text_[pos_++];
    std::string out;
    std::vector<std::size_t> interior;
    while (!at_end()) {
      char c = text_[pos_];
      if (c == '\\' && pos_ + 1 < text_.size()) {
        char n = text_[pos_ + 1];
        out += n == 'n' ? '\n' : n == 'r' ? '\r' : n;
        pos_ += 2;
        continue;
      }
      if (c == '\n') break;
      if (c == q) {
        std::size_t k = pos_ + 1;
        while (k < text_.size() && (text_[k] == ' ' || text_[k] == '\t' || text_[k] == '\r')) ++k;
        bool closes = k >= text_.size();
        if (!closes && text_[k] == '\n') {
          if (closers.find('\n') != std::string_view::npos) {
            closes = true;
          } else {
            while (k < text_.size() && is_ws(text_[k])) ++k;
          }
        }
        if (!closes) closes = k >= text_.size() || closers.find(text_[k]) != std::string_view::npos;
        if (closes) {
          ++pos_;
          for (auto off : interior) note(off, "unescaped apostrophe kept inside name", false);
          return out;
        }
        interior.push_back(pos_);
      }
      out += c;
      ++pos_;
    }
    pos_ = save;
    return std::nullopt;
  }

  void parse_header() {
    while (true) {
      skip_ws();
      if (at_end()) throw UnparseableGraph(position(pos_), "unterminated graph header");
      if (consume(']')) return;
      std::size_t at = pos_;
      std::string key = read_identifier();
      skip_ws();
      if (!consume('=')) {
        if (key.empty()) {
          note(at, "unexpected character in graph header", true);
          ++pos_;
        }
        continue;
      }
      skip_ws();
      std::optional<std::string> value;
      if (is_quote(peek())) value = scan_quoted(",]");
      if (!value) value = clean_fragment(read_until(",]\n"));
      if (key == "name") name_ = *value;
      skip_ws();
      consume(',');
    }
  }

  void parse_body() {
    while (true) {
      while (!at_end() && (is_ws(text_[pos_]) || text_[pos_] == ';')) ++pos_;
      if (at_end()) throw UnparseableGraph(position(text_.size()), "missing closing '}'");
      if (consume('}')) return;
      const std::size_t stmt = pos_;
      if (try_list_statement()) continue;
      pos_ = stmt;
      if (try_property_statement()) continue;
      pos_ = stmt;
      note(stmt, "ignored unrecognized statement", true);
      read_until(";\n}");
      consume(';');
    }
  }

  void expect_semicolon(const char* what) {
    std::size_t after = pos_;
    skip_inline_ws();
    if (consume(';')) return;
    note(after, std::string("missing ';' after ") + what, true);
  }

  bool try_list_statement() {
    std::string kw = read_identifier();
    bool nodes = kw == kNodeList || kw == kEntityList;
    bool edges = kw == kEdgeList || kw == kTripleList;
    if (!nodes && !edges) return false;
    skip_ws();
    if (!consume('=')) return false;
    if (!kind_) {
      kind_ = (kw == kNodeList || kw == kEdgeList) ? GraphKind::structure : GraphKind::knowledge;
    }
    skip_ws();
    if (!consume('[')) {
      note(pos_, "expected '[' after " + kw, true);
      read_until(";\n}");
      consume(';');
      return true;
    }
    if (nodes) {
      parse_node_items();
    } else {
      parse_edge_items();
    }
    expect_semicolon("list");
    return true;
  }

  void parse_node_items() {
    while (true) {
      skip_ws();
      if (at_end() || peek() == '}') {
        note(pos_, "unterminated list", true);
        return;
      }
      if (consume(']')) return;
      if (consume(',')) continue;
      std::size_t at = pos_;
      std::optional<std::string> name;
      if (is_quote(peek())) name = scan_quoted(",]");
      if (!name) {
        bool quoted = is_quote(peek());
        name = quoted ? clean_fragment(read_until(",]\n}")) : trim(read_until(",]\n}"));
        if (quoted) note(at, "unterminated quoted name repaired", true);
      }
      if (name->empty()) {
        note(at, "empty node name dropped", true);
      } else {
        declared_.push_back(*name);
      }
      skip_ws();
      if (consume(',') || peek() == ']') continue;
      if (peek() == '}' || at_end()) continue;
      note(pos_, "unexpected text in list skipped", true);
      read_until(",]}");
    }
  }

  void parse_edge_items() {
    while (true) {
      skip_ws();
      if (at_end() || peek() == '}') {
        note(pos_, "unterminated list", true);
        return;
      }
      if (consume(']')) return;
      if (consume(',')) continue;
      std::size_t at = pos_;
      if (peek() != '(') {
        note(at, "expected '(' to start an edge", true);
        ++pos_;
        read_until("(]}");
        continue;
      }
      auto edge = parse_edge_strict();
      if (!edge) {
        edge = parse_edge_fallback();
        if (edge) note(at, "malformed edge repaired", true);
      }
      if (!edge) {
        note(at, "malformed edge dropped", true);
        ++pos_;
        read_until("(]}");
        continue;
      }
      parse_attribute_groups(*edge);
      edges_.emplace_back(std::move(*edge), at);
      skip_ws();
      if (consume(',') || peek() == ']' || peek() == '}' || at_end()) continue;
      note(pos_, "unexpected text in edge list skipped", true);
      read_until("(]}");
    }
  }

  std::optional<std::string> parse_endpoint(std::string_view closers) {
    if (is_quote(peek())) return scan_quoted(closers);
    std::size_t b = pos_;
    while (!at_end()) {
      char c = text_[pos_];
      if (is_ws(c) || c == '(' || c == ')' || c == '[' || c == ']' || c == ',' || is_quote(c)) break;
      if (c == '-' && peek(1) == '>') break;
      if (c == '<' && peek(1) == '-') break;
      ++pos_;
    }
    if (pos_ == b) return std::nullopt;
    bare_endpoint_ = true;
    return std::string(text_.substr(b, pos_ - b));
  }

  std::optional<Edge> parse_edge_strict() {
    const std::size_t save = pos_;
    auto fail = [&]() -> std::optional<Edge> {
      pos_ = save;
      return std::nullopt;
    };
    consume('(');
    skip_ws();
    Edge e;
    auto src = parse_endpoint("-<");
    if (!src) return fail();
    skip_ws();
    if (consume_word("<->")) {
      e.directed = false;
    } else if (consume_word("->")) {
      e.directed = true;
    } else {
      return fail();
    }
    skip_ws();
    auto dst = parse_endpoint(")");
    if (!dst) return fail();
    skip_ws();
    if (!consume(')')) return fail();
    e.source = std::move(*src);
    e.target = std::move(*dst);
    return e;
  }

  // Takes the span up to the first ')' that is followed by an attribute group
  // or list separator and splits it at the arrow.
  std::optional<Edge> parse_edge_fallback() {
    std::size_t close = std::string_view::npos;
    for (std::size_t j = pos_ + 1; j < text_.size() && text_[j] != '\n'; ++j) {
      if (text_[j] != ')') continue;
      std::size_t k = j + 1;
      while (k < text_.size() && (text_[k] == ' ' || text_[k] == '\t' || text_[k] == '\r')) ++k;
      if (k >= text_.size() || std::string_view("[,];\n}").find(text_[k]) != std::string_view::npos) {
        close = j;
        break;
      }
    }
    if (close == std::string_view::npos) return std::nullopt;
    std::string_view span = text_.substr(pos_ + 1, close - pos_ - 1);
    Edge e;
    std::size_t arrow = span.find("<->");
    std::size_t len = 3;
    if (arrow == std::string_view::npos) {
      arrow = span.find("->");
      len = 2;
      e.directed = true;
    }
    if (arrow == std::string_view::npos) return std::nullopt;
    e.source = clean_fragment(span.substr(0, arrow));
    e.target = clean_fragment(span.substr(arrow + len));
    if (e.source.empty() || e.target.empty()) return std::nullopt;
    pos_ = close + 1;
    return e;
  }

  void parse_attribute_groups(Edge& edge) {
    while (true) {
      std::size_t save = pos_;
      skip_inline_ws();
      if (!consume('[')) {
        pos_ = save;
        return;
      }
      while (true) {
        skip_ws();
        if (at_end()) return;
        if (consume(']')) break;
        std::size_t at = pos_;
        std::string key = read_identifier();
        skip_ws();
        if (key.empty() || !consume('=')) {
          note(at, "malformed edge attribute skipped", true);
          read_until("]\n");
          consume(']');
          break;
        }
        skip_ws();
        std::optional<std::string> value;
        if (is_quote(peek())) value = scan_quoted(",]");
        if (!value) value = clean_fragment(read_until(",]\n"));
        if (key == "relation") {
          edge.relation = *value;
        } else if (key == "weight") {
          if (auto w = Rational::parse(trim(*value))) {
            edge.weight = *w;
          } else {
            note(at, "invalid weight '" + *value + "' dropped", true);
          }
        } else {
          note(at, "unsupported edge attribute '" + key + "' ignored", false);
        }
        skip_ws();
        if (consume(',')) continue;
        if (consume(']')) break;
        note(pos_, "malformed edge attribute group", true);
        read_until("]\n");
        consume(']');
        break;
      }
    }
  }

  bool try_property_statement() {
    const std::size_t at = pos_;
    std::optional<std::string> owner;
    if (is_quote(peek())) {
      owner = scan_quoted(".");
    } else {
      std::size_t b = pos_;
      while (!at_end() && std::string_view(" \t\r\n.=;{}[]()'\"").find(text_[pos_]) ==
                              std::string_view::npos) {
        ++pos_;
      }
      if (pos_ > b) owner = std::string(text_.substr(b, pos_ - b));
    }
    if (!owner || !consume('.')) return false;
    std::string key = read_identifier();
    if (key.empty()) return false;
    skip_inline_ws();
    if (!consume('=')) return false;
    skip_inline_ws();
    std::optional<std::string> value;
    if (is_quote(peek())) {
      std::size_t vat = pos_;
      value = scan_quoted(";}\n");
      if (value) {
        expect_semicolon("property");
      } else {
        value = clean_fragment(read_until("\n"));
        if (!value->empty() && value->back() == ';') value->pop_back();
        note(vat, "unterminated property value repaired", true);
      }
    } else {
      std::string raw = trim(read_until("\n"));
      if (!raw.empty() && raw.back() == ';') raw.pop_back();
      value = trim(raw);
    }
    properties_.emplace_back(NodeProperty{trim(*owner), key, *value}, at);
    return true;
  }

  ParseResult finish() {
    Graph g;
    g.name = name_.value_or("graph");
    g.kind = kind_.value_or(GraphKind::knowledge);
    std::set<std::string> known;
    for (auto& n : declared_) {
      std::string t = trim(n);
      if (!known.insert(t).second) continue;
      g.nodes.push_back(t);
    }
    std::set<std::string> reported;
    auto check = [&](const std::string& raw, std::size_t offset, const char* where) {
      std::string name = trim(raw);
      if (known.count(name) || !reported.insert(name).second) return;
      note(offset, "node '" + name + "' used in " + where + " but missing from the node list; added",
           true);
    };
    for (auto& [e, offset] : edges_) {
      check(e.source, offset, "edge list");
      check(e.target, offset, "edge list");
      g.edges.push_back(e);
    }
    for (auto& [p, offset] : properties_) {
      check(p.node, offset, "a property");
      g.properties.push_back(p);
    }
    ParseResult result;
    result.graph = canonicalize(std::move(g));
    result.diagnostics = std::move(diagnostics_);
    return result;
  }
};

std::string join(const std::vector<std::string>& items, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += sep;
    out += items[i];
  }
  return out;
}

}  // namespace

VerbalStyle VerbalStyle::for_graph(const Graph& graph) {
  return {graph.name.empty() ? "graph" : graph.name,
          graph.kind == GraphKind::structure ? Vocabulary::node : Vocabulary::entity, true};
}

std::size_t ParseResult::recovered_count() const {
  return static_cast<std::size_t>(std::count_if(diagnostics.begin(), diagnostics.end(),
                                                [](const auto& d) { return d.recovered; }));
}

std::string escape_quoted(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '\'': out += "\\'"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      default: out += c;
    }
  }
  return out;
}

std::string render_node(std::string_view name, GraphKind kind) {
  if (kind == GraphKind::structure && is_integer_name(name)) return std::string(name);
  return "'" + escape_quoted(name) + "'";
}

std::string render_edge(const Edge& edge, GraphKind kind) {
  std::string out = "(" + render_node(edge.source, kind) + (edge.directed ? " -> " : " <-> ") +
                    render_node(edge.target, kind) + ")";
  if (edge.relation || edge.weight) {
    out += '[';
    if (edge.relation) out += "relation='" + escape_quoted(*edge.relation) + "'";
    if (edge.relation && edge.weight) out += ", ";
    if (edge.weight) out += "weight=" + edge.weight->to_string();
    out += ']';
  }
  return out;
}

std::string verbalize(const Graph& graph, const VerbalStyle& style) {
  if (style.graph_name.empty()) throw InvalidArgument("verbal style needs a graph name");
  if (style.graph_name.find_first_of("\r\n") != std::string::npos) {
    throw InvalidArgument("graph name must not contain newlines");
  }
  const Graph g = canonicalize(graph);
  const bool node_vocab = style.vocabulary == Vocabulary::node;

  std::vector<std::string> nodes, edges;
  nodes.reserve(g.nodes.size());
  for (const auto& n : g.nodes) nodes.push_back(render_node(n, g.kind));
  edges.reserve(g.edges.size());
  for (const auto& e : g.edges) edges.push_back(render_edge(e, g.kind));

  std::string out = "Graph[name='" + escape_quoted(style.graph_name) + "'] {\n";
  out += kIndent;
  out += node_vocab ? kNodeList : kEntityList;
  out += " = [" + join(nodes, ", ") + "];\n";
  out += kIndent;
  out += node_vocab ? kEdgeList : kTripleList;
  out += " = [" + join(edges, ", ") + "];\n";
  if (style.include_properties) {
    for (const auto& p : g.properties) {
      if (!is_property_key(p.key)) throw InvalidArgument("invalid property key '" + p.key + "'");
      out += kIndent;
      out += is_bare_property_owner(p.node) ? p.node : "'" + escape_quoted(p.node) + "'";
      out += "." + p.key + "='" + escape_quoted(p.value) + "';\n";
    }
  }
  out += "}";
  return out;
}

std::string verbalize(const Graph& graph) { return verbalize(graph, VerbalStyle::for_graph(graph)); }

ParseResult parse_graph(std::string_view text) { return Parser(text).run(); }

std::optional<ParsedEdge> parse_edge(std::string_view text) { return Parser(text).run_edge(); }

std::string verbalize_path_template(const Graph& graph) {
  const Graph g = canonicalize(graph);
  const auto& edges = g.edges;
  std::vector<bool> used(edges.size(), false);
  auto rel = [](const Edge& e) { return e.relation.value_or("unspecified"); };

  std::vector<std::string> sentences;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (used[i]) continue;
    used[i] = true;
    const Edge& first = edges[i];

    std::vector<std::pair<std::string, std::string>> orientations{{first.source, first.target}};
    if (!first.directed) orientations.emplace_back(first.target, first.source);

    bool paired = false;
    for (const auto& [head, mid] : orientations) {
      for (std::size_t j = 0; j < edges.size() && !paired; ++j) {
        if (used[j]) continue;
        const Edge& second = edges[j];
        std::string tail;
        if (second.source == mid) {
          tail = second.target;
        } else if (!second.directed && second.target == mid) {
          tail = second.source;
        } else {
          continue;
        }
        if (tail == head || tail == mid) continue;
        used[j] = true;
        paired = true;
        sentences.push_back(head + " is connected with " + tail + " within tow hops through " +
                            mid + ", and featured relations " + rel(first) + " and " + rel(second));
      }
      if (paired) break;
    }
    if (!paired) {
      sentences.push_back(first.source + " is connected with " + first.target +
                          " within one hop, and featured relation " + rel(first));
    }
  }
  return join(sentences, "\n");
}

}  // namespace graphlang

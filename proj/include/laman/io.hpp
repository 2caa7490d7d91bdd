#pragma once

#include <cctype>
#include <istream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "laman/errors.hpp"
#include "laman/multigraph.hpp"

namespace laman::io {

/// Input error tied to a 1-based line number.
class ParseError : public InputError {
public:
  ParseError(std::size_t line, const std::string& what)
      : InputError("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

private:
  std::size_t line_;
};

/// A graph plus the token each vertex id was read from. Ids follow first
/// appearance, which also fixes the vertex order.
struct NamedGraph {
  MultiGraph graph;
  std::vector<std::string> names;

  std::string name(VertexId v) const { return v < names.size() ? names[v] : std::to_string(v); }
};

struct NamedBigraph {
  Bigraph bigraph;
  std::vector<std::string> g_names;
  std::vector<std::string> h_names;
};

namespace detail {

inline std::string strip_comment(const std::string& line) {
  auto hash = line.find('#');
  return hash == std::string::npos ? line : line.substr(0, hash);
}

inline bool blank(const std::string& s) {
  for (char c : s)
    if (!std::isspace(static_cast<unsigned char>(c))) return false;
  return true;
}

struct EdgeListBuilder {
  NamedGraph out;
  std::map<std::string, VertexId> ids;

  VertexId vertex(const std::string& token) {
    auto [it, inserted] = ids.emplace(token, static_cast<VertexId>(ids.size()));
    if (inserted) out.names.push_back(token);
    return it->second;
  }

  void line(const std::string& text, std::size_t lineno) {
    std::istringstream ss(text);
    std::string a, b, extra;
    if (!(ss >> a >> b) || (ss >> extra))
      throw ParseError(lineno, "expected two vertex tokens, got \"" + text + "\"");
    const VertexId u = vertex(a);  // sequenced: ids follow token order
    const VertexId v = vertex(b);
    out.graph.add_edge(u, v);
  }
};

inline std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

} // namespace detail

/// One edge "u v" per line; '#' starts a comment; blank lines are ignored.
/// Edge k of the file gets identifier k.
inline NamedGraph read_edge_list(std::istream& in) {
  detail::EdgeListBuilder builder;
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string text = detail::strip_comment(raw);
    if (detail::blank(text)) continue;
    builder.line(text, lineno);
  }
  return std::move(builder.out);
}

inline NamedGraph parse_edge_list(const std::string& text) {
  std::istringstream in(text);
  return read_edge_list(in);
}

/// Two edge-list blocks separated by a line "---"; the k-th edges of the two
/// blocks form biedge k. Vertex names on the two sides are independent.
inline NamedBigraph read_bigraph(std::istream& in) {
  detail::EdgeListBuilder sides[2];
  int side = 0;
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string text = detail::strip_comment(raw);
    if (detail::trim(text) == "---") {
      if (side == 1) throw ParseError(lineno, "more than one \"---\" separator");
      side = 1;
      continue;
    }
    if (detail::blank(text)) continue;
    sides[side].line(text, lineno);
  }
  if (side == 0) throw ParseError(lineno, "missing \"---\" separator between the two sides");
  if (sides[0].out.graph.edge_count() != sides[1].out.graph.edge_count())
    throw ParseError(lineno, "the two sides have different edge counts (" +
                                 std::to_string(sides[0].out.graph.edge_count()) + " vs " +
                                 std::to_string(sides[1].out.graph.edge_count()) + ")");
  return {Bigraph(sides[0].out.graph, sides[1].out.graph), std::move(sides[0].out.names),
          std::move(sides[1].out.names)};
}

inline NamedBigraph parse_bigraph(const std::string& text) {
  std::istringstream in(text);
  return read_bigraph(in);
}

inline void write_edge_list(std::ostream& out, const MultiGraph& g,
                            const std::vector<std::string>& names = {}) {
  auto name = [&](VertexId v) { return v < names.size() ? names[v] : std::to_string(v); };
  for (const auto& [id, ep] : g.edges()) out << name(ep.first) << ' ' << name(ep.second) << '\n';
}

inline std::string to_edge_list(const MultiGraph& g) {
  std::ostringstream out;
  write_edge_list(out, g);
  return out.str();
}

/// graph6 encoding of a simple graph; vertex i of the encoding is the i-th
/// smallest vertex id of g.
inline std::string to_graph6(const MultiGraph& g) {
  if (!is_simple(g)) throw InputError("graph6 encodes simple graphs only");
  auto idx = laman::detail::vertex_index(g);
  const std::size_t n = idx.size();
  std::string out;
  if (n <= 62) {
    out.push_back(static_cast<char>(n + 63));
  } else if (n <= 258047) {
    out.push_back('~');
    for (int shift = 12; shift >= 0; shift -= 6) out.push_back(static_cast<char>(((n >> shift) & 63) + 63));
  } else {
    throw InputError("graph too large for graph6");
  }
  std::vector<bool> adj(n * n, false);
  for (const auto& [id, ep] : g.edges()) {
    std::size_t a = idx.at(ep.first), b = idx.at(ep.second);
    adj[a * n + b] = adj[b * n + a] = true;
  }
  int acc = 0, bits = 0;
  for (std::size_t j = 1; j < n; ++j)
    for (std::size_t i = 0; i < j; ++i) {
      acc = (acc << 1) | (adj[i * n + j] ? 1 : 0);
      if (++bits == 6) {
        out.push_back(static_cast<char>(acc + 63));
        acc = bits = 0;
      }
    }
  if (bits) out.push_back(static_cast<char>((acc << (6 - bits)) + 63));
  return out;
}

/// Decodes one graph6 line (an optional ">>graph6<<" header is accepted).
inline MultiGraph from_graph6(std::string s) {
  s = detail::trim(s);
  const std::string header = ">>graph6<<";
  if (s.rfind(header, 0) == 0) s = s.substr(header.size());
  if (s.empty()) throw InputError("empty graph6 string");
  for (char c : s)
    if (c < 63 || c > 126) throw InputError("invalid graph6 character");
  std::size_t pos = 0, n = 0;
  if (s[0] != '~') {
    n = static_cast<std::size_t>(s[0] - 63);
    pos = 1;
  } else {
    if (s.size() < 4 || s[1] == '~') throw InputError("unsupported graph6 size field");
    for (int k = 1; k <= 3; ++k) n = (n << 6) | static_cast<std::size_t>(s[k] - 63);
    pos = 4;
  }
  const std::size_t need = (n * (n - (n ? 1 : 0)) / 2 + 5) / 6;
  if (s.size() - pos != need) throw InputError("graph6 string has the wrong length");
  MultiGraph g;
  for (std::size_t v = 0; v < n; ++v) g.add_vertex(static_cast<VertexId>(v));
  std::size_t bit = 0;
  for (std::size_t j = 1; j < n; ++j)
    for (std::size_t i = 0; i < j; ++i, ++bit) {
      int byte = s[pos + bit / 6] - 63;
      if ((byte >> (5 - bit % 6)) & 1) g.add_edge(static_cast<VertexId>(i), static_cast<VertexId>(j));
    }
  return g;
}

/// Reads graph6 lines, one graph per non-blank line.
inline std::vector<MultiGraph> read_graph6(std::istream& in) {
  std::vector<MultiGraph> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (detail::blank(line)) continue;
    try {
      out.push_back(from_graph6(line));
    } catch (const ParseError&) {
      throw;
    } catch (const InputError& e) {
      throw ParseError(lineno, e.what());
    }
  }
  return out;
}

/// True when the text looks like graph6 rather than an edge list.
inline bool looks_like_graph6(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::string t = detail::trim(detail::strip_comment(line));
    if (t.empty()) continue;
    if (t.rfind(">>graph6<<", 0) == 0) return true;
    for (char c : t)
      if (std::isspace(static_cast<unsigned char>(c)) || c < 63 || c > 126) return false;
    return true;
  }
  return false;
}

} // namespace laman::io

#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "laman/canonical.hpp"
#include "laman/multigraph.hpp"

namespace laman {

/// Outcome of a Laman test. `violated` names the failing condition; for a
/// sparsity failure `witness` holds a vertex set spanning too many edges.
struct LamanReport {
  bool laman = false;
  std::string violated;
  std::vector<VertexId> witness;

  explicit operator bool() const { return laman; }
};

namespace detail {

// (2,3)-pebble game on dense vertex indices. Each vertex starts with two
// pebbles; an accepted edge is oriented away from a vertex that spends one.
class PebbleGame {
public:
  explicit PebbleGame(std::size_t n) : pebbles_(n, 2), out_(n), mark_(n, 0) {}

  // Tries to insert u-v. On rejection returns false and fills the witness: the
  // vertices reachable from {u, v}, which span at least 2|R| - 2 edges.
  bool insert(int u, int v, std::vector<int>* witness = nullptr) {
    while (pebbles_[u] + pebbles_[v] < 4) {
      if (pebbles_[u] < 2 && fetch(u, v)) continue;
      if (pebbles_[v] < 2 && fetch(v, u)) continue;
      if (witness) *witness = reach(u, v);
      return false;
    }
    --pebbles_[u];
    out_[u].push_back(v);
    return true;
  }

private:
  // Moves a free pebble to root along a directed path avoiding `blocked`,
  // reversing the path.
  bool fetch(int root, int blocked) {
    ++stamp_;
    std::vector<int> parent(out_.size(), -1);
    std::vector<int> stack{root};
    mark_[root] = stamp_;
    mark_[blocked] = stamp_;
    while (!stack.empty()) {
      int x = stack.back();
      stack.pop_back();
      for (int y : out_[x]) {
        if (mark_[y] == stamp_) continue;
        mark_[y] = stamp_;
        parent[y] = x;
        if (pebbles_[y] > 0) {
          --pebbles_[y];
          ++pebbles_[root];
          for (int c = y; c != root; c = parent[c]) reverse_edge(parent[c], c);
          return true;
        }
        stack.push_back(y);
      }
    }
    return false;
  }

  void reverse_edge(int from, int to) {
    auto& fo = out_[from];
    fo.erase(std::find(fo.begin(), fo.end(), to));
    out_[to].push_back(from);
  }

  std::vector<int> reach(int u, int v) {
    ++stamp_;
    std::vector<int> stack{u, v}, seen{u, v};
    mark_[u] = mark_[v] = stamp_;
    while (!stack.empty()) {
      int x = stack.back();
      stack.pop_back();
      for (int y : out_[x])
        if (mark_[y] != stamp_) {
          mark_[y] = stamp_;
          seen.push_back(y);
          stack.push_back(y);
        }
    }
    std::sort(seen.begin(), seen.end());
    return seen;
  }

  std::vector<int> pebbles_;
  std::vector<std::vector<int>> out_;
  std::vector<int> mark_;
  int stamp_ = 0;
};

inline void require_simple(const MultiGraph& g) {
  if (has_self_loop(g)) throw InputError("graph has a self-loop");
  if (has_parallel_edges(g)) throw InputError("graph has parallel edges");
}

} // namespace detail

/// Decides the Laman property with the (2,3)-pebble game and reports which
/// condition fails. Throws InputError on multigraph input.
inline LamanReport check_laman(const MultiGraph& g) {
  detail::require_simple(g);
  LamanReport r;
  const std::size_t n = g.vertex_count();
  if (n < 2) {
    r.violated = "|V| >= 2";
    return r;
  }
  if (g.edge_count() != 2 * n - 3) {
    r.violated = "|E| = 2|V|-3";
    return r;
  }
  auto idx = detail::vertex_index(g);
  std::vector<VertexId> name(n);
  for (const auto& [v, i] : idx) name[i] = v;
  detail::PebbleGame game(n);
  for (const auto& [id, ep] : g.edges()) {
    std::vector<int> witness;
    if (!game.insert(static_cast<int>(idx.at(ep.first)), static_cast<int>(idx.at(ep.second)), &witness)) {
      r.violated = "|E'| <= 2|V'|-3 for every subgraph";
      for (int i : witness) r.witness.push_back(name[i]);
      return r;
    }
  }
  // |E| = 2|V|-3 with (2,3)-sparsity forces connectivity; kept as a guard.
  if (component_count(g) != 1) {
    r.violated = "connected";
    return r;
  }
  r.laman = true;
  return r;
}

inline bool is_laman(const MultiGraph& g) { return check_laman(g).laman; }

/// One Henneberg move. Type I adds t joined to u and v. Type II removes the edge
/// {u, v} and adds t joined to u, v and w.
struct HennebergStep {
  enum class Kind { I, II };
  Kind kind = Kind::I;
  VertexId u = 0;
  VertexId v = 0;
  VertexId w = 0;  // type II only
  VertexId t = 0;

  friend bool operator==(const HennebergStep&, const HennebergStep&) = default;
};

/// Steps rebuilding a graph from the single edge {base_u, base_v}.
struct HennebergSequence {
  VertexId base_u = 0;
  VertexId base_v = 0;
  std::vector<HennebergStep> steps;
};

namespace detail {

inline VertexId fresh_vertex(const MultiGraph& g) {
  return g.vertices().empty() ? 0 : *g.vertices().rbegin() + 1;
}

inline MultiGraph remove_vertex(const MultiGraph& g, VertexId t) {
  MultiGraph out;
  for (VertexId v : g.vertices())
    if (v != t) out.add_vertex(v);
  for (const auto& [id, ep] : g.edges())
    if (!ep.contains(t)) out.add_edge(id, ep.first, ep.second);
  return out;
}

inline void require_vertex(const MultiGraph& g, VertexId v) {
  if (!g.has_vertex(v)) throw InputError("unknown vertex " + std::to_string(v));
}

} // namespace detail

/// Applies a step with its recorded new vertex t (which must be fresh).
inline MultiGraph apply_step(const MultiGraph& g, const HennebergStep& s) {
  detail::require_vertex(g, s.u);
  detail::require_vertex(g, s.v);
  if (s.u == s.v) throw InputError("Henneberg step needs two distinct attachment vertices");
  if (g.has_vertex(s.t)) throw InputError("new vertex " + std::to_string(s.t) + " is not fresh");
  MultiGraph out = g;
  if (s.kind == HennebergStep::Kind::II) {
    detail::require_vertex(g, s.w);
    if (s.w == s.u || s.w == s.v) throw InputError("third attachment vertex must differ from u and v");
    auto e = g.find_edge(s.u, s.v);
    if (!e) throw InputError("edge {" + std::to_string(s.u) + "," + std::to_string(s.v) + "} not present");
    out = delete_edges(g, {*e});
    for (VertexId v : g.vertices()) out.add_vertex(v);
  }
  out.add_edge(s.u, s.t);
  out.add_edge(s.v, s.t);
  if (s.kind == HennebergStep::Kind::II) out.add_edge(s.w, s.t);
  return out;
}

inline MultiGraph apply_henneberg1(const MultiGraph& g, VertexId u, VertexId v) {
  return apply_step(g, {HennebergStep::Kind::I, u, v, 0, detail::fresh_vertex(g)});
}

inline MultiGraph apply_henneberg2(const MultiGraph& g, VertexId u, VertexId v, VertexId w) {
  return apply_step(g, {HennebergStep::Kind::II, u, v, w, detail::fresh_vertex(g)});
}

inline MultiGraph replay(const HennebergSequence& seq) {
  MultiGraph g;
  g.add_edge(seq.base_u, seq.base_v);
  for (const auto& s : seq.steps) g = apply_step(g, s);
  return g;
}

/// Decomposes a Laman graph into Henneberg moves by repeatedly removing a
/// degree-2 vertex (inverse type I) or a degree-3 vertex together with the
/// least neighbour pair whose insertion keeps the remainder Laman (inverse type
/// II). Returns nullopt for non-Laman input; the result is checked by replay.
inline std::optional<HennebergSequence> henneberg_sequence(const MultiGraph& g) {
  if (!is_laman(g)) return std::nullopt;
  MultiGraph cur = g;
  std::vector<HennebergStep> reversed;
  while (cur.vertex_count() > 2) {
    std::optional<VertexId> deg2;
    std::vector<VertexId> deg3;
    for (VertexId v : cur.vertices()) {
      std::size_t d = cur.degree(v);
      if (d == 2 && !deg2) deg2 = v;
      if (d == 3) deg3.push_back(v);
    }
    if (deg2) {
      auto nb = cur.neighbors(*deg2);
      reversed.push_back({HennebergStep::Kind::I, nb[0], nb[1], 0, *deg2});
      cur = detail::remove_vertex(cur, *deg2);
      continue;
    }
    bool reduced = false;
    for (VertexId t : deg3) {
      auto nb = cur.neighbors(t);
      const std::pair<int, int> pairs[] = {{0, 1}, {0, 2}, {1, 2}};
      for (auto [i, j] : pairs) {
        VertexId x = nb[i], y = nb[j], w = nb[3 - i - j];
        if (cur.find_edge(x, y)) continue;
        MultiGraph candidate = detail::remove_vertex(cur, t);
        candidate.add_edge(x, y);
        if (is_laman(candidate)) {
          reversed.push_back({HennebergStep::Kind::II, x, y, w, t});
          cur = std::move(candidate);
          reduced = true;
          break;
        }
      }
      if (reduced) break;
    }
    if (!reduced) throw InternalError("no Henneberg reduction found for a Laman graph");
  }
  HennebergSequence seq;
  seq.base_u = *cur.vertices().begin();
  seq.base_v = *cur.vertices().rbegin();
  seq.steps.assign(reversed.rbegin(), reversed.rend());

  MultiGraph rebuilt = replay(seq);
  auto endpoint_list = [](const MultiGraph& m) {
    std::vector<Endpoints> eps;
    for (const auto& kv : m.edges()) eps.push_back(kv.second);
    std::sort(eps.begin(), eps.end());
    return eps;
  };
  if (endpoint_list(rebuilt) != endpoint_list(g) || !isomorphic(rebuilt, g))
    throw InternalError("Henneberg replay does not reproduce the input graph");
  return seq;
}

/// Exponential check straight from the definition: |E| = 2|V|-3 and every vertex
/// subset of size >= 2 induces at most 2|V'|-3 edges. Intended for small graphs.
inline bool is_laman_bruteforce(const MultiGraph& g) {
  detail::require_simple(g);
  const std::size_t n = g.vertex_count();
  if (n < 2 || n > 24 || g.edge_count() != 2 * n - 3) return false;
  auto idx = detail::vertex_index(g);
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (const auto& [id, ep] : g.edges()) edges.emplace_back(idx.at(ep.first), idx.at(ep.second));
  for (std::uint32_t s = 1; s < (1u << n); ++s) {
    int k = __builtin_popcount(s);
    if (k < 2) continue;
    int inside = 0;
    for (auto [a, b] : edges) inside += ((s >> a) & 1u) && ((s >> b) & 1u);
    if (inside > 2 * k - 3) return false;
  }
  return true;
}

} // namespace laman

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "laman/errors.hpp"
#include "laman/union_find.hpp"

namespace laman {

using VertexId = std::uint32_t;
using EdgeId = std::uint32_t;
using EdgeSet = std::set<EdgeId>;

/// Endpoint set of an edge, stored sorted. first == second marks a self-loop.
struct Endpoints {
  VertexId first = 0;
  VertexId second = 0;

  Endpoints() = default;
  Endpoints(VertexId a, VertexId b) : first(std::min(a, b)), second(std::max(a, b)) {}

  bool is_loop() const { return first == second; }
  bool contains(VertexId v) const { return first == v || second == v; }
  VertexId other(VertexId v) const { return first == v ? second : first; }
  friend auto operator<=>(const Endpoints&, const Endpoints&) = default;
};

/// Finite undirected multigraph with self-loops. Edges carry stable identifiers,
/// so parallel edges are distinct edges with equal endpoint sets.
class MultiGraph {
public:
  MultiGraph() = default;

  /// Edge k of the list gets identifier k.
  static MultiGraph from_edges(std::span<const std::pair<VertexId, VertexId>> edges) {
    MultiGraph g;
    for (const auto& [u, v] : edges) g.add_edge(u, v);
    return g;
  }
  static MultiGraph from_edges(std::initializer_list<std::pair<VertexId, VertexId>> edges) {
    return from_edges(std::span<const std::pair<VertexId, VertexId>>(edges.begin(), edges.size()));
  }

  void add_vertex(VertexId v) { vertices_.insert(v); }

  /// Adds an edge with the next free identifier and returns it.
  EdgeId add_edge(VertexId u, VertexId v) {
    EdgeId id = edges_.empty() ? 0 : edges_.rbegin()->first + 1;
    add_edge(id, u, v);
    return id;
  }

  void add_edge(EdgeId id, VertexId u, VertexId v) {
    if (edges_.count(id)) throw InputError("duplicate edge identifier " + std::to_string(id));
    vertices_.insert(u);
    vertices_.insert(v);
    edges_.emplace(id, Endpoints(u, v));
  }

  const std::set<VertexId>& vertices() const { return vertices_; }
  const std::map<EdgeId, Endpoints>& edges() const { return edges_; }
  std::size_t vertex_count() const { return vertices_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  bool has_vertex(VertexId v) const { return vertices_.count(v) != 0; }
  bool has_edge(EdgeId e) const { return edges_.count(e) != 0; }

  const Endpoints& endpoints(EdgeId e) const {
    auto it = edges_.find(e);
    if (it == edges_.end()) throw InputError("unknown edge identifier " + std::to_string(e));
    return it->second;
  }

  std::vector<EdgeId> edge_ids() const {
    std::vector<EdgeId> ids;
    ids.reserve(edges_.size());
    for (const auto& kv : edges_) ids.push_back(kv.first);
    return ids;
  }

  /// Number of edge ends at v (a self-loop counts twice).
  std::size_t degree(VertexId v) const {
    std::size_t d = 0;
    for (const auto& [id, ep] : edges_) d += (ep.first == v) + (ep.second == v);
    return d;
  }

  /// Distinct neighbours of v, sorted.
  std::vector<VertexId> neighbors(VertexId v) const {
    std::set<VertexId> out;
    for (const auto& [id, ep] : edges_)
      if (ep.contains(v) && !ep.is_loop()) out.insert(ep.other(v));
    return {out.begin(), out.end()};
  }

  /// First edge joining u and v, if any.
  std::optional<EdgeId> find_edge(VertexId u, VertexId v) const {
    Endpoints want(u, v);
    for (const auto& [id, ep] : edges_)
      if (ep == want) return id;
    return std::nullopt;
  }

  bool operator==(const MultiGraph&) const = default;

private:
  std::set<VertexId> vertices_;
  std::map<EdgeId, Endpoints> edges_;
};

namespace detail {

/// Dense index of every vertex, in increasing id order.
inline std::map<VertexId, std::size_t> vertex_index(const MultiGraph& g) {
  std::map<VertexId, std::size_t> idx;
  for (VertexId v : g.vertices()) idx.emplace(v, idx.size());
  return idx;
}

inline void check_edges(const MultiGraph& g, const EdgeSet& s) {
  for (EdgeId e : s)
    if (!g.has_edge(e)) throw InputError("unknown edge identifier " + std::to_string(e));
}

} // namespace detail

/// Connected components as sorted vertex blocks, ordered by least vertex.
inline std::vector<std::vector<VertexId>> components(const MultiGraph& g) {
  auto idx = detail::vertex_index(g);
  UnionFind uf(idx.size());
  for (const auto& [id, ep] : g.edges()) uf.unite(idx.at(ep.first), idx.at(ep.second));
  std::map<std::size_t, std::vector<VertexId>> blocks;
  for (const auto& [v, i] : idx) blocks[uf.find(i)].push_back(v);
  std::vector<std::vector<VertexId>> out;
  out.reserve(blocks.size());
  for (auto& kv : blocks) out.push_back(std::move(kv.second));
  std::sort(out.begin(), out.end());
  return out;
}

inline std::size_t component_count(const MultiGraph& g) {
  auto idx = detail::vertex_index(g);
  UnionFind uf(idx.size());
  for (const auto& [id, ep] : g.edges()) uf.unite(idx.at(ep.first), idx.at(ep.second));
  return uf.blocks();
}

/// |V| minus the number of connected components.
inline std::size_t dimension(const MultiGraph& g) { return g.vertex_count() - component_count(g); }

/// G/s: vertices joined by edges of s are identified; the class takes the name of
/// its least vertex. Surviving edges keep their identifiers and may become loops.
inline MultiGraph contract(const MultiGraph& g, const EdgeSet& s) {
  detail::check_edges(g, s);
  auto idx = detail::vertex_index(g);
  UnionFind uf(idx.size());
  for (EdgeId e : s) {
    const auto& ep = g.endpoints(e);
    uf.unite(idx.at(ep.first), idx.at(ep.second));
  }
  std::vector<VertexId> rep(idx.size(), 0);
  std::vector<bool> seen(idx.size(), false);
  for (const auto& [v, i] : idx) {
    std::size_t r = uf.find(i);
    if (!seen[r]) {
      seen[r] = true;
      rep[r] = v;  // ids iterate in increasing order, so this is the least member
    }
  }
  MultiGraph out;
  for (const auto& [v, i] : idx) out.add_vertex(rep[uf.find(i)]);
  for (const auto& [id, ep] : g.edges()) {
    if (s.count(id)) continue;
    out.add_edge(id, rep[uf.find(idx.at(ep.first))], rep[uf.find(idx.at(ep.second))]);
  }
  return out;
}

/// G\s: removes the edges of s, then every vertex no longer incident to an edge.
inline MultiGraph delete_edges(const MultiGraph& g, const EdgeSet& s) {
  detail::check_edges(g, s);
  MultiGraph out;
  for (const auto& [id, ep] : g.edges())
    if (!s.count(id)) out.add_edge(id, ep.first, ep.second);
  return out;
}

/// True iff removing e (keeping its endpoints) increases the component count.
inline bool is_bridge(const MultiGraph& g, EdgeId e) {
  const Endpoints& target = g.endpoints(e);
  if (target.is_loop()) return false;
  auto idx = detail::vertex_index(g);
  UnionFind uf(idx.size());
  for (const auto& [id, ep] : g.edges())
    if (id != e) uf.unite(idx.at(ep.first), idx.at(ep.second));
  return !uf.same(idx.at(target.first), idx.at(target.second));
}

inline bool has_self_loop(const MultiGraph& g) {
  return std::any_of(g.edges().begin(), g.edges().end(),
                     [](const auto& kv) { return kv.second.is_loop(); });
}

inline bool has_parallel_edges(const MultiGraph& g) {
  std::set<Endpoints> seen;
  for (const auto& [id, ep] : g.edges())
    if (!seen.insert(ep).second) return true;
  return false;
}

inline bool is_simple(const MultiGraph& g) { return !has_self_loop(g) && !has_parallel_edges(g); }

/// Pair of multigraphs over one shared biedge set.
class Bigraph {
public:
  Bigraph() = default;
  Bigraph(MultiGraph g, MultiGraph h) : g_(std::move(g)), h_(std::move(h)) {
    if (g_.edge_count() != h_.edge_count())
      throw InputError("bigraph sides have different edge counts");
    auto a = g_.edges().begin();
    auto b = h_.edges().begin();
    for (; a != g_.edges().end(); ++a, ++b)
      if (a->first != b->first) throw InputError("bigraph sides have different edge identifiers");
  }

  const MultiGraph& g() const { return g_; }
  const MultiGraph& h() const { return h_; }
  std::vector<EdgeId> biedges() const { return g_.edge_ids(); }
  std::size_t biedge_count() const { return g_.edge_count(); }
  bool has_biedge(EdgeId e) const { return g_.has_edge(e); }

  bool operator==(const Bigraph&) const = default;

private:
  MultiGraph g_;
  MultiGraph h_;
};

inline Bigraph swap_sides(const Bigraph& b) { return Bigraph(b.h(), b.g()); }

/// dim(G) + dim(H) == |biedges| + 1
inline bool is_pseudo_laman(const Bigraph& b) {
  return dimension(b.g()) + dimension(b.h()) == b.biedge_count() + 1;
}

/// (G, G) with the identity biedge pairing.
inline Bigraph duplicate(const MultiGraph& g) {
  if (has_self_loop(g)) throw InputError("cannot duplicate a graph with a self-loop");
  return Bigraph(g, g);
}

} // namespace laman

#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include "laman/multigraph.hpp"
#include "laman/packed_bigraph.hpp"
#include "laman/union_find.hpp"

namespace laman {

/// Simple undirected graph with an initial vertex colouring. Only the relative
/// order of colour values is significant.
struct ColoredGraph {
  std::vector<std::vector<int>> adj;
  std::vector<int> color;
};

struct CanonicalLabeling {
  std::vector<int> position;     // node -> canonical position
  std::vector<int> certificate;  // equal iff the coloured graphs are isomorphic
};

namespace detail {

// Individualisation-refinement search: colour refinement to an equitable
// partition, branching on the first smallest-coloured non-singleton cell, keeping
// the least leaf certificate. Children equivalent under automorphisms found so far
// that fix the current prefix pointwise are skipped.
class Canonizer {
public:
  static constexpr std::size_t kMaxAutomorphisms = 128;

  explicit Canonizer(const ColoredGraph& g) : g_(g), n_(static_cast<int>(g.adj.size())) {
    base_color_ = dense_ranks(g.color);
  }

  CanonicalLabeling run() {
    std::vector<int> prefix;
    search(base_color_, prefix);
    return {best_pos_, best_cert_};
  }

private:
  static std::vector<int> dense_ranks(const std::vector<int>& c) {
    std::vector<int> vals(c);
    std::sort(vals.begin(), vals.end());
    vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
    std::vector<int> out(c.size());
    for (std::size_t i = 0; i < c.size(); ++i)
      out[i] = static_cast<int>(std::lower_bound(vals.begin(), vals.end(), c[i]) - vals.begin());
    return out;
  }

  // Refines to the coarsest equitable partition finer than `color`; afterwards
  // colours are dense ranks 0..k-1 and the number of cells is returned.
  int refine(std::vector<int>& color) {
    color = dense_ranks(color);
    int cells = color.empty() ? 0 : *std::max_element(color.begin(), color.end()) + 1;
    std::vector<int> order(n_);
    std::vector<int> next(n_);
    for (;;) {
      buf_.clear();
      off_.assign(n_ + 1, 0);
      for (int v = 0; v < n_; ++v) {
        off_[v] = static_cast<int>(buf_.size());
        buf_.push_back(color[v]);
        std::size_t start = buf_.size();
        for (int u : g_.adj[v]) buf_.push_back(color[u]);
        std::sort(buf_.begin() + static_cast<std::ptrdiff_t>(start), buf_.end());
      }
      off_[n_] = static_cast<int>(buf_.size());
      auto less = [this](int a, int b) {
        return std::lexicographical_compare(buf_.begin() + off_[a], buf_.begin() + off_[a + 1],
                                            buf_.begin() + off_[b], buf_.begin() + off_[b + 1]);
      };
      std::iota(order.begin(), order.end(), 0);
      std::sort(order.begin(), order.end(), less);
      int rank = 0;
      for (int i = 0; i < n_; ++i) {
        if (i > 0 && less(order[i - 1], order[i])) ++rank;
        next[order[i]] = rank;
      }
      int new_cells = n_ == 0 ? 0 : rank + 1;
      color.swap(next);
      if (new_cells == cells) return cells;
      cells = new_cells;
    }
  }

  std::vector<int> certificate(const std::vector<int>& pos) const {
    std::vector<int> inv(n_);
    for (int v = 0; v < n_; ++v) inv[pos[v]] = v;
    std::vector<int> cert;
    cert.reserve(static_cast<std::size_t>(n_) * 4);
    std::vector<int> nb;
    for (int p = 0; p < n_; ++p) {
      int v = inv[p];
      cert.push_back(base_color_[v]);
      nb.clear();
      for (int u : g_.adj[v]) nb.push_back(pos[u]);
      std::sort(nb.begin(), nb.end());
      cert.push_back(static_cast<int>(nb.size()));
      cert.insert(cert.end(), nb.begin(), nb.end());
    }
    return cert;
  }

  void record_automorphism(const std::vector<int>& pos, const std::vector<int>& other_inv) {
    if (autos_.size() >= kMaxAutomorphisms) return;
    std::vector<int> gamma(n_);
    bool identity = true;
    for (int v = 0; v < n_; ++v) {
      gamma[v] = other_inv[pos[v]];
      identity = identity && gamma[v] == v;
    }
    if (!identity) autos_.push_back(std::move(gamma));
  }

  void leaf(const std::vector<int>& pos) {
    std::vector<int> cert = certificate(pos);
    auto inverse = [this](const std::vector<int>& p) {
      std::vector<int> inv(n_);
      for (int v = 0; v < n_; ++v) inv[p[v]] = v;
      return inv;
    };
    if (!have_best_) {
      have_best_ = true;
      best_cert_ = first_cert_ = cert;
      best_pos_ = pos;
      best_inv_ = first_inv_ = inverse(pos);
      return;
    }
    if (cert == best_cert_) {
      record_automorphism(pos, best_inv_);
    } else if (cert == first_cert_) {
      record_automorphism(pos, first_inv_);
    } else if (cert < best_cert_) {
      best_cert_ = std::move(cert);
      best_pos_ = pos;
      best_inv_ = inverse(pos);
    }
  }

  void search(std::vector<int> color, std::vector<int>& prefix) {
    int cells = refine(color);
    if (cells == n_) {
      leaf(color);
      return;
    }
    std::vector<int> cell_size(cells, 0);
    for (int c : color) ++cell_size[c];
    int target = 0;
    while (cell_size[target] == 1) ++target;
    std::vector<int> members;
    for (int v = 0; v < n_; ++v)
      if (color[v] == target) members.push_back(v);

    std::vector<int> tried;
    std::vector<int> child(n_);
    for (int v : members) {
      if (!tried.empty() && !autos_.empty() && equivalent_to_tried(v, tried, prefix)) continue;
      for (int u = 0; u < n_; ++u)
        child[u] = 2 * color[u] + ((color[u] == target && u != v) ? 1 : 0);
      prefix.push_back(v);
      search(child, prefix);
      prefix.pop_back();
      tried.push_back(v);
    }
  }

  bool equivalent_to_tried(int v, const std::vector<int>& tried, const std::vector<int>& prefix) {
    UnionFind orbits(static_cast<std::size_t>(n_));
    for (const auto& gamma : autos_) {
      bool fixes = std::all_of(prefix.begin(), prefix.end(), [&](int p) { return gamma[p] == p; });
      if (!fixes) continue;
      for (int i = 0; i < n_; ++i) orbits.unite(static_cast<std::size_t>(i), static_cast<std::size_t>(gamma[i]));
    }
    return std::any_of(tried.begin(), tried.end(), [&](int w) {
      return orbits.same(static_cast<std::size_t>(v), static_cast<std::size_t>(w));
    });
  }

  const ColoredGraph& g_;
  int n_;
  std::vector<int> base_color_;
  std::vector<int> buf_;
  std::vector<int> off_;
  bool have_best_ = false;
  std::vector<int> best_cert_, first_cert_;
  std::vector<int> best_pos_;
  std::vector<int> best_inv_, first_inv_;
  std::vector<std::vector<int>> autos_;
};

} // namespace detail

inline CanonicalLabeling canonical_labeling(const ColoredGraph& g) {
  return detail::Canonizer(g).run();
}

/// Isomorphism-invariant byte encoding of a bigraph. Two bigraphs get equal keys
/// iff some pair of vertex bijections, together with some biedge bijection,
/// carries one onto the other.
struct CanonicalKey {
  std::string bytes;
  friend auto operator<=>(const CanonicalKey&, const CanonicalKey&) = default;
};

struct CanonicalKeyHash {
  std::size_t operator()(const CanonicalKey& k) const { return std::hash<std::string>{}(k.bytes); }
};

namespace detail {

// Incidence graph: G-vertices (colour 0), H-vertices (colour 1), one node per
// biedge (colour 2) joined to its endpoints on both sides.
inline ColoredGraph incidence_graph(const PackedBigraph& b) {
  const int ng = b.g_vertices, nh = b.h_vertices, m = static_cast<int>(b.size());
  ColoredGraph cg;
  cg.adj.resize(static_cast<std::size_t>(ng + nh + m));
  cg.color.resize(cg.adj.size());
  for (int v = 0; v < ng; ++v) cg.color[v] = 0;
  for (int v = 0; v < nh; ++v) cg.color[ng + v] = 1;
  auto link = [&cg](int a, int b) {
    cg.adj[a].push_back(b);
    cg.adj[b].push_back(a);
  };
  for (int k = 0; k < m; ++k) {
    int node = ng + nh + k;
    cg.color[node] = 2;
    link(node, b.g[k].a);
    if (!b.g[k].is_loop()) link(node, b.g[k].b);
    link(node, ng + b.h[k].a);
    if (!b.h[k].is_loop()) link(node, ng + b.h[k].b);
  }
  return cg;
}

inline std::string encode_labeled(const PackedBigraph& b, const std::vector<int>& pos) {
  const int ng = b.g_vertices, nh = b.h_vertices, m = static_cast<int>(b.size());
  std::vector<int> inv(pos.size());
  for (std::size_t v = 0; v < pos.size(); ++v) inv[pos[v]] = static_cast<int>(v);
  std::string out;
  out.reserve(3 + 4 * static_cast<std::size_t>(m));
  out.push_back(static_cast<char>(ng));
  out.push_back(static_cast<char>(nh));
  out.push_back(static_cast<char>(m));
  for (int p = ng + nh; p < ng + nh + m; ++p) {
    int k = inv[p] - ng - nh;
    PackedEdge ge(pos[b.g[k].a], pos[b.g[k].b]);
    PackedEdge he(pos[ng + b.h[k].a] - ng, pos[ng + b.h[k].b] - ng);
    out.push_back(static_cast<char>(ge.a));
    out.push_back(static_cast<char>(ge.b));
    out.push_back(static_cast<char>(he.a));
    out.push_back(static_cast<char>(he.b));
  }
  return out;
}

inline std::string packed_key_bytes(const PackedBigraph& b) {
  return encode_labeled(b, canonical_labeling(incidence_graph(b)).position);
}

} // namespace detail

/// Canonical key of a packed bigraph. With swap_closure the key is also invariant
/// under exchanging G and H.
inline CanonicalKey canonical_key(const PackedBigraph& b, bool swap_closure = false) {
  std::string direct = detail::packed_key_bytes(b);
  if (!swap_closure) return {direct};
  std::string swapped = detail::packed_key_bytes(swap_sides(b));
  return {std::min(direct, swapped)};
}

inline CanonicalKey canonical_key(const Bigraph& b, bool swap_closure = false) {
  return canonical_key(pack(b), swap_closure);
}

/// Canonical relabelling of a simple graph onto vertices 0..n-1.
struct CanonicalGraph {
  MultiGraph graph;   // vertices 0..n-1, edges sorted, ids 0..|E|-1
  std::string bytes;  // n followed by the sorted edge pairs
};

inline CanonicalGraph canonical_form(const MultiGraph& g) {
  if (!is_simple(g)) throw InputError("canonical_form expects a simple graph");
  auto idx = detail::vertex_index(g);
  if (idx.size() > 255) throw InputError("graph has more than 255 vertices");
  ColoredGraph cg;
  cg.adj.resize(idx.size());
  cg.color.assign(idx.size(), 0);
  for (const auto& [id, ep] : g.edges()) {
    int a = static_cast<int>(idx.at(ep.first)), b = static_cast<int>(idx.at(ep.second));
    cg.adj[a].push_back(b);
    cg.adj[b].push_back(a);
  }
  auto pos = canonical_labeling(cg).position;
  std::vector<PackedEdge> edges;
  for (const auto& [id, ep] : g.edges())
    edges.emplace_back(pos[idx.at(ep.first)], pos[idx.at(ep.second)]);
  std::sort(edges.begin(), edges.end());
  CanonicalGraph out;
  out.bytes.push_back(static_cast<char>(idx.size()));
  for (std::size_t v = 0; v < idx.size(); ++v) out.graph.add_vertex(static_cast<VertexId>(v));
  for (const auto& e : edges) {
    out.graph.add_edge(e.a, e.b);
    out.bytes.push_back(static_cast<char>(e.a));
    out.bytes.push_back(static_cast<char>(e.b));
  }
  return out;
}

/// Exact isomorphism test for simple graphs.
inline bool isomorphic(const MultiGraph& a, const MultiGraph& b) {
  if (a.vertex_count() != b.vertex_count() || a.edge_count() != b.edge_count()) return false;
  return canonical_form(a).bytes == canonical_form(b).bytes;
}

} // namespace laman

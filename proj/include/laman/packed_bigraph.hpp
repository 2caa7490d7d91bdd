#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <vector>

#include "laman/multigraph.hpp"

namespace laman {

/// Edge between dense vertex indices, stored with a <= b.
struct PackedEdge {
  std::uint8_t a = 0;
  std::uint8_t b = 0;

  PackedEdge() = default;
  PackedEdge(unsigned x, unsigned y)
      : a(static_cast<std::uint8_t>(x < y ? x : y)), b(static_cast<std::uint8_t>(x < y ? y : x)) {}
  bool is_loop() const { return a == b; }
  friend auto operator<=>(const PackedEdge&, const PackedEdge&) = default;
};

/// Dense bigraph used by the counting engine: vertices are 0..n-1 per side and
/// biedge k is g[k] in G and h[k] in H.
struct PackedBigraph {
  static constexpr std::size_t kMaxVertices = 255;
  static constexpr std::size_t kMaxBiedges = 64;

  std::uint8_t g_vertices = 0;
  std::uint8_t h_vertices = 0;
  std::vector<PackedEdge> g;
  std::vector<PackedEdge> h;

  std::size_t size() const { return g.size(); }

  friend bool operator==(const PackedBigraph&, const PackedBigraph&) = default;
};

inline PackedBigraph swap_sides(const PackedBigraph& b) {
  PackedBigraph out;
  out.g_vertices = b.h_vertices;
  out.h_vertices = b.g_vertices;
  out.g = b.h;
  out.h = b.g;
  return out;
}

namespace detail {

inline std::uint8_t pack_side(const MultiGraph& side, std::vector<PackedEdge>& out) {
  if (side.vertex_count() > PackedBigraph::kMaxVertices)
    throw InputError("graph has more than 255 vertices");
  std::map<VertexId, unsigned> idx;
  for (VertexId v : side.vertices()) idx.emplace(v, static_cast<unsigned>(idx.size()));
  out.clear();
  out.reserve(side.edge_count());
  for (const auto& [id, ep] : side.edges()) out.emplace_back(idx.at(ep.first), idx.at(ep.second));
  return static_cast<std::uint8_t>(idx.size());
}

} // namespace detail

/// Packs b with biedges ordered by identifier. Isolated vertices are kept.
inline PackedBigraph pack(const Bigraph& b) {
  if (b.biedge_count() > PackedBigraph::kMaxBiedges)
    throw InputError("bigraph has more than 64 biedges");
  PackedBigraph p;
  p.g_vertices = detail::pack_side(b.g(), p.g);
  p.h_vertices = detail::pack_side(b.h(), p.h);
  return p;
}

/// Inverse of pack up to naming: vertex i becomes id i and biedge k becomes id k.
inline Bigraph unpack(const PackedBigraph& p) {
  MultiGraph g, h;
  for (unsigned v = 0; v < p.g_vertices; ++v) g.add_vertex(v);
  for (unsigned v = 0; v < p.h_vertices; ++v) h.add_vertex(v);
  for (std::size_t k = 0; k < p.size(); ++k) {
    g.add_edge(static_cast<EdgeId>(k), p.g[k].a, p.g[k].b);
    h.add_edge(static_cast<EdgeId>(k), p.h[k].a, p.h[k].b);
  }
  return Bigraph(std::move(g), std::move(h));
}

} // namespace laman

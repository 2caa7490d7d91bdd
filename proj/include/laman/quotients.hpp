#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <numeric>
#include <vector>

#include "laman/multigraph.hpp"
#include "laman/packed_bigraph.hpp"

namespace laman {

using BiedgeMask = std::uint64_t;

inline BiedgeMask full_mask(std::size_t m) {
  return m >= 64 ? ~BiedgeMask{0} : (BiedgeMask{1} << m) - 1;
}

/// ^M B = (G/M, H\M) on the biedges E\M.
inline Bigraph left_quot(const Bigraph& b, const EdgeSet& m) {
  return Bigraph(contract(b.g(), m), delete_edges(b.h(), m));
}

/// B^M = (G\M, H/M) on the biedges E\M.
inline Bigraph right_quot(const Bigraph& b, const EdgeSet& m) {
  return Bigraph(delete_edges(b.g(), m), contract(b.h(), m));
}

/// A term of the recursion: M and N cover all biedges and meet in the pivot.
struct SubsetPair {
  EdgeSet m;
  EdgeSet n;
  EdgeId pivot = 0;
};

/// Calls fn(M, N) for every pair with M = S + pivot, N = (rest \ S) + pivot where
/// S ranges over the nonempty proper subsets of the non-pivot biedges. Masks are
/// over biedge positions 0..m-1. Yields 2^(m-1) - 2 pairs, none when m < 3.
template <class Fn>
void for_each_subset_pair(std::size_t m, std::size_t pivot, Fn&& fn) {
  if (m < 3) return;
  const BiedgeMask all = full_mask(m);
  const BiedgeMask p = BiedgeMask{1} << pivot;
  const BiedgeMask others = all & ~p;
  for (BiedgeMask s = (others - 1) & others; s != 0; s = (s - 1) & others)
    fn(s | p, (others & ~s) | p);
}

inline std::vector<SubsetPair> subset_pairs(const Bigraph& b, EdgeId pivot) {
  if (!b.has_biedge(pivot)) throw InputError("pivot is not a biedge: " + std::to_string(pivot));
  auto ids = b.biedges();
  std::size_t pos = static_cast<std::size_t>(std::find(ids.begin(), ids.end(), pivot) - ids.begin());
  std::vector<SubsetPair> out;
  for_each_subset_pair(ids.size(), pos, [&](BiedgeMask mm, BiedgeMask nn) {
    SubsetPair sp;
    sp.pivot = pivot;
    for (std::size_t k = 0; k < ids.size(); ++k) {
      if ((mm >> k) & 1u) sp.m.insert(ids[k]);
      if ((nn >> k) & 1u) sp.n.insert(ids[k]);
    }
    out.push_back(std::move(sp));
  });
  return out;
}

namespace packed {

/// Union-find on at most 255 vertices, reset per use.
struct SmallUnionFind {
  std::array<std::uint8_t, 256> parent;

  void reset(unsigned n) {
    for (unsigned i = 0; i < n; ++i) parent[i] = static_cast<std::uint8_t>(i);
  }
  unsigned find(unsigned x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  bool unite(unsigned a, unsigned b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (a < b) parent[b] = static_cast<std::uint8_t>(a);
    else parent[a] = static_cast<std::uint8_t>(b);
    return true;
  }
};

/// Rank of the edges selected by mask in the graphic matroid of one side.
inline unsigned rank(const std::vector<PackedEdge>& side, unsigned n, BiedgeMask mask,
                     SmallUnionFind& uf) {
  uf.reset(n);
  unsigned r = 0;
  for (BiedgeMask s = mask; s; s &= s - 1) {
    const auto& e = side[static_cast<std::size_t>(std::countr_zero(s))];
    r += uf.unite(e.a, e.b);
  }
  return r;
}

/// dim of one side: rank of all its edges.
inline unsigned dimension(const std::vector<PackedEdge>& side, unsigned n) {
  SmallUnionFind uf;
  return rank(side, n, full_mask(side.size()), uf);
}

inline bool has_loop(const std::vector<PackedEdge>& side) {
  for (const auto& e : side)
    if (e.is_loop()) return true;
  return false;
}

/// Contracts `mask` on one side; returns its rank, or -1 when some edge outside
/// the mask becomes a self-loop.
inline int contract_rank(const std::vector<PackedEdge>& side, unsigned n, BiedgeMask mask,
                         SmallUnionFind& uf) {
  unsigned r = rank(side, n, mask, uf);
  BiedgeMask rest = full_mask(side.size()) & ~mask;
  for (BiedgeMask s = rest; s; s &= s - 1) {
    const auto& e = side[static_cast<std::size_t>(std::countr_zero(s))];
    if (uf.find(e.a) == uf.find(e.b)) return -1;
  }
  return static_cast<int>(r);
}

/// Keeps the edges outside `removed`, dropping vertices left without edges.
inline std::uint8_t delete_side(const std::vector<PackedEdge>& side, unsigned n, BiedgeMask removed,
                                std::vector<PackedEdge>& out) {
  std::array<std::int16_t, 256> id;
  for (unsigned v = 0; v < n; ++v) id[v] = -1;
  for (std::size_t k = 0; k < side.size(); ++k)
    if (!((removed >> k) & 1u)) id[side[k].a] = id[side[k].b] = 0;
  unsigned next = 0;
  for (unsigned v = 0; v < n; ++v)
    if (id[v] == 0) id[v] = static_cast<std::int16_t>(next++);
  out.clear();
  for (std::size_t k = 0; k < side.size(); ++k)
    if (!((removed >> k) & 1u))
      out.emplace_back(static_cast<unsigned>(id[side[k].a]), static_cast<unsigned>(id[side[k].b]));
  return static_cast<std::uint8_t>(next);
}

/// Contracts the edges of `merged`, keeps the others (possibly as loops), and
/// drops classes left without edges.
inline std::uint8_t contract_side(const std::vector<PackedEdge>& side, unsigned n, BiedgeMask merged,
                                  std::vector<PackedEdge>& out) {
  SmallUnionFind uf;
  rank(side, n, merged, uf);
  std::array<std::int16_t, 256> id;
  for (unsigned v = 0; v < n; ++v) id[v] = -1;
  for (std::size_t k = 0; k < side.size(); ++k)
    if (!((merged >> k) & 1u)) id[uf.find(side[k].a)] = id[uf.find(side[k].b)] = 0;
  unsigned next = 0;
  for (unsigned v = 0; v < n; ++v)
    if (uf.find(v) == v && id[v] == 0) id[v] = static_cast<std::int16_t>(next++);
  out.clear();
  for (std::size_t k = 0; k < side.size(); ++k)
    if (!((merged >> k) & 1u))
      out.emplace_back(static_cast<unsigned>(id[uf.find(side[k].a)]),
                       static_cast<unsigned>(id[uf.find(side[k].b)]));
  return static_cast<std::uint8_t>(next);
}

inline PackedBigraph left_quot(const PackedBigraph& b, BiedgeMask m) {
  PackedBigraph out;
  out.g_vertices = contract_side(b.g, b.g_vertices, m, out.g);
  out.h_vertices = delete_side(b.h, b.h_vertices, m, out.h);
  return out;
}

inline PackedBigraph right_quot(const PackedBigraph& b, BiedgeMask n) {
  PackedBigraph out;
  out.g_vertices = delete_side(b.g, b.g_vertices, n, out.g);
  out.h_vertices = contract_side(b.h, b.h_vertices, n, out.h);
  return out;
}

/// Sub-bigraph on the biedges of `keep` (deletion on both sides).
inline PackedBigraph restrict_to(const PackedBigraph& b, BiedgeMask keep) {
  PackedBigraph out;
  BiedgeMask drop = full_mask(b.size()) & ~keep;
  out.g_vertices = delete_side(b.g, b.g_vertices, drop, out.g);
  out.h_vertices = delete_side(b.h, b.h_vertices, drop, out.h);
  return out;
}

/// Removes isolated vertices on both sides.
inline PackedBigraph strip_isolated(const PackedBigraph& b) { return restrict_to(b, full_mask(b.size())); }

/// Moves biedge `k` to the last position, keeping the others in order.
inline PackedBigraph move_to_back(const PackedBigraph& b, std::size_t k) {
  PackedBigraph out = b;
  out.g.erase(out.g.begin() + static_cast<std::ptrdiff_t>(k));
  out.h.erase(out.h.begin() + static_cast<std::ptrdiff_t>(k));
  out.g.push_back(b.g[k]);
  out.h.push_back(b.h[k]);
  return out;
}

} // namespace packed
} // namespace laman

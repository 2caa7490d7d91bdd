#include <gtest/gtest.h>

#include <limits>
#include <random>

#include "corpus.hpp"
#include "laman/canonical.hpp"
#include "laman/laman_check.hpp"
#include "laman/laman_number.hpp"
#include "laman/quotients.hpp"

using namespace laman;

namespace {

const LamOptions kBare{.reductions = false};

std::uint64_t lam_of(const Bigraph& b, const LamOptions& opts = {}) {
  MemoTable memo;
  return compute_lam(b, memo, opts).value.value();
}

// Bigraph with explicit biedge ids 0..k-1 from two digit edge lists.
Bigraph bigraph(const std::string& g, const std::string& h) { return Bigraph(corpus::digits(g), corpus::digits(h)); }

// Glues B1 and B2 through one extra biedge: a non-bridge of G1 and of H2.
Bigraph untangling(const Bigraph& b1, const Bigraph& b2, std::pair<VertexId, VertexId> g_ends,
                   std::pair<VertexId, VertexId> h_ends) {
  MultiGraph g, h;
  EdgeId next = 0;
  for (const auto& [id, ep] : b1.g().edges()) g.add_edge(next++, ep.first, ep.second);
  const EdgeId shift = 100;
  for (const auto& [id, ep] : b2.g().edges()) g.add_edge(next++, ep.first + shift, ep.second + shift);
  next = 0;
  for (const auto& [id, ep] : b1.h().edges()) h.add_edge(next++, ep.first, ep.second);
  for (const auto& [id, ep] : b2.h().edges()) h.add_edge(next++, ep.first + shift, ep.second + shift);
  g.add_edge(next, g_ends.first, g_ends.second);
  h.add_edge(next, h_ends.first + shift, h_ends.second + shift);
  return Bigraph(g, h);
}

// Canonical key after dropping isolated vertices, to compare the public
// quotients (which keep them on the contracted side) with the packed ones.
CanonicalKey stripped_key(const Bigraph& b) { return canonical_key(packed::strip_isolated(pack(b))); }

} // namespace

TEST(LamValueTest, CheckedArithmetic) {
  LamValue big(std::numeric_limits<std::uint64_t>::max() / 2 + 1);
  EXPECT_THROW(big * LamValue(2), OverflowError);
  EXPECT_THROW(big + big, OverflowError);
  EXPECT_EQ((LamValue(6) * LamValue(7)).value(), 42u);
  EXPECT_EQ((LamValue(6) + LamValue(7)).value(), 13u);
}

TEST(MemoTableTest, RefusesConflictingValues) {
  MemoTable memo;
  CanonicalKey k = canonical_key(duplicate(corpus::triangle()));
  memo.insert(k, LamValue(2));
  memo.insert(k, LamValue(2));
  EXPECT_THROW(memo.insert(k, LamValue(3)), InternalError);
  ASSERT_TRUE(memo.find(k));
  EXPECT_EQ(memo.find(k)->value(), 2u);
  EXPECT_EQ(memo.size(), 1u);
}

TEST(Quotients, SharedSubsetOnBothSides) {
  // G is the mixed test graph; H on a..d. M = {0, 1} is dashed on both sides.
  Bigraph b(corpus::letters("ad dc ab bc ef dc"), corpus::letters("bc ab ac ac bd bd"));
  Bigraph q = left_quot(b, {0, 1});
  EXPECT_EQ(q.biedges(), (std::vector<EdgeId>{2, 3, 4, 5}));
  // G/M: classes {a,c,d} -> a, b, e, f; two parallel a-b, a loop at a, e-f.
  EXPECT_EQ(q.g().vertices(), (std::set<VertexId>{0, 1, 4, 5}));
  EXPECT_EQ(q.g().endpoints(2), Endpoints(0, 1));
  EXPECT_EQ(q.g().endpoints(3), Endpoints(0, 1));
  EXPECT_EQ(q.g().endpoints(4), Endpoints(4, 5));
  EXPECT_EQ(q.g().endpoints(5), Endpoints(0, 0));
  // H\M keeps all four vertices: a-c twice, b-d twice.
  EXPECT_EQ(q.h().vertices(), (std::set<VertexId>{0, 1, 2, 3}));
  EXPECT_EQ(q.h().endpoints(2), Endpoints(0, 2));
  EXPECT_EQ(q.h().endpoints(3), Endpoints(0, 2));
  EXPECT_EQ(q.h().endpoints(4), Endpoints(1, 3));
  EXPECT_EQ(q.h().endpoints(5), Endpoints(1, 3));
  EXPECT_EQ(lam_of(q), 0u);
}

TEST(Quotients, Boundaries) {
  Bigraph b = duplicate(corpus::four_laman());
  Bigraph e = left_quot(b, {});
  EXPECT_EQ(e.g(), b.g());
  EXPECT_EQ(e.h(), b.h());
  Bigraph all = left_quot(b, {0, 1, 2, 3, 4});
  EXPECT_EQ(all.biedge_count(), 0u);
  EXPECT_EQ(all.g().vertex_count(), 1u);
  EXPECT_EQ(all.h().vertex_count(), 0u);
  EXPECT_THROW(left_quot(b, {42}), InputError);
}

TEST(Quotients, RightIsMirrorOfLeft) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 200; ++trial) {
    Bigraph b(corpus::random_multigraph(rng, 5, 6), corpus::random_multigraph(rng, 4, 6));
    EdgeSet m;
    for (EdgeId e : b.biedges())
      if (rng() % 2) m.insert(e);
    Bigraph r = right_quot(b, m);
    Bigraph l = swap_sides(left_quot(swap_sides(b), m));
    ASSERT_EQ(r.g(), l.g());
    ASSERT_EQ(r.h(), l.h());
  }
  Bigraph d = duplicate(corpus::four_laman());
  Bigraph r = right_quot(d, {2});
  EXPECT_EQ(r.g(), delete_edges(d.g(), {2}));
  EXPECT_EQ(r.h(), contract(d.h(), {2}));
}

TEST(Quotients, PackedAgreesWithPublic) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 300; ++trial) {
    Bigraph b(corpus::random_multigraph(rng, 6, 7), corpus::random_multigraph(rng, 5, 7));
    PackedBigraph p = packed::strip_isolated(pack(b));
    BiedgeMask mask = rng() & full_mask(7);
    EdgeSet m;
    for (std::size_t k = 0; k < 7; ++k)
      if ((mask >> k) & 1u) m.insert(b.biedges()[k]);
    ASSERT_EQ(canonical_key(packed::left_quot(p, mask)), stripped_key(left_quot(b, m)));
    ASSERT_EQ(canonical_key(packed::right_quot(p, mask)), stripped_key(right_quot(b, m)));
  }
}

TEST(SubsetPairs, CountsAndInvariants) {
  EXPECT_EQ(subset_pairs(duplicate(corpus::triangle()), 0).size(), 2u);
  Bigraph f = duplicate(corpus::four_laman());
  auto pairs = subset_pairs(f, 2);
  EXPECT_EQ(pairs.size(), 14u);
  std::set<EdgeSet> seen;
  for (const auto& sp : pairs) {
    EXPECT_EQ(sp.pivot, 2u);
    EdgeSet all(sp.m.begin(), sp.m.end());
    all.insert(sp.n.begin(), sp.n.end());
    EXPECT_EQ(all.size(), 5u);
    std::vector<EdgeId> both;
    std::set_intersection(sp.m.begin(), sp.m.end(), sp.n.begin(), sp.n.end(), std::back_inserter(both));
    EXPECT_EQ(both, std::vector<EdgeId>{2});
    EXPECT_GE(sp.m.size(), 2u);
    EXPECT_GE(sp.n.size(), 2u);
    seen.insert(sp.m);
  }
  EXPECT_EQ(seen.size(), 14u);
  EXPECT_TRUE(subset_pairs(duplicate(corpus::path3()), 0).empty());
  EXPECT_THROW(subset_pairs(f, 9), InputError);
}

TEST(Lam, Examples) {
  EXPECT_EQ(lam(duplicate(corpus::edge())).value(), 1u);
  EXPECT_EQ(lam(duplicate(corpus::triangle())).value(), 2u);
  EXPECT_EQ(lam(duplicate(corpus::four_laman())).value(), 4u);
  EXPECT_EQ(lam(duplicate(corpus::extremal(6))).value(), 24u);
  EXPECT_EQ(lam(duplicate(corpus::extremal(7))).value(), 56u);
  EXPECT_EQ(lam_graph(corpus::triangle()).value(), 2u);
  EXPECT_EQ(lam_graph(corpus::digits("12 23 34 41 13")).value(), 4u);
}

TEST(Lam, BareRecursionExamples) {
  EXPECT_EQ(lam_of(duplicate(corpus::triangle()), kBare), 2u);
  EXPECT_EQ(lam_of(duplicate(corpus::four_laman()), kBare), 4u);
  EXPECT_EQ(lam_of(duplicate(corpus::extremal(6)), kBare), 24u);
  EXPECT_EQ(lam_of(duplicate(corpus::extremal(7)), kBare), 56u);
}

TEST(Lam, NonLamanGraphIsInputError) {
  try {
    lam_graph(corpus::k4());
    FAIL() << "expected InputError";
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("|E| = 2|V|-3"), std::string::npos);
  }
  EXPECT_THROW(lam_graph(corpus::digits("11 12 13")), InputError);
}

TEST(Lam, BaseCases) {
  EXPECT_EQ(lam_of(bigraph("11", "12")), 0u);
  EXPECT_EQ(lam_of(bigraph("12 23 11", "12 23 13")), 0u);
  EXPECT_EQ(lam_of(bigraph("12", "12")), 1u);
  // Not pseudo-Laman: 3 + 3 != 6 + 1.
  EXPECT_EQ(lam_of(duplicate(corpus::k4())), 0u);
  EXPECT_EQ(lam_of(duplicate(corpus::k4()), kBare), 0u);
}

TEST(Lam, DoubleBridgeIsZero) {
  // Biedge 3 is a pendant edge of G and the bridge 2-3 of H.
  Bigraph b = bigraph("12 23 13 34", "12 12 12 23");
  ASSERT_TRUE(is_pseudo_laman(b));
  ASSERT_TRUE(is_bridge(b.g(), 3) && is_bridge(b.h(), 3));
  EXPECT_EQ(lam_of(b), 0u);
  EXPECT_EQ(lam_of(b, kBare), 0u);
}

TEST(Lam, OneSidedBridgeReduction) {
  // Biedge 3: pendant in G, parallel to 1-2 in H.
  Bigraph b = bigraph("12 23 13 34", "12 23 13 12");
  ASSERT_TRUE(is_pseudo_laman(b));
  ASSERT_TRUE(is_bridge(b.g(), 3) && !is_bridge(b.h(), 3));
  Bigraph reduced(delete_edges(b.g(), {3}), delete_edges(b.h(), {3}));
  EXPECT_EQ(lam_of(b, kBare), lam_of(reduced, kBare));
  EXPECT_EQ(lam_of(b), 2u);
}

TEST(Lam, OneSidedBridgeReductionOnRandomBigraphs) {
  std::mt19937_64 rng(3);
  int hits = 0;
  for (int trial = 0; trial < 20000 && hits < 60; ++trial) {
    unsigned m = 3 + static_cast<unsigned>(rng() % 4);
    Bigraph b(corpus::random_multigraph(rng, 2 + static_cast<unsigned>(rng() % 4), m, false),
              corpus::random_multigraph(rng, 2 + static_cast<unsigned>(rng() % 4), m, false));
    if (!is_pseudo_laman(b)) continue;
    for (EdgeId e : b.biedges()) {
      if (is_bridge(b.g(), e) == is_bridge(b.h(), e)) continue;
      Bigraph reduced(delete_edges(b.g(), {e}), delete_edges(b.h(), {e}));
      ASSERT_EQ(lam_of(b, kBare), lam_of(reduced, kBare));
      ++hits;
      break;
    }
  }
  EXPECT_GE(hits, 20);
}

TEST(Lam, MultiplicativityWithAndWithoutReductions) {
  Bigraph t = duplicate(corpus::triangle());
  Bigraph f = duplicate(corpus::four_laman());
  // The glue biedge is parallel to 1-2 in G and the missing diagonal 1-4 in H.
  Bigraph b = untangling(t, f, {1, 2}, {1, 4});
  ASSERT_TRUE(is_pseudo_laman(b));
  const EdgeId bar = static_cast<EdgeId>(b.biedge_count() - 1);
  ASSERT_FALSE(is_bridge(b.g(), bar));
  ASSERT_FALSE(is_bridge(b.h(), bar));
  EXPECT_EQ(lam_of(b), 8u);
  EXPECT_EQ(lam_of(b, kBare), 8u);

  Bigraph x = duplicate(corpus::extremal(6));
  Bigraph u = untangling(f, x, {2, 3}, {1, 2});
  EXPECT_EQ(lam_of(u), 4u * 24u);
  EXPECT_EQ(lam_of(u, kBare), 4u * 24u);
}

TEST(Properties, PivotInvariance) {
  for (std::size_t n = 2; n <= 6; ++n)
    for (const auto& g : corpus::catalog(n).graphs) {
      Bigraph b = duplicate(g);
      MemoTable memo;
      const std::uint64_t ref = compute_lam(b, memo).value.value();
      for (EdgeId e : b.biedges()) {
        ASSERT_EQ(compute_lam(b, memo, {}, e).value.value(), ref);
        MemoTable bare;
        ASSERT_EQ(compute_lam(b, bare, kBare, e).value.value(), ref);
      }
    }
}

TEST(Properties, IsomorphismInvariance) {
  std::mt19937_64 rng(4);
  std::vector<MultiGraph> graphs;
  for (std::size_t n = 3; n <= 6; ++n)
    for (const auto& g : corpus::catalog(n).graphs) graphs.push_back(g);
  graphs.push_back(corpus::extremal(7));
  for (const auto& g : graphs) {
    Bigraph b = duplicate(g);
    const std::uint64_t ref = lam_of(b);
    for (int r = 0; r < 50; ++r) ASSERT_EQ(lam_of(corpus::relabel(b, rng)), ref);
  }
}

TEST(Properties, HennebergOneDoubles) {
  MemoTable memo;
  for (std::size_t n = 2; n <= 6; ++n)
    for (const auto& g : corpus::catalog(n).graphs) {
      const LamValue base = compute_lam_graph(g, memo).value;
      std::vector<VertexId> vs(g.vertices().begin(), g.vertices().end());
      for (std::size_t i = 0; i < vs.size(); ++i)
        for (std::size_t j = i + 1; j < vs.size(); ++j)
          ASSERT_EQ(compute_lam_graph(apply_henneberg1(g, vs[i], vs[j]), memo).value, base * LamValue(2));
    }
}

TEST(Properties, BoundsUpToEightVertices) {
  MemoTable memo;
  for (unsigned n = 2; n <= 8; ++n) {
    const std::uint64_t lo = std::uint64_t{1} << (n - 2);
    const std::uint64_t hi = corpus::binomial(2 * n - 4, n - 2);
    for (const auto& g : corpus::catalog(n).graphs) {
      std::uint64_t v = compute_lam_graph(g, memo).value.value();
      ASSERT_GE(v, lo);
      ASSERT_LE(v, hi);
    }
  }
}

TEST(Properties, ReductionsDoNotChangeValues) {
  MemoTable on, off;
  for (std::size_t n = 2; n <= 8; ++n)
    for (const auto& g : corpus::catalog(n).graphs)
      ASSERT_EQ(compute_lam_graph(g, on).value, compute_lam_graph(g, off, kBare).value);
}

TEST(Properties, RandomPseudoLamanBigraphs) {
  // Reductions, swap symmetry and swap-closed keys on bigraphs that are not duplicates.
  std::mt19937_64 rng(6);
  int tested = 0;
  for (int trial = 0; trial < 50000 && tested < 150; ++trial) {
    unsigned m = 3 + static_cast<unsigned>(rng() % 6);
    Bigraph b(corpus::random_multigraph(rng, 2 + static_cast<unsigned>(rng() % 5), m, false),
              corpus::random_multigraph(rng, 2 + static_cast<unsigned>(rng() % 5), m, false));
    if (!is_pseudo_laman(b)) continue;
    ++tested;
    const std::uint64_t bare = lam_of(b, kBare);
    ASSERT_EQ(lam_of(b), bare);
    ASSERT_EQ(lam_of(swap_sides(b)), bare);
    ASSERT_EQ(lam_of(b, {.swap_closure = true}), bare);
  }
  EXPECT_GE(tested, 100);
}

TEST(Properties, ThreadCountDoesNotChangeValues) {
  for (int n : {6, 7, 8}) {
    Bigraph b = duplicate(corpus::extremal(n));
    EXPECT_EQ(lam_of(b, {.threads = 3}), corpus::extremal_lam(n));
    EXPECT_EQ(lam_of(b, {.reductions = false, .threads = 2}), corpus::extremal_lam(n));
  }
}

TEST(ChoosePivot, PrefersOneSidedBridge) {
  Bigraph b = bigraph("12 23 13 34", "12 23 13 12");
  EXPECT_EQ(choose_pivot(b), 3u);
  Bigraph t = duplicate(corpus::triangle());
  EXPECT_EQ(choose_pivot(t), choose_pivot(t));
  EXPECT_TRUE(t.has_biedge(choose_pivot(t)));
}

TEST(LamStatsTest, CountsWork) {
  MemoTable memo;
  LamResult r = compute_lam(duplicate(corpus::extremal(7)), memo);
  EXPECT_EQ(r.value.value(), 56u);
  EXPECT_GT(r.stats.nodes, 1u);
  EXPECT_GT(r.stats.pairs, 0u);
  EXPECT_GT(memo.size(), 0u);
  LamResult again = compute_lam(duplicate(corpus::extremal(7)), memo);
  EXPECT_EQ(again.stats.memo_hits, 1u);
}

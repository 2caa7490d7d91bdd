#include <gtest/gtest.h>

#include "corpus.hpp"
#include "laman/canonical.hpp"
#include "laman/enumeration.hpp"
#include "laman/laman_check.hpp"

using namespace laman;

TEST(Enumerate, KnownCountsUpToEight) {
  const std::size_t expected[] = {0, 0, 1, 1, 1, 3, 13, 70, 608};
  for (std::size_t n = 2; n <= 8; ++n) EXPECT_EQ(corpus::catalog(n).count(), expected[n]) << "n=" << n;
}

TEST(Enumerate, CatalogIsLamanAndIsomorphismFree) {
  for (std::size_t n = 2; n <= 7; ++n) {
    const Catalog& c = corpus::catalog(n);
    std::set<std::string> forms;
    for (const auto& g : c.graphs) {
      ASSERT_EQ(g.vertex_count(), n);
      ASSERT_TRUE(is_laman(g));
      ASSERT_TRUE(henneberg_sequence(g));
      forms.insert(canonical_form(g).bytes);
    }
    EXPECT_EQ(forms.size(), c.count());
  }
}

TEST(Enumerate, StreamsInKeyOrder) {
  std::vector<std::string> keys;
  std::size_t count = enumerate_laman(6, [&](const MultiGraph& g) { keys.push_back(canonical_form(g).bytes); });
  EXPECT_EQ(count, 13u);
  EXPECT_TRUE(std::is_sorted(keys.begin(), keys.end()));
}

TEST(Enumerate, ThreadedMatchesSerial) {
  EnumerationOptions opts;
  opts.threads = 3;
  Catalog c = enumerate_catalog(7, opts);
  ASSERT_EQ(c.count(), corpus::catalog(7).count());
  for (std::size_t i = 0; i < c.count(); ++i) EXPECT_EQ(c.graphs[i], corpus::catalog(7).graphs[i]);
}

TEST(Enumerate, RangeGuard) {
  EXPECT_THROW(enumerate_catalog(1), InputError);
  EXPECT_THROW(enumerate_catalog(11), InputError);
  EnumerationOptions small;
  small.cap = 5;
  EXPECT_THROW(enumerate_catalog(6, small), InputError);
  small.force = true;
  EXPECT_EQ(enumerate_catalog(6, small).count(), 13u);
}

TEST(Extremal, SixAndSeven) {
  ExtremalResult r6 = extremal_laman(6);
  EXPECT_EQ(r6.graphs, 13u);
  EXPECT_EQ(r6.min.value(), 16u);
  EXPECT_EQ(r6.max.value(), 24u);
  EXPECT_TRUE(isomorphic(r6.argmax, corpus::extremal(6)));
  EXPECT_EQ(lam_graph(r6.argmin).value(), 16u);
  ExtremalResult r7 = extremal_laman(7);
  EXPECT_EQ(r7.min.value(), 32u);
  EXPECT_EQ(r7.max.value(), 56u);
  EXPECT_EQ(lam_graph(r7.argmax).value(), 56u);
}

TEST(Extremal, MinimumIsAttainedByFirstRuleOnlyGraph) {
  MemoTable memo;
  for (std::size_t n = 3; n <= 7; ++n) {
    const std::uint64_t min = std::uint64_t{1} << (n - 2);
    bool found = false;
    for (const auto& g : corpus::catalog(n).graphs) {
      std::uint64_t v = compute_lam_graph(g, memo).value.value();
      EXPECT_GE(v, min);
      if (v == min && corpus::henneberg1_only(g)) found = true;
    }
    EXPECT_TRUE(found) << "n=" << n;
  }
}

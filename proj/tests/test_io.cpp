#include <gtest/gtest.h>

#include "corpus.hpp"
#include "laman/canonical.hpp"
#include "laman/io.hpp"

using namespace laman;

TEST(EdgeList, ParsesTokensInOrderOfAppearance) {
  io::NamedGraph t = io::parse_edge_list("1 2\n2 3\n1 3\n");
  EXPECT_TRUE(isomorphic(t.graph, corpus::triangle()));
  EXPECT_EQ(t.names, (std::vector<std::string>{"1", "2", "3"}));
  EXPECT_EQ(t.graph.endpoints(2), Endpoints(0, 2));
}

TEST(EdgeList, CommentsBlankLinesAndArbitraryTokens) {
  io::NamedGraph g = io::parse_edge_list("# header\n\nhub  x   # spoke\n  x y\n");
  EXPECT_EQ(g.graph.edge_count(), 2u);
  EXPECT_EQ(g.name(0), "hub");
  EXPECT_EQ(g.name(2), "y");
}

TEST(EdgeList, SelfLoopAcceptedAtParse) {
  io::NamedGraph g = io::parse_edge_list("1 1\n");
  EXPECT_TRUE(has_self_loop(g.graph));
}

TEST(EdgeList, EmptyInputIsEmptyGraph) {
  EXPECT_EQ(io::parse_edge_list("").graph.vertex_count(), 0u);
  EXPECT_EQ(io::parse_edge_list("# nothing\n").graph.edge_count(), 0u);
}

TEST(EdgeList, MalformedLineReportsItsNumber) {
  try {
    io::parse_edge_list("1 2\n\n2 3 4\n");
    FAIL() << "expected ParseError";
  } catch (const io::ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
  }
  EXPECT_THROW(io::parse_edge_list("lonely\n"), io::ParseError);
}

TEST(BigraphFormat, PairsKthEdges) {
  io::NamedBigraph b = io::parse_bigraph("a b\nb c\n---\nx y\ny y\n");
  EXPECT_EQ(b.bigraph.biedge_count(), 2u);
  EXPECT_TRUE(b.bigraph.h().endpoints(1).is_loop());
  EXPECT_EQ(b.h_names, (std::vector<std::string>{"x", "y"}));
}

TEST(BigraphFormat, Errors) {
  EXPECT_THROW(io::parse_bigraph("a b\n"), io::ParseError);
  EXPECT_THROW(io::parse_bigraph("a b\n---\n"), io::ParseError);
  EXPECT_THROW(io::parse_bigraph("a b\n---\nc d\n---\n"), io::ParseError);
}

TEST(Graph6, KnownEncodings) {
  EXPECT_EQ(io::to_graph6(corpus::triangle()), "Bw");
  EXPECT_EQ(io::to_graph6(corpus::k4()), "C~");
  EXPECT_TRUE(isomorphic(io::from_graph6(">>graph6<<Bw"), corpus::triangle()));
  EXPECT_THROW(io::from_graph6("C~~"), InputError);
  EXPECT_THROW(io::to_graph6(corpus::digits("12 12")), InputError);
}

TEST(Graph6, LargeSizeField) {
  MultiGraph path;
  for (VertexId v = 0; v + 1 < 70; ++v) path.add_edge(v, v + 1);
  std::string s = io::to_graph6(path);
  EXPECT_EQ(s[0], '~');
  EXPECT_EQ(io::from_graph6(s), path);
}

TEST(RoundTrip, BothFormatsOnCorpus) {
  for (std::size_t n = 2; n <= 7; ++n)
    for (const auto& g : corpus::catalog(n).graphs) {
      ASSERT_TRUE(isomorphic(io::from_graph6(io::to_graph6(g)), g));
      ASSERT_TRUE(isomorphic(io::parse_edge_list(io::to_edge_list(g)).graph, g));
    }
  for (int n = 6; n <= 12; ++n) {
    MultiGraph g = corpus::extremal(n);
    EXPECT_TRUE(isomorphic(io::from_graph6(io::to_graph6(g)), g));
    EXPECT_TRUE(isomorphic(io::parse_edge_list(io::to_edge_list(g)).graph, g));
  }
}

TEST(Graph6, ReaderAndDetection) {
  std::istringstream in("Bw\n\nC~\n");
  auto gs = io::read_graph6(in);
  ASSERT_EQ(gs.size(), 2u);
  EXPECT_EQ(gs[1].edge_count(), 6u);
  std::istringstream bad("Bw\nC~~\n");
  try {
    io::read_graph6(bad);
    FAIL();
  } catch (const io::ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  EXPECT_TRUE(io::looks_like_graph6("Bw\n"));
  EXPECT_FALSE(io::looks_like_graph6("1 2\n"));
  EXPECT_FALSE(io::looks_like_graph6("# c\n1 2\n"));
}

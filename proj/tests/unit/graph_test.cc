#include <random>

#include <gtest/gtest.h>

#include "ccrcp/errors.h"
#include "ccrcp/graph.h"
#include "ccrcp/json_io.h"

namespace ccrcp {
namespace {

TEST(Graph, ChainDiameter) {
  for (int n = 1; n <= 60; ++n) EXPECT_EQ(GenChain(n).diameter(), n - 1);
  EXPECT_EQ(GenChain(10).diameter(), 9);
}

TEST(Graph, CompleteAndRing) {
  EXPECT_EQ(GenComplete(7).diameter(), 1);
  EXPECT_EQ(GenRing(8).diameter(), 7);
  EXPECT_EQ(GenComplete(1).diameter(), 0);
}

TEST(Graph, Neighbours) {
  const DirectedGraph ring = GenRing(4);
  EXPECT_EQ(ring.in_neighbors(0), std::vector<int>{3});
  EXPECT_EQ(ring.out_neighbors(0), std::vector<int>{1});
  EXPECT_TRUE(ring.HasEdge(3, 0));
  EXPECT_FALSE(ring.HasEdge(0, 3));
}

TEST(Graph, RejectsDisconnected) {
  EXPECT_THROW(DirectedGraph(3, {{0, 1}, {1, 0}}), NotStronglyConnected);
  EXPECT_THROW(DirectedGraph(2, {{0, 1}}), NotStronglyConnected);
  EXPECT_THROW(DirectedGraph(2, {{0, 5}}), InvalidArgument);
}

TEST(Graph, GeometricIsSeededAndConnected) {
  std::mt19937_64 a(9), b(9);
  const GeometricGraph g1 = GenGeometric(40, 0.0, a);
  const GeometricGraph g2 = GenGeometric(40, 0.0, b);
  EXPECT_EQ(g1.graph.edges(), g2.graph.edges());
  EXPECT_TRUE(IsStronglyConnected(40, g1.graph.edges()));
}

TEST(Graph, GeometricDiameterIsSmallAtDefaultRadius) {
  int lo = 1000, hi = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    std::mt19937_64 rng(seed);
    const int d = GenGeometric(100, 0.0, rng).graph.diameter();
    lo = std::min(lo, d);
    hi = std::max(hi, d);
  }
  EXPECT_GE(lo, 2);
  EXPECT_LE(hi, 6);
}

TEST(Graph, GeometricEdgeCases) {
  std::mt19937_64 rng(1);
  EXPECT_EQ(GenGeometric(12, std::sqrt(2.0), rng).graph.diameter(), 1);
  EXPECT_EQ(GenGeometric(1, 0.0, rng).graph.diameter(), 0);
  EXPECT_THROW(GenGeometric(50, 1e-3, rng, 3), GenerationFailed);
}

TEST(Graph, JsonRoundTrip) {
  const DirectedGraph g = GenRing(5);
  const DirectedGraph h = io::GraphFromJson(io::GraphToJson(g));
  EXPECT_EQ(g.edges(), h.edges());
  EXPECT_EQ(h.diameter(), 4);
}

}  // namespace
}  // namespace ccrcp

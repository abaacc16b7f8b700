#include <gtest/gtest.h>

#include <set>
#include <sstream>

#include "oracle.hpp"
#include "selfsim/geodesy.hpp"
#include "selfsim/graph.hpp"

using namespace selfsim;

namespace {

Graph small(int depth = 3, std::int64_t half = 24) {
  return Graph(Params::uniform(2, 3, 2, depth, -half, half));
}

}  // namespace

TEST(Graph, PlainVertexKeepsLabels) {
  Graph g = small();
  Line l{g.params().lam_from({2, 1, 2}), g.params().theta_from({1, 0, 1})};
  Vertex v = g.normalize(3, l);
  EXPECT_EQ(v.kind, Kind::Plain);
  EXPECT_EQ(v.order, 0);
  EXPECT_EQ(v.rep, l);
  EXPECT_EQ(g.fiber(v).size(), 1u);
}

TEST(Graph, SocketAndGluingFibers) {
  Graph g = small();
  const Params& P = g.params();
  Vertex s = g.normalize(P.sigma(2), Line{P.lam_from({kSpade, 2}), P.theta_from({1, 1})});
  EXPECT_EQ(s.kind, Kind::Socket);
  EXPECT_EQ(s.order, 2);
  EXPECT_EQ(g.fiber(s).size(), 6u);
  Vertex gl = g.normalize(P.sigma(2), Line{P.lam_from({2, 2}), P.theta_from({1, 1})});
  EXPECT_EQ(gl.kind, Kind::Gluing);
  EXPECT_EQ(g.fiber(gl).size(), 3u);
  Vertex one = g.normalize(2, Line{P.lam_from({2}), 0});
  EXPECT_EQ(one.kind, Kind::Socket);
  EXPECT_EQ(one.order, 1);
}

TEST(Graph, NormalizeMatchesGluingRulesExhaustively) {
  Graph g = small(3, 16);
  const Params& P = g.params();
  std::uint32_t L = g.line_count();
  for (std::int64_t m = P.lo(); m <= P.hi(); ++m) {
    for (std::uint32_t i = 0; i < L; ++i) {
      Vertex a = g.normalize(m, g.line_at(i));
      for (std::uint32_t j = 0; j < L; ++j) {
        bool same = a == g.normalize(m, g.line_at(j));
        ASSERT_EQ(same, oracle::glued(P, m, g.line_at(i), g.line_at(j))) << "m=" << m;
      }
    }
  }
}

TEST(Graph, FiberIsTheClass) {
  Graph g = small(2);
  for (std::int64_t m = -8; m <= 8; ++m)
    for (std::uint32_t i = 0; i < g.line_count(); ++i) {
      Vertex v = g.normalize(m, g.line_at(i));
      for (const Line& l : g.fiber(v)) EXPECT_EQ(g.normalize(m, l), v);
    }
}

TEST(Graph, Valences) {
  Graph g = small();
  const Params& P = g.params();
  Line l{P.lam_from({2, 2, 2}), 0};
  EXPECT_EQ(g.neighbors(g.normalize(1, l)).size(), 2u);
  EXPECT_EQ(g.neighbors(g.normalize(4, l)).size(), 6u);
  Line sp{P.lam_from({kSpade, kSpade, 2}), 0};
  EXPECT_EQ(g.neighbors(g.normalize(8, sp)).size(), 12u);
  EXPECT_EQ(g.neighbors(g.normalize(2, l)).size(), 12u);
  // Window boundary: one-sided (hi = 24 is a gluing point of order 3).
  EXPECT_EQ(g.neighbors(g.normalize(P.hi(), Line{P.lam_from({2}), 0})).size(), 3u);
  EXPECT_EQ(g.neighbors(g.normalize(P.hi() - 1, Line{P.lam_from({2}), 0})).size(), 2u);
}

TEST(Graph, NoSelfLoopsAndEdgeEndpoints) {
  Graph g = small(2, 8);
  for (std::uint64_t id = 0; id < g.vertex_count(); ++id) {
    Vertex v = g.vertex_at(id);
    if (!(v.rep == g.line_at(static_cast<std::uint32_t>(id % g.line_count())))) continue;
    g.for_each_edge(id, [&](std::uint64_t n, std::uint64_t e) {
      EXPECT_NE(n, id);
      EXPECT_TRUE(g.incident(v, g.edge_at(e)));
    });
  }
}

TEST(Graph, ClassCountPerPosition) {
  Graph g = small(3, 16);
  for (std::int64_t m : {1, 3, 5}) {
    std::set<std::uint64_t> cls;
    for (std::uint32_t i = 0; i < g.line_count(); ++i) cls.insert(g.vertex_id(g.normalize(m, g.line_at(i))));
    EXPECT_EQ(cls.size(), 216u);
  }
}

TEST(Graph, DistancesMatchUnionFindOracle) {
  Graph g = small(2, 12);
  oracle::RawGraph raw(g.params());
  Bfs bfs(g);
  for (std::int64_t m : {-5, 0, 4}) {
    for (std::uint32_t li : {0u, 7u, 20u}) {
      auto d = raw.distances(m, li);
      bfs.run(g.vertex_id(g.normalize(m, g.line_at(li))));
      for (std::int64_t p = g.lo(); p <= g.hi(); ++p)
        for (std::uint32_t l = 0; l < g.line_count(); ++l)
          ASSERT_EQ(bfs.dist(g.vertex_id(g.normalize(p, g.line_at(l)))), d[raw.find(raw.id(p, l))]);
    }
  }
}

TEST(Graph, LineEmbeddingIsometricAwayFromBoundary) {
  Graph g = small(3, 32);
  Bfs bfs(g);
  for (std::uint32_t li : {0u, 5u, 100u, 215u}) {
    Line l = g.line_at(li);
    bfs.run(g.vertex_id(g.normalize(-8, l)));
    for (std::int64_t m = -8; m <= 8; ++m) EXPECT_EQ(bfs.dist(g.vertex_id(g.normalize(m, l))), m + 8);
  }
}

TEST(Graph, DumpLoadRoundTrip) {
  Graph g = small(1, 4);
  std::stringstream ss;
  g.dump(ss);
  std::string first = ss.str();
  Graph h = Graph::load(ss);
  std::stringstream again;
  h.dump(again);
  EXPECT_EQ(first, again.str());
}

TEST(Graph, RejectsOutOfWindow) {
  Graph g = small();
  EXPECT_THROW(g.normalize(g.hi() + 1, Line{}), WindowError);
  EXPECT_THROW(g.normalize(0, Line{g.params().lam_count(), 0}), std::out_of_range);
}

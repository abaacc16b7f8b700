#include <gtest/gtest.h>

#include <random>

#include "selfsim/geodesy.hpp"
#include "selfsim/walk_audit.hpp"

using namespace selfsim;

namespace {

Graph graph(int depth, std::int64_t half) { return Graph(Params::uniform(2, 3, 2, depth, -half, half)); }

Line random_line(const Graph& g, std::mt19937& rng) {
  std::uniform_int_distribution<std::uint32_t> li(0, g.line_count() - 1);
  return g.line_at(li(rng));
}

Vertex random_vertex(const Graph& g, std::mt19937& rng, std::int64_t half) {
  std::uniform_int_distribution<std::int64_t> pos(-half, half);
  return g.normalize(pos(rng), random_line(g, rng));
}

}  // namespace

TEST(Walk, ConcatReverseAndMarkers) {
  Graph g = graph(2, 16);
  Line l = g.line_at(3);
  Walk a = empty_walk(0, l);
  push_steps(a, 1, l, 3);
  a.s[1] = 2;
  Walk b = empty_walk(3, l);
  push_steps(b, -1, l, 1);
  b.tau = {1};
  Walk c = concat(g, a, b);
  EXPECT_EQ(c.len(), 4u);
  EXPECT_EQ(c.last(), 2);
  EXPECT_EQ(c.s.at(1), 2);
  ASSERT_EQ(c.tau.size(), 1u);
  EXPECT_EQ(c.tau[0], 4);
  EXPECT_EQ(check_walk(g, c), "");
  EXPECT_EQ(monotone_dir(c), 0);
  Walk r = reverse(c);
  EXPECT_EQ(r.first(), 2);
  EXPECT_EQ(r.last(), 0);
  EXPECT_TRUE(same_walk(reverse(r), c) || walk_key(reverse(r)) == walk_key(c));
  EXPECT_EQ(crossings(g, r), crossings(g, c));
  Walk off = empty_walk(7, l);
  EXPECT_THROW(concat(g, a, off), std::exception);
}

TEST(Walk, RolledLabels) {
  Graph g = graph(4, 16);
  const Params& P = g.params();
  std::uint32_t lam = P.lam_from({2, 2, 2, 2});
  EXPECT_EQ(rolled(P, lam, 0, 4), P.lam_from({kSpade, kSpade, kSpade, 2}));
  EXPECT_EQ(rolled(P, lam, 2, 4), P.lam_from({2, 2, kSpade, 2}));
  EXPECT_EQ(rolled(P, lam, 3, 4), lam);
  EXPECT_TRUE(lam_le(P, rolled(P, lam, 0, 4), lam));
  EXPECT_FALSE(lam_le(P, lam, rolled(P, lam, 0, 4)));
  EXPECT_FALSE(lam_le(P, P.lam_from({kSpade, 2, kSpade, 2}), P.lam_from({2, 0, 2, 2})));
  EXPECT_FALSE(lam_le(P, P.lam_from({2, kSpade, 2, 2}), P.lam_from({kSpade, 2, 2, 2})));
}

TEST(Walk, GluingWalkLemma) {
  Graph g = graph(4, 200);
  std::mt19937 rng(1);
  int n = 0;
  for (int s = 0; s < 80; ++s) {
    Line l = random_line(g, rng);
    std::int64_t m = std::uniform_int_distribution<std::int64_t>(-100, 100)(rng);
    int k = std::uniform_int_distribution<int>(1, 4)(rng);
    int dir = rng() % 2 ? 1 : -1;
    Walk w = gluing_walk(g, m, l, k, dir);
    Audit a = audit_gluing_walk(g, w, m, l, k, dir);
    EXPECT_TRUE(a.ok()) << a.error;
    EXPECT_LE(a.C, 4.0);
    ++n;
  }
  EXPECT_GE(n, 50);
}

TEST(Walk, DescendLemma) {
  Graph g = graph(4, 200);
  std::mt19937 rng(2);
  for (int s = 0; s < 80; ++s) {
    Line l = random_line(g, rng);
    std::int64_t m = std::uniform_int_distribution<std::int64_t>(-100, 100)(rng);
    int k = std::uniform_int_distribution<int>(1, 4)(rng);
    int dir = rng() % 2 ? 1 : -1;
    Walk w = descend_to_socket(g, m, l, k, dir);
    Audit a = audit_descend(g, w, m, l, k, dir);
    EXPECT_TRUE(a.ok()) << a.error << " m=" << m << " k=" << k;
    EXPECT_LE(a.C, 8.0);
  }
}

TEST(Walk, AscendLemma) {
  Graph g = graph(4, 200);
  const Params& P = g.params();
  std::mt19937 rng(3);
  int n = 0;
  for (int s = 0; s < 200 && n < 80; ++s) {
    int k0 = std::uniform_int_distribution<int>(1, 4)(rng);
    int k = std::uniform_int_distribution<int>(1, k0)(rng);
    std::int64_t m0 = next_of_order(P, std::uniform_int_distribution<std::int64_t>(-80, 80)(rng), 1, k0);
    Vertex v = g.normalize(m0, random_line(g, rng));
    if (v.kind != Kind::Socket) continue;
    // Target: socket labels above k0, gluing symbol on k..k0-1, free elsewhere.
    Line target = random_line(g, rng);
    for (int j = k0 + 1; j <= P.depth(); ++j) target.lam = P.lam_set(target.lam, j, P.lam_at(v.rep.lam, j));
    for (int j = k; j < k0; ++j) target.lam = P.lam_set(target.lam, j, kSpade);
    for (int j = 1; j <= P.depth(); ++j)
      if (j != k0) target.theta = P.theta_set(target.theta, j, P.theta_at(v.rep.theta, j));
    int dir = rng() % 2 ? 1 : -1;
    Walk w = ascend_from_socket(g, m0, k0, k, target, dir);
    Audit a = audit_ascend(g, w, m0, k0, k, target, dir);
    EXPECT_TRUE(a.ok()) << a.error << " m0=" << m0 << " k0=" << k0 << " k=" << k;
    EXPECT_LE(a.C, 8.0);
    ++n;
  }
  EXPECT_GE(n, 50);
}

TEST(Walk, InvalidArguments) {
  Graph g = graph(3, 64);
  Line l = g.line_at(0);
  EXPECT_THROW(gluing_walk(g, 0, l, 0, 1), std::invalid_argument);
  EXPECT_THROW(gluing_walk(g, 0, l, 1, 2), std::invalid_argument);
  EXPECT_THROW(descend_to_socket(g, 0, l, 4, 1), std::invalid_argument);
  EXPECT_THROW(ascend_from_socket(g, 1, 1, 1, l, 1), std::invalid_argument);
  EXPECT_THROW(gluing_walk(g, 60, l, 3, 1), WindowError);
}

TEST(Walk, LiftIdentityAndTrace) {
  Graph g = graph(3, 64);
  std::mt19937 rng(4);
  for (int s = 0; s < 50; ++s) {
    Line l = random_line(g, rng);
    std::int64_t m = std::uniform_int_distribution<std::int64_t>(-20, 20)(rng);
    int k = std::uniform_int_distribution<int>(1, 3)(rng);
    Walk w = descend_to_socket(g, m, l, k, rng() % 2 ? 1 : -1);
    Walk same = lift(g, w, w.start_line);
    EXPECT_TRUE(same_walk(same, w));
    Line other = random_line(g, rng);
    for (int j = 1; j <= 3; ++j) {
      other.theta = g.params().theta_set(other.theta, j, g.params().theta_at(l.theta, j));
    }
    Walk up = lift(g, w, other);
    EXPECT_EQ(check_walk(g, up), "");
    EXPECT_EQ(up.pos, w.pos);
    EXPECT_EQ(up.tau, w.tau);
  }
}

TEST(Walk, LiftFreezeKeepsLowEntries) {
  Graph g = graph(3, 64);
  const Params& P = g.params();
  Line l{P.lam_from({2, 2, 2}), P.theta_from({0, 0, 0})};
  Walk w = descend_to_socket(g, 0, l, 3, 1);
  Line start{P.lam_from({2, 2, 2}), P.theta_from({1, 1, 0})};
  Walk up = lift(g, w, start, 2);
  EXPECT_EQ(check_walk(g, up), "");
  for (const Line& e : up.lines) {
    EXPECT_EQ(P.lam_at(e.lam, 1), 2);
    EXPECT_EQ(P.lam_at(e.lam, 2), 2);
    EXPECT_EQ(P.theta_at(e.theta, 1), 1);
  }
}

TEST(Walk, LabelDiffIsMinimal) {
  Graph g = graph(3, 64);
  std::mt19937 rng(5);
  for (int s = 0; s < 50; ++s) {
    Vertex x = random_vertex(g, rng, 40), y = random_vertex(g, rng, 40);
    LabelDiff d = label_diff(g, x, y);
    for (const Line& a : g.fiber(x))
      for (const Line& b : g.fiber(y)) {
        std::size_t c = 0;
        for (int j = 1; j <= 3; ++j)
          c += g.params().lam_at(a.lam, j) != g.params().lam_at(b.lam, j) ||
               g.params().theta_at(a.theta, j) != g.params().theta_at(b.theta, j);
        EXPECT_LE(d.N.size(), c);
      }
    EXPECT_EQ(d.kmax, d.N.empty() ? 0 : d.N.back());
  }
}

namespace {

struct GoodWalkStats {
  int direct = 0, split = 0;
  double gw1 = 0, gw3 = 0, len_lo = 1e300, len_hi = 0;
};

GoodWalkStats sweep_good_walks(int depth, std::int64_t half, std::int64_t spread, int pairs, unsigned seed) {
  Graph g = graph(depth, half);
  std::mt19937 rng(seed);
  GoodWalkStats st;
  const Params& P = g.params();
  for (int s = 0; s < pairs; ++s) {
    Vertex x = random_vertex(g, rng, spread), y = random_vertex(g, rng, spread);
    if (s % 3) {
      // Close pairs around a high-order point, where labels differ deep down.
      int k = std::uniform_int_distribution<int>(2, depth)(rng);
      std::int64_t c = next_of_order(P, x.m, 1, k);
      std::int64_t r = P.sigma(k - 2);
      std::uniform_int_distribution<std::int64_t> off(-r, r);
      Line lx = random_line(g, rng), ly = lx;
      ly.lam = P.lam_set(ly.lam, k, (P.lam_at(lx.lam, k) + 1 + rng() % (P.n1() - 1)) % P.n1());
      if (rng() % 2) ly.theta = P.theta_set(ly.theta, k, 1 - P.theta_at(lx.theta, k));
      x = g.normalize(c + off(rng), lx);
      y = g.normalize(c + off(rng), ly);
    }
    if (vertex_distance(g, x, y) <= 1) continue;
    GoodWalk gw = good_walk(g, x, y);
    GoodWalkAudit a = audit_good_walk(g, gw, x, y);
    EXPECT_TRUE(a.ok()) << a.error;
    EXPECT_EQ(check_exc_estimate(g, x, y), "");
    (gw.split ? st.split : st.direct)++;
    st.gw1 = std::max(st.gw1, a.gw1);
    st.gw3 = std::max(st.gw3, a.gw3);
    st.len_lo = std::min(st.len_lo, a.len_lo);
    st.len_hi = std::max(st.len_hi, a.len_hi);
  }
  return st;
}

}  // namespace

TEST(GoodWalk, BothRegimesDepth3) {
  GoodWalkStats st = sweep_good_walks(3, 160, 40, 400, 6);
  EXPECT_GE(st.direct, 100);
  EXPECT_GE(st.split, 100);
  EXPECT_LT(st.gw1, 64);
  EXPECT_LT(st.gw3, 64);
  EXPECT_GT(st.len_lo, 0);
}

TEST(GoodWalk, Deterministic) {
  Graph g = graph(3, 160);
  std::mt19937 rng(8);
  for (int s = 0; s < 20; ++s) {
    Vertex x = random_vertex(g, rng, 40), y = random_vertex(g, rng, 40);
    if (vertex_distance(g, x, y) <= 1) continue;
    EXPECT_EQ(walk_key(good_walk(g, x, y).walk), walk_key(good_walk(g, x, y).walk));
  }
}

TEST(GoodWalk, RejectsAdjacentPairs) {
  Graph g = graph(2, 64);
  Vertex x = g.normalize(3, g.line_at(0));
  Vertex y = g.normalize(4, g.line_at(0));
  EXPECT_THROW(good_walk(g, x, y), std::invalid_argument);
  EXPECT_THROW(good_walk(g, x, x), std::invalid_argument);
}

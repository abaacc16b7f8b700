#pragma once

// Independent reference implementations used only by the tests.

#include <algorithm>
#include <cstdint>
#include <deque>
#include <numeric>
#include <vector>

#include "selfsim/curves.hpp"
#include "selfsim/geodesy.hpp"
#include "selfsim/graph.hpp"

namespace oracle {

using selfsim::Line;
using selfsim::Params;

// Straight reading of the gluing rules on raw triples (m, lam, theta).
inline bool glued(const Params& P, std::int64_t m, Line a, Line b) {
  if (a == b) return true;
  int t = P.ord(m);
  auto spadeBelow = [&](Line l) {
    for (int j = 1; j < t; ++j)
      if (P.lam_at(l.lam, j) != selfsim::kSpade) return false;
    return true;
  };
  auto lamAgreeExcept = [&](int skip) {
    for (int j = 1; j <= P.depth(); ++j)
      if (j != skip && P.lam_at(a.lam, j) != P.lam_at(b.lam, j)) return false;
    return true;
  };
  auto thetaAgreeExcept = [&](int skip) {
    for (int j = 1; j <= P.depth(); ++j)
      if (j != skip && P.theta_at(a.theta, j) != P.theta_at(b.theta, j)) return false;
    return true;
  };
  bool gluingA = t > 1 && !spadeBelow(a), gluingB = t > 1 && !spadeBelow(b);
  if (gluingA && gluingB && a.theta == b.theta && lamAgreeExcept(t)) return true;
  bool socketA = spadeBelow(a), socketB = spadeBelow(b);
  if (t >= 1 && socketA && socketB && lamAgreeExcept(t) && thetaAgreeExcept(t)) return true;
  return false;
}

// Union-find quotient of the raw line graph over the window.
struct RawGraph {
  const Params& P;
  std::uint32_t L;
  std::vector<std::uint32_t> parent;

  explicit RawGraph(const Params& p) : P(p), L(p.lam_count() * p.theta_count()) {
    std::int64_t n = (P.hi() - P.lo() + 1) * static_cast<std::int64_t>(L);
    parent.resize(n);
    std::iota(parent.begin(), parent.end(), 0u);
    for (std::int64_t m = P.lo(); m <= P.hi(); ++m) {
      if (P.ord(m) == 0) continue;
      for (std::uint32_t i = 0; i < L; ++i)
        for (std::uint32_t j = i + 1; j < L; ++j)
          if (glued(P, m, line(i), line(j))) unite(id(m, i), id(m, j));
    }
  }
  Line line(std::uint32_t i) const { return Line{i / P.theta_count(), i % P.theta_count()}; }
  std::uint32_t id(std::int64_t m, std::uint32_t li) const {
    return static_cast<std::uint32_t>((m - P.lo()) * L + li);
  }
  std::uint32_t find(std::uint32_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::uint32_t a, std::uint32_t b) { parent[find(a)] = find(b); }

  // BFS distances (in class space) from the class of (m, line).
  std::vector<int> distances(std::int64_t m, std::uint32_t li) {
    std::vector<int> d(parent.size(), -1);
    std::vector<std::vector<std::uint32_t>> members(parent.size());
    for (std::uint32_t x = 0; x < parent.size(); ++x) members[find(x)].push_back(x);
    std::deque<std::uint32_t> q;
    std::uint32_t s = find(id(m, li));
    d[s] = 0;
    q.push_back(s);
    while (!q.empty()) {
      std::uint32_t c = q.front();
      q.pop_front();
      for (std::uint32_t x : members[c]) {
        std::int64_t pos = P.lo() + x / L;
        std::uint32_t l = x % L;
        for (int dir : {-1, 1}) {
          std::int64_t np = pos + dir;
          if (np < P.lo() || np > P.hi()) continue;
          std::uint32_t nc = find(id(np, l));
          if (d[nc] < 0) {
            d[nc] = d[c] + 1;
            q.push_back(nc);
          }
        }
      }
    }
    return d;
  }
};

// Box mass by summing the base measure over every edge piece in the box.
inline selfsim::Rational box_edge_sum(const selfsim::Graph& g, const selfsim::Box& b) {
  using selfsim::Rational;
  const Params& P = g.params();
  auto matches = [&](Line l) {
    for (const Line& s : b.S) {
      bool ok = true;
      for (int j = b.k + 1; j <= P.depth(); ++j)
        ok = ok && P.lam_at(l.lam, j) == P.lam_at(s.lam, j) && P.theta_at(l.theta, j) == P.theta_at(s.theta, j);
      if (ok) return true;
    }
    return false;
  };
  Rational total = 0;
  for (std::int64_t m = g.lo(); m < g.hi(); ++m) {
    Rational a = std::max(Rational(m), b.lo), c = std::min(Rational(m + 1), b.hi);
    if (c <= a) continue;
    for (std::uint32_t i = 0; i < g.line_count(); ++i)
      if (matches(g.line_at(i))) total += (c - a) * g.edge_mass(selfsim::Edge{m, g.line_at(i)});
  }
  return total;
}

// Entry-by-entry law of the point whose first k entries are redrawn with
// probability proportional to their weights.
inline selfsim::PointLaw entry_law(const selfsim::Graph& g, std::int64_t m, Line base, int k, bool lam_free) {
  const Params& P = g.params();
  std::vector<int> lam = P.lam_entries(base.lam), th = P.theta_entries(base.theta);
  lam.resize(P.depth(), selfsim::kEnd);
  th.resize(P.depth(), selfsim::kEnd);
  selfsim::PointLaw out;
  std::vector<int> a(k, 0), b(k, 0);
  for (;;) {
    selfsim::Rational p = 1;
    std::vector<int> l2 = lam, t2 = th;
    for (int j = 0; j < k; ++j) {
      if (lam_free) {
        l2[j] = a[j];
        p *= P.w1(a[j]) / P.S1();
      }
      t2[j] = b[j];
      p *= P.w2(b[j]) / P.S2();
    }
    out[g.vertex_id(g.normalize(m, l2, t2))] += p;
    int j = 0;
    for (; j < k; ++j) {
      if (++b[j] < P.n2()) break;
      b[j] = 0;
      if (lam_free && ++a[j] < P.n1()) break;
      a[j] = 0;
    }
    if (j == k) break;
  }
  return out;
}


}  // namespace oracle

#pragma once

// Reference modulus computations on small graphs, independent of the
// library solvers: every simple path is enumerated and the primal problem
// over edge densities is solved by a log-barrier interior point method.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <set>
#include <utility>
#include <vector>

namespace oracle {

// Simple graph on n vertices as an edge list.
struct SmallGraph {
  int n = 0;
  std::vector<std::pair<int, int>> edges;
};

// Every simple path from s to t, as edge index lists.
inline std::vector<std::vector<int>> simple_paths(const SmallGraph& G, int s, int t) {
  std::vector<std::vector<int>> out;
  std::vector<int> path;
  std::vector<char> on(G.n, 0);
  std::function<void(int)> dfs = [&](int v) {
    if (v == t) {
      out.push_back(path);
      return;
    }
    on[v] = 1;
    for (int e = 0; e < static_cast<int>(G.edges.size()); ++e) {
      auto [a, b] = G.edges[e];
      int o = a == v ? b : b == v ? a : -1;
      if (o < 0 || on[o]) continue;
      path.push_back(e);
      dfs(o);
      path.pop_back();
    }
    on[v] = 0;
  };
  dfs(s);
  return out;
}

// Solves A x = b by Gaussian elimination with partial pivoting.
inline std::vector<double> dense_solve(std::vector<std::vector<double>> A, std::vector<double> b) {
  const int n = static_cast<int>(b.size());
  for (int c = 0; c < n; ++c) {
    int p = c;
    for (int r = c + 1; r < n; ++r)
      if (std::abs(A[r][c]) > std::abs(A[p][c])) p = r;
    std::swap(A[p], A[c]);
    std::swap(b[p], b[c]);
    for (int r = c + 1; r < n; ++r) {
      double f = A[r][c] / A[c][c];
      for (int k = c; k < n; ++k) A[r][k] -= f * A[c][k];
      b[r] -= f * b[c];
    }
  }
  for (int r = n - 1; r >= 0; --r) {
    for (int k = r + 1; k < n; ++k) b[r] -= A[r][k] * b[k];
    b[r] /= A[r][r];
  }
  return b;
}

// min sum mass g^P subject to sum over each path of length * g >= 1.
inline double exhaustive_modulus(const SmallGraph& G, const std::vector<double>& mass,
                                 const std::vector<double>& length, int s, int t, double P) {
  auto paths = simple_paths(G, s, t);
  const int E = static_cast<int>(G.edges.size());
  if (paths.empty()) return 0;
  // Only edges on some path matter; the others get density 0.
  std::vector<int> used;
  for (int e = 0; e < E; ++e)
    for (auto& p : paths)
      if (std::find(p.begin(), p.end(), e) != p.end()) {
        used.push_back(e);
        break;
      }
  const int n = static_cast<int>(used.size());
  std::vector<std::vector<double>> rows;
  for (auto& p : paths) {
    std::vector<double> r(n, 0);
    for (int e : p) r[std::find(used.begin(), used.end(), e) - used.begin()] += length[e];
    rows.push_back(r);
  }
  std::vector<double> nu(n), g(n);
  for (int i = 0; i < n; ++i) {
    nu[i] = mass[used[i]];
    g[i] = 2 / length[used[i]];
  }
  const double mcons = static_cast<double>(rows.size() + n);
  auto objective = [&](const std::vector<double>& x) {
    double f = 0;
    for (int i = 0; i < n; ++i) f += nu[i] * std::pow(x[i], P);
    return f;
  };
  auto barrier = [&](const std::vector<double>& x, double tt) -> double {
    double v = tt * objective(x);
    for (int i = 0; i < n; ++i) {
      if (x[i] <= 0) return INFINITY;
      v -= std::log(x[i]);
    }
    for (auto& r : rows) {
      double sl = -1;
      for (int i = 0; i < n; ++i) sl += r[i] * x[i];
      if (sl <= 0) return INFINITY;
      v -= std::log(sl);
    }
    return v;
  };
  double tt = 1;
  for (int outer = 0; outer < 200; ++outer) {
    for (int it = 0; it < 200; ++it) {
      std::vector<double> grad(n, 0);
      std::vector<std::vector<double>> H(n, std::vector<double>(n, 0));
      for (int i = 0; i < n; ++i) {
        grad[i] = tt * nu[i] * P * std::pow(g[i], P - 1) - 1 / g[i];
        H[i][i] = tt * nu[i] * P * (P - 1) * std::pow(g[i], P - 2) + 1 / (g[i] * g[i]);
      }
      for (auto& r : rows) {
        double sl = -1;
        for (int i = 0; i < n; ++i) sl += r[i] * g[i];
        for (int i = 0; i < n; ++i) {
          grad[i] -= r[i] / sl;
          for (int j = 0; j < n; ++j) H[i][j] += r[i] * r[j] / (sl * sl);
        }
      }
      std::vector<double> neg(n);
      for (int i = 0; i < n; ++i) neg[i] = -grad[i];
      std::vector<double> d = dense_solve(H, neg);
      double dec = 0;
      for (int i = 0; i < n; ++i) dec -= grad[i] * d[i];
      if (dec / 2 < 1e-14) break;
      double a = 1, f0 = barrier(g, tt);
      std::vector<double> x(n);
      for (int ls = 0; ls < 100; ++ls, a *= 0.5) {
        for (int i = 0; i < n; ++i) x[i] = g[i] + a * d[i];
        if (barrier(x, tt) <= f0 - 0.25 * a * dec) break;
      }
      g = x;
    }
    if (mcons / tt < 1e-12 * objective(g)) break;
    tt *= 8;
  }
  return objective(g);
}

// Canonical code of a graph on at most 9 vertices: the smallest upper
// triangle bit string over relabelings that sort vertices by degree.
inline std::uint64_t canonical_code(const SmallGraph& G) {
  std::vector<int> deg(G.n, 0);
  std::vector<std::vector<char>> adj(G.n, std::vector<char>(G.n, 0));
  for (auto [a, b] : G.edges) {
    ++deg[a];
    ++deg[b];
    adj[a][b] = adj[b][a] = 1;
  }
  std::vector<int> order(G.n);
  for (int i = 0; i < G.n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](int x, int y) { return deg[x] > deg[y] || (deg[x] == deg[y] && x < y); });
  // Blocks of equal degree, permuted independently.
  std::vector<std::pair<int, int>> blocks;
  for (int i = 0; i < G.n;) {
    int j = i;
    while (j < G.n && deg[order[j]] == deg[order[i]]) ++j;
    blocks.push_back({i, j});
    i = j;
  }
  std::uint64_t best = ~std::uint64_t{0};
  std::function<void(std::size_t)> rec = [&](std::size_t b) {
    if (b == blocks.size()) {
      std::uint64_t code = 0;
      for (int i = 0; i < G.n; ++i)
        for (int j = i + 1; j < G.n; ++j) code = (code << 1) | static_cast<std::uint64_t>(adj[order[i]][order[j]]);
      best = std::min(best, code);
      return;
    }
    auto [lo, hi] = blocks[b];
    std::sort(order.begin() + lo, order.begin() + hi);
    do rec(b + 1);
    while (std::next_permutation(order.begin() + lo, order.begin() + hi));
  };
  rec(0);
  return (best << 4) | static_cast<std::uint64_t>(G.n);
}

// Connected simple graphs with 1..max_edges edges, one per isomorphism class.
inline std::vector<SmallGraph> connected_graphs(int max_edges) {
  std::vector<SmallGraph> all, level{SmallGraph{2, {{0, 1}}}};
  for (int e = 1; e <= max_edges; ++e) {
    all.insert(all.end(), level.begin(), level.end());
    if (e == max_edges) break;
    std::set<std::uint64_t> seen;
    std::vector<SmallGraph> next;
    auto offer = [&](const SmallGraph& h) {
      if (seen.insert(canonical_code(h)).second) next.push_back(h);
    };
    for (const SmallGraph& G : level) {
      for (int a = 0; a < G.n; ++a) {
        SmallGraph h = G;
        h.edges.push_back({a, G.n});
        h.n = G.n + 1;
        offer(h);
        for (int b = a + 1; b < G.n; ++b) {
          bool present = false;
          for (auto [x, y] : G.edges) present = present || (x == a && y == b) || (x == b && y == a);
          if (present) continue;
          SmallGraph h2 = G;
          h2.edges.push_back({a, b});
          offer(h2);
        }
      }
    }
    level = next;
  }
  return all;
}

}  // namespace oracle

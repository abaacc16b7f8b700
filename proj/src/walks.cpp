#include "selfsim/walks.hpp"

#include <algorithm>
#include <stdexcept>

#include "selfsim/geodesy.hpp"

namespace selfsim {

std::int64_t steps_to_plain(const Params& P, std::int64_t m, int dir, std::int64_t min_len) {
  std::int64_t n = min_len;
  while (P.ord(m + dir * n) != 0) ++n;
  return n;
}

std::int64_t next_of_order(const Params& P, std::int64_t m, int dir, int k) {
  std::int64_t t = m;
  while (P.ord(t) != k) t += dir;
  return t;
}

std::uint32_t rolled(const Params& P, std::uint32_t lam, int i, int k) {
  for (int j = i + 1; j < k; ++j) lam = P.lam_set(lam, j, kSpade);
  return lam;
}

namespace {

void check_scale(const Graph& g, int k) {
  if (k < 1 || k > g.depth()) throw std::invalid_argument("scale index must lie in [1, depth]");
}

void check_dir(int dir) {
  if (dir != 1 && dir != -1) throw std::invalid_argument("direction must be +1 or -1");
}

void check_span(const Graph& g, std::int64_t a, std::int64_t b) {
  if (!g.in_window(a) || !g.in_window(b)) throw WindowError("walk construction leaves the window");
}

// Steps along l from the current end of w until position t.
void run_to(Walk& w, Line l, std::int64_t t) {
  std::int64_t d = t - w.last();
  push_steps(w, d >= 0 ? 1 : -1, l, d >= 0 ? d : -d);
}

std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return (a + b - 1) / b; }

}  // namespace

Walk gluing_walk(const Graph& g, std::int64_t m, Line l, int k, int dir) {
  check_scale(g, k);
  check_dir(dir);
  const Params& P = g.params();
  std::int64_t n0 = steps_to_plain(P, m, dir, P.sigma(k));
  std::int64_t t = next_of_order(P, m + dir * n0, dir, k);
  check_span(g, m, t);
  Walk w = empty_walk(m, l);
  run_to(w, l, t);
  return w;
}

Walk descend_to_socket(const Graph& g, std::int64_t m, Line l, int k, int dir) {
  check_scale(g, k);
  check_dir(dir);
  const Params& P = g.params();
  std::int64_t n = steps_to_plain(P, m, dir, ceil_div(3 * P.sigma(k), 2));
  std::int64_t pv = m + dir * n;
  std::int64_t t0 = next_of_order(P, pv + dir * P.sigma(k), dir, k);
  check_span(g, m, t0);
  Walk w = empty_walk(m, l);
  for (int i = k - 1; i >= 0; --i) {
    std::int64_t ti = i == 0 ? t0 : t0 - dir * P.sigma(i);
    run_to(w, Line{rolled(P, l.lam, i, k), l.theta}, ti);
  }
  for (int i = 1; i < k; ++i) {
    std::int64_t ti = t0 - dir * P.sigma(i);
    w.tau.push_back(static_cast<int>(dir * (ti - m)));
  }
  return w;
}

Walk ascend_from_socket(const Graph& g, std::int64_t m0, int k0, int k, Line target, int dir) {
  check_scale(g, k);
  check_scale(g, k0);
  check_dir(dir);
  const Params& P = g.params();
  if (k > k0) throw std::invalid_argument("ascend_from_socket needs k <= k0");
  if (P.ord(m0) != k0) throw std::invalid_argument("start position does not have order k0");
  for (int j = k; j < k0; ++j)
    if (P.lam_at(target.lam, j) != kSpade)
      throw std::invalid_argument("target label must carry the gluing symbol in entries k..k0-1");
  std::int64_t last = k >= 2 ? P.sigma(k - 1) : 0;
  std::int64_t L = steps_to_plain(P, m0, dir, std::max(P.sigma(k), last + ceil_div(P.sigma(k), 2)));
  check_span(g, m0, m0 + dir * L);
  Line first{rolled(P, target.lam, 0, k), target.theta};
  Walk w = empty_walk(m0, first);
  for (int i = 0; i < k; ++i) {
    std::int64_t stop = i + 1 < k ? m0 + dir * P.sigma(i + 1) : m0 + dir * L;
    run_to(w, Line{rolled(P, target.lam, i, k), target.theta}, stop);
  }
  for (int i = 1; i < k; ++i) w.tau.push_back(static_cast<int>(P.sigma(i)));
  return w;
}

LabelDiff label_diff(const Graph& g, const Vertex& x, const Vertex& y) {
  const Params& P = g.params();
  LabelDiff best;
  bool have = false;
  for (const Line& a : g.fiber(x)) {
    for (const Line& b : g.fiber(y)) {
      std::vector<int> N;
      for (int j = 1; j <= P.depth(); ++j)
        if (P.lam_at(a.lam, j) != P.lam_at(b.lam, j) || P.theta_at(a.theta, j) != P.theta_at(b.theta, j))
          N.push_back(j);
      bool better = !have || N.size() < best.N.size() ||
                    (N.size() == best.N.size() &&
                     std::make_pair(g.line_index(a), g.line_index(b)) <
                         std::make_pair(g.line_index(best.lx), g.line_index(best.ly)));
      if (better) {
        have = true;
        best.lx = a;
        best.ly = b;
        best.N = N;
      }
    }
  }
  best.kmax = best.N.empty() ? 0 : best.N.back();
  return best;
}

GoodWalk good_walk_direct(const Graph& g, const Vertex& x, const Vertex& y) {
  const Params& P = g.params();
  GoodWalk gw;
  gw.diff = label_diff(g, x, y);
  gw.dir = y.m >= x.m ? 1 : -1;
  const int dir = gw.dir;
  const Line ly = gw.diff.ly;
  Walk w = empty_walk(x.m, gw.diff.lx);
  Line cur = gw.diff.lx;
  for (int k : gw.diff.N) {
    if (P.theta_at(cur.theta, k) == P.theta_at(ly.theta, k)) {
      w = concat(g, w, gluing_walk(g, w.last(), cur, k, dir));
      w.s[k] = static_cast<int>(w.len());
      cur.lam = P.lam_set(cur.lam, k, P.lam_at(ly.lam, k));
      check_span(g, w.last(), w.last() + dir);
      push_step(w, dir, cur);
    } else {
      Neck neck;
      neck.k = k;
      neck.start = static_cast<int>(w.len());
      w = concat(g, w, descend_to_socket(g, w.last(), cur, k, dir));
      w.s[k] = static_cast<int>(w.len());
      neck.socket = w.s[k];
      neck.in_tau = w.tau;
      w.tau.clear();
      Line target = cur;
      for (int j = 1; j <= k; ++j) {
        target.lam = P.lam_set(target.lam, j, P.lam_at(ly.lam, j));
        target.theta = P.theta_set(target.theta, j, P.theta_at(ly.theta, j));
      }
      std::map<int, int> keep = w.s;
      w = concat(g, w, ascend_from_socket(g, w.last(), k, k, target, dir));
      w.s = keep;
      neck.end = static_cast<int>(w.len());
      neck.out_tau = w.tau;
      w.tau.clear();
      gw.necks.push_back(neck);
      cur = target;
    }
  }
  if (!(cur == ly)) throw std::logic_error("good walk sweep did not reach the target labels");
  gw.sweep_end = w.len();
  check_span(g, w.last(), y.m);
  run_to(w, cur, y.m);
  // Markers for entries that need no change: half a scale before the next one.
  for (int k = gw.diff.kmax - 1; k >= 1; --k)
    if (!w.s.count(k)) w.s[k] = std::max(0, w.s[k + 1] - static_cast<int>(ceil_div(P.sigma(k + 1), 2)));
  w.tau.clear();
  gw.walk = w;
  return gw;
}

GoodWalk good_walk(const Graph& g, const Vertex& x, const Vertex& y) {
  const Params& P = g.params();
  Bfs bfs(g);
  bfs.run(g.vertex_id(x));
  int d = bfs.dist(g.vertex_id(y));
  if (d < 0) throw WindowError("window-limited distance: endpoints not connected in the window");
  if (d <= 1) throw std::invalid_argument("good walks need d(x, y) > 1");
  LabelDiff diff = label_diff(g, x, y);
  if (P.disc_log(Rational(d)) >= diff.kmax) {
    GoodWalk gw = good_walk_direct(g, x, y);
    gw.distance = d;
    return gw;
  }
  const int kmax = diff.kmax;
  bool lamOnly = P.theta_at(diff.lx.theta, kmax) == P.theta_at(diff.ly.theta, kmax);
  int bestD = -1;
  std::uint64_t bestId = 0;
  for (auto id : bfs.reached()) {
    int du = bfs.dist(id);
    if (bestD >= 0 && du > bestD) break;
    Vertex v = g.vertex_at(id);
    if (v.order != kmax) continue;
    if (v.kind != Kind::Socket && !(lamOnly && v.kind == Kind::Gluing)) continue;
    if (bestD < 0 || id < bestId) {
      bestD = du;
      bestId = id;
    }
  }
  if (bestD < 0) throw WindowError("no socket point of the required order in the window");
  Vertex u = g.vertex_at(bestId);
  auto half = [&](const Vertex& a, const Vertex& b) {
    if (a == b) {
      GoodWalk t;
      t.walk = empty_walk(a.m, a.rep);
      t.diff = label_diff(g, a, b);
      return t;
    }
    GoodWalk t = good_walk_direct(g, a, b);
    t.distance = vertex_distance(g, a, b);
    return t;
  };
  GoodWalk gw;
  gw.diff = diff;
  gw.distance = d;
  gw.split = true;
  gw.dir = y.m >= x.m ? 1 : -1;
  gw.halves.push_back(half(x, u));
  gw.halves.push_back(half(u, y));
  gw.walk = concat(g, gw.halves[0].walk, gw.halves[1].walk);
  const int shift = static_cast<int>(gw.halves[0].walk.len());
  gw.necks = gw.halves[0].necks;
  for (Neck n : gw.halves[1].necks) {
    n.start += shift;
    n.socket += shift;
    n.end += shift;
    for (int& t : n.in_tau) t += shift;
    for (int& t : n.out_tau) t += shift;
    gw.necks.push_back(n);
  }
  gw.walk.s.clear();
  gw.walk.ukmax = static_cast<int>(gw.halves[0].walk.len());
  gw.sweep_end = gw.walk.len();
  return gw;
}

Walk lift(const Graph& g, const Walk& w, Line start, int freeze, bool follow_markers) {
  const Params& P = g.params();
  if (!g.in_window(w.first())) throw WindowError("lift start outside the window");
  std::vector<char> marker(w.len() + 1, 0);
  if (follow_markers)
    for (int t : w.tau)
      if (t >= 0 && t <= static_cast<int>(w.len())) marker[t] = 1;
  Walk r = empty_walk(w.first(), start);
  Line prev = w.start_line, cur = start;
  for (std::size_t i = 0; i < w.len(); ++i) {
    int t = g.order_at(w.pos[i]);
    Line src = w.lines[i];
    if (t >= 1 && t <= P.depth() && t > freeze) {
      Kind kind = g.kind_of(t, cur.lam);
      if (P.lam_at(src.lam, t) != P.lam_at(prev.lam, t)) cur.lam = P.lam_set(cur.lam, t, P.lam_at(src.lam, t));
      if (marker[i]) cur.lam = P.lam_set(cur.lam, t, kSpade);
      if (P.theta_at(src.theta, t) != P.theta_at(prev.theta, t)) {
        if (kind != Kind::Socket) throw std::invalid_argument("lift cannot follow a theta change at a gluing point");
        cur.theta = P.theta_set(cur.theta, t, P.theta_at(src.theta, t));
      }
    }
    push_step(r, static_cast<int>(w.pos[i + 1] - w.pos[i]), cur);
    prev = src;
  }
  r.tau = w.tau;
  r.s = w.s;
  r.ukmax = w.ukmax;
  return r;
}

}  // namespace selfsim

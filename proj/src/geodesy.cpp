#include "selfsim/geodesy.hpp"

#include <algorithm>
#include <limits>
#include <set>
#include <tuple>

namespace selfsim {

Bfs::Bfs(const Graph& g) : g_(g), dist_(g.vertex_count(), -1) {}

void Bfs::run(const std::vector<std::uint64_t>& sources, int radius) {
  for (auto id : order_) dist_[id] = -1;
  order_.clear();
  for (auto s : sources) {
    if (dist_[s] == 0) continue;
    dist_[s] = 0;
    order_.push_back(s);
  }
  for (std::size_t head = 0; head < order_.size(); ++head) {
    std::uint64_t u = order_[head];
    int du = dist_[u];
    if (radius >= 0 && du >= radius) continue;
    g_.for_each_edge(u, [&](std::uint64_t v, std::uint64_t) {
      if (dist_[v] < 0) {
        dist_[v] = du + 1;
        order_.push_back(v);
      }
    });
  }
}

namespace {

bool interior(const Point& p) { return p.off != 0; }

std::uint64_t endpoint_id(const Graph& g, const Point& p, int side) {
  return g.vertex_id(g.normalize(p.m + side, p.line));
}

}  // namespace

PointField::PointField(const Graph& g, const Point& x, int radius)
    : g_(g), x_(x), a_(g), b_(g), interior_(interior(x)) {
  if (x.off < 0 || x.off >= 1) throw std::invalid_argument("edge offset must lie in [0, 1)");
  a_.run(endpoint_id(g, x, 0), radius);
  if (interior_) b_.run(endpoint_id(g, x, 1), radius);
}

bool PointField::reached(std::uint64_t id) const {
  return a_.dist(id) >= 0 || (interior_ && b_.dist(id) >= 0);
}

Rational PointField::dist(std::uint64_t id) const {
  if (!reached(id)) throw WindowError("window-limited distance: vertex not reached");
  if (!interior_) return Rational(a_.dist(id));
  Rational best = -1;
  if (a_.dist(id) >= 0) best = x_.off + a_.dist(id);
  if (b_.dist(id) >= 0) {
    Rational c = (1 - x_.off) + b_.dist(id);
    if (best < 0 || c < best) best = c;
  }
  return best;
}

Rational PointField::dist_edge_point(const Edge& e, const Rational& t) const {
  if (interior_ && e.left == x_.m && e.line == x_.line) {
    Rational d = t - x_.off;
    return d < 0 ? Rational(-d) : d;
  }
  std::uint64_t l = g_.vertex_id(g_.left(e)), r = g_.vertex_id(g_.right(e));
  Rational best = -1;
  if (reached(l)) best = dist(l) + t;
  if (reached(r)) {
    Rational c = dist(r) + (1 - t);
    if (best < 0 || c < best) best = c;
  }
  if (best < 0) throw WindowError("window-limited distance: edge not reached");
  return best;
}

std::vector<std::uint64_t> PointField::reached_vertices() const {
  std::vector<std::uint64_t> out = a_.reached();
  if (interior_) out.insert(out.end(), b_.reached().begin(), b_.reached().end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Rational distance(const Graph& g, const Point& x, const Point& y) {
  PointField f(g, x);
  if (!interior(y)) return f.dist(g.vertex_id(g.normalize(y.m, y.line)));
  return f.dist_edge_point(Edge{y.m, y.line}, y.off);
}

int vertex_distance(const Graph& g, const Vertex& a, const Vertex& b) {
  Bfs bfs(g);
  bfs.run(g.vertex_id(a));
  int d = bfs.dist(g.vertex_id(b));
  if (d < 0) throw WindowError("window-limited distance: vertices not connected in the window");
  return d;
}

namespace {

struct Anchor {
  Vertex v;
  Rational cost;
};

std::vector<Anchor> anchors(const Graph& g, const Point& p) {
  if (!interior(p)) return {Anchor{g.normalize(p.m, p.line), 0}};
  return {Anchor{g.normalize(p.m, p.line), p.off}, Anchor{g.normalize(p.m + 1, p.line), 1 - p.off}};
}

auto vkey(const Vertex& v) { return std::make_tuple(v.m, v.rep.lam, v.rep.theta); }

}  // namespace

Walk geodesic_walk(const Graph& g, const Point& x, const Point& y) {
  auto ax = anchors(g, x), ay = anchors(g, y);
  Bfs bfs(g);
  Rational best = -1;
  Anchor bx, by;
  for (auto& b : ay) {
    bfs.run(g.vertex_id(b.v));
    for (auto& a : ax) {
      int d = bfs.dist(g.vertex_id(a.v));
      if (d < 0) continue;
      Rational c = a.cost + d + b.cost;
      bool better = best < 0 || c < best ||
                    (c == best && std::make_tuple(vkey(a.v), vkey(b.v)) < std::make_tuple(vkey(bx.v), vkey(by.v)));
      if (better) {
        best = c;
        bx = a;
        by = b;
      }
    }
  }
  if (best < 0) throw WindowError("window-limited distance: points not connected in the window");
  bfs.run(g.vertex_id(by.v));
  Walk w = empty_walk(bx.v.m, x.line);
  std::uint64_t cur = g.vertex_id(bx.v);
  const std::uint64_t target = g.vertex_id(by.v);
  while (cur != target) {
    int dc = bfs.dist(cur);
    bool found = false;
    std::tuple<std::int64_t, std::uint32_t, std::uint32_t, std::uint32_t> bestKey;
    std::uint64_t bestNext = 0, bestEdge = 0;
    g.for_each_edge(cur, [&](std::uint64_t v, std::uint64_t e) {
      if (bfs.dist(v) != dc - 1) return;
      Vertex vv = g.vertex_at(v);
      auto key = std::make_tuple(vv.m, vv.rep.lam, vv.rep.theta, static_cast<std::uint32_t>(e % g.line_count()));
      if (!found || key < bestKey) {
        found = true;
        bestKey = key;
        bestNext = v;
        bestEdge = e;
      }
    });
    Edge e = g.edge_at(bestEdge);
    Vertex nv = g.vertex_at(bestNext);
    push_step(w, nv.m > g.vertex_at(cur).m ? 1 : -1, e.line);
    cur = bestNext;
  }
  if (w.len() > 0) w.start_line = w.lines[0];
  return w;
}

BallResult ball(const Graph& g, const Point& center, const Rational& r, bool closed) {
  if (r < 0) throw std::invalid_argument("negative radius");
  mpz_class fl = r.get_num() / r.get_den();
  int radius = static_cast<int>(fl.get_si()) + 1;
  PointField f(g, center, radius);
  BallResult out;
  std::set<std::uint64_t> edges;
  for (auto id : f.reached_vertices()) {
    Rational d = f.dist(id);
    if (closed ? d <= r : d < r) out.vertices.emplace_back(id, d);
    g.for_each_edge(id, [&](std::uint64_t, std::uint64_t e) { edges.insert(e); });
  }
  if (interior(center)) edges.insert(g.edge_id(Edge{center.m, center.line}));
  auto clamp01 = [](const Rational& q) { return q < 0 ? Rational(0) : (q > 1 ? Rational(1) : q); };
  for (auto eid : edges) {
    Edge e = g.edge_at(eid);
    Rational cov;
    if (interior(center) && e.left == center.m && e.line == center.line) {
      Rational a = center.off - r, b = center.off + r;
      cov = clamp01(b) - clamp01(a);
    } else {
      std::uint64_t l = g.vertex_id(g.left(e)), rr = g.vertex_id(g.right(e));
      Rational s = 0;
      if (f.reached(l)) s += clamp01(r - f.dist(l));
      if (f.reached(rr)) s += clamp01(r - f.dist(rr));
      cov = s > 1 ? Rational(1) : s;
    }
    if (cov > 0) out.edges.emplace_back(eid, cov);
  }
  return out;
}

Rational ball_mass(const Graph& g, const BallResult& b) {
  Rational m = 0;
  for (auto& [eid, cov] : b.edges) m += cov * g.edge_mass(g.edge_at(eid));
  return m;
}

namespace {

bool tail_matches(const Params& P, Line a, Line b, int k) {
  for (int j = k + 1; j <= P.depth(); ++j)
    if (P.lam_at(a.lam, j) != P.lam_at(b.lam, j) || P.theta_at(a.theta, j) != P.theta_at(b.theta, j)) return false;
  return true;
}

bool line_in_box(const Graph& g, const Box& b, Line l) {
  for (const Line& s : b.S)
    if (tail_matches(g.params(), l, s, b.k)) return true;
  return false;
}

}  // namespace

bool box_contains_vertex(const Graph& g, const Box& b, const Vertex& v) {
  Rational t(v.m);
  if (t < b.lo || t > b.hi) return false;
  for (const Line& l : g.fiber(v))
    if (line_in_box(g, b, l)) return true;
  return false;
}

bool box_contains_edge_point(const Graph& g, const Box& b, const Edge& e, const Rational& t) {
  Rational p = Rational(e.left) + t;
  if (p < b.lo || p > b.hi) return false;
  return line_in_box(g, b, e.line);
}

std::vector<Line> outer_labels(const Graph& g, const Point& x, const Rational& R) {
  const Params& P = g.params();
  Rational t = Graph::project(x);
  Rational a = t - R, b = t + R;
  mpz_class cl, fl;
  mpz_cdiv_q(cl.get_mpz_t(), a.get_num_mpz_t(), a.get_den_mpz_t());
  mpz_fdiv_q(fl.get_mpz_t(), b.get_num_mpz_t(), b.get_den_mpz_t());
  int M = 0;
  for (std::int64_t m = cl.get_si(); m <= fl.get_si(); ++m) M = std::max(M, P.ord(m));
  int lg2R = P.disc_log(Rational(2 * R));
  if (M <= lg2R || M > P.depth()) return {x.line};
  std::vector<Line> out;
  for (int s1 = 0; s1 < P.n1(); ++s1)
    for (int s2 = 0; s2 < P.n2(); ++s2)
      out.push_back(Line{P.lam_set(x.line.lam, M, s1), P.theta_set(x.line.theta, M, s2)});
  return out;
}

Sandwich ball_box_sandwich(const Graph& g, const Point& x, const Rational& R, std::int64_t C) {
  const Params& P = g.params();
  Rational t = Graph::project(x);
  Sandwich sw;
  sw.inner = Box{t - R / 2, t + R / 2, {x.line}, P.disc_log(Rational(R / C))};
  sw.outer = Box{t - R, t + R, outer_labels(g, x, R), P.disc_log(Rational(2 * R))};
  mpz_class fl;
  mpz_fdiv_q(fl.get_mpz_t(), R.get_num_mpz_t(), R.get_den_mpz_t());
  PointField f(g, x, static_cast<int>(fl.get_si()) + 2);
  const Rational half(1, 2);

  // Inner box members: positions in the interval, lines agreeing with x's
  // line beyond the inner depth.
  sw.inner_ok = true;
  {
    int k = std::min(sw.inner.k, P.depth());
    std::vector<Line> lines;
    std::uint32_t cl = P.pow1(k), ct = P.pow2(k);
    std::uint32_t baseL = x.line.lam - x.line.lam % cl, baseT = x.line.theta - x.line.theta % ct;
    for (std::uint32_t a = 0; a < cl; ++a)
      for (std::uint32_t b = 0; b < ct; ++b) lines.push_back(Line{baseL + a, baseT + b});
    mpz_class c0, c1;
    mpz_cdiv_q(c0.get_mpz_t(), sw.inner.lo.get_num_mpz_t(), sw.inner.lo.get_den_mpz_t());
    mpz_fdiv_q(c1.get_mpz_t(), sw.inner.hi.get_num_mpz_t(), sw.inner.hi.get_den_mpz_t());
    for (std::int64_t m = c0.get_si(); m <= c1.get_si() && sw.inner_ok; ++m) {
      if (!g.in_window(m)) throw WindowError("ball/box check leaves the window");
      for (const Line& l : lines) {
        std::uint64_t id = g.vertex_id(g.normalize(m, l));
        if (!f.reached(id) || f.dist(id) > R) { sw.inner_ok = false; break; }
        Rational mid = Rational(m) + half;
        if (mid <= sw.inner.hi && g.in_window(m + 1)) {
          if (f.dist_edge_point(Edge{m, l}, half) > R) { sw.inner_ok = false; break; }
        }
      }
    }
  }
  // Closed ball members must lie in the outer box.
  sw.outer_ok = true;
  for (auto id : f.reached_vertices()) {
    Vertex v = g.vertex_at(id);
    if (f.dist(id) <= R && !box_contains_vertex(g, sw.outer, v)) { sw.outer_ok = false; break; }
    bool bad = false;
    g.for_each_edge(id, [&](std::uint64_t, std::uint64_t eid) {
      if (bad) return;
      Edge e = g.edge_at(eid);
      if (f.dist_edge_point(e, half) <= R && !box_contains_edge_point(g, sw.outer, e, half)) bad = true;
    });
    if (bad) { sw.outer_ok = false; break; }
  }
  return sw;
}

}  // namespace selfsim

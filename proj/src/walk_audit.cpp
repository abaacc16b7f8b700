#include "selfsim/walk_audit.hpp"

#include <algorithm>
#include <cstdlib>

#include "selfsim/geodesy.hpp"

namespace selfsim {

bool lam_le(const Params& P, std::uint32_t lam, std::uint32_t other) {
  int lo = 0, hi = 0;
  for (int j = 1; j <= P.depth(); ++j)
    if (P.lam_at(lam, j) != P.lam_at(other, j)) {
      if (!lo) lo = j;
      hi = j;
    }
  if (!lo) return true;
  for (int j = lo; j <= hi; ++j)
    if (P.lam_at(lam, j) != kSpade) return false;
  return true;
}

namespace {

std::string common(const Graph& g, const Walk& w, std::int64_t m, Line l, int dir) {
  std::string e = check_walk(g, w);
  if (!e.empty()) return e;
  if (w.first() != m || !(walk_start(g, w) == g.normalize(m, l))) return "walk does not start at the given point";
  if (w.len() > 0 && monotone_dir(w) != dir) return "walk is not monotone in the requested direction";
  return "";
}

void bound(Audit& a, double value, double lo, const std::string& what) {
  if (!a.error.empty()) return;
  if (value < lo) a.error = what + " below its lower bound";
  else a.C = std::max(a.C, value / lo);
}

}  // namespace

Audit audit_gluing_walk(const Graph& g, const Walk& w, std::int64_t m, Line l, int k, int dir) {
  const Params& P = g.params();
  Audit a;
  a.error = common(g, w, m, l, dir);
  if (!a.ok()) return a;
  Vertex v = walk_end(g, w);
  Kind want = P.spade_prefix(l.lam) >= k - 1 ? Kind::Socket : Kind::Gluing;
  if (v.order != k || v.kind != want) a.error = "(1) endpoint is not a point of order k of the expected kind";
  double sk = static_cast<double>(P.sigma(k));
  bound(a, static_cast<double>(dir * (w.last() - m)), sk, "(2) displacement");
  bound(a, static_cast<double>(w.len()), sk, "(3) length");
  for (const Line& e : w.lines)
    if (!(e == l) && a.ok()) a.error = "(4) edge labels are not constant";
  return a;
}

Audit audit_descend(const Graph& g, const Walk& w, std::int64_t m, Line l, int k, int dir) {
  const Params& P = g.params();
  Audit a;
  a.error = common(g, w, m, l, dir);
  if (!a.ok()) return a;
  const int len = static_cast<int>(w.len());
  Vertex v = walk_end(g, w);
  if (v.order != k || v.kind != Kind::Socket) return a.error = "(1) endpoint is not a socket point of order k", a;
  for (int j = k + 1; j <= P.depth(); ++j)
    if (P.lam_at(w.end_line().lam, j) != P.lam_at(l.lam, j)) return a.error = "(1) entries above k changed", a;
  double sk = static_cast<double>(P.sigma(k));
  bound(a, static_cast<double>(dir * (w.last() - m)), sk, "(2) displacement");
  bound(a, len, sk, "(2) length");
  for (const Line& e : w.lines)
    if (e.theta != l.theta) return a.error = "(3) theta label is not constant", a;
  for (int j = 1; j <= len && 2 * (j - 1) < 3 * P.sigma(k); ++j)
    if (!(w.lines[j - 1] == l)) return a.error = "(4) labels change within the first 3 sigma_k / 2", a;
  if (static_cast<int>(w.tau.size()) != k - 1) return a.error = "(5) wrong number of markers", a;
  auto tau = [&](int i) { return w.tau[i - 1]; };
  for (int i = 1; i + 1 < k; ++i)
    if (tau(i) <= tau(i + 1)) return a.error = "(5) markers are not strictly decreasing", a;
  if (k >= 2) {
    if (2 * tau(k - 1) < 3 * P.sigma(k)) return a.error = "(5) tau_{k-1} below 3 sigma_k / 2", a;
    a.C = std::max(a.C, tau(k - 1) / sk);
  }
  for (int i = 1; i < k; ++i) {
    if (tau(i) < 0 || tau(i) > len) return a.error = "(5) marker outside the walk", a;
    if (walk_vertex(g, w, tau(i)).order != i) return a.error = "(6) marker vertex has the wrong order", a;
    bound(a, len - tau(i), static_cast<double>(P.sigma(i)), "(7) len - tau_i");
  }
  if (!a.ok()) return a;
  for (int j = 1; j <= len; ++j) {
    std::uint32_t want;
    if (k == 1 || j <= tau(k - 1)) want = l.lam;
    else if (j > tau(1)) want = rolled(P, l.lam, 0, k);
    else {
      int i = 1;
      while (!(j > tau(i + 1) && j <= tau(i))) ++i;
      want = rolled(P, l.lam, i, k);
    }
    if (w.lines[j - 1].lam != want) return a.error = "(8) label pattern differs at edge " + std::to_string(j), a;
    if (j > 1 && !lam_le(P, w.lines[j - 1].lam, w.lines[j - 2].lam)) return a.error = "labels are not nonincreasing", a;
  }
  return a;
}

Audit audit_ascend(const Graph& g, const Walk& w, std::int64_t m0, int k0, int k, Line target, int dir) {
  const Params& P = g.params();
  Audit a;
  std::string e = check_walk(g, w);
  if (!e.empty()) return a.error = e, a;
  Vertex v = walk_start(g, w);
  if (w.first() != m0 || v.order != k0 || v.kind != Kind::Socket) return a.error = "walk does not start at a socket of order k0", a;
  if (monotone_dir(w) != dir) return a.error = "walk is not monotone in the requested direction", a;
  const int len = static_cast<int>(w.len());
  Vertex p = walk_end(g, w);
  if (p.order != 0 || !(w.end_line() == target)) return a.error = "(1) endpoint is not the order-0 vertex with the target labels", a;
  double sk = static_cast<double>(P.sigma(k));
  bound(a, static_cast<double>(dir * (w.last() - m0)), sk, "(2) displacement");
  bound(a, len, sk, "(2) length");
  for (const Line& l : w.lines)
    if (l.theta != target.theta) return a.error = "(3) theta label is not constant", a;
  for (int j = 1; j <= len; ++j)
    if (2 * j > 2 * len - P.sigma(k) && !(w.lines[j - 1] == w.end_line()))
      return a.error = "(4) labels change within the last sigma_k / 2", a;
  if (static_cast<int>(w.tau.size()) != k - 1) return a.error = "(5) wrong number of markers", a;
  auto tau = [&](int i) { return w.tau[i - 1]; };
  for (int i = 1; i + 1 < k; ++i)
    if (tau(i) >= tau(i + 1)) return a.error = "(5) markers are not strictly increasing", a;
  if (k >= 2 && 2 * tau(k - 1) > 2 * len - P.sigma(k)) return a.error = "(5) tau_{k-1} too close to the end", a;
  for (int i = 1; i < k; ++i) {
    if (tau(i) < 0 || tau(i) > len) return a.error = "(5) marker outside the walk", a;
    if (walk_vertex(g, w, tau(i)).order != i) return a.error = "(6) marker vertex has the wrong order", a;
    bound(a, tau(i), static_cast<double>(P.sigma(i)), "(7) tau_i");
  }
  if (!a.ok()) return a;
  for (int j = 1; j <= len; ++j) {
    std::uint32_t lam = w.lines[j - 1].lam;
    if (k >= 2 && j <= tau(1)) {
      for (int q = 1; q <= P.depth(); ++q) {
        int want = q < k0 ? kSpade : (q == k0 ? P.lam_at(target.lam, k0) : P.lam_at(v.rep.lam, q));
        if (P.lam_at(lam, q) != want) return a.error = "(8) first segment label differs at edge " + std::to_string(j), a;
      }
    } else {
      std::uint32_t want = target.lam;
      for (int i = 1; i + 1 < k; ++i)
        if (j > tau(i) && j <= tau(i + 1)) want = rolled(P, target.lam, i, k);
      if (lam != want) return a.error = "(8) label pattern differs at edge " + std::to_string(j), a;
    }
    if (j > 1 && !lam_le(P, w.lines[j - 2].lam, lam)) return a.error = "labels are not nondecreasing", a;
  }
  return a;
}

namespace {

int lam_k(const Params& P, Line l, int k) { return P.lam_at(l.lam, k); }
int th_k(const Params& P, Line l, int k) { return P.theta_at(l.theta, k); }

// Label conditions of the one-sided construction plus its length comparisons.
void audit_direct(const Graph& g, const GoodWalk& gw, GoodWalkAudit& out) {
  const Params& P = g.params();
  const Walk& w = gw.walk;
  const Line lx = gw.diff.lx, ly = gw.diff.ly;
  const int L = static_cast<int>(w.len());
  const int kmax = gw.diff.kmax;
  for (int k : gw.diff.N) {
    if (!w.s.count(k)) { out.error = "(GWA1) missing marker s(" + std::to_string(k) + ")"; return; }
    int s = w.s.at(k);
    Vertex u = walk_vertex(g, w, s);
    bool thetaSame = th_k(P, lx, k) == th_k(P, ly, k);
    if (u.order < 1 || (!thetaSame && (u.kind != Kind::Socket || u.order != k))) {
      out.error = "(GWA1) distinguished point of the wrong kind for k = " + std::to_string(k);
      return;
    }
    for (int j = 1; j <= L; ++j) {
      Line e = w.lines[j - 1];
      bool before = j <= s;
      bool lamOk = before ? lam_k(P, e, k) == lam_k(P, lx, k)
                          : (lam_k(P, e, k) == lam_k(P, ly, k) || lam_k(P, e, k) == kSpade);
      bool thOk = thetaSame ? th_k(P, e, k) == th_k(P, lx, k)
                            : th_k(P, e, k) == th_k(P, before ? lx : ly, k);
      if (!lamOk || !thOk) {
        out.error = "(GWA1) edge " + std::to_string(j) + " violates the label rule for k = " + std::to_string(k);
        return;
      }
    }
  }
  for (int k = 1; k < kmax; ++k) {
    if (!w.s.count(k) || !w.s.count(k + 1) || w.s.at(k) >= w.s.at(k + 1)) {
      out.error = "(GWA1) s is not strictly increasing";
      return;
    }
    Vertex a = walk_vertex(g, w, w.s.at(k)), b = walk_vertex(g, w, w.s.at(k + 1));
    double sk = static_cast<double>(P.sigma(k + 1));
    double len = w.s.at(k + 1) - w.s.at(k), d = vertex_distance(g, a, b);
    out.seg_lo = std::min({out.seg_lo, len / sk, d / sk});
    out.seg_hi = std::max({out.seg_hi, len / sk, d / sk});
  }
  double span = std::max<double>(static_cast<double>(std::llabs(w.last() - w.first())),
                                 static_cast<double>(P.sigma(kmax)));
  out.len_lo = std::min(out.len_lo, L / span);
  out.len_hi = std::max(out.len_hi, L / span);
}

}  // namespace

GoodWalkAudit audit_good_walk(const Graph& g, const GoodWalk& gw, const Vertex& x, const Vertex& y) {
  const Params& P = g.params();
  GoodWalkAudit out;
  const Walk& w = gw.walk;
  out.error = check_walk(g, w);
  if (!out.ok()) return out;
  if (!(walk_start(g, w) == x) || !(walk_end(g, w) == y)) return out.error = "(GW2) endpoints differ from x, y", out;
  Bfs bfs(g);
  bfs.run(g.vertex_id(x));
  int d = bfs.dist(g.vertex_id(y));
  out.gw1 = static_cast<double>(w.len()) / d;
  for (std::size_t i = 1; i <= w.len(); ++i) {
    int di = bfs.dist(g.vertex_id(walk_vertex(g, w, i)));
    if (di <= 0) return out.error = "(GW3) walk returns to x", out;
    out.gw3 = std::max(out.gw3, static_cast<double>(i) / di);
  }
  if (!gw.split) {
    audit_direct(g, gw, out);
    return out;
  }
  const int kmax = gw.diff.kmax;
  const Line lx = gw.diff.lx, ly = gw.diff.ly;
  Vertex u = walk_vertex(g, w, static_cast<std::size_t>(w.ukmax));
  bool thetaSame = th_k(P, lx, kmax) == th_k(P, ly, kmax);
  if (u.order != kmax || !(u.kind == Kind::Socket || (thetaSame && u.kind == Kind::Gluing)))
    return out.error = "(GWA3) u_kmax has the wrong order or kind", out;
  for (int j = 1; j <= static_cast<int>(w.len()); ++j) {
    Line e = w.lines[j - 1];
    Line ref = j <= w.ukmax ? lx : ly;
    if (lam_k(P, e, kmax) != lam_k(P, ref, kmax) || th_k(P, e, kmax) != th_k(P, ref, kmax))
      return out.error = "(GWA3) edge " + std::to_string(j) + " violates the label rule at kmax", out;
  }
  for (const GoodWalk& h : gw.halves) {
    if (h.walk.len() == 0) continue;
    if (P.disc_log(Rational(h.distance)) < h.diff.kmax) return out.error = "(GWA3) half outside the one-sided regime", out;
    audit_direct(g, h, out);
    if (!out.ok()) return out;
  }
  return out;
}

std::string check_exc_estimate(const Graph& g, const Vertex& x, const Vertex& y) {
  const Params& P = g.params();
  LabelDiff diff = label_diff(g, x, y);
  int d = vertex_distance(g, x, y);
  if (P.disc_log(Rational(d)) >= diff.kmax) return "";
  for (int k : diff.N)
    if (k != diff.kmax && P.sigma(k) > d) return "sigma_" + std::to_string(k) + " exceeds d(x, y)";
  return "";
}

}  // namespace selfsim

#include "selfsim/curves.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "selfsim/geodesy.hpp"

namespace selfsim {

namespace {

Rational power(const Rational& b, int e) {
  Rational r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

std::int64_t ceil_half(std::int64_t a) { return (a + 1) / 2; }

// Appends b to a in place; b must start where a ends.
void append(Walk& a, const Walk& b) {
  if (a.last() != b.first()) throw std::logic_error("append: position mismatch");
  a.pos.insert(a.pos.end(), b.pos.begin() + 1, b.pos.end());
  a.lines.insert(a.lines.end(), b.lines.begin(), b.lines.end());
}

Walk straight(std::int64_t m, Line l, int dir, std::int64_t n) {
  Walk w = empty_walk(m, l);
  push_steps(w, dir, l, n);
  return w;
}

// Weight of entries j >= k of a line (entries from 1 when k < 1).
Rational weight_from(const Params& P, Line l, int k) { return P.tail_weight(l, std::max(k, 1) - 1); }

std::uint64_t start_id(const Graph& g, const Walk& w) { return g.vertex_id(walk_start(g, w)); }
std::uint64_t end_id(const Graph& g, const Walk& w) { return g.vertex_id(walk_end(g, w)); }

Walk checked_lift(const Graph& g, const Walk& w, Line start, int freeze, bool markers) {
  try {
    return lift(g, w, start, freeze, markers);
  } catch (const std::invalid_argument& e) {
    throw CurveError(std::string("lift undefined: ") + e.what());
  }
}

}  // namespace

PointLaw Ensemble::law(const Graph& g) const {
  PointLaw out;
  for (std::size_t i = 0; i < lines.size(); ++i) out[g.vertex_id(g.normalize(m, lines[i]))] += prob[i];
  return out;
}

Ensemble full_ensemble(const Graph& g, std::int64_t m, Line base, int k) {
  const Params& P = g.params();
  if (k < 0 || k > P.depth()) throw std::invalid_argument("ensemble depth outside [0, depth]");
  Ensemble e;
  e.m = m;
  const Rational scale = 1 / power(P.S1() * P.S2(), k);
  const std::uint32_t nl = P.pow1(k), nt = P.pow2(k);
  for (std::uint32_t a = 0; a < nl; ++a) {
    for (std::uint32_t b = 0; b < nt; ++b) {
      Line l{base.lam - base.lam % nl + a, base.theta - base.theta % nt + b};
      e.lines.push_back(l);
      e.prob.push_back(scale * P.head_weight(l, k));
    }
  }
  return e;
}

Ensemble theta_ensemble(const Graph& g, std::int64_t m, Line base, int k) {
  const Params& P = g.params();
  if (k < 0 || k > P.depth()) throw std::invalid_argument("ensemble depth outside [0, depth]");
  Ensemble e;
  e.m = m;
  const Rational scale = 1 / power(P.S2(), k);
  const std::uint32_t nt = P.pow2(k);
  for (std::uint32_t b = 0; b < nt; ++b) {
    Line l{base.lam, base.theta - base.theta % nt + b};
    Rational w = scale;
    for (int j = 1; j <= k; ++j) w *= P.w2(P.theta_at(l.theta, j));
    e.lines.push_back(l);
    e.prob.push_back(w);
  }
  return e;
}

Line graft(const Params& P, Line head, Line tail, int k) {
  const std::uint32_t nl = P.pow1(k), nt = P.pow2(k);
  return Line{tail.lam - tail.lam % nl + head.lam % nl, tail.theta - tail.theta % nt + head.theta % nt};
}

Rational CurveDistribution::total() const {
  Rational t = 0;
  for (auto& p : prob) t += p;
  return t;
}

EdgeMeasure CurveDistribution::expectation(const Graph& g) const {
  EdgeMeasure out;
  for (std::size_t i = 0; i < walks.size(); ++i)
    for (auto [e, c] : crossings(g, walks[i])) out.add(e, prob[i] * c);
  return out;
}

PointLaw CurveDistribution::start_law(const Graph& g) const {
  PointLaw out;
  for (std::size_t i = 0; i < walks.size(); ++i) out[start_id(g, walks[i])] += prob[i];
  return out;
}

PointLaw CurveDistribution::end_law(const Graph& g) const {
  PointLaw out;
  for (std::size_t i = 0; i < walks.size(); ++i) out[end_id(g, walks[i])] += prob[i];
  return out;
}

Rational CurveDistribution::expected_length() const {
  Rational t = 0;
  for (std::size_t i = 0; i < walks.size(); ++i) t += prob[i] * static_cast<long>(walks[i].len());
  return t;
}

int CurveDistribution::max_length() const {
  std::size_t m = 0;
  for (auto& w : walks) m = std::max(m, w.len());
  return static_cast<int>(m);
}

CurveDistribution reverse_curve(const CurveDistribution& c) {
  CurveDistribution r;
  r.prob = c.prob;
  for (auto& w : c.walks) r.walks.push_back(reverse(w));
  return r;
}

CurveDistribution concat_curves(const Graph& g, const CurveDistribution& a, const CurveDistribution& b) {
  PointLaw ea = a.end_law(g), sb = b.start_law(g);
  if (ea != sb) throw CurveError("concatenation needs equal end and start laws");
  std::map<std::uint64_t, std::vector<std::size_t>> from;
  for (std::size_t j = 0; j < b.walks.size(); ++j) from[start_id(g, b.walks[j])].push_back(j);
  CurveDistribution out;
  for (std::size_t i = 0; i < a.walks.size(); ++i) {
    std::uint64_t z = end_id(g, a.walks[i]);
    for (std::size_t j : from[z]) {
      Walk w = a.walks[i];
      append(w, b.walks[j]);
      w.tau.clear();
      w.s.clear();
      w.ukmax = -1;
      out.walks.push_back(std::move(w));
      out.prob.push_back(a.prob[i] * b.prob[j] / sb[z]);
    }
  }
  return out;
}

CurveDistribution condition(const CurveDistribution& c, const std::vector<std::size_t>& keep) {
  CurveDistribution out;
  Rational t = 0;
  for (auto i : keep) t += c.prob[i];
  if (t == 0) throw CurveError("conditioning on a null event");
  for (auto i : keep) {
    out.walks.push_back(c.walks[i]);
    out.prob.push_back(c.prob[i] / t);
  }
  return out;
}

Walk subwalk(const Walk& w, std::size_t a, std::size_t b) {
  if (a > b || b > w.len()) throw std::invalid_argument("subwalk range");
  Walk r;
  r.pos.assign(w.pos.begin() + static_cast<std::ptrdiff_t>(a), w.pos.begin() + static_cast<std::ptrdiff_t>(b) + 1);
  r.lines.assign(w.lines.begin() + static_cast<std::ptrdiff_t>(a), w.lines.begin() + static_cast<std::ptrdiff_t>(b));
  r.start_line = a > 0 ? w.lines[a - 1] : w.start_line;
  for (int t : w.tau)
    if (t >= static_cast<int>(a) && t <= static_cast<int>(b)) r.tau.push_back(t - static_cast<int>(a));
  return r;
}

std::string compression_hypotheses(const Graph& g, const Walk& w, int k, double C0) {
  const Params& P = g.params();
  if (k < 1 || k > P.depth()) return "scale outside [1, depth]";
  if (w.len() == 0) return "H2: empty walk";
  Vertex p0 = walk_start(g, w), xi = walk_end(g, w);
  if (p0.order != 0) return "H1: start vertex is not plain";
  if (xi.kind != Kind::Socket || xi.order < k) return "H1: end vertex is not a socket of order >= k";
  const double len = static_cast<double>(w.len());
  if (len < static_cast<double>(P.sigma(k)) || len > C0 * static_cast<double>(P.sigma(k)))
    return "H2: length outside [sigma_k, C0 sigma_k]";
  for (auto& l : w.lines)
    if (l.theta != w.lines[0].theta) return "H2: second-alphabet label not constant";
  if (static_cast<int>(w.tau.size()) != k - 1) return "H3: need k - 1 markers";
  for (int i = 1; i < k; ++i) {
    int t = w.tau[i - 1];
    if (i + 1 < k && !(w.tau[i] < t)) return "H3: markers not decreasing in the entry index";
    double back = len - t;
    if (back < static_cast<double>(P.sigma(i)) || back > C0 * static_cast<double>(P.sigma(i)))
      return "H3: marker distance to the end outside [sigma_i, C0 sigma_i]";
    if (g.order_at(w.pos[static_cast<std::size_t>(t)]) != i) return "H3: marker vertex has the wrong order";
  }
  const std::uint32_t lam0 = w.lines[0].lam;
  for (std::size_t e = 0; e < w.len(); ++e) {
    for (int j = 1; j <= P.depth(); ++j) {
      int want = P.lam_at(lam0, j);
      if (j < k && static_cast<int>(e) + 1 > w.tau[j - 1]) want = kSpade;
      if (P.lam_at(w.lines[e].lam, j) != want) return "H3/H5: first-alphabet pattern differs at an edge";
    }
  }
  for (std::size_t s = 1; s < w.len(); ++s)
    if (g.order_at(w.pos[s]) >= k && w.lines[s - 1].lam != w.lines[s].lam)
      return "H4: label change at a vertex of order >= k";
  return "";
}

CompressionCurve compression_curve(const Graph& g, const Walk& w, int k, int cut, double C0) {
  std::string err = compression_hypotheses(g, w, k, C0);
  if (!err.empty()) throw CurveError("compression hypothesis failed: " + err);
  if (cut < 1 || cut > k) throw CurveError("compression cut must lie in [1, k]");
  CompressionCurve c;
  c.spine = w;
  c.k = k;
  c.cut = cut;
  c.start = full_ensemble(g, w.first(), w.lines[0], k - cut);
  c.end = theta_ensemble(g, w.last(), w.end_line(), k - cut);
  for (std::size_t i = 0; i < c.start.lines.size(); ++i) {
    c.curve.walks.push_back(checked_lift(g, w, c.start.lines[i], 0, true));
    c.curve.prob.push_back(c.start.prob[i]);
  }
  return c;
}

TransportCurve transport_curve(const Graph& g, const Walk& w, int k) {
  if (walk_start(g, w).order != 0 || walk_end(g, w).order != 0)
    throw CurveError("transport needs plain endpoints");
  TransportCurve c;
  c.spine = w;
  c.k = k;
  Line l0 = walk_start(g, w).rep;
  c.start = full_ensemble(g, w.first(), l0, k);
  c.end = full_ensemble(g, w.last(), walk_end(g, w).rep, k);
  Walk base = w;
  base.start_line = l0;
  for (std::size_t i = 0; i < c.start.lines.size(); ++i) {
    c.curve.walks.push_back(checked_lift(g, base, c.start.lines[i], k, false));
    c.curve.prob.push_back(c.start.prob[i]);
  }
  return c;
}

bool expansion_fits(const Params& P, std::int64_t start, int dir, std::int64_t len, int k, int cut) {
  const int q = k - cut + 1;
  if (q < 1 || q > k || q > P.depth()) return false;
  std::int64_t n = steps_to_plain(P, start, dir, ceil_half(3 * P.sigma(q)));
  std::int64_t t0 = next_of_order(P, start + dir * n + dir * P.sigma(q), dir, q);
  std::int64_t down = dir * (t0 - start);
  std::int64_t last = q >= 2 ? P.sigma(q - 1) : 0;
  std::int64_t up = steps_to_plain(P, t0, dir, std::max(P.sigma(q), last + ceil_half(P.sigma(q))));
  return down + up <= len;
}

namespace {

bool fits_everywhere(const Params& P, std::int64_t len, int k, int cut) {
  const int q = k - cut + 1;
  if (q < 1 || q > P.depth()) return false;
  const std::int64_t period = P.sigma(q) * P.m(q + 1);
  for (std::int64_t s = 1; s <= period; ++s) {
    if (P.ord(s) != 0) continue;
    if (!expansion_fits(P, s, 1, len, k, cut) || !expansion_fits(P, -s, -1, len, k, cut)) return false;
  }
  return true;
}

}  // namespace

int expansion_cut(const Params& P, std::int64_t len, int k) {
  for (int cut = 1; cut <= k; ++cut)
    if (fits_everywhere(P, len, k, cut)) return cut;
  return -1;
}

ExpansionCurve expansion_curve(const Graph& g, const Walk& w, int k, int cut) {
  const Params& P = g.params();
  const int dir = monotone_dir(w);
  if (dir == 0) throw CurveError("expansion needs a monotone walk");
  for (auto& l : w.lines)
    if (!(l == w.lines[0])) throw CurveError("expansion needs a constant label");
  if (walk_start(g, w).order != 0 || walk_end(g, w).order != 0)
    throw CurveError("expansion needs plain endpoints");
  if (k < 1 || k > P.depth()) throw CurveError("expansion scale outside [1, depth]");
  const std::int64_t len = static_cast<std::int64_t>(w.len());
  if (len < ceil_half(P.sigma(k)) || len > P.sigma(k)) throw CurveError("expansion length outside [sigma_k / 2, sigma_k]");
  if (!expansion_fits(P, w.first(), dir, len, k, cut))
    throw CurveError("expansion walks do not fit: increase the cut");
  const Line l = w.lines[0];
  const int q = k - cut + 1;
  ExpansionCurve c;
  c.spine = w;
  c.spine.start_line = l;
  c.k = k;
  c.cut = cut;
  c.socket_order = q;
  c.in_walk = descend_to_socket(g, w.first(), l, q, dir);
  c.socket = c.in_walk.last();
  c.out_walk = ascend_from_socket(g, c.socket, q, q, l, dir);
  push_steps(c.out_walk, dir, l, dir * (w.last() - c.out_walk.last()));
  c.start = full_ensemble(g, w.first(), l, q - 1);
  c.end = full_ensemble(g, w.last(), l, q);
  const Walk back = reverse(c.out_walk);
  const int s0 = P.lam_at(l.lam, q), t0 = P.theta_at(l.theta, q);
  const Rational norm = P.S1() * P.S2();
  c.kept_prob = P.w1(s0) * P.w2(t0) / norm;
  std::vector<std::size_t> kept, replaced;
  for (std::size_t i = 0; i < c.start.lines.size(); ++i) {
    const Line lp = c.start.lines[i];
    const Rational pp = c.start.prob[i];
    kept.push_back(c.curve.walks.size());
    c.curve.walks.push_back(checked_lift(g, c.spine, lp, 0, false));
    c.curve.prob.push_back(pp * c.kept_prob);
    Walk down = checked_lift(g, c.in_walk, lp, 0, true);
    for (int s = 0; s < P.n1(); ++s) {
      for (int t = 0; t < P.n2(); ++t) {
        if (s == s0 && t == t0) continue;
        Line hat{P.lam_set(lp.lam, q, s), P.theta_set(lp.theta, q, t)};
        Walk up = checked_lift(g, back, hat, 0, true);
        if (!(walk_end(g, down) == walk_end(g, up))) throw std::logic_error("expansion lifts miss the socket");
        Walk full = down;
        append(full, reverse(up));
        full.tau.clear();
        replaced.push_back(c.curve.walks.size());
        c.curve.walks.push_back(std::move(full));
        c.curve.prob.push_back(pp * P.w1(s) * P.w2(t) / norm);
      }
    }
  }
  c.kept = condition(c.curve, kept);
  c.replaced = condition(c.curve, replaced);
  return c;
}

void DensityAudit::add(double exact, double formula) {
  double r = exact / formula;
  lo = std::min(lo, r);
  hi = std::max(hi, r);
  ++edges;
}

namespace {

// 1-based index of an edge along a monotone walk starting at m0.
std::int64_t edge_index(const Edge& e, std::int64_t m0, int dir) { return dir > 0 ? e.left - m0 + 1 : m0 - e.left; }

template <class F>
DensityAudit audit_with(const Graph& g, const CurveDistribution& c, F formula) {
  DensityAudit a;
  for (auto& [eid, mass] : c.expectation(g).mass) {
    Edge e = g.edge_at(eid);
    double exact = Rational(mass / g.edge_mass(e)).get_d();
    a.add(exact, formula(e));
  }
  return a;
}

}  // namespace

DensityAudit compression_density_audit(const Graph& g, const CompressionCurve& c) {
  const Params& P = g.params();
  const int dir = monotone_dir(c.spine);
  const std::int64_t len = static_cast<std::int64_t>(c.spine.len());
  return audit_with(g, c.curve, [&](const Edge& e) {
    int L = P.disc_log(Rational(len - edge_index(e, c.spine.first(), dir)));
    Rational f = 1 / (power(P.S1(), L) * power(P.S2(), c.k - c.cut) * weight_from(P, e.line, c.k));
    int sp = c.k - L;
    f = sp >= 0 ? Rational(f / power(P.w_spade(), sp)) : Rational(f * power(P.w_spade(), -sp));
    return f.get_d();
  });
}

DensityAudit transport_density_audit(const Graph& g, const TransportCurve& c) {
  const Params& P = g.params();
  return audit_with(g, c.curve, [&](const Edge& e) {
    Rational f = 1 / (power(P.S1() * P.S2(), c.k) * weight_from(P, e.line, c.k));
    return f.get_d();
  });
}

DensityAudit expansion_density_audit(const Graph& g, const ExpansionCurve& c, bool replaced) {
  const Params& P = g.params();
  if (!replaced)
    return audit_with(g, c.kept, [&](const Edge& e) {
      Rational f = 1 / (power(P.S1() * P.S2(), c.k) * weight_from(P, e.line, c.k));
      return f.get_d();
    });
  return audit_with(g, c.replaced, [&](const Edge& e) {
    std::int64_t d = std::min(std::llabs(e.left - c.socket), std::llabs(e.left + 1 - c.socket));
    int T = P.disc_log(Rational(d));
    Rational f = 1 / (power(P.S1(), T) * power(P.S2(), c.k) * weight_from(P, e.line, c.k));
    int sp = c.k - T;
    f = sp >= 0 ? Rational(f / power(P.w_spade(), sp)) : Rational(f * power(P.w_spade(), -sp));
    return f.get_d();
  });
}

int support_spread(const Graph& g, const CurveDistribution& c, const Walk& spine) {
  std::vector<std::uint64_t> src;
  for (std::size_t i = 0; i <= spine.len(); ++i) src.push_back(g.vertex_id(walk_vertex(g, spine, i)));
  std::sort(src.begin(), src.end());
  src.erase(std::unique(src.begin(), src.end()), src.end());
  Bfs bfs(g);
  const EdgeMeasure E = c.expectation(g);
  // Searches of growing radius; the last one is unbounded.
  for (int reach = static_cast<int>(spine.len()) + 2;; reach *= 2) {
    const bool full = reach > g.hi() - g.lo();
    bfs.run(src, full ? -1 : reach);
    int worst = 0;
    bool missed = false;
    for (auto& [eid, m] : E.mass) {
      Edge e = g.edge_at(eid);
      int a = bfs.dist(g.vertex_id(g.left(e))), b = bfs.dist(g.vertex_id(g.right(e)));
      if (a < 0 && b < 0) {
        missed = true;
        break;
      }
      worst = std::max(worst, a < 0 ? b : (b < 0 ? a : std::min(a, b)));
    }
    if (!missed) return worst;
    if (full) return -1;
  }
}

double lq_norm(const CurveDistribution& c, const Graph& g, const DensityMeasure& nu, double Q) {
  double s = 0;
  for (auto& [eid, mass] : c.expectation(g).mass) {
    auto i = nu.find(eid);
    if (i < 0) return std::numeric_limits<double>::infinity();
    double n = nu.mass(static_cast<std::size_t>(i));
    if (n <= 0) return std::numeric_limits<double>::infinity();
    s += std::pow(mass.get_d(), Q) * std::pow(n, 1 - Q);
  }
  return std::pow(s, 1 / Q);
}

double lq_norm(const CurveDistribution& c, const Graph& g, const EdgeMeasure& nu, double Q) {
  double s = 0;
  for (auto& [eid, mass] : c.expectation(g).mass) {
    auto it = nu.mass.find(eid);
    if (it == nu.mass.end() || it->second <= 0) return std::numeric_limits<double>::infinity();
    s += std::pow(mass.get_d(), Q) * std::pow(it->second.get_d(), 1 - Q);
  }
  return std::pow(s, 1 / Q);
}

namespace {

// Lifts of a spine from one starting point carried along the spine: every
// lifted walk ends over the current spine vertex and its line agrees with
// the spine beyond the current depth.
class HalfCurve {
 public:
  HalfCurve(const Graph& g, const GoodWalk& gw, const Vertex& from, int cut, int cap)
      : g_(g), P_(g.params()), gw_(gw), spine_(gw.walk), from_(from), cut_(cut), cap_(cap) {
    walks_.push_back(empty_walk(spine_.first(), spine_.start_line));
    prob_.push_back(Rational(1));
  }

  void run() {
    std::size_t i = 0, n = 0;
    const std::size_t len = spine_.len();
    const bool pass = gw_.split && spine_.ukmax > 0 && static_cast<std::size_t>(spine_.ukmax) < len &&
                      spine_.lines[spine_.ukmax - 1].theta != spine_.lines[spine_.ukmax].theta;
    bool passed = false;
    while (i < len) {
      std::size_t next = len;
      int floor_k = std::numeric_limits<int>::max();
      if (n < gw_.necks.size()) {
        next = static_cast<std::size_t>(gw_.necks[n].start);
        for (std::size_t j = n; j < gw_.necks.size(); ++j) floor_k = std::min(floor_k, gw_.necks[j].k);
      }
      if (pass && !passed) {
        next = std::min(next, static_cast<std::size_t>(spine_.ukmax));
        floor_k = std::min(floor_k, gw_.diff.kmax);
      }
      if (i < next) {
        if (!try_expand(i, next, floor_k)) transport(i, i + 1);
        continue;
      }
      if (pass && !passed && i == static_cast<std::size_t>(spine_.ukmax)) {
        socket_pass(i);
        passed = true;
        // The label change at the socket is already carried by the detour.
        Walk piece = subwalk(spine_, i, i + 1);
        piece.start_line = spine_.lines[i];
        for (auto& w : walks_) append(w, checked_lift(g_, piece, w.end_line(), depth_, false));
        ++i;
        continue;
      }
      i = neck(gw_.necks[n++]);
    }
  }

  CurveDistribution result() const {
    CurveDistribution c;
    c.walks = walks_;
    c.prob = prob_;
    return c;
  }
  int depth() const { return depth_; }
  int expansions = 0, necks = 0, passes = 0;

 private:
  void transport(std::size_t& i, std::size_t b) {
    Walk piece = subwalk(spine_, i, b);
    piece.tau.clear();
    for (auto& w : walks_) append(w, checked_lift(g_, piece, w.end_line(), depth_, false));
    i = b;
  }

  bool try_expand(std::size_t& i, std::size_t next, int floor_k) {
    if (depth_ >= cap_ || depth_ + 1 >= floor_k) return false;
    const int k = depth_ + cut_;
    if (k > P_.depth() || g_.order_at(spine_.pos[i]) != 0) return false;
    const std::int64_t L = P_.sigma(k);
    if (std::llabs(spine_.pos[i] - from_.m) * 2 < L) return false;
    const std::size_t b = i + static_cast<std::size_t>(L);
    if (b > next) return false;
    const int dir = spine_.pos[i + 1] > spine_.pos[i] ? 1 : -1;
    for (std::size_t t = i; t < b; ++t)
      if (!(spine_.lines[t] == spine_.lines[i]) || spine_.pos[t + 1] - spine_.pos[t] != dir) return false;
    if (g_.order_at(spine_.pos[b]) != 0 || !expansion_fits(P_, spine_.pos[i], dir, L, k, cut_)) return false;
    Walk piece = subwalk(spine_, i, b);
    ExpansionCurve ex = expansion_curve(g_, piece, k, cut_);
    // The expansion's conditional walks from each lifted start point.
    std::map<Line, std::vector<std::size_t>> by_start;
    for (std::size_t j = 0; j < ex.curve.walks.size(); ++j) by_start[ex.curve.walks[j].start_line].push_back(j);
    std::map<Line, Rational> start_prob;
    for (std::size_t j = 0; j < ex.start.lines.size(); ++j) start_prob[ex.start.lines[j]] = ex.start.prob[j];
    std::vector<Walk> walks;
    std::vector<Rational> prob;
    for (std::size_t a = 0; a < walks_.size(); ++a) {
      Line l = walks_[a].end_line();
      auto it = by_start.find(l);
      if (it == by_start.end()) throw std::logic_error("lifted point outside the expansion ensemble");
      for (auto j : it->second) {
        Walk w = walks_[a];
        append(w, ex.curve.walks[j]);
        walks.push_back(std::move(w));
        prob.push_back(prob_[a] * ex.curve.prob[j] / start_prob[l]);
      }
    }
    walks_ = std::move(walks);
    prob_ = std::move(prob);
    ++depth_;
    ++expansions;
    i = b;
    return true;
  }

  std::size_t neck(const Neck& nk) {
    if (depth_ >= nk.k) throw CurveError("ensemble depth reaches the order of a neck");
    std::size_t a = static_cast<std::size_t>(nk.start);
    const std::size_t first_tau =
        nk.in_tau.empty() ? static_cast<std::size_t>(nk.socket) : static_cast<std::size_t>(nk.in_tau.back());
    while (g_.order_at(spine_.pos[a]) != 0) {
      if (a + 1 >= first_tau) throw CurveError("neck has no plain start vertex");
      transport(a, a + 1);
    }
    Walk in = subwalk(spine_, a, static_cast<std::size_t>(nk.socket));
    in.tau.clear();
    for (int t : nk.in_tau) in.tau.push_back(t - static_cast<int>(a));
    Walk out = subwalk(spine_, static_cast<std::size_t>(nk.socket), static_cast<std::size_t>(nk.end));
    out.tau.clear();
    for (int t : nk.out_tau) out.tau.push_back(t - nk.socket);
    const Walk back = reverse(out);
    for (auto& w : walks_) {
      Line l = w.end_line();
      Walk down = checked_lift(g_, in, l, 0, true);
      Walk up = checked_lift(g_, back, graft(P_, l, out.end_line(), depth_), 0, true);
      if (!(walk_end(g_, down) == walk_end(g_, up))) throw std::logic_error("neck lifts miss the socket");
      append(w, down);
      append(w, reverse(up));
    }
    ++necks;
    return static_cast<std::size_t>(nk.end);
  }

  // Out-and-back detour at a socket where the second-alphabet label changes:
  // transport out, compress back to the socket, then the mirror image on
  // the outgoing line coupled by the canonical map.
  void socket_pass(std::size_t i) {
    const std::int64_t u = spine_.pos[i];
    const Line before = spine_.lines[i - 1], after = spine_.lines[i];
    const int q = depth_ + 1;
    int dir = spine_.pos[i + 1] > u ? 1 : -1;
    std::int64_t L = steps_to_plain(P_, u, dir, P_.sigma(q));
    if (!g_.in_window(u + dir * L)) {
      dir = -dir;
      L = steps_to_plain(P_, u, dir, P_.sigma(q));
      if (!g_.in_window(u + dir * L)) throw WindowError("socket detour leaves the window");
    }
    auto loop = [&](Line l) {
      Walk back = reverse(straight(u, l, dir, L));
      for (int e = 1; e <= depth_; ++e) back.tau.push_back(static_cast<int>(L - P_.sigma(e)));
      return back;
    };
    const Walk back_in = loop(before), back_out = loop(after);
    Walk out_in = straight(u, before, dir, L);
    for (auto& w : walks_) {
      Line l = w.end_line();
      Walk go = checked_lift(g_, out_in, l, depth_, false);
      Walk down = checked_lift(g_, back_in, l, 0, true);
      Line l2 = graft(P_, l, after, depth_);
      Walk up = checked_lift(g_, back_out, l2, 0, true);
      if (!(walk_end(g_, down) == walk_end(g_, up))) throw std::logic_error("socket detour misses the socket");
      Walk ret = reverse(up);
      append(w, go);
      append(w, down);
      append(w, ret);
      Walk home = straight(ret.last(), l2, -dir, L);
      append(w, home);
    }
    ++passes;
  }

  const Graph& g_;
  const Params& P_;
  const GoodWalk& gw_;
  const Walk& spine_;
  Vertex from_;
  int cut_, cap_;
  int depth_ = 0;
  std::vector<Walk> walks_;
  std::vector<Rational> prob_;
};

struct Half {
  CurveDistribution curve;
  int depth = 0, expansions = 0, necks = 0, passes = 0;
};

Half build_half(const Graph& g, const Vertex& a, const Vertex& mid, int cut, int cap) {
  GoodWalk gw;
  if (a == mid) gw.walk = empty_walk(a.m, a.rep);
  else gw = good_walk(g, a, mid);
  HalfCurve h(g, gw, a, cut, cap);
  h.run();
  return Half{h.result(), h.depth(), h.expansions, h.necks, h.passes};
}

}  // namespace

int calibrated_cut(const Params& P) {
  for (int c = 1; c <= P.depth(); ++c) {
    bool ok = true;
    for (int k = c; k <= P.depth() && ok; ++k) ok = fits_everywhere(P, P.sigma(k), k, c);
    if (ok) return c;
  }
  return P.depth();
}

PiCurve pi_random_curve(const Graph& g, const Vertex& x, const Vertex& y, int cut) {
  if (cut <= 0) cut = calibrated_cut(g.params());
  GoodWalk whole = good_walk(g, x, y);
  std::size_t h = whole.walk.len() / 2;
  while (h < whole.walk.len() && g.order_at(whole.walk.pos[h]) != 0) ++h;
  if (h == whole.walk.len())
    while (h > 0 && g.order_at(whole.walk.pos[h]) != 0) --h;
  PiCurve out;
  out.mid = walk_vertex(g, whole.walk, h);
  out.cut = cut;
  const int big = std::numeric_limits<int>::max();
  Half hx = build_half(g, x, out.mid, cut, big), hy = build_half(g, y, out.mid, cut, big);
  const int depth = std::min(hx.depth, hy.depth);
  if (hx.depth > depth) hx = build_half(g, x, out.mid, cut, depth);
  if (hy.depth > depth) hy = build_half(g, y, out.mid, cut, depth);
  out.curve = concat_curves(g, hx.curve, reverse_curve(hy.curve));
  out.depth = depth;
  out.expansions = hx.expansions + hy.expansions;
  out.necks = hx.necks + hy.necks;
  out.socket_passes = hx.passes + hy.passes;
  return out;
}

}  // namespace selfsim

#include "selfsim/measure.hpp"

#include <algorithm>
#include <stdexcept>

namespace selfsim {

Rational EdgeMeasure::total() const {
  Rational t = 0;
  for (auto& [e, m] : mass) t += m;
  return t;
}

EdgeMeasure base_measure(const Graph& g, const std::vector<std::uint64_t>& edges) {
  EdgeMeasure out;
  for (auto e : edges) out.mass[e] = g.edge_mass(g.edge_at(e));
  return out;
}

namespace {

bool same_tail(const Params& P, Line a, Line b, int k) {
  for (int j = k + 1; j <= P.depth(); ++j)
    if (P.lam_at(a.lam, j) != P.lam_at(b.lam, j) || P.theta_at(a.theta, j) != P.theta_at(b.theta, j)) return false;
  return true;
}

Rational power(const Rational& b, int e) {
  Rational r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

void check_span(const Graph& g, const Rational& a, const Rational& b) {
  if (a < g.lo() || b > g.hi()) throw WindowError("measure query leaves the window");
}

}  // namespace

Rational box_measure(const Graph& g, const Box& b) {
  const Params& P = g.params();
  if (b.k < 0 || b.k > P.depth()) throw std::invalid_argument("box depth outside [0, depth]");
  if (b.hi < b.lo) throw std::invalid_argument("empty interval");
  for (std::size_t i = 0; i < b.S.size(); ++i)
    for (std::size_t j = i + 1; j < b.S.size(); ++j)
      if (same_tail(P, b.S[i], b.S[j], b.k))
        throw std::invalid_argument("box labels are not separated beyond its depth");
  Rational sum = 0;
  for (const Line& l : b.S) sum += P.tail_weight(l, b.k);
  return (b.hi - b.lo) * power(P.S1() * P.S2(), b.k) * sum;
}

BallMeasure ball_measure(const Graph& g, const Point& x, const Rational& R) {
  const Params& P = g.params();
  Rational t = Graph::project(x);
  check_span(g, t - R, t + R);
  BallMeasure out;
  out.mass = ball_mass(g, ball(g, x, R, true));
  int k = std::min(P.disc_log(R), P.depth());
  Rational tails = 0;
  for (const Line& l : outer_labels(g, x, R)) tails += P.tail_weight(l, k);
  out.predicted = Rational(R * power(P.S1() * P.S2(), k) * tails).get_d();
  out.ratio = out.predicted > 0 ? out.mass.get_d() / out.predicted : 0;
  return out;
}

std::vector<DoublingRow> doubling_scan(const Graph& g, const std::vector<std::uint64_t>& centers,
                                       const std::vector<std::int64_t>& radii) {
  std::vector<DoublingRow> rows;
  for (auto c : centers) {
    Vertex v = g.vertex_at(c);
    Point x{v.m, v.rep, 0};
    for (auto R : radii) {
      check_span(g, Rational(v.m - 2 * R), Rational(v.m + 2 * R));
      DoublingRow r;
      r.center = c;
      r.R = R;
      r.mass = ball_mass(g, ball(g, x, Rational(R)));
      r.mass2 = ball_mass(g, ball(g, x, Rational(2 * R)));
      r.ratio = Rational(r.mass2 / r.mass).get_d();
      rows.push_back(r);
    }
  }
  return rows;
}

double max_doubling_ratio(const std::vector<DoublingRow>& rows) {
  double m = 0;
  for (auto& r : rows) m = std::max(m, r.ratio);
  return m;
}

RieszField::RieszField(const Graph& g, std::uint64_t p, const Rational& radius)
    : g_(g), bfs_(g), radius_(radius) {
  Vertex v = g.vertex_at(p);
  check_span(g, v.m - radius, v.m + radius);
  mpz_class fl = radius.get_num() / radius.get_den();
  const int reach = static_cast<int>(fl.get_si()) + 1;
  bfs_.run(p, reach);
  // Mass of {t : min(a + t, b + 1 - t) < r} over an edge with endpoint
  // distances a <= b grows with slope 1 on (a, b], 2 on (b, (a + b + 1) / 2].
  const std::size_t J = 2 * static_cast<std::size_t>(reach) + 4;
  std::vector<Rational> slope(J + 1, Rational(0));
  std::vector<std::uint64_t> seen;
  for (auto id : bfs_.reached()) {
    g.for_each_edge(id, [&](std::uint64_t, std::uint64_t e) { seen.push_back(e); });
  }
  std::sort(seen.begin(), seen.end());
  seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
  for (auto e : seen) {
    Edge ed = g.edge_at(e);
    int a = bfs_.dist(g.vertex_id(g.left(ed))), b = bfs_.dist(g.vertex_id(g.right(ed)));
    if (a < 0) a = b + 1;
    if (b < 0) b = a + 1;
    if (a > b) std::swap(a, b);
    const Rational w = g.edge_mass(ed);
    auto put = [&](std::size_t i, const Rational& d) {
      if (i <= J) slope[i] += d;
    };
    put(2 * a, w);
    put(2 * b, w);
    put(a + b + 1, -2 * w);
    Rational mid = Rational(a) + Rational(1, 2);
    if (mid < radius_) edges_.push_back(e);
  }
  table_.assign(J + 1, Rational(0));
  Rational s = 0;
  for (std::size_t j = 1; j <= J; ++j) {
    s += slope[j - 1];
    table_[j] = table_[j - 1] + s / 2;
  }
}

const Rational& RieszField::ball_mass_half(std::int64_t twice_r) const {
  if (twice_r < 0 || static_cast<std::size_t>(twice_r) >= table_.size())
    throw std::out_of_range("radius beyond the tabulated range");
  return table_[static_cast<std::size_t>(twice_r)];
}

Rational RieszField::midpoint_distance(std::uint64_t eid) const {
  Edge ed = g_.edge_at(eid);
  int a = bfs_.dist(g_.vertex_id(g_.left(ed))), b = bfs_.dist(g_.vertex_id(g_.right(ed)));
  if (a < 0 && b < 0) return Rational(-1);
  int lo = a < 0 ? b : (b < 0 ? a : std::min(a, b));
  return Rational(lo) + Rational(1, 2);
}

double RieszField::density(std::uint64_t eid) const {
  Rational d = midpoint_distance(eid);
  if (d < 0) throw WindowError("edge beyond the Riesz field radius");
  mpz_class twice = 2 * d.get_num() / d.get_den();
  return Rational(d / ball_mass_half(twice.get_si())).get_d();
}

double DensityMeasure::total() const {
  double t = 0;
  for (std::size_t i = 0; i < edges.size(); ++i) t += mass(i);
  return t;
}

std::ptrdiff_t DensityMeasure::find(std::uint64_t eid) const {
  auto it = std::lower_bound(edges.begin(), edges.end(), eid);
  if (it == edges.end() || *it != eid) return -1;
  return it - edges.begin();
}

DensityMeasure riesz_measure(const Graph& g, std::uint64_t p, const Rational& radius) {
  RieszField f(g, p, radius);
  DensityMeasure out;
  out.edges = f.edges();
  for (auto e : out.edges) {
    out.density.push_back(f.density(e));
    out.base.push_back(g.edge_mass(g.edge_at(e)));
  }
  return out;
}

DensityMeasure pair_measure(const Graph& g, std::uint64_t p, std::uint64_t q, const Rational& C) {
  if (C <= 0) throw std::invalid_argument("pair measure constant must be positive");
  int d = vertex_distance(g, g.vertex_at(p), g.vertex_at(q));
  if (d == 0) throw std::invalid_argument("pair measure needs distinct points");
  Rational r = C * d;
  RieszField fp(g, p, r), fq(g, q, r);
  std::map<std::uint64_t, double> dens;
  for (auto e : fp.edges()) dens[e] += fp.density(e);
  for (auto e : fq.edges()) dens[e] += fq.density(e);
  DensityMeasure out;
  for (auto& [e, v] : dens) {
    out.edges.push_back(e);
    out.density.push_back(v);
    out.base.push_back(g.edge_mass(g.edge_at(e)));
  }
  return out;
}

}  // namespace selfsim

#include "selfsim/calibrate.hpp"

#include <algorithm>
#include <map>
#include <random>

#include "json.hpp"
#include "selfsim/curves.hpp"
#include "selfsim/walk_audit.hpp"

namespace selfsim {

void Bracket::add(double v) {
  lo = std::min(lo, v);
  hi = std::max(hi, v);
}

namespace {

struct Sampler {
  const Graph& g;
  std::mt19937_64 rng;
  std::int64_t mid, spread;

  Sampler(const Graph& graph, std::uint64_t seed) : g(graph), rng(seed) {
    mid = g.lo() + (g.hi() - g.lo()) / 2;
    spread = std::max<std::int64_t>(1, (g.hi() - g.lo()) / 8);
  }
  std::int64_t uniform(std::int64_t a, std::int64_t b) { return std::uniform_int_distribution<std::int64_t>(a, b)(rng); }
  int uniform_int(int a, int b) { return std::uniform_int_distribution<int>(a, b)(rng); }
  std::int64_t position() { return uniform(mid - spread, mid + spread); }
  Line line() { return g.line_at(std::uniform_int_distribution<std::uint32_t>(0, g.line_count() - 1)(rng)); }
  Vertex vertex() { return g.normalize(position(), line()); }
  int dir() { return rng() % 2 ? 1 : -1; }
};

void ball_box_part(const Graph& g, const CalibrationOptions& opt, Calibration& out) {
  const Params& P = g.params();
  const std::int64_t rmax = std::max<std::int64_t>(2, P.sigma(std::min(3, P.depth())));
  auto grid_ok = [&](std::uint64_t seed, int centers, std::int64_t C, int* checks) {
    Sampler s(g, seed);
    int failures = 0;
    for (int i = 0; i < centers; ++i) {
      Vertex v = s.vertex();
      Point x{v.m, v.rep, 0};
      for (std::int64_t R = 2; R <= rmax; ++R) {
        try {
          bool ok = ball_box_sandwich(g, x, Rational(R), C).ok();
          if (checks) ++*checks;
          failures += !ok;
          if (!ok && !checks) return failures;
        } catch (const WindowError&) {
        }
      }
    }
    return failures;
  };
  for (std::int64_t C = 1; C <= 64 && out.ball_box_C == 0; C *= 2)
    if (grid_ok(opt.seed, std::max(4, opt.samples / 2), C, nullptr) == 0) out.ball_box_C = C;
  if (out.ball_box_C > 0) out.ball_box_failures = grid_ok(opt.seed + 1, opt.samples, out.ball_box_C, &out.ball_box_checks);
}

void walk_part(const Graph& g, const CalibrationOptions& opt, Calibration& out) {
  const Params& P = g.params();
  const int K = P.depth();
  Sampler s(g, opt.seed + 2);
  auto record = [&](const Audit& a) {
    ++out.walk_checks;
    out.walk_failures += !a.ok();
    out.walk_C = std::max(out.walk_C, a.C);
  };
  for (int i = 0; i < opt.samples; ++i) {
    try {
      Line l = s.line();
      std::int64_t m = s.position();
      int k = s.uniform_int(1, K), dir = s.dir();
      record(audit_gluing_walk(g, gluing_walk(g, m, l, k, dir), m, l, k, dir));
      k = s.uniform_int(1, K);
      record(audit_descend(g, descend_to_socket(g, m, l, k, dir), m, l, k, dir));
    } catch (const WindowError&) {
    }
  }
  int done = 0;
  for (int i = 0; i < 20 * opt.samples && done < opt.samples; ++i) {
    int k0 = s.uniform_int(1, K), k = s.uniform_int(1, k0);
    std::int64_t m0 = next_of_order(P, s.position(), 1, k0);
    if (!g.in_window(m0)) continue;
    Vertex v = g.normalize(m0, s.line());
    if (v.kind != Kind::Socket) continue;
    // Socket labels above k0, the gluing symbol on k..k0-1, free elsewhere.
    Line target = s.line();
    for (int j = k0 + 1; j <= K; ++j) target.lam = P.lam_set(target.lam, j, P.lam_at(v.rep.lam, j));
    for (int j = k; j < k0; ++j) target.lam = P.lam_set(target.lam, j, kSpade);
    for (int j = 1; j <= K; ++j)
      if (j != k0) target.theta = P.theta_set(target.theta, j, P.theta_at(v.rep.theta, j));
    int dir = s.dir();
    try {
      record(audit_ascend(g, ascend_from_socket(g, m0, k0, k, target, dir), m0, k0, k, target, dir));
      ++done;
    } catch (const WindowError&) {
    }
  }
}

void good_walk_part(const Graph& g, const CalibrationOptions& opt, Calibration& out) {
  const Params& P = g.params();
  const int K = P.depth();
  Sampler s(g, opt.seed + 3);
  for (int i = 0; i < 4 * opt.samples; ++i) {
    Vertex x = s.vertex(), y = s.vertex();
    if (i % 3 && K >= 2) {
      // Close pairs around a high-order point, where labels differ deep down.
      int k = s.uniform_int(2, K);
      std::int64_t c = next_of_order(P, x.m, 1, k);
      std::int64_t r = P.sigma(k - 2);
      Line lx = s.line(), ly = lx;
      ly.lam = P.lam_set(ly.lam, k, (P.lam_at(lx.lam, k) + 1 + static_cast<int>(s.rng() % (P.n1() - 1))) % P.n1());
      if (s.rng() % 2) ly.theta = P.theta_set(ly.theta, k, (P.theta_at(lx.theta, k) + 1) % P.n2());
      if (!g.in_window(c - r) || !g.in_window(c + r)) continue;
      x = g.normalize(c + s.uniform(-r, r), lx);
      y = g.normalize(c + s.uniform(-r, r), ly);
    }
    try {
      if (vertex_distance(g, x, y) <= 1) continue;
      GoodWalk gw = good_walk(g, x, y);
      GoodWalkAudit a = audit_good_walk(g, gw, x, y);
      bool ok = a.ok() && check_exc_estimate(g, x, y).empty();
      out.gw_failures += !ok;
      (gw.split ? out.gw_split : out.gw_direct)++;
      out.gw1 = std::max(out.gw1, a.gw1);
      out.gw3 = std::max(out.gw3, a.gw3);
      out.length.add(a.len_lo);
      out.length.add(a.len_hi);
      if (a.seg_hi > 0) {
        out.segment.add(a.seg_lo);
        out.segment.add(a.seg_hi);
      }
    } catch (const WindowError&) {
      ++out.gw_skipped;
    }
  }
}

void curve_part(const Graph& g, Calibration& out) {
  const Params& P = g.params();
  const int K = P.depth();
  // Position 0 has order 0 by convention but is a multiple of every scale.
  std::int64_t p0 = g.lo() + (g.hi() - g.lo()) / 2 + 1;
  while (P.ord(p0) != 0 || p0 == 0) ++p0;
  // Alternating labels, so that every construction sees both kinds of entry.
  Line l{0, 0};
  for (int j = 1; j <= K; ++j) {
    l.lam = P.lam_set(l.lam, j, j % 2 ? std::min(2, P.n1() - 1) : 0);
    l.theta = P.theta_set(l.theta, j, j % 2);
  }
  auto row = [&](const std::string& name, int k, int cut, const DensityAudit& a, const CurveDistribution& c,
                 const Walk& spine) {
    if (a.edges == 0) return;
    DensityRow r{name, k, cut, a.spread(),
                 support_spread(g, c, spine) / static_cast<double>(P.sigma(k))};
    out.support_C = std::max(out.support_C, r.support);
    out.densities.push_back(r);
  };
  for (int k = 1; k <= K; ++k) {
    for (int cut = 1; cut <= std::min(k, 2); ++cut) {
      try {
        Walk w = descend_to_socket(g, p0, l, k, 1);
        CompressionCurve c = compression_curve(g, w, k, cut);
        row("compression", k, cut, compression_density_audit(g, c), c.curve, c.spine);
      } catch (const std::exception&) {
      }
    }
    try {
      Walk w = empty_walk(p0, l);
      push_steps(w, 1, l, P.sigma(k) + (P.ord(p0 + P.sigma(k)) ? 1 : 0));
      TransportCurve t = transport_curve(g, w, k);
      row("transport", k, 0, transport_density_audit(g, t), t.curve, t.spine);
    } catch (const std::exception&) {
    }
    int cut = expansion_cut(P, P.sigma(k), k);
    if (cut <= 0) continue;
    try {
      Walk w = empty_walk(p0, l);
      push_steps(w, 1, l, P.sigma(k));
      ExpansionCurve e = expansion_curve(g, w, k, cut);
      row("expansion-replaced", k, cut, expansion_density_audit(g, e, true), e.replaced, e.spine);
      row("expansion-kept", k, cut, expansion_density_audit(g, e, false), e.kept, e.spine);
    } catch (const std::exception&) {
    }
  }
}

}  // namespace

Calibration calibrate(const Params& P, const CalibrationOptions& opt) {
  Graph g(P);
  Calibration c;
  c.depth = P.depth();
  if (opt.geometry) {
    ball_box_part(g, opt, c);
    walk_part(g, opt, c);
    good_walk_part(g, opt, c);
  }
  if (opt.curves) curve_part(g, c);
  c.cut = calibrated_cut(P);
  return c;
}

double density_step_ratio(const Calibration& c, int lo, int hi) {
  std::map<std::pair<std::string, int>, std::map<int, double>> by;
  for (const DensityRow& r : c.densities) by[{r.construction, r.cut}][r.k] = r.spread;
  double worst = 1;
  for (auto& [key, row] : by)
    for (int k = lo; k < hi; ++k) {
      auto a = row.find(k), b = row.find(k + 1);
      if (a == row.end() || b == row.end()) continue;
      worst = std::max(worst, std::max(a->second, b->second) / std::min(a->second, b->second));
    }
  return worst;
}

std::string calibration_json(const Calibration& c) {
  using json = nlohmann::ordered_json;
  auto bracket = [](const Bracket& b) { return b.empty() ? json(nullptr) : json::array({b.lo, b.hi}); };
  json j;
  j["depth"] = c.depth;
  j["ball_box"] = {{"C", c.ball_box_C}, {"checks", c.ball_box_checks}, {"failures", c.ball_box_failures}};
  j["walk_lemmas"] = {{"C", c.walk_C}, {"checks", c.walk_checks}, {"failures", c.walk_failures}};
  j["good_walks"] = {{"direct", c.gw_direct},      {"split", c.gw_split},      {"failures", c.gw_failures},
                     {"skipped", c.gw_skipped},    {"gw1", c.gw1},             {"gw3", c.gw3},
                     {"length", bracket(c.length)}, {"segment", bracket(c.segment)}};
  json rows = json::array();
  for (const DensityRow& r : c.densities)
    rows.push_back({{"construction", r.construction}, {"k", r.k}, {"cut", r.cut}, {"spread", r.spread},
                    {"support", r.support}});
  j["curves"] = {{"cut", c.cut}, {"support_C", c.support_C}, {"densities", rows}};
  return j.dump(2);
}

}  // namespace selfsim

// Command line front end: builds truncations from a parameter file and runs
// one query or experiment per invocation. JSON for structured records, CSV
// for scans. Every option can also come from an INI/TOML file (--config).

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <random>
#include <sstream>

#include "json.hpp"
#include "selfsim/calibrate.hpp"
#include "selfsim/curves.hpp"
#include "selfsim/modulus.hpp"
#include "selfsim/walk_audit.hpp"

using namespace selfsim;
using json = nlohmann::ordered_json;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<int> parse_entries(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(std::stoi(item));
  return out;
}

// "m:lam:theta", m an integer or a rational (a point inside the edge
// [floor m, floor m + 1]), labels as comma-separated symbol indices.
Point parse_point(const Graph& g, const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  if (parts.empty() || parts.size() > 3) throw UsageError("point must be m:lam:theta, got '" + text + "'");
  parts.resize(3);
  Rational x = parse_rational(parts[0]);
  mpz_class fl;
  mpz_fdiv_q(fl.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  Point p;
  p.m = fl.get_si();
  p.off = x - Rational(fl);
  const Params& P = g.params();
  std::vector<int> lam = parse_entries(parts[1]), th = parse_entries(parts[2]);
  for (int s : lam)
    if (s < 0 || s >= P.n1()) throw UsageError("first-alphabet symbol out of range in '" + text + "'");
  for (int s : th)
    if (s < 0 || s >= P.n2()) throw UsageError("second-alphabet symbol out of range in '" + text + "'");
  if (static_cast<int>(std::max(lam.size(), th.size())) > P.depth())
    throw UsageError("label longer than the depth in '" + text + "'");
  p.line = Line{P.lam_from(lam), P.theta_from(th)};
  if (!g.in_window(p.m) || (p.off != 0 && !g.in_window(p.m + 1))) throw WindowError("point outside the window");
  return p;
}

Vertex parse_vertex(const Graph& g, const std::string& text) {
  Point p = parse_point(g, text);
  if (p.off != 0) throw UsageError("a vertex is needed here, got an edge point '" + text + "'");
  return g.normalize(p.m, p.line);
}

json vertex_json(const Graph& g, const Vertex& v) {
  return {{"m", v.m}, {"label", g.params().label_string(v.rep)}, {"kind", kind_name(v.kind)}, {"order", v.order}};
}

json point_json(const Graph& g, const Point& p) {
  return {{"x", rational_string(Graph::project(p))}, {"label", g.params().label_string(p.line)}};
}

json edge_json(const Graph& g, std::uint64_t eid) {
  Edge e = g.edge_at(eid);
  return {{"left", e.left}, {"label", g.params().label_string(e.line)}};
}

json walk_json(const Graph& g, const Walk& w) {
  json vs = json::array();
  for (std::size_t i = 0; i < w.pos.size(); ++i) vs.push_back(vertex_json(g, walk_vertex(g, w, i)));
  json s = json::object();
  for (auto [k, i] : w.s) s[std::to_string(k)] = i;
  return {{"length", w.len()}, {"vertices", vs}, {"tau", w.tau}, {"s", s}, {"ukmax", w.ukmax}};
}

json measure_json(const Graph& g, const EdgeMeasure& m) {
  json out = json::array();
  for (const auto& [eid, mass] : m.mass) out.push_back({{"edge", edge_json(g, eid)}, {"mass", rational_string(mass)}});
  return out;
}

json curve_json(const Graph& g, const CurveDistribution& c, std::size_t max_walks) {
  json walks = json::array();
  for (std::size_t i = 0; i < c.size() && i < max_walks; ++i)
    walks.push_back({{"prob", rational_string(c.prob[i])}, {"walk", walk_json(g, c.walks[i])}});
  return {{"support", c.size()},
          {"total", rational_string(c.total())},
          {"expected_length", rational_string(c.expected_length())},
          {"max_length", c.max_length()},
          {"walks", walks},
          {"expectation", measure_json(g, c.expectation(g))}};
}

json density_json(const DensityAudit& a) {
  return {{"edges", a.edges}, {"min_ratio", a.lo}, {"max_ratio", a.hi}, {"spread", a.spread()}};
}

// "a..b" or a single integer.
std::pair<int, int> parse_range(const std::string& s) {
  auto dots = s.find("..");
  if (dots == std::string::npos) return {std::stoi(s), std::stoi(s)};
  return {std::stoi(s.substr(0, dots)), std::stoi(s.substr(dots + 2))};
}

// Shortest decimal that reads back to the same double.
std::string num(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  for (int prec = 6; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
      if (!*file_) throw UsageError("cannot open output file " + path);
    }
  }
  std::ostream& os() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

struct Options {
  std::string params, out, x, y, kind = "good", construction = "pi";
  std::string R = "4", C = "4", k_range = "2..5";
  std::vector<double> P_grid{2, 3.5};
  std::vector<std::int64_t> radii{2, 4, 8};
  std::string box_lo, box_hi;
  std::vector<std::string> box_labels;
  double P = 2, C0 = 1, tol = 1e-10;
  int k = 1, cut = 0, centers = 20, samples = 60, max_walks = 20, box_k = 0;
  int m = 2, n1 = 3, n2 = 2;
  std::uint64_t seed = 1;
  bool full_alphabet = false, dump = false, no_geometry = false, no_curves = false;
};

Graph load_graph(const Options& o) {
  if (o.params.empty()) throw UsageError("--params is required");
  return Graph(Params::from_file(o.params));
}

void run_build(const Options& o) {
  Graph g = load_graph(o);
  const Params& P = g.params();
  Output out(o.out);
  if (o.dump) {
    g.dump(out.os());
    return;
  }
  std::vector<std::int64_t> sig;
  for (int k = 0; k <= P.depth(); ++k) sig.push_back(P.sigma(k));
  json j{{"depth", P.depth()},      {"window", {P.lo(), P.hi()}},       {"sigma", sig},
         {"lines", g.line_count()}, {"vertex_slots", g.vertex_count()}, {"edges", g.edge_count()},
         {"threshold", {neck_range_threshold(P).lower, neck_range_threshold(P).upper}}};
  out.os() << j.dump(2) << "\n";
}

void run_dist(const Options& o) {
  Graph g = load_graph(o);
  Point x = parse_point(g, o.x), y = parse_point(g, o.y);
  Output out(o.out);
  json j{{"x", point_json(g, x)}, {"y", point_json(g, y)}, {"d", rational_string(distance(g, x, y))}};
  out.os() << j.dump(2) << "\n";
}

void run_ball(const Options& o) {
  Graph g = load_graph(o);
  Point x = parse_point(g, o.x);
  Rational R = parse_rational(o.R);
  BallResult b = ball(g, x, R, true);
  json members = json::array();
  for (const auto& [id, d] : b.vertices)
    members.push_back({{"vertex", vertex_json(g, g.vertex_at(id))}, {"d", rational_string(d)}});
  Output out(o.out);
  json j{{"center", point_json(g, x)},
         {"R", rational_string(R)},
         {"mass", rational_string(ball_mass(g, b))},
         {"edges", b.edges.size()},
         {"members", members}};
  out.os() << j.dump(2) << "\n";
}

void run_walk(const Options& o) {
  Graph g = load_graph(o);
  Vertex x = parse_vertex(g, o.x), y = parse_vertex(g, o.y);
  Output out(o.out);
  json j{{"x", vertex_json(g, x)}, {"y", vertex_json(g, y)}, {"d", vertex_distance(g, x, y)}};
  if (o.kind == "geodesic") {
    j["walk"] = walk_json(g, geodesic_walk(g, Point{x.m, x.rep, 0}, Point{y.m, y.rep, 0}));
  } else if (o.kind == "good") {
    GoodWalk gw = good_walk(g, x, y);
    GoodWalkAudit a = audit_good_walk(g, gw, x, y);
    j["split"] = gw.split;
    j["necks"] = gw.necks.size();
    j["walk"] = walk_json(g, gw.walk);
    j["audit"] = {{"ok", a.ok()},         {"error", a.error},       {"gw1", a.gw1},
                  {"gw3", a.gw3},         {"length_lo", a.len_lo},  {"length_hi", a.len_hi},
                  {"segment_lo", a.seg_lo}, {"segment_hi", a.seg_hi}};
  } else {
    throw UsageError("--kind must be good or geodesic");
  }
  out.os() << j.dump(2) << "\n";
}

void run_measure(const Options& o) {
  Graph g = load_graph(o);
  Output out(o.out);
  if (!o.box_lo.empty()) {
    Box b{parse_rational(o.box_lo), parse_rational(o.box_hi), {}, o.box_k};
    json labels = json::array();
    for (const std::string& s : o.box_labels) {
      Point p = parse_point(g, "0:" + s);
      b.S.push_back(p.line);
      labels.push_back(g.params().label_string(p.line));
    }
    if (b.S.empty()) throw UsageError("a box needs at least one --label");
    json j{{"lo", rational_string(b.lo)}, {"hi", rational_string(b.hi)}, {"k", b.k},
           {"labels", labels},            {"mass", rational_string(box_measure(g, b))}};
    out.os() << j.dump(2) << "\n";
    return;
  }
  if (!o.x.empty()) {
    Point x = parse_point(g, o.x);
    BallMeasure bm = ball_measure(g, x, parse_rational(o.R));
    json j{{"center", point_json(g, x)}, {"R", o.R}, {"mass", rational_string(bm.mass)},
           {"predicted", bm.predicted},  {"ratio", bm.ratio}};
    out.os() << j.dump(2) << "\n";
    return;
  }
  // Doubling scan over seeded random centers in the middle half of the window.
  std::mt19937_64 rng(o.seed);
  const std::int64_t quarter = (g.hi() - g.lo()) / 4;
  std::uniform_int_distribution<std::int64_t> pos(g.lo() + quarter, g.hi() - quarter);
  std::uniform_int_distribution<std::uint32_t> line(0, g.line_count() - 1);
  std::vector<std::uint64_t> centers;
  for (int i = 0; i < o.centers; ++i) centers.push_back(g.vertex_id(g.normalize(pos(rng), g.line_at(line(rng)))));
  out.os() << "center,R,mass,ratio\n";
  for (const DoublingRow& r : doubling_scan(g, centers, o.radii)) {
    Vertex v = g.vertex_at(r.center);
    out.os() << v.m << ":" << g.params().label_string(v.rep) << "," << r.R << "," << rational_string(r.mass) << ","
             << num(r.ratio) << "\n";
  }
}

void run_curve(const Options& o) {
  Graph g = load_graph(o);
  Output out(o.out);
  const Params& P = g.params();
  json j{{"construction", o.construction}};
  const std::size_t mw = static_cast<std::size_t>(o.max_walks);
  if (o.construction == "pi") {
    Vertex x = parse_vertex(g, o.x), y = parse_vertex(g, o.y);
    PiCurve c = pi_random_curve(g, x, y, o.cut);
    j["x"] = vertex_json(g, x);
    j["y"] = vertex_json(g, y);
    j["d"] = vertex_distance(g, x, y);
    j["mid"] = vertex_json(g, c.mid);
    j["cut"] = c.cut;
    j["expansions"] = c.expansions;
    j["necks"] = c.necks;
    j["curve"] = curve_json(g, c.curve, mw);
    if (o.P > 1) {
      PiCondition pc = pi_condition_1(g, x, y, o.P, parse_rational(o.C));
      HolderChain h = holder_chain(g, c.curve, pc.nu, pc.capacity.g, o.P);
      j["norms"] = {{"P", o.P},          {"integral", h.integral}, {"norm_g", h.norm_g},
                    {"norm_curve", h.norm_curve}, {"product", h.product()}};
    }
  } else {
    Point x = parse_point(g, o.x);
    if (x.off != 0 || P.ord(x.m) != 0) throw UsageError("the start must be a plain vertex");
    Walk w;
    if (o.construction == "compression") {
      w = descend_to_socket(g, x.m, x.line, o.k, 1);
      CompressionCurve c = compression_curve(g, w, o.k, o.cut > 0 ? o.cut : 1);
      j["curve"] = curve_json(g, c.curve, mw);
      j["density"] = density_json(compression_density_audit(g, c));
      j["support_spread"] = support_spread(g, c.curve, c.spine);
    } else if (o.construction == "transport") {
      w = empty_walk(x.m, x.line);
      push_steps(w, 1, x.line, P.sigma(o.k) + (P.ord(x.m + P.sigma(o.k)) ? 1 : 0));
      TransportCurve c = transport_curve(g, w, o.k);
      j["curve"] = curve_json(g, c.curve, mw);
      j["density"] = density_json(transport_density_audit(g, c));
      j["support_spread"] = support_spread(g, c.curve, c.spine);
    } else if (o.construction == "expansion") {
      int cut = o.cut > 0 ? o.cut : expansion_cut(P, P.sigma(o.k), o.k);
      if (cut <= 0) throw UsageError("no expansion cut fits at this scale");
      w = empty_walk(x.m, x.line);
      push_steps(w, 1, x.line, P.sigma(o.k));
      ExpansionCurve c = expansion_curve(g, w, o.k, cut);
      j["cut"] = cut;
      j["kept_prob"] = rational_string(c.kept_prob);
      j["socket"] = c.socket;
      j["curve"] = curve_json(g, c.curve, mw);
      j["density_replaced"] = density_json(expansion_density_audit(g, c, true));
      j["density_kept"] = density_json(expansion_density_audit(g, c, false));
      j["support_spread"] = support_spread(g, c.curve, c.spine);
    } else {
      throw UsageError("--construction must be pi, compression, transport or expansion");
    }
    j["k"] = o.k;
  }
  out.os() << j.dump(2) << "\n";
}

void run_modulus(const Options& o) {
  Graph g = load_graph(o);
  Vertex x = parse_vertex(g, o.x), y = parse_vertex(g, o.y);
  CapacityOptions copt;
  copt.tol = o.tol;
  PiCondition pc = pi_condition_1(g, x, y, o.P, parse_rational(o.C), copt);
  Output out(o.out);
  json j{{"x", vertex_json(g, x)},
         {"y", vertex_json(g, y)},
         {"P", o.P},
         {"C", o.C},
         {"d", pc.distance},
         {"modulus", pc.modulus},
         {"lhs", pc.value},
         {"support_edges", pc.nu.edges.size()},
         {"newton", pc.capacity.newton},
         {"converged", pc.capacity.converged}};
  out.os() << j.dump(2) << "\n";
}

BadBoxConfig bad_box_config(const Options& o) {
  BadBoxConfig cfg;
  cfg.m = o.m;
  cfg.n1 = o.n1;
  cfg.n2 = o.n2;
  cfg.C0 = o.C0;
  cfg.merge = !o.full_alphabet;
  cfg.capacity.tol = o.tol;
  return cfg;
}

json bad_box_json(const BadBoxResult& r, double P) {
  return {{"k", r.k},
          {"P", P},
          {"M", r.M},
          {"depth", r.depth},
          {"center", r.center},
          {"d", r.distance},
          {"modulus", r.modulus},
          {"lhs", r.lhs},
          {"rhs_bound", r.rhs_bound},
          {"dominant", r.dominant},
          {"explicit_value", r.explicit_value},
          {"explicit_shortest", r.explicit_shortest},
          {"one_sided_shortest", r.one_sided_shortest},
          {"vertices", r.vertices},
          {"edges", r.edges}};
}

void run_bad_box(const Options& o) {
  BadBoxConfig cfg = bad_box_config(o);
  Output out(o.out);
  out.os() << bad_box_json(bad_box_experiment(o.k, o.P, cfg), o.P).dump(2) << "\n";
}

// One row per (P, k): the bad-box pair at scale k, its normalized modulus,
// the explicit upper bound and the neck sum at the conjugate exponent.
void run_poincare_scan(const Options& o) {
  BadBoxConfig cfg = bad_box_config(o);
  auto [k0, k1] = parse_range(o.k_range);
  if (o.P_grid.empty() || k0 < 2 || k1 < k0) throw UsageError("need a nonempty P grid and a k range within 2..");
  Output out(o.out);
  out.os() << "P,k,pair,lhs,rhs_bound,neck_sum\n";
  for (double P : o.P_grid)
    for (int k = k0; k <= k1; ++k) {
      BadBoxResult r = bad_box_experiment(k, P, cfg);
      double ns = neck_sum(bad_box_params(k, cfg, r.M), k, P / (P - 1));
      out.os() << num(P) << "," << k << ",bad-box-k" << k << "," << num(r.lhs) << "," << num(r.rhs_bound) << ","
               << num(ns) << "\n";
    }
}

void run_calibrate(const Options& o) {
  CalibrationOptions copt;
  copt.samples = o.samples;
  copt.seed = o.seed;
  copt.geometry = !o.no_geometry;
  copt.curves = !o.no_curves;
  if (o.params.empty()) throw UsageError("--params is required");
  Calibration c = calibrate(Params::from_file(o.params), copt);
  Output out(o.out);
  out.os() << calibration_json(c) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Self-similar graph truncations: geometry, random curves and p-modulus experiments"};
  app.set_config("--config", "", "INI/TOML file with option values (sections name subcommands)");
  app.require_subcommand(1);
  Options o;

  auto with_params = [&](CLI::App* s) {
    s->add_option("--params", o.params, "Parameter JSON file")->check(CLI::ExistingFile);
    s->add_option("-o,--out", o.out, "Output file (default stdout)");
  };
  auto* build = app.add_subcommand("build", "Summary of a truncation, or its dump");
  with_params(build);
  build->add_flag("--dump", o.dump, "Write the full vertex/edge dump");

  auto* dist = app.add_subcommand("dist", "Distance between two points {x, y, d}");
  with_params(dist);
  dist->add_option("--x", o.x, "Point m:lam:theta")->required();
  dist->add_option("--y", o.y, "Point m:lam:theta")->required();

  auto* ball_cmd = app.add_subcommand("ball", "Closed ball members with distances");
  with_params(ball_cmd);
  ball_cmd->add_option("--x", o.x, "Center m:lam:theta")->required();
  ball_cmd->add_option("--R", o.R, "Radius (rational)");

  auto* walk = app.add_subcommand("walk", "Good or geodesic walk between two vertices");
  with_params(walk);
  walk->add_option("--x", o.x, "Vertex m:lam:theta")->required();
  walk->add_option("--y", o.y, "Vertex m:lam:theta")->required();
  walk->add_option("--kind", o.kind, "good | geodesic");

  auto* measure = app.add_subcommand("measure", "Box mass, ball mass, or doubling scan (CSV)");
  with_params(measure);
  measure->add_option("--box-lo", o.box_lo, "Box interval start");
  measure->add_option("--box-hi", o.box_hi, "Box interval end");
  measure->add_option("--box-k", o.box_k, "Box depth");
  measure->add_option("--label", o.box_labels, "Box label lam:theta (repeatable)");
  measure->add_option("--x", o.x, "Ball center m:lam:theta");
  measure->add_option("--R", o.R, "Ball radius");
  measure->add_option("--centers", o.centers, "Doubling scan: random centers");
  measure->add_option("--radii", o.radii, "Doubling scan: radii")->delimiter(',');
  measure->add_option("--seed", o.seed, "Doubling scan: sampling seed");

  auto* curve = app.add_subcommand("curve", "Random curve construction with expectation and norms");
  with_params(curve);
  curve->add_option("--construction", o.construction, "pi | compression | transport | expansion");
  curve->add_option("--x", o.x, "Start vertex")->required();
  curve->add_option("--y", o.y, "End vertex (pi)");
  curve->add_option("--k", o.k, "Scale");
  curve->add_option("--cut", o.cut, "Cut depth (0: calibrated)");
  curve->add_option("--P", o.P, "Exponent for the norm report (pi)");
  curve->add_option("--C", o.C, "Pair-measure constant (pi)");
  curve->add_option("--max-walks", o.max_walks, "Walks listed in the output");

  auto* modulus = app.add_subcommand("modulus", "d^{P-1} Mod_P for one pair against the pair measure");
  with_params(modulus);
  modulus->add_option("--x", o.x, "Vertex")->required();
  modulus->add_option("--y", o.y, "Vertex")->required();
  modulus->add_option("--P", o.P, "Exponent > 1");
  modulus->add_option("--C", o.C, "Pair-measure constant");
  modulus->add_option("--tol", o.tol, "Solver tolerance");

  auto bad_box_opts = [&](CLI::App* s) {
    s->add_option("--m", o.m, "Scale factor");
    s->add_option("--n1", o.n1, "First alphabet size");
    s->add_option("--n2", o.n2, "Second alphabet size");
    s->add_option("--C0", o.C0, "Box constant");
    s->add_option("--tol", o.tol, "Solver tolerance");
    s->add_flag("--full-alphabet", o.full_alphabet, "Do not merge symmetric symbols");
    s->add_option("-o,--out", o.out, "Output file (default stdout)");
  };
  auto* bad_box = app.add_subcommand("bad-box", "Bad-box pair at one scale");
  bad_box_opts(bad_box);
  bad_box->add_option("--k", o.k, "Scale >= 2");
  bad_box->add_option("--P", o.P, "Exponent > 1");

  auto* scan = app.add_subcommand("poincare-scan", "CSV over P x k: P,k,pair,lhs,rhs_bound,neck_sum");
  bad_box_opts(scan);
  scan->add_option("--P-grid", o.P_grid, "Exponents > 1")->delimiter(',');
  scan->add_option("--k-range", o.k_range, "Scales a..b");

  auto* cal = app.add_subcommand("calibrate", "Measured constants as JSON");
  with_params(cal);
  cal->add_option("--samples", o.samples, "Samples per check");
  cal->add_option("--seed", o.seed, "Sampling seed");
  cal->add_flag("--no-geometry", o.no_geometry, "Skip ball/box, walk and good-walk checks");
  cal->add_flag("--no-curves", o.no_curves, "Skip random-curve densities");

  for (CLI::App* s : app.get_subcommands({})) s->configurable();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }
  try {
    CLI::App* s = app.get_subcommands().front();
    const std::string name = s->get_name();
    if (name == "build") run_build(o);
    else if (name == "dist") run_dist(o);
    else if (name == "ball") run_ball(o);
    else if (name == "walk") run_walk(o);
    else if (name == "measure") run_measure(o);
    else if (name == "curve") run_curve(o);
    else if (name == "modulus") run_modulus(o);
    else if (name == "bad-box") run_bad_box(o);
    else if (name == "poincare-scan") run_poincare_scan(o);
    else if (name == "calibrate") run_calibrate(o);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const WindowError& e) {
    std::cerr << "window error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

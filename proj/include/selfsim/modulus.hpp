#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "selfsim/curves.hpp"
#include "selfsim/measure.hpp"

namespace selfsim {

struct ModulusError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Finite graph with edge masses and lengths: the data of a modulus problem.
struct FlowGraph {
  int n = 0;
  std::vector<int> a, b;
  std::vector<double> mass, length;

  int add_vertex() { return n++; }
  void add_edge(int u, int v, double m, double len = 1.0);
  std::size_t edge_count() const { return a.size(); }
};

struct ModulusOptions {
  // Slack on the g-length of the shortest path.
  double tol = 1e-9;
  int max_paths = 10000;
};

struct ModulusCertificate {
  // Density per edge, scaled so that every path has g-length >= 1.
  std::vector<double> g;
  // Active paths as edge index lists.
  std::vector<std::vector<int>> paths;
  // Objective of the admissible g (an upper bound) and of the dual (a lower bound).
  double value = 0, lower = 0;
  double gap() const { return value - lower; }
  double shortest = 0;
  int iterations = 0;
  bool converged = false;
};

// Modulus of all paths from s to t by cutting planes: the restricted convex
// problem over the active paths is solved exactly through its dual, and the
// shortest path under g supplies the next constraint.
ModulusCertificate p_modulus(const FlowGraph& G, int s, int t, double P, const ModulusOptions& opt = {});

struct CapacityOptions {
  double tol = 1e-10;
  int max_newton = 60;
  int max_cg = 20000;
};

struct CapacityResult {
  std::vector<double> potential;
  // |du| / length per edge: admissible for every path from s to t.
  std::vector<double> g;
  double value = 0;
  int newton = 0, cg = 0;
  bool converged = false;
};

// min sum mass (|du| / length)^P over potentials with u(s) = 0, u(t) = 1.
// Equals the modulus of the paths from s to t.
CapacityResult p_capacity(const FlowGraph& G, int s, int t, double P, const CapacityOptions& opt = {});

// Shortest g-length over all paths from s to t.
double shortest_g_length(const FlowGraph& G, const std::vector<double>& g, int s, int t);

// The truncation restricted to the edges of a measure.
struct SupportGraph {
  FlowGraph graph;
  // Sorted vertex ids; edges in the order of the measure.
  std::vector<std::uint64_t> vertex_ids, edge_ids;
  // Index of a vertex id, or -1.
  int at(std::uint64_t vid) const;
};

SupportGraph support_graph(const Graph& g, const DensityMeasure& nu);

struct PiCondition {
  int distance = 0;
  double modulus = 0;
  // d^{P-1} Mod_P.
  double value = 0;
  DensityMeasure nu;
  SupportGraph support;
  CapacityResult capacity;
};

// d(p, q)^{P-1} Mod_P(p, q) against the pair measure with constant C.
PiCondition pi_condition_1(const Graph& g, const Vertex& p, const Vertex& q, double P, const Rational& C,
                           const CapacityOptions& opt = {});

struct HolderChain {
  double integral = 0;  // sum g dE
  double norm_g = 0;    // ||g||_{L^P(nu)}
  double norm_curve = 0;  // ||dE / dnu||_{L^Q(nu)}
  double product() const { return norm_g * norm_curve; }
};

// Both sides of 1 <= int g dE <= ||g||_P ||dE/dnu||_Q for a density g on
// the edges of nu (in nu's edge order).
HolderChain holder_chain(const Graph& g, const CurveDistribution& c, const DensityMeasure& nu,
                         const std::vector<double>& gdens, double P);

struct Threshold {
  double lower = 0, upper = 0;
  bool exact() const { return lower == upper; }
};

// 1 + log_m(S1 / w_spade) for constant m; otherwise the bracket between
// base N and base 2.
Threshold neck_range_threshold(const Params& P);

// sum_{l=1..k} (S1 / w_spade)^{l (Q - 1)} sigma_{k-l} / sigma_k.
double neck_sum(const Params& P, int k, double Q);

struct BadBoxConfig {
  int m = 2;
  // Alphabet sizes and weights of the first alphabet: END, SPADE, others.
  int n1 = 3, n2 = 2;
  Rational w_spade = 1;
  double C0 = 1;
  // Depth offset of the socket between the points; 0 picks the smallest
  // making it the only one of its order in the box.
  int M = 0;
  // Merge the first-alphabet symbols other than SPADE (exact when they
  // carry equal weights, by symmetry of the optimal potential).
  bool merge = true;
  CapacityOptions capacity;
};

struct BadBoxResult {
  int k = 0, M = 0, depth = 0;
  std::int64_t center = 0;
  int distance = 0;
  double modulus = 0, lhs = 0;
  // The explicit sum bounding lhs up to a constant, and its i = k - 1 term.
  double rhs_bound = 0, dominant = 0;
  // The explicit density, mirrored to both sides of the center and halved:
  // d^{P-1} times its objective and the smallest g-length of a path under
  // it; and the smallest g-length under the one-sided density.
  double explicit_value = 0, explicit_shortest = 0, one_sided_shortest = 0;
  std::size_t vertices = 0, edges = 0;
};

// Bad box pair at scale k: labels SPADE up to depth k + M, a socket at
// position m of order k + M, points at m -/+ sigma_k whose second-alphabet
// labels differ only at entry k + M.
BadBoxResult bad_box_experiment(int k, double P, const BadBoxConfig& cfg = {});
// The truncation used by the experiment at scale k.
Params bad_box_params(int k, const BadBoxConfig& cfg, int M);
int bad_box_offset(int m, double C0);

}  // namespace selfsim

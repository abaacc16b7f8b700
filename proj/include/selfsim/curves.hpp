#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "selfsim/measure.hpp"
#include "selfsim/walks.hpp"

namespace selfsim {

struct CurveError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Probability law on vertex ids.
using PointLaw = std::map<std::uint64_t, Rational>;

// Finitely supported random point: lines through one position.
struct Ensemble {
  std::int64_t m = 0;
  std::vector<Line> lines;
  std::vector<Rational> prob;
  PointLaw law(const Graph& g) const;
};

// Lines agreeing with base beyond entry k; line l has probability
// (S1 S2)^-k times the weight of its first k entries.
Ensemble full_ensemble(const Graph& g, std::int64_t m, Line base, int k);
// Lines with base's first-alphabet label whose second-alphabet label agrees
// with base beyond entry k; probability S2^-k times the weight of the
// first k second-alphabet entries.
Ensemble theta_ensemble(const Graph& g, std::int64_t m, Line base, int k);

// First k entries of both labels from head, the rest from tail.
Line graft(const Params& P, Line head, Line tail, int k);

// Random walk with finite support.
struct CurveDistribution {
  std::vector<Walk> walks;
  std::vector<Rational> prob;

  std::size_t size() const { return walks.size(); }
  Rational total() const;
  // Expected number of crossings of each edge.
  EdgeMeasure expectation(const Graph& g) const;
  PointLaw start_law(const Graph& g) const;
  PointLaw end_law(const Graph& g) const;
  Rational expected_length() const;
  int max_length() const;
};

CurveDistribution reverse_curve(const CurveDistribution& c);
// Concatenation by equality of laws: conditionally on the shared point,
// the two pieces are independent. Throws CurveError if the end law of a
// differs from the start law of b.
CurveDistribution concat_curves(const Graph& g, const CurveDistribution& a, const CurveDistribution& b);
// Restriction to walks with index in keep, renormalised.
CurveDistribution condition(const CurveDistribution& c, const std::vector<std::size_t>& keep);

// Subwalk between vertex indices a <= b; its start line is the edge before
// a, markers are shifted and clipped.
Walk subwalk(const Walk& w, std::size_t a, std::size_t b);

// Checks the hypotheses of the compression construction for a walk of
// scale k with constant C0; empty string when all hold.
std::string compression_hypotheses(const Graph& g, const Walk& w, int k, double C0);

struct CompressionCurve {
  CurveDistribution curve;
  Walk spine;
  int k = 0, cut = 0;
  Ensemble start;
  // Law predicted for the end point: free second-alphabet entries up to
  // k - cut over the socket.
  Ensemble end;
};

// Lifts of w from the full ensemble at its start of depth k - cut, each
// following the markers of w down to the socket at its end.
CompressionCurve compression_curve(const Graph& g, const Walk& w, int k, int cut, double C0 = 8);

struct TransportCurve {
  CurveDistribution curve;
  Walk spine;
  int k = 0;
  Ensemble start, end;
};

// Lifts of w from the full ensemble of depth k at its start, entries up to
// k frozen. Throws CurveError when a lift meets a second-alphabet change at
// a point that is not a socket for it.
TransportCurve transport_curve(const Graph& g, const Walk& w, int k);

struct ExpansionCurve {
  CurveDistribution curve;
  // Conditional laws on the event that the old walk is kept / replaced.
  CurveDistribution kept, replaced;
  Rational kept_prob;
  Walk spine, in_walk, out_walk;
  int k = 0, cut = 0;
  // Order of the socket the new walks pass through: k - cut + 1.
  int socket_order = 0;
  std::int64_t socket = 0;
  Ensemble start, end;
};

// Whether the descend and ascend walks of order k - cut + 1 from a plain
// start fit in a monotone constant-label walk of length len.
bool expansion_fits(const Params& P, std::int64_t start, int dir, std::int64_t len, int k, int cut);
// Smallest cut >= 1 for which the expansion fits for every plain start
// position; -1 if none does.
int expansion_cut(const Params& P, std::int64_t len, int k);

// Smallest cut that fits everywhere at every scale from the cut up to the
// depth; the depth itself if none does.
int calibrated_cut(const Params& P);

// Raises the depth of the full ensemble from k - cut to k - cut + 1 along
// a monotone constant-label walk w between plain vertices.
ExpansionCurve expansion_curve(const Graph& g, const Walk& w, int k, int cut);

// Ratio of exact expected density to the closed-form density over the
// support of a construction.
struct DensityAudit {
  double lo = 1e300, hi = 0;
  std::size_t edges = 0;
  double spread() const { return edges ? hi / lo : 0; }
  void add(double exact, double formula);
};

DensityAudit compression_density_audit(const Graph& g, const CompressionCurve& c);
DensityAudit transport_density_audit(const Graph& g, const TransportCurve& c);
DensityAudit expansion_density_audit(const Graph& g, const ExpansionCurve& c, bool replaced);

// Largest distance from a support edge of c to the vertices of spine.
int support_spread(const Graph& g, const CurveDistribution& c, const Walk& spine);

// (sum over the support of nu(e) (E(e) / nu(e))^Q)^(1/Q) for E the
// expected crossings; infinite if E charges an edge outside nu.
double lq_norm(const CurveDistribution& c, const Graph& g, const DensityMeasure& nu, double Q);
double lq_norm(const CurveDistribution& c, const Graph& g, const EdgeMeasure& nu, double Q);

struct PiCurve {
  CurveDistribution curve;
  Vertex mid;
  int depth = 0, cut = 0;
  int expansions = 0, necks = 0, socket_passes = 0;
};

// Random curve from x to y assembled from expansions, necks and
// transports along good walks from x and y to a plain midpoint, glued by
// equality of laws there. cut <= 0 picks the calibrated value.
PiCurve pi_random_curve(const Graph& g, const Vertex& x, const Vertex& y, int cut = 0);

}  // namespace selfsim

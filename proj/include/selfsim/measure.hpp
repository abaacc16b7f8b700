#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "selfsim/geodesy.hpp"

namespace selfsim {

// Finitely supported measure on edges: edge id -> mass of the whole edge.
struct EdgeMeasure {
  std::map<std::uint64_t, Rational> mass;
  Rational total() const;
  void add(std::uint64_t eid, const Rational& m) { mass[eid] += m; }
};

// Base measure restricted to the given edges.
EdgeMeasure base_measure(const Graph& g, const std::vector<std::uint64_t>& edges);

// Closed-form box mass: |I| S1^k S2^k sum over S of the weight of entries
// beyond k. Throws std::invalid_argument when two members of S agree
// beyond depth k (the separation hypothesis fails) or k exceeds the depth.
Rational box_measure(const Graph& g, const Box& b);

struct BallMeasure {
  Rational mass;
  // R (S1 S2)^lg R times the tail weights of the outer label set.
  double predicted = 0;
  double ratio = 0;
};

// Exact mass of the closed ball of radius R, with the box-formula estimate.
BallMeasure ball_measure(const Graph& g, const Point& x, const Rational& R);

struct DoublingRow {
  std::uint64_t center = 0;
  std::int64_t R = 0;
  Rational mass, mass2;
  double ratio = 0;
};

// mu(B(x, 2R)) / mu(B(x, R)) for every center and radius; throws
// WindowError when 2R leaves the window.
std::vector<DoublingRow> doubling_scan(const Graph& g, const std::vector<std::uint64_t>& centers,
                                       const std::vector<std::int64_t>& radii);
double max_doubling_ratio(const std::vector<DoublingRow>& rows);

// Distances and ball masses around a vertex p up to a radius. The mass of
// B(p, r) is piecewise linear in r with breaks at half-integers, so it is
// tabulated exactly there.
class RieszField {
 public:
  RieszField(const Graph& g, std::uint64_t p, const Rational& radius);
  // mu(B(p, r)) for r a nonnegative multiple of 1/2 up to the radius.
  const Rational& ball_mass_half(std::int64_t twice_r) const;
  // Distance from p to the midpoint of an edge; negative when beyond reach.
  Rational midpoint_distance(std::uint64_t eid) const;
  // d(p, mid) / mu(B(p, d(p, mid))) at the edge midpoint.
  double density(std::uint64_t eid) const;
  // Edges whose midpoint lies in the open ball of the field radius.
  const std::vector<std::uint64_t>& edges() const { return edges_; }
  const Rational& radius() const { return radius_; }

 private:
  const Graph& g_;
  Bfs bfs_;
  Rational radius_;
  std::vector<Rational> table_;
  std::vector<std::uint64_t> edges_;
};

// Edge measure with a real density over the base mass.
struct DensityMeasure {
  std::vector<std::uint64_t> edges;
  std::vector<double> density;
  std::vector<Rational> base;
  double mass(std::size_t i) const { return density[i] * base[i].get_d(); }
  double total() const;
  // Index of an edge, or -1.
  std::ptrdiff_t find(std::uint64_t eid) const;
};

// Riesz potential centred on p, truncated to the open ball of the radius.
DensityMeasure riesz_measure(const Graph& g, std::uint64_t p, const Rational& radius);

// Sum of the two truncated Riesz densities at p and q, each restricted to
// the ball of radius C d(p, q), times the base measure. Edges sorted by id.
DensityMeasure pair_measure(const Graph& g, std::uint64_t p, std::uint64_t q, const Rational& C);

}  // namespace selfsim

#pragma once

#include <cstdint>
#include <vector>

#include "selfsim/graph.hpp"
#include "selfsim/walk.hpp"

namespace selfsim {

// Breadth-first search over the dense vertex index of a truncation. The
// distance array is reused across runs; only touched entries are reset.
class Bfs {
 public:
  explicit Bfs(const Graph& g);
  // Distances from the given sources (all at distance 0), up to radius
  // (negative means unbounded).
  void run(const std::vector<std::uint64_t>& sources, int radius = -1);
  void run(std::uint64_t source, int radius = -1) { run(std::vector<std::uint64_t>{source}, radius); }
  int dist(std::uint64_t id) const { return dist_[id]; }
  // Vertices reached, in nondecreasing distance order.
  const std::vector<std::uint64_t>& reached() const { return order_; }
  const Graph& graph() const { return g_; }

 private:
  const Graph& g_;
  std::vector<std::int32_t> dist_;
  std::vector<std::uint64_t> order_;
};

// Exact distances from a point to every vertex; edge-interior points use
// one search per endpoint.
class PointField {
 public:
  PointField(const Graph& g, const Point& x, int radius = -1);
  bool reached(std::uint64_t id) const;
  Rational dist(std::uint64_t id) const;
  // Distance to the point at parameter t of edge e.
  Rational dist_edge_point(const Edge& e, const Rational& t) const;
  // Vertices reached by either search.
  std::vector<std::uint64_t> reached_vertices() const;
  const Point& center() const { return x_; }

 private:
  const Graph& g_;
  Point x_;
  Bfs a_, b_;
  bool interior_;
};

Rational distance(const Graph& g, const Point& x, const Point& y);
int vertex_distance(const Graph& g, const Vertex& a, const Vertex& b);

// Geodesic walk between the vertices w_x, w_y nearest to x and y realizing
// d(x, y) = d(x, w_x) + len W + d(y, w_y). Ties are broken by the smallest
// (position, label key) successor.
Walk geodesic_walk(const Graph& g, const Point& x, const Point& y);

struct BallResult {
  // Vertices within the radius, with exact distances.
  std::vector<std::pair<std::uint64_t, Rational>> vertices;
  // Edges meeting the ball, with covered length in (0, 1].
  std::vector<std::pair<std::uint64_t, Rational>> edges;
};

// closed: include the boundary (d <= r); otherwise d < r.
BallResult ball(const Graph& g, const Point& center, const Rational& r, bool closed = false);
Rational ball_mass(const Graph& g, const BallResult& b);

struct Box {
  Rational lo, hi;
  std::vector<Line> S;
  int k = 0;
};

bool box_contains_vertex(const Graph& g, const Box& b, const Vertex& v);
bool box_contains_edge_point(const Graph& g, const Box& b, const Edge& e, const Rational& t);
// Label set S(x, R) of the outer box.
std::vector<Line> outer_labels(const Graph& g, const Point& x, const Rational& R);

struct Sandwich {
  Box inner, outer;
  bool inner_ok = false;
  bool outer_ok = false;
  bool ok() const { return inner_ok && outer_ok; }
};

// Checks inner box (depth lg(R/C)) within the closed ball, and closed ball
// within the outer box, over vertices and edge midpoints.
Sandwich ball_box_sandwich(const Graph& g, const Point& x, const Rational& R, std::int64_t C);

}  // namespace selfsim

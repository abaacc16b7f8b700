#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "selfsim/params.hpp"

namespace selfsim {

enum class Kind { Plain, Gluing, Socket };
const char* kind_name(Kind k);

// A vertex class; rep is the representative line with every wildcard entry
// set to the end symbol.
struct Vertex {
  std::int64_t m = 0;
  Line rep;
  Kind kind = Kind::Plain;
  int order = 0;
  friend bool operator==(const Vertex& a, const Vertex& b) { return a.m == b.m && a.rep == b.rep; }
};

// The unit edge [left, left + 1] on a line.
struct Edge {
  std::int64_t left = 0;
  Line line;
  friend bool operator==(const Edge&, const Edge&) = default;
};

// A point of the graph: the vertex (m, line) when off == 0, otherwise the
// point at parameter off in (0, 1) of the edge [m, m + 1] on line.
struct Point {
  std::int64_t m = 0;
  Line line;
  Rational off = 0;
};

struct WindowError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class Graph {
 public:
  explicit Graph(Params p);

  const Params& params() const { return P_; }
  int depth() const { return P_.depth(); }
  std::int64_t lo() const { return P_.lo(); }
  std::int64_t hi() const { return P_.hi(); }
  bool in_window(std::int64_t m) const { return m >= P_.lo() && m <= P_.hi(); }

  Vertex normalize(std::int64_t m, Line l) const;
  Vertex normalize(std::int64_t m, const std::vector<int>& lam, const std::vector<int>& theta) const;
  Vertex vertex(const Point& p) const;
  std::vector<Line> fiber(const Vertex& v) const;
  std::vector<Edge> neighbors(const Vertex& v) const;
  Vertex left(const Edge& e) const { return normalize(e.left, e.line); }
  Vertex right(const Edge& e) const { return normalize(e.left + 1, e.line); }
  bool incident(const Vertex& v, const Edge& e) const;
  static Rational project(const Point& p) { return Rational(p.m) + p.off; }
  static Rational project(const Vertex& v) { return Rational(v.m); }

  // Kind of a position of order t on a line with first label lam.
  Kind kind_of(int t, std::uint32_t lam) const;
  Line rep_line(std::int64_t m, Line l) const;
  int order_at(std::int64_t m) const { return ord_[static_cast<std::size_t>(m - P_.lo())]; }

  // Dense indexing over the window.
  std::uint32_t line_count() const { return L_; }
  std::uint32_t line_index(Line l) const { return l.lam * T_ + l.theta; }
  Line line_at(std::uint32_t idx) const { return Line{idx / T_, idx % T_}; }
  std::int64_t position_count() const { return P_.hi() - P_.lo() + 1; }
  std::uint64_t vertex_count() const { return static_cast<std::uint64_t>(position_count()) * L_; }
  std::uint64_t vertex_id(const Vertex& v) const { return vid(v.m, v.rep); }
  std::uint64_t vid(std::int64_t m, Line rep) const {
    return static_cast<std::uint64_t>(m - P_.lo()) * L_ + line_index(rep);
  }
  Vertex vertex_at(std::uint64_t id) const;
  std::uint64_t edge_id(const Edge& e) const {
    return static_cast<std::uint64_t>(e.left - P_.lo()) * L_ + line_index(e.line);
  }
  Edge edge_at(std::uint64_t id) const;
  std::uint64_t edge_count() const { return static_cast<std::uint64_t>(position_count() - 1) * L_; }

  // Calls f(neighbor_id, edge_id) for every edge at the vertex with the given id.
  template <class F>
  void for_each_edge(std::uint64_t id, F&& f) const;
  // Fiber line indices of the vertex with the given id.
  void fiber_indices(std::uint64_t id, std::vector<std::uint32_t>& out) const;

  const Rational& lam_weight(std::uint32_t lam) const { return lamW_[lam]; }
  const Rational& theta_weight(std::uint32_t theta) const { return thetaW_[theta]; }
  Rational edge_mass(const Edge& e) const { return lamW_[e.line.lam] * thetaW_[e.line.theta]; }
  double edge_mass_d(std::uint64_t eid) const {
    Line l = line_at(static_cast<std::uint32_t>(eid % L_));
    return lamWd_[l.lam] * thetaWd_[l.theta];
  }
  int spade_prefix(std::uint32_t lam) const { return spade_[lam]; }

  // Deterministic line-oriented dump: header, params, one V record per
  // vertex class, one E record per edge, ordered by position then label.
  void dump(std::ostream& os) const;
  static Graph load(std::istream& is);

 private:
  Params P_;
  std::uint32_t L_, T_;
  std::vector<int> ord_;
  std::vector<std::uint8_t> spade_;
  std::vector<Rational> lamW_, thetaW_;
  std::vector<double> lamWd_, thetaWd_;
};

template <class F>
void Graph::for_each_edge(std::uint64_t id, F&& f) const {
  const std::int64_t i = static_cast<std::int64_t>(id / L_);
  const std::uint32_t li = static_cast<std::uint32_t>(id % L_);
  const std::int64_t m = P_.lo() + i;
  const int t = ord_[i];
  const int K = P_.depth();
  const std::uint32_t lam0 = li / T_, th0 = li % T_;
  int nl = 1, nt = 1;
  std::uint32_t pl = 0, pt = 0;
  if (t >= 1 && t <= K) {
    nl = P_.n1();
    pl = P_.pow1(t - 1);
    if (kind_of(t, lam0) == Kind::Socket) {
      nt = P_.n2();
      pt = P_.pow2(t - 1);
    }
  }
  const std::int64_t npos = position_count();
  for (int a = 0; a < nl; ++a) {
    for (int b = 0; b < nt; ++b) {
      Line l{lam0 + a * pl, th0 + b * pt};
      if (i > 0) {
        Line r = rep_line(m - 1, l);
        f(static_cast<std::uint64_t>(i - 1) * L_ + line_index(r),
          static_cast<std::uint64_t>(i - 1) * L_ + line_index(l));
      }
      if (i + 1 < npos) {
        Line r = rep_line(m + 1, l);
        f(static_cast<std::uint64_t>(i + 1) * L_ + line_index(r),
          static_cast<std::uint64_t>(i) * L_ + line_index(l));
      }
    }
  }
}

}  // namespace selfsim

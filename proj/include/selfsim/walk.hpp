#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "selfsim/graph.hpp"

namespace selfsim {

// Alternating vertex/edge string. Edge i joins pos[i] and pos[i + 1] on
// lines[i]; start_line is a line through the first vertex.
struct Walk {
  std::vector<std::int64_t> pos;
  std::vector<Line> lines;
  Line start_line;
  // tau[i - 1] is the index of the vertex w_{tau_i}.
  std::vector<int> tau;
  // Index of the distinguished vertex w_{s(k)} per label entry k.
  std::map<int, int> s;
  int ukmax = -1;

  std::size_t len() const { return lines.size(); }
  std::int64_t first() const { return pos.front(); }
  std::int64_t last() const { return pos.back(); }
  Line end_line() const { return lines.empty() ? start_line : lines.back(); }
  Edge edge(std::size_t i) const {
    return Edge{pos[i] < pos[i + 1] ? pos[i] : pos[i + 1], lines[i]};
  }
};

Walk empty_walk(std::int64_t m, Line l);
// Appends one step in direction dir along line l.
void push_step(Walk& w, int dir, Line l);
// Appends n steps in direction dir along line l.
void push_steps(Walk& w, int dir, Line l, std::int64_t n);

Vertex walk_vertex(const Graph& g, const Walk& w, std::size_t i);
Vertex walk_start(const Graph& g, const Walk& w);
Vertex walk_end(const Graph& g, const Walk& w);
// Empty string when w is a valid walk on g; a diagnostic otherwise.
std::string check_walk(const Graph& g, const Walk& w);
// +1 if pi strictly increases along w, -1 if it strictly decreases, 0 otherwise.
int monotone_dir(const Walk& w);

Walk concat(const Graph& g, const Walk& a, const Walk& b);
Walk reverse(const Walk& w);

// Sorted list of crossed edge ids with multiplicities.
std::vector<std::pair<std::uint64_t, int>> crossings(const Graph& g, const Walk& w);

bool same_walk(const Walk& a, const Walk& b);
std::string walk_key(const Walk& w);

}  // namespace selfsim

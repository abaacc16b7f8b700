#include "selfsim/walk.hpp"

#include <algorithm>
#include <stdexcept>

namespace selfsim {

Walk empty_walk(std::int64_t m, Line l) {
  Walk w;
  w.pos.push_back(m);
  w.start_line = l;
  return w;
}

void push_step(Walk& w, int dir, Line l) {
  w.pos.push_back(w.pos.back() + dir);
  w.lines.push_back(l);
}

void push_steps(Walk& w, int dir, Line l, std::int64_t n) {
  for (std::int64_t i = 0; i < n; ++i) push_step(w, dir, l);
}

Vertex walk_vertex(const Graph& g, const Walk& w, std::size_t i) {
  if (i == 0) return g.normalize(w.pos[0], w.len() ? w.lines[0] : w.start_line);
  return g.normalize(w.pos[i], w.lines[i - 1]);
}

Vertex walk_start(const Graph& g, const Walk& w) { return walk_vertex(g, w, 0); }
Vertex walk_end(const Graph& g, const Walk& w) { return walk_vertex(g, w, w.len()); }

std::string check_walk(const Graph& g, const Walk& w) {
  if (w.pos.size() != w.lines.size() + 1) return "position/edge count mismatch";
  if (!(g.normalize(w.pos[0], w.start_line) == walk_vertex(g, w, 0)))
    return "start line does not pass through the first vertex";
  for (std::size_t i = 0; i < w.len(); ++i) {
    std::int64_t d = w.pos[i + 1] - w.pos[i];
    if (d != 1 && d != -1) return "step " + std::to_string(i) + " is not a unit step";
    if (!g.in_window(w.pos[i]) || !g.in_window(w.pos[i + 1])) return "walk leaves the window";
    if (i + 1 < w.len() && !(g.normalize(w.pos[i + 1], w.lines[i]) == g.normalize(w.pos[i + 1], w.lines[i + 1])))
      return "edges " + std::to_string(i) + " and " + std::to_string(i + 1) + " do not share a vertex";
  }
  for (std::size_t i = 1; i < w.tau.size(); ++i)
    if (w.tau[i] == w.tau[i - 1]) return "repeated tau marker";
  return "";
}

int monotone_dir(const Walk& w) {
  if (w.len() == 0) return 0;
  int d = static_cast<int>(w.pos[1] - w.pos[0]);
  for (std::size_t i = 1; i < w.len(); ++i)
    if (w.pos[i + 1] - w.pos[i] != d) return 0;
  return d;
}

Walk concat(const Graph& g, const Walk& a, const Walk& b) {
  if (a.last() != b.first() || !(walk_end(g, a) == walk_start(g, b)))
    throw std::invalid_argument("concat: endpoint mismatch");
  Walk r = a;
  int shift = static_cast<int>(a.len());
  r.pos.insert(r.pos.end(), b.pos.begin() + 1, b.pos.end());
  r.lines.insert(r.lines.end(), b.lines.begin(), b.lines.end());
  r.tau.clear();
  for (int t : a.tau) r.tau.push_back(t);
  for (int t : b.tau) r.tau.push_back(t + shift);
  for (auto [k, i] : b.s) r.s[k] = i + shift;
  if (b.ukmax >= 0) r.ukmax = b.ukmax + shift;
  return r;
}

Walk reverse(const Walk& w) {
  Walk r;
  r.pos.assign(w.pos.rbegin(), w.pos.rend());
  r.lines.assign(w.lines.rbegin(), w.lines.rend());
  r.start_line = w.end_line();
  int L = static_cast<int>(w.len());
  for (auto it = w.tau.rbegin(); it != w.tau.rend(); ++it) r.tau.push_back(L - *it);
  for (auto [k, i] : w.s) r.s[k] = L - i;
  if (w.ukmax >= 0) r.ukmax = L - w.ukmax;
  return r;
}

std::vector<std::pair<std::uint64_t, int>> crossings(const Graph& g, const Walk& w) {
  std::vector<std::uint64_t> ids;
  ids.reserve(w.len());
  for (std::size_t i = 0; i < w.len(); ++i) ids.push_back(g.edge_id(w.edge(i)));
  std::sort(ids.begin(), ids.end());
  std::vector<std::pair<std::uint64_t, int>> out;
  for (auto id : ids) {
    if (!out.empty() && out.back().first == id) ++out.back().second;
    else out.emplace_back(id, 1);
  }
  return out;
}

bool same_walk(const Walk& a, const Walk& b) { return a.pos == b.pos && a.lines == b.lines; }

std::string walk_key(const Walk& w) {
  std::string k = std::to_string(w.first());
  for (std::size_t i = 0; i < w.len(); ++i)
    k += (w.pos[i + 1] > w.pos[i] ? "+" : "-") + std::to_string(w.lines[i].lam) + "." + std::to_string(w.lines[i].theta);
  return k;
}

}  // namespace selfsim

#include "selfsim/graph.hpp"

#include <istream>
#include <ostream>
#include <sstream>

namespace selfsim {

const char* kind_name(Kind k) {
  switch (k) {
    case Kind::Plain: return "PLAIN";
    case Kind::Gluing: return "GLUING";
    case Kind::Socket: return "SOCKET";
  }
  return "?";
}

Graph::Graph(Params p) : P_(std::move(p)) {
  T_ = P_.theta_count();
  std::uint64_t L = std::uint64_t{P_.lam_count()} * T_;
  if (L > 0xffffffffu) throw ConfigError("label space too large");
  L_ = static_cast<std::uint32_t>(L);
  ord_.resize(static_cast<std::size_t>(position_count()));
  for (std::int64_t m = P_.lo(); m <= P_.hi(); ++m) ord_[m - P_.lo()] = P_.ord(m);
  spade_.resize(P_.lam_count());
  lamW_.resize(P_.lam_count());
  lamWd_.resize(P_.lam_count());
  for (std::uint32_t a = 0; a < P_.lam_count(); ++a) {
    spade_[a] = static_cast<std::uint8_t>(P_.spade_prefix(a));
    lamW_[a] = P_.lam_weight(a);
    lamWd_[a] = lamW_[a].get_d();
  }
  thetaW_.resize(T_);
  thetaWd_.resize(T_);
  for (std::uint32_t b = 0; b < T_; ++b) {
    thetaW_[b] = P_.theta_weight(b);
    thetaWd_[b] = thetaW_[b].get_d();
  }
}

Kind Graph::kind_of(int t, std::uint32_t lam) const {
  if (t == 0 || t > P_.depth()) return Kind::Plain;
  if (t == 1 || spade_[lam] >= t - 1) return Kind::Socket;
  return Kind::Gluing;
}

Line Graph::rep_line(std::int64_t m, Line l) const {
  int t = order_at(m);
  switch (kind_of(t, l.lam)) {
    case Kind::Plain: return l;
    case Kind::Gluing: return Line{P_.lam_set(l.lam, t, kEnd), l.theta};
    case Kind::Socket: return Line{P_.lam_set(l.lam, t, kEnd), P_.theta_set(l.theta, t, kEnd)};
  }
  return l;
}

Vertex Graph::normalize(std::int64_t m, Line l) const {
  if (!in_window(m)) throw WindowError("position " + std::to_string(m) + " outside the window");
  if (l.lam >= P_.lam_count() || l.theta >= P_.theta_count())
    throw std::out_of_range("label support beyond truncation depth");
  Vertex v;
  v.m = m;
  v.order = order_at(m);
  v.kind = kind_of(v.order, l.lam);
  v.rep = rep_line(m, l);
  return v;
}

Vertex Graph::normalize(std::int64_t m, const std::vector<int>& lam, const std::vector<int>& theta) const {
  return normalize(m, Line{P_.lam_from(lam), P_.theta_from(theta)});
}

Vertex Graph::vertex(const Point& p) const {
  if (p.off != 0) throw std::invalid_argument("point is interior to an edge");
  return normalize(p.m, p.line);
}

std::vector<Line> Graph::fiber(const Vertex& v) const {
  std::vector<Line> out;
  int t = v.order;
  switch (v.kind) {
    case Kind::Plain: out.push_back(v.rep); break;
    case Kind::Gluing:
      for (int a = 0; a < P_.n1(); ++a) out.push_back(Line{P_.lam_set(v.rep.lam, t, a), v.rep.theta});
      break;
    case Kind::Socket:
      for (int a = 0; a < P_.n1(); ++a)
        for (int b = 0; b < P_.n2(); ++b)
          out.push_back(Line{P_.lam_set(v.rep.lam, t, a), P_.theta_set(v.rep.theta, t, b)});
      break;
  }
  return out;
}

std::vector<Edge> Graph::neighbors(const Vertex& v) const {
  std::vector<Edge> out;
  for (const Line& l : fiber(v)) {
    if (in_window(v.m - 1)) out.push_back(Edge{v.m - 1, l});
    if (in_window(v.m + 1)) out.push_back(Edge{v.m, l});
  }
  return out;
}

bool Graph::incident(const Vertex& v, const Edge& e) const {
  if (e.left == v.m) return normalize(v.m, e.line) == v;
  if (e.left + 1 == v.m) return normalize(v.m, e.line) == v;
  return false;
}

Vertex Graph::vertex_at(std::uint64_t id) const {
  std::int64_t m = P_.lo() + static_cast<std::int64_t>(id / L_);
  return normalize(m, line_at(static_cast<std::uint32_t>(id % L_)));
}

Edge Graph::edge_at(std::uint64_t id) const {
  return Edge{P_.lo() + static_cast<std::int64_t>(id / L_), line_at(static_cast<std::uint32_t>(id % L_))};
}

void Graph::fiber_indices(std::uint64_t id, std::vector<std::uint32_t>& out) const {
  out.clear();
  for (const Line& l : fiber(vertex_at(id))) out.push_back(line_index(l));
}

namespace {

void write_line(std::ostream& os, Line l) { os << ' ' << l.lam << ' ' << l.theta; }

}  // namespace

void Graph::dump(std::ostream& os) const {
  os << "# selfsim-graph v1\n";
  std::string pj = P_.to_json_text();
  std::string flat;
  for (char c : pj)
    if (c != '\n') flat += c;
  os << "P " << flat << "\n";
  for (std::int64_t m = P_.lo(); m <= P_.hi(); ++m) {
    for (std::uint32_t li = 0; li < L_; ++li) {
      Line l = line_at(li);
      if (rep_line(m, l) != l) continue;
      Vertex v = normalize(m, l);
      os << "V " << m;
      write_line(os, l);
      os << ' ' << kind_name(v.kind) << ' ' << v.order << "\n";
    }
  }
  for (std::int64_t m = P_.lo(); m < P_.hi(); ++m) {
    for (std::uint32_t li = 0; li < L_; ++li) {
      Line l = line_at(li);
      Vertex a = normalize(m, l), b = normalize(m + 1, l);
      os << "E " << m;
      write_line(os, l);
      os << ' ' << a.rep.lam << ' ' << a.rep.theta << ' ' << b.rep.lam << ' ' << b.rep.theta << "\n";
    }
  }
}

Graph Graph::load(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != "# selfsim-graph v1") throw ConfigError("not a graph dump");
  if (!std::getline(is, line) || line.rfind("P ", 0) != 0) throw ConfigError("graph dump lacks params record");
  Graph g(Params::from_json_text(line.substr(2)));
  // Every record must agree with the regenerated truncation.
  std::uint64_t nv = 0, ne = 0;
  while (std::getline(is, line)) {
    std::istringstream ss(line);
    std::string tag;
    ss >> tag;
    if (tag == "V") {
      std::int64_t m;
      Line l;
      std::string kind;
      int ord;
      ss >> m >> l.lam >> l.theta >> kind >> ord;
      Vertex v = g.normalize(m, l);
      if (!(v.rep == l) || kind != kind_name(v.kind) || ord != v.order)
        throw ConfigError("graph dump vertex record mismatch: " + line);
      ++nv;
    } else if (tag == "E") {
      std::int64_t m;
      Line l, a, b;
      ss >> m >> l.lam >> l.theta >> a.lam >> a.theta >> b.lam >> b.theta;
      if (!(g.normalize(m, l).rep == a) || !(g.normalize(m + 1, l).rep == b))
        throw ConfigError("graph dump edge record mismatch: " + line);
      ++ne;
    } else if (!tag.empty()) {
      throw ConfigError("unknown graph dump record: " + tag);
    }
  }
  if (ne != g.edge_count()) throw ConfigError("graph dump edge count mismatch");
  (void)nv;
  return g;
}

}  // namespace selfsim

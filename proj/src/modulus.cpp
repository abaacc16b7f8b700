#include "selfsim/modulus.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <queue>
#include <set>

#include "selfsim/geodesy.hpp"

namespace selfsim {

void FlowGraph::add_edge(int u, int v, double m, double len) {
  if (u < 0 || v < 0 || u >= n || v >= n) throw std::invalid_argument("edge endpoint out of range");
  if (!(m > 0) || !(len > 0)) throw std::invalid_argument("edge mass and length must be positive");
  a.push_back(u);
  b.push_back(v);
  mass.push_back(m);
  length.push_back(len);
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Incidence lists in compressed form.
struct Adjacency {
  std::vector<int> start, other, edge;

  explicit Adjacency(const FlowGraph& G) : start(G.n + 1, 0) {
    const int m = static_cast<int>(G.edge_count());
    for (int e = 0; e < m; ++e) {
      ++start[G.a[e] + 1];
      ++start[G.b[e] + 1];
    }
    for (int v = 0; v < G.n; ++v) start[v + 1] += start[v];
    other.resize(2 * m);
    edge.resize(2 * m);
    std::vector<int> fill(start.begin(), start.end() - 1);
    for (int e = 0; e < m; ++e) {
      other[fill[G.a[e]]] = G.b[e];
      edge[fill[G.a[e]]++] = e;
      other[fill[G.b[e]]] = G.a[e];
      edge[fill[G.b[e]]++] = e;
    }
  }
};

void check_ends(const FlowGraph& G, int s, int t) {
  if (s < 0 || t < 0 || s >= G.n || t >= G.n) throw std::invalid_argument("terminal out of range");
  if (s == t) throw std::invalid_argument("terminals must differ");
}

struct Route {
  double length = kInf;
  std::vector<int> edges;
};

Route shortest(const FlowGraph& G, const Adjacency& adj, const std::vector<double>& g, int s, int t) {
  std::vector<double> dist(G.n, kInf);
  std::vector<int> pred(G.n, -1);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> q;
  dist[s] = 0;
  q.push({0.0, s});
  while (!q.empty()) {
    auto [d, v] = q.top();
    q.pop();
    if (d > dist[v]) continue;
    if (v == t) break;
    for (int i = adj.start[v]; i < adj.start[v + 1]; ++i) {
      int e = adj.edge[i], o = adj.other[i];
      double nd = d + g[e] * G.length[e];
      if (nd < dist[o]) {
        dist[o] = nd;
        pred[o] = e;
        q.push({nd, o});
      }
    }
  }
  Route r;
  r.length = dist[t];
  if (r.length == kInf) return r;
  for (int v = t; v != s;) {
    int e = pred[v];
    r.edges.push_back(e);
    v = G.a[e] == v ? G.b[e] : G.a[e];
  }
  std::reverse(r.edges.begin(), r.edges.end());
  return r;
}

// Dense Cholesky solve of (A + shift I) x = rhs; A symmetric positive
// semidefinite, stored row-major.
std::vector<double> cholesky_solve(std::vector<double> A, int n, std::vector<double> rhs) {
  double scale = 0;
  for (int i = 0; i < n; ++i) scale = std::max(scale, A[i * n + i]);
  const double shift = 1e-14 * scale + 1e-300;
  for (int i = 0; i < n; ++i) A[i * n + i] += shift;
  for (int j = 0; j < n; ++j) {
    double d = A[j * n + j];
    for (int k = 0; k < j; ++k) d -= A[j * n + k] * A[j * n + k];
    d = std::sqrt(std::max(d, shift));
    A[j * n + j] = d;
    for (int i = j + 1; i < n; ++i) {
      double v = A[i * n + j];
      for (int k = 0; k < j; ++k) v -= A[i * n + k] * A[j * n + k];
      A[i * n + j] = v / d;
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < i; ++k) rhs[i] -= A[i * n + k] * rhs[k];
    rhs[i] /= A[i * n + i];
  }
  for (int i = n - 1; i >= 0; --i) {
    for (int k = i + 1; k < n; ++k) rhs[i] -= A[k * n + i] * rhs[k];
    rhs[i] /= A[i * n + i];
  }
  return rhs;
}

// Convex problem min sum mass g^P subject to g-length >= 1 on a finite set
// of paths, solved through its concave dual over path multipliers
// D(lam) = sum lam - (P - 1) sum mass g^P with g = (eta / (P mass))^(1/(P-1)),
// eta = sum over paths of lam times the path's coefficients.
class PathDual {
 public:
  PathDual(const FlowGraph& G, double P) : G_(G), P_(P), eta_(G.edge_count(), 0), g_(G.edge_count(), 0) {}

  void add(const std::vector<int>& edges) {
    std::map<int, double> coef;
    for (int e : edges) coef[e] += G_.length[e];
    rows_.emplace_back(coef.begin(), coef.end());
    lam_.push_back(0);
  }

  double dual() const { return dual_; }
  const std::vector<double>& g() const { return g_; }

  // Projected Newton with an Armijo search. When the projection spoils a
  // step, multipliers it pins at zero join the bound set and the step is
  // recomputed.
  void solve() {
    const int S = static_cast<int>(rows_.size());
    if (S == 1 && lam_[0] == 0) lam_[0] = 1;
    evaluate(lam_);
    std::vector<double> grad(S);
    for (int it = 0; it < 500; ++it) {
      gradient(grad);
      double pg = 0, lmax = 0;
      for (int i = 0; i < S; ++i) {
        pg = std::max(pg, lam_[i] > 0 ? std::abs(grad[i]) : std::max(grad[i], 0.0));
        lmax = std::max(lmax, lam_[i]);
      }
      if (pg < 1e-15) break;
      std::vector<int> F;
      for (int i = 0; i < S; ++i)
        if (lam_[i] > 1e-15 * lmax || grad[i] > 0) F.push_back(i);
      std::vector<double> curv(G_.edge_count(), 0);
      for (std::size_t e = 0; e < curv.size(); ++e)
        if (eta_[e] > 0) curv[e] = g_[e] / ((P_ - 1) * eta_[e]);
      const double D0 = dual_;
      bool moved = false;
      while (!F.empty() && !moved) {
        std::vector<double> d = newton_step(F, curv, grad);
        moved = search(F, d, grad, pg, lmax, D0);
        if (moved) break;
        std::vector<int> keep;
        for (std::size_t x = 0; x < F.size(); ++x)
          if (lam_[F[x]] + d[x] > 0) keep.push_back(F[x]);
        if (keep.size() == F.size()) break;
        F.swap(keep);
      }
      if (!moved) {
        evaluate(lam_);
        break;
      }
    }
  }

 private:
  std::vector<double> newton_step(const std::vector<int>& F, const std::vector<double>& curv,
                                  const std::vector<double>& grad) const {
    const int nf = static_cast<int>(F.size());
    std::vector<double> H(static_cast<std::size_t>(nf) * nf, 0), rhs(nf);
    std::vector<double> dense(G_.edge_count(), 0);
    for (int x = 0; x < nf; ++x) {
      rhs[x] = grad[F[x]];
      for (auto [e, c] : rows_[F[x]]) dense[e] = c * curv[e];
      for (int y = 0; y <= x; ++y) {
        double h = 0;
        for (auto [e, c] : rows_[F[y]]) h += dense[e] * c;
        H[x * nf + y] = H[y * nf + x] = h;
      }
      for (auto [e, c] : rows_[F[x]]) dense[e] = 0;
    }
    return cholesky_solve(H, nf, rhs);
  }

  // Backtracking along the projected Newton path; true when a step is taken.
  bool search(const std::vector<int>& F, const std::vector<double>& d, const std::vector<double>& grad, double pg,
              double lmax, double D0) {
    const int nf = static_cast<int>(F.size());
    double dmax = 0;
    for (double v : d) dmax = std::max(dmax, std::abs(v));
    double alpha = std::min(1.0, 10 * (lmax + 1) / std::max(dmax, 1e-300));
    std::vector<double> trial(lam_);
    double scale = 0;
    for (double l : lam_) scale += l;
    for (int ls = 0; ls < 80; ++ls, alpha *= 0.5) {
      double pred = 0;
      for (int x = 0; x < nf; ++x) {
        int i = F[x];
        trial[i] = std::max(0.0, lam_[i] + alpha * d[x]);
        pred += grad[i] * (trial[i] - lam_[i]);
      }
      evaluate(trial);
      // Below rounding level of the dual, judge by the projected gradient.
      bool flat = pred <= 1e-14 * (scale + std::abs(D0));
      if (dual_ >= D0 + 1e-4 * pred || (flat && projected_gradient(trial) < pg)) {
        lam_ = trial;
        return true;
      }
    }
    evaluate(lam_);
    return false;
  }

  void evaluate(const std::vector<double>& lam) {
    std::fill(eta_.begin(), eta_.end(), 0.0);
    double sum = 0;
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      sum += lam[i];
      if (lam[i] > 0)
        for (auto [e, c] : rows_[i]) eta_[e] += lam[i] * c;
    }
    double obj = 0;
    for (std::size_t e = 0; e < eta_.size(); ++e) {
      g_[e] = eta_[e] > 0 ? std::pow(eta_[e] / (P_ * G_.mass[e]), 1 / (P_ - 1)) : 0;
      obj += G_.mass[e] * std::pow(g_[e], P_);
    }
    dual_ = sum - (P_ - 1) * obj;
  }

  // Uses the densities of the last evaluation.
  double projected_gradient(const std::vector<double>& lam) const {
    double pg = 0;
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      double len = 0;
      for (auto [e, c] : rows_[i]) len += c * g_[e];
      pg = std::max(pg, lam[i] > 0 ? std::abs(1 - len) : std::max(1 - len, 0.0));
    }
    return pg;
  }

  void gradient(std::vector<double>& grad) const {
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      double len = 0;
      for (auto [e, c] : rows_[i]) len += c * g_[e];
      grad[i] = 1 - len;
    }
  }

  const FlowGraph& G_;
  double P_;
  std::vector<std::vector<std::pair<int, double>>> rows_;
  std::vector<double> lam_, eta_, g_;
  double dual_ = 0;
};

// Preconditioned conjugate gradients for the weighted Laplacian restricted
// to the free vertices (the others held at zero).
int pcg(const Adjacency& adj, const std::vector<double>& w, const std::vector<char>& free,
        const std::vector<double>& rhs, std::vector<double>& x, double rtol, int maxit) {
  const int n = static_cast<int>(free.size());
  std::vector<double> diag(n, 0), r(n, 0), z(n, 0), p(n, 0), q(n, 0);
  for (int v = 0; v < n; ++v)
    if (free[v])
      for (int i = adj.start[v]; i < adj.start[v + 1]; ++i) diag[v] += w[adj.edge[i]];
  auto apply = [&](const std::vector<double>& in, std::vector<double>& out) {
    for (int v = 0; v < n; ++v) {
      if (!free[v]) {
        out[v] = 0;
        continue;
      }
      double s = 0;
      for (int i = adj.start[v]; i < adj.start[v + 1]; ++i) {
        int o = adj.other[i];
        s += w[adj.edge[i]] * (in[v] - (free[o] ? in[o] : 0));
      }
      out[v] = s;
    }
  };
  apply(x, q);
  double bnorm = 0;
  for (int v = 0; v < n; ++v) {
    r[v] = free[v] ? rhs[v] - q[v] : 0;
    bnorm += rhs[v] * rhs[v];
  }
  bnorm = std::sqrt(bnorm);
  if (bnorm == 0) bnorm = 1;
  double rz = 0;
  for (int v = 0; v < n; ++v) {
    z[v] = diag[v] > 0 ? r[v] / diag[v] : 0;
    p[v] = z[v];
    rz += r[v] * z[v];
  }
  int it = 0;
  for (; it < maxit; ++it) {
    double rn = 0;
    for (int v = 0; v < n; ++v) rn += r[v] * r[v];
    if (std::sqrt(rn) <= rtol * bnorm) break;
    apply(p, q);
    double pq = 0;
    for (int v = 0; v < n; ++v) pq += p[v] * q[v];
    if (pq <= 0) break;
    double alpha = rz / pq;
    double rz2 = 0;
    for (int v = 0; v < n; ++v) {
      x[v] += alpha * p[v];
      r[v] -= alpha * q[v];
      z[v] = diag[v] > 0 ? r[v] / diag[v] : 0;
      rz2 += r[v] * z[v];
    }
    double beta = rz2 / rz;
    rz = rz2;
    for (int v = 0; v < n; ++v) p[v] = z[v] + beta * p[v];
  }
  return it;
}

}  // namespace

double shortest_g_length(const FlowGraph& G, const std::vector<double>& g, int s, int t) {
  check_ends(G, s, t);
  if (g.size() != G.edge_count()) throw std::invalid_argument("density size does not match the edges");
  Adjacency adj(G);
  return shortest(G, adj, g, s, t).length;
}

ModulusCertificate p_modulus(const FlowGraph& G, int s, int t, double P, const ModulusOptions& opt) {
  check_ends(G, s, t);
  if (!(P > 1)) throw std::invalid_argument("modulus exponent must exceed 1");
  Adjacency adj(G);
  std::vector<double> g(G.edge_count());
  for (std::size_t e = 0; e < g.size(); ++e) g[e] = 1 / G.length[e];
  Route r = shortest(G, adj, g, s, t);
  if (r.length == kInf) throw ModulusError("no path joins the terminals");
  PathDual dual(G, P);
  std::set<std::vector<int>> seen;
  ModulusCertificate cert;
  for (;;) {
    std::vector<int> key(r.edges);
    std::sort(key.begin(), key.end());
    if (!seen.insert(key).second) break;
    dual.add(r.edges);
    cert.paths.push_back(r.edges);
    dual.solve();
    ++cert.iterations;
    r = shortest(G, adj, dual.g(), s, t);
    if (r.length >= 1 - opt.tol) {
      cert.converged = true;
      break;
    }
    if (static_cast<int>(cert.paths.size()) >= opt.max_paths) break;
  }
  const std::vector<double>& gr = dual.g();
  cert.shortest = r.length;
  cert.g.resize(gr.size());
  double value = 0;
  for (std::size_t e = 0; e < gr.size(); ++e) {
    cert.g[e] = r.length > 0 ? gr[e] / r.length : kInf;
    value += G.mass[e] * std::pow(cert.g[e], P);
  }
  cert.value = value;
  cert.lower = dual.dual();
  return cert;
}

CapacityResult p_capacity(const FlowGraph& G, int s, int t, double P, const CapacityOptions& opt) {
  check_ends(G, s, t);
  if (!(P > 1)) throw std::invalid_argument("capacity exponent must exceed 1");
  Adjacency adj(G);
  const int n = G.n;
  const std::size_t m = G.edge_count();
  CapacityResult res;
  res.potential.assign(n, 0);
  res.potential[t] = 1;
  res.g.assign(m, 0);
  // Only the component of s matters; elsewhere the potential stays 0.
  std::vector<char> comp(n, 0);
  std::vector<int> stack{s};
  comp[s] = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int i = adj.start[v]; i < adj.start[v + 1]; ++i)
      if (!comp[adj.other[i]]) {
        comp[adj.other[i]] = 1;
        stack.push_back(adj.other[i]);
      }
  }
  if (!comp[t]) {
    res.converged = true;
    return res;
  }
  std::vector<char> free(n, 0);
  for (int v = 0; v < n; ++v) free[v] = comp[v] && v != s && v != t;
  std::vector<double> c(m);
  for (std::size_t e = 0; e < m; ++e) c[e] = G.mass[e] / std::pow(G.length[e], P);
  std::vector<double>& u = res.potential;

  // Harmonic start: exact when P = 2.
  {
    std::vector<double> rhs(n, 0), x(n, 0);
    for (int i = adj.start[t]; i < adj.start[t + 1]; ++i)
      if (free[adj.other[i]]) rhs[adj.other[i]] += c[adj.edge[i]];
    double rtol = P == 2 ? std::min(opt.tol, 1e-10) : 1e-6;
    res.cg += pcg(adj, c, free, rhs, x, rtol, opt.max_cg);
    for (int v = 0; v < n; ++v)
      if (free[v]) u[v] = std::clamp(x[v], 0.0, 1.0);
  }
  auto energy = [&](const std::vector<double>& pot) {
    double f = 0;
    for (std::size_t e = 0; e < m; ++e)
      if (comp[G.a[e]]) f += c[e] * std::pow(std::abs(pot[G.a[e]] - pot[G.b[e]]), P);
    return f;
  };
  double F = energy(u);
  if (P == 2) {
    res.converged = true;
  } else {
    std::vector<double> w(m), grad(n), rhs(n), step(n), trial(n);
    double rtol = 1e-2;
    for (int it = 0; it < opt.max_newton; ++it) {
      ++res.newton;
      std::fill(grad.begin(), grad.end(), 0.0);
      double scale = 0;
      for (std::size_t e = 0; e < m; ++e) scale = std::max(scale, std::abs(u[G.a[e]] - u[G.b[e]]));
      const double floor = 1e-8 * std::max(scale, 1e-300);
      for (std::size_t e = 0; e < m; ++e) {
        int a = G.a[e], b = G.b[e];
        if (!comp[a]) {
          w[e] = 0;
          continue;
        }
        double du = u[a] - u[b], ad = std::abs(du);
        double gr = P * c[e] * std::pow(ad, P - 1) * (du > 0 ? 1 : du < 0 ? -1 : 0);
        grad[a] += gr;
        grad[b] -= gr;
        w[e] = P * (P - 1) * c[e] * std::pow(std::max(ad, floor), P - 2);
      }
      for (int v = 0; v < n; ++v) rhs[v] = free[v] ? -grad[v] : 0;
      std::fill(step.begin(), step.end(), 0.0);
      res.cg += pcg(adj, w, free, rhs, step, rtol, opt.max_cg);
      double slope = 0;
      for (int v = 0; v < n; ++v) slope += grad[v] * step[v];
      if (slope >= 0) break;
      // Newton decrement relative to the energy.
      double decrement = -slope / std::max(F, 1e-300);
      double alpha = 1, Fn = F;
      bool moved = false;
      for (int ls = 0; ls < 60; ++ls, alpha *= 0.5) {
        for (int v = 0; v < n; ++v) trial[v] = free[v] ? u[v] + alpha * step[v] : u[v];
        Fn = energy(trial);
        if (Fn <= F + 1e-4 * alpha * slope) {
          moved = true;
          break;
        }
      }
      if (!moved) {
        res.converged = decrement < 1e3 * opt.tol;
        break;
      }
      u.swap(trial);
      double drop = (F - Fn) / std::max(F, 1e-300);
      F = Fn;
      if (decrement < opt.tol && drop < opt.tol) {
        res.converged = true;
        break;
      }
      rtol = std::clamp(std::sqrt(decrement), 1e-12, 1e-2);
    }
  }
  res.value = 0;
  for (std::size_t e = 0; e < m; ++e) {
    res.g[e] = std::abs(u[G.a[e]] - u[G.b[e]]) / G.length[e];
    res.value += G.mass[e] * std::pow(res.g[e], P);
  }
  return res;
}

int SupportGraph::at(std::uint64_t vid) const {
  auto it = std::lower_bound(vertex_ids.begin(), vertex_ids.end(), vid);
  if (it == vertex_ids.end() || *it != vid) return -1;
  return static_cast<int>(it - vertex_ids.begin());
}

SupportGraph support_graph(const Graph& g, const DensityMeasure& nu) {
  SupportGraph S;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> ends;
  ends.reserve(nu.edges.size());
  for (auto eid : nu.edges) {
    Edge e = g.edge_at(eid);
    ends.push_back({g.vertex_id(g.left(e)), g.vertex_id(g.right(e))});
    S.vertex_ids.push_back(ends.back().first);
    S.vertex_ids.push_back(ends.back().second);
  }
  std::sort(S.vertex_ids.begin(), S.vertex_ids.end());
  S.vertex_ids.erase(std::unique(S.vertex_ids.begin(), S.vertex_ids.end()), S.vertex_ids.end());
  S.graph.n = static_cast<int>(S.vertex_ids.size());
  S.edge_ids = nu.edges;
  for (std::size_t i = 0; i < ends.size(); ++i) S.graph.add_edge(S.at(ends[i].first), S.at(ends[i].second), nu.mass(i));
  return S;
}

PiCondition pi_condition_1(const Graph& g, const Vertex& p, const Vertex& q, double P, const Rational& C,
                           const CapacityOptions& opt) {
  PiCondition pc;
  const std::uint64_t pid = g.vertex_id(p), qid = g.vertex_id(q);
  pc.distance = vertex_distance(g, p, q);
  pc.nu = pair_measure(g, pid, qid, C);
  pc.support = support_graph(g, pc.nu);
  int s = pc.support.at(pid), t = pc.support.at(qid);
  if (s < 0 || t < 0) throw ModulusError("an endpoint lies outside the support of the measure");
  pc.capacity = p_capacity(pc.support.graph, s, t, P, opt);
  pc.modulus = pc.capacity.value;
  pc.value = std::pow(static_cast<double>(pc.distance), P - 1) * pc.modulus;
  return pc;
}

HolderChain holder_chain(const Graph& g, const CurveDistribution& c, const DensityMeasure& nu,
                         const std::vector<double>& gdens, double P) {
  if (gdens.size() != nu.edges.size()) throw std::invalid_argument("density size does not match the measure");
  HolderChain h;
  EdgeMeasure E = c.expectation(g);
  for (auto& [eid, m] : E.mass) {
    auto i = nu.find(eid);
    if (i >= 0) h.integral += gdens[i] * m.get_d();
  }
  double s = 0;
  for (std::size_t i = 0; i < gdens.size(); ++i) s += nu.mass(i) * std::pow(gdens[i], P);
  h.norm_g = std::pow(s, 1 / P);
  h.norm_curve = lq_norm(c, g, nu, P / (P - 1));
  return h;
}

Threshold neck_range_threshold(const Params& P) {
  const double ratio = Rational(P.S1() / P.w_spade()).get_d();
  bool constant = true;
  int lo = P.m(1), hi = P.m(1);
  for (int k = 1; k <= P.depth() + 1; ++k) {
    constant = constant && P.m(k) == P.m(1);
    lo = std::min(lo, P.m(k));
    hi = std::max(hi, P.m(k));
  }
  Threshold t;
  if (constant) {
    t.lower = t.upper = 1 + std::log(ratio) / std::log(static_cast<double>(P.m(1)));
  } else {
    // The scale factors may take any value in [2, N] beyond the depth.
    t.lower = 1 + std::log(ratio) / std::log(static_cast<double>(P.N()));
    t.upper = 1 + std::log(ratio) / std::log(2.0);
  }
  return t;
}

double neck_sum(const Params& P, int k, double Q) {
  if (k < 1) throw std::invalid_argument("neck sum needs k >= 1");
  const double ratio = Rational(P.S1() / P.w_spade()).get_d();
  double s = 0;
  for (int l = 1; l <= k; ++l)
    s += std::pow(ratio, l * (Q - 1)) * static_cast<double>(P.sigma(k - l)) / static_cast<double>(P.sigma(k));
  return s;
}

int bad_box_offset(int m, double C0) {
  if (m < 2 || !(C0 >= 1)) throw std::invalid_argument("bad box needs m >= 2 and C0 >= 1");
  int M = 1;
  for (double s = m; s <= 3 * C0; s *= m) ++M;
  return M;
}

namespace {

std::int64_t ipow(std::int64_t b, int e) {
  std::int64_t r = 1;
  while (e-- > 0) r *= b;
  return r;
}

}  // namespace

Params bad_box_params(int k, const BadBoxConfig& cfg, int M) {
  if (k < 2) throw std::invalid_argument("bad box needs k >= 2");
  if (cfg.n1 < 3 || cfg.n2 < 2) throw std::invalid_argument("bad box needs |sigma1| >= 3 and |sigma2| >= 2");
  const int K = k + M;
  const std::int64_t sk = ipow(cfg.m, k), sK = ipow(cfg.m, K);
  const std::int64_t center = sK * (cfg.m + 1);
  const std::int64_t half =
      std::max(static_cast<std::int64_t>(std::ceil((1 + 2 * cfg.C0) * static_cast<double>(sk))) + 2, sK);
  std::vector<std::string> s1, s2{"END"};
  std::vector<Rational> w1;
  if (cfg.merge) {
    s1 = {"STAR", "SPADE"};
    w1 = {Rational(cfg.n1 - 1), cfg.w_spade};
  } else {
    s1 = {"END", "SPADE"};
    w1 = {Rational(1), cfg.w_spade};
    for (int i = 2; i < cfg.n1; ++i) {
      s1.push_back("a" + std::to_string(i - 1));
      w1.push_back(Rational(1));
    }
  }
  for (int i = 1; i < cfg.n2; ++i) s2.push_back("b" + std::to_string(i));
  return Params(cfg.m, {cfg.m}, s1, s2, w1, std::vector<Rational>(cfg.n2, Rational(1)), K, center - half,
                center + half);
}

BadBoxResult bad_box_experiment(int k, double P, const BadBoxConfig& cfg) {
  BadBoxResult r;
  r.k = k;
  r.M = cfg.M > 0 ? cfg.M : bad_box_offset(cfg.m, cfg.C0);
  const int K = k + r.M;
  r.depth = K;
  Graph g(bad_box_params(k, cfg, r.M));
  const Params& par = g.params();
  const std::int64_t sk = par.sigma(k);
  r.center = par.sigma(K) * (cfg.m + 1);
  std::uint32_t lam = 0;
  for (int j = 1; j <= K; ++j) lam = par.lam_set(lam, j, kSpade);
  Vertex p0 = g.normalize(r.center - sk, Line{lam, 0});
  Vertex p1 = g.normalize(r.center + sk, Line{lam, par.theta_set(0, K, 1)});
  PiCondition pc = pi_condition_1(g, p0, p1, P, Rational(cfg.C0), cfg.capacity);
  r.distance = pc.distance;
  r.modulus = pc.modulus;
  r.lhs = pc.value;
  r.vertices = pc.support.graph.n;
  r.edges = pc.support.graph.edge_count();

  const double ws = cfg.w_spade.get_d(), S1 = ws + (cfg.n1 - 1);
  const double scale = std::pow(static_cast<double>(k - 1), -P);
  for (int i = 1; i <= k - 1; ++i) {
    double term = std::pow(static_cast<double>(sk) / static_cast<double>(par.sigma(i)), P - 1) *
                  std::pow(ws / S1, k - 1 - i);
    r.rhs_bound += scale * term;
    if (i == k - 1) r.dominant = scale * term;
  }

  // Explicit density: on the stretch between the last points of order i
  // and i - 1 before the center, on lines carrying SPADE in entries i..K-1
  // (entry K may have changed at a gluing point over the center).
  auto step = [&](int i) { return i == 0 ? std::int64_t{0} : par.sigma(i); };
  auto band = [&](std::int64_t dist, std::uint32_t l) {
    int i = 1;
    while (i < k && step(i) < dist) ++i;
    if (step(i) < dist || i > k - 1) return 0;
    for (int j = i; j < K; ++j)
      if (par.lam_at(l, j) != kSpade) return 0;
    return i;
  };
  const std::size_t ne = pc.nu.edges.size();
  std::vector<double> two(ne, 0), one(ne, 0);
  double obj = 0;
  for (std::size_t e = 0; e < ne; ++e) {
    Edge E = g.edge_at(pc.nu.edges[e]);
    std::int64_t left = r.center - E.left, right = E.left + 1 - r.center;
    int i = left >= 1 ? band(left, E.line.lam) : band(right, E.line.lam);
    if (i == 0) continue;
    double v = 1 / (static_cast<double>(k - 1) * static_cast<double>(step(i) - step(i - 1)));
    // A path may reach the center from either side, and crosses both
    // sides' stretches on its way to the far point.
    two[e] = v / 2;
    if (left >= 1) one[e] = v;
    obj += pc.nu.mass(e) * std::pow(two[e], P);
  }
  const FlowGraph& G = pc.support.graph;
  int s = pc.support.at(g.vertex_id(p0)), t = pc.support.at(g.vertex_id(p1));
  r.explicit_value = std::pow(static_cast<double>(r.distance), P - 1) * obj;
  r.explicit_shortest = shortest_g_length(G, two, s, t);
  r.one_sided_shortest = shortest_g_length(G, one, s, t);
  return r;
}

}  // namespace selfsim

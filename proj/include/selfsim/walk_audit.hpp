#pragma once

#include <string>

#include "selfsim/walks.hpp"

namespace selfsim {

// lam <= other in the partial order on first-alphabet labels: equal, or
// all differing entries lie in an interval on which lam is the gluing
// symbol.
bool lam_le(const Params& P, std::uint32_t lam, std::uint32_t other);

// Result of a structural audit: empty error when every conclusion holds;
// C is the smallest constant making the interval bounds hold.
struct Audit {
  std::string error;
  double C = 0;
  bool ok() const { return error.empty(); }
};

Audit audit_gluing_walk(const Graph& g, const Walk& w, std::int64_t m, Line l, int k, int dir);
Audit audit_descend(const Graph& g, const Walk& w, std::int64_t m, Line l, int k, int dir);
Audit audit_ascend(const Graph& g, const Walk& w, std::int64_t m0, int k0, int k, Line target, int dir);

struct GoodWalkAudit {
  std::string error;
  // len W / d(x, y).
  double gw1 = 0;
  // max over i > 0 of i / d(w_i, x).
  double gw3 = 0;
  // len W / max(|pi(x) - pi(y)|, sigma_kmax), min and max over the walk
  // and its halves.
  double len_lo = 1e300, len_hi = 0;
  // len W_k / sigma_{k+1} and d(w_s(k), w_s(k+1)) / sigma_{k+1}.
  double seg_lo = 1e300, seg_hi = 0;
  bool ok() const { return error.empty(); }
};

GoodWalkAudit audit_good_walk(const Graph& g, const GoodWalk& gw, const Vertex& x, const Vertex& y);

// For pairs with lg d(x, y) < max N(x, y): every other k in N(x, y)
// satisfies sigma_k <= d(x, y). Empty string on success.
std::string check_exc_estimate(const Graph& g, const Vertex& x, const Vertex& y);

}  // namespace selfsim

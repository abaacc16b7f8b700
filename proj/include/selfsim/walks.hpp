#pragma once

#include <cstdint>
#include <vector>

#include "selfsim/graph.hpp"
#include "selfsim/walk.hpp"

namespace selfsim {

// Smallest n >= min_len such that m + dir * n has order 0.
std::int64_t steps_to_plain(const Params& P, std::int64_t m, int dir, std::int64_t min_len);
// First t = m + dir * n (n >= 0) with ord(t) == k exactly.
std::int64_t next_of_order(const Params& P, std::int64_t m, int dir, int k);

// Label lam with entries strictly between i and k set to the gluing
// symbol (entries <= i and >= k kept). rolled(lam, 0, k) is the gluing
// prefix of length k - 1 followed by lam's entries from k on.
std::uint32_t rolled(const Params& P, std::uint32_t lam, int i, int k);

// Monotone walk along line l from position m to a gluing or socket point
// of order exactly k: first to an order-0 position at distance in
// [sigma_k, 2 sigma_k], then to the next position of order k.
Walk gluing_walk(const Graph& g, std::int64_t m, Line l, int k, int dir);

// Label-nonincreasing monotone walk from (m, l) to a socket point of order
// k. tau[i - 1] holds the index of the vertex where entry i is switched to
// the gluing symbol.
Walk descend_to_socket(const Graph& g, std::int64_t m, Line l, int k, int dir);

// Label-nondecreasing monotone walk from the socket point of order k0 at
// position m0 to an order-0 vertex with labels target. Requires k <= k0;
// target must agree with the socket beyond k (except at k0) and its theta
// must agree except at k0. For k < k0 entry k of target.lam must be the
// gluing symbol.
Walk ascend_from_socket(const Graph& g, std::int64_t m0, int k0, int k, Line target, int dir);

// Label difference set N(x, y) for vertices x, y: the label choices in the
// two fibers minimizing the number of differing entries (lexicographic
// tie-break on line index).
struct LabelDiff {
  Line lx, ly;
  std::vector<int> N;
  int kmax = 0;
};
LabelDiff label_diff(const Graph& g, const Vertex& x, const Vertex& y);

// A change of the theta label through a socket inside a good walk: the
// descend segment [start, socket] and the ascend segment [socket, end],
// with the walk indices of their markers (entry i switched at in_tau[i - 1]
// and restored at out_tau[i - 1]).
struct Neck {
  int k = 0;
  int start = 0, socket = 0, end = 0;
  std::vector<int> in_tau, out_tau;
};

// A good walk from x to y with its structural markers.
struct GoodWalk {
  Walk walk;
  LabelDiff diff;
  int dir = 1;
  // Two-sided regime (lg d(x, y) < kmax): the walk is halves[0] * halves[1]
  // through the vertex at index walk.ukmax.
  bool split = false;
  std::vector<GoodWalk> halves;
  // End of the label-changing sweep; the rest is a straight line segment.
  std::size_t sweep_end = 0;
  int distance = 0;
  std::vector<Neck> necks;
};

// Single-sided construction (requires lg d(x, y) >= kmax for the
// guarantees; it is always well defined). s markers are set for every
// k in 1..kmax.
GoodWalk good_walk_direct(const Graph& g, const Vertex& x, const Vertex& y);
// Full construction dispatching on the regime.
GoodWalk good_walk(const Graph& g, const Vertex& x, const Vertex& y);

// Lift of w to the line start through a vertex at w's first position.
// At a vertex of order t > freeze where the source changes entry t, the
// lifted edge copies it (theta only at socket points, otherwise the lift
// is undefined and throws); other entries keep the previous lifted
// values. With follow_markers, at each marker vertex w_{tau} of order
// i > freeze entry i of lambda is also set to the gluing symbol.
Walk lift(const Graph& g, const Walk& w, Line start, int freeze = 0, bool follow_markers = false);

}  // namespace selfsim

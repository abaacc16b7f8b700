#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "selfsim/params.hpp"

namespace selfsim {

struct Bracket {
  double lo = 1e300, hi = 0;
  void add(double v);
  bool empty() const { return hi < lo; }
};

// Density spread and support width of one construction at one scale.
struct DensityRow {
  std::string construction;
  int k = 0, cut = 0;
  double spread = 0;
  // Largest distance from the support to the spine, over sigma_k.
  double support = 0;
};

// Measured values of the constants the estimates leave unspecified.
struct Calibration {
  int depth = 0;
  // Ball/box comparison: the smallest power of two that works on a
  // calibration grid, then failures of it on a separate grid.
  std::int64_t ball_box_C = 0;
  int ball_box_checks = 0, ball_box_failures = 0;
  // Walk lemmas: largest interval constant, failed conclusions.
  double walk_C = 0;
  int walk_checks = 0, walk_failures = 0;
  // Good walks.
  int gw_direct = 0, gw_split = 0, gw_failures = 0, gw_skipped = 0;
  double gw1 = 0, gw3 = 0;
  Bracket length, segment;
  // Random curves.
  std::vector<DensityRow> densities;
  double support_C = 0;
  int cut = 0;
};

struct CalibrationOptions {
  int samples = 60;
  std::uint64_t seed = 1;
  // Ball/box, walk lemmas and good walks; random-curve densities.
  bool geometry = true, curves = true;
};

Calibration calibrate(const Params& P, const CalibrationOptions& opt = {});
std::string calibration_json(const Calibration& c);

// Largest ratio between the spreads of one construction at consecutive
// scales k, k + 1 with lo <= k < hi, over the constructions present at both.
double density_step_ratio(const Calibration& c, int lo, int hi);

}  // namespace selfsim

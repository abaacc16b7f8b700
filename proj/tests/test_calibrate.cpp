#include <gtest/gtest.h>

#include <cmath>

#include "selfsim/calibrate.hpp"

using namespace selfsim;

namespace {

CalibrationOptions small_run() {
  CalibrationOptions o;
  o.samples = 12;
  return o;
}

}  // namespace

TEST(Calibrate, FiniteConstantsWithoutFailures) {
  Calibration c = calibrate(Params::uniform(2, 3, 2, 3, -96, 96), small_run());
  EXPECT_GT(c.ball_box_C, 0);
  EXPECT_EQ(c.ball_box_failures, 0);
  EXPECT_GT(c.walk_checks, 0);
  EXPECT_EQ(c.walk_failures, 0);
  EXPECT_TRUE(std::isfinite(c.walk_C));
  EXPECT_GT(c.gw_direct + c.gw_split, 0);
  EXPECT_EQ(c.gw_failures, 0);
  EXPECT_FALSE(c.length.empty());
  EXPECT_GE(c.length.lo, 1 - 1e-12);
  ASSERT_FALSE(c.densities.empty());
  for (const DensityRow& r : c.densities) {
    EXPECT_TRUE(std::isfinite(r.spread));
    EXPECT_GE(r.support, 0);
  }
}

TEST(Calibrate, DeterministicReport) {
  Params P = Params::uniform(2, 3, 2, 3, -64, 64);
  EXPECT_EQ(calibration_json(calibrate(P, small_run())), calibration_json(calibrate(P, small_run())));
}

TEST(Calibrate, StepRatio) {
  Calibration c;
  c.densities = {{"a", 1, 0, 2.0, 0}, {"a", 2, 0, 3.0, 0}, {"a", 3, 0, 9.0, 0}, {"b", 2, 0, 1.0, 0}};
  EXPECT_DOUBLE_EQ(density_step_ratio(c, 1, 2), 1.5);
  EXPECT_DOUBLE_EQ(density_step_ratio(c, 1, 3), 3.0);
  EXPECT_DOUBLE_EQ(density_step_ratio(c, 3, 4), 1.0);
}

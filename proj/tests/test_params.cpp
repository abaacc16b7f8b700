#include <gtest/gtest.h>

#include "selfsim/params.hpp"

using namespace selfsim;

namespace {

Params twos(int depth = 3) { return Params::uniform(2, 3, 2, depth, -64, 64); }

}  // namespace

TEST(Params, OrderOfZeroIsZero) { EXPECT_EQ(twos().ord(0), 0); }

TEST(Params, OrderByDivisibility) {
  Params P = twos();
  EXPECT_EQ(P.ord(12), 2);
  EXPECT_EQ(P.ord(5), 0);
  EXPECT_EQ(P.ord(-8), 3);
  for (std::int64_t m = 1; m < 300; ++m)
    for (int k = 1; k <= 6; ++k) EXPECT_EQ(P.ord(m) >= k, m % P.sigma(k) == 0);
}

TEST(Params, MixedScales) {
  Params P(3, {2, 3, 2}, {"END", "SPADE", "a"}, {"END", "b"}, {1, 1, 1}, {1, 1}, 3, -24, 24);
  EXPECT_EQ(P.sigma(1), 2);
  EXPECT_EQ(P.sigma(2), 6);
  EXPECT_EQ(P.sigma(3), 12);
  EXPECT_EQ(P.sigma(4), 24);
  EXPECT_EQ(P.ord(6), 2);
  EXPECT_EQ(P.ord(18), 2);
  EXPECT_EQ(P.ord(12), 3);
}

TEST(Params, DiscLog) {
  Params P = twos();
  EXPECT_EQ(P.disc_log(1.0), 0);
  EXPECT_EQ(P.disc_log(8.0), 3);
  EXPECT_EQ(P.disc_log(7.0), 2);
  EXPECT_EQ(P.disc_log(Rational(15, 2)), 2);
  for (int k = 1; k < 10; ++k) EXPECT_EQ(P.disc_log(Rational(P.sigma(k))), k);
  int prev = 0;
  for (int p = 0; p < 200; ++p) {
    int v = P.disc_log(Rational(p, 3));
    EXPECT_GE(v, prev);
    prev = v;
  }
}

TEST(Params, LabelWeight) {
  Params P(2, {2}, {"END", "SPADE", "a"}, {"END", "b"}, {1, Rational(1, 2), 1}, {1, 1}, 3, -64, 64);
  EXPECT_EQ(P.lam_weight(0), 1);
  EXPECT_EQ(P.lam_weight(P.lam_from({kSpade, kSpade})), Rational(1, 4));
  Params U = twos();
  for (std::uint32_t a = 0; a < U.lam_count(); ++a) EXPECT_EQ(U.lam_weight(a), 1);
}

TEST(Params, WeightChangeIsMultiplicative) {
  Params P(2, {2}, {"END", "SPADE", "a"}, {"END", "b"}, {1, Rational(1, 2), 3}, {1, 5}, 3, -64, 64);
  for (std::uint32_t a = 0; a < P.lam_count(); ++a)
    for (int j = 1; j <= 3; ++j)
      for (int s = 0; s < 3; ++s) {
        std::uint32_t b = P.lam_set(a, j, s);
        EXPECT_EQ(P.lam_weight(b), P.lam_weight(a) * P.w1(s) / P.w1(P.lam_at(a, j)));
      }
}

TEST(Params, CanonicalEntries) {
  Params P = twos();
  std::uint32_t a = P.lam_from({kSpade, kEnd, kEnd});
  EXPECT_EQ(P.lam_entries(a), std::vector<int>{kSpade});
  EXPECT_EQ(P.lam_from({kSpade}), a);
  EXPECT_EQ(P.spade_prefix(P.lam_from({kSpade, kSpade, 2})), 2);
}

TEST(Params, SumsOfWeights) {
  Params P(2, {2}, {"END", "SPADE", "a"}, {"END", "b"}, {1, Rational(1, 2), 2}, {1, 3}, 3, -64, 64);
  EXPECT_EQ(P.S1(), Rational(7, 2));
  EXPECT_EQ(P.S2(), 4);
}

TEST(Params, RejectsNonPositiveWeight) {
  std::string cfg = R"({"N":2,"m":2,"sigma1":["END","SPADE","a"],"sigma2":["END","b"],
    "weights":{"a":"0"},"depth":2,"window":[-16,16]})";
  try {
    Params::from_json_text(cfg);
    FAIL() << "accepted a zero weight";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("positive"), std::string::npos);
  }
}

TEST(Params, RejectsBadStructure) {
  EXPECT_THROW(Params::from_json_text(R"({"N":2,"m":3,"sigma1":3,"sigma2":2,"depth":2,"window":[-16,16]})"), ConfigError);
  EXPECT_THROW(Params::from_json_text(R"({"N":2,"m":2,"sigma1":2,"sigma2":2,"depth":2,"window":[-16,16]})"), ConfigError);
  EXPECT_THROW(Params::from_json_text(R"({"N":2,"m":2,"sigma1":3,"sigma2":2,"depth":3,"window":[-4,4]})"), ConfigError);
  EXPECT_THROW(Params::from_json_text(R"({"N":2,"m":2,"sigma1":["END","a","b"],"sigma2":2,"depth":2,"window":[-16,16]})"), ConfigError);
}

TEST(Params, JsonRoundTrip) {
  std::string cfg = R"({"N":3,"m":[2,3],"sigma1":["END","SPADE","x","y"],"sigma2":["END","b"],
    "weights":{"SPADE":"1/2","x":"2"},"depth":2,"window":[-20,20]})";
  Params P = Params::from_json_text(cfg);
  Params Q = Params::from_json_text(P.to_json_text());
  EXPECT_EQ(Q.to_json_text(), P.to_json_text());
  EXPECT_EQ(P.w_spade(), Rational(1, 2));
  EXPECT_EQ(P.n1(), 4);
  EXPECT_EQ(P.m(5), 3);
}

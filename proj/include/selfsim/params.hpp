#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace selfsim {

using Rational = mpq_class;

// Symbol index 0 is the end symbol in both alphabets; index 1 of the first
// alphabet is the gluing symbol.
inline constexpr int kEnd = 0;
inline constexpr int kSpade = 1;
inline constexpr int kMaxDepth = 12;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Labels are stored as mixed-radix integers: entry j (1-based) of a first
// alphabet label is digit j-1 in base |sigma1|. Entries beyond the depth
// are the end symbol, so the encoding is canonical by construction.
struct Line {
  std::uint32_t lam = 0;
  std::uint32_t theta = 0;
  friend bool operator==(const Line&, const Line&) = default;
  friend auto operator<=>(const Line&, const Line&) = default;
};

class Params {
 public:
  // mseq lists m_1, m_2, ...; the last value repeats beyond the list.
  Params(int N, std::vector<int> mseq, std::vector<std::string> sigma1,
         std::vector<std::string> sigma2, std::vector<Rational> w1,
         std::vector<Rational> w2, int depth, std::int64_t lo,
         std::int64_t hi);

  // Unit weights, constant m, alphabets of the given sizes.
  static Params uniform(int m, int n1, int n2, int depth, std::int64_t lo,
                        std::int64_t hi);
  static Params from_json_text(const std::string& text);
  static Params from_file(const std::string& path);
  std::string to_json_text() const;

  int N() const { return N_; }
  int m(int k) const;
  // sigma(0) = 1.
  std::int64_t sigma(int k) const;
  int ord(std::int64_t pos) const;
  int disc_log(const Rational& p) const;
  int disc_log(double p) const;

  int depth() const { return K_; }
  std::int64_t lo() const { return lo_; }
  std::int64_t hi() const { return hi_; }
  int n1() const { return static_cast<int>(sigma1_.size()); }
  int n2() const { return static_cast<int>(sigma2_.size()); }
  const std::vector<std::string>& sigma1() const { return sigma1_; }
  const std::vector<std::string>& sigma2() const { return sigma2_; }
  const Rational& w1(int s) const { return w1_[s]; }
  const Rational& w2(int s) const { return w2_[s]; }
  const Rational& S1() const { return S1_; }
  const Rational& S2() const { return S2_; }
  const Rational& w_spade() const { return w1_[kSpade]; }

  std::uint32_t lam_count() const { return pow1_[K_]; }
  std::uint32_t theta_count() const { return pow2_[K_]; }
  std::uint32_t pow1(int j) const { return pow1_[j]; }
  std::uint32_t pow2(int j) const { return pow2_[j]; }

  int lam_at(std::uint32_t lam, int j) const;
  int theta_at(std::uint32_t theta, int j) const;
  std::uint32_t lam_set(std::uint32_t lam, int j, int s) const;
  std::uint32_t theta_set(std::uint32_t theta, int j, int s) const;
  std::uint32_t lam_from(const std::vector<int>& entries) const;
  std::uint32_t theta_from(const std::vector<int>& entries) const;
  // Canonical entry list: trailing end symbols stripped.
  std::vector<int> lam_entries(std::uint32_t lam) const;
  std::vector<int> theta_entries(std::uint32_t theta) const;
  // Number of leading gluing symbols.
  int spade_prefix(std::uint32_t lam) const;

  Rational lam_weight(std::uint32_t lam) const;
  Rational theta_weight(std::uint32_t theta) const;
  Rational line_weight(Line l) const { return lam_weight(l.lam) * theta_weight(l.theta); }
  // Product of w over entries j > k of both labels.
  Rational tail_weight(Line l, int k) const;
  // Product of w over entries j <= k of both labels.
  Rational head_weight(Line l, int k) const;

  std::string label_string(Line l) const;

 private:
  int N_;
  std::vector<int> mseq_;
  std::vector<std::int64_t> sigma_;
  std::vector<std::string> sigma1_, sigma2_;
  std::vector<Rational> w1_, w2_;
  Rational S1_, S2_;
  int K_;
  std::int64_t lo_, hi_;
  std::vector<std::uint32_t> pow1_, pow2_;
};

Rational parse_rational(const std::string& s);
std::string rational_string(const Rational& q);

}  // namespace selfsim

#include "selfsim/params.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace selfsim {

using json = nlohmann::json;

Rational parse_rational(const std::string& s) {
  Rational q;
  if (q.set_str(s, 10) != 0) throw ConfigError("not a rational number: '" + s + "'");
  q.canonicalize();
  return q;
}

std::string rational_string(const Rational& q) { return q.get_str(); }

Params::Params(int N, std::vector<int> mseq, std::vector<std::string> sigma1,
               std::vector<std::string> sigma2, std::vector<Rational> w1,
               std::vector<Rational> w2, int depth, std::int64_t lo,
               std::int64_t hi)
    : N_(N), mseq_(std::move(mseq)), sigma1_(std::move(sigma1)),
      sigma2_(std::move(sigma2)), w1_(std::move(w1)), w2_(std::move(w2)),
      K_(depth), lo_(lo), hi_(hi) {
  if (N_ < 2) throw ConfigError("N must be at least 2");
  if (mseq_.empty()) throw ConfigError("the scale sequence m is empty");
  for (int v : mseq_)
    if (v < 2 || v > N_) throw ConfigError("each m_k must lie in [2, N]");
  // Two-symbol first alphabets are allowed internally (symmetry quotients).
  if (sigma1_.size() < 2 || sigma2_.size() < 2)
    throw ConfigError("alphabets too small: need |sigma1| >= 3 and |sigma2| >= 2");
  if (w1_.size() != sigma1_.size() || w2_.size() != sigma2_.size())
    throw ConfigError("weight table size does not match the alphabets");
  for (std::size_t s = 0; s < w1_.size(); ++s)
    if (w1_[s] <= 0) throw ConfigError("weight of symbol '" + sigma1_[s] + "' must be positive (w > 0)");
  for (std::size_t s = 0; s < w2_.size(); ++s)
    if (w2_[s] <= 0) throw ConfigError("weight of symbol '" + sigma2_[s] + "' must be positive (w > 0)");
  // A two-symbol first alphabet is a quotient whose first symbol stands for
  // END together with the other non-gluing symbols, so it may be heavier.
  if ((sigma1_.size() > 2 && w1_[kEnd] != 1) || w2_[kEnd] != 1)
    throw ConfigError("the end symbol must have weight 1");
  if (K_ < 0 || K_ > kMaxDepth) throw ConfigError("depth out of range");
  S1_ = 0;
  S2_ = 0;
  for (auto& w : w1_) S1_ += w;
  for (auto& w : w2_) S2_ += w;
  sigma_.push_back(1);
  for (int k = 1;; ++k) {
    std::int64_t next = sigma_.back() * m(k);
    if (next > (std::int64_t{1} << 61)) break;
    sigma_.push_back(next);
  }
  if (K_ + 1 >= static_cast<int>(sigma_.size())) throw ConfigError("depth too large for 64-bit scales");
  pow1_.assign(K_ + 1, 1);
  pow2_.assign(K_ + 1, 1);
  for (int j = 1; j <= K_; ++j) {
    std::uint64_t a = std::uint64_t{pow1_[j - 1]} * sigma1_.size();
    std::uint64_t b = std::uint64_t{pow2_[j - 1]} * sigma2_.size();
    if (a > 0xffffffffu || b > 0xffffffffu) throw ConfigError("label space too large for the depth");
    pow1_[j] = static_cast<std::uint32_t>(a);
    pow2_[j] = static_cast<std::uint32_t>(b);
  }
  if (hi_ <= lo_) throw ConfigError("empty window");
  if (hi_ - lo_ < 2 * sigma(K_)) throw ConfigError("window must span at least 2*sigma_K");
}

Params Params::uniform(int m, int n1, int n2, int depth, std::int64_t lo,
                       std::int64_t hi) {
  std::vector<std::string> s1{"END", "SPADE"}, s2{"END"};
  for (int i = 2; i < n1; ++i) s1.push_back("a" + std::to_string(i - 1));
  for (int i = 1; i < n2; ++i) s2.push_back("b" + std::to_string(i));
  return Params(m, {m}, s1, s2, std::vector<Rational>(n1, Rational(1)),
                std::vector<Rational>(n2, Rational(1)), depth, lo, hi);
}

namespace {

Rational json_rational(const json& v) {
  if (v.is_string()) return parse_rational(v.get<std::string>());
  if (v.is_number_integer()) return Rational(v.get<long>());
  throw ConfigError("weights must be integers or rational strings like \"1/2\"");
}

std::vector<std::string> json_alphabet(const json& v, bool first) {
  std::vector<std::string> out;
  if (v.is_number_integer()) {
    int n = v.get<int>();
    out.push_back("END");
    if (first) out.push_back("SPADE");
    while (static_cast<int>(out.size()) < n)
      out.push_back((first ? "a" : "b") + std::to_string(out.size() - (first ? 1 : 0)));
    if (static_cast<int>(out.size()) != n) throw ConfigError("alphabet size too small");
    return out;
  }
  out = v.get<std::vector<std::string>>();
  // Reorder so that END (and SPADE for the first alphabet) take the reserved slots.
  std::vector<std::string> rest;
  bool hasEnd = false, hasSpade = false;
  for (auto& s : out) {
    if (s == "END") hasEnd = true;
    else if (first && s == "SPADE") hasSpade = true;
    else if (!first && s == "SPADE") throw ConfigError("SPADE must not belong to sigma2");
    else rest.push_back(s);
  }
  if (!hasEnd) throw ConfigError("END must belong to both alphabets");
  if (first && !hasSpade) throw ConfigError("SPADE must belong to sigma1");
  std::vector<std::string> res{"END"};
  if (first) res.push_back("SPADE");
  res.insert(res.end(), rest.begin(), rest.end());
  return res;
}

}  // namespace

Params Params::from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  try {
    int N = j.at("N").get<int>();
    std::vector<int> mseq;
    if (j.at("m").is_number_integer()) mseq = {j.at("m").get<int>()};
    else mseq = j.at("m").get<std::vector<int>>();
    auto s1 = json_alphabet(j.at("sigma1"), true);
    auto s2 = json_alphabet(j.at("sigma2"), false);
    if (s1.size() < 3) throw ConfigError("|sigma1| must be at least 3");
    std::vector<Rational> w1(s1.size(), Rational(1)), w2(s2.size(), Rational(1));
    if (j.contains("weights")) {
      for (auto& [name, val] : j.at("weights").items()) {
        Rational w = json_rational(val);
        bool found = false;
        for (std::size_t s = 0; s < s1.size(); ++s)
          if (s1[s] == name) { w1[s] = w; found = true; }
        for (std::size_t s = 0; s < s2.size(); ++s)
          if (s2[s] == name) { w2[s] = w; found = true; }
        if (!found) throw ConfigError("weight given for unknown symbol '" + name + "'");
      }
    }
    int depth = j.at("depth").get<int>();
    auto win = j.at("window").get<std::vector<std::int64_t>>();
    if (win.size() != 2) throw ConfigError("window must be [lo, hi]");
    return Params(N, mseq, s1, s2, w1, w2, depth, win[0], win[1]);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config error: ") + e.what());
  }
}

Params Params::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str());
}

std::string Params::to_json_text() const {
  json j;
  j["N"] = N_;
  j["m"] = mseq_;
  j["sigma1"] = sigma1_;
  j["sigma2"] = sigma2_;
  json w = json::object();
  for (std::size_t s = 1; s < sigma1_.size(); ++s) w[sigma1_[s]] = w1_[s].get_str();
  for (std::size_t s = 1; s < sigma2_.size(); ++s) w[sigma2_[s]] = w2_[s].get_str();
  j["weights"] = w;
  j["depth"] = K_;
  j["window"] = {lo_, hi_};
  return j.dump(2);
}

int Params::m(int k) const {
  if (k < 1) throw std::out_of_range("m_k needs k >= 1");
  return k <= static_cast<int>(mseq_.size()) ? mseq_[k - 1] : mseq_.back();
}

std::int64_t Params::sigma(int k) const {
  if (k < 0 || k >= static_cast<int>(sigma_.size())) throw std::out_of_range("scale index out of range");
  return sigma_[k];
}

int Params::ord(std::int64_t pos) const {
  if (pos == 0) return 0;
  std::int64_t a = pos < 0 ? -pos : pos;
  int k = 0;
  while (k + 1 < static_cast<int>(sigma_.size()) && a % sigma_[k + 1] == 0) ++k;
  return k;
}

int Params::disc_log(const Rational& p) const {
  if (p < 0) throw std::invalid_argument("disc_log needs p >= 0");
  int k = 0;
  while (k + 1 < static_cast<int>(sigma_.size()) && Rational(sigma_[k + 1]) <= p) ++k;
  return k;
}

int Params::disc_log(double p) const {
  if (p < 0) throw std::invalid_argument("disc_log needs p >= 0");
  int k = 0;
  while (k + 1 < static_cast<int>(sigma_.size()) && static_cast<double>(sigma_[k + 1]) <= p) ++k;
  return k;
}

int Params::lam_at(std::uint32_t lam, int j) const {
  if (j < 1 || j > K_) return kEnd;
  return static_cast<int>((lam / pow1_[j - 1]) % sigma1_.size());
}

int Params::theta_at(std::uint32_t theta, int j) const {
  if (j < 1 || j > K_) return kEnd;
  return static_cast<int>((theta / pow2_[j - 1]) % sigma2_.size());
}

std::uint32_t Params::lam_set(std::uint32_t lam, int j, int s) const {
  if (j < 1 || j > K_) {
    if (s != kEnd) throw std::out_of_range("label entry beyond truncation depth");
    return lam;
  }
  int cur = lam_at(lam, j);
  return lam + (static_cast<std::int64_t>(s) - cur) * static_cast<std::int64_t>(pow1_[j - 1]);
}

std::uint32_t Params::theta_set(std::uint32_t theta, int j, int s) const {
  if (j < 1 || j > K_) {
    if (s != kEnd) throw std::out_of_range("label entry beyond truncation depth");
    return theta;
  }
  int cur = theta_at(theta, j);
  return theta + (static_cast<std::int64_t>(s) - cur) * static_cast<std::int64_t>(pow2_[j - 1]);
}

std::uint32_t Params::lam_from(const std::vector<int>& e) const {
  std::uint32_t v = 0;
  for (std::size_t j = 0; j < e.size(); ++j) {
    if (e[j] < 0 || e[j] >= n1()) throw std::out_of_range("symbol out of sigma1");
    if (e[j] != kEnd && static_cast<int>(j) >= K_) throw std::out_of_range("label support beyond depth");
    if (static_cast<int>(j) < K_) v += e[j] * pow1_[j];
  }
  return v;
}

std::uint32_t Params::theta_from(const std::vector<int>& e) const {
  std::uint32_t v = 0;
  for (std::size_t j = 0; j < e.size(); ++j) {
    if (e[j] < 0 || e[j] >= n2()) throw std::out_of_range("symbol out of sigma2");
    if (e[j] != kEnd && static_cast<int>(j) >= K_) throw std::out_of_range("label support beyond depth");
    if (static_cast<int>(j) < K_) v += e[j] * pow2_[j];
  }
  return v;
}

std::vector<int> Params::lam_entries(std::uint32_t lam) const {
  std::vector<int> e;
  for (int j = 1; j <= K_; ++j) e.push_back(lam_at(lam, j));
  while (!e.empty() && e.back() == kEnd) e.pop_back();
  return e;
}

std::vector<int> Params::theta_entries(std::uint32_t theta) const {
  std::vector<int> e;
  for (int j = 1; j <= K_; ++j) e.push_back(theta_at(theta, j));
  while (!e.empty() && e.back() == kEnd) e.pop_back();
  return e;
}

int Params::spade_prefix(std::uint32_t lam) const {
  int p = 0;
  while (p < K_ && lam_at(lam, p + 1) == kSpade) ++p;
  return p;
}

Rational Params::lam_weight(std::uint32_t lam) const {
  Rational w = 1;
  for (int j = 1; j <= K_; ++j) w *= w1_[lam_at(lam, j)];
  return w;
}

Rational Params::theta_weight(std::uint32_t theta) const {
  Rational w = 1;
  for (int j = 1; j <= K_; ++j) w *= w2_[theta_at(theta, j)];
  return w;
}

Rational Params::tail_weight(Line l, int k) const {
  Rational w = 1;
  for (int j = k + 1; j <= K_; ++j) w *= w1_[lam_at(l.lam, j)] * w2_[theta_at(l.theta, j)];
  return w;
}

Rational Params::head_weight(Line l, int k) const {
  Rational w = 1;
  for (int j = 1; j <= std::min(k, K_); ++j) w *= w1_[lam_at(l.lam, j)] * w2_[theta_at(l.theta, j)];
  return w;
}

std::string Params::label_string(Line l) const {
  std::string s = "(";
  auto le = lam_entries(l.lam);
  for (std::size_t i = 0; i < le.size(); ++i) s += (i ? "," : "") + sigma1_[le[i]];
  s += ";";
  auto te = theta_entries(l.theta);
  for (std::size_t i = 0; i < te.size(); ++i) s += (i ? "," : "") + sigma2_[te[i]];
  return s + ")";
}

}  // namespace selfsim

#include "polyball/fockbasis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace polyball {

void TruncationSpec::validate() const {
  if (k < 1) throw std::invalid_argument("spec: k must be >= 1");
  const auto ks = static_cast<std::size_t>(k);
  if (n.size() != ks || m.size() != ks || L.size() != ks)
    throw std::invalid_argument("spec: n, m, L must each have k entries");
  if (d < 1) throw std::invalid_argument("spec: d must be >= 1");
  for (std::size_t i = 0; i < ks; ++i) {
    if (n[i] < 1 || n[i] > 9) throw std::invalid_argument("spec: n_i must lie in 1..9");
    if (m[i] < 1) throw std::invalid_argument("spec: m_i must be >= 1");
    if (L[i] < 1) throw std::invalid_argument("spec: L_i must be >= 1");
  }
  if (static_cast<double>(model_dim()) > 2e5) throw std::invalid_argument("spec: model dimension exceeds 2e5");
}

std::size_t TruncationSpec::factor_dim(int i) const {
  const auto idx = static_cast<std::size_t>(i);
  std::size_t total = 0, power = 1;
  for (int j = 0; j <= L[idx]; ++j) {
    total += power;
    power *= static_cast<std::size_t>(n[idx]);
  }
  return total;
}

std::size_t TruncationSpec::fock_dim() const {
  std::size_t total = 1;
  for (int i = 0; i < k; ++i) total *= factor_dim(i);
  return total;
}

Rational::Rational(std::uint64_t p, std::uint64_t q) : num(p), den(q) {
  if (q == 0) throw std::domain_error("Rational: zero denominator");
  const std::uint64_t g = std::gcd(p, q);
  if (g > 1) {
    num /= g;
    den /= g;
  }
}

namespace {

Rational mul_reduced(std::uint64_t a, std::uint64_t b, std::uint64_t c, std::uint64_t d) {
  // (a/b) * (c/d) with cross-cancellation so intermediate products stay small
  const std::uint64_t g1 = std::gcd(a, d);
  const std::uint64_t g2 = std::gcd(c, b);
  const unsigned __int128 p = static_cast<unsigned __int128>(a / g1) * (c / g2);
  const unsigned __int128 q = static_cast<unsigned __int128>(b / g2) * (d / g1);
  if (p > UINT64_MAX || q > UINT64_MAX) throw std::overflow_error("Rational: overflow");
  return Rational(static_cast<std::uint64_t>(p), static_cast<std::uint64_t>(q));
}

}  // namespace

Rational operator*(const Rational& a, const Rational& b) { return mul_reduced(a.num, a.den, b.num, b.den); }
Rational operator/(const Rational& a, const Rational& b) { return mul_reduced(a.num, a.den, b.den, b.num); }

double Radical::value() const {
  return std::sqrt(static_cast<double>(radicand.num)) / std::sqrt(static_cast<double>(radicand.den));
}

std::uint64_t weight_b(int m, std::size_t len) {
  if (m < 1) throw std::invalid_argument("weight_b: m must be >= 1");
  // binomial(len + m - 1, m - 1) by the multiplicative formula, exact at each step
  const auto r = static_cast<std::uint64_t>(m - 1);
  unsigned __int128 acc = 1;
  for (std::uint64_t t = 1; t <= r; ++t) {
    acc = acc * (len + t) / t;
    if (acc > UINT64_MAX) throw std::overflow_error("weight_b: overflow");
  }
  return static_cast<std::uint64_t>(acc);
}

std::uint64_t weight_b(const TruncationSpec& spec, const MultiWord& w) {
  std::uint64_t out = 1;
  for (int i = 0; i < spec.k; ++i) out *= weight_b(spec.m[static_cast<std::size_t>(i)], w[static_cast<std::size_t>(i)].length());
  return out;
}

Radical tau_from_lengths(const TruncationSpec& spec, const std::vector<std::size_t>& len_a,
                         const std::vector<std::size_t>& len_b) {
  Rational r;
  for (int i = 0; i < spec.k; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    const int mi = spec.m[idx];
    const std::size_t lo = std::min(len_a[idx], len_b[idx]);
    const std::size_t hi = std::max(len_a[idx], len_b[idx]);
    r = r * Rational(weight_b(mi, lo), weight_b(mi, hi));
  }
  return Radical{r};
}

namespace {

void require_comparable(const TruncationSpec& spec, const MultiWord& omega, const MultiWord& gamma, const char* who) {
  if (omega.size() != static_cast<std::size_t>(spec.k) || gamma.size() != static_cast<std::size_t>(spec.k))
    throw std::invalid_argument(std::string(who) + ": factor count mismatch");
  if (!comparable(omega, gamma))
    throw std::domain_error(std::string(who) + ": (" + to_string(omega) + ", " + to_string(gamma) + ") not comparable");
}

}  // namespace

Radical tau(const TruncationSpec& spec, const MultiWord& omega, const MultiWord& gamma) {
  require_comparable(spec, omega, gamma, "tau");
  return tau_from_lengths(spec, degree(omega), degree(gamma));
}

Rational mu(const TruncationSpec& spec, const MultiWord& omega, const MultiWord& gamma) {
  require_comparable(spec, omega, gamma, "mu");
  Rational r;
  for (int i = 0; i < spec.k; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    const std::size_t hi = std::max(omega[idx].length(), gamma[idx].length());
    r = r * Rational(1, weight_b(spec.m[idx], hi));
  }
  return r;
}

GradedBasis::GradedBasis(TruncationSpec spec) : spec_(std::move(spec)) {
  spec_.validate();
  const auto k = static_cast<std::size_t>(spec_.k);
  std::vector<std::size_t> dims(k);
  for (std::size_t i = 0; i < k; ++i) {
    words_.push_back(enumerate_words(spec_.n[i], spec_.L[i]));
    dims[i] = words_[i].size();
    std::vector<std::size_t> offs(static_cast<std::size_t>(spec_.L[i]) + 2, 0);
    std::size_t power = 1;
    for (int len = 0; len <= spec_.L[i]; ++len) {
      offs[static_cast<std::size_t>(len) + 1] = offs[static_cast<std::size_t>(len)] + power;
      power *= static_cast<std::size_t>(spec_.n[i]);
    }
    length_offset_.push_back(std::move(offs));
  }
  size_ = spec_.fock_dim();

  // cartesian order: factor 1 slowest
  std::vector<std::size_t> order(size_);
  std::iota(order.begin(), order.end(), std::size_t{0});
  auto cart_degree = [&](std::size_t c) {
    std::vector<int> deg(k);
    for (std::size_t i = k; i-- > 0;) {
      deg[i] = static_cast<int>(words_[i][c % dims[i]].length());
      c /= dims[i];
    }
    return deg;
  };
  std::vector<std::vector<int>> cdeg(size_);
  for (std::size_t c = 0; c < size_; ++c) cdeg[c] = cart_degree(c);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return cdeg[a] < cdeg[b]; });

  factor_idx_.resize(size_ * k);
  degree_.resize(size_ * k);
  from_cartesian_.resize(size_);
  for (std::size_t b = 0; b < size_; ++b) {
    std::size_t c = order[b];
    from_cartesian_[c] = b;
    for (std::size_t i = k; i-- > 0;) {
      const std::size_t w = c % dims[i];
      c /= dims[i];
      factor_idx_[b * k + i] = static_cast<std::uint32_t>(w);
      degree_[b * k + i] = static_cast<int>(words_[i][w].length());
    }
    const auto& deg = cdeg[order[b]];
    auto it = blocks_.find(deg);
    if (it == blocks_.end()) {
      blocks_.emplace(deg, std::make_pair(b, b + 1));
    } else {
      it->second.second = b + 1;
    }
  }
}

std::size_t GradedBasis::factor_word_index(int i, const Word& w) const {
  const auto idx = static_cast<std::size_t>(i);
  if (w.alphabet() != spec_.n[idx]) throw std::invalid_argument("factor_word_index: alphabet mismatch");
  if (w.length() > static_cast<std::size_t>(spec_.L[idx]))
    throw std::out_of_range("factor_word_index: word " + w.str() + " longer than truncation");
  std::size_t v = 0;
  for (int j : w.letters()) v = v * static_cast<std::size_t>(spec_.n[idx]) + static_cast<std::size_t>(j - 1);
  return length_offset_[idx][w.length()] + v;
}

std::vector<int> GradedBasis::degree(std::size_t b) const {
  const auto k = static_cast<std::size_t>(spec_.k);
  return std::vector<int>(degree_.begin() + static_cast<std::ptrdiff_t>(b * k),
                          degree_.begin() + static_cast<std::ptrdiff_t>((b + 1) * k));
}

MultiWord GradedBasis::entry(std::size_t b) const {
  MultiWord out;
  for (int i = 0; i < spec_.k; ++i) out.push_back(words_[static_cast<std::size_t>(i)][word_index(b, i)]);
  return out;
}

std::size_t GradedBasis::index_of_factor_indices(const std::vector<std::uint32_t>& idx) const {
  std::size_t c = 0;
  for (std::size_t i = 0; i < static_cast<std::size_t>(spec_.k); ++i) c = c * words_[i].size() + idx[i];
  return from_cartesian_[c];
}

std::size_t GradedBasis::index_of(const MultiWord& w) const {
  if (w.size() != static_cast<std::size_t>(spec_.k)) throw std::invalid_argument("index_of: factor count mismatch");
  std::vector<std::uint32_t> idx;
  for (int i = 0; i < spec_.k; ++i)
    idx.push_back(static_cast<std::uint32_t>(factor_word_index(i, w[static_cast<std::size_t>(i)])));
  return index_of_factor_indices(idx);
}

std::pair<std::size_t, std::size_t> GradedBasis::degree_range(const std::vector<int>& p) const {
  auto it = blocks_.find(p);
  if (it == blocks_.end()) return {0, 0};
  return it->second;
}

std::vector<std::size_t> GradedBasis::degree_indices(const std::vector<int>& p) const {
  auto [lo, hi] = degree_range(p);
  std::vector<std::size_t> out(hi - lo);
  std::iota(out.begin(), out.end(), lo);
  return out;
}

bool GradedBasis::in_interior(std::size_t b, const std::vector<int>& guard) const {
  for (int i = 0; i < spec_.k; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    if (degree(b, i) > spec_.L[idx] - guard[idx]) return false;
  }
  return true;
}

}  // namespace polyball

#pragma once

// Truncated tensor Fock space: binomial weight system, Toeplitz weights,
// and the degree-graded basis of K (x) F^2(H_n1) (x) ... (x) F^2(H_nk).

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "polyball/freewords.hpp"

namespace polyball {

struct TruncationSpec {
  int k = 1;
  std::vector<int> n{1};
  std::vector<int> m{1};
  std::vector<int> L{1};
  int d = 1;

  /// Throws std::invalid_argument describing the first violated constraint.
  void validate() const;
  std::size_t factor_dim(int i) const;
  std::size_t fock_dim() const;
  std::size_t model_dim() const { return static_cast<std::size_t>(d) * fock_dim(); }

  friend bool operator==(const TruncationSpec&, const TruncationSpec&) = default;
};

/// Exact positive rational p/q, kept reduced.
struct Rational {
  std::uint64_t num = 1;
  std::uint64_t den = 1;

  Rational() = default;
  Rational(std::uint64_t p, std::uint64_t q);
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);
  friend bool operator==(const Rational&, const Rational&) = default;
};

/// sqrt(radicand) with an exact rational radicand. Every entry of the
/// weighted creation operators and their word products has this form.
struct Radical {
  Rational radicand;
  double value() const;
  friend Radical operator*(const Radical& a, const Radical& b) { return {a.radicand * b.radicand}; }
  friend Radical operator/(const Radical& a, const Radical& b) { return {a.radicand / b.radicand}; }
  friend bool operator==(const Radical&, const Radical&) = default;
};

/// binomial(len + m - 1, m - 1).
std::uint64_t weight_b(int m, std::size_t len);

/// Product over factors of b(m_i, |w_i|).
std::uint64_t weight_b(const TruncationSpec& spec, const MultiWord& w);

/// prod_i sqrt(b(m_i, min) / b(m_i, max)); throws on non-comparable input.
Radical tau(const TruncationSpec& spec, const MultiWord& omega, const MultiWord& gamma);
/// prod_i 1 / b(m_i, max); throws on non-comparable input.
Rational mu(const TruncationSpec& spec, const MultiWord& omega, const MultiWord& gamma);

/// tau restricted to lengths: prod_i sqrt(b(m_i, min) / b(m_i, max)).
Radical tau_from_lengths(const TruncationSpec& spec, const std::vector<std::size_t>& len_a,
                         const std::vector<std::size_t>& len_b);

/// Basis of the truncated Fock space ordered by degree vector (lexicographic),
/// then by the per-factor graded lexicographic word order. Every spectral
/// subspace E_p is therefore a contiguous index range.
class GradedBasis {
 public:
  explicit GradedBasis(TruncationSpec spec);

  const TruncationSpec& spec() const noexcept { return spec_; }
  std::size_t size() const noexcept { return size_; }
  int factors() const noexcept { return spec_.k; }

  const std::vector<Word>& factor_words(int i) const { return words_[static_cast<std::size_t>(i)]; }
  std::size_t factor_word_index(int i, const Word& w) const;

  /// Index of word w_i in factor i for basis element b.
  std::uint32_t word_index(std::size_t b, int i) const { return factor_idx_[b * static_cast<std::size_t>(spec_.k) + static_cast<std::size_t>(i)]; }
  int degree(std::size_t b, int i) const { return degree_[b * static_cast<std::size_t>(spec_.k) + static_cast<std::size_t>(i)]; }
  std::vector<int> degree(std::size_t b) const;

  MultiWord entry(std::size_t b) const;
  std::size_t index_of(const MultiWord& w) const;
  /// Basis index for a tuple of per-factor word indices.
  std::size_t index_of_factor_indices(const std::vector<std::uint32_t>& idx) const;
  /// Basis index of the element at position c of the factor-1-slowest cartesian order.
  std::size_t from_cartesian(std::size_t c) const { return from_cartesian_[c]; }

  /// Indices of E_p; empty when p lies outside the truncation.
  std::vector<std::size_t> degree_indices(const std::vector<int>& p) const;
  std::pair<std::size_t, std::size_t> degree_range(const std::vector<int>& p) const;
  const std::map<std::vector<int>, std::pair<std::size_t, std::size_t>>& blocks() const noexcept { return blocks_; }

  /// Whether basis element b has degree_i <= L_i - guard_i for every i.
  bool in_interior(std::size_t b, const std::vector<int>& guard) const;

 private:
  TruncationSpec spec_;
  std::size_t size_ = 0;
  std::vector<std::vector<Word>> words_;
  std::vector<std::vector<std::size_t>> length_offset_;
  std::vector<std::uint32_t> factor_idx_;
  std::vector<int> degree_;
  std::vector<std::size_t> from_cartesian_;
  std::map<std::vector<int>, std::pair<std::size_t, std::size_t>> blocks_;
};

}  // namespace polyball

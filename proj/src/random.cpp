#include "polyball/random.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace polyball {

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 == 0.0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double t = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(t);
  has_spare_ = true;
  return r * std::cos(t);
}

Complex Rng::complex_normal() {
  const double re = normal();
  const double im = normal();
  return {re * std::numbers::sqrt2 / 2.0, im * std::numbers::sqrt2 / 2.0};
}

std::uint64_t Rng::below(std::uint64_t bound) {
  // rejection keeps the draw unbiased and platform independent
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t v = engine_();
  while (v >= limit) v = engine_();
  return v % bound;
}

DenseOp random_dense(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  DenseOp out(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c)
    for (Eigen::Index r = 0; r < rows; ++r) out(r, c) = rng.complex_normal();
  return out;
}

namespace {

/// Reduced pairs (as basis index pairs) with |alpha_i| + |beta_i| <= L_i - margin_i.
std::vector<std::pair<std::size_t, std::size_t>> reduced_pairs(const GradedBasis& basis, SymbolSupport support) {
  const auto& spec = basis.spec();
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t r = 0; r < basis.size(); ++r) {
    for (std::size_t c = 0; c < basis.size(); ++c) {
      bool ok = true;
      for (int i = 0; i < basis.factors() && ok; ++i) {
        const auto i0 = static_cast<std::size_t>(i);
        const int a = basis.degree(r, i);
        const int b = basis.degree(c, i);
        const int margin = support == SymbolSupport::Interior ? spec.m[i0] : 0;
        ok = std::min(a, b) == 0 && a + b <= spec.L[i0] - margin;
      }
      if (ok) out.emplace_back(r, c);
    }
  }
  return out;
}

}  // namespace

Symbol random_symbol(const GradedBasis& basis, Rng& rng, SymbolSupport support) {
  const int d = basis.spec().d;
  Symbol sym{basis.spec(), {}};
  for (const auto& [r, c] : reduced_pairs(basis, support))
    sym.coeffs.emplace(Symbol::Key{basis.entry(r), basis.entry(c)}, random_dense(d, d, rng));
  return sym;
}

Symbol random_monomial(const GradedBasis& basis, Rng& rng) {
  const auto pairs = reduced_pairs(basis, SymbolSupport::Interior);
  if (pairs.empty()) throw std::domain_error("random_monomial: truncation leaves no interior support");
  const auto& [r, c] = pairs[rng.below(pairs.size())];
  Symbol sym{basis.spec(), {}};
  const int d = basis.spec().d;
  sym.coeffs.emplace(Symbol::Key{basis.entry(r), basis.entry(c)}, random_dense(d, d, rng));
  return sym;
}

}  // namespace polyball

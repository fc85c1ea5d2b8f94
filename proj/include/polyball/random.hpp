#pragma once

// Seeded generators for test operators. Normal deviates come from Box-Muller
// over mt19937_64 53-bit uniforms, so streams are reproducible across
// standard libraries (std::normal_distribution is not).

#include <cstdint>
#include <random>
#include <string_view>

#include "polyball/toeplitz.hpp"

namespace polyball {

inline constexpr std::string_view kRngName = "mt19937_64+box-muller/v1";

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1).
  double uniform();
  double normal();
  /// Complex standard normal: real and imaginary parts N(0, 1/2).
  Complex complex_normal();
  std::uint64_t below(std::uint64_t bound);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

DenseOp random_dense(Eigen::Index rows, Eigen::Index cols, Rng& rng);

enum class SymbolSupport {
  Interior,  // |alpha_i| + |beta_i| <= L_i - m_i, the Brown-Halmos interior
  Full,      // |alpha_i| + |beta_i| <= L_i
};

/// Symbol with complex-normal d x d coefficients on every reduced pair of the support.
Symbol random_symbol(const GradedBasis& basis, Rng& rng, SymbolSupport support = SymbolSupport::Interior);

/// One reduced pair drawn uniformly from the same support, with a random
/// coefficient. Its reconstruction is C (x) W_alpha W_beta^*.
Symbol random_monomial(const GradedBasis& basis, Rng& rng);

}  // namespace polyball

#pragma once

// Weighted multi-Toeplitz structure on the truncated model: Brown-Halmos
// residuals, the entrywise tau-criterion, Fourier symbols, and the
// multi-homogeneous (torus Fourier) decomposition.

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "polyball/operators.hpp"

namespace polyball {

/// Fourier symbol: reduced pairs (alpha, beta) mapped to d x d coefficients.
/// Absent keys are zero.
struct Symbol {
  using Key = std::pair<MultiWord, MultiWord>;
  TruncationSpec spec;
  std::map<Key, DenseOp> coeffs;
};

/// Max entrywise distance between two symbols, missing keys read as zero.
double symbol_distance(const Symbol& a, const Symbol& b);

struct ToeplitzReport {
  bool is_toeplitz = false;
  double max_offdomain_entry = 0.0;
  double max_ratio_residual = 0.0;
  /// Offending (omega, gamma) in "/"-joined digit form.
  std::optional<std::pair<std::string, std::string>> witness;
};

/// Per-factor BH residual
/// max_{j,l} || P_int [ Lambda'_j^* T Lambda'_l - delta_{jl} Psi_i(T) ] P_int ||_max
/// with the factor-i guard band m_i + 1.
std::vector<double> brown_halmos_residual(const GradedBasis& basis, const DenseOp& t);

/// Unmasked residual blocks Lambda'_j^* T Lambda'_l - delta_{jl} Psi_i(T),
/// ordered j * n_i + l (0-based).
std::vector<DenseOp> brown_halmos_blocks(const GradedBasis& basis, const DenseOp& t, int i);

/// Guard band used for factor i of the BH residual.
GuardBand brown_halmos_guard(const TruncationSpec& spec, int i);

/// Which weight family the proportionality test uses.
enum class ToeplitzWeights {
  Tau,  // orthonormal Fock basis
  Mu,   // Gram entries <T' Z_gamma, Z_omega> in the weighted Fock space
};

/// Entrywise check: non-comparable blocks vanish and comparable blocks are
/// weight-proportional to the block at s(omega, gamma). Entries outside the
/// interior of `guard` (when given) are skipped.
ToeplitzReport is_weighted_multi_toeplitz(const GradedBasis& basis, const DenseOp& t, double tol,
                                          ToeplitzWeights weights = ToeplitzWeights::Tau,
                                          const std::optional<GuardBand>& guard = std::nullopt);

Symbol extract_symbol(const GradedBasis& basis, const DenseOp& t);
DenseOp reconstruct(const GradedBasis& basis, const Symbol& symbol);

/// W_alpha W_beta^* with W_alpha = W_{1,alpha_1}...W_{k,alpha_k}, Fock level (no K).
SparseOp monomial(const GradedBasis& basis, const MultiWord& alpha, const MultiWord& beta);

/// T_s = sum_p P_{p+s} T P_p.
DenseOp homogeneous_part_projection(const GradedBasis& basis, const DenseOp& t, const std::vector<int>& s);

/// Uniform torus average of e^{-i s.theta} Gamma(theta) T Gamma(theta)^*.
/// Throws when some N_i < 2 L_i + 1.
DenseOp homogeneous_part_quadrature(const GradedBasis& basis, const DenseOp& t, const std::vector<int>& s,
                                    const std::vector<int>& samples);

/// sum_{|s_j| <= N_j} prod_j (1 - |s_j| / (N_j + 1)) T_s.
DenseOp fejer_sum(const GradedBasis& basis, const DenseOp& t, const std::vector<int>& order);
/// sum_{|s_j| <= N_j} T_s.
DenseOp partial_sum(const GradedBasis& basis, const DenseOp& t, const std::vector<int>& order);

/// Matrix of T' = U T U^* in the weighted Fock basis {Z_alpha}:
/// entries <T' Z_gamma, Z_omega> = <T e_gamma, e_omega> / sqrt(b_omega b_gamma).
DenseOp to_weighted_fock_conjugate(const GradedBasis& basis, const DenseOp& t);

}  // namespace polyball

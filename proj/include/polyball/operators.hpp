#pragma once

// Matrices of the model operators on K (x) (truncated tensor Fock space).
// Model index of (coefficient c, basis element b) is c * fock_dim + b.
//
// Truncation convention: creation operators annihilate the top degree layer,
// i.e. they are compressions to the truncated space. Since the truncated space
// is invariant under every adjoint W*, Lambda*, identities that multiply by
// words of length l on either side hold exactly on degrees <= L - l.

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "polyball/fockbasis.hpp"

namespace polyball {

using Complex = std::complex<double>;
using SparseOp = Eigen::SparseMatrix<Complex>;
using DenseOp = Eigen::MatrixXcd;

/// Tuple of operators indexed [factor i][generator j], both 0-based.
template <class Op>
using OperatorTuple = std::vector<std::vector<Op>>;

enum class Side { Left, Right };

/// Per-factor guard band; the interior keeps degrees p with p_i <= L_i - g_i.
struct GuardBand {
  std::vector<int> g;
};

// Indices i and j are 1-based as in W_{i,j}; throws std::out_of_range.
SparseOp left_creation(const GradedBasis& basis, int i, int j);
SparseOp right_creation(const GradedBasis& basis, int i, int j);

/// W_{i,alpha} = W_{i,j1}...W_{i,jp} (Left) or Lambda_{i,alpha} (Right) as an
/// iterated product of generators.
SparseOp word_operator(const GradedBasis& basis, int i, const Word& alpha, Side side);

/// Closed-form entries of a word operator with exact radicands:
/// W_beta e_gamma = sqrt(b_gamma / b_{beta gamma}) e_{beta gamma},
/// Lambda_beta e_gamma = sqrt(b_gamma / b_{gamma reverse(beta)}) e_{gamma reverse(beta)}.
struct ExactEntry {
  std::size_t row;
  std::size_t col;
  Radical value;
};
std::vector<ExactEntry> word_operator_exact(const GradedBasis& basis, int i, const Word& alpha, Side side);

SparseOp omega(const GradedBasis& basis, int i);
SparseOp spectral_projection(const GradedBasis& basis, const std::vector<int>& p);
SparseOp gamma(const GradedBasis& basis, const std::vector<double>& theta);
SparseOp cauchy_dual_column(const GradedBasis& basis, int i, int j);
SparseOp interior_projector(const GradedBasis& basis, const GuardBand& guard);
SparseOp identity_op(const GradedBasis& basis);

OperatorTuple<SparseOp> left_tuple(const GradedBasis& basis);
OperatorTuple<SparseOp> right_tuple(const GradedBasis& basis);

/// Diagonal of the model space marking interior entries.
std::vector<bool> interior_mask(const GradedBasis& basis, const GuardBand& guard);

/// max |A(r, c)| over interior rows and columns, i.e. ||P A P||_max.
double interior_max_abs(const std::vector<bool>& mask, const DenseOp& a);

/// Phi_X(Y) = sum_j X_j Y X_j^*.
template <class Op>
DenseOp phi(std::span<const Op> factor, const DenseOp& y) {
  DenseOp out = DenseOp::Zero(y.rows(), y.cols());
  for (const auto& x : factor) {
    if (x.cols() != y.rows() || y.cols() != x.cols())
      throw std::invalid_argument("phi: dimension mismatch");
    DenseOp xy = x * y;
    out.noalias() += xy * x.adjoint();
  }
  return out;
}

/// (id - Phi_{X_1})^{p_1} o ... o (id - Phi_{X_k})^{p_k} (I).
template <class Op>
DenseOp defect(const OperatorTuple<Op>& x, const std::vector<int>& p, Eigen::Index dim) {
  if (p.size() != x.size()) throw std::invalid_argument("defect: exponent count mismatch");
  DenseOp y = DenseOp::Identity(dim, dim);
  for (std::size_t i = x.size(); i-- > 0;) {
    for (int t = 0; t < p[i]; ++t) {
      y -= phi<Op>(std::span<const Op>(x[i]), y);
    }
  }
  return y;
}

/// Brown-Halmos right-hand side
/// Psi_i(T) = sum_{t=0}^{m_i-1} (-1)^t C(m_i, t+1) sum_{|beta|=t} Lambda_beta T Lambda_beta^*.
DenseOp psi_bh(const GradedBasis& basis, int i, const DenseOp& t);

/// Degree-q eigenvalue of Psi_i(I) from its defining alternating sum.
double psi_identity_eigenvalue(int m, int q);

}  // namespace polyball

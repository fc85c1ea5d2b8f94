#pragma once

// Noncommutative Berezin kernels and transforms at matrix points of the
// poly-hyperball, plus the classical one-variable and polydisc reductions.

#include <vector>

#include "polyball/random.hpp"
#include "polyball/toeplitz.hpp"

namespace polyball {

/// k-tuple of n_i-tuples of dH x dH matrices; entries in different factors commute.
struct PointTuple {
  OperatorTuple<DenseOp> x;
  Eigen::Index dim = 0;
  bool pure = false;

  int factors() const { return static_cast<int>(x.size()); }
};

inline constexpr double kCommutationTol = 1e-12;
inline constexpr double kPsdTol = 1e-10;
inline constexpr double kPurityThreshold = 1.0 - 1e-8;

/// Largest |entry| of [X_{p,a}, X_{q,b}] over p != q.
double cross_commutator(const PointTuple& x);

/// Delta_X^p(I) >= -kPsdTol for every 0 <= p <= m. Throws std::domain_error on
/// a shape mismatch or a cross-factor commutation violation.
bool membership(const PointTuple& x, const TruncationSpec& spec);

/// Spectral radius of each Phi_{X_i} as a linear map on dH x dH matrices.
std::vector<double> purity(const PointTuple& x);
bool is_pure(const std::vector<double>& radii);

/// K_X stored blockwise: block(beta) = sqrt(b_beta) Delta^{1/2} X_beta^* (dH x dH),
/// one row of `blocks` per Fock basis element holding that block column-major.
struct BerezinKernel {
  GradedBasis fock;  // d = 1
  Eigen::Index dim = 0;
  DenseOp blocks;       // fock.size() x dim*dim
  DenseOp defect_root;  // Delta_X^m(I)^{1/2}
  int defect_rank = 0;

  DenseOp block(std::size_t beta) const;
  /// Dense (fock_size * dH) x dH matrix, row index beta * dH + h.
  DenseOp matrix() const;
  /// K_X^* K_X.
  DenseOp gram() const;
};

/// Throws std::domain_error when the defect has an eigenvalue below -kPsdTol.
BerezinKernel berezin_kernel(const PointTuple& x, const TruncationSpec& spec);

/// max over interior rows (guard 1) of |K X_{i,j}^* - (W_{i,j}^* (x) I) K|.
double intertwining_residual(const BerezinKernel& kernel, const PointTuple& x);

/// (I_K (x) K_X^*)(T (x) I_H)(I_K (x) K_X) on K (x) C^dH, index c * dH + h.
DenseOp berezin_transform(const BerezinKernel& kernel, const TruncationSpec& model, const DenseOp& t);

/// sum A_{(alpha,beta)} (x) X_alpha X_beta^*.
DenseOp eval_symbol(const Symbol& symbol, const PointTuple& x);

/// X_{i,alpha} = X_{i,j1} ... X_{i,jp}; alpha over factor i (0-based i).
DenseOp word_product(const PointTuple& x, int i0, const Word& alpha);

/// r W on the truncated Fock space of `spec` (coefficient dimension ignored).
PointTuple radial_model(const TruncationSpec& spec, double r);

/// Random point: in a random unitary frame, factor 1 entries are strictly upper
/// triangular plus scalars, later factors are multiples of the corner unit
/// E_{1,dH} plus scalars, so cross-factor entries commute. The scalar parts
/// are sized so that every Phi_{X_i} has spectral radius exactly `rho`; the
/// nilpotent parts are shrunk until the point is a member.
PointTuple random_pure_point(const TruncationSpec& spec, Eigen::Index dim, double rho, Rng& rng);

// Classical reductions.

struct ClassicalModel {
  GradedBasis basis;
  std::vector<SparseOp> shifts;  // one per factor (n_i = 1)
};

/// k = 1, n = 1: the truncated weighted shift on A_m(D).
ClassicalModel bergman_shift(int m, int L);
/// n_i = m_i = 1: the truncated coordinate shifts on H^2(D^k).
ClassicalModel hardy_polydisc(int k, int L);

/// Residual of M'^* T M' = sum_{t<m} (-1)^t C(m, t+1) M^t T M^{*t} with the
/// Cauchy dual M' = M (M^* M)^+ formed from dense matrices, interior guard m + 1.
double louhichi_olofsson_residual(const ClassicalModel& model, const DenseOp& t);
/// max_i of the interior (guard 1) residual of M_{z_i}^* T M_{z_i} = T.
double hardy_toeplitz_residual(const ClassicalModel& model, const DenseOp& t);
/// k = 1, m = 1: residual blocks R_j^* T R_l - delta_{jl} T with unweighted
/// right shifts R_j e_alpha = e_{alpha g_j}, ordered j * n + l.
std::vector<DenseOp> free_right_shift_blocks(const GradedBasis& basis, const DenseOp& t);

}  // namespace polyball

#include "polyball/operators.hpp"

#include <cmath>
#include <stdexcept>

namespace polyball {

namespace {

using Triplet = Eigen::Triplet<Complex>;

void check_factor(const GradedBasis& basis, int i) {
  if (i < 1 || i > basis.spec().k) throw std::out_of_range("factor index " + std::to_string(i) + " out of range");
}

void check_generator(const GradedBasis& basis, int i, int j) {
  check_factor(basis, i);
  if (j < 1 || j > basis.spec().n[static_cast<std::size_t>(i - 1)])
    throw std::out_of_range("generator index " + std::to_string(j) + " out of range");
}

/// Repeats Fock-level triplets across the d coefficient copies.
SparseOp lift(const GradedBasis& basis, const std::vector<Triplet>& fock) {
  const auto f = static_cast<Eigen::Index>(basis.size());
  const int d = basis.spec().d;
  std::vector<Triplet> all;
  all.reserve(fock.size() * static_cast<std::size_t>(d));
  for (int c = 0; c < d; ++c) {
    for (const auto& t : fock) all.emplace_back(c * f + t.row(), c * f + t.col(), t.value());
  }
  SparseOp out(f * d, f * d);
  out.setFromTriplets(all.begin(), all.end());
  return out;
}

SparseOp diagonal(const GradedBasis& basis, auto&& value_of) {
  std::vector<Triplet> trips;
  for (std::size_t b = 0; b < basis.size(); ++b) {
    const Complex v = value_of(b);
    if (v != Complex(0.0)) trips.emplace_back(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(b), v);
  }
  return lift(basis, trips);
}

/// Basis index reached by replacing the factor-i word of b with `w`.
std::size_t replace_component(const GradedBasis& basis, std::size_t b, int i0, const Word& w) {
  std::vector<std::uint32_t> idx(static_cast<std::size_t>(basis.factors()));
  for (int s = 0; s < basis.factors(); ++s) idx[static_cast<std::size_t>(s)] = basis.word_index(b, s);
  idx[static_cast<std::size_t>(i0)] = static_cast<std::uint32_t>(basis.factor_word_index(i0, w));
  return basis.index_of_factor_indices(idx);
}

SparseOp creation(const GradedBasis& basis, int i, int j, Side side) {
  check_generator(basis, i, j);
  const int i0 = i - 1;
  const int mi = basis.spec().m[static_cast<std::size_t>(i0)];
  const int li = basis.spec().L[static_cast<std::size_t>(i0)];
  const int ni = basis.spec().n[static_cast<std::size_t>(i0)];
  const Word g = Word::generator(ni, j);
  std::vector<Triplet> trips;
  for (std::size_t b = 0; b < basis.size(); ++b) {
    const int len = basis.degree(b, i0);
    if (len >= li) continue;
    const Word& w = basis.factor_words(i0)[basis.word_index(b, i0)];
    const Word next = side == Side::Left ? concat(g, w) : concat(w, g);
    const double weight = std::sqrt(static_cast<double>(weight_b(mi, static_cast<std::size_t>(len))) /
                                    static_cast<double>(weight_b(mi, static_cast<std::size_t>(len) + 1)));
    trips.emplace_back(static_cast<Eigen::Index>(replace_component(basis, b, i0, next)), static_cast<Eigen::Index>(b),
                       Complex(weight, 0.0));
  }
  return lift(basis, trips);
}

}  // namespace

SparseOp left_creation(const GradedBasis& basis, int i, int j) { return creation(basis, i, j, Side::Left); }
SparseOp right_creation(const GradedBasis& basis, int i, int j) { return creation(basis, i, j, Side::Right); }

SparseOp word_operator(const GradedBasis& basis, int i, const Word& alpha, Side side) {
  check_factor(basis, i);
  if (alpha.alphabet() != basis.spec().n[static_cast<std::size_t>(i - 1)])
    throw std::invalid_argument("word_operator: alphabet mismatch");
  SparseOp out = identity_op(basis);
  for (int j : alpha.letters()) {
    const SparseOp gen = side == Side::Left ? left_creation(basis, i, j) : right_creation(basis, i, j);
    out = SparseOp(out * gen);
  }
  return out;
}

std::vector<ExactEntry> word_operator_exact(const GradedBasis& basis, int i, const Word& alpha, Side side) {
  check_factor(basis, i);
  const int i0 = i - 1;
  const int mi = basis.spec().m[static_cast<std::size_t>(i0)];
  const auto li = static_cast<std::size_t>(basis.spec().L[static_cast<std::size_t>(i0)]);
  const Word tail = side == Side::Left ? alpha : reverse(alpha);
  const auto f = basis.size();
  std::vector<ExactEntry> out;
  for (std::size_t b = 0; b < f; ++b) {
    const Word& w = basis.factor_words(i0)[basis.word_index(b, i0)];
    if (w.length() + alpha.length() > li) continue;
    const Word next = side == Side::Left ? concat(alpha, w) : concat(w, tail);
    const Radical v{Rational(weight_b(mi, w.length()), weight_b(mi, next.length()))};
    const std::size_t row = replace_component(basis, b, i0, next);
    for (int c = 0; c < basis.spec().d; ++c) out.push_back({c * f + row, c * f + b, v});
  }
  return out;
}

SparseOp identity_op(const GradedBasis& basis) {
  return diagonal(basis, [](std::size_t) { return Complex(1.0); });
}

SparseOp omega(const GradedBasis& basis, int i) {
  check_factor(basis, i);
  const int mi = basis.spec().m[static_cast<std::size_t>(i - 1)];
  return diagonal(basis, [&](std::size_t b) {
    const int q = basis.degree(b, i - 1);
    return q == 0 ? Complex(1.0) : Complex(static_cast<double>(mi + q - 1) / q);
  });
}

SparseOp spectral_projection(const GradedBasis& basis, const std::vector<int>& p) {
  const auto [lo, hi] = basis.degree_range(p);
  return diagonal(basis, [&](std::size_t b) { return b >= lo && b < hi ? Complex(1.0) : Complex(0.0); });
}

SparseOp gamma(const GradedBasis& basis, const std::vector<double>& theta) {
  if (theta.size() != static_cast<std::size_t>(basis.factors())) throw std::invalid_argument("gamma: angle count mismatch");
  return diagonal(basis, [&](std::size_t b) {
    double phase = 0.0;
    for (int s = 0; s < basis.factors(); ++s) phase += theta[static_cast<std::size_t>(s)] * basis.degree(b, s);
    return std::polar(1.0, phase);
  });
}

SparseOp cauchy_dual_column(const GradedBasis& basis, int i, int j) {
  return SparseOp(omega(basis, i) * right_creation(basis, i, j));
}

SparseOp interior_projector(const GradedBasis& basis, const GuardBand& guard) {
  if (guard.g.size() != static_cast<std::size_t>(basis.factors())) throw std::invalid_argument("guard band size mismatch");
  for (int s = 0; s < basis.factors(); ++s) {
    const auto idx = static_cast<std::size_t>(s);
    if (guard.g[idx] < 0 || guard.g[idx] > basis.spec().L[idx]) throw std::invalid_argument("guard band outside 0..L");
  }
  return diagonal(basis, [&](std::size_t b) { return basis.in_interior(b, guard.g) ? Complex(1.0) : Complex(0.0); });
}

OperatorTuple<SparseOp> left_tuple(const GradedBasis& basis) {
  OperatorTuple<SparseOp> out(static_cast<std::size_t>(basis.factors()));
  for (int i = 1; i <= basis.factors(); ++i)
    for (int j = 1; j <= basis.spec().n[static_cast<std::size_t>(i - 1)]; ++j)
      out[static_cast<std::size_t>(i - 1)].push_back(left_creation(basis, i, j));
  return out;
}

OperatorTuple<SparseOp> right_tuple(const GradedBasis& basis) {
  OperatorTuple<SparseOp> out(static_cast<std::size_t>(basis.factors()));
  for (int i = 1; i <= basis.factors(); ++i)
    for (int j = 1; j <= basis.spec().n[static_cast<std::size_t>(i - 1)]; ++j)
      out[static_cast<std::size_t>(i - 1)].push_back(right_creation(basis, i, j));
  return out;
}

std::vector<bool> interior_mask(const GradedBasis& basis, const GuardBand& guard) {
  std::vector<bool> out(basis.spec().model_dim());
  const auto f = basis.size();
  for (std::size_t b = 0; b < f; ++b) {
    const bool in = basis.in_interior(b, guard.g);
    for (int c = 0; c < basis.spec().d; ++c) out[static_cast<std::size_t>(c) * f + b] = in;
  }
  return out;
}

double interior_max_abs(const std::vector<bool>& mask, const DenseOp& a) {
  double best = 0.0;
  for (Eigen::Index c = 0; c < a.cols(); ++c) {
    if (!mask[static_cast<std::size_t>(c)]) continue;
    for (Eigen::Index r = 0; r < a.rows(); ++r) {
      if (mask[static_cast<std::size_t>(r)]) best = std::max(best, std::abs(a(r, c)));
    }
  }
  return best;
}

double psi_identity_eigenvalue(int m, int q) {
  // Lambda_beta Lambda_beta^* acts on a degree-q word ending in reverse(beta)
  // by b(q - |beta|) / b(q); exactly one beta of each length t <= q qualifies.
  double acc = 0.0;
  double binom = m;  // C(m, t + 1) at t = 0
  for (int t = 0; t <= m - 1; ++t) {
    if (t <= q) {
      const double ratio = static_cast<double>(weight_b(m, static_cast<std::size_t>(q - t))) /
                           static_cast<double>(weight_b(m, static_cast<std::size_t>(q)));
      acc += (t % 2 == 0 ? 1.0 : -1.0) * binom * ratio;
    }
    binom = binom * (m - t - 1) / (t + 2);
  }
  return acc;
}

DenseOp psi_bh(const GradedBasis& basis, int i, const DenseOp& t) {
  check_factor(basis, i);
  const auto i0 = static_cast<std::size_t>(i - 1);
  const int mi = basis.spec().m[i0];
  const int ni = basis.spec().n[i0];
  const auto dim = static_cast<Eigen::Index>(basis.spec().model_dim());
  if (t.rows() != dim || t.cols() != dim) throw std::invalid_argument("psi_bh: dimension mismatch");

  std::vector<SparseOp> gens;
  for (int j = 1; j <= ni; ++j) gens.push_back(right_creation(basis, i, j));

  DenseOp out = DenseOp::Zero(dim, dim);
  // layer holds sum_{|beta|=t} Lambda_beta T Lambda_beta^*, built by Phi_Lambda
  DenseOp layer = t;
  double binom = mi;
  for (int step = 0; step <= mi - 1; ++step) {
    if (step > 0) layer = phi<SparseOp>(std::span<const SparseOp>(gens), layer);
    out += ((step % 2 == 0) ? binom : -binom) * layer;
    binom = binom * (mi - step - 1) / (step + 2);
  }
  return out;
}

}  // namespace polyball

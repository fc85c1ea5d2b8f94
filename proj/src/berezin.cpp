#include "polyball/berezin.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace polyball {

namespace {

using Stride = Eigen::Stride<Eigen::Dynamic, Eigen::Dynamic>;

void check_shape(const PointTuple& x, const TruncationSpec& spec) {
  if (x.factors() != spec.k) throw std::domain_error("point: factor count does not match spec");
  for (int i = 0; i < spec.k; ++i) {
    const auto& f = x.x[static_cast<std::size_t>(i)];
    if (static_cast<int>(f.size()) != spec.n[static_cast<std::size_t>(i)])
      throw std::domain_error("point: factor " + std::to_string(i + 1) + " has wrong arity");
    for (const auto& m : f)
      if (m.rows() != x.dim || m.cols() != x.dim) throw std::domain_error("point: matrix size mismatch");
  }
}

double min_eigenvalue(const DenseOp& h) {
  const DenseOp sym = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<DenseOp> es(sym, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

TruncationSpec fock_spec(const TruncationSpec& spec) {
  TruncationSpec s = spec;
  s.d = 1;
  return s;
}

/// Fock basis index of (factor-i word extended by generator j on the left).
std::vector<std::vector<std::int64_t>> left_children(const GradedBasis& fock, int i0) {
  const auto& words = fock.factor_words(i0);
  const int ni = fock.spec().n[static_cast<std::size_t>(i0)];
  const auto li = static_cast<std::size_t>(fock.spec().L[static_cast<std::size_t>(i0)]);
  std::vector<std::vector<std::int64_t>> out(words.size(), std::vector<std::int64_t>(static_cast<std::size_t>(ni), -1));
  for (std::size_t w = 0; w < words.size(); ++w) {
    if (words[w].length() >= li) continue;
    for (int j = 1; j <= ni; ++j)
      out[w][static_cast<std::size_t>(j - 1)] =
          static_cast<std::int64_t>(fock.factor_word_index(i0, concat(Word::generator(ni, j), words[w])));
  }
  return out;
}

}  // namespace

double cross_commutator(const PointTuple& x) {
  double worst = 0.0;
  for (std::size_t p = 0; p < x.x.size(); ++p)
    for (std::size_t q = p + 1; q < x.x.size(); ++q)
      for (const auto& a : x.x[p])
        for (const auto& b : x.x[q]) worst = std::max(worst, (a * b - b * a).cwiseAbs().maxCoeff());
  return worst;
}

bool membership(const PointTuple& x, const TruncationSpec& spec) {
  check_shape(x, spec);
  const double comm = cross_commutator(x);
  if (comm > kCommutationTol)
    throw std::domain_error("membership: cross-factor commutator " + std::to_string(comm) + " exceeds tolerance");
  const auto ks = static_cast<std::size_t>(spec.k);
  std::vector<int> p(ks, 0);
  while (true) {
    if (min_eigenvalue(defect<DenseOp>(x.x, p, x.dim)) < -kPsdTol) return false;
    std::size_t pos = ks;
    while (pos > 0 && ++p[pos - 1] > spec.m[pos - 1]) p[--pos] = 0;
    if (pos == 0) break;
  }
  return true;
}

std::vector<double> purity(const PointTuple& x) {
  std::vector<double> out;
  const Eigen::Index n = x.dim;
  for (const auto& factor : x.x) {
    if (n * n <= 256) {
      // vec(X Y X^*) = (conj(X) kron X) vec(Y)
      DenseOp rep = DenseOp::Zero(n * n, n * n);
      for (const auto& a : factor) {
        const DenseOp ac = a.conjugate();
        for (Eigen::Index r = 0; r < n; ++r)
          for (Eigen::Index c = 0; c < n; ++c) rep.block(r * n, c * n, n, n) += ac(r, c) * a;
      }
      Eigen::ComplexEigenSolver<DenseOp> es(rep, false);
      out.push_back(es.eigenvalues().cwiseAbs().maxCoeff());
      continue;
    }
    // power iteration on the positive cone, started at I
    DenseOp y = DenseOp::Identity(n, n);
    double estimate = 0.0;
    for (int it = 0; it < 2000; ++it) {
      const DenseOp next = phi<DenseOp>(std::span<const DenseOp>(factor), y);
      const double ny = y.norm();
      const double nn = next.norm();
      if (nn == 0.0) {
        estimate = 0.0;
        break;
      }
      const double ratio = nn / ny;
      if (it > 10 && std::abs(ratio - estimate) <= 1e-13 * std::max(1.0, ratio)) {
        estimate = ratio;
        break;
      }
      estimate = ratio;
      y = next / nn;
    }
    out.push_back(estimate);
  }
  return out;
}

bool is_pure(const std::vector<double>& radii) {
  for (double r : radii)
    if (r >= kPurityThreshold) return false;
  return true;
}

DenseOp word_product(const PointTuple& x, int i0, const Word& alpha) {
  DenseOp out = DenseOp::Identity(x.dim, x.dim);
  for (int j : alpha.letters()) out = out * x.x[static_cast<std::size_t>(i0)][static_cast<std::size_t>(j - 1)];
  return out;
}

DenseOp BerezinKernel::block(std::size_t beta) const {
  DenseOp out(dim, dim);
  for (Eigen::Index c = 0; c < dim; ++c)
    for (Eigen::Index r = 0; r < dim; ++r) out(r, c) = blocks(static_cast<Eigen::Index>(beta), r + dim * c);
  return out;
}

DenseOp BerezinKernel::matrix() const {
  const auto f = static_cast<Eigen::Index>(fock.size());
  DenseOp out(f * dim, dim);
  for (Eigen::Index b = 0; b < f; ++b) out.block(b * dim, 0, dim, dim) = block(static_cast<std::size_t>(b));
  return out;
}

DenseOp BerezinKernel::gram() const {
  DenseOp out = DenseOp::Zero(dim, dim);
  for (std::size_t b = 0; b < fock.size(); ++b) {
    const DenseOp kb = block(b);
    out.noalias() += kb.adjoint() * kb;
  }
  return out;
}

BerezinKernel berezin_kernel(const PointTuple& x, const TruncationSpec& spec) {
  if (!membership(x, spec)) throw std::domain_error("berezin_kernel: point is not in the poly-hyperball");
  BerezinKernel ker{GradedBasis(fock_spec(spec)), x.dim, {}, {}, 0};
  const auto& fock = ker.fock;
  const Eigen::Index n = x.dim;

  const DenseOp delta = defect<DenseOp>(x.x, spec.m, n);
  Eigen::SelfAdjointEigenSolver<DenseOp> es(0.5 * (delta + delta.adjoint()));
  Eigen::VectorXd lam = es.eigenvalues();
  for (Eigen::Index t = 0; t < lam.size(); ++t) {
    if (lam(t) < -kPsdTol) throw std::domain_error("berezin_kernel: defect eigenvalue " + std::to_string(lam(t)));
    if (lam(t) < 0.0) lam(t) = 0.0;
    if (lam(t) > kPsdTol) ++ker.defect_rank;
  }
  ker.defect_root = es.eigenvectors() * lam.cwiseSqrt().asDiagonal() * es.eigenvectors().adjoint();

  // X_{i,beta}^* per factor word; X_{i, g_j beta}^* = X_{i,beta}^* X_{i,j}^*
  std::vector<std::vector<DenseOp>> star(static_cast<std::size_t>(spec.k));
  for (int i = 0; i < spec.k; ++i) {
    const auto& words = fock.factor_words(i);
    auto& tab = star[static_cast<std::size_t>(i)];
    tab.assign(words.size(), DenseOp());
    tab[0] = DenseOp::Identity(n, n);
    const auto children = left_children(fock, i);
    for (std::size_t w = 0; w < words.size(); ++w) {
      for (std::size_t j = 0; j < children[w].size(); ++j) {
        const std::int64_t child = children[w][j];
        if (child < 0) continue;
        tab[static_cast<std::size_t>(child)] = tab[w] * x.x[static_cast<std::size_t>(i)][j].adjoint();
      }
    }
  }

  const auto f = static_cast<Eigen::Index>(fock.size());
  ker.blocks = DenseOp::Zero(f, n * n);
  for (std::size_t b = 0; b < fock.size(); ++b) {
    // X_beta^* = X_{1,beta_1}^* ... X_{k,beta_k}^*
    DenseOp prod = star[0][fock.word_index(b, 0)];
    for (int i = 1; i < spec.k; ++i) prod = prod * star[static_cast<std::size_t>(i)][fock.word_index(b, i)];
    const double scale = std::sqrt(static_cast<double>(weight_b(spec, fock.entry(b))));
    const DenseOp kb = scale * ker.defect_root * prod;
    for (Eigen::Index c = 0; c < n; ++c)
      for (Eigen::Index r = 0; r < n; ++r) ker.blocks(static_cast<Eigen::Index>(b), r + n * c) = kb(r, c);
  }
  return ker;
}

double intertwining_residual(const BerezinKernel& kernel, const PointTuple& x) {
  const auto& fock = kernel.fock;
  const Eigen::Index n = kernel.dim;
  const DenseOp kmat = kernel.matrix();
  std::vector<int> guard(static_cast<std::size_t>(fock.factors()), 1);
  double worst = 0.0;
  for (int i = 1; i <= fock.factors(); ++i) {
    for (int j = 1; j <= fock.spec().n[static_cast<std::size_t>(i - 1)]; ++j) {
      const SparseOp w = left_creation(fock, i, j);
      const DenseOp lhs = kmat * x.x[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)].adjoint();
      // (W^* kron I_H) K, with rows beta * dH + h
      DenseOp rhs = DenseOp::Zero(lhs.rows(), lhs.cols());
      for (Eigen::Index col = 0; col < w.outerSize(); ++col)
        for (SparseOp::InnerIterator it(w, col); it; ++it)
          rhs.block(it.col() * n, 0, n, n) += std::conj(it.value()) * kmat.block(it.row() * n, 0, n, n);
      for (std::size_t b = 0; b < fock.size(); ++b) {
        if (!fock.in_interior(b, guard)) continue;
        const auto row = static_cast<Eigen::Index>(b) * n;
        worst = std::max(worst, (lhs.block(row, 0, n, n) - rhs.block(row, 0, n, n)).cwiseAbs().maxCoeff());
      }
    }
  }
  return worst;
}

DenseOp berezin_transform(const BerezinKernel& kernel, const TruncationSpec& model, const DenseOp& t) {
  const auto f = static_cast<Eigen::Index>(kernel.fock.size());
  if (static_cast<Eigen::Index>(model.fock_dim()) != f) throw std::invalid_argument("berezin_transform: spec mismatch");
  const int d = model.d;
  if (t.rows() != f * d || t.cols() != f * d) throw std::invalid_argument("berezin_transform: dimension mismatch");
  const Eigen::Index n = kernel.dim;

  // rows of K with a nonzero block; nilpotent points leave most of them empty
  std::vector<Eigen::Index> support;
  for (Eigen::Index b = 0; b < f; ++b)
    if (kernel.blocks.row(b).cwiseAbs().maxCoeff() > 0.0) support.push_back(b);
  const auto s = static_cast<Eigen::Index>(support.size());
  DenseOp ks(s, n * n);
  for (Eigen::Index r = 0; r < s; ++r) ks.row(r) = kernel.blocks.row(support[static_cast<std::size_t>(r)]);

  DenseOp out = DenseOp::Zero(d * n, d * n);
  DenseOp tsub(s, s);
  for (int a = 0; a < d; ++a) {
    for (int b = 0; b < d; ++b) {
      for (Eigen::Index c = 0; c < s; ++c)
        for (Eigen::Index r = 0; r < s; ++r)
          tsub(r, c) = t(a * f + support[static_cast<std::size_t>(r)], b * f + support[static_cast<std::size_t>(c)]);
      const DenseOp m = tsub * ks;  // rows beta: block sum_beta' T(beta, beta') K_beta'
      DenseOp acc = DenseOp::Zero(n, n);
      for (Eigen::Index r = 0; r < s; ++r) {
        const Stride stride(n * s, s);
        const Eigen::Map<const DenseOp, 0, Stride> kb(ks.data() + r, n, n, stride);
        const Eigen::Map<const DenseOp, 0, Stride> mb(m.data() + r, n, n, stride);
        acc.noalias() += kb.adjoint() * mb;
      }
      out.block(a * n, b * n, n, n) = acc;
    }
  }
  return out;
}

DenseOp eval_symbol(const Symbol& symbol, const PointTuple& x) {
  const int d = symbol.spec.d;
  const Eigen::Index n = x.dim;
  if (x.factors() != symbol.spec.k) throw std::invalid_argument("eval_symbol: factor count mismatch");
  std::map<std::pair<int, Word>, DenseOp> words;
  auto product = [&](int i, const Word& w) -> const DenseOp& {
    auto it = words.find({i, w});
    if (it == words.end()) it = words.emplace(std::make_pair(i, w), word_product(x, i, w)).first;
    return it->second;
  };
  DenseOp out = DenseOp::Zero(d * n, d * n);
  for (const auto& [key, coef] : symbol.coeffs) {
    DenseOp xa = product(0, key.first[0]);
    DenseOp xb = product(0, key.second[0]);
    for (int i = 1; i < x.factors(); ++i) {
      xa = xa * product(i, key.first[static_cast<std::size_t>(i)]);
      xb = xb * product(i, key.second[static_cast<std::size_t>(i)]);
    }
    const DenseOp mono = xa * xb.adjoint();
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) out.block(a * n, b * n, n, n) += coef(a, b) * mono;
  }
  return out;
}

PointTuple radial_model(const TruncationSpec& spec, double r) {
  if (!(r >= 0.0 && r < 1.0)) throw std::domain_error("radial_model: r must lie in [0, 1)");
  const GradedBasis fock(fock_spec(spec));
  PointTuple out;
  out.dim = static_cast<Eigen::Index>(fock.size());
  out.pure = true;
  for (const auto& factor : left_tuple(fock)) {
    std::vector<DenseOp> row;
    for (const auto& w : factor) row.push_back(r * DenseOp(w));
    out.x.push_back(std::move(row));
  }
  return out;
}

PointTuple random_pure_point(const TruncationSpec& spec, Eigen::Index dim, double rho, Rng& rng) {
  if (dim < 1) throw std::invalid_argument("random_pure_point: dim must be >= 1");
  if (!(rho >= 0.0 && rho < 1.0)) throw std::domain_error("random_pure_point: rho must lie in [0, 1)");
  const Eigen::HouseholderQR<DenseOp> qr(random_dense(dim, dim, rng));
  const DenseOp frame = qr.householderQ();

  PointTuple base;
  base.dim = dim;
  OperatorTuple<DenseOp> scalars;
  for (int i = 0; i < spec.k; ++i) {
    const int ni = spec.n[static_cast<std::size_t>(i)];
    // scalar parts c_j with sum |c_j|^2 = rho
    std::vector<Complex> c(static_cast<std::size_t>(ni));
    double norm2 = 0.0;
    for (auto& v : c) {
      v = rng.complex_normal();
      norm2 += std::norm(v);
    }
    std::vector<DenseOp> nil, scal;
    for (int j = 0; j < ni; ++j) {
      DenseOp nj = DenseOp::Zero(dim, dim);
      if (i == 0) {
        for (Eigen::Index col = 1; col < dim; ++col)
          for (Eigen::Index row = 0; row < col; ++row) nj(row, col) = rng.complex_normal();
      } else if (dim > 1) {
        nj(0, dim - 1) = rng.complex_normal();
      }
      nil.push_back(nj / std::sqrt(static_cast<double>(dim * ni)));
      const Complex cj = norm2 > 0.0 ? c[static_cast<std::size_t>(j)] * std::sqrt(rho / norm2) : Complex(0.0);
      scal.push_back(cj * DenseOp::Identity(dim, dim));
    }
    base.x.push_back(std::move(nil));
    scalars.push_back(std::move(scal));
  }

  double shrink = 1.0;
  for (int attempt = 0; attempt < 60; ++attempt, shrink *= 0.5) {
    PointTuple p;
    p.dim = dim;
    p.pure = rho < kPurityThreshold;
    for (std::size_t i = 0; i < base.x.size(); ++i) {
      std::vector<DenseOp> row;
      for (std::size_t j = 0; j < base.x[i].size(); ++j)
        row.push_back(frame * (shrink * base.x[i][j] + scalars[i][j]) * frame.adjoint());
      p.x.push_back(std::move(row));
    }
    if (membership(p, spec)) return p;
  }
  throw std::domain_error("random_pure_point: no member found for rho = " + std::to_string(rho));
}

ClassicalModel bergman_shift(int m, int L) {
  ClassicalModel model{GradedBasis(TruncationSpec{1, {1}, {m}, {L}, 1}), {}};
  model.shifts.push_back(left_creation(model.basis, 1, 1));
  return model;
}

ClassicalModel hardy_polydisc(int k, int L) {
  TruncationSpec spec{k, std::vector<int>(static_cast<std::size_t>(k), 1), std::vector<int>(static_cast<std::size_t>(k), 1),
                      std::vector<int>(static_cast<std::size_t>(k), L), 1};
  ClassicalModel model{GradedBasis(spec), {}};
  for (int i = 1; i <= k; ++i) model.shifts.push_back(left_creation(model.basis, i, 1));
  return model;
}

double louhichi_olofsson_residual(const ClassicalModel& model, const DenseOp& t) {
  const auto& spec = model.basis.spec();
  if (spec.k != 1 || spec.n[0] != 1) throw std::invalid_argument("louhichi_olofsson_residual: needs k = n = 1");
  const int m = spec.m[0];
  const DenseOp mm(model.shifts[0]);
  const Eigen::Index dim = mm.rows();
  // M^* M is diagonal; pseudo-inverse on its nonzero entries
  const Eigen::VectorXcd gram = (mm.adjoint() * mm).diagonal();
  Eigen::VectorXcd inv(dim);
  for (Eigen::Index r = 0; r < dim; ++r) inv(r) = std::abs(gram(r)) > 0.0 ? 1.0 / gram(r) : Complex(0.0);
  const DenseOp dual = mm * inv.asDiagonal();

  DenseOp rhs = DenseOp::Zero(dim, dim);
  DenseOp power = DenseOp::Identity(dim, dim);
  double binom = m;
  for (int s = 0; s < m; ++s) {
    rhs += (s % 2 == 0 ? binom : -binom) * (power * t * power.adjoint());
    power = mm * power;
    binom = binom * (m - s - 1) / (s + 2);
  }
  const DenseOp lhs = dual.adjoint() * t * dual;
  const auto mask = interior_mask(model.basis, GuardBand{{std::min(m + 1, spec.L[0])}});
  return interior_max_abs(mask, lhs - rhs);
}

double hardy_toeplitz_residual(const ClassicalModel& model, const DenseOp& t) {
  std::vector<int> guard(static_cast<std::size_t>(model.basis.factors()), 1);
  const auto mask = interior_mask(model.basis, GuardBand{guard});
  double worst = 0.0;
  for (const auto& s : model.shifts) {
    const DenseOp ms(s);
    worst = std::max(worst, interior_max_abs(mask, ms.adjoint() * t * ms - t));
  }
  return worst;
}

std::vector<DenseOp> free_right_shift_blocks(const GradedBasis& basis, const DenseOp& t) {
  const auto& spec = basis.spec();
  if (spec.k != 1 || spec.m[0] != 1) throw std::invalid_argument("free_right_shift_blocks: needs k = 1, m = 1");
  const int n = spec.n[0];
  const auto f = static_cast<Eigen::Index>(basis.size());
  const int d = spec.d;
  std::vector<DenseOp> shifts;
  for (int j = 1; j <= n; ++j) {
    DenseOp r = DenseOp::Zero(f * d, f * d);
    for (std::size_t b = 0; b < basis.size(); ++b) {
      const Word& w = basis.factor_words(0)[basis.word_index(b, 0)];
      if (w.length() >= static_cast<std::size_t>(spec.L[0])) continue;
      const auto target = static_cast<Eigen::Index>(basis.index_of({concat(w, Word::generator(n, j))}));
      for (int c = 0; c < d; ++c) r(c * f + target, c * f + static_cast<Eigen::Index>(b)) = 1.0;
    }
    shifts.push_back(std::move(r));
  }
  std::vector<DenseOp> out;
  for (int j = 0; j < n; ++j)
    for (int l = 0; l < n; ++l) {
      DenseOp block = shifts[static_cast<std::size_t>(j)].adjoint() * t * shifts[static_cast<std::size_t>(l)];
      if (j == l) block -= t;
      out.push_back(std::move(block));
    }
  return out;
}

}  // namespace polyball

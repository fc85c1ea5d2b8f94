#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "polyball/berezin.hpp"

using namespace polyball;

namespace {

TruncationSpec make(int k, std::vector<int> n, std::vector<int> m, std::vector<int> L, int d = 1) {
  TruncationSpec s;
  s.k = k;
  s.n = std::move(n);
  s.m = std::move(m);
  s.L = std::move(L);
  s.d = d;
  return s;
}

double max_abs(const DenseOp& a) { return a.size() ? a.cwiseAbs().maxCoeff() : 0.0; }
double max_of(const std::vector<double>& v) { return *std::max_element(v.begin(), v.end()); }

PointTuple scalar_point(const std::vector<std::vector<Complex>>& v) {
  PointTuple x;
  x.dim = 1;
  for (const auto& f : v) {
    std::vector<DenseOp> row;
    for (Complex c : f) row.push_back(DenseOp::Constant(1, 1, c));
    x.x.push_back(std::move(row));
  }
  return x;
}

PointTuple zero_point(const TruncationSpec& s, Eigen::Index dim) {
  PointTuple x;
  x.dim = dim;
  for (int i = 0; i < s.k; ++i)
    x.x.emplace_back(static_cast<std::size_t>(s.n[static_cast<std::size_t>(i)]), DenseOp::Zero(dim, dim));
  return x;
}

// Taylor coefficients of (1 - x)^{-m} by repeated convolution with the geometric series.
std::vector<double> kernel_coefficients(int m, int len) {
  std::vector<double> c(static_cast<std::size_t>(len + 1), 0.0);
  c[0] = 1.0;
  for (int t = 0; t < m; ++t)
    for (std::size_t j = 1; j < c.size(); ++j) c[j] += c[j - 1];
  return c;
}

const std::vector<TruncationSpec>& specs() {
  static const std::vector<TruncationSpec> all{make(1, {1}, {2}, {8}), make(1, {2}, {2}, {5}, 2),
                                               make(2, {1, 1}, {1, 2}, {6, 6}), make(2, {2, 1}, {2, 1}, {4, 4})};
  return all;
}

}  // namespace

TEST_CASE("membership") {
  for (const auto& s : specs()) {
    CHECK(membership(zero_point(s, 2), s));
    for (double r : {0.0, 0.3, 0.9}) CHECK(membership(radial_model(s, r), s));
  }
  const auto s = make(1, {2}, {1}, {4});
  CHECK_FALSE(membership(scalar_point({{0.9, 0.6}}), s));
  CHECK(membership(scalar_point({{0.6, 0.6}}), s));

  const auto two = make(2, {1, 1}, {1, 1}, {3, 3});
  PointTuple bad;
  bad.dim = 2;
  DenseOp a(2, 2), b(2, 2);
  a << 0.0, 0.1, 0.0, 0.0;
  b << 0.0, 0.0, 0.1, 0.0;
  bad.x = {{a}, {b}};
  CHECK(cross_commutator(bad) > 1e-3);
  CHECK_THROWS_AS(membership(bad, two), std::domain_error);
  CHECK_THROWS_AS(membership(scalar_point({{0.1}}), s), std::domain_error);
}

TEST_CASE("purity") {
  const auto s = make(2, {2, 1}, {2, 1}, {3, 3});
  for (double r : purity(zero_point(s, 3))) CHECK(r == 0.0);
  const auto half = purity(scalar_point({{0.5}}));
  CHECK(std::abs(half[0] - 0.25) < 1e-12);
  CHECK(is_pure(half));
  CHECK_FALSE(is_pure({0.5, 1.0}));
  for (double r : purity(radial_model(s, 0.7))) CHECK(r < 1e-6);
}

TEST_CASE("kernel at the origin") {
  const auto s = make(2, {2, 1}, {2, 1}, {3, 3});
  const auto x = zero_point(s, 2);
  const BerezinKernel k = berezin_kernel(x, s);
  const DenseOp km = k.matrix();
  DenseOp expect = DenseOp::Zero(km.rows(), km.cols());
  expect.topRows(2) = DenseOp::Identity(2, 2);
  CHECK(max_abs(km - expect) == 0.0);
  CHECK(k.defect_rank == 2);

  // The transform at the origin compresses T to the vacuum block.
  Rng rng(3);
  const auto n = static_cast<Eigen::Index>(s.model_dim());
  const DenseOp t = random_dense(n, n, rng);
  const DenseOp bt = berezin_transform(k, s, t);
  CHECK(std::abs(bt(0, 0) - t(0, 0)) < 1e-15);
  CHECK(std::abs(bt(1, 1) - t(0, 0)) < 1e-15);
  CHECK(bt(0, 1) == Complex(0.0));
}

TEST_CASE("scalar kernels against the reproducing kernel series") {
  for (int m = 1; m <= 3; ++m)
    for (double rho : {0.25, 0.04, 1e-3}) {
      const auto s = make(1, {1}, {m}, {8});
      const auto x = scalar_point({{std::sqrt(rho)}});
      const BerezinKernel k = berezin_kernel(x, s);
      const auto c = kernel_coefficients(m, 8);
      double partial = 0.0;
      for (int j = 0; j <= 8; ++j) partial += c[static_cast<std::size_t>(j)] * std::pow(rho, j);
      const double expect = std::pow(1.0 - rho, m) * partial;
      CHECK(std::abs(k.gram()(0, 0).real() - expect) < 1e-14);
      CHECK(k.gram()(0, 0).real() <= 1.0 + 1e-15);
    }
}

TEST_CASE("isometry of kernels at pure points") {
  for (const auto& s : specs()) {
    for (double r : {0.0, 0.25, 0.5, 0.9}) {
      const auto x = radial_model(s, r);
      const BerezinKernel k = berezin_kernel(x, s);
      CHECK(max_abs(k.gram() - DenseOp::Identity(x.dim, x.dim)) < 1e-12);
      CHECK(intertwining_residual(k, x) < 1e-12);
    }
    Rng rng(8);
    double prev = 1.0;
    for (double rho : {1e-1, 1e-3, 1e-5}) {
      const auto x = random_pure_point(s, 2, rho, rng);
      CHECK(membership(x, s));
      // Phi has a defective eigenvalue at rho, so roundoff moves it off rho.
      for (double r : purity(x)) CHECK(r <= rho * (1.0 + 1e-4) + 1e-7);
      const BerezinKernel k = berezin_kernel(x, s);
      const double iso = max_abs(k.gram() - DenseOp::Identity(2, 2));
      const Eigen::JacobiSVD<DenseOp> svd(k.matrix());
      CHECK(svd.singularValues()(0) <= 1.0 + 1e-12);
      CHECK(iso <= prev + 1e-14);
      prev = iso;
      CHECK(intertwining_residual(k, x) < 1e-12);
    }
    CHECK(prev < 1e-8);
  }
}

TEST_CASE("non-members are rejected") {
  const auto s = make(1, {2}, {2}, {4});
  const auto x = scalar_point({{1.0, 0.5}});
  CHECK_FALSE(membership(x, s));
  CHECK_THROWS_AS(berezin_kernel(x, s), std::domain_error);
  CHECK_THROWS_AS(radial_model(s, 1.0), std::domain_error);
  CHECK_THROWS_AS(radial_model(s, -0.1), std::domain_error);
}

TEST_CASE("radial model norms") {
  const auto s = make(1, {2}, {3}, {5});
  for (double r : {0.0, 0.4, 0.8}) {
    const auto x = radial_model(s, r);
    for (const auto& op : x.x[0]) {
      const Eigen::JacobiSVD<DenseOp> svd(op);
      // Largest weight ratio b(3, q) / b(3, q + 1) sits at q = L - 1.
      CHECK(std::abs(svd.singularValues()(0) - r * std::sqrt(5.0 / 7.0)) < 1e-14);
      CHECK(svd.singularValues()(0) <= r);
    }
  }
}

TEST_CASE("symbol evaluation") {
  const auto s = make(1, {1}, {2}, {6});
  Symbol mono{s, {}};
  mono.coeffs[{{parse_word(1, "1")}, {Word::identity(1)}}] = DenseOp::Identity(1, 1);
  CHECK(std::abs(eval_symbol(mono, scalar_point({{Complex(0.3, 0.2)}}))(0, 0) - Complex(0.3, 0.2)) < 1e-16);

  const auto s2 = make(1, {2}, {2}, {5}, 2);
  const GradedBasis b(s2);
  Rng rng(12);
  const Symbol sym = random_symbol(b, rng);
  const auto e = identity_multiword(s2.n);
  const DenseOp at0 = eval_symbol(sym, zero_point(s2, 3));
  for (int a = 0; a < 2; ++a)
    for (int c = 0; c < 2; ++c)
      CHECK(max_abs(at0.block(3 * a, 3 * c, 3, 3) - sym.coeffs.at({e, e})(a, c) * DenseOp::Identity(3, 3)) < 1e-15);
}

TEST_CASE("Berezin transform of Toeplitz operators evaluates the symbol") {
  for (const auto& s : specs()) {
    const GradedBasis b(s);
    Rng rng(19);
    TruncationSpec ps = s;
    ps.d = 1;
    std::vector<PointTuple> points{radial_model(ps, 0.5), random_pure_point(s, 2, 1e-5, rng)};
    for (const auto& x : points) {
      const BerezinKernel k = berezin_kernel(x, s);
      const auto n = static_cast<Eigen::Index>(s.model_dim());
      CHECK(max_abs(berezin_transform(k, s, DenseOp::Identity(n, n)) -
                    DenseOp::Identity(s.d * x.dim, s.d * x.dim)) < 1e-8);
      for (int t = 0; t < 3; ++t) {
        const Symbol sym = random_symbol(b, rng);
        CHECK(max_abs(berezin_transform(k, s, reconstruct(b, sym)) - eval_symbol(sym, x)) < 1e-8);
      }
    }
  }
}

TEST_CASE("Bergman shift") {
  const auto one = bergman_shift(1, 6);
  Rng rng(1);
  const DenseOp t = reconstruct(one.basis, random_symbol(one.basis, rng));
  CHECK(louhichi_olofsson_residual(one, t) < 1e-12);
  const DenseOp s = DenseOp(one.shifts[0]);
  const auto mask = interior_mask(one.basis, GuardBand{{1}});
  CHECK(interior_max_abs(mask, DenseOp(s.adjoint() * t * s - t)) < 1e-12);

  const auto two = bergman_shift(2, 6);
  CHECK(louhichi_olofsson_residual(two, DenseOp::Identity(7, 7)) < 1e-12);
  DenseOp diag = DenseOp::Zero(7, 7);
  for (int j = 0; j < 7; ++j) diag(j, j) = std::pow(2.0, j);
  CHECK(louhichi_olofsson_residual(two, diag) > 1e-3);
  CHECK(max_of(brown_halmos_residual(two.basis, diag)) > 1e-3);
}

TEST_CASE("Hardy polydisc") {
  for (int k = 1; k <= 3; ++k) {
    const auto model = hardy_polydisc(k, 3);
    const auto n = static_cast<Eigen::Index>(model.basis.size());
    CHECK(hardy_toeplitz_residual(model, DenseOp::Identity(n, n)) < 1e-15);
  }
  const auto model = hardy_polydisc(2, 4);
  const DenseOp t = DenseOp(model.shifts[0]) + DenseOp(model.shifts[1]).adjoint();
  CHECK(hardy_toeplitz_residual(model, t) < 1e-15);
  CHECK(is_weighted_multi_toeplitz(model.basis, t, 1e-12).is_toeplitz);
  const auto n = static_cast<Eigen::Index>(model.basis.size());
  DenseOp bad = DenseOp::Zero(n, n);
  bad(1, 0) = 1.0;
  CHECK(hardy_toeplitz_residual(model, bad) > 0.5);
}

TEST_CASE("weighted Fock norms match the reproducing kernel") {
  for (int m = 1; m <= 4; ++m) {
    const auto s = make(1, {1}, {m}, {10});
    const GradedBasis b(s);
    const DenseOp g = to_weighted_fock_conjugate(b, DenseOp::Identity(11, 11));
    const auto c = kernel_coefficients(m, 10);
    for (int j = 0; j <= 10; ++j) CHECK(std::abs(g(j, j).real() - 1.0 / c[static_cast<std::size_t>(j)]) < 1e-15);
  }
  const auto s = make(2, {1, 1}, {2, 3}, {4, 4});
  const GradedBasis b(s);
  const auto n = static_cast<Eigen::Index>(b.size());
  const DenseOp g = to_weighted_fock_conjugate(b, DenseOp::Identity(n, n));
  const auto c1 = kernel_coefficients(2, 4), c2 = kernel_coefficients(3, 4);
  for (std::size_t e = 0; e < b.size(); ++e) {
    const auto d1 = static_cast<std::size_t>(b.degree(e, 0)), d2 = static_cast<std::size_t>(b.degree(e, 1));
    CHECK(std::abs(g(static_cast<Eigen::Index>(e), static_cast<Eigen::Index>(e)).real() - 1.0 / (c1[d1] * c2[d2])) < 1e-15);
  }
}

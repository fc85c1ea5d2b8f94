// Acceptance run: one PASS/FAIL line per criterion.

#include <Eigen/QR>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "polyball/suites.hpp"

using namespace polyball;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

TruncationSpec make(int k, std::vector<int> n, std::vector<int> m, std::vector<int> L, int d) {
  TruncationSpec s;
  s.k = k;
  s.n = std::move(n);
  s.m = std::move(m);
  s.L = std::move(L);
  s.d = d;
  s.validate();
  return s;
}

std::vector<TruncationSpec> grid_specs(int d) {
  return {make(1, {1}, {1}, {8}, d),       make(1, {1}, {2}, {8}, d),           make(1, {1}, {3}, {8}, d),
          make(1, {2}, {2}, {5}, d),       make(2, {1, 1}, {1, 1}, {6, 6}, d), make(2, {2, 2}, {2, 1}, {4, 4}, d)};
}

std::vector<TruncationSpec> grid() {
  std::vector<TruncationSpec> out;
  for (int d : {1, 2})
    for (auto& s : grid_specs(d)) out.push_back(s);
  return out;
}

const std::vector<std::uint64_t> kSeeds{1, 2, 3};

int failures = 0;

void line(int id, bool pass, const std::string& title, const std::string& summary) {
  std::printf("%s criterion %2d  %s: %s\n", pass ? "PASS" : "FAIL", id, title.c_str(), summary.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(const char* f, double a) {
  char buf[96];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

double check_residual(const Report& r, const std::string& name) {
  for (const auto& c : r.checks)
    if (c.name == name) return c.residual;
  throw std::logic_error("missing check " + name);
}

std::vector<Report> verify_reports;
std::vector<double> verify_seconds;

void criterion_1() {
  double worst = 0.0, slowest = 0.0;
  for (const auto& s : grid()) {
    const auto t0 = Clock::now();
    verify_reports.push_back(verify_suite(s));
    const double sec = seconds_since(t0);
    verify_seconds.push_back(sec);
    slowest = std::max(slowest, sec);
    for (const char* n : {"cauchy_dual_left_inverse", "cauchy_dual_range_projection", "cauchy_dual_defect",
                          "cauchy_dual_psi_column", "isometry_defect"})
      worst = std::max(worst, check_residual(verify_reports.back(), n));
  }
  line(1, worst < 1e-10 && slowest < 10.0, "Cauchy dual identities on the guard-band interior",
       fmt("max residual %.2e", worst) + fmt(", slowest point %.2f s", slowest));
}

void criterion_2() {
  double worst = 0.0;
  for (const auto& r : verify_reports) worst = std::max(worst, check_residual(r, "defect_identity_left"));
  line(2, worst < 1e-10, "defect identity Delta_W^m(I) = P_C, guard band m", fmt("max residual %.2e", worst));
}

double max_of(const std::vector<double>& v) { return *std::max_element(v.begin(), v.end()); }

void criterion_3() {
  double worst = 0.0;
  int count = 0;
  for (const auto& s : grid()) {
    const GradedBasis basis(s);
    for (auto seed : kSeeds) {
      Rng rng(seed);
      for (int c = 0; c < 20; ++c, ++count)
        worst = std::max(worst, max_of(brown_halmos_residual(basis, reconstruct(basis, random_monomial(basis, rng)))));
    }
  }
  line(3, worst < 1e-10, "Brown-Halmos residual of monomials C (x) W_alpha W_beta^*",
       std::to_string(count) + fmt(" monomials, max residual %.2e", worst));
}

// Criteria 4 and 11 share the operators.
void criteria_4_and_11() {
  int disagreements = 0, toeplitz_failures = 0, dense_failures = 0, mu_disagreements = 0, total = 0;
  double toe_bh = 0.0, toe_ratio = 0.0, dense_bh_min = 1e300, mu_residual = 0.0;
  for (const auto& s : grid()) {
    const GradedBasis basis(s);
    const auto dim = static_cast<Eigen::Index>(s.model_dim());
    for (auto seed : kSeeds) {
      Rng rng(seed);
      for (int c = 0; c < 200; ++c, ++total) {
        const bool structured = c < 100;
        const DenseOp t = structured ? reconstruct(basis, random_symbol(basis, rng)) : random_dense(dim, dim, rng);
        const ToeplitzReport tr = is_weighted_multi_toeplitz(basis, t, 1e-10);
        const double bh = max_of(brown_halmos_residual(basis, t));
        const bool bh_pass = bh < 1e-10;
        if (tr.is_toeplitz != bh_pass) ++disagreements;
        if (structured) {
          toe_bh = std::max(toe_bh, bh);
          toe_ratio = std::max({toe_ratio, tr.max_ratio_residual, tr.max_offdomain_entry});
          if (!tr.is_toeplitz || !bh_pass) ++toeplitz_failures;
        } else {
          dense_bh_min = std::min(dense_bh_min, bh);
          if (tr.is_toeplitz || !tr.witness || bh <= 1e-3) ++dense_failures;
        }
        const ToeplitzReport mr =
            is_weighted_multi_toeplitz(basis, to_weighted_fock_conjugate(basis, t), 1e-10, ToeplitzWeights::Mu);
        if (mr.is_toeplitz != tr.is_toeplitz) ++mu_disagreements;
        if (tr.is_toeplitz) mu_residual = std::max({mu_residual, mr.max_ratio_residual, mr.max_offdomain_entry});
      }
    }
  }
  line(4, disagreements == 0 && toeplitz_failures == 0 && dense_failures == 0,
       "Toeplitz criterion versus Brown-Halmos equations",
       std::to_string(total) + " operators, " + std::to_string(disagreements) + " disagreements; structured: " +
           fmt("BH %.2e", toe_bh) + fmt(", ratio %.2e", toe_ratio) + ", " + std::to_string(toeplitz_failures) +
           " failures; dense: " + fmt("min BH %.2e", dense_bh_min) + ", " + std::to_string(dense_failures) +
           " failures");
  line(11, mu_disagreements == 0 && mu_residual < 1e-10, "mu-criterion after weighted Fock conjugation",
       std::to_string(total) + " operators, " + std::to_string(mu_disagreements) + " verdict disagreements" +
           fmt(", max mu residual on Toeplitz instances %.2e", mu_residual));
}

void criterion_5() {
  double worst = 0.0;
  int count = 0;
  for (const auto& s : grid()) {
    const GradedBasis basis(s);
    for (auto seed : kSeeds) {
      Rng rng(seed);
      for (int c = 0; c < 100; ++c, ++count) {
        // Alternate full and interior supports.
        const Symbol sym = random_symbol(basis, rng, c % 2 ? SymbolSupport::Interior : SymbolSupport::Full);
        worst = std::max(worst, symbol_distance(extract_symbol(basis, reconstruct(basis, sym)), sym));
      }
    }
  }
  line(5, worst < 1e-12, "symbol round trip extract o reconstruct",
       std::to_string(count) + fmt(" symbols, max distance %.2e", worst));
}

void criterion_6() {
  double quad = 0.0, sum_err = 0.0, excess = 0.0;
  std::size_t shifts = 0;
  for (const auto& s : grid()) {
    const GradedBasis basis(s);
    const auto dim = static_cast<Eigen::Index>(s.model_dim());
    std::vector<int> samples(s.L.size());
    for (std::size_t i = 0; i < samples.size(); ++i) samples[i] = 2 * s.L[i] + 1;
    for (auto seed : kSeeds) {
      Rng rng(seed);
      const DenseOp t = random_dense(dim, dim, rng);
      const double t_max = t.cwiseAbs().maxCoeff();
      DenseOp sum = DenseOp::Zero(dim, dim);
      for (const auto& shift : all_shifts(s)) {
        const DenseOp ts = homogeneous_part_projection(basis, t, shift);
        quad = std::max(quad, (ts - homogeneous_part_quadrature(basis, t, shift, samples)).cwiseAbs().maxCoeff());
        excess = std::max(excess, ts.cwiseAbs().maxCoeff() - t_max);
        sum += ts;
        ++shifts;
      }
      sum_err = std::max(sum_err, (sum - t).cwiseAbs().maxCoeff());
    }
  }
  line(6, quad < 1e-12 && sum_err == 0.0 && excess <= 1e-12, "homogeneous decomposition",
       std::to_string(shifts) + fmt(" parts, projection vs quadrature %.2e", quad) +
           fmt(", |sum T_s - T| %.2e", sum_err) + fmt(", max(|T_s| - |T|) %.2e", excess));
}

void criterion_7() {
  bool monotone = true;
  double worst_ratio = 0.0;
  for (const auto& s : grid()) {
    const GradedBasis basis(s);
    for (auto seed : kSeeds) {
      Rng rng(seed);
      const DenseOp t = reconstruct(basis, random_symbol(basis, rng));
      double prev = 1e300, last = 0.0;
      for (int f : {1, 2, 4, 8}) {
        std::vector<int> order(s.L);
        for (auto& v : order) v *= f;
        last = (fejer_sum(basis, t, order) - t).cwiseAbs().maxCoeff();
        monotone = monotone && last <= prev;
        prev = last;
      }
      worst_ratio = std::max(worst_ratio, last / t.cwiseAbs().maxCoeff());
    }
  }
  line(7, monotone && worst_ratio < 0.2, "Fejer means at N = L, 2L, 4L, 8L",
       std::string(monotone ? "monotone" : "NOT monotone") + fmt(", max error / |T| at 8L %.3f", worst_ratio));
}

constexpr double kPointRho = 1e-5;

void criterion_8() {
  const auto t0 = Clock::now();
  double iso = 0.0, inter = 0.0, kk = 0.0, radius = 0.0;
  int points = 0;
  bool all_pure = true;
  for (const auto& s : grid()) {
    const GradedBasis basis(s);
    std::vector<PointTuple> pts;
    TruncationSpec ps = s;
    ps.d = 1;
    // The largest grid spec uses a radial point on a coarser truncation.
    if (s.k == 2 && s.n[0] == 2) ps.L = {2, 2};
    for (double r : {0.0, 0.25, 0.5}) pts.push_back(radial_model(ps, r));
    Rng rng(static_cast<std::uint64_t>(s.d));
    for (int c = 0; c < 5; ++c) pts.push_back(random_pure_point(s, 1 + c % 3, kPointRho, rng));
    for (const auto& x : pts) {
      ++points;
      if (!membership(x, s)) throw std::runtime_error("acceptance: generated point is not a member");
      const auto radii = purity(x);
      all_pure = all_pure && is_pure(radii);
      radius = std::max(radius, max_of(radii));
      const BerezinKernel kernel = berezin_kernel(x, s);
      iso = std::max(iso, (kernel.gram() - DenseOp::Identity(x.dim, x.dim)).cwiseAbs().maxCoeff());
      inter = std::max(inter, intertwining_residual(kernel, x));
      for (int c = 0; c < 10; ++c) {
        const Symbol sym = random_symbol(basis, rng);
        kk = std::max(kk, (berezin_transform(kernel, s, reconstruct(basis, sym)) - eval_symbol(sym, x))
                              .cwiseAbs()
                              .maxCoeff());
      }
    }
  }
  const double sec = seconds_since(t0);
  line(8, all_pure && radius <= 0.25 && iso < 1e-8 && inter < 1e-8 && kk < 1e-8 && sec < 60.0, "Berezin kernel suite",
       std::to_string(points) + fmt(" points, max rho(Phi) %.1e", radius) + fmt(", |K*K - I| %.2e", iso) +
           fmt(", intertwining %.2e", inter) + fmt(", transform vs symbol %.2e", kk) + fmt(", %.1f s", sec));
}

DenseOp pinv(const DenseOp& a) { return Eigen::CompleteOrthogonalDecomposition<DenseOp>(a).pseudoInverse(); }

void criterion_9() {
  // (a) m = 1, k = 1: weighted and unweighted right shifts give the same blocks.
  double a_gap = 0.0;
  for (auto s : {make(1, {1}, {1}, {8}, 1), make(1, {2}, {1}, {5}, 1), make(1, {3}, {1}, {4}, 2)}) {
    const GradedBasis basis(s);
    const auto mask = interior_mask(basis, brown_halmos_guard(s, 1));
    for (auto seed : kSeeds) {
      Rng rng(seed);
      for (int c = 0; c < 2; ++c) {
        const auto dim = static_cast<Eigen::Index>(s.model_dim());
        const DenseOp t = c == 0 ? reconstruct(basis, random_symbol(basis, rng)) : random_dense(dim, dim, rng);
        const auto bh = brown_halmos_blocks(basis, t, 1);
        const auto free = free_right_shift_blocks(basis, t);
        for (std::size_t b = 0; b < bh.size(); ++b) a_gap = std::max(a_gap, interior_max_abs(mask, DenseOp(bh[b] - free[b])));
      }
    }
  }
  // (b) k = 1, n = 1, m = 2: the Bergman shift with its Cauchy dual.
  double b_gap = 0.0, b_toe = 0.0;
  {
    const auto s = make(1, {1}, {2}, {8}, 1);
    const GradedBasis basis(s);
    const ClassicalModel model = bergman_shift(2, 8);
    const DenseOp m = model.shifts[0];
    const DenseOp md = m * pinv(m.adjoint() * m);
    const auto mask = interior_mask(basis, brown_halmos_guard(s, 1));
    for (auto seed : kSeeds) {
      Rng rng(seed);
      for (int c = 0; c < 2; ++c) {
        const auto dim = static_cast<Eigen::Index>(s.model_dim());
        const DenseOp t = c == 0 ? reconstruct(basis, random_symbol(basis, rng)) : random_dense(dim, dim, rng);
        const DenseOp lo = md.adjoint() * t * md - (2.0 * t - m * t * m.adjoint());
        b_gap = std::max(b_gap, interior_max_abs(mask, DenseOp(brown_halmos_blocks(basis, t, 1)[0] - lo)));
        if (c == 0) b_toe = std::max(b_toe, louhichi_olofsson_residual(model, t));
      }
    }
  }
  // (c) n_i = m_i = 1: the polydisc shifts.
  double c_gap = 0.0, c_toe = 0.0;
  for (auto s : {make(1, {1}, {1}, {8}, 1), make(2, {1, 1}, {1, 1}, {6, 6}, 1), make(2, {1, 1}, {1, 1}, {5, 5}, 2),
                 make(3, {1, 1, 1}, {1, 1, 1}, {3, 3, 3}, 1)}) {
    const GradedBasis basis(s);
    const ClassicalModel model = hardy_polydisc(s.k, s.L[0]);
    for (auto seed : kSeeds) {
      Rng rng(seed);
      for (int c = 0; c < 2; ++c) {
        const auto dim = static_cast<Eigen::Index>(s.model_dim());
        const DenseOp t = c == 0 ? reconstruct(basis, random_symbol(basis, rng)) : random_dense(dim, dim, rng);
        for (int i = 1; i <= s.k; ++i) {
          const auto mask = interior_mask(basis, brown_halmos_guard(s, i));
          const DenseOp z = model.shifts[static_cast<std::size_t>(i - 1)];
          DenseOp zz = DenseOp::Zero(dim, dim);
          const auto f = static_cast<Eigen::Index>(basis.size());
          for (int a = 0; a < s.d; ++a) zz.block(a * f, a * f, f, f) = z;
          const DenseOp hardy = zz.adjoint() * t * zz - t;
          c_gap = std::max(c_gap, interior_max_abs(mask, DenseOp(brown_halmos_blocks(basis, t, i)[0] - hardy)));
        }
        if (c == 0 && s.d == 1) c_toe = std::max(c_toe, hardy_toeplitz_residual(model, t));
      }
    }
  }
  line(9, a_gap < 1e-10 && b_gap < 1e-10 && b_toe < 1e-10 && c_gap < 1e-10 && c_toe < 1e-10, "classical reductions",
       fmt("(a) free shift gap %.2e", a_gap) + fmt(", (b) Bergman gap %.2e", b_gap) +
           fmt(" with Toeplitz residual %.2e", b_toe) + fmt(", (c) polydisc gap %.2e", c_gap) +
           fmt(" with Toeplitz residual %.2e", c_toe));
}

void criterion_10() {
  const auto s = make(1, {1}, {2}, {1}, 1);
  const MultiWord sigma{parse_word(1, "1")}, beta{Word::identity(1)};
  const double base = tau(s, sigma, beta).value();
  const double limit = std::sqrt(static_cast<double>(weight_b(2, 1)));
  std::vector<double> err(65, 0.0);
  double oracle_gap = 0.0;
  for (int t = 1; t <= 64; ++t) {
    const Word gamma(1, std::vector<int>(static_cast<std::size_t>(t), 1));
    const MultiWord w{concat(parse_word(1, "1"), gamma)}, g{gamma};
    const double ratio = tau(s, w, g).value() / base;
    oracle_gap = std::max(oracle_gap, std::abs(ratio - std::sqrt(2.0 * (t + 1.0) / (t + 2.0))));
    err[static_cast<std::size_t>(t)] = std::abs(ratio - limit) / limit;
  }
  bool decreasing = true;
  for (int t = 9; t <= 64; ++t) decreasing = decreasing && err[static_cast<std::size_t>(t)] < err[static_cast<std::size_t>(t - 1)];
  line(10, err[64] < 0.02 && decreasing && oracle_gap < 1e-12, "weight-ratio limit sqrt(b(2,1))",
       fmt("relative error at t = 64 %.4f", err[64]) + (decreasing ? ", strictly decreasing from t = 8" : ", NOT decreasing") +
           fmt(", closed-form gap %.1e", oracle_gap));
}

void timed(const char* name, const std::function<void()>& fn) {
  const auto t0 = Clock::now();
  try {
    fn();
  } catch (const std::exception& e) {
    std::printf("FAIL %s threw: %s\n", name, e.what());
    ++failures;
  }
  std::fprintf(stderr, "[%s: %.1f s]\n", name, seconds_since(t0));
}

}  // namespace

// With arguments, only the named criteria run ("5", "4", "11", ...).
int main(int argc, char** argv) {
  const std::vector<std::string> only(argv + 1, argv + argc);
  auto wanted = [&](std::initializer_list<const char*> ids) {
    if (only.empty()) return true;
    for (const char* id : ids)
      if (std::find(only.begin(), only.end(), id) != only.end()) return true;
    return false;
  };
  std::printf("acceptance grid: %zu (spec, d) points x %zu seeds, rng %s\n", grid().size(), kSeeds.size(),
              std::string(kRngName).c_str());
  if (wanted({"1"})) timed("criterion 1", criterion_1);
  if (wanted({"2"})) timed("criterion 2", criterion_2);
  if (wanted({"3"})) timed("criterion 3", criterion_3);
  if (wanted({"4", "11"})) timed("criteria 4, 11", criteria_4_and_11);
  if (wanted({"5"})) timed("criterion 5", criterion_5);
  if (wanted({"6"})) timed("criterion 6", criterion_6);
  if (wanted({"7"})) timed("criterion 7", criterion_7);
  if (wanted({"8"})) timed("criterion 8", criterion_8);
  if (wanted({"9"})) timed("criterion 9", criterion_9);
  if (wanted({"10"})) timed("criterion 10", criterion_10);
  std::printf("%s: %d failing criteria\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}

#include "polyball/suites.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>

namespace polyball {

bool Report::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.informational || c.pass; });
}

Json Report::to_json(bool timing) const {
  std::vector<const Check*> sorted;
  for (const auto& c : checks) sorted.push_back(&c);
  std::stable_sort(sorted.begin(), sorted.end(), [](const Check* a, const Check* b) { return a->name < b->name; });
  Json list = Json::array();
  for (const Check* c : sorted) {
    Json j{{"name", c->name}, {"pass", c->pass}, {"residual", c->residual}, {"guard_band", c->guard}};
    if (c->informational) j["informational"] = true;
    if (!c->detail.is_null()) j["detail"] = c->detail;
    if (timing) j["elapsed_ms"] = c->elapsed_ms;
    list.push_back(std::move(j));
  }
  Json out{{"suite", suite}, {"spec", spec_to_json(spec)}, {"seed", seed}, {"tol", tol},
           {"rng", std::string(kRngName)}, {"checks", list}, {"pass", pass()}};
  if (!detail.is_null()) out["detail"] = detail;
  return out;
}

double interior_max_abs(const std::vector<bool>& mask, const SparseOp& a) {
  double best = 0.0;
  for (Eigen::Index c = 0; c < a.outerSize(); ++c) {
    if (!mask[static_cast<std::size_t>(c)]) continue;
    for (SparseOp::InnerIterator it(a, c); it; ++it)
      if (mask[static_cast<std::size_t>(it.row())]) best = std::max(best, std::abs(it.value()));
  }
  return best;
}

namespace {

using Clock = std::chrono::steady_clock;

/// Runs `fn`, which returns the residual, and records a check against `tol`.
void run_check(Report& report, const std::string& name, std::vector<int> guard, double tol,
               const std::function<double()>& fn) {
  const auto start = Clock::now();
  const double r = fn();
  Check c;
  c.name = name;
  c.residual = r;
  c.pass = r < tol;
  c.guard = std::move(guard);
  c.elapsed_ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  report.checks.push_back(std::move(c));
}

std::vector<int> uniform_guard(int k, int g) { return std::vector<int>(static_cast<std::size_t>(k), g); }

std::vector<int> factor_guard(int k, int i0, int g) {
  std::vector<int> out(static_cast<std::size_t>(k), 0);
  out[static_cast<std::size_t>(i0)] = g;
  return out;
}

/// Model-space diagonal with value f(q), q the factor-i0 degree.
SparseOp degree_diagonal(const GradedBasis& basis, int i0, const std::function<double(int)>& f) {
  const auto fock = basis.size();
  const auto dim = static_cast<Eigen::Index>(basis.spec().model_dim());
  SparseOp out(dim, dim);
  out.reserve(Eigen::VectorXi::Constant(dim, 1));
  for (Eigen::Index r = 0; r < dim; ++r)
    out.insert(r, r) = f(basis.degree(static_cast<std::size_t>(r) % fock, i0));
  out.makeCompressed();
  return out;
}

}  // namespace

Report verify_suite(const TruncationSpec& spec, double tol) {
  spec.validate();
  for (int i = 0; i < spec.k; ++i)
    if (spec.L[static_cast<std::size_t>(i)] < spec.m[static_cast<std::size_t>(i)])
      throw std::invalid_argument("verify: L_" + std::to_string(i + 1) + " < m_" + std::to_string(i + 1) +
                                  " leaves no interior for guard band m");
  const GradedBasis basis(spec);
  Report report{"verify", spec, 0, tol, {}, {}};
  const int k = spec.k;
  const auto dim = static_cast<Eigen::Index>(spec.model_dim());
  const SparseOp id = identity_op(basis);

  std::vector<double> iso(k), dual_i(k), dual_ii(k), dual_iii(k), psi_col(k), psi_eig(k), gram(k), gram_displayed(k),
      dual_orth(k);
  for (int i0 = 0; i0 < k; ++i0) {
    const int i = i0 + 1;
    const int m = spec.m[static_cast<std::size_t>(i0)];
    const int n = spec.n[static_cast<std::size_t>(i0)];
    const auto g1 = interior_mask(basis, GuardBand{factor_guard(k, i0, 1)});
    const auto gm = interior_mask(basis, GuardBand{factor_guard(k, i0, m)});
    const auto all = interior_mask(basis, GuardBand{uniform_guard(k, 0)});

    const SparseOp d2 = degree_diagonal(basis, i0, [m](int q) { return (q + 1.0) / (q + m); });
    const SparseOp d2inv = degree_diagonal(basis, i0, [m](int q) { return (q + m) / (q + 1.0); });
    const SparseOp om = omega(basis, i);
    const SparseOp high = degree_diagonal(basis, i0, [](int q) { return q >= 1 ? 1.0 : 0.0; });

    std::vector<SparseOp> lam, dual;
    for (int j = 1; j <= n; ++j) {
      lam.push_back(right_creation(basis, i, j));
      dual.push_back(cauchy_dual_column(basis, i, j));
    }
    SparseOp sum_dual(dim, dim), sum_gram(dim, dim);
    for (int j = 0; j < n; ++j) {
      for (int l = 0; l < n; ++l) {
        SparseOp lhs = SparseOp(lam[static_cast<std::size_t>(j)].adjoint()) * lam[static_cast<std::size_t>(l)];
        if (j == l) lhs -= d2;
        iso[static_cast<std::size_t>(i0)] = std::max(iso[static_cast<std::size_t>(i0)], interior_max_abs(g1, lhs));
        SparseOp dd = SparseOp(dual[static_cast<std::size_t>(j)].adjoint()) * dual[static_cast<std::size_t>(l)];
        if (j != l)
          dual_orth[static_cast<std::size_t>(i0)] = std::max(dual_orth[static_cast<std::size_t>(i0)], interior_max_abs(g1, dd));
      }
      const SparseOp lj_adj = lam[static_cast<std::size_t>(j)].adjoint();
      const SparseOp lhs_i = d2inv * lj_adj - lj_adj * om;
      dual_i[static_cast<std::size_t>(i0)] = std::max(dual_i[static_cast<std::size_t>(i0)], interior_max_abs(g1, lhs_i));
      sum_dual += dual[static_cast<std::size_t>(j)] * lj_adj;
      sum_gram += lam[static_cast<std::size_t>(j)] * lj_adj;
    }
    dual_ii[static_cast<std::size_t>(i0)] = interior_max_abs(g1, SparseOp(sum_dual - high));

    std::vector<int> p(static_cast<std::size_t>(k), 0);
    p[static_cast<std::size_t>(i0)] = m;
    const auto rtuple = right_tuple(basis);
    const DenseOp defect_lam = defect(rtuple, p, dim);
    const DenseOp lhs_iii = DenseOp(id) - DenseOp(sum_dual) - defect_lam;
    dual_iii[static_cast<std::size_t>(i0)] = interior_max_abs(gm, lhs_iii);

    const DenseOp psi_id = psi_bh(basis, i, DenseOp(id));
    double eig = interior_max_abs(all, DenseOp(psi_id - DenseOp(d2inv)));
    for (int q = 0; q <= spec.L[static_cast<std::size_t>(i0)]; ++q)
      eig = std::max(eig, std::abs(psi_identity_eigenvalue(m, q) - (q + m) / (q + 1.0)));
    psi_eig[static_cast<std::size_t>(i0)] = eig;
    for (int j = 0; j < n; ++j) {
      const DenseOp diff = DenseOp(dual[static_cast<std::size_t>(j)]) - lam[static_cast<std::size_t>(j)] * psi_id;
      psi_col[static_cast<std::size_t>(i0)] = std::max(psi_col[static_cast<std::size_t>(i0)], interior_max_abs(g1, diff));
    }

    const SparseOp grading = degree_diagonal(basis, i0, [m](int q) { return q >= 1 ? q / (m + q - 1.0) : 0.0; });
    const SparseOp displayed = degree_diagonal(basis, i0, [m](int q) { return q >= 1 ? 1.0 / (m + q - 1.0) : 0.0; });
    gram[static_cast<std::size_t>(i0)] = interior_max_abs(all, SparseOp(sum_gram - grading));
    gram_displayed[static_cast<std::size_t>(i0)] = interior_max_abs(all, SparseOp(sum_gram - displayed));
  }

  auto per_factor = [&](const std::string& name, const std::vector<double>& r, int g, bool guard_is_m) {
    std::vector<int> guard(static_cast<std::size_t>(k));
    for (int i0 = 0; i0 < k; ++i0) guard[static_cast<std::size_t>(i0)] = guard_is_m ? spec.m[static_cast<std::size_t>(i0)] : g;
    run_check(report, name, guard, tol, [&] { return *std::max_element(r.begin(), r.end()); });
    report.checks.back().detail = Json{{"per_factor", r}};
  };
  per_factor("isometry_defect", iso, 1, false);
  per_factor("cauchy_dual_orthogonality", dual_orth, 1, false);
  per_factor("cauchy_dual_left_inverse", dual_i, 1, false);
  per_factor("cauchy_dual_range_projection", dual_ii, 1, false);
  per_factor("cauchy_dual_defect", dual_iii, 0, true);
  per_factor("cauchy_dual_psi_column", psi_col, 1, false);
  per_factor("psi_identity_eigenvalues", psi_eig, 0, false);
  per_factor("lambda_gram_grading", gram, 0, false);
  report.checks.back().detail["eigenvalue"] = "j/(m+j-1)";
  per_factor("lambda_gram_displayed_constant", gram_displayed, 0, false);
  report.checks.back().informational = true;
  report.checks.back().detail["eigenvalue"] = "1/(m+j-1)";

  const std::vector<int> gm_all(spec.m.begin(), spec.m.end());
  const auto ltuple = left_tuple(basis);
  const auto rtuple = right_tuple(basis);
  const auto vac = interior_mask(basis, GuardBand{gm_all});
  SparseOp p_c = spectral_projection(basis, uniform_guard(k, 0));
  run_check(report, "defect_identity_left", gm_all, tol,
            [&] { return interior_max_abs(vac, DenseOp(defect(ltuple, spec.m, dim) - DenseOp(p_c))); });
  run_check(report, "defect_identity_right", gm_all, tol,
            [&] { return interior_max_abs(vac, DenseOp(defect(rtuple, spec.m, dim) - DenseOp(p_c))); });

  const auto g2 = interior_mask(basis, GuardBand{uniform_guard(k, 2)});
  run_check(report, "commutation", uniform_guard(k, 2), tol, [&] {
    double r = 0.0;
    for (const auto& wf : ltuple)
      for (const auto& w : wf)
        for (const auto& lf : rtuple)
          for (const auto& l : lf) r = std::max(r, interior_max_abs(g2, SparseOp(w * l - l * w)));
    return r;
  });

  run_check(report, "gamma_covariance", uniform_guard(k, 0), tol, [&] {
    std::vector<double> theta(static_cast<std::size_t>(k));
    for (int s = 0; s < k; ++s) theta[static_cast<std::size_t>(s)] = 0.7 + 0.3 * s;
    const SparseOp g = gamma(basis, theta);
    const SparseOp g_adj = g.adjoint();
    const auto all = interior_mask(basis, GuardBand{uniform_guard(k, 0)});
    double r = 0.0;
    for (int i0 = 0; i0 < k; ++i0) {
      const Complex phase = std::polar(1.0, theta[static_cast<std::size_t>(i0)]);
      for (int j = 0; j < spec.n[static_cast<std::size_t>(i0)]; ++j)
        for (const auto* tup : {&ltuple, &rtuple}) {
          const SparseOp& x = (*tup)[static_cast<std::size_t>(i0)][static_cast<std::size_t>(j)];
          r = std::max(r, interior_max_abs(all, SparseOp(g * x * g_adj - phase * x)));
        }
    }
    return r;
  });
  return report;
}

Report toeplitz_suite(const TruncationSpec& spec, OperatorSource source, std::uint64_t seed, double tol,
                      const std::optional<DenseOp>& file_op) {
  spec.validate();
  const GradedBasis basis(spec);
  Report report{"toeplitz", spec, seed, tol, {}, {}};
  Rng rng(seed);
  std::optional<Symbol> symbol;
  DenseOp t;
  switch (source) {
    case OperatorSource::RandomSymbol:
      symbol = random_symbol(basis, rng);
      t = reconstruct(basis, *symbol);
      report.detail["source"] = "random-symbol";
      break;
    case OperatorSource::RandomDense:
      t = random_dense(static_cast<Eigen::Index>(spec.model_dim()), static_cast<Eigen::Index>(spec.model_dim()), rng);
      report.detail["source"] = "random-dense";
      break;
    case OperatorSource::File:
      if (!file_op) throw std::invalid_argument("toeplitz: file source without operator");
      t = *file_op;
      report.detail["source"] = "file";
      break;
  }
  const auto dim = static_cast<Eigen::Index>(spec.model_dim());
  if (t.rows() != dim || t.cols() != dim) throw std::invalid_argument("toeplitz: operator dimension mismatch");

  const ToeplitzReport tr = is_weighted_multi_toeplitz(basis, t, tol);
  const std::vector<double> bh = brown_halmos_residual(basis, t);
  const double bh_max = *std::max_element(bh.begin(), bh.end());
  const bool bh_pass = bh_max < tol;
  std::vector<int> bh_guard(spec.m.begin(), spec.m.end());
  for (auto& g : bh_guard) ++g;

  report.detail["toeplitz"] = toeplitz_report_to_json(tr);
  report.detail["brown_halmos"] = Json{{"per_factor", bh}, {"pass", bh_pass}};

  run_check(report, "equivalence", bh_guard, 0.5, [&] { return tr.is_toeplitz == bh_pass ? 0.0 : 1.0; });
  report.checks.back().detail = Json{{"is_toeplitz", tr.is_toeplitz}, {"brown_halmos_pass", bh_pass},
                                     {"brown_halmos_residual", bh_max}};

  const Symbol extracted = extract_symbol(basis, t);
  run_check(report, "reconstruct_round_trip", uniform_guard(spec.k, 0), tol, [&] {
    const double r = (reconstruct(basis, extracted) - t).cwiseAbs().maxCoeff();
    return tr.is_toeplitz ? r : 0.0;
  });
  report.checks.back().detail = Json{{"applies", tr.is_toeplitz}};
  if (symbol) {
    run_check(report, "symbol_round_trip", uniform_guard(spec.k, 0), tol,
              [&] { return symbol_distance(extracted, *symbol); });
  }
  return report;
}

Report berezin_suite(const TruncationSpec& spec, const PointTuple& x, std::uint64_t seed, double tol,
                     int transforms) {
  spec.validate();
  if (!membership(x, spec)) throw std::domain_error("berezin: point is not in the poly-hyperball");
  Report report{"berezin", spec, seed, tol, {}, {}};
  const std::vector<double> radii = purity(x);
  const bool pure = is_pure(radii);
  report.detail["point"] = Json{{"dim", x.dim}, {"spectral_radii", radii}, {"pure", pure}};

  const BerezinKernel kernel = berezin_kernel(x, spec);
  report.detail["defect_rank"] = kernel.defect_rank;
  const DenseOp gram = kernel.gram();
  const auto none = uniform_guard(spec.k, 0);
  run_check(report, "contraction", none, tol, [&] {
    const Eigen::SelfAdjointEigenSolver<DenseOp> es(gram, Eigen::EigenvaluesOnly);
    return std::max(0.0, es.eigenvalues().maxCoeff() - 1.0);
  });
  run_check(report, "isometry", none, tol,
            [&] { return (gram - DenseOp::Identity(x.dim, x.dim)).cwiseAbs().maxCoeff(); });
  if (!pure) report.checks.back().informational = true;
  run_check(report, "intertwining", uniform_guard(spec.k, 1), tol, [&] { return intertwining_residual(kernel, x); });

  const GradedBasis basis(spec);
  Rng rng(seed);
  run_check(report, "berezin_symbol_evaluation", none, tol, [&] {
    double r = 0.0;
    for (int s = 0; s < transforms; ++s) {
      const Symbol sym = random_symbol(basis, rng);
      const DenseOp t = reconstruct(basis, sym);
      r = std::max(r, (berezin_transform(kernel, spec, t) - eval_symbol(sym, x)).cwiseAbs().maxCoeff());
    }
    return r;
  });
  report.checks.back().detail = Json{{"transforms", transforms}};
  return report;
}

std::vector<std::vector<int>> all_shifts(const TruncationSpec& spec) {
  std::vector<std::vector<int>> out;
  std::vector<int> s(static_cast<std::size_t>(spec.k));
  for (int i = 0; i < spec.k; ++i) s[static_cast<std::size_t>(i)] = -spec.L[static_cast<std::size_t>(i)];
  while (true) {
    out.push_back(s);
    int i = spec.k - 1;
    for (; i >= 0; --i) {
      auto& v = s[static_cast<std::size_t>(i)];
      if (v < spec.L[static_cast<std::size_t>(i)]) {
        ++v;
        break;
      }
      v = -spec.L[static_cast<std::size_t>(i)];
    }
    if (i < 0) break;
  }
  return out;
}

std::vector<std::vector<int>> sample_shifts(const TruncationSpec& spec, std::size_t count) {
  const auto every = all_shifts(spec);
  if (every.size() <= count) return every;
  std::vector<std::vector<int>> out;
  auto add = [&](const std::vector<int>& s) {
    if (out.size() < count && std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
  };
  add(std::vector<int>(static_cast<std::size_t>(spec.k), 0));
  for (int i = 0; i < spec.k; ++i)
    for (int v : {1, -1, spec.L[static_cast<std::size_t>(i)], -spec.L[static_cast<std::size_t>(i)]}) {
      std::vector<int> s(static_cast<std::size_t>(spec.k), 0);
      s[static_cast<std::size_t>(i)] = v;
      add(s);
    }
  add(spec.L);
  const std::size_t stride = std::max<std::size_t>(1, every.size() / count);
  for (std::size_t c = 0; c < every.size() && out.size() < count; c += stride) add(every[c]);
  return out;
}

Report fourier_suite(const TruncationSpec& spec, std::uint64_t seed, double tol, int max_quadrature) {
  spec.validate();
  const GradedBasis basis(spec);
  Report report{"fourier", spec, seed, tol, {}, {}};
  Rng rng(seed);
  const auto dim = static_cast<Eigen::Index>(spec.model_dim());
  const DenseOp t = random_dense(dim, dim, rng);
  const double t_max = t.cwiseAbs().maxCoeff();
  const auto none = uniform_guard(spec.k, 0);

  std::vector<int> samples(spec.L.size());
  for (std::size_t i = 0; i < samples.size(); ++i) samples[i] = 2 * spec.L[i] + 1;
  const auto quad_shifts = sample_shifts(spec, static_cast<std::size_t>(std::max(1, max_quadrature)));
  run_check(report, "quadrature_agreement", none, tol, [&] {
    double r = 0.0;
    for (const auto& s : quad_shifts)
      r = std::max(r, (homogeneous_part_projection(basis, t, s) - homogeneous_part_quadrature(basis, t, s, samples))
                          .cwiseAbs()
                          .maxCoeff());
    return r;
  });
  report.checks.back().detail = Json{{"shifts_checked", quad_shifts.size()}, {"samples", samples}};

  DenseOp sum = DenseOp::Zero(dim, dim);
  double part_excess = 0.0;
  for (const auto& s : all_shifts(spec)) {
    const DenseOp ts = homogeneous_part_projection(basis, t, s);
    part_excess = std::max(part_excess, ts.cwiseAbs().maxCoeff() - t_max);
    sum += ts;
  }
  run_check(report, "homogeneous_sum", none, tol, [&] { return (sum - t).cwiseAbs().maxCoeff(); });
  run_check(report, "homogeneous_part_bound", none, tol, [&] { return std::max(0.0, part_excess); });
  run_check(report, "partial_sum_exact", none, tol,
            [&] { return (partial_sum(basis, t, spec.L) - t).cwiseAbs().maxCoeff(); });

  // Fejer means of an interior-supported Toeplitz operator.
  const DenseOp toe = reconstruct(basis, random_symbol(basis, rng));
  const double toe_max = toe.cwiseAbs().maxCoeff();
  std::vector<double> errors;
  for (int f : {1, 2, 4, 8}) {
    std::vector<int> order(spec.L);
    for (auto& v : order) v *= f;
    errors.push_back((fejer_sum(basis, toe, order) - toe).cwiseAbs().maxCoeff());
  }
  bool monotone = true;
  for (std::size_t e = 1; e < errors.size(); ++e) monotone = monotone && errors[e] <= errors[e - 1] + 1e-15;
  run_check(report, "fejer_convergence", none, 0.2,
            [&] { return toe_max > 0 ? errors.back() / toe_max : 0.0; });
  report.checks.back().pass = report.checks.back().pass && monotone;
  report.checks.back().detail = Json{{"errors", errors}, {"orders", {"L", "2L", "4L", "8L"}}, {"monotone", monotone},
                                     {"operator_max", toe_max}};
  return report;
}

}  // namespace polyball

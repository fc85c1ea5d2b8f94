#include "polyball/toeplitz.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace polyball {

namespace {

constexpr std::int32_t kNotComparable = -1;

/// Word-pair relations of one factor: s(omega_i, gamma_i) as word indices and
/// the exact per-factor weight ratio against the reduced representative.
struct FactorRelations {
  std::size_t dim = 0;
  std::vector<std::int32_t> sigma;  // -1 when not comparable
  std::vector<std::int32_t> beta;
  std::vector<Rational> ratio;

  std::size_t at(std::size_t row, std::size_t col) const { return row * dim + col; }
};

FactorRelations build_relations(const GradedBasis& basis, int i0, ToeplitzWeights weights) {
  const auto& words = basis.factor_words(i0);
  const int mi = basis.spec().m[static_cast<std::size_t>(i0)];
  FactorRelations rel;
  rel.dim = words.size();
  rel.sigma.assign(rel.dim * rel.dim, kNotComparable);
  rel.beta.assign(rel.dim * rel.dim, kNotComparable);
  rel.ratio.assign(rel.dim * rel.dim, Rational());
  for (std::size_t a = 0; a < rel.dim; ++a) {
    for (std::size_t b = 0; b < rel.dim; ++b) {
      const auto s = right_quotient(words[a], words[b]);
      const auto t = right_quotient(words[b], words[a]);
      if (!s && !t) continue;
      const std::size_t lsig = s ? s->length() : 0;
      const std::size_t lbet = t ? t->length() : 0;
      const std::size_t lo = std::min(words[a].length(), words[b].length());
      const std::size_t hi = std::max(words[a].length(), words[b].length());
      const std::size_t rep_hi = std::max(lsig, lbet);
      rel.sigma[rel.at(a, b)] = static_cast<std::int32_t>(s ? basis.factor_word_index(i0, *s) : 0);
      rel.beta[rel.at(a, b)] = static_cast<std::int32_t>(t ? basis.factor_word_index(i0, *t) : 0);
      // tau(omega,gamma)/tau(sigma,beta) = sqrt(b_lo * b_rep / b_hi); mu ratio = b_rep / b_hi
      if (weights == ToeplitzWeights::Tau) {
        rel.ratio[rel.at(a, b)] = Rational(weight_b(mi, lo), weight_b(mi, hi)) * Rational(weight_b(mi, rep_hi), 1);
      } else {
        rel.ratio[rel.at(a, b)] = Rational(weight_b(mi, rep_hi), weight_b(mi, hi));
      }
    }
  }
  return rel;
}

void check_square(const GradedBasis& basis, const DenseOp& t, const char* who) {
  const auto dim = static_cast<Eigen::Index>(basis.spec().model_dim());
  if (t.rows() != dim || t.cols() != dim) throw std::invalid_argument(std::string(who) + ": dimension mismatch");
}

GradedBasis fock_level(const GradedBasis& basis) {
  TruncationSpec s = basis.spec();
  s.d = 1;
  return GradedBasis(s);
}

}  // namespace

double symbol_distance(const Symbol& a, const Symbol& b) {
  double best = 0.0;
  for (const auto& [key, coef] : a.coeffs) {
    auto it = b.coeffs.find(key);
    best = std::max(best, it == b.coeffs.end() ? coef.cwiseAbs().maxCoeff() : (coef - it->second).cwiseAbs().maxCoeff());
  }
  for (const auto& [key, coef] : b.coeffs) {
    if (!a.coeffs.count(key)) best = std::max(best, coef.cwiseAbs().maxCoeff());
  }
  return best;
}

GuardBand brown_halmos_guard(const TruncationSpec& spec, int i) {
  const auto i0 = static_cast<std::size_t>(i - 1);
  GuardBand g{std::vector<int>(static_cast<std::size_t>(spec.k), 0)};
  g.g[i0] = spec.m[i0] + 1;
  if (g.g[i0] > spec.L[i0])
    throw std::domain_error("brown_halmos_residual: L_" + std::to_string(i) + " = " + std::to_string(spec.L[i0]) +
                            " leaves no interior for guard band m_i + 1 = " + std::to_string(g.g[i0]));
  return g;
}

std::vector<DenseOp> brown_halmos_blocks(const GradedBasis& basis, const DenseOp& t, int i) {
  check_square(basis, t, "brown_halmos_blocks");
  const int ni = basis.spec().n[static_cast<std::size_t>(i - 1)];
  std::vector<SparseOp> duals;
  for (int j = 1; j <= ni; ++j) duals.push_back(cauchy_dual_column(basis, i, j));
  const DenseOp psi = psi_bh(basis, i, t);
  std::vector<DenseOp> out(static_cast<std::size_t>(ni * ni));
  for (int l = 0; l < ni; ++l) {
    const DenseOp t_dual = t * duals[static_cast<std::size_t>(l)];
    for (int j = 0; j < ni; ++j) {
      DenseOp block = duals[static_cast<std::size_t>(j)].adjoint() * t_dual;
      if (j == l) block -= psi;
      out[static_cast<std::size_t>(j * ni + l)] = std::move(block);
    }
  }
  return out;
}

std::vector<double> brown_halmos_residual(const GradedBasis& basis, const DenseOp& t) {
  check_square(basis, t, "brown_halmos_residual");
  std::vector<double> out;
  const std::size_t f = basis.size();
  const int d = basis.spec().d;
  for (int i = 1; i <= basis.factors(); ++i) {
    brown_halmos_guard(basis.spec(), i);
    // Interior entries only see factor-i degrees <= L_i - m_i, and the
    // compression to those degrees is again a truncated model.
    TruncationSpec sub = basis.spec();
    sub.L[static_cast<std::size_t>(i - 1)] -= sub.m[static_cast<std::size_t>(i - 1)];
    const GradedBasis small(sub);
    const std::size_t fs = small.size();
    std::vector<Eigen::Index> idx(fs * static_cast<std::size_t>(d));
    for (int c = 0; c < d; ++c)
      for (std::size_t b = 0; b < fs; ++b)
        idx[static_cast<std::size_t>(c) * fs + b] =
            static_cast<Eigen::Index>(static_cast<std::size_t>(c) * f + basis.index_of(small.entry(b)));
    const auto n = static_cast<Eigen::Index>(idx.size());
    DenseOp ts(n, n);
    for (Eigen::Index c = 0; c < n; ++c)
      for (Eigen::Index r = 0; r < n; ++r) ts(r, c) = t(idx[static_cast<std::size_t>(r)], idx[static_cast<std::size_t>(c)]);
    std::vector<int> g(static_cast<std::size_t>(basis.factors()), 0);
    g[static_cast<std::size_t>(i - 1)] = 1;
    const auto mask = interior_mask(small, GuardBand{g});
    double worst = 0.0;
    for (const auto& block : brown_halmos_blocks(small, ts, i)) worst = std::max(worst, interior_max_abs(mask, block));
    out.push_back(worst);
  }
  return out;
}

ToeplitzReport is_weighted_multi_toeplitz(const GradedBasis& basis, const DenseOp& t, double tol,
                                          ToeplitzWeights weights, const std::optional<GuardBand>& guard) {
  check_square(basis, t, "is_weighted_multi_toeplitz");
  const int k = basis.factors();
  const auto ks = static_cast<std::size_t>(k);
  std::vector<FactorRelations> rel;
  for (int i = 0; i < k; ++i) rel.push_back(build_relations(basis, i, weights));

  const std::size_t f = basis.size();
  const auto fi = static_cast<Eigen::Index>(f);
  const int d = basis.spec().d;
  std::vector<bool> inside(f, true);
  if (guard) {
    for (std::size_t b = 0; b < f; ++b) inside[b] = basis.in_interior(b, guard->g);
  }

  ToeplitzReport rep;
  double worst_violation = 0.0;
  auto note = [&](double v, std::size_t r, std::size_t c) {
    if (v > tol && v > worst_violation) {
      worst_violation = v;
      rep.witness = std::make_pair(to_string(basis.entry(r)), to_string(basis.entry(c)));
    }
  };

  for (std::size_t c = 0; c < f; ++c) {
    if (!inside[c]) continue;
    for (std::size_t r = 0; r < f; ++r) {
      if (!inside[r]) continue;
      bool comp = true;
      std::size_t cart_sigma = 0, cart_beta = 0;
      Rational ratio;
      for (std::size_t i = 0; i < ks; ++i) {
        const auto& ri = rel[i];
        const std::size_t pos = ri.at(basis.word_index(r, static_cast<int>(i)), basis.word_index(c, static_cast<int>(i)));
        if (ri.sigma[pos] == kNotComparable) {
          comp = false;
          break;
        }
        cart_sigma = cart_sigma * ri.dim + static_cast<std::size_t>(ri.sigma[pos]);
        cart_beta = cart_beta * ri.dim + static_cast<std::size_t>(ri.beta[pos]);
        ratio = ratio * ri.ratio[pos];
      }
      const auto ri_ = static_cast<Eigen::Index>(r);
      const auto ci_ = static_cast<Eigen::Index>(c);
      if (!comp) {
        for (int a = 0; a < d; ++a)
          for (int b = 0; b < d; ++b) {
            const double v = std::abs(t(a * fi + ri_, b * fi + ci_));
            rep.max_offdomain_entry = std::max(rep.max_offdomain_entry, v);
            note(v, r, c);
          }
        continue;
      }
      const auto rs = static_cast<Eigen::Index>(basis.from_cartesian(cart_sigma));
      const auto cb = static_cast<Eigen::Index>(basis.from_cartesian(cart_beta));
      if (rs == ri_ && cb == ci_) continue;
      const double factor = weights == ToeplitzWeights::Tau ? Radical{ratio}.value() : ratio.value();
      for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) {
          const double v = std::abs(t(a * fi + ri_, b * fi + ci_) - factor * t(a * fi + rs, b * fi + cb));
          rep.max_ratio_residual = std::max(rep.max_ratio_residual, v);
          note(v, r, c);
        }
    }
  }
  rep.is_toeplitz = rep.max_offdomain_entry <= tol && rep.max_ratio_residual <= tol;
  return rep;
}

Symbol extract_symbol(const GradedBasis& basis, const DenseOp& t) {
  check_square(basis, t, "extract_symbol");
  const auto& spec = basis.spec();
  const std::size_t f = basis.size();
  const auto fi = static_cast<Eigen::Index>(f);
  const int d = spec.d;
  Symbol sym{spec, {}};
  for (std::size_t c = 0; c < f; ++c) {
    for (std::size_t r = 0; r < f; ++r) {
      double inv_tau = 1.0;  // 1 / tau_{(alpha,beta)} = prod sqrt(b(max))
      bool reduced = true;
      for (int i = 0; i < basis.factors(); ++i) {
        const int dr = basis.degree(r, i);
        const int dc = basis.degree(c, i);
        if (dr > 0 && dc > 0) {
          reduced = false;
          break;
        }
        inv_tau *= std::sqrt(static_cast<double>(weight_b(spec.m[static_cast<std::size_t>(i)],
                                                          static_cast<std::size_t>(std::max(dr, dc)))));
      }
      if (!reduced) continue;
      DenseOp block(d, d);
      for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b)
          block(a, b) = t(a * fi + static_cast<Eigen::Index>(r), b * fi + static_cast<Eigen::Index>(c)) * inv_tau;
      if (block.cwiseAbs().maxCoeff() == 0.0) continue;
      sym.coeffs.emplace(Symbol::Key{basis.entry(r), basis.entry(c)}, std::move(block));
    }
  }
  return sym;
}

namespace {

/// W_alpha W_beta^* in closed form. On factor i, W_{beta_i}^* e_gamma is
/// sqrt(b_{gamma'} / b_gamma) e_{gamma'} when gamma = beta_i gamma', and
/// W_{alpha_i} e_{gamma'} = sqrt(b_{gamma'} / b_{alpha_i gamma'}) e_{alpha_i gamma'}
/// below the truncation.
class MonomialBuilder {
 public:
  explicit MonomialBuilder(const GradedBasis& basis) : fock_(fock_level(basis)) {}

  const GradedBasis& fock() const { return fock_; }

  /// Visits every nonzero (row, col, value) of the Fock-level monomial.
  template <class Fn>
  void for_each(const MultiWord& alpha, const MultiWord& beta, Fn&& fn) const {
    validate(alpha, beta);
    const int k = fock_.factors();
    std::vector<std::vector<std::pair<std::int64_t, double>>> maps;
    for (int i = 0; i < k; ++i) maps.push_back(factor_map(i, alpha[static_cast<std::size_t>(i)], beta[static_cast<std::size_t>(i)]));
    std::vector<std::uint32_t> idx(static_cast<std::size_t>(k));
    for (std::size_t col = 0; col < fock_.size(); ++col) {
      double v = 1.0;
      bool hit = true;
      for (int i = 0; i < k && hit; ++i) {
        const auto& [target, coef] = maps[static_cast<std::size_t>(i)][fock_.word_index(col, i)];
        hit = target >= 0;
        idx[static_cast<std::size_t>(i)] = static_cast<std::uint32_t>(target);
        v *= coef;
      }
      if (hit) fn(fock_.index_of_factor_indices(idx), col, v);
    }
  }

  SparseOp build(const MultiWord& alpha, const MultiWord& beta) const {
    std::vector<Eigen::Triplet<Complex>> trips;
    for_each(alpha, beta, [&](std::size_t r, std::size_t c, double v) {
      trips.emplace_back(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c), Complex(v));
    });
    const auto f = static_cast<Eigen::Index>(fock_.size());
    SparseOp out(f, f);
    out.setFromTriplets(trips.begin(), trips.end());
    return out;
  }

 private:
  void validate(const MultiWord& alpha, const MultiWord& beta) const {
    const auto k = static_cast<std::size_t>(fock_.factors());
    if (alpha.size() != k || beta.size() != k) throw std::invalid_argument("monomial: factor count mismatch");
    if (!is_reduced_pair(alpha, beta))
      throw std::invalid_argument("monomial: (" + to_string(alpha) + ", " + to_string(beta) + ") is not a reduced pair");
    for (std::size_t i = 0; i < k; ++i) {
      const auto li = static_cast<std::size_t>(fock_.spec().L[i]);
      if (alpha[i].alphabet() != fock_.spec().n[i] || beta[i].alphabet() != fock_.spec().n[i])
        throw std::invalid_argument("monomial: alphabet mismatch");
      if (alpha[i].length() > li || beta[i].length() > li)
        throw std::out_of_range("monomial: key (" + to_string(alpha) + ", " + to_string(beta) + ") outside truncation");
    }
  }

  /// Per factor word index: (target word index or -1, coefficient).
  std::vector<std::pair<std::int64_t, double>> factor_map(int i, const Word& a, const Word& b) const {
    const auto& words = fock_.factor_words(i);
    const int m = fock_.spec().m[static_cast<std::size_t>(i)];
    const auto li = static_cast<std::size_t>(fock_.spec().L[static_cast<std::size_t>(i)]);
    std::vector<std::pair<std::int64_t, double>> out(words.size(), {-1, 0.0});
    const auto& bl = b.letters();
    for (std::size_t g = 0; g < words.size(); ++g) {
      const auto& gl = words[g].letters();
      if (gl.size() < bl.size() || !std::equal(bl.begin(), bl.end(), gl.begin())) continue;
      const std::size_t rest = gl.size() - bl.size();
      if (rest + a.length() > li) continue;
      std::vector<int> letters(a.letters());
      letters.insert(letters.end(), gl.begin() + static_cast<std::ptrdiff_t>(bl.size()), gl.end());
      const double brest = static_cast<double>(weight_b(m, rest));
      const double v = std::sqrt(brest / static_cast<double>(weight_b(m, gl.size()))) *
                       std::sqrt(brest / static_cast<double>(weight_b(m, letters.size())));
      out[g] = {static_cast<std::int64_t>(fock_.factor_word_index(i, Word(a.alphabet(), std::move(letters)))), v};
    }
    return out;
  }

  GradedBasis fock_;
};

}  // namespace

SparseOp monomial(const GradedBasis& basis, const MultiWord& alpha, const MultiWord& beta) {
  return MonomialBuilder(basis).build(alpha, beta);
}

DenseOp reconstruct(const GradedBasis& basis, const Symbol& symbol) {
  const auto& spec = basis.spec();
  if (!(symbol.spec.k == spec.k && symbol.spec.n == spec.n && symbol.spec.d == spec.d))
    throw std::invalid_argument("reconstruct: symbol spec does not match basis");
  const MonomialBuilder builder(basis);
  const auto f = static_cast<Eigen::Index>(basis.size());
  const int d = spec.d;
  DenseOp out = DenseOp::Zero(f * d, f * d);
  for (const auto& [key, coef] : symbol.coeffs) {
    if (coef.rows() != d || coef.cols() != d) throw std::invalid_argument("reconstruct: coefficient is not d x d");
    builder.for_each(key.first, key.second, [&](std::size_t r, std::size_t c, double v) {
      const auto row = static_cast<Eigen::Index>(r), col = static_cast<Eigen::Index>(c);
      for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) out(a * f + row, b * f + col) += coef(a, b) * v;
    });
  }
  return out;
}

DenseOp homogeneous_part_projection(const GradedBasis& basis, const DenseOp& t, const std::vector<int>& s) {
  check_square(basis, t, "homogeneous_part_projection");
  if (s.size() != static_cast<std::size_t>(basis.factors())) throw std::invalid_argument("degree vector size mismatch");
  const auto f = static_cast<Eigen::Index>(basis.size());
  const int d = basis.spec().d;
  DenseOp out = DenseOp::Zero(t.rows(), t.cols());
  for (const auto& [p, range] : basis.blocks()) {
    std::vector<int> q = p;
    for (std::size_t i = 0; i < q.size(); ++i) q[i] += s[i];
    const auto [qlo, qhi] = basis.degree_range(q);
    if (qlo == qhi) continue;
    const auto plo = static_cast<Eigen::Index>(range.first);
    const auto pn = static_cast<Eigen::Index>(range.second - range.first);
    const auto qn = static_cast<Eigen::Index>(qhi - qlo);
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b)
        out.block(a * f + static_cast<Eigen::Index>(qlo), b * f + plo, qn, pn) =
            t.block(a * f + static_cast<Eigen::Index>(qlo), b * f + plo, qn, pn);
  }
  return out;
}

DenseOp homogeneous_part_quadrature(const GradedBasis& basis, const DenseOp& t, const std::vector<int>& s,
                                    const std::vector<int>& samples) {
  check_square(basis, t, "homogeneous_part_quadrature");
  const auto ks = static_cast<std::size_t>(basis.factors());
  if (s.size() != ks || samples.size() != ks) throw std::invalid_argument("homogeneous_part_quadrature: size mismatch");
  for (std::size_t i = 0; i < ks; ++i) {
    if (samples[i] < 2 * basis.spec().L[i] + 1)
      throw std::invalid_argument("homogeneous_part_quadrature: N_" + std::to_string(i + 1) + " = " +
                                  std::to_string(samples[i]) + " undersamples degree " +
                                  std::to_string(basis.spec().L[i]));
  }
  // Gamma(theta) is the scalar e^{i p.theta} on E_p, so the average acts on
  // each block pair (p, q) by one quadrature weight.
  const auto& blocks = basis.blocks();
  std::vector<std::pair<std::size_t, std::size_t>> ranges;
  for (const auto& [p, range] : blocks) ranges.push_back(range);
  const std::size_t nb = ranges.size();
  std::vector<Complex> weight(nb * nb, Complex(0.0));
  std::vector<int> idx(ks, 0);
  double count = 1.0;
  for (int v : samples) count *= v;
  while (true) {
    std::vector<double> theta(ks);
    double phase = 0.0;
    for (std::size_t i = 0; i < ks; ++i) {
      theta[i] = 2.0 * std::numbers::pi * idx[i] / samples[i];
      phase -= s[i] * theta[i];
    }
    const Eigen::VectorXcd g = gamma(basis, theta).diagonal();
    const Complex e = std::polar(1.0, phase);
    for (std::size_t a = 0; a < nb; ++a)
      for (std::size_t b = 0; b < nb; ++b)
        weight[a * nb + b] += e * g(static_cast<Eigen::Index>(ranges[a].first)) *
                              std::conj(g(static_cast<Eigen::Index>(ranges[b].first)));
    std::size_t pos = ks;
    while (pos > 0 && ++idx[pos - 1] == samples[pos - 1]) idx[--pos] = 0;
    if (pos == 0) break;
  }
  const auto f = static_cast<Eigen::Index>(basis.size());
  const int d = basis.spec().d;
  DenseOp out = DenseOp::Zero(t.rows(), t.cols());
  for (std::size_t a = 0; a < nb; ++a)
    for (std::size_t b = 0; b < nb; ++b) {
      const Complex w = weight[a * nb + b] / count;
      const auto r0 = static_cast<Eigen::Index>(ranges[a].first), rn = static_cast<Eigen::Index>(ranges[a].second) - r0;
      const auto c0 = static_cast<Eigen::Index>(ranges[b].first), cn = static_cast<Eigen::Index>(ranges[b].second) - c0;
      for (int x = 0; x < d; ++x)
        for (int y = 0; y < d; ++y)
          out.block(x * f + r0, y * f + c0, rn, cn) = w * t.block(x * f + r0, y * f + c0, rn, cn);
    }
  return out;
}

namespace {

template <class WeightFn>
DenseOp weight_by_degree_difference(const GradedBasis& basis, const DenseOp& t, WeightFn&& weight) {
  const auto f = static_cast<Eigen::Index>(basis.size());
  const int d = basis.spec().d;
  const auto ks = static_cast<std::size_t>(basis.factors());
  DenseOp out(t.rows(), t.cols());
  std::vector<int> diff(ks);
  for (Eigen::Index c = 0; c < f; ++c) {
    for (Eigen::Index r = 0; r < f; ++r) {
      for (std::size_t i = 0; i < ks; ++i)
        diff[i] = basis.degree(static_cast<std::size_t>(r), static_cast<int>(i)) -
                  basis.degree(static_cast<std::size_t>(c), static_cast<int>(i));
      const double w = weight(diff);
      for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) out(a * f + r, b * f + c) = w * t(a * f + r, b * f + c);
    }
  }
  return out;
}

void check_order(const GradedBasis& basis, const std::vector<int>& order) {
  if (order.size() != static_cast<std::size_t>(basis.factors())) throw std::invalid_argument("order size mismatch");
  for (int v : order)
    if (v < 0) throw std::invalid_argument("summation order must be nonnegative");
}

}  // namespace

DenseOp fejer_sum(const GradedBasis& basis, const DenseOp& t, const std::vector<int>& order) {
  check_square(basis, t, "fejer_sum");
  check_order(basis, order);
  return weight_by_degree_difference(basis, t, [&](const std::vector<int>& s) {
    double w = 1.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (std::abs(s[i]) > order[i]) return 0.0;
      w *= 1.0 - static_cast<double>(std::abs(s[i])) / (order[i] + 1);
    }
    return w;
  });
}

DenseOp partial_sum(const GradedBasis& basis, const DenseOp& t, const std::vector<int>& order) {
  check_square(basis, t, "partial_sum");
  check_order(basis, order);
  return weight_by_degree_difference(basis, t, [&](const std::vector<int>& s) {
    for (std::size_t i = 0; i < s.size(); ++i)
      if (std::abs(s[i]) > order[i]) return 0.0;
    return 1.0;
  });
}

DenseOp to_weighted_fock_conjugate(const GradedBasis& basis, const DenseOp& t) {
  check_square(basis, t, "to_weighted_fock_conjugate");
  const auto f = basis.size();
  Eigen::VectorXd scale(static_cast<Eigen::Index>(basis.spec().model_dim()));
  for (std::size_t b = 0; b < f; ++b) {
    const double v = 1.0 / std::sqrt(static_cast<double>(weight_b(basis.spec(), basis.entry(b))));
    for (int c = 0; c < basis.spec().d; ++c) scale(static_cast<Eigen::Index>(static_cast<std::size_t>(c) * f + b)) = v;
  }
  return scale.asDiagonal() * t * scale.asDiagonal();
}

}  // namespace polyball

#pragma once

// Verification suites shared by the CLI and the tests.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "polyball/io.hpp"

namespace polyball {

struct Check {
  std::string name;
  bool pass = false;
  double residual = 0.0;
  std::vector<int> guard;  // per-factor guard band; empty when the check is global
  double elapsed_ms = 0.0;
  /// Reported but excluded from the overall verdict.
  bool informational = false;
  Json detail;
};

struct Report {
  std::string suite;
  TruncationSpec spec;
  std::uint64_t seed = 0;
  double tol = 0.0;
  std::vector<Check> checks;
  Json detail;

  bool pass() const;
  /// Checks sorted by name. Timings are omitted unless requested, so equal
  /// inputs give byte-identical output.
  Json to_json(bool timing = false) const;
};

inline constexpr double kStructuralTol = 1e-10;
inline constexpr double kTailTol = 1e-8;

/// Largest |entry| of a sparse operator over interior rows and columns.
double interior_max_abs(const std::vector<bool>& mask, const SparseOp& a);

/// Operator identities of the universal models: isometry defect, Cauchy dual,
/// Psi(I), grading of Lambda Lambda^*, defect identity, commutation, Gamma covariance.
/// Throws std::invalid_argument when some L_i < m_i.
Report verify_suite(const TruncationSpec& spec, double tol = kStructuralTol);

enum class OperatorSource { RandomSymbol, RandomDense, File };

/// Toeplitz criterion against the Brown-Halmos residual, plus symbol round trips.
/// `file_op` is required for OperatorSource::File.
Report toeplitz_suite(const TruncationSpec& spec, OperatorSource source, std::uint64_t seed, double tol,
                      const std::optional<DenseOp>& file_op = std::nullopt);

/// Kernel checks at a point. Throws std::domain_error for non-members.
Report berezin_suite(const TruncationSpec& spec, const PointTuple& x, std::uint64_t seed, double tol = kTailTol,
                     int transforms = 10);

/// Homogeneous decomposition, Fejer and partial sums of a seeded operator.
/// `max_quadrature` bounds the number of s values checked by quadrature.
Report fourier_suite(const TruncationSpec& spec, std::uint64_t seed, double tol = 1e-12, int max_quadrature = 32);

/// All s with |s_i| <= L_i, in lexicographic order.
std::vector<std::vector<int>> all_shifts(const TruncationSpec& spec);

/// At most `count` shifts: the zero shift, +-L_i and +-1 per factor, then a
/// deterministic stride through the remainder.
std::vector<std::vector<int>> sample_shifts(const TruncationSpec& spec, std::size_t count);

}  // namespace polyball

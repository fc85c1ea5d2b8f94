#include "polyball/io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace polyball {

TruncationSpec spec_from_json(const Json& j) {
  TruncationSpec s;
  s.k = j.at("k").get<int>();
  s.n = j.at("n").get<std::vector<int>>();
  s.m = j.at("m").get<std::vector<int>>();
  s.L = j.at("L").get<std::vector<int>>();
  s.d = j.value("d", 1);
  s.validate();
  return s;
}

Json spec_to_json(const TruncationSpec& spec) {
  return Json{{"k", spec.k}, {"n", spec.n}, {"m", spec.m}, {"L", spec.L}, {"d", spec.d}};
}

Json matrix_to_json(const DenseOp& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

DenseOp matrix_from_json(const Json& j) {
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = rows ? static_cast<Eigen::Index>(j.at(0).size()) : 0;
  DenseOp out(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto& row = j.at(static_cast<std::size_t>(r));
    if (static_cast<Eigen::Index>(row.size()) != cols) throw std::invalid_argument("matrix: ragged rows");
    for (Eigen::Index c = 0; c < cols; ++c) {
      const auto& e = row.at(static_cast<std::size_t>(c));
      out(r, c) = e.is_array() ? Complex(e.at(0).get<double>(), e.at(1).get<double>()) : Complex(e.get<double>(), 0.0);
    }
  }
  return out;
}

Json symbol_to_json(const Symbol& s) {
  Json out = Json::array();
  for (const auto& [key, coef] : s.coeffs) {
    Json a = Json::array(), b = Json::array();
    for (const auto& w : key.first) a.push_back(w.str());
    for (const auto& w : key.second) b.push_back(w.str());
    out.push_back({{"alpha", a}, {"beta", b}, {"A", matrix_to_json(coef)}});
  }
  return out;
}

Symbol symbol_from_json(const TruncationSpec& spec, const Json& j) {
  Symbol s{spec, {}};
  for (const auto& entry : j) {
    MultiWord alpha, beta;
    const auto& ja = entry.at("alpha");
    const auto& jb = entry.at("beta");
    if (ja.size() != static_cast<std::size_t>(spec.k) || jb.size() != static_cast<std::size_t>(spec.k))
      throw std::invalid_argument("symbol: key has wrong factor count");
    for (int i = 0; i < spec.k; ++i) {
      alpha.push_back(parse_word(spec.n[static_cast<std::size_t>(i)], ja.at(static_cast<std::size_t>(i)).get<std::string>()));
      beta.push_back(parse_word(spec.n[static_cast<std::size_t>(i)], jb.at(static_cast<std::size_t>(i)).get<std::string>()));
    }
    if (!is_reduced_pair(alpha, beta))
      throw std::invalid_argument("symbol: key (" + to_string(alpha) + ", " + to_string(beta) + ") is not reduced");
    DenseOp a = matrix_from_json(entry.at("A"));
    if (a.rows() != spec.d || a.cols() != spec.d) throw std::invalid_argument("symbol: coefficient is not d x d");
    s.coeffs[{alpha, beta}] = std::move(a);
  }
  return s;
}

Json point_to_json(const PointTuple& x) {
  Json factors = Json::array();
  for (const auto& f : x.x) {
    Json row = Json::array();
    for (const auto& m : f) row.push_back(matrix_to_json(m));
    factors.push_back(std::move(row));
  }
  return Json{{"dim", x.dim}, {"factors", factors}};
}

PointTuple point_from_json(const Json& j) {
  PointTuple x;
  x.dim = j.at("dim").get<Eigen::Index>();
  for (const auto& f : j.at("factors")) {
    std::vector<DenseOp> row;
    for (const auto& m : f) {
      DenseOp mat = matrix_from_json(m);
      if (mat.rows() != x.dim || mat.cols() != x.dim) throw std::invalid_argument("point: matrix is not dim x dim");
      row.push_back(std::move(mat));
    }
    x.x.push_back(std::move(row));
  }
  return x;
}

Json toeplitz_report_to_json(const ToeplitzReport& r) {
  Json out{{"is_toeplitz", r.is_toeplitz},
           {"max_offdomain_entry", r.max_offdomain_entry},
           {"max_ratio_residual", r.max_ratio_residual},
           {"witness", nullptr}};
  if (r.witness) out["witness"] = {r.witness->first, r.witness->second};
  return out;
}

Json operator_header(const GradedBasis& basis, OperatorFormat format) {
  Json labels = Json::array();
  for (std::size_t b = 0; b < basis.size(); ++b) labels.push_back(to_string(basis.entry(b)));
  const auto dim = basis.spec().model_dim();
  return Json{{"format", format == OperatorFormat::Coo ? "coo" : "dense-f64le"},
              {"spec", spec_to_json(basis.spec())},
              {"rows", dim},
              {"cols", dim},
              {"index", "coefficient * fock_dim + basis"},
              {"basis_order", "degree vector lexicographic, then per-factor graded lexicographic"},
              {"basis", labels}};
}

namespace {

void put_f64(std::ostream& out, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, sizeof bits);
  if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap64(bits);
  char buf[8];
  std::memcpy(buf, &bits, sizeof buf);
  out.write(buf, sizeof buf);
}

double get_f64(std::istream& in) {
  char buf[8];
  if (!in.read(buf, sizeof buf)) throw std::runtime_error("operator file: truncated dense payload");
  std::uint64_t bits;
  std::memcpy(&bits, buf, sizeof bits);
  if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap64(bits);
  double v;
  std::memcpy(&v, &bits, sizeof v);
  return v;
}

}  // namespace

void write_operator(std::ostream& out, const GradedBasis& basis, const DenseOp& t, OperatorFormat format) {
  const auto dim = static_cast<Eigen::Index>(basis.spec().model_dim());
  if (t.rows() != dim || t.cols() != dim) throw std::invalid_argument("write_operator: dimension mismatch");
  out << operator_header(basis, format).dump() << '\n';
  if (format == OperatorFormat::Coo) {
    out << std::setprecision(17);
    for (Eigen::Index r = 0; r < dim; ++r)
      for (Eigen::Index c = 0; c < dim; ++c)
        if (t(r, c) != Complex(0.0)) out << r << ' ' << c << ' ' << t(r, c).real() << ' ' << t(r, c).imag() << '\n';
    return;
  }
  for (Eigen::Index r = 0; r < dim; ++r)
    for (Eigen::Index c = 0; c < dim; ++c) {
      put_f64(out, t(r, c).real());
      put_f64(out, t(r, c).imag());
    }
}

DenseOp read_operator(std::istream& in, const GradedBasis& basis) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("operator file: missing header");
  const Json header = Json::parse(line);
  const TruncationSpec spec = spec_from_json(header.at("spec"));
  if (!(spec == basis.spec())) throw std::invalid_argument("operator file: spec does not match");
  const auto dim = static_cast<Eigen::Index>(spec.model_dim());
  DenseOp t = DenseOp::Zero(dim, dim);
  const auto format = header.at("format").get<std::string>();
  if (format == "coo") {
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      std::istringstream row(line);
      Eigen::Index r, c;
      double re, im;
      if (!(row >> r >> c >> re >> im)) throw std::runtime_error("operator file: bad coo line '" + line + "'");
      if (r < 0 || r >= dim || c < 0 || c >= dim) throw std::runtime_error("operator file: index out of range");
      t(r, c) = Complex(re, im);
    }
  } else if (format == "dense-f64le") {
    for (Eigen::Index r = 0; r < dim; ++r)
      for (Eigen::Index c = 0; c < dim; ++c) {
        const double re = get_f64(in);
        t(r, c) = Complex(re, get_f64(in));
      }
  } else {
    throw std::runtime_error("operator file: unknown format '" + format + "'");
  }
  return t;
}

void write_operator_file(const std::string& path, const GradedBasis& basis, const DenseOp& t, OperatorFormat format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  write_operator(out, basis, t, format);
}

DenseOp read_operator_file(const std::string& path, const GradedBasis& basis) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return read_operator(in, basis);
}

}  // namespace polyball

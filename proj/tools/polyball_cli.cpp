// polyball: verification harness for weighted Fock-space models.
//
// Exit codes: 0 pass, 1 check failure, 2 usage, 3 precondition violation.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <stdexcept>
#include <string>

#include "polyball/suites.hpp"

using namespace polyball;

namespace {

struct Options {
  int k = 1;
  std::vector<int> n{1}, m{1}, L{1};
  int d = 1;
  std::uint64_t seed = 1;
  double tol = -1.0;
  std::string out;
  std::string spec_file;
  bool timing = false;

  std::string source = "random-symbol";
  std::string operator_file;
  std::string export_path;
  std::string export_format = "coo";

  std::string point = "random";
  std::string point_file;
  double r = 0.5;
  double rho = 1e-3;
  long dim = 2;
  double scale = 1.0;
  std::vector<int> point_L;
  int transforms = 10;

  int max_quadrature = 100000;
};

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

TruncationSpec make_spec(const Options& o) {
  TruncationSpec s;
  if (!o.spec_file.empty()) {
    std::ifstream in(o.spec_file);
    if (!in) throw UsageError("cannot open spec file '" + o.spec_file + "'");
    return spec_from_json(Json::parse(in));
  }
  s.k = o.k;
  s.n = o.n;
  s.m = o.m;
  s.L = o.L;
  s.d = o.d;
  // Scalar lists broadcast over the k factors.
  for (auto* v : {&s.n, &s.m, &s.L})
    if (v->size() == 1 && s.k > 1) v->assign(static_cast<std::size_t>(s.k), v->front());
  try {
    s.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return s;
}

double tol_or(const Options& o, double fallback) { return o.tol > 0 ? o.tol : fallback; }

PointTuple make_point(const Options& o, const TruncationSpec& spec) {
  PointTuple x;
  if (o.point == "zero") {
    x.dim = o.dim;
    for (int i = 0; i < spec.k; ++i)
      x.x.emplace_back(static_cast<std::size_t>(spec.n[static_cast<std::size_t>(i)]), DenseOp::Zero(o.dim, o.dim));
  } else if (o.point == "radial") {
    TruncationSpec ps = spec;
    ps.d = 1;
    if (!o.point_L.empty()) ps.L = o.point_L;
    x = radial_model(ps, o.r);
  } else if (o.point == "random") {
    Rng rng(o.seed);
    x = random_pure_point(spec, o.dim, o.rho, rng);
  } else if (o.point == "file") {
    std::ifstream in(o.point_file);
    if (!in) throw UsageError("cannot open point file '" + o.point_file + "'");
    x = point_from_json(Json::parse(in));
  } else {
    throw UsageError("unknown point source '" + o.point + "'");
  }
  if (o.scale != 1.0)
    for (auto& f : x.x)
      for (auto& mtx : f) mtx *= o.scale;
  return x;
}

Report run_toeplitz(const Options& o, const TruncationSpec& spec) {
  const GradedBasis basis(spec);
  OperatorSource src;
  std::optional<DenseOp> op;
  if (o.source == "random-symbol") {
    src = OperatorSource::RandomSymbol;
  } else if (o.source == "random-dense") {
    src = OperatorSource::RandomDense;
  } else if (o.source == "file") {
    src = OperatorSource::File;
    if (!std::ifstream(o.operator_file)) throw UsageError("cannot open operator file '" + o.operator_file + "'");
    op = read_operator_file(o.operator_file, basis);
  } else {
    throw UsageError("unknown operator source '" + o.source + "'");
  }
  Report r = toeplitz_suite(spec, src, o.seed, tol_or(o, kStructuralTol), op);
  if (!o.export_path.empty()) {
    Rng rng(o.seed);
    DenseOp t;
    if (src == OperatorSource::RandomSymbol) {
      t = reconstruct(basis, random_symbol(basis, rng));
    } else if (src == OperatorSource::RandomDense) {
      const auto dim = static_cast<Eigen::Index>(spec.model_dim());
      t = random_dense(dim, dim, rng);
    } else {
      t = *op;
    }
    if (o.export_format != "coo" && o.export_format != "dense") throw UsageError("unknown export format");
    write_operator_file(o.export_path, basis, t, o.export_format == "coo" ? OperatorFormat::Coo : OperatorFormat::Dense);
  }
  return r;
}

int emit(const Options& o, const Json& j, bool pass) {
  const std::string text = j.dump(2) + "\n";
  if (o.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(o.out);
    if (!f) throw std::runtime_error("cannot write '" + o.out + "'");
    f << text;
  }
  return pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weighted Fock-space models of noncommutative poly-hyperballs"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--k", o.k, "number of factors");
    sub->add_option("--n", o.n, "generators per factor")->delimiter(',');
    sub->add_option("--m", o.m, "weight exponents")->delimiter(',');
    sub->add_option("--L", o.L, "truncation degrees")->delimiter(',');
    sub->add_option("--d", o.d, "coefficient dimension");
    sub->add_option("--spec", o.spec_file, "spec JSON file (overrides --k --n --m --L --d)");
    sub->add_option("--seed", o.seed, "PRNG seed");
    sub->add_option("--tol", o.tol, "tolerance");
    sub->add_option("--out", o.out, "write the JSON report here");
    sub->add_flag("--timing", o.timing, "include elapsed_ms per check");
  };
  auto add_point = [&](CLI::App* sub) {
    sub->add_option("--point", o.point, "zero | radial | random | file");
    sub->add_option("--point-file", o.point_file, "point JSON");
    sub->add_option("--r", o.r, "radius for the radial point");
    sub->add_option("--rho", o.rho, "spectral radius of Phi for random points");
    sub->add_option("--dim", o.dim, "point dimension for zero and random points");
    sub->add_option("--point-L", o.point_L, "truncation of the radial point")->delimiter(',');
    sub->add_option("--scale", o.scale, "multiply the point by this factor");
    sub->add_option("--transforms", o.transforms, "random Toeplitz operators for the transform check");
  };

  auto* verify = app.add_subcommand("verify", "operator identities of the universal models");
  add_common(verify);
  auto* toeplitz = app.add_subcommand("toeplitz", "Toeplitz criterion versus Brown-Halmos residual");
  add_common(toeplitz);
  toeplitz->add_option("--source", o.source, "random-symbol | random-dense | file");
  toeplitz->add_option("--operator", o.operator_file, "operator file for --source file");
  toeplitz->add_option("--export", o.export_path, "write the tested operator here");
  toeplitz->add_option("--format", o.export_format, "coo | dense");
  auto* berezin = app.add_subcommand("berezin", "Berezin kernel and transform at a point");
  add_common(berezin);
  add_point(berezin);
  auto* fourier = app.add_subcommand("fourier", "homogeneous decomposition and Fejer sums");
  add_common(fourier);
  fourier->add_option("--max-quadrature", o.max_quadrature, "shifts checked by quadrature");
  auto* report = app.add_subcommand("report", "all suites");
  add_common(report);
  add_point(report);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    const TruncationSpec spec = make_spec(o);
    if (verify->parsed()) {
      const Report r = verify_suite(spec, tol_or(o, kStructuralTol));
      return emit(o, r.to_json(o.timing), r.pass());
    }
    if (toeplitz->parsed()) {
      const Report r = run_toeplitz(o, spec);
      return emit(o, r.to_json(o.timing), r.pass());
    }
    if (berezin->parsed()) {
      const Report r = berezin_suite(spec, make_point(o, spec), o.seed, tol_or(o, kTailTol), o.transforms);
      return emit(o, r.to_json(o.timing), r.pass());
    }
    if (fourier->parsed()) {
      const Report r = fourier_suite(spec, o.seed, tol_or(o, 1e-12), o.max_quadrature);
      return emit(o, r.to_json(o.timing), r.pass());
    }
    std::vector<Report> all;
    all.push_back(verify_suite(spec, tol_or(o, kStructuralTol)));
    all.push_back(toeplitz_suite(spec, OperatorSource::RandomSymbol, o.seed, tol_or(o, kStructuralTol)));
    all.back().suite = "toeplitz/random-symbol";
    all.push_back(toeplitz_suite(spec, OperatorSource::RandomDense, o.seed, tol_or(o, kStructuralTol)));
    all.back().suite = "toeplitz/random-dense";
    all.push_back(fourier_suite(spec, o.seed, tol_or(o, 1e-12), o.max_quadrature));
    all.push_back(berezin_suite(spec, make_point(o, spec), o.seed, tol_or(o, kTailTol), o.transforms));
    Json j{{"spec", spec_to_json(spec)}, {"seed", o.seed}, {"rng", std::string(kRngName)}, {"suites", Json::array()}};
    bool pass = true;
    for (const auto& r : all) {
      j["suites"].push_back(r.to_json(o.timing));
      pass = pass && r.pass();
    }
    j["pass"] = pass;
    return emit(o, j, pass);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "precondition violated: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

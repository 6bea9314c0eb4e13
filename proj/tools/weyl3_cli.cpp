#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "weyl3/weyl3.hpp"

namespace {

using namespace weyl3;

constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;

/// lambda samples used when a command needs a few regular points and none are given.
std::vector<cplx> default_samples() {
  return {{2.0, 3.0},   {-10.0, 5.0}, {20.0, 1.0},  {-7.0, -4.0}, {30.0, 20.0},
          {5.0, -8.0},  {-15.0, 12.0}, {12.0, 9.0}, {-3.0, 25.0}, {40.0, -6.0}};
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty() && path != "-") {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
      if (!*file_) throw ValidationError("--out: cannot open '" + path + "' for writing");
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

std::string num(double v) { return format_double(v); }

std::vector<cplx> parse_coeff_list(const std::string& text, const std::string& what) {
  std::vector<cplx> out;
  for (const std::string& t : detail::split(text, ',')) out.emplace_back(detail::parse_double(t, what), 0.0);
  return out;
}

ProblemDef load(const std::string& path, double steps) {
  ProblemDef p = load_problem(path);
  if (steps > 0.0) {
    SolverSettings s = p.solver();
    s.resolution.steps_per_unit = steps;
    p = p.with_solver(s);
  }
  return p;
}

json matrix_json(const Mat3& m) {
  json rows = json::array();
  for (int i = 0; i < 3; ++i) {
    json r = json::array();
    for (int j = 0; j < 3; ++j) r.push_back(json::array({m(i, j).real(), m(i, j).imag()}));
    rows.push_back(r);
  }
  return rows;
}

int run_check_associated(const std::string& problem, int s, double kappa_re, double kappa_im,
                         const std::string& sigma_text, const std::string& y_text, int points, bool printed,
                         const std::string& out_path) {
  Polynomial sigma;
  ExpressionParams params{s, cplx(kappa_re, kappa_im)};
  double length = 1.0;
  if (!problem.empty()) {
    const ProblemDef p = load_problem(problem);
    const auto poly = p.sigma().as_polynomial();
    if (!poly) throw UnsupportedRepresentation("check-associated needs a polynomial sigma");
    sigma = *poly;
    params = p.params();
    length = p.endpoint();
  } else {
    sigma = Polynomial(parse_coeff_list(sigma_text, "--sigma"));
  }
  params.validate();
  const Polynomial y(parse_coeff_list(y_text, "--y"));
  AssociatedMatrixCoeffs a = matrix_coeffs(params);
  if (printed) a.a22 = 2.0 * params.kappa * static_cast<double>(params.s);
  std::vector<double> grid = detail::linspace(0.0, length, std::max(points, 2));
  const AssociationResidual r = check_association(sigma, a, params, y, grid);
  json doc{{"s", params.s},
           {"kappa", json::array({params.kappa.real(), params.kappa.imag()})},
           {"a22", json::array({a.a22.real(), a.a22.imag()})},
           {"max_residual", r.max_residual},
           {"scale", r.scale},
           {"relative_residual", r.relative()}};
  Output out(out_path);
  out.stream() << doc.dump(2) << "\n";
  return 0;
}

int run_weyl(const std::string& problem, const std::string& grid, double steps, unsigned threads,
             const std::string& out_path) {
  const ProblemDef p = load(problem, steps);
  const std::vector<cplx> lambdas = parse_lambda_grid(grid);
  const std::vector<WeylSample> samples =
      parallel_map(lambdas, [&](cplx l) { return sample_weyl(p, l); }, threads);
  Output out(out_path);
  std::ostream& os = out.stream();
  os << "lambda_re,lambda_im,m21_re,m21_im,m31_re,m31_im,m32_re,m32_im,pivot_min,pole_flag\n";
  for (const WeylSample& s : samples) {
    os << num(s.lambda.real()) << ',' << num(s.lambda.imag());
    for (auto [i, j] : {std::pair{1, 0}, {2, 0}, {2, 1}}) os << ',' << num(s.M(i, j).real()) << ',' << num(s.M(i, j).imag());
    os << ',' << num(s.pivot_min()) << ',' << (s.pole ? 1 : 0) << '\n';
  }
  return 0;
}

std::pair<int, int> parse_jk(const std::string& text) {
  if (text.size() != 2 || text[0] < '1' || text[0] > '3' || text[1] < '1' || text[1] > '3')
    throw ValidationError("--jk: expected two digits such as 11, 21 or 22");
  const int j = text[0] - '0', k = text[1] - '0';
  if (k > j) throw ValidationError("--jk: need k <= j");
  return {j, k};
}

int run_spectrum(const std::string& problem, const std::string& jk, int count, const std::string& region,
                 bool fit, double steps, const std::string& out_path) {
  const ProblemDef p = load(problem, steps);
  const auto [j, k] = parse_jk(jk);
  Spectrum spec;
  if (region == "auto") {
    spec = find_eigenvalues_auto(p, j, k, count);
  } else {
    const std::vector<std::string> f = detail::split(region, ':');
    if (f.size() != 4) throw ValidationError("--region: expected auto or re_lo:re_hi:im_lo:im_hi");
    const Rectangle r{detail::parse_double(f[0], "--region"), detail::parse_double(f[1], "--region"),
                      detail::parse_double(f[2], "--region"), detail::parse_double(f[3], "--region")};
    spec = find_eigenvalues(p, j, k, r, count);
  }
  std::optional<AsymptoticsFit> af;
  if (fit) af = fit_asymptotics(spec);
  Output out(out_path);
  std::ostream& os = out.stream();
  os << "n,lambda_re,lambda_im,residual,multiplicity\n";
  for (const Eigenvalue& e : spec.eigenvalues)
    os << e.n << ',' << num(e.lambda.real()) << ',' << num(e.lambda.imag()) << ',' << num(e.residual) << ','
       << e.multiplicity << '\n';
  if (af) {
    os << "\n# fit\nk,slope,chi,first_n,last_n\n";
    os << af->k << ',' << num(af->slope) << ',' << num(af->chi) << ',' << af->first_n << ',' << af->last_n << '\n';
  }
  for (const Eigenvalue& e : spec.eigenvalues)
    if (!e.converged)
      std::cerr << json{{"warning", "non-convergence"}, {"n", e.n}, {"residual", e.residual}}.dump() << "\n";
  return 0;
}

int run_isospectral(const std::string& problem, std::optional<double> shift, const std::string& affine,
                    const std::string& grid, double steps, const std::string& out_path) {
  const ProblemDef p = load(problem, steps);
  ShiftSpec sh;
  if (!affine.empty()) {
    const std::vector<std::string> f = detail::split(affine, ',');
    if (f.size() != 2) throw ValidationError("--affine: expected c1,c2");
    sh = ShiftSpec::affine(detail::parse_double(f[0], "--affine"), detail::parse_double(f[1], "--affine"));
  } else if (shift) {
    sh = ShiftSpec::constant(*shift);
  } else {
    throw ValidationError("isospectral-demo: give --shift c or --affine c1,c2");
  }
  const IsospectralShift iso = isospectral_shift(p, sh);
  const std::vector<cplx> lambdas = grid.empty() ? default_samples() : parse_lambda_grid(grid);
  const UniquenessResult u = uniqueness_residual(p, iso.partner, lambdas);
  json doc{{"partner", problem_json(iso.partner)},
           {"R0", matrix_json(iso.mapping_at(0.0))},
           {"R1", matrix_json(iso.mapping_at(p.endpoint()))},
           {"max_weyl_difference", u.max_residual},
           {"samples_used", u.used()},
           {"samples_skipped", static_cast<int>(lambdas.size()) - u.used()}};
  Output out(out_path);
  out.stream() << doc.dump(2) << "\n";
  return 0;
}

int run_recover_v(const std::string& problem, bool hide_v, const std::string& grid, double steps,
                  const std::string& out_path) {
  const ProblemDef p = load(problem, steps);
  const std::vector<cplx> lambdas = grid.empty() ? default_samples() : parse_lambda_grid(grid);
  const RecoveredV r = recover_V(p, lambdas);
  Output out(out_path);
  std::ostream& os = out.stream();
  os << "entry,status,value_re,value_im,spread" << (hide_v ? "" : ",true_re,true_im") << '\n';
  for (const RecoveredEntry& e : r.entries) {
    const bool known = e.status != EntryStatus::free;
    os << e.name << ',' << to_string(e.status) << ',' << (known ? num(e.value.real()) : "") << ','
       << (known ? num(e.value.imag()) : "") << ',' << num(e.spread);
    if (!hide_v) {
      cplx truth = 0.0;
      if (e.name.size() == 3) {
        const int l = e.name[1] - '0', j = e.name[2] - '0';
        truth = p.V().row(l)(j - 1);
      } else {
        const Row3 v1 = p.V().row(1), v2 = p.V().row(2);
        truth = v2(0) - v1(0) * v2(1);
      }
      os << ',' << num(truth.real()) << ',' << num(truth.imag());
    }
    os << '\n';
  }
  return 0;
}

int report(const std::exception& e, const char* kind, int code) {
  std::cerr << json{{"error", kind}, {"message", e.what()}, {"exit_code", code}}.dump() << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weyl-Yurko matrices, characteristic functions and spectra of third-order operators"};
  app.require_subcommand(1);

  std::string problem, grid, out, jk = "11", region = "auto", sigma_text = "0", y_text, affine;
  double steps = 0.0, kappa_re = 0.0, kappa_im = 0.0;
  int s = 1, count = 10, points = 21;
  unsigned threads = default_threads();
  bool fit = false, hide_v = false, printed = false;
  std::optional<double> shift;

  auto common = [&](CLI::App* c, bool needs_problem) {
    auto* opt = c->add_option("--problem", problem, "problem JSON file");
    if (needs_problem) opt->required();
    c->add_option("--out", out, "output file (default stdout)");
    c->add_option("--steps", steps, "propagator steps per unit length")->check(CLI::PositiveNumber);
  };

  auto* check = app.add_subcommand("check-associated", "verify y^[3] = l(y) for polynomial sigma and y");
  common(check, false);
  check->add_option("--s", s, "expression parameter s (0 or 1)");
  check->add_option("--kappa", kappa_re, "real part of kappa");
  check->add_option("--kappa-im", kappa_im, "imaginary part of kappa");
  check->add_option("--sigma", sigma_text, "sigma coefficients c0,c1,... (ignored with --problem)");
  check->add_option("--y", y_text, "test function coefficients c0,c1,...")->required();
  check->add_option("--points", points, "grid points on [0, length]");
  check->add_flag("--printed-a22", printed, "use a22 = 2 kappa s instead of 2 kappa");

  auto* weyl = app.add_subcommand("weyl", "Weyl-Yurko matrix on a lambda grid (CSV)");
  weyl->alias("halfline-weyl");
  common(weyl, true);
  weyl->add_option("--lambda-grid", grid, "real:a:b:n | ray:arg:r0:r1:n | points:file")->required();
  weyl->add_option("--threads", threads, "worker threads");

  auto* spectrum = app.add_subcommand("spectrum", "zeros of Delta_jk (CSV)");
  common(spectrum, true);
  spectrum->add_option("--jk", jk, "indices jk, e.g. 11 or 22");
  spectrum->add_option("--count", count, "number of eigenvalues");
  spectrum->add_option("--region", region, "auto or re_lo:re_hi:im_lo:im_hi");
  spectrum->add_flag("--fit", fit, "append the asymptotic fit");

  auto* iso = app.add_subcommand("isospectral-demo", "partner problem with the same Weyl-Yurko matrix (JSON)");
  common(iso, true);
  iso->add_option("--shift", shift, "constant shift c (s = 1)");
  iso->add_option("--affine", affine, "affine shift c1,c2 meaning c1 x + c2 (s = 0)");
  iso->add_option("--lambda-grid", grid, "lambda samples for the check");

  auto* rec = app.add_subcommand("recover-v", "recover V_1 and parts of V_2 from Phi(1, lambda) (CSV)");
  common(rec, true);
  rec->add_flag("--hide-v", hide_v, "do not report the true V entries");
  rec->add_option("--lambda-grid", grid, "lambda samples");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return report(e, "usage", kExitValidation);
  }

  try {
    if (*check) return run_check_associated(problem, s, kappa_re, kappa_im, sigma_text, y_text, points, printed, out);
    if (*weyl) return run_weyl(problem, grid, steps, threads, out);
    if (*spectrum) return run_spectrum(problem, jk, count, region, fit, steps, out);
    if (*iso) return run_isospectral(problem, shift, affine, grid, steps, out);
    if (*rec) return run_recover_v(problem, hide_v, grid, steps, out);
  } catch (const ValidationError& e) {
    return report(e, e.kind(), kExitValidation);
  } catch (const NumericalError& e) {
    return report(e, e.kind(), kExitNumerical);
  } catch (const std::exception& e) {
    return report(e, "internal", kExitNumerical);
  }
  return 0;
}

// Batch front door: parse a problem file, run qualification + solve +
// certify, emit reports and traces.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "entmin/entmin.hpp"
#include "entmin/problem_io.hpp"

namespace {

using entmin::json;
using entmin::Vec;

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitNotOptimal = 2;

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw entmin::InvalidArgument("cannot open file: " + path);
  json j;
  in >> j;
  return j;
}

Vec parse_comma_list(const std::string& text) {
  std::vector<double> vals;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    vals.push_back(std::stod(item));
  }
  Vec v(static_cast<Eigen::Index>(vals.size()));
  for (std::size_t i = 0; i < vals.size(); ++i) {
    v[static_cast<Eigen::Index>(i)] = vals[i];
  }
  return v;
}

void write_trace_csv(const std::string& path, const entmin::DualTrace& trace) {
  std::ofstream out(path);
  out.precision(17);
  out << "iteration,objective,grad_norm,step\n";
  for (std::size_t i = 0; i < trace.records.size(); ++i) {
    const auto& rec = trace.records[i];
    out << i << ',' << rec.objective << ',' << rec.grad_norm << ','
        << rec.step << '\n';
  }
}

void write_density_csv(const std::string& path, const entmin::GroundSpace& g,
                       const entmin::Density& q) {
  std::ofstream out(path);
  out.precision(17);
  out << "point,weight,q_hat\n";
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Eigen::Index ii = static_cast<Eigen::Index>(i);
    out << g.points()[ii] << ',' << g.weights()[ii] << ',' << q[ii] << '\n';
  }
}

struct SolveFlags {
  std::string file;
  bool qualify = false;
  bool oracle = false;
  double oracle_resolution = 1e-4;
  bool dump_normalized = false;
  std::string trace_path;
  std::string density_path;
  std::optional<double> gap_tol;
  std::optional<int> max_iter;
  std::optional<double> ls_shrink;
  std::optional<double> domain_margin;
  std::string init_y;
};

int run_solve(const SolveFlags& flags) {
  entmin::ProblemFile pf = entmin::parse_problem(read_json_file(flags.file));
  if (flags.gap_tol) pf.options.gap_tol = *flags.gap_tol;
  if (flags.max_iter) pf.options.max_iter = *flags.max_iter;
  if (flags.ls_shrink) pf.options.ls_shrink = *flags.ls_shrink;
  if (flags.domain_margin) pf.options.domain_margin = *flags.domain_margin;
  if (!flags.init_y.empty()) pf.options.init_y = parse_comma_list(flags.init_y);

  if (flags.dump_normalized) {
    std::cout << entmin::dump_normalized(pf).dump(2) << std::endl;
    return kExitOk;
  }

  entmin::MomentProblem problem = pf.build();
  json report;
  if (flags.qualify) {
    const entmin::FeasibilityReport feas = entmin::feasibility_check(problem);
    const entmin::IcorReport icor = entmin::icor_check(problem);
    std::cout << "feasibility: " << entmin::to_string(feas.verdict) << '\n';
    std::cout << "icor: " << entmin::to_string(icor.verdict) << std::endl;
    report["feasibility"] = entmin::to_string(feas.verdict);
    report["icor"] = entmin::to_string(icor.verdict);
  }

  const entmin::DualSolution sol = entmin::solve_dual(problem);
  report["status"] = entmin::to_string(sol.status);
  report["iterations"] = sol.iterations;
  report["near_domain_boundary"] = sol.near_domain_boundary;
  report.update(entmin::certificate_to_json(sol.cert));
  if (flags.oracle) {
    const entmin::OracleResult oracle =
        entmin::brute_force_primal(problem, flags.oracle_resolution);
    report["oracle_value"] = oracle.value;
    report["oracle_abs_diff"] = std::abs(oracle.value - sol.cert.primal_value);
  }
  std::cout << report.dump(2) << std::endl;

  if (!flags.trace_path.empty()) write_trace_csv(flags.trace_path, sol.trace);
  if (!flags.density_path.empty()) {
    write_density_csv(flags.density_path, problem.ground(), sol.cert.q_hat);
  }
  return sol.status == entmin::SolveStatus::Converged ? kExitOk
                                                      : kExitNotOptimal;
}

int run_marginals(const std::string& file, std::optional<double> tol,
                  std::optional<int> max_sweeps,
                  const std::string& density_path) {
  entmin::MarginalFile mf = entmin::parse_marginal(read_json_file(file));
  if (tol) mf.tol = *tol;
  if (max_sweeps) mf.max_sweeps = *max_sweeps;
  entmin::MarginalProblem problem = mf.build();
  json report;
  try {
    const entmin::MarginalSolution sol =
        entmin::solve_marginals(problem, mf.tol, mf.max_sweeps);
    const entmin::DualCertificate cert =
        entmin::marginals_certificate(problem, sol.q_hat, sol.scaling);
    report["status"] = "Converged";
    report["sweeps"] = sol.sweeps;
    report.update(entmin::certificate_to_json(cert));
    std::cout << report.dump(2) << std::endl;
    if (!density_path.empty()) {
      std::ofstream out(density_path);
      out.precision(17);
      out << "point,weight,q_hat\n";
      for (Eigen::Index a = 0; a < sol.q_hat.rows(); ++a) {
        for (Eigen::Index b = 0; b < sol.q_hat.cols(); ++b) {
          const double r = problem.kernel()(a, b);
          out << a * sol.q_hat.cols() + b << ',' << r << ','
              << (r > 0.0 ? sol.q_hat(a, b) / r : 0.0) << '\n';
        }
      }
    }
    return kExitOk;
  } catch (const entmin::NotConverged& e) {
    report["status"] = "NotConverged";
    report["sweeps"] = e.iterations;
    report["error"] = e.what();
    std::cout << report.dump(2) << std::endl;
    return kExitNotOptimal;
  } catch (const entmin::ZeroDenominator& e) {
    report["status"] = "Infeasible";
    report["error"] = e.what();
    std::cout << report.dump(2) << std::endl;
    return kExitNotOptimal;
  }
}

int run_gamma_star(const std::string& file, const std::string& x_text) {
  entmin::ProblemFile pf = entmin::parse_problem(read_json_file(file));
  entmin::MomentProblem base = pf.build();
  const Vec x = parse_comma_list(x_text);
  json report;
  report["x"] = entmin::detail::vec_to_json(x);
  const double value = entmin::gamma_star_of(base, x);
  if (std::isfinite(value)) {
    report["gamma_star"] = value;
    report["status"] = "Converged";
    std::cout << report.dump(2) << std::endl;
    return kExitOk;
  }
  report["gamma_star"] = "inf";
  report["status"] = "DualUnbounded";
  std::cout << report.dump(2) << std::endl;
  return kExitNotOptimal;
}

int run_norm(const std::string& file) {
  const json j = read_json_file(file);
  entmin::GroundSpace ground(
      entmin::detail::parse_vec(j.at("ground").at("points"), "ground.points"),
      entmin::detail::parse_vec(j.at("ground").at("weights"),
                                "ground.weights"));
  const Vec u = entmin::detail::parse_vec(j.at("u"), "u");
  std::string rho_name = j.contains("rho") ? j["rho"].get<std::string>()
                                           : std::string("lambda_max");
  double tol = j.contains("tol") ? j["tol"].get<double>() : 1e-12;

  std::optional<Vec> m;
  if (j.at("entropy").contains("m")) {
    const json& jm = j["entropy"]["m"];
    if (jm.is_number()) {
      Vec mv(1);
      mv[0] = jm.get<double>();
      m = mv;
    } else {
      m = entmin::detail::parse_vec(jm, "entropy.m");
    }
  }
  entmin::EntropySpec spec =
      entmin::catalog(j.at("entropy").at("name").get<std::string>(), ground, m);
  entmin::YoungFamily fam = entmin::young_family(spec);
  entmin::PointwiseFn rho;
  if (rho_name == "lambda_max") {
    rho = fam.lambda_max;
  } else if (rho_name == "lambda") {
    rho = fam.lambda;
  } else if (rho_name == "lambda_plus") {
    rho = fam.lambda_plus;
  } else if (rho_name == "lambda_minus") {
    rho = fam.lambda_minus;
  } else {
    throw entmin::InvalidArgument("norm: unknown rho '" + rho_name + "'");
  }
  json report;
  report["rho"] = rho_name;
  report["norm"] = entmin::luxemburg_norm(u, rho, ground, tol);
  std::cout << report.dump(2) << std::endl;
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"entmin: convex entropy minimization with dual certificates"};
  app.require_subcommand(1);

  SolveFlags sf;
  CLI::App* solve = app.add_subcommand("solve", "solve a moment problem file");
  solve->add_option("file", sf.file, "problem JSON file")->required();
  solve->add_flag("--qualify", sf.qualify,
                  "print feasibility/icor verdicts before solving");
  solve->add_flag("--oracle", sf.oracle,
                  "cross-check against the brute-force primal oracle");
  solve->add_option("--oracle-resolution", sf.oracle_resolution,
                    "oracle grid resolution");
  solve->add_flag("--dump-normalized", sf.dump_normalized,
                  "echo the parsed problem in canonical form and exit");
  solve->add_option("--trace", sf.trace_path, "write iteration trace CSV");
  solve->add_option("--density", sf.density_path, "write recovered density CSV");
  double gap_tol = 0.0;
  int max_iter = 0;
  double ls_shrink = 0.0;
  double domain_margin = 0.0;
  CLI::Option* o_gap = solve->add_option("--gap-tol", gap_tol, "duality-gap stop");
  CLI::Option* o_it = solve->add_option("--max-iter", max_iter, "iteration cap");
  CLI::Option* o_ls = solve->add_option("--ls-shrink", ls_shrink,
                                        "line-search shrink factor");
  CLI::Option* o_dm = solve->add_option("--domain-margin", domain_margin,
                                        "fraction of the step to dom gamma");
  solve->add_option("--init-y", sf.init_y, "comma-separated initial dual point");

  std::string marg_file;
  std::optional<double> marg_tol;
  std::optional<int> marg_sweeps;
  std::string marg_density;
  double marg_tol_val = 0.0;
  int marg_sweeps_val = 0;
  CLI::App* marginals =
      app.add_subcommand("marginals", "solve a marginal problem by IPF");
  marginals->add_option("file", marg_file, "marginals JSON file")->required();
  CLI::Option* o_mt = marginals->add_option("--tol", marg_tol_val,
                                            "marginal l1 stopping tolerance");
  CLI::Option* o_ms =
      marginals->add_option("--max-sweeps", marg_sweeps_val, "sweep cap");
  marginals->add_option("--density", marg_density,
                        "write fitted density CSV");

  std::string gs_file;
  std::string gs_x;
  CLI::App* gamma_star = app.add_subcommand(
      "gamma-star", "evaluate Gamma*(x) through the singleton dual");
  gamma_star->add_option("file", gs_file, "problem JSON file")->required();
  gamma_star->add_option("--x", gs_x, "comma-separated moment vector")
      ->required();

  std::string norm_file;
  CLI::App* norm =
      app.add_subcommand("norm", "evaluate a Luxemburg norm on a grid");
  norm->add_option("file", norm_file, "norm JSON file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*solve) {
      if (*o_gap) sf.gap_tol = gap_tol;
      if (*o_it) sf.max_iter = max_iter;
      if (*o_ls) sf.ls_shrink = ls_shrink;
      if (*o_dm) sf.domain_margin = domain_margin;
      return run_solve(sf);
    }
    if (*marginals) {
      if (*o_mt) marg_tol = marg_tol_val;
      if (*o_ms) marg_sweeps = marg_sweeps_val;
      return run_marginals(marg_file, marg_tol, marg_sweeps, marg_density);
    }
    if (*gamma_star) return run_gamma_star(gs_file, gs_x);
    if (*norm) return run_norm(norm_file);
  } catch (const entmin::ZeroDenominator& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return kExitNotOptimal;
  } catch (const entmin::NotConverged& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return kExitNotOptimal;
  } catch (const entmin::Error& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return kExitInput;
  }
  return kExitInput;
}

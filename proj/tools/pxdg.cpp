#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "pxdg/csv.hpp"
#include "pxdg/exact_solution.hpp"
#include "pxdg/experiments.hpp"
#include "pxdg/problem.hpp"
#include "pxdg/properties.hpp"
#include "pxdg/solve.hpp"
#include "pxdg/svg.hpp"

namespace fs = std::filesystem;
using namespace pxdg;

namespace {

enum Exit { ok = 0, not_converged = 1, property_failure = 2, config_error = 3 };

struct Options {
  std::string method = "dg";
  std::size_t n = 41;
  std::vector<std::size_t> ns;
  int k = 1;
  int l = -1;  // defaults to k
  std::string problem = "paper1d";
  std::string quad = "trapezoid";
  int m_panels = 1;
  double tol = 0.0;  // 0: optimizer default
  int max_iters = 0;
  std::string out = "out";
  std::string plot;
  std::uint64_t seed = PropertyOptions{}.seed;
  int workers = 0;
  std::vector<std::string> suites;
  bool debug_face_size = false;
  double eps = 0.01, a = 0.01, C = 1.3;
  int samples = 1000;
};

// "custom:name" falls back to the bundled problem directory for bare names.
std::string locate_problem(const std::string& id) {
  if (id.rfind("custom:", 0) != 0) return id;
  const fs::path path = id.substr(7);
  if (fs::exists(path) || path.has_parent_path()) return id;
  std::vector<fs::path> dirs;
  if (const char* env = std::getenv("PXDG_PROBLEM_DIR")) dirs.emplace_back(env);
  dirs.emplace_back(PXDG_PROBLEM_DIR);
  for (const auto& dir : dirs) {
    if (fs::exists(dir / path)) return "custom:" + (dir / path).string();
  }
  return id;
}

RunSettings settings_from(const Options& o) {
  if (o.k < 1) throw ConfigError("--k must be at least 1");
  const int l = o.l < 0 ? o.k : o.l;
  if (l < 0) throw ConfigError("--l must be non-negative");
  if (o.m_panels < 1) throw ConfigError("--m-panels must be at least 1");
  RunSettings s;
  s.degree = o.k;
  s.lifting = LiftingConfig{l};
  try {
    s.quadrature = QuadratureSpec::parse(o.quad, o.m_panels);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("--quad: ") + e.what());
  }
  if (o.tol < 0.0) throw ConfigError("--tol must be positive");
  if (o.tol > 0.0) {
    s.bfgs.grad_tol = o.tol;
    s.bfgs.stall_grad_tol = std::max(s.bfgs.stall_grad_tol, o.tol);
  }
  if (o.max_iters > 0) s.bfgs.max_iters = o.max_iters;
  return s;
}

void check_n(std::size_t n) {
  if (n < 2) throw ConfigError("n must be at least 2");
}

void check_plot(const Options& o) {
  if (!o.plot.empty() && o.plot != "svg") throw ConfigError("--plot supports only svg");
}

std::string to_text(const std::function<void(std::ostream&)>& write) {
  std::ostringstream os;
  write(os);
  return os.str();
}

std::string path_in(const Options& o, const std::string& name) { return (fs::path(o.out) / name).string(); }

int cmd_solve(const Options& o) {
  check_n(o.n);
  check_plot(o);
  const Method method = parse_method(o.method);
  const Problem problem = resolve_problem(locate_problem(o.problem));
  const RunSettings settings = settings_from(o);
  const SolveReport report = run_method(problem, method, o.n, settings);

  const std::string stem = to_string(method) + "_n" + std::to_string(o.n);
  write_file_atomic(path_in(o, stem + "_solution.csv"), to_text([&](std::ostream& os) { write_csv(os, report.solution); }));
  write_file_atomic(path_in(o, stem + "_terms.csv"), to_text([&](std::ostream& os) {
                      write_csv_header(os, report.terms);
                      write_csv_row(os, report.terms);
                    }));
  write_file_atomic(path_in(o, stem + "_history.csv"),
                    to_text([&](std::ostream& os) { write_history_csv(os, report); }));
  if (o.plot == "svg") {
    write_file_atomic(path_in(o, stem + "_solution.svg"),
                      solution_svg(problem, report, problem.id + " " + to_string(method) + " n=" + std::to_string(o.n)));
  }
  std::cout << "problem " << problem.id << "\n"
            << "method " << to_string(method) << " n=" << o.n << " k=" << settings.degree
            << " l=" << settings.lifting.degree << " quad=" << settings.quadrature.to_string()
            << " m=" << settings.quadrature.panels << "\n"
            << "status " << to_string(report.status) << " iterations " << report.iterations << " evaluations "
            << report.evaluations << "\n"
            << "energy " << format_double(report.terms.total) << "\n";
  if (problem.exact) {
    const ErrorMetrics e = measure_errors(report.solution, reference_from(*problem.exact), problem.spec.p);
    std::cout << "max_nodal_error " << format_double(e.max_nodal_error) << "\n"
              << "l1_error " << format_double(e.l1_error) << "\n"
              << "luxemburg_error " << format_double(e.luxemburg_error) << "\n";
  }
  std::cout << "output " << path_in(o, stem + "_*") << "\n";
  return report.acceptable() ? ok : not_converged;
}

int cmd_convergence(const Options& o) {
  check_plot(o);
  std::vector<std::size_t> ns = o.ns.empty() ? std::vector<std::size_t>{10, 20, 40, 80, 160} : o.ns;
  for (std::size_t n : ns) check_n(n);
  const Method method = parse_method(o.method);
  const Problem problem = resolve_problem(locate_problem(o.problem));
  const RunSettings settings = settings_from(o);
  const ConvergenceStudy study = convergence_study(problem, method, ns, settings, resolve_workers(o.workers));

  const std::string stem = "convergence_" + to_string(method);
  write_file_atomic(path_in(o, stem + ".csv"), to_text([&](std::ostream& os) { write_convergence_csv(os, study); }));
  if (o.plot == "svg" && study.rows.size() >= 2) {
    auto column = [&](double ConvergenceRow::*member) {
      std::vector<double> v;
      for (const auto& r : study.rows) v.push_back(r.*member);
      return v;
    };
    const std::vector<double> h = column(&ConvergenceRow::h);
    std::vector<PlotSeries> series = {
        {"luxemburg error", h, column(&ConvergenceRow::luxemburg_error), "#1f77b4", false},
        {"gradient error", h, column(&ConvergenceRow::gradient_error), "#d62728", false},
        {"max nodal error", h, column(&ConvergenceRow::max_nodal_error), "#2ca02c", false},
    };
    if (method == Method::dg) {
      series.push_back({"lifting norm", h, column(&ConvergenceRow::lifting_norm), "#9467bd", true});
    }
    PlotOptions po;
    po.title = problem.id + " " + to_string(method);
    po.x_label = "h";
    po.y_label = "error";
    po.log_x = po.log_y = true;
    for (const auto& s : series) {
      for (double y : s.y) {
        if (!(y > 0.0)) po.log_y = false;
      }
    }
    write_file_atomic(path_in(o, stem + ".svg"), line_chart(series, po));
  }

  std::cout << "problem " << problem.id << " reference " << study.reference << "\n";
  bool all_ok = true;
  for (const auto& r : study.rows) {
    std::cout << "n=" << r.n << " status " << to_string(r.status) << " luxemburg_error "
              << format_double(r.luxemburg_error) << " energy " << format_double(r.energy) << "\n";
    all_ok = all_ok && (r.status == BfgsStatus::converged || r.status == BfgsStatus::roundoff_stall);
  }
  std::cout << "output " << path_in(o, stem + ".csv") << "\n";
  return all_ok ? ok : not_converged;
}

int cmd_compare(const Options& o) {
  check_plot(o);
  const std::vector<std::size_t> ns = o.ns.empty() ? std::vector<std::size_t>{o.n} : o.ns;
  for (std::size_t n : ns) check_n(n);
  const Problem problem = resolve_problem(locate_problem(o.problem));
  const RunSettings settings = settings_from(o);
  const std::vector<CompareEntry> entries = compare_methods(problem, ns, settings, resolve_workers(o.workers));

  write_file_atomic(path_in(o, "compare.csv"), to_text([&](std::ostream& os) { write_compare_csv(os, entries); }));
  bool all_ok = true;
  for (const auto& e : entries) {
    if (o.plot == "svg") {
      write_file_atomic(path_in(o, "compare_n" + std::to_string(e.n) + ".svg"), compare_svg(problem, e));
    }
    std::cout << "n=" << e.n << " dg " << to_string(e.dg.status) << " max_nodal "
              << format_double(e.dg_errors.max_nodal_error) << " l1 " << format_double(e.dg_errors.l1_error)
              << " | cg(2n) " << to_string(e.cg.status) << " max_nodal " << format_double(e.cg_errors.max_nodal_error)
              << " l1 " << format_double(e.cg_errors.l1_error) << "\n";
    all_ok = all_ok && e.dg.acceptable() && e.cg.acceptable();
  }
  std::cout << "output " << path_in(o, "compare.csv") << "\n";
  return all_ok ? ok : not_converged;
}

int cmd_exact(const Options& o, bool out_given) {
  if (o.samples < 2) throw ConfigError("--samples must be at least 2");
  ExactSolution sol = [&] {
    try {
      return build_exact(o.eps, o.a, o.C);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }();
  std::ostringstream text;
  CsvWriter csv(text);
  csv.header({"x", "u", "du"});
  for (int i = 0; i < o.samples; ++i) {
    const double x = -1.0 + 2.0 * i / (o.samples - 1);
    const auto [u, du] = eval_exact(sol, x);
    csv.row({x, u, du});
  }
  const std::string out = out_given ? o.out : "exact.csv";
  write_file_atomic(out, text.str());
  std::cout << "B " << format_double(sol.B()) << "\n"
            << "du(0) " << format_double(sol.derivative(0.0)) << "\n"
            << "C^(1/eps) " << format_double(std::pow(o.C, 1.0 / o.eps)) << "\n"
            << "energy " << format_double(sol.energy(true)) << "\n"
            << "output " << out << "\n";
  return ok;
}

int cmd_properties(const Options& o) {
  PropertyOptions po;
  po.seed = o.seed;
  po.suites = o.suites;
  po.face_rule = o.debug_face_size ? FaceSizeRule::squared_debug : FaceSizeRule::average;
  const std::vector<std::string> known = property_suites();
  for (const auto& s : po.suites) {
    if (std::find(known.begin(), known.end(), s) == known.end()) throw ConfigError("unknown suite: " + s);
  }
  const std::vector<PropertyResult> results = run_properties(po);
  write_file_atomic(path_in(o, "properties.csv"),
                    to_text([&](std::ostream& os) { write_properties_csv(os, results); }));
  int failed = 0;
  for (const auto& r : results) {
    std::cout << (r.passed ? "PASS " : "FAIL ") << r.suite << "." << r.name << "  " << r.detail << "\n";
    failed += r.passed ? 0 : 1;
  }
  std::cout << results.size() - failed << "/" << results.size() << " properties passed, seed " << o.seed << "\n";
  return failed == 0 ? ok : property_failure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"IP-DG and conforming solvers for the p(x)-Laplacian in one dimension"};
  app.require_subcommand(1);
  app.set_config("--config", "", "key=value file; command-line flags win");
  app.allow_config_extras(CLI::config_extras_mode::error);

  Options o;
  app.add_option("--method", o.method, "dg or cg")->capture_default_str();
  app.add_option("--n", o.n, "number of elements")->capture_default_str();
  app.add_option("--ns", o.ns, "element counts for convergence and compare")->delimiter(',');
  app.add_option("--k", o.k, "polynomial degree")->capture_default_str();
  app.add_option("--l", o.l, "lifting degree (default k)");
  app.add_option("--problem", o.problem, "paper1d[:eps=..,a=..,C=..] or custom:<file>")->capture_default_str();
  app.add_option("--quad", o.quad, "trapezoid or gaussN")->capture_default_str();
  app.add_option("--m-panels", o.m_panels, "quadrature panels per element")->capture_default_str();
  app.add_option("--tol", o.tol, "gradient tolerance relative to 1 + |g0|");
  app.add_option("--max-iters", o.max_iters, "optimizer iteration limit");
  auto* out_opt = app.add_option("--out", o.out, "output directory (file for exact)")->capture_default_str();
  app.add_option("--plot", o.plot, "svg");
  app.add_option("--seed", o.seed, "seed for property suites")->capture_default_str();
  app.add_option("--workers", o.workers, "concurrent runs (PXDG_WORKERS overrides)");
  app.add_option("--suites", o.suites, "property suites to run")->delimiter(',');
  app.add_flag("--debug-face-size", o.debug_face_size, "use the squared face size (negative control)");
  app.add_option("--eps", o.eps, "exponent width")->capture_default_str();
  app.add_option("--a", o.a, "exponent plateau")->capture_default_str();
  app.add_option("--C", o.C, "flux constant")->capture_default_str();
  app.add_option("--samples", o.samples, "exact solution sample count")->capture_default_str();

  auto* solve = app.add_subcommand("solve", "solve one problem")->fallthrough();
  auto* convergence = app.add_subcommand("convergence", "refinement study over --ns")->fallthrough();
  auto* compare = app.add_subcommand("compare", "DG on n elements against CG on 2n")->fallthrough();
  auto* exact = app.add_subcommand("exact", "tabulate the closed-form solution")->fallthrough();
  auto* properties = app.add_subcommand("properties", "randomized property suites")->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? ok : config_error;
  }

  try {
    if (solve->parsed()) return cmd_solve(o);
    if (convergence->parsed()) return cmd_convergence(o);
    if (compare->parsed()) return cmd_compare(o);
    if (exact->parsed()) return cmd_exact(o, out_opt->count() > 0);
    if (properties->parsed()) return cmd_properties(o);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return config_error;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return config_error;
  }
  return config_error;
}

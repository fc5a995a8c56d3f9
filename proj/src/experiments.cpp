#include "pxdg/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <ostream>
#include <thread>

#include "pxdg/csv.hpp"
#include "pxdg/lifting.hpp"
#include "pxdg/quadrature.hpp"
#include "pxdg/svg.hpp"

namespace pxdg {

ReferenceSolution reference_from(const ExactSolution& exact) {
  return {[&exact](double x) { return exact.value(x); }, [&exact](double x) { return exact.derivative(x); },
          exact.breakpoints()};
}

ReferenceSolution reference_from(const BrokenFunction& u) {
  return {[u](double x) { return evaluate(u, x); },
          [u](double x) { return u.derivative_in_element(u.mesh().locate(x), x); }, u.mesh().nodes()};
}

ErrorMetrics measure_errors(const BrokenFunction& uh, const ReferenceSolution& ref, const ExponentField& p,
                            int points) {
  const Mesh1D& mesh = uh.mesh();
  std::vector<double> cuts = mesh.nodes();
  for (double x : ref.breakpoints) {
    if (x > mesh.left() && x < mesh.right()) cuts.push_back(x);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  const QuadratureRule reference = gauss_legendre(points);
  WeightedSampleSet diff, grad_diff;
  ErrorMetrics m;
  std::size_t element = 0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double a = cuts[i], b = cuts[i + 1];
    while (element + 1 < mesh.num_elements() && mesh.node(element + 1) <= a) ++element;
    const QuadratureRule rule = map_rule(reference, a, b);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const double x = rule.points[q];
      const double d = uh.value_in_element(element, x) - ref.value(x);
      diff.add(x, rule.weights[q], d);
      grad_diff.add(x, rule.weights[q], uh.derivative_in_element(element, x) - ref.derivative(x));
      m.l1_error += rule.weights[q] * std::abs(d);
    }
  }
  m.luxemburg_error = luxemburg_norm(diff, p);
  m.gradient_error = luxemburg_norm(grad_diff, p);
  for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
    const auto c = uh.element_coefficients(e);
    for (std::size_t j = 0; j < uh.local_size(); ++j) {
      m.max_nodal_error = std::max(m.max_nodal_error, std::abs(c[j] - ref.value(uh.node_position(e, j))));
    }
  }
  return m;
}

std::string to_string(Method m) { return m == Method::dg ? "dg" : "cg"; }

Method parse_method(const std::string& text) {
  if (text == "dg") return Method::dg;
  if (text == "cg") return Method::cg;
  throw ConfigError("method must be dg or cg, got '" + text + "'");
}

SolveReport run_method(const Problem& problem, Method method, std::size_t n, const RunSettings& settings) {
  FunctionalSpec spec = problem.spec;
  spec.quadrature = settings.quadrature;
  spec.lifting = settings.lifting;
  auto mesh = std::make_shared<const Mesh1D>(uniform_mesh(problem.x_left, problem.x_right, n, problem.dirichlet));
  return method == Method::dg ? solve_dg(spec, mesh, settings.degree, settings.bfgs)
                              : solve_cg(spec, mesh, settings.degree, settings.bfgs);
}

double lifting_norm(const BrokenFunction& u, const ExponentField& p, LiftingConfig cfg) {
  if (u.continuity() == Continuity::continuous || u.mesh().num_interior_faces() == 0) return 0.0;
  const BrokenFunction r = lift(u, cfg);
  return luxemburg_norm(volume_samples(r, cfg.degree + 4), p);
}

namespace {

ConvergenceRow make_row(const Problem& problem, std::size_t n, const SolveReport& rep,
                        const ReferenceSolution& ref, const RunSettings& settings) {
  const ExponentField& p = problem.spec.p;
  ConvergenceRow row;
  row.n = n;
  row.h = rep.solution.mesh().max_element_size();
  const ErrorMetrics e = measure_errors(rep.solution, ref, p);
  row.luxemburg_error = e.luxemburg_error;
  row.max_nodal_error = e.max_nodal_error;
  row.l1_error = e.l1_error;
  row.gradient_error = e.gradient_error;
  row.seminorm = broken_seminorm(rep.solution, p);
  row.interior_penalty = rep.terms.interior_penalty;
  row.dirichlet_penalty = rep.terms.dirichlet_penalty;
  row.lifting_norm = lifting_norm(rep.solution, p, settings.lifting);
  row.energy = rep.terms.total;
  row.iterations = rep.iterations;
  row.wall_seconds = rep.wall_seconds;
  row.status = rep.status;
  return row;
}

}  // namespace

ConvergenceStudy convergence_study(const Problem& problem, Method method, const std::vector<std::size_t>& ns,
                                   const RunSettings& settings, int workers) {
  if (ns.empty()) throw ConfigError("convergence study needs at least one n");
  ConvergenceStudy study;
  study.method = method;
  std::vector<std::size_t> runs = ns;
  std::optional<std::size_t> reference_n;
  if (!problem.exact) {
    reference_n = 4 * *std::max_element(ns.begin(), ns.end());
    runs.push_back(*reference_n);
  }
  std::vector<std::optional<SolveReport>> reports(runs.size());
  parallel_for(runs.size(), workers,
               [&](std::size_t i) { reports[i] = run_method(problem, method, runs[i], settings); });

  ReferenceSolution ref;
  if (problem.exact) {
    ref = reference_from(*problem.exact);
    study.exact_energy = problem.exact->energy(problem.spec.normalize_by_exponent);
    study.reference = "exact";
  } else {
    ref = reference_from(reports.back()->solution);
    study.reference = "mesh n=" + std::to_string(*reference_n);
  }
  for (std::size_t i = 0; i < ns.size(); ++i) study.rows.push_back(make_row(problem, ns[i], *reports[i], ref, settings));
  return study;
}

std::vector<double> empirical_orders(const std::vector<ConvergenceRow>& rows, double ConvergenceRow::*column) {
  std::vector<double> out;
  for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
    out.push_back(std::log(rows[i].*column / rows[i + 1].*column) / std::log(rows[i].h / rows[i + 1].h));
  }
  return out;
}

void write_convergence_csv(std::ostream& os, const ConvergenceStudy& study) {
  CsvWriter csv(os);
  csv.header({"n", "h", "luxemburg_error", "max_nodal_error", "l1_error", "gradient_error", "broken_seminorm",
              "interior_penalty", "dirichlet_penalty", "lifting_norm", "energy", "iterations", "wall_seconds",
              "status"});
  for (const auto& r : study.rows) {
    csv.row({static_cast<long long>(r.n), r.h, r.luxemburg_error, r.max_nodal_error, r.l1_error, r.gradient_error,
             r.seminorm, r.interior_penalty, r.dirichlet_penalty, r.lifting_norm, r.energy,
             static_cast<long long>(r.iterations), r.wall_seconds, to_string(r.status)});
  }
  if (study.rows.size() < 2) return;
  auto last = [&](double ConvergenceRow::*c) { return empirical_orders(study.rows, c).back(); };
  const std::string blank;
  csv.row({std::string("order"), blank, last(&ConvergenceRow::luxemburg_error),
           last(&ConvergenceRow::max_nodal_error), last(&ConvergenceRow::l1_error),
           last(&ConvergenceRow::gradient_error), blank, last(&ConvergenceRow::interior_penalty),
           last(&ConvergenceRow::dirichlet_penalty), last(&ConvergenceRow::lifting_norm), blank, blank, blank, blank});
}

std::vector<CompareEntry> compare_methods(const Problem& problem, const std::vector<std::size_t>& ns,
                                          const RunSettings& settings, int workers) {
  std::vector<std::optional<SolveReport>> reports(2 * ns.size());
  parallel_for(reports.size(), workers, [&](std::size_t i) {
    const std::size_t n = ns[i / 2];
    reports[i] = i % 2 == 0 ? run_method(problem, Method::dg, n, settings)
                            : run_method(problem, Method::cg, 2 * n, settings);
  });
  std::optional<ReferenceSolution> ref;
  if (problem.exact) {
    ref = reference_from(*problem.exact);
  } else {
    const std::size_t finest = *std::max_element(ns.begin(), ns.end());
    ref = reference_from(run_method(problem, Method::cg, 8 * finest, settings).solution);
  }
  std::vector<CompareEntry> out;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    CompareEntry e{ns[i], std::move(*reports[2 * i]), std::move(*reports[2 * i + 1]), {}, {}};
    e.dg_errors = measure_errors(e.dg.solution, *ref, problem.spec.p);
    e.cg_errors = measure_errors(e.cg.solution, *ref, problem.spec.p);
    out.push_back(std::move(e));
  }
  return out;
}

void write_compare_csv(std::ostream& os, const std::vector<CompareEntry>& entries) {
  CsvWriter csv(os);
  csv.header({"n", "method", "elements", "max_nodal_error", "l1_error", "luxemburg_error", "gradient_error",
              "energy", "iterations", "status"});
  for (const auto& e : entries) {
    for (int m = 0; m < 2; ++m) {
      const SolveReport& r = m == 0 ? e.dg : e.cg;
      const ErrorMetrics& err = m == 0 ? e.dg_errors : e.cg_errors;
      csv.row({static_cast<long long>(e.n), std::string(m == 0 ? "dg" : "cg"),
               static_cast<long long>(r.solution.mesh().num_elements()), err.max_nodal_error, err.l1_error,
               err.luxemburg_error, err.gradient_error, r.terms.total, static_cast<long long>(r.iterations),
               to_string(r.status)});
    }
  }
}

namespace {

// Nodal values in left-to-right order; both traces at interior nodes so
// jumps show up as vertical segments.
PlotSeries nodal_series(const BrokenFunction& u, const std::string& label, const std::string& color, bool dashed) {
  PlotSeries s{label, {}, {}, color, dashed};
  for (std::size_t e = 0; e < u.mesh().num_elements(); ++e) {
    const auto c = u.element_coefficients(e);
    for (std::size_t j = 0; j < u.local_size(); ++j) {
      s.x.push_back(u.node_position(e, j));
      s.y.push_back(c[j]);
    }
  }
  return s;
}

PlotSeries exact_series(const Problem& problem) {
  PlotSeries s{"exact", {}, {}, "#000000", false};
  std::vector<double> xs = problem.exact->breakpoints();
  for (int i = 0; i <= 400; ++i) xs.push_back(problem.x_left + (problem.x_right - problem.x_left) * i / 400.0);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  for (double x : xs) {
    s.x.push_back(x);
    s.y.push_back(problem.exact->value(x));
  }
  return s;
}

}  // namespace

std::string compare_svg(const Problem& problem, const CompareEntry& entry) {
  std::vector<PlotSeries> series;
  if (problem.exact) series.push_back(exact_series(problem));
  series.push_back(nodal_series(entry.dg.solution, "DG n=" + std::to_string(entry.n), "#d62728", false));
  series.push_back(nodal_series(entry.cg.solution, "CG n=" + std::to_string(2 * entry.n), "#1f77b4", true));
  PlotOptions opt;
  opt.title = "DG(" + std::to_string(entry.n) + ") vs CG(" + std::to_string(2 * entry.n) + ")";
  opt.y_label = "u";
  return line_chart(series, opt);
}

std::string solution_svg(const Problem& problem, const SolveReport& report, const std::string& title) {
  std::vector<PlotSeries> series;
  if (problem.exact) series.push_back(exact_series(problem));
  series.push_back(nodal_series(report.solution, "u_h", "#d62728", false));
  PlotOptions opt;
  opt.title = title;
  opt.y_label = "u";
  return line_chart(series, opt);
}

int resolve_workers(int requested) {
  if (const char* env = std::getenv("PXDG_WORKERS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < 1) throw ConfigError("PXDG_WORKERS must be a positive integer");
    return static_cast<int>(v);
  }
  if (requested > 0) return requested;
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& body) {
  const std::size_t threads = std::min<std::size_t>(count, static_cast<std::size_t>(std::max(1, workers)));
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < count;) {
      try {
        body(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (threads <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace pxdg

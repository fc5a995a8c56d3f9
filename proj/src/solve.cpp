#include "pxdg/solve.hpp"

#include <chrono>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace pxdg {

double linear_boundary_interpolant(const Mesh1D& mesh, const DirichletData& data, double x) {
  const double t = (x - mesh.left()) / mesh.length();
  return data.left + t * (data.right - data.left);
}

namespace {

using Clock = std::chrono::steady_clock;

SolveReport finish(const DiscreteFunctional& functional, BrokenFunction solution, const BfgsResult& r,
                   Clock::time_point start) {
  SolveReport report{std::move(solution), {}, r.iterations, r.evaluations, r.line_search_failures, r.status,
                     r.value_history, r.grad_norm_history, 0.0};
  report.terms = functional.evaluate(report.solution.coefficients());
  report.wall_seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return report;
}

}  // namespace

SolveReport solve_dg(const FunctionalSpec& spec, MeshPtr mesh, int degree, const BfgsConfig& cfg) {
  const auto start = Clock::now();
  const DiscreteFunctional functional(spec, mesh, degree, FunctionalForm::discontinuous);
  const auto n = static_cast<Eigen::Index>(functional.num_coefficients());

  Eigen::VectorXd x0 = Eigen::VectorXd::Zero(n);
  switch (cfg.initial_guess) {
    case InitialGuess::zero:
      break;
    case InitialGuess::linear_interp_of_uD:
      x0 = BrokenFunction::interpolate(mesh, degree,
                                       [&](double x) { return linear_boundary_interpolant(*mesh, spec.u_D, x); })
               .coefficients();
      break;
    case InitialGuess::supplied:
      if (cfg.supplied.size() != n) throw std::invalid_argument("supplied initial guess has the wrong size");
      x0 = cfg.supplied;
      break;
  }

  const Objective objective = [&](const Eigen::VectorXd& x, Eigen::VectorXd& g) {
    return functional.evaluate(x, &g).total;
  };
  const BfgsResult r = bfgs_minimize(objective, std::move(x0), cfg);
  return finish(functional, BrokenFunction(mesh, degree, r.x), r, start);
}

SolveReport solve_cg(const FunctionalSpec& spec, MeshPtr mesh, int degree, const BfgsConfig& cfg) {
  const auto start = Clock::now();
  if (degree < 1) throw std::invalid_argument("solve_cg needs degree >= 1");
  const DiscreteFunctional functional(spec, mesh, degree, FunctionalForm::continuous);
  const std::size_t ne = mesh->num_elements();
  const auto k = static_cast<std::size_t>(degree);
  const std::size_t ndofs = ne * k + 1;
  const bool pin_left = mesh->dirichlet().left;
  const bool pin_right = mesh->dirichlet().right;
  const std::size_t first_free = pin_left ? 1 : 0;
  const std::size_t end_free = pin_right ? ndofs - 1 : ndofs;
  if (end_free <= first_free) throw std::invalid_argument("solve_cg: no free degrees of freedom");
  const auto nfree = static_cast<Eigen::Index>(end_free - first_free);

  const auto expand = [&](const Eigen::VectorXd& z) {
    Eigen::VectorXd dofs(static_cast<Eigen::Index>(ndofs));
    if (pin_left) dofs[0] = spec.u_D.left;
    if (pin_right) dofs[static_cast<Eigen::Index>(ndofs - 1)] = spec.u_D.right;
    dofs.segment(static_cast<Eigen::Index>(first_free), nfree) = z;
    return dofs;
  };
  // broken coefficient (e, j) <- global DOF e*k + j
  const auto to_broken = [&](const Eigen::VectorXd& dofs) {
    Eigen::VectorXd c(static_cast<Eigen::Index>(ne * (k + 1)));
    for (std::size_t e = 0; e < ne; ++e) {
      for (std::size_t j = 0; j <= k; ++j) {
        c[static_cast<Eigen::Index>(e * (k + 1) + j)] = dofs[static_cast<Eigen::Index>(e * k + j)];
      }
    }
    return c;
  };

  Eigen::VectorXd z0 = Eigen::VectorXd::Zero(nfree);
  switch (cfg.initial_guess) {
    case InitialGuess::zero:
      break;
    case InitialGuess::linear_interp_of_uD: {
      const BrokenFunction guess = BrokenFunction::interpolate(
          mesh, degree, [&](double x) { return linear_boundary_interpolant(*mesh, spec.u_D, x); },
          Continuity::continuous);
      z0 = guess.continuous_dofs().segment(static_cast<Eigen::Index>(first_free), nfree);
      break;
    }
    case InitialGuess::supplied:
      if (cfg.supplied.size() != nfree) throw std::invalid_argument("supplied initial guess has the wrong size");
      z0 = cfg.supplied;
      break;
  }

  const Objective objective = [&](const Eigen::VectorXd& z, Eigen::VectorXd& g) {
    Eigen::VectorXd broken_gradient;
    const double value = functional.evaluate(to_broken(expand(z)), &broken_gradient).total;
    g.setZero(nfree);
    for (std::size_t e = 0; e < ne; ++e) {
      for (std::size_t j = 0; j <= k; ++j) {
        const std::size_t dof = e * k + j;
        if (dof < first_free || dof >= end_free) continue;
        g[static_cast<Eigen::Index>(dof - first_free)] += broken_gradient[static_cast<Eigen::Index>(e * (k + 1) + j)];
      }
    }
    return value;
  };
  const BfgsResult r = bfgs_minimize(objective, std::move(z0), cfg);
  return finish(functional, BrokenFunction::from_continuous(mesh, degree, expand(r.x)), r, start);
}

void write_history_csv(std::ostream& os, const SolveReport& report) {
  char buf[128];
  os << "iteration,value,grad_norm\n";
  for (std::size_t i = 0; i < report.value_history.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g\n", i, report.value_history[i], report.grad_norm_history[i]);
    os << buf;
  }
}

}  // namespace pxdg

#include "mhdmg/driver/newton.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include "mhdmg/error.hpp"

namespace mhdmg::driver {

void validate(const NewtonConfig& cfg) {
  if (!(cfg.rtol > 0.0) || !(cfg.atol > 0.0)) throw InvalidArgument("Newton tolerances must be positive");
  if (cfg.max_steps < 1) throw InvalidArgument("Newton needs at least one step");
  if (!(cfg.linear.rtol > 0.0) || !(cfg.linear.atol >= 0.0) || cfg.linear.max_iterations < 1)
    throw InvalidArgument("invalid linear tolerances");
  const auto& e = cfg.ew;
  if (!(e.eta_min > 0.0 && e.eta_min <= e.eta_max && e.eta_max < 1.0 && e.gamma > 0.0 && e.gamma <= 1.0 &&
        e.alpha > 1.0 && e.alpha <= 2.0))
    throw InvalidArgument("invalid Eisenstat-Walker parameters");
}

double eisenstat_walker_tol(const EwParams& p, int step, double residual, double previous_residual,
                            double previous_eta) {
  if (step == 0 || !(previous_residual > 0.0)) return std::clamp(p.eta0, p.eta_min, p.eta_max);
  double eta = p.gamma * std::pow(residual / previous_residual, p.alpha);
  const double guard = p.gamma * std::pow(previous_eta, p.alpha);
  if (guard > p.safeguard_threshold) eta = std::max(eta, guard);
  return std::clamp(eta, p.eta_min, p.eta_max);
}

std::string to_string(NewtonStatus s) {
  switch (s) {
    case NewtonStatus::converged: return "converged";
    case NewtonStatus::max_steps: return "max_steps";
    case NewtonStatus::diverged: return "diverged";
    case NewtonStatus::linear_failure: return "linear_failure";
  }
  return "?";
}

int NewtonResult::total_linear_iterations() const {
  int n = 0;
  for (const auto& s : history) n += s.linear_iterations;
  return n;
}

double NewtonResult::mean_linear_iterations() const {
  return steps > 0 ? static_cast<double>(total_linear_iterations()) / steps : 0.0;
}

void check(const NewtonResult& r) {
  if (r.converged()) return;
  std::ostringstream msg;
  msg << "Newton " << to_string(r.status) << " after " << r.steps << " steps; residual history: " << r.initial_residual;
  for (const auto& s : r.history) msg << ", " << s.residual;
  if (r.status == NewtonStatus::linear_failure) throw LinearSolverFailure(msg.str());
  throw NonlinearDivergence(msg.str());
}

NewtonResult newton_solve(const Problem& problem, fem::StateVector& x, const NewtonConfig& cfg, LinearSolver& solver,
                          const NewtonObserver& observer) {
  validate(cfg);
  const auto& as = *problem.assembler;
  if (x.layout != as.layout_ptr()) throw InvalidArgument("Newton state does not match the problem layout");
  const auto correction_bcs = problem.bcs.homogeneous();
  fem::impose(x, problem.bcs);

  NewtonResult out;
  auto R = as.residual(x, problem.phys, &problem.bcs);
  double rnorm = linalg::norm2(R);
  out.initial_residual = out.final_residual = rnorm;
  const double target = std::max(cfg.rtol * rnorm, cfg.atol);
  double prev_norm = 0.0, eta = 0.0;
  std::vector<double> dx(x.data.size());

  for (int k = 0;; ++k) {
    if (rnorm <= target) {
      out.status = NewtonStatus::converged;
      return out;
    }
    if (k == cfg.max_steps) {
      out.status = NewtonStatus::max_steps;
      return out;
    }
    const auto t0 = std::chrono::steady_clock::now();
    auto sys = as.jacobian(x, problem.phys);
    fem::apply_bcs(sys, correction_bcs);
    auto shared = std::make_shared<const fem::BlockSystem>(std::move(sys));
    solver.setup(shared, x, problem.phys);

    LinearTolerance tol = cfg.linear;
    if (cfg.linear_mode == LinearTolMode::eisenstat_walker) {
      eta = eisenstat_walker_tol(cfg.ew, k, rnorm, prev_norm, eta);
      tol.rtol = eta;
    }
    std::fill(dx.begin(), dx.end(), 0.0);
    const auto lin = solver.solve(shared->rhs, dx, tol);

    NewtonStep step;
    step.step = k + 1;
    step.linear_rtol = tol.rtol;
    step.linear_iterations = lin.iterations;
    step.linear_residual = lin.final_residual;
    out.steps = k + 1;
    if (!lin.converged()) {
      step.residual = rnorm;
      step.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      out.history.push_back(step);
      if (observer) observer(step);
      out.status = NewtonStatus::linear_failure;
      return out;
    }
    linalg::axpy(1.0, dx, x.data);
    R = as.residual(x, problem.phys, &problem.bcs);
    prev_norm = rnorm;
    rnorm = linalg::norm2(R);
    out.final_residual = rnorm;
    step.residual = rnorm;
    step.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.history.push_back(step);
    if (observer) observer(step);
    if (!std::isfinite(rnorm)) {
      out.status = NewtonStatus::diverged;
      return out;
    }
  }
}

}  // namespace mhdmg::driver

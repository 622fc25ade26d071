#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "mhdmg/driver/linear_solver.hpp"
#include "mhdmg/fem/assembly.hpp"
#include "mhdmg/fem/bcs.hpp"

namespace mhdmg::driver {

enum class LinearTolMode { fixed, eisenstat_walker };

/// Choice-2 forcing terms: eta_k = gamma (|R_k| / |R_k-1|)^alpha with the
/// safeguard eta_k >= gamma eta_k-1^alpha whenever that exceeds 0.1.
struct EwParams {
  double eta0 = 0.9;
  double gamma = 0.9;
  double alpha = 2.0;
  double eta_min = 1e-6;
  double eta_max = 0.9;
  double safeguard_threshold = 0.1;
};

struct NewtonConfig {
  double rtol = 1e-5;  // required reduction |R| / |R_0|
  double atol = 1e-10;
  int max_steps = 20;
  LinearTolMode linear_mode = LinearTolMode::fixed;
  LinearTolerance linear;  // rtol ignored under Eisenstat-Walker
  EwParams ew;
};

void validate(const NewtonConfig& cfg);

/// Forcing term for Newton step `step` (0-based) given the residual norms of
/// the current and previous iterates and the previous forcing term.
double eisenstat_walker_tol(const EwParams& p, int step, double residual, double previous_residual,
                            double previous_eta);

/// A nonlinear problem on one layout: residual and Jacobian from the assembler,
/// with boundary conditions on the iterate.
struct Problem {
  std::shared_ptr<const fem::Assembler> assembler;
  fem::BcSet bcs;
  fem::Physics phys;
};

struct NewtonStep {
  int step = 0;  // 1-based
  double residual = 0.0;  // after the update
  double linear_rtol = 0.0;
  int linear_iterations = 0;
  double linear_residual = 0.0;
  double seconds = 0.0;
};

enum class NewtonStatus { converged, max_steps, diverged, linear_failure };
std::string to_string(NewtonStatus s);

struct NewtonResult {
  NewtonStatus status = NewtonStatus::max_steps;
  int steps = 0;
  double initial_residual = 0.0;
  double final_residual = 0.0;
  std::vector<NewtonStep> history;
  int total_linear_iterations() const;
  /// Total linear iterations divided by Newton steps (0 with no steps).
  double mean_linear_iterations() const;
  bool converged() const { return status == NewtonStatus::converged; }
};

/// Throws NonlinearDivergence or LinearSolverFailure for a failed result.
void check(const NewtonResult& r);

using NewtonObserver = std::function<void(const NewtonStep&)>;

/// Full-step Newton from x (boundary values are imposed first). Stops once
/// |R| <= max(rtol |R_0|, atol).
NewtonResult newton_solve(const Problem& problem, fem::StateVector& x, const NewtonConfig& cfg, LinearSolver& solver,
                          const NewtonObserver& observer = nullptr);

}  // namespace mhdmg::driver

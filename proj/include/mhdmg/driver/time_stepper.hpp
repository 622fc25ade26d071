#pragma once

#include <span>
#include <vector>

#include "mhdmg/driver/newton.hpp"

namespace mhdmg::driver {

enum class Scheme { crank_nicolson, bdf2 };

struct SubStep {
  Scheme scheme;
  double dt;
};

/// Sub-steps of macro-step `index` (0-based): the first macro-step is split
/// into `substeps` equal pieces, Crank-Nicolson on the first (when enabled)
/// and BDF2 after; later macro-steps are single BDF2 steps.
std::vector<SubStep> macro_step_plan(int index, double dt, int substeps, bool crank_nicolson_start = true);

/// Residual weights theta * S(x) + alpha * M (x - mass_reference) + (1 - theta) * S(x_n).
struct StepWeights {
  double theta = 1.0;
  double alpha = 0.0;
  std::vector<double> mass_reference;
};

/// BDF2 needs the previous two states; a step with no older state (or
/// Crank-Nicolson) uses x_n alone.
StepWeights step_weights(Scheme scheme, double dt, std::span<const double> x_n, std::span<const double> x_nm1);

struct TimeStepConfig {
  double dt = 0.1;
  int startup_substeps = 10;
  bool crank_nicolson_start = true;
};

struct TimeStepRecord {
  int index = 0;  // macro-step, 1-based
  double time = 0.0;
  int newton_steps = 0;  // summed over sub-steps
  int linear_iterations = 0;
  /// Newton steps of the last sub-step.
  int final_substep_newton_steps = 0;
  double seconds = 0.0;
};

/// BDF2 with a sub-stepped Crank-Nicolson start; each step is a warm-started
/// Newton solve from the previous state.
class TimeStepper {
 public:
  /// `steady` holds the spatial problem (theta = 1, alpha = 0).
  TimeStepper(Problem steady, TimeStepConfig cfg, NewtonConfig newton, LinearSolver& solver);

  void initialize(const fem::StateVector& x0, double t0 = 0.0);
  /// One macro-step; throws NonlinearDivergence or LinearSolverFailure naming the step.
  TimeStepRecord advance(const NewtonObserver& observer = nullptr);

  const fem::StateVector& state() const { return current_; }
  double time() const { return time_; }
  int steps_taken() const { return index_; }

 private:
  NewtonResult sub_step(Scheme scheme, double dt, const std::vector<double>* older, const NewtonObserver& observer);

  Problem problem_;
  TimeStepConfig cfg_;
  NewtonConfig newton_;
  LinearSolver& solver_;
  fem::StateVector current_;
  std::vector<double> previous_;  // macro-step history for BDF2
  double time_ = 0.0;
  int index_ = 0;
  bool ready_ = false;
};

}  // namespace mhdmg::driver

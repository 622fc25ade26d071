#pragma once

#include <functional>
#include <string>
#include <vector>

#include "mhdmg/driver/newton.hpp"

namespace mhdmg::driver {

struct ContinuationStage {
  double Re = 1.0;
  double Re_m = 1.0;
  double hartmann() const;
};

/// Stages Ha = start, start + step, ... up to max_ha with Re = Re_m = Ha.
std::vector<ContinuationStage> hartmann_path(double start, double step, double max_ha);

/// Throws InvalidArgument unless the plan is nonempty with positive,
/// non-decreasing Hartmann numbers.
void validate(const std::vector<ContinuationStage>& plan);

struct StageResult {
  ContinuationStage stage;
  NewtonStatus status = NewtonStatus::max_steps;
  int newton_steps = 0;
  double mean_linear_iterations = 0.0;
  double seconds = 0.0;
  std::string message;  // failure description
};

struct ContinuationResult {
  std::vector<StageResult> stages;  // attempted stages; only the last may have failed
  /// Largest Hartmann number reached, or 0 when the first stage failed.
  double max_converged_hartmann() const;
};

/// Solves stage k from the state converged at stage k - 1 (x is updated in place).
/// Solver exceptions are reported as failures of that stage.
using StageSolver = std::function<NewtonResult(const ContinuationStage&, fem::StateVector& x)>;

ContinuationResult continuation_run(const std::vector<ContinuationStage>& plan, fem::StateVector& x,
                                    const StageSolver& solve);

}  // namespace mhdmg::driver

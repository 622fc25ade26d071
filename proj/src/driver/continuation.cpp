#include "mhdmg/driver/continuation.hpp"

#include <chrono>
#include <cmath>

#include "mhdmg/error.hpp"

namespace mhdmg::driver {

double ContinuationStage::hartmann() const { return std::sqrt(Re * Re_m); }

std::vector<ContinuationStage> hartmann_path(double start, double step, double max_ha) {
  if (!(start > 0.0) || !(step > 0.0) || max_ha < start) throw InvalidArgument("invalid continuation path");
  std::vector<ContinuationStage> out;
  for (int k = 0;; ++k) {
    const double ha = start + k * step;
    if (ha > max_ha * (1.0 + 1e-12)) break;
    out.push_back({ha, ha});
  }
  return out;
}

void validate(const std::vector<ContinuationStage>& plan) {
  if (plan.empty()) throw InvalidArgument("continuation plan is empty");
  double prev = 0.0;
  for (const auto& s : plan) {
    if (!(s.Re > 0.0) || !(s.Re_m > 0.0)) throw InvalidArgument("continuation Reynolds numbers must be positive");
    if (s.hartmann() < prev) throw InvalidArgument("continuation plan must not decrease the Hartmann number");
    prev = s.hartmann();
  }
}

double ContinuationResult::max_converged_hartmann() const {
  double ha = 0.0;
  for (const auto& s : stages)
    if (s.status == NewtonStatus::converged) ha = s.stage.hartmann();
  return ha;
}

ContinuationResult continuation_run(const std::vector<ContinuationStage>& plan, fem::StateVector& x,
                                    const StageSolver& solve) {
  validate(plan);
  ContinuationResult out;
  for (const auto& stage : plan) {
    StageResult sr;
    sr.stage = stage;
    const auto t0 = std::chrono::steady_clock::now();
    fem::StateVector trial = x;
    try {
      const auto r = solve(stage, trial);
      sr.status = r.status;
      sr.newton_steps = r.steps;
      sr.mean_linear_iterations = r.mean_linear_iterations();
      if (!r.converged()) sr.message = "Newton " + to_string(r.status);
    } catch (const Error& e) {
      sr.status = NewtonStatus::linear_failure;
      sr.message = e.what();
    }
    sr.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.stages.push_back(sr);
    if (sr.status != NewtonStatus::converged) break;
    x = std::move(trial);
  }
  return out;
}

}  // namespace mhdmg::driver

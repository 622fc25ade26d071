#include "mhdmg/driver/time_stepper.hpp"

#include <chrono>

#include "mhdmg/error.hpp"

namespace mhdmg::driver {

std::vector<SubStep> macro_step_plan(int index, double dt, int substeps, bool crank_nicolson_start) {
  if (!(dt > 0.0) || substeps < 1 || index < 0) throw InvalidArgument("invalid time-step plan");
  if (index > 0) return {{Scheme::bdf2, dt}};
  std::vector<SubStep> out;
  const double h = dt / substeps;
  for (int s = 0; s < substeps; ++s)
    out.push_back({s == 0 && crank_nicolson_start ? Scheme::crank_nicolson : Scheme::bdf2, h});
  return out;
}

StepWeights step_weights(Scheme scheme, double dt, std::span<const double> x_n, std::span<const double> x_nm1) {
  StepWeights w;
  if (scheme == Scheme::crank_nicolson) {
    w.theta = 0.5;
    w.alpha = 1.0 / dt;
    w.mass_reference.assign(x_n.begin(), x_n.end());
    return w;
  }
  if (x_nm1.empty()) {
    // backward Euler when no older state exists
    w.alpha = 1.0 / dt;
    w.mass_reference.assign(x_n.begin(), x_n.end());
    return w;
  }
  if (x_nm1.size() != x_n.size()) throw InvalidArgument("BDF2 history lengths differ");
  w.alpha = 1.5 / dt;
  w.mass_reference.resize(x_n.size());
  for (std::size_t i = 0; i < x_n.size(); ++i) w.mass_reference[i] = (4.0 * x_n[i] - x_nm1[i]) / 3.0;
  return w;
}

TimeStepper::TimeStepper(Problem steady, TimeStepConfig cfg, NewtonConfig newton, LinearSolver& solver)
    : problem_(std::move(steady)), cfg_(cfg), newton_(newton), solver_(solver) {
  if (!(cfg_.dt > 0.0) || cfg_.startup_substeps < 1) throw InvalidArgument("invalid time-step configuration");
  validate(newton_);
}

void TimeStepper::initialize(const fem::StateVector& x0, double t0) {
  current_ = x0;
  fem::impose(current_, problem_.bcs);
  previous_.clear();
  time_ = t0;
  index_ = 0;
  ready_ = true;
}

NewtonResult TimeStepper::sub_step(Scheme scheme, double dt, const std::vector<double>* older,
                                   const NewtonObserver& observer) {
  Problem p = problem_;
  const auto w = step_weights(scheme, dt, current_.data,
                              older ? std::span<const double>(*older) : std::span<const double>());
  p.phys.theta = w.theta;
  p.phys.alpha = w.alpha;
  p.phys.mass_reference = w.mass_reference;
  if (w.theta < 1.0) {
    auto s = p.assembler->spatial_terms(current_, problem_.phys);
    for (auto& v : s) v *= 1.0 - w.theta;
    p.phys.explicit_load = std::move(s);
  }
  fem::StateVector x = current_;
  auto r = newton_solve(p, x, newton_, solver_, observer);
  if (r.converged()) current_ = std::move(x);
  return r;
}

TimeStepRecord TimeStepper::advance(const NewtonObserver& observer) {
  if (!ready_) throw InvalidArgument("time stepper used before initialize");
  const auto t0 = std::chrono::steady_clock::now();
  TimeStepRecord rec;
  rec.index = index_ + 1;
  const auto plan = macro_step_plan(index_, cfg_.dt, cfg_.startup_substeps, cfg_.crank_nicolson_start);
  const auto macro_start = current_.data;
  std::vector<double> sub_older;  // state before the previous sub-step
  for (std::size_t s = 0; s < plan.size(); ++s) {
    const std::vector<double>* older = nullptr;
    if (index_ > 0) older = &previous_;
    else if (s > 0) older = &sub_older;
    const auto before = current_.data;
    const auto r = sub_step(plan[s].scheme, plan[s].dt, older, observer);
    rec.newton_steps += r.steps;
    rec.linear_iterations += r.total_linear_iterations();
    rec.final_substep_newton_steps = r.steps;
    if (!r.converged()) {
      try {
        check(r);
      } catch (const NonlinearDivergence& e) {
        throw NonlinearDivergence("time step " + std::to_string(rec.index) + ": " + e.what());
      } catch (const LinearSolverFailure& e) {
        throw LinearSolverFailure("time step " + std::to_string(rec.index) + ": " + e.what());
      }
    }
    sub_older = before;
  }
  previous_ = macro_start;
  ++index_;
  time_ += cfg_.dt;
  rec.time = time_;
  rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rec;
}

}  // namespace mhdmg::driver

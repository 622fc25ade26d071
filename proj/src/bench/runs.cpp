#include "mhdmg/bench/runs.hpp"

#include <chrono>
#include <cmath>

#include "mhdmg/bench/diagnostics.hpp"
#include "mhdmg/driver/time_stepper.hpp"
#include "mhdmg/error.hpp"
#include "mhdmg/fem/projection.hpp"

namespace mhdmg::bench {

PreconditionerKind parse_preconditioner(const std::string& name) {
  if (name == "multigrid") return PreconditionerKind::multigrid;
  if (name == "relaxation") return PreconditionerKind::relaxation;
  if (name == "direct") return PreconditionerKind::direct;
  throw InvalidArgument("unknown preconditioner '" + name + "' (expected multigrid, relaxation or direct)");
}

std::string to_string(PreconditionerKind k) {
  switch (k) {
    case PreconditionerKind::multigrid: return "multigrid";
    case PreconditionerKind::relaxation: return "relaxation";
    case PreconditionerKind::direct: return "direct";
  }
  return "?";
}

std::pair<double, double> default_interval(vanka::Variant v) {
  switch (v) {
    case vanka::Variant::segregated: return {1.5, 8.0};
    case vanka::Variant::purist: return {1.5, 16.0};
    case vanka::Variant::coupled: return {2.0, 8.0};
  }
  return {2.0, 8.0};
}

multigrid::CycleConfig default_cycle(vanka::Variant v, int pre, int post) {
  multigrid::CycleConfig c;
  c.variant = v;
  c.pre = pre;
  c.post = post;
  std::tie(c.cheb_a, c.cheb_b) = default_interval(v);
  return c;
}

SolverSettings hartmann_settings(vanka::Variant v) {
  SolverSettings s;
  s.cycle = default_cycle(v);
  s.newton.rtol = 1e-5;
  s.newton.atol = 1e-10;
  s.newton.max_steps = 20;
  s.newton.linear = {1e-6, 1e-6, 200};
  return s;
}

namespace {

struct Solver {
  std::shared_ptr<const fem::Assembler> assembler;
  std::shared_ptr<multigrid::Hierarchy> hierarchy;
  std::unique_ptr<driver::LinearSolver> linear;
};

Solver make_solver(const mesh::Mesh& coarsest, const SolverSettings& s,
                   const std::function<fem::BcSet(const fem::SpaceLayout&)>& bcs) {
  if (s.levels < 1) throw InvalidArgument("at least one mesh level is required");
  Solver out;
  if (s.preconditioner == PreconditionerKind::multigrid) {
    out.hierarchy = std::make_shared<multigrid::Hierarchy>(
        multigrid::Hierarchy::refinement_chain(coarsest, s.levels), bcs, s.cycle);
    out.assembler = out.hierarchy->finest_assembler();
    out.linear = driver::make_multigrid_solver(out.hierarchy);
    return out;
  }
  auto m = std::make_shared<const mesh::Mesh>(coarsest);
  for (int l = 1; l < s.levels; ++l) m = std::make_shared<const mesh::Mesh>(mesh::refine_uniform(*m));
  out.assembler = std::make_shared<const fem::Assembler>(std::make_shared<const fem::SpaceLayout>(m));
  out.linear = s.preconditioner == PreconditionerKind::direct ? driver::make_direct_solver()
                                                               : driver::make_relaxation_solver(s.cycle);
  return out;
}

driver::NewtonObserver forward(const NewtonLog& log, std::string context) {
  if (!log) return nullptr;
  return [log, context](const driver::NewtonStep& st) {
    log({context, st.step, st.residual, st.linear_rtol, st.linear_iterations, st.linear_residual, st.seconds});
  };
}

std::string describe(const Hartmann& h, const SolverSettings& s) {
  return "hartmann re=" + format_real(h.Re) + " rem=" + format_real(h.Re_m) + " mesh=" + std::to_string(s.finest()) +
         " variant=" + vanka::to_string(s.cycle.variant);
}

}  // namespace

HartmannOutcome solve_hartmann(const Hartmann& problem, const SolverSettings& s, const fem::StateVector* warm,
                               const NewtonLog& log) {
  const auto t0 = std::chrono::steady_clock::now();
  HartmannOutcome out;
  auto& rec = out.record;
  rec.Re = problem.Re;
  rec.Re_m = problem.Re_m;
  rec.mesh = s.finest();
  rec.coarse = s.coarse;
  rec.levels = s.levels;
  rec.variant = s.preconditioner == PreconditionerKind::direct ? "direct" : vanka::to_string(s.cycle.variant);
  const auto spec = problem.boundary();
  auto solver = make_solver(mesh::Mesh::build_structured(Hartmann::domain(s.coarse)), s,
                            [&spec](const fem::SpaceLayout& L) { return fem::make_bcs(L, spec); });
  const auto& layout = solver.assembler->layout_ptr();
  driver::Problem prob{solver.assembler, fem::make_bcs(*layout, spec), problem.physics()};
  out.state = warm ? *warm : problem.initial_guess(layout);
  if (out.state.layout != layout) {
    if (out.state.layout->size() != layout->size()) throw InvalidArgument("warm start has the wrong size");
    fem::StateVector moved(layout);
    moved.data = out.state.data;
    out.state = std::move(moved);
  }
  try {
    out.newton = driver::newton_solve(prob, out.state, s.newton, *solver.linear, forward(log, describe(problem, s)));
    rec.status = driver::to_string(out.newton.status);
  } catch (const Error& e) {
    rec.status = "error";
    out.newton.status = driver::NewtonStatus::linear_failure;
  }
  rec.newton_steps = out.newton.steps;
  rec.linear_iterations = out.newton.total_linear_iterations();
  rec.mean_linear_iterations = out.newton.mean_linear_iterations();
  rec.final_residual = out.newton.final_residual;
  rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

std::vector<std::pair<double, double>> hartmann_table_parameters() {
  std::vector<std::pair<double, double>> out;
  for (double rm : {4.0, 16.0, 64.0})
    for (double re : {4.0, 16.0, 64.0}) out.push_back({re, rm});
  return out;
}

std::vector<SolveRecord> run_hartmann_table(const std::vector<std::pair<double, double>>& params,
                                            const std::vector<vanka::Variant>& variants, const SolverSettings& base,
                                            const std::function<void(const SolveRecord&)>& on_record,
                                            const NewtonLog& log) {
  std::vector<SolveRecord> out;
  for (const auto& [re, rm] : params) {
    for (auto v : variants) {
      SolverSettings s = base;
      s.cycle = default_cycle(v, base.cycle.pre, base.cycle.post);
      auto r = solve_hartmann({re, rm}, s, nullptr, log).record;
      if (on_record) on_record(r);
      out.push_back(std::move(r));
    }
  }
  return out;
}

std::vector<StageRecord> run_continuation(const std::vector<driver::ContinuationStage>& plan, const SolverSettings& s,
                                          const std::function<void(const StageRecord&)>& on_stage,
                                          const NewtonLog& log) {
  SolverSettings stage_settings = s;
  stage_settings.newton.linear_mode = driver::LinearTolMode::eisenstat_walker;
  std::unique_ptr<fem::StateVector> state;
  const auto first = Hartmann{plan.at(0).Re, plan.at(0).Re_m};
  // the layout is rebuilt per stage; carry the coefficients across
  auto x = first.initial_guess(
      std::make_shared<const fem::SpaceLayout>(std::make_shared<const mesh::Mesh>(mesh::Mesh::build_structured(
          Hartmann::domain(s.finest())))));
  std::vector<StageRecord> records;
  const auto result = driver::continuation_run(plan, x, [&](const driver::ContinuationStage& st, fem::StateVector& xs) {
    const Hartmann h{st.Re, st.Re_m};
    auto o = solve_hartmann(h, stage_settings, &xs, log);
    StageRecord r{s.coarse, st.hartmann(), st.Re, st.Re_m, o.record.status, o.record.newton_steps,
                  o.record.mean_linear_iterations, o.record.seconds};
    records.push_back(r);
    if (on_stage) on_stage(r);
    xs.data = o.state.data;
    return o.newton;
  });
  (void)result;
  return records;
}

std::vector<ErrorRecord> run_verification(const Hartmann& problem, const std::vector<int>& meshes, mesh::MeshKind kind) {
  std::vector<ErrorRecord> out;
  for (int n : meshes) {
    auto m = std::make_shared<const mesh::Mesh>(mesh::Mesh::build_structured(Hartmann::domain(n, kind)));
    auto L = std::make_shared<const fem::SpaceLayout>(m);
    driver::Problem prob{std::make_shared<const fem::Assembler>(L), fem::make_bcs(*L, problem.boundary()),
                         problem.physics()};
    auto x = problem.initial_guess(L);
    auto direct = driver::make_direct_solver();
    driver::NewtonConfig cfg;
    cfg.rtol = 1e-12;
    cfg.atol = 1e-11;
    cfg.max_steps = 20;
    driver::check(driver::newton_solve(prob, x, cfg, *direct));
    const auto e = field_errors(x, problem.exact(), problem.exact_curl_B());
    out.push_back({n, 1.0 / n, e.u_l2, e.p_l2, e.B_l2, e.curl_B_l2, e.B_hcurl, e.r_l2});
  }
  return out;
}

IslandSettings island_settings() {
  IslandSettings s;
  s.solver.cycle = default_cycle(vanka::Variant::coupled, 3, 3);
  s.solver.cycle.cheb_a = 2.0;
  s.solver.cycle.cheb_b = 10.0;
  s.solver.coarse = 20;
  s.solver.levels = 3;
  s.solver.newton.rtol = 1e-8;
  s.solver.newton.atol = 1e-6;
  s.solver.newton.max_steps = 20;
  s.solver.newton.linear = {1e-6, 1e-7, 300};
  return s;
}

IslandOutcome run_island(const IslandSettings& s, const std::function<void(const TimeRecord&)>& on_step,
                         const NewtonLog& log, const std::function<bool(const std::vector<TimeRecord>&)>& stop) {
  IslandOutcome out;
  SolverSettings ss = s.solver;
  ss.coarse = s.coarse;
  ss.levels = s.levels;
  const auto spec = s.problem.boundary();
  auto solver = make_solver(Island::mesh(s.coarse), ss, [&spec](const fem::SpaceLayout& L) { return fem::make_bcs(L, spec); });
  const auto& L = solver.assembler->layout_ptr();

  // The steady Jacobian about u = 0 is effectively singular at these Reynolds
  // numbers, so the equilibrium is made discrete by a fixed load that cancels
  // the steady residual of its interpolant. The load vanishes under refinement.
  Island eq = s.problem;
  eq.epsilon = 0.0;
  const auto eq_bcs = fem::make_bcs(*L, eq.boundary());
  auto x = fem::interpolate(L, eq.equilibrium());
  fem::impose(x, eq_bcs);
  auto phys = s.problem.physics();
  phys.discrete_load = solver.assembler->residual(x, phys);
  for (auto& v : phys.discrete_load) v = -v;
  out.steady_residual = linalg::norm2(solver.assembler->residual(x, phys, &eq_bcs));
  out.balance_load = linalg::norm2(phys.discrete_load);
  if (s.problem.epsilon != 0.0) {
    const auto db = fem::interpolate(L, {nullptr, s.problem.perturbation(), nullptr, nullptr});
    linalg::axpy(1.0, db.data, x.data);
  }
  out.initial = x;

  driver::Problem transient{solver.assembler, fem::make_bcs(*L, spec), phys};
  driver::TimeStepper stepper(transient, {s.dt, s.startup_substeps, true}, ss.newton, *solver.linear);
  stepper.initialize(x);
  const mesh::Point origin{0.0, 0.0};
  const double baseline = projected_curl_at(stepper.state(), origin);
  auto record = [&](int step, double t, int newton, int linear, double secs) {
    const auto cfl = cfl_numbers(stepper.state(), s.dt);
    const double curl = projected_curl_at(stepper.state(), origin);
    TimeRecord r{step, t, newton, linear, cfl.fluid, cfl.alfven, cfl.u_max, cfl.B_max, curl,
                 reconnection_rate(curl, baseline, s.problem.Re_m), secs};
    out.steps.push_back(r);
    if (on_step) on_step(r);
  };
  record(0, 0.0, 0, 0, 0.0);
  const int n_steps = static_cast<int>(std::llround(s.t_final / s.dt));
  for (int k = 0; k < n_steps; ++k) {
    try {
      const auto r = stepper.advance(forward(log, "island step " + std::to_string(k + 1)));
      record(r.index, r.time, r.newton_steps, r.linear_iterations, r.seconds);
      if (stop && stop(out.steps)) break;
    } catch (const Error& e) {
      out.failure = e.what();
      break;
    }
  }
  out.final_state = stepper.state();
  return out;
}

}  // namespace mhdmg::bench

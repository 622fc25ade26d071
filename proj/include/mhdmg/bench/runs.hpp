#pragma once

#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "mhdmg/bench/hartmann.hpp"
#include "mhdmg/bench/island.hpp"
#include "mhdmg/bench/report.hpp"
#include "mhdmg/driver/continuation.hpp"
#include "mhdmg/driver/newton.hpp"
#include "mhdmg/multigrid/hierarchy.hpp"

namespace mhdmg::bench {

enum class PreconditionerKind { multigrid, relaxation, direct };
PreconditionerKind parse_preconditioner(const std::string& name);
std::string to_string(PreconditionerKind k);

/// Hand-tuned Chebyshev interval per variant: [1.5, 8], [1.5, 16], [2, 8].
std::pair<double, double> default_interval(vanka::Variant v);
multigrid::CycleConfig default_cycle(vanka::Variant v, int pre = 2, int post = 2);

struct SolverSettings {
  PreconditionerKind preconditioner = PreconditionerKind::multigrid;
  multigrid::CycleConfig cycle = default_cycle(vanka::Variant::coupled);
  int coarse = 15;  // coarsest cells per side
  int levels = 4;
  driver::NewtonConfig newton;
  int finest() const { return coarse << (levels - 1); }
};

/// Hartmann defaults: reduction 1e5 and FGMRES to 1e-6 relative or absolute.
SolverSettings hartmann_settings(vanka::Variant v = vanka::Variant::coupled);

using NewtonLog = std::function<void(const NewtonRecord&)>;

struct HartmannOutcome {
  SolveRecord record;
  driver::NewtonResult newton;
  fem::StateVector state;
};

/// Builds the mesh hierarchy and solves one Hartmann problem from `warm`
/// (the BC-lifted zero state when null). Solver exceptions become a failed status.
HartmannOutcome solve_hartmann(const Hartmann& problem, const SolverSettings& s, const fem::StateVector* warm = nullptr,
                               const NewtonLog& log = nullptr);

/// Every (Re, Re_m) pair for every variant; failures are recorded and the sweep continues.
std::vector<SolveRecord> run_hartmann_table(const std::vector<std::pair<double, double>>& params,
                                            const std::vector<vanka::Variant>& variants, const SolverSettings& base,
                                            const std::function<void(const SolveRecord&)>& on_record = nullptr,
                                            const NewtonLog& log = nullptr);

/// Standard Hartmann sweep: Re_m in {4, 16, 64} outer, Re in {4, 16, 64} inner.
std::vector<std::pair<double, double>> hartmann_table_parameters();

/// Continuation in Re = Re_m = Ha with Eisenstat-Walker linear tolerances; the
/// hierarchy is rebuilt for every stage.
std::vector<StageRecord> run_continuation(const std::vector<driver::ContinuationStage>& plan, const SolverSettings& s,
                                          const std::function<void(const StageRecord&)>& on_stage = nullptr,
                                          const NewtonLog& log = nullptr);

/// Hartmann errors on a sequence of meshes, each solved by Newton with a direct solver.
std::vector<ErrorRecord> run_verification(const Hartmann& problem, const std::vector<int>& meshes,
                                          mesh::MeshKind kind = mesh::MeshKind::diagonal);

struct IslandSettings {
  Island problem;
  int coarse = 20;
  int levels = 3;  // finest 80 x 80
  double dt = 0.1;
  double t_final = 10.0;
  int startup_substeps = 10;
  SolverSettings solver;
};

/// Desk-scale defaults: V(3,3), Chebyshev [2, 10], Newton 1e8 relative or 1e-6 absolute.
IslandSettings island_settings();

struct IslandOutcome {
  std::vector<TimeRecord> steps;  // step 0 is the initial state
  fem::StateVector initial;
  fem::StateVector final_state;
  double balance_load = 0.0;     // norm of the load that balances the equilibrium interpolant
  double steady_residual = 0.0;  // of the balanced equilibrium (round-off)
  std::string failure;           // empty on success
};

/// Starts from the balanced equilibrium interpolant plus the perturbation and steps
/// to t_final. A Newton failure ends the run with a partial series.
/// `stop` is asked after every step whether the series so far is enough.
IslandOutcome run_island(const IslandSettings& s, const std::function<void(const TimeRecord&)>& on_step = nullptr,
                         const NewtonLog& log = nullptr,
                         const std::function<bool(const std::vector<TimeRecord>&)>& stop = nullptr);

}  // namespace mhdmg::bench

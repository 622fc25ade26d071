#pragma once

#include <memory>
#include <span>
#include <string>

#include "mhdmg/fem/assembly.hpp"
#include "mhdmg/linalg/fgmres.hpp"
#include "mhdmg/multigrid/hierarchy.hpp"

namespace mhdmg::driver {

struct LinearTolerance {
  double rtol = 1e-6;
  double atol = 1e-6;
  int max_iterations = 200;
};

struct LinearSolveStats {
  linalg::KrylovStatus status = linalg::KrylovStatus::converged;
  int iterations = 0;
  double initial_residual = 0.0;
  double final_residual = 0.0;
  bool converged() const { return status == linalg::KrylovStatus::converged; }
};

/// Solver for one Newton system. `setup` is called once per Jacobian.
class LinearSolver {
 public:
  virtual ~LinearSolver() = default;
  virtual std::string name() const = 0;
  virtual void setup(std::shared_ptr<const fem::BlockSystem> system, const fem::StateVector& state,
                     const fem::Physics& phys) = 0;
  /// dx holds the initial guess on entry.
  virtual LinearSolveStats solve(std::span<const double> rhs, std::span<double> dx, const LinearTolerance& tol) = 0;
};

/// Sparse LU; reports one iteration per solve.
std::unique_ptr<LinearSolver> make_direct_solver();

/// FGMRES preconditioned by one V-cycle of the hierarchy.
std::unique_ptr<LinearSolver> make_multigrid_solver(std::shared_ptr<multigrid::Hierarchy> hierarchy);

/// FGMRES preconditioned by Chebyshev-accelerated Vanka relaxation on the
/// finest level alone (pre + post sweeps from a zero guess).
std::unique_ptr<LinearSolver> make_relaxation_solver(const multigrid::CycleConfig& cfg);

}  // namespace mhdmg::driver

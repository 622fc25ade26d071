#include "mhdmg/driver/linear_solver.hpp"

#include "mhdmg/error.hpp"
#include "mhdmg/linalg/sparse_lu.hpp"
#include "mhdmg/vanka/smoother.hpp"

namespace mhdmg::driver {

namespace {

linalg::Apply matvec(const fem::BlockSystem& s) {
  return [&s](std::span<const double> in, std::span<double> out) { s.matrix.multiply(in, out); };
}

LinearSolveStats from_krylov(const linalg::KrylovResult& r) {
  return {r.status, r.iterations, r.initial_residual, r.final_residual};
}

class DirectSolver final : public LinearSolver {
 public:
  std::string name() const override { return "direct"; }
  void setup(std::shared_ptr<const fem::BlockSystem> system, const fem::StateVector&, const fem::Physics&) override {
    system_ = std::move(system);
    lu_ = std::make_unique<linalg::SparseLu>(system_->matrix);
  }
  LinearSolveStats solve(std::span<const double> rhs, std::span<double> dx, const LinearTolerance&) override {
    if (!lu_) throw InvalidArgument("direct solver used before setup");
    lu_->solve(rhs, dx);
    std::vector<double> r(rhs.size());
    system_->matrix.residual(rhs, dx, r);
    return {linalg::KrylovStatus::converged, 1, linalg::norm2(rhs), linalg::norm2(r)};
  }

 private:
  std::shared_ptr<const fem::BlockSystem> system_;
  std::unique_ptr<linalg::SparseLu> lu_;
};

class MultigridSolver final : public LinearSolver {
 public:
  explicit MultigridSolver(std::shared_ptr<multigrid::Hierarchy> h) : h_(std::move(h)) {}
  std::string name() const override { return "multigrid"; }
  void setup(std::shared_ptr<const fem::BlockSystem> system, const fem::StateVector& state,
             const fem::Physics& phys) override {
    system_ = system;
    h_->update(std::move(system), state, phys);
  }
  LinearSolveStats solve(std::span<const double> rhs, std::span<double> dx, const LinearTolerance& tol) override {
    if (!system_) throw InvalidArgument("multigrid solver used before setup");
    return from_krylov(linalg::fgmres(matvec(*system_), h_->preconditioner(), rhs, dx,
                                      {tol.rtol, tol.atol, tol.max_iterations, 0}));
  }

 private:
  std::shared_ptr<multigrid::Hierarchy> h_;
  std::shared_ptr<const fem::BlockSystem> system_;
};

class RelaxationSolver final : public LinearSolver {
 public:
  explicit RelaxationSolver(multigrid::CycleConfig cfg) : cfg_(std::move(cfg)) {}
  std::string name() const override { return "relaxation"; }
  void setup(std::shared_ptr<const fem::BlockSystem> system, const fem::StateVector&, const fem::Physics&) override {
    system_ = system;
    if (mass_layout_ != system->layout) {
      mass_N_ = fem::Assembler(system->layout).nedelec_mass();
      mass_layout_ = system->layout;
    }
    auto patches = cfg_.patch_builder ? cfg_.patch_builder(*system) : vanka::build_patches(*system, cfg_.variant, cfg_.mode);
    smoother_ = std::make_unique<vanka::PatchSmoother>(system, std::move(patches), &mass_N_, cfg_.gamma);
  }
  LinearSolveStats solve(std::span<const double> rhs, std::span<double> dx, const LinearTolerance& tol) override {
    if (!smoother_) throw InvalidArgument("relaxation solver used before setup");
    const int steps = std::max(1, cfg_.pre + cfg_.post);
    const linalg::ChebyshevParams cheb{cfg_.cheb_a, cfg_.cheb_b, steps};
    auto precond = [this, cheb](std::span<const double> r, std::span<double> z) {
      std::fill(z.begin(), z.end(), 0.0);
      smoother_->smooth(cheb, r, z);
    };
    return from_krylov(
        linalg::fgmres(matvec(*system_), precond, rhs, dx, {tol.rtol, tol.atol, tol.max_iterations, 0}));
  }

 private:
  multigrid::CycleConfig cfg_;
  std::shared_ptr<const fem::BlockSystem> system_;
  std::shared_ptr<const fem::SpaceLayout> mass_layout_;
  linalg::CsrMatrix mass_N_;
  std::unique_ptr<vanka::PatchSmoother> smoother_;
};

}  // namespace

std::unique_ptr<LinearSolver> make_direct_solver() { return std::make_unique<DirectSolver>(); }

std::unique_ptr<LinearSolver> make_multigrid_solver(std::shared_ptr<multigrid::Hierarchy> hierarchy) {
  if (!hierarchy) throw InvalidArgument("multigrid solver needs a hierarchy");
  return std::make_unique<MultigridSolver>(std::move(hierarchy));
}

std::unique_ptr<LinearSolver> make_relaxation_solver(const multigrid::CycleConfig& cfg) {
  return std::make_unique<RelaxationSolver>(cfg);
}

}  // namespace mhdmg::driver

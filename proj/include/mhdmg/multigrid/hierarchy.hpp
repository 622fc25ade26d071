#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "mhdmg/fem/assembly.hpp"
#include "mhdmg/fem/bcs.hpp"
#include "mhdmg/linalg/chebyshev.hpp"
#include "mhdmg/linalg/operator.hpp"
#include "mhdmg/linalg/sparse_lu.hpp"
#include "mhdmg/mesh.hpp"
#include "mhdmg/vanka/patches.hpp"
#include "mhdmg/vanka/smoother.hpp"

namespace mhdmg::multigrid {

struct CycleConfig {
  int pre = 2;
  int post = 2;
  /// Eigenvalue interval; the step count comes from pre / post.
  double cheb_a = 2.0;
  double cheb_b = 8.0;
  vanka::Variant variant = vanka::Variant::coupled;
  vanka::BuildMode mode = vanka::BuildMode::topological;
  double gamma = 1.0;
  /// Replaces the Vanka patch construction (used for exact-smoother checks).
  std::function<std::vector<vanka::PatchSpec>(const fem::BlockSystem&)> patch_builder;
};

struct LevelInfo {
  int cells = 0;
  int dofs = 0;
  int patches = 0;
};

/// Geometric hierarchy over nested meshes, coarsest first. Coarse operators
/// are rediscretized Jacobians about the interpolated fine state.
class Hierarchy {
 public:
  /// Boundary conditions of the nonlinear problem on one level; corrections
  /// use their homogeneous version.
  using BcBuilder = std::function<fem::BcSet(const fem::SpaceLayout&)>;

  Hierarchy(std::vector<std::shared_ptr<const mesh::Mesh>> meshes, const BcBuilder& bcs, CycleConfig cfg,
            int quadrature_degree = 6);

  /// `n_levels` meshes obtained by repeated uniform refinement.
  static std::vector<std::shared_ptr<const mesh::Mesh>> refinement_chain(const mesh::Mesh& coarsest, int n_levels);

  int n_levels() const { return static_cast<int>(levels_.size()); }
  const std::shared_ptr<const fem::SpaceLayout>& finest_layout() const { return levels_.back().layout; }
  const std::shared_ptr<const fem::Assembler>& finest_assembler() const { return levels_.back().assembler; }
  const fem::BcSet& finest_bcs() const { return levels_.back().bcs; }
  const fem::BlockSystem& system(int level) const;
  const linalg::CsrMatrix& interpolation(int level) const { return levels_.at(level).P; }
  const CycleConfig& config() const { return cfg_; }
  std::vector<LevelInfo> diagnostics() const;

  /// Rebuilds every coarse operator, smoother and the coarse factorization
  /// about `fine_state`. The fine system must carry the finest homogeneous BCs.
  void update(std::shared_ptr<const fem::BlockSystem> fine_system, const fem::StateVector& fine_state,
              const fem::Physics& phys);

  /// One V-cycle on the finest level, improving x in place.
  void vcycle(std::span<const double> b, std::span<double> x) const;
  /// z = V-cycle applied to r from a zero guess (a fixed linear operator).
  linalg::Apply preconditioner() const;

 private:
  struct Level {
    std::shared_ptr<const mesh::Mesh> mesh;
    std::shared_ptr<const fem::SpaceLayout> layout;
    std::shared_ptr<const fem::Assembler> assembler;
    fem::BcSet bcs;  // homogeneous
    std::vector<char> fixed;
    linalg::CsrMatrix mass_N;
    linalg::CsrMatrix P;  // from the next coarser level
    linalg::CsrMatrix R;
    std::shared_ptr<const fem::BlockSystem> system;
    std::unique_ptr<vanka::PatchSmoother> smoother;
  };

  void cycle(int level, std::span<const double> b, std::span<double> x) const;

  std::vector<Level> levels_;
  CycleConfig cfg_;
  std::unique_ptr<linalg::SparseLu> coarse_lu_;
};

}  // namespace mhdmg::multigrid

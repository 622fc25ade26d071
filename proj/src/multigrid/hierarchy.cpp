#include "mhdmg/multigrid/hierarchy.hpp"

#include "mhdmg/error.hpp"
#include "mhdmg/multigrid/transfer.hpp"

namespace mhdmg::multigrid {

namespace {

std::vector<PinnedDof> pins_of(const fem::SpaceLayout& L, const fem::BcSet& bc) {
  std::vector<PinnedDof> pins;
  using fem::Field;
  if (bc.pinned_pressure) {
    const int b = L.offset(Field::pressure);
    pins.push_back({L.p_dof(bc.pinned_pressure->first), b, b + L.n_p()});
  }
  if (bc.pinned_multiplier) {
    const int b = L.offset(Field::multiplier);
    pins.push_back({L.r_dof(bc.pinned_multiplier->first), b, b + L.n_r()});
  }
  return pins;
}

}  // namespace

std::vector<std::shared_ptr<const mesh::Mesh>> Hierarchy::refinement_chain(const mesh::Mesh& coarsest, int n_levels) {
  if (n_levels < 2) throw InvalidArgument("a multigrid hierarchy needs at least two levels");
  std::vector<std::shared_ptr<const mesh::Mesh>> out{std::make_shared<const mesh::Mesh>(coarsest)};
  for (int l = 1; l < n_levels; ++l) out.push_back(std::make_shared<const mesh::Mesh>(mesh::refine_uniform(*out.back())));
  return out;
}

Hierarchy::Hierarchy(std::vector<std::shared_ptr<const mesh::Mesh>> meshes, const BcBuilder& bcs, CycleConfig cfg,
                     int quadrature_degree)
    : cfg_(std::move(cfg)) {
  if (meshes.size() < 2) throw InvalidArgument("a multigrid hierarchy needs at least two levels");
  if (cfg_.pre < 0 || cfg_.post < 0) throw InvalidArgument("smoothing step counts must be non-negative");
  linalg::validate({cfg_.cheb_a, cfg_.cheb_b, 1});
  for (std::size_t l = 0; l < meshes.size(); ++l) {
    if (l > 0) check_nested(*meshes[l - 1], *meshes[l]);
    Level lv;
    lv.mesh = meshes[l];
    lv.layout = std::make_shared<const fem::SpaceLayout>(meshes[l]);
    lv.assembler = std::make_shared<const fem::Assembler>(lv.layout, quadrature_degree);
    lv.bcs = bcs(*lv.layout).homogeneous();
    lv.fixed = fem::resolve(*lv.layout, lv.bcs).mask;
    lv.mass_N = lv.assembler->nedelec_mass();
    if (l > 0) {
      const auto& c = levels_.back();
      lv.P = constrain_interpolation(block_interpolation(*c.layout, *lv.layout), c.fixed, lv.fixed,
                                     pins_of(*lv.layout, lv.bcs));
      lv.R = lv.P.transpose();
    }
    levels_.push_back(std::move(lv));
  }
}

const fem::BlockSystem& Hierarchy::system(int level) const {
  const auto& s = levels_.at(level).system;
  if (!s) throw InvalidArgument("multigrid hierarchy has not been updated");
  return *s;
}

std::vector<LevelInfo> Hierarchy::diagnostics() const {
  std::vector<LevelInfo> out;
  for (const auto& l : levels_)
    out.push_back({l.mesh->n_cells(), l.layout->size(), l.smoother ? l.smoother->n_patches() : 0});
  return out;
}

void Hierarchy::update(std::shared_ptr<const fem::BlockSystem> fine_system, const fem::StateVector& fine_state,
                       const fem::Physics& phys) {
  auto& top = levels_.back();
  if (fine_system->layout != top.layout || fine_state.layout != top.layout)
    throw InvalidArgument("fine system or state does not live on the finest multigrid level");
  if (fine_system->constrained != top.fixed)
    throw InvalidArgument("fine system boundary conditions differ from the hierarchy's");

  // the time-discretization references belong to the fine level only; the
  // Jacobian does not depend on them
  fem::Physics coarse_phys = phys;
  coarse_phys.mass_reference.clear();
  coarse_phys.explicit_load.clear();
  coarse_phys.discrete_load.clear();

  fem::StateVector state = fine_state;
  top.system = std::move(fine_system);
  for (int l = n_levels() - 2; l >= 0; --l) {
    auto& lv = levels_[l];
    state = restrict_state(state, lv.layout);
    auto sys = lv.assembler->jacobian(state, coarse_phys);
    fem::apply_bcs(sys, lv.bcs);
    lv.system = std::make_shared<const fem::BlockSystem>(std::move(sys));
  }
  for (int l = 1; l < n_levels(); ++l) {
    auto& lv = levels_[l];
    auto patches = cfg_.patch_builder ? cfg_.patch_builder(*lv.system)
                                      : vanka::build_patches(*lv.system, cfg_.variant, cfg_.mode);
    lv.smoother = std::make_unique<vanka::PatchSmoother>(lv.system, std::move(patches), &lv.mass_N, cfg_.gamma);
  }
  try {
    coarse_lu_ = std::make_unique<linalg::SparseLu>(levels_[0].system->matrix);
  } catch (const SingularMatrix& e) {
    throw SingularMatrix(std::string("coarse-grid operator is singular (is every nullspace pinned?): ") + e.what(),
                         e.position());
  }
}

void Hierarchy::cycle(int l, std::span<const double> b, std::span<double> x) const {
  if (l == 0) {
    coarse_lu_->solve(b, x);
    return;
  }
  const auto& lv = levels_[l];
  const auto& A = lv.system->matrix;
  if (cfg_.pre > 0) lv.smoother->smooth({cfg_.cheb_a, cfg_.cheb_b, cfg_.pre}, b, x);
  std::vector<double> r(A.rows());
  A.residual(b, x, r);
  std::vector<double> rc(lv.R.rows()), xc(lv.R.rows(), 0.0), corr(A.rows());
  lv.R.multiply(r, rc);
  cycle(l - 1, rc, xc);
  lv.P.multiply(xc, corr);
  linalg::axpy(1.0, corr, x);
  if (cfg_.post > 0) lv.smoother->smooth({cfg_.cheb_a, cfg_.cheb_b, cfg_.post}, b, x);
}

void Hierarchy::vcycle(std::span<const double> b, std::span<double> x) const {
  if (!coarse_lu_) throw InvalidArgument("multigrid hierarchy has not been updated");
  const int n = levels_.back().layout->size();
  if (static_cast<int>(b.size()) != n || static_cast<int>(x.size()) != n)
    throw InvalidArgument("vector length does not match the finest multigrid level");
  cycle(n_levels() - 1, b, x);
}

linalg::Apply Hierarchy::preconditioner() const {
  return [this](std::span<const double> r, std::span<double> z) {
    std::fill(z.begin(), z.end(), 0.0);
    vcycle(r, z);
  };
}

}  // namespace mhdmg::multigrid

#include "mhdmg/vanka/smoother.hpp"

#include <string>

#include "mhdmg/error.hpp"

namespace mhdmg::vanka {

namespace {

// `local` maps global DoFs to patch positions; all -1 on entry and exit.
Eigen::MatrixXd gather(const fem::BlockSystem& system, const PatchSpec& patch,
                       const linalg::CsrMatrix* nedelec_mass, double gamma, std::vector<int>& local) {
  const auto& A = system.matrix;
  const int n = static_cast<int>(patch.dofs.size());
  for (int i = 0; i < n; ++i) local[patch.dofs[i]] = i;

  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
  const auto rp = A.row_ptr();
  const auto ci = A.col_idx();
  const auto va = A.values();
  for (int i = 0; i < n; ++i) {
    const int g = patch.dofs[i];
    for (int k = rp[g]; k < rp[g + 1]; ++k) {
      const int j = local[ci[k]];
      if (j >= 0) M(i, j) = va[k];
    }
  }
  if (nedelec_mass) {
    const int b0 = system.layout->offset(fem::Field::magnetic);
    const int nb = system.layout->n_B();
    const auto mp = nedelec_mass->row_ptr();
    const auto mc = nedelec_mass->col_idx();
    const auto mv = nedelec_mass->values();
    for (int i = 0; i < n; ++i) {
      const int g = patch.dofs[i] - b0;
      if (g < 0 || g >= nb) continue;
      for (int k = mp[g]; k < mp[g + 1]; ++k) {
        const int j = local[b0 + mc[k]];
        if (j >= 0) M(i, j) += gamma * mv[k];
      }
    }
  }
  for (int d : patch.dofs) local[d] = -1;
  return M;
}

}  // namespace

Eigen::MatrixXd patch_matrix(const fem::BlockSystem& system, const PatchSpec& patch,
                             const linalg::CsrMatrix* nedelec_mass, double gamma) {
  std::vector<int> local(system.matrix.rows(), -1);
  return gather(system, patch, nedelec_mass, gamma, local);
}

PatchSmoother::PatchSmoother(std::shared_ptr<const fem::BlockSystem> system, std::vector<PatchSpec> patches,
                             const linalg::CsrMatrix* nedelec_mass, double gamma)
    : system_(std::move(system)), revision_(system_->revision), patches_(std::move(patches)) {
  lu_.reserve(patches_.size());
  std::vector<int> local(system_->matrix.rows(), -1);
  for (const auto& p : patches_) {
    if (p.regularized && !nedelec_mass)
      throw InvalidArgument("regularized Vanka patch needs a Nedelec mass matrix");
    const auto M = gather(*system_, p, p.regularized ? nedelec_mass : nullptr, gamma, local);
    linalg::DenseLu lu(M);
    if (lu.singular())
      throw SingularMatrix("singular " + to_string(p.kind) + " Vanka patch at seed vertex " +
                               std::to_string(p.seed) + " (rank " + std::to_string(lu.rank_estimate(M)) +
                               " of " + std::to_string(M.rows()) + ")",
                           p.seed);
    lu_.push_back(std::move(lu));
  }
}

std::vector<PatchInfo> PatchSmoother::diagnostics() const {
  std::vector<PatchInfo> out;
  for (std::size_t i = 0; i < patches_.size(); ++i)
    out.push_back({patches_[i].kind, patches_[i].seed, static_cast<int>(patches_[i].dofs.size()),
                   lu_[i].pivot_ratio()});
  return out;
}

void PatchSmoother::check_current() const {
  if (system_->revision != revision_)
    throw InvalidArgument("Vanka factorizations are stale: the system changed after they were built");
}

void PatchSmoother::precondition(std::span<const double> r, std::span<double> z) const {
  check_current();
  const int n = system_->matrix.rows();
  if (static_cast<int>(r.size()) != n || static_cast<int>(z.size()) != n)
    throw InvalidArgument("Vanka vector length does not match the system");
  std::fill(z.begin(), z.end(), 0.0);
  Eigen::VectorXd rl, zl;
  for (std::size_t i = 0; i < patches_.size(); ++i) {
    const auto& d = patches_[i].dofs;
    rl.resize(static_cast<Eigen::Index>(d.size()));
    for (std::size_t k = 0; k < d.size(); ++k) rl[k] = r[d[k]];
    zl = lu_[i].solve(rl);
    for (std::size_t k = 0; k < d.size(); ++k) z[d[k]] += zl[k];
  }
}

void PatchSmoother::additive_sweep(std::span<const double> b, std::span<double> x) const {
  const int n = system_->matrix.rows();
  std::vector<double> r(n), z(n);
  system_->matrix.residual(b, x, r);
  precondition(r, z);
  linalg::axpy(1.0, z, x);
}

void PatchSmoother::smooth(const linalg::ChebyshevParams& cheb, std::span<const double> b,
                           std::span<double> x) const {
  check_current();
  const auto& A = system_->matrix;
  linalg::chebyshev_apply([&A](std::span<const double> in, std::span<double> out) { A.multiply(in, out); },
                          [this](std::span<const double> in, std::span<double> out) { precondition(in, out); },
                          cheb, b, x);
}

}  // namespace mhdmg::vanka

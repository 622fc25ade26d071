#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "mhdmg/fem/assembly.hpp"
#include "mhdmg/linalg/chebyshev.hpp"
#include "mhdmg/linalg/csr.hpp"
#include "mhdmg/linalg/dense_lu.hpp"
#include "mhdmg/vanka/patches.hpp"

namespace mhdmg::vanka {

struct PatchInfo {
  PatchKind kind;
  int seed;
  int size;
  double pivot_ratio;
};

/// Dense restriction V^T A V of the system matrix to the patch DoFs. With a
/// Nedelec mass given, gamma * M_N is added to the (B, B) entries first.
Eigen::MatrixXd patch_matrix(const fem::BlockSystem& system, const PatchSpec& patch,
                             const linalg::CsrMatrix* nedelec_mass = nullptr, double gamma = 1.0);

/// Additive Schwarz smoother over a fixed set of factorized patches.
class PatchSmoother {
 public:
  /// Patches flagged `regularized` use D + gamma * M_N. Throws SingularMatrix
  /// naming the seed when a factorization fails.
  PatchSmoother(std::shared_ptr<const fem::BlockSystem> system, std::vector<PatchSpec> patches,
                const linalg::CsrMatrix* nedelec_mass, double gamma = 1.0);

  int n_patches() const { return static_cast<int>(patches_.size()); }
  const std::vector<PatchSpec>& patches() const { return patches_; }
  std::vector<PatchInfo> diagnostics() const;

  /// z = sum_l V_l M_ll^{-1} V_l^T r, summed in patch order.
  void precondition(std::span<const double> r, std::span<double> z) const;
  /// x += precondition(b - A x); the residual is formed once.
  void additive_sweep(std::span<const double> b, std::span<double> x) const;
  /// Chebyshev-accelerated sweeps with the additive update as preconditioner.
  void smooth(const linalg::ChebyshevParams& cheb, std::span<const double> b, std::span<double> x) const;

  const fem::BlockSystem& system() const { return *system_; }

 private:
  void check_current() const;

  std::shared_ptr<const fem::BlockSystem> system_;
  std::uint64_t revision_;
  std::vector<PatchSpec> patches_;
  std::vector<linalg::DenseLu> lu_;
};

}  // namespace mhdmg::vanka

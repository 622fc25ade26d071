#pragma once

#include <span>
#include <vector>

#include "mhdmg/linalg/operator.hpp"

namespace mhdmg::linalg {

struct KrylovOptions {
  double rtol = 1e-6;
  double atol = 1e-6;
  int max_iterations = 200;
  int restart = 0;  // Krylov dimension cap; 0 disables restarting
};

enum class KrylovStatus { converged, max_iterations, breakdown };

struct KrylovResult {
  KrylovStatus status = KrylovStatus::max_iterations;
  int iterations = 0;
  double initial_residual = 0.0;
  double final_residual = 0.0;
  std::vector<double> residual_history;  // entry k: residual norm after k iterations
};

/// Right-preconditioned flexible GMRES. x holds the initial guess on entry.
/// Stops once the residual norm is at most max(rtol * |r0|, atol).
/// A null preconditioner means the identity.
KrylovResult fgmres(const Apply& op, const Apply& precond, std::span<const double> b, std::span<double> x,
                    const KrylovOptions& opts);

}  // namespace mhdmg::linalg

#pragma once

#include <span>

#include "mhdmg/linalg/operator.hpp"

namespace mhdmg::linalg {

/// Eigenvalue bounds [a, b] of the preconditioned operator and the number of steps.
struct ChebyshevParams {
  double a = 1.0;
  double b = 1.0;
  int steps = 1;
};

/// Throws InvalidArgument unless 0 < a <= b and steps >= 1.
void validate(const ChebyshevParams& p);

/// `steps` iterations of preconditioned Chebyshev semi-iteration on [a, b],
/// updating x in place. With a == b every step is a Richardson step with
/// weight 1/a.
void chebyshev_apply(const Apply& op, const Apply& precond, const ChebyshevParams& params,
                     std::span<const double> b, std::span<double> x);

}  // namespace mhdmg::linalg

#pragma once

#include <functional>

#include "mhdmg/fem/basis.hpp"

namespace mhdmg::fem {

using VectorFunction = std::function<Vec2(double x, double y)>;
using ScalarFunction = std::function<double(double x, double y)>;

/// Closed-form fields (u, B, p, r); empty members evaluate to zero.
struct AnalyticState {
  VectorFunction u;
  VectorFunction B;
  ScalarFunction p;
  ScalarFunction r;
};

}  // namespace mhdmg::fem

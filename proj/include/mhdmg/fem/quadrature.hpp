#pragma once

#include <array>
#include <vector>

namespace mhdmg::fem {

/// Symmetric rule on the reference triangle. Points are barycentric
/// coordinates; weights sum to one (multiply by the cell area).
struct TriangleRule {
  int degree = 0;
  std::vector<std::array<double, 3>> points;
  std::vector<double> weights;
  int size() const { return static_cast<int>(weights.size()); }
};

/// Smallest built-in symmetric rule exact to at least `degree` (supports up to 8).
const TriangleRule& triangle_rule(int degree);

/// Gauss-Legendre rule on [0, 1].
struct LineRule {
  std::vector<double> points;
  std::vector<double> weights;
};
const LineRule& gauss_legendre_unit(int n_points);

}  // namespace mhdmg::fem

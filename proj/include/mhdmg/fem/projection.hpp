#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "mhdmg/fem/analytic.hpp"
#include "mhdmg/fem/basis.hpp"
#include "mhdmg/fem/layout.hpp"

namespace mhdmg::fem {

/// Tangential moment of v along edge e in its canonical direction.
double edge_moment(const mesh::Mesh& m, int edge, const VectorFunction& v);

/// Canonical interpolant: P2/P1 nodal values and Nedelec edge moments.
StateVector interpolate(std::shared_ptr<const SpaceLayout> layout, const AnalyticState& fields);

/// Discrete fields of a state at one point of a cell.
struct PointValues {
  Vec2 u{};
  std::array<Vec2, 2> grad_u{};  // grad_u[c] = gradient of component c
  Vec2 B{};
  double curl_B = 0.0;
  double p = 0.0;
  double r = 0.0;
  Vec2 grad_r{};
};

PointValues evaluate(const StateVector& x, int cell, const PointBasis& basis);
/// Point lookup by cell search; throws when p is outside the mesh.
PointValues evaluate_at(const StateVector& x, const mesh::Point& p);

using CellSource = std::function<double(int cell, const PointBasis& basis, const mesh::Point& p)>;

/// L2 projection onto P1: solves M_1 c = b with b_i = int(source * psi_i).
std::vector<double> project_to_p1(const SpaceLayout& layout, const CellSource& source, int degree = 6);
/// L2 projection onto piecewise constants (one value per cell).
std::vector<double> project_to_p0(const SpaceLayout& layout, const CellSource& source, int degree = 6);

}  // namespace mhdmg::fem

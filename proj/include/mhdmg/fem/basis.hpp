#pragma once

#include <array>
#include <vector>

#include "mhdmg/fem/layout.hpp"
#include "mhdmg/fem/quadrature.hpp"
#include "mhdmg/mesh.hpp"

namespace mhdmg::fem {

using Vec2 = std::array<double, 2>;

/// Affine cell data: area, barycentric gradients, vertex coordinates and
/// Nedelec orientation signs.
struct CellGeometry {
  std::array<mesh::Point, 3> x;
  std::array<Vec2, 3> grad_lambda;
  std::array<double, 3> edge_sign;
  double area = 0.0;

  mesh::Point map(const std::array<double, 3>& bary) const {
    return {bary[0] * x[0].x + bary[1] * x[1].x + bary[2] * x[2].x,
            bary[0] * x[0].y + bary[1] * x[1].y + bary[2] * x[2].y};
  }
};

CellGeometry cell_geometry(const SpaceLayout& layout, int cell);

/// Barycentric coordinates of p with respect to the cell (may lie outside).
std::array<double, 3> barycentric(const CellGeometry& g, const mesh::Point& p);

/// All basis functions of the cell tabulated at one point.
struct PointBasis {
  std::array<double, 6> p2;
  std::array<Vec2, 6> p2_grad;
  std::array<double, 3> p1;
  std::array<Vec2, 3> p1_grad;
  std::array<Vec2, 3> ned;
  std::array<double, 3> ned_curl;
};

void tabulate(const CellGeometry& g, const std::array<double, 3>& bary, PointBasis& out);

enum class SpaceKind { p1, p2, nedelec };

/// Physical-space tabulation of one scalar or vector space at each point of a rule.
/// For nedelec the values are vectors and `curls` is filled; for P1/P2 the values
/// are scalars and `grads` is filled.
struct BasisTable {
  SpaceKind kind;
  int n_basis = 0;
  std::vector<double> weights;            // rule weight * area
  std::vector<std::vector<double>> values;      // [point][basis] (scalar spaces)
  std::vector<std::vector<Vec2>> grads;         // [point][basis]
  std::vector<std::vector<Vec2>> vectors;       // [point][basis] (nedelec)
  std::vector<std::vector<double>> curls;       // [point][basis]
};

BasisTable eval_basis(const SpaceLayout& layout, SpaceKind kind, int cell, const TriangleRule& rule);

}  // namespace mhdmg::fem

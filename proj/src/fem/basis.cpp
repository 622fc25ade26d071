#include "mhdmg/fem/basis.hpp"

#include "mhdmg/error.hpp"

namespace mhdmg::fem {

CellGeometry cell_geometry(const SpaceLayout& layout, int cell) {
  const auto& m = layout.mesh();
  const auto& t = m.cell(cell);
  CellGeometry g;
  for (int k = 0; k < 3; ++k) g.x[k] = m.vertex(t[k]);
  const double j11 = g.x[1].x - g.x[0].x, j12 = g.x[2].x - g.x[0].x;
  const double j21 = g.x[1].y - g.x[0].y, j22 = g.x[2].y - g.x[0].y;
  const double det = j11 * j22 - j12 * j21;
  g.area = 0.5 * det;
  // rows of J^{-1} are the gradients of lambda_1 and lambda_2
  g.grad_lambda[1] = {j22 / det, -j12 / det};
  g.grad_lambda[2] = {-j21 / det, j11 / det};
  g.grad_lambda[0] = {-g.grad_lambda[1][0] - g.grad_lambda[2][0],
                      -g.grad_lambda[1][1] - g.grad_lambda[2][1]};
  g.edge_sign = layout.cell_dofs(cell).edge_sign;
  return g;
}

std::array<double, 3> barycentric(const CellGeometry& g, const mesh::Point& p) {
  const double dx = p.x - g.x[0].x, dy = p.y - g.x[0].y;
  const double l1 = g.grad_lambda[1][0] * dx + g.grad_lambda[1][1] * dy;
  const double l2 = g.grad_lambda[2][0] * dx + g.grad_lambda[2][1] * dy;
  return {1.0 - l1 - l2, l1, l2};
}

void tabulate(const CellGeometry& g, const std::array<double, 3>& l, PointBasis& out) {
  const auto& gl = g.grad_lambda;
  for (int i = 0; i < 3; ++i) {
    out.p1[i] = l[i];
    out.p1_grad[i] = gl[i];
    out.p2[i] = l[i] * (2.0 * l[i] - 1.0);
    const double s = 4.0 * l[i] - 1.0;
    out.p2_grad[i] = {s * gl[i][0], s * gl[i][1]};
  }
  for (int k = 0; k < 3; ++k) {
    const int a = (k + 1) % 3, b = (k + 2) % 3;
    out.p2[3 + k] = 4.0 * l[a] * l[b];
    out.p2_grad[3 + k] = {4.0 * (l[a] * gl[b][0] + l[b] * gl[a][0]),
                          4.0 * (l[a] * gl[b][1] + l[b] * gl[a][1])};
    const double sg = g.edge_sign[k];
    out.ned[k] = {sg * (l[a] * gl[b][0] - l[b] * gl[a][0]),
                  sg * (l[a] * gl[b][1] - l[b] * gl[a][1])};
    out.ned_curl[k] = sg * 2.0 * (gl[a][0] * gl[b][1] - gl[a][1] * gl[b][0]);
  }
}

BasisTable eval_basis(const SpaceLayout& layout, SpaceKind kind, int cell, const TriangleRule& rule) {
  if (cell < 0 || cell >= layout.mesh().n_cells()) throw InvalidArgument("eval_basis: invalid cell");
  const CellGeometry g = cell_geometry(layout, cell);
  BasisTable t;
  t.kind = kind;
  t.n_basis = kind == SpaceKind::p2 ? 6 : 3;
  PointBasis pb;
  for (int q = 0; q < rule.size(); ++q) {
    tabulate(g, rule.points[q], pb);
    t.weights.push_back(rule.weights[q] * g.area);
    switch (kind) {
      case SpaceKind::p1:
        t.values.emplace_back(pb.p1.begin(), pb.p1.end());
        t.grads.emplace_back(pb.p1_grad.begin(), pb.p1_grad.end());
        break;
      case SpaceKind::p2:
        t.values.emplace_back(pb.p2.begin(), pb.p2.end());
        t.grads.emplace_back(pb.p2_grad.begin(), pb.p2_grad.end());
        break;
      case SpaceKind::nedelec:
        t.vectors.emplace_back(pb.ned.begin(), pb.ned.end());
        t.curls.emplace_back(pb.ned_curl.begin(), pb.ned_curl.end());
        break;
    }
  }
  return t;
}

}  // namespace mhdmg::fem

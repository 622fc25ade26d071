#include "mhdmg/fem/projection.hpp"

#include "mhdmg/error.hpp"
#include "mhdmg/fem/quadrature.hpp"
#include "mhdmg/linalg/sparse_lu.hpp"

namespace mhdmg::fem {

double edge_moment(const mesh::Mesh& m, int edge, const VectorFunction& v) {
  const auto& a = m.vertex(m.edge(edge)[0]);
  const auto& b = m.vertex(m.edge(edge)[1]);
  const double tx = b.x - a.x, ty = b.y - a.y;
  const auto& rule = gauss_legendre_unit(5);
  double s = 0.0;
  for (std::size_t q = 0; q < rule.points.size(); ++q) {
    const double t = rule.points[q];
    const Vec2 f = v(a.x + t * tx, a.y + t * ty);
    s += rule.weights[q] * (f[0] * tx + f[1] * ty);
  }
  return s;
}

StateVector interpolate(std::shared_ptr<const SpaceLayout> layout, const AnalyticState& fields) {
  StateVector x(layout);
  const auto& L = *layout;
  const auto& m = L.mesh();
  for (int v = 0; v < m.n_vertices(); ++v) {
    if (m.vertex_master(v) != v) continue;
    const auto& p = m.vertex(v);
    if (fields.u) {
      const Vec2 u = fields.u(p.x, p.y);
      x.data[L.u_vertex_dof(v, 0)] = u[0];
      x.data[L.u_vertex_dof(v, 1)] = u[1];
    }
    if (fields.p) x.data[L.p_dof(v)] = fields.p(p.x, p.y);
    if (fields.r) x.data[L.r_dof(v)] = fields.r(p.x, p.y);
  }
  for (int e = 0; e < m.n_edges(); ++e) {
    if (m.edge_master(e) != e) continue;
    if (fields.u) {
      const auto& a = m.vertex(m.edge(e)[0]);
      const auto& b = m.vertex(m.edge(e)[1]);
      const Vec2 u = fields.u(0.5 * (a.x + b.x), 0.5 * (a.y + b.y));
      x.data[L.u_edge_dof(e, 0)] = u[0];
      x.data[L.u_edge_dof(e, 1)] = u[1];
    }
    if (fields.B) x.data[L.B_dof(e)] = edge_moment(m, e, fields.B);
  }
  return x;
}

PointValues evaluate(const StateVector& x, int cell, const PointBasis& pb) {
  const auto& d = x.layout->cell_dofs(cell).dofs;
  PointValues v;
  for (int n = 0; n < 6; ++n) {
    for (int c = 0; c < 2; ++c) {
      const double a = x.data[d[kLocalU + 2 * n + c]];
      v.u[c] += a * pb.p2[n];
      v.grad_u[c][0] += a * pb.p2_grad[n][0];
      v.grad_u[c][1] += a * pb.p2_grad[n][1];
    }
  }
  for (int k = 0; k < 3; ++k) {
    const double b = x.data[d[kLocalB + k]];
    v.B[0] += b * pb.ned[k][0];
    v.B[1] += b * pb.ned[k][1];
    v.curl_B += b * pb.ned_curl[k];
  }
  for (int l = 0; l < 3; ++l) {
    v.p += x.data[d[kLocalP + l]] * pb.p1[l];
    const double r = x.data[d[kLocalR + l]];
    v.r += r * pb.p1[l];
    v.grad_r[0] += r * pb.p1_grad[l][0];
    v.grad_r[1] += r * pb.p1_grad[l][1];
  }
  return v;
}

PointValues evaluate_at(const StateVector& x, const mesh::Point& p) {
  const auto& L = *x.layout;
  for (int c = 0; c < L.mesh().n_cells(); ++c) {
    const CellGeometry g = cell_geometry(L, c);
    const auto l = barycentric(g, p);
    if (l[0] >= -1e-12 && l[1] >= -1e-12 && l[2] >= -1e-12) {
      PointBasis pb;
      tabulate(g, l, pb);
      return evaluate(x, c, pb);
    }
  }
  throw InvalidArgument("evaluate_at: point outside mesh");
}

std::vector<double> project_to_p1(const SpaceLayout& L, const CellSource& source, int degree) {
  const auto& m = L.mesh();
  const auto& rule = triangle_rule(degree);
  std::vector<double> rhs(L.n_p(), 0.0);
  std::vector<linalg::Triplet> t;
  t.reserve(static_cast<std::size_t>(m.n_cells()) * 9);
  PointBasis pb;
  for (int c = 0; c < m.n_cells(); ++c) {
    const CellGeometry g = cell_geometry(L, c);
    const auto& tri = m.cell(c);
    for (int q = 0; q < rule.size(); ++q) {
      tabulate(g, rule.points[q], pb);
      const double w = rule.weights[q] * g.area;
      const double s = source(c, pb, g.map(rule.points[q]));
      for (int k = 0; k < 3; ++k) rhs[L.vertex_node(tri[k])] += w * s * pb.p1[k];
    }
    for (int k = 0; k < 3; ++k)
      for (int l = 0; l < 3; ++l)
        t.push_back({L.vertex_node(tri[k]), L.vertex_node(tri[l]), g.area * (k == l ? 2.0 : 1.0) / 12.0});
  }
  const auto M = linalg::CsrMatrix::from_triplets(L.n_p(), L.n_p(), std::move(t));
  const linalg::SparseLu lu(M);
  std::vector<double> x(L.n_p());
  lu.solve(rhs, x);
  return x;
}

std::vector<double> project_to_p0(const SpaceLayout& L, const CellSource& source, int degree) {
  const auto& m = L.mesh();
  const auto& rule = triangle_rule(degree);
  std::vector<double> out(m.n_cells(), 0.0);
  PointBasis pb;
  for (int c = 0; c < m.n_cells(); ++c) {
    const CellGeometry g = cell_geometry(L, c);
    double s = 0.0;
    for (int q = 0; q < rule.size(); ++q) {
      tabulate(g, rule.points[q], pb);
      s += rule.weights[q] * source(c, pb, g.map(rule.points[q]));
    }
    out[c] = s;
  }
  return out;
}

}  // namespace mhdmg::fem

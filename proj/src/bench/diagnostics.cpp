#include "mhdmg/bench/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "mhdmg/error.hpp"
#include "mhdmg/fem/basis.hpp"
#include "mhdmg/fem/projection.hpp"
#include "mhdmg/fem/quadrature.hpp"

namespace mhdmg::bench {

FieldErrors field_errors(const fem::StateVector& x, const fem::AnalyticState& exact,
                         const fem::ScalarFunction& exact_curl_B, int degree) {
  const auto& L = *x.layout;
  const auto& m = L.mesh();
  const auto& rule = fem::triangle_rule(degree);
  auto val = [](const auto& f, double a, double b) { return f ? f(a, b) : decltype(f(a, b)){}; };

  // pass 1: mean pressure difference
  double area = 0.0, mean_dp = 0.0;
  fem::PointBasis pb;
  for (int c = 0; c < m.n_cells(); ++c) {
    const auto g = fem::cell_geometry(L, c);
    for (std::size_t q = 0; q < rule.weights.size(); ++q) {
      fem::tabulate(g, rule.points[q], pb);
      const auto pt = g.map(rule.points[q]);
      const double w = rule.weights[q] * g.area;
      mean_dp += w * (fem::evaluate(x, c, pb).p - val(exact.p, pt.x, pt.y));
      area += w;
    }
  }
  mean_dp /= area;

  FieldErrors e;
  for (int c = 0; c < m.n_cells(); ++c) {
    const auto g = fem::cell_geometry(L, c);
    for (std::size_t q = 0; q < rule.weights.size(); ++q) {
      fem::tabulate(g, rule.points[q], pb);
      const auto pt = g.map(rule.points[q]);
      const double w = rule.weights[q] * g.area;
      const auto v = fem::evaluate(x, c, pb);
      const fem::Vec2 u = val(exact.u, pt.x, pt.y), B = val(exact.B, pt.x, pt.y);
      const double du0 = v.u[0] - u[0], du1 = v.u[1] - u[1];
      const double dB0 = v.B[0] - B[0], dB1 = v.B[1] - B[1];
      const double dp = v.p - val(exact.p, pt.x, pt.y) - mean_dp;
      const double dj = v.curl_B - val(exact_curl_B, pt.x, pt.y);
      const double dr = v.r - val(exact.r, pt.x, pt.y);
      e.u_l2 += w * (du0 * du0 + du1 * du1);
      e.B_l2 += w * (dB0 * dB0 + dB1 * dB1);
      e.p_l2 += w * dp * dp;
      e.curl_B_l2 += w * dj * dj;
      e.r_l2 += w * dr * dr;
    }
  }
  e.B_hcurl = std::sqrt(e.B_l2 + e.curl_B_l2);
  for (double* d : {&e.u_l2, &e.p_l2, &e.B_l2, &e.curl_B_l2, &e.r_l2}) *d = std::sqrt(*d);
  return e;
}

double projected_curl_at(const fem::StateVector& x, const mesh::Point& at) {
  const auto& L = *x.layout;
  const int v = L.mesh().find_vertex(at, 1e-10);
  if (v < 0) throw InvalidArgument("the curl is sampled at a mesh vertex, and the requested point is not one");
  const auto c = fem::project_to_p1(L, [&x](int cell, const fem::PointBasis& pb, const mesh::Point&) {
    return fem::evaluate(x, cell, pb).curl_B;
  });
  return c[L.vertex_node(v)];
}

double reconnection_rate(double curl, double baseline, double Re_m) { return (curl - baseline) / std::sqrt(Re_m); }

CflNumbers cfl_numbers(const fem::StateVector& x, double dt) {
  const auto& L = *x.layout;
  const auto uu = fem::project_to_p0(L, [&x](int cell, const fem::PointBasis& pb, const mesh::Point&) {
    const auto v = fem::evaluate(x, cell, pb);
    return v.u[0] * v.u[0] + v.u[1] * v.u[1];
  });
  const auto bb = fem::project_to_p0(L, [&x](int cell, const fem::PointBasis& pb, const mesh::Point&) {
    const auto v = fem::evaluate(x, cell, pb);
    return v.B[0] * v.B[0] + v.B[1] * v.B[1];
  });
  CflNumbers out;
  out.u_max = std::sqrt(std::max(0.0, *std::max_element(uu.begin(), uu.end())));
  out.B_max = std::sqrt(std::max(0.0, *std::max_element(bb.begin(), bb.end())));
  const double h = L.mesh().shortest_edge();
  out.fluid = out.u_max * dt / h;
  out.alfven = out.B_max * dt / h;
  return out;
}

}  // namespace mhdmg::bench

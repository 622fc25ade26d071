#include "mhdmg/bench/island.hpp"

#include <cmath>

#include "mhdmg/error.hpp"

namespace mhdmg::bench {

namespace {

double denom(double k, double x, double y) { return std::cosh(2 * M_PI * y) + k * std::cos(2 * M_PI * x); }

}  // namespace

fem::AnalyticState Island::equilibrium() const {
  const double kk = k;
  return {[](double, double) { return fem::Vec2{0.0, 0.0}; },
          [kk](double x, double y) {
            const double d = denom(kk, x, y);
            return fem::Vec2{std::sinh(2 * M_PI * y) / d, kk * std::sin(2 * M_PI * x) / d};
          },
          [kk](double x, double y) {
            const double d = denom(kk, x, y);
            return 0.5 * (1.0 - kk * kk) * (1.0 + 1.0 / (d * d));
          },
          [](double, double) { return 0.0; }};
}

fem::VectorFunction Island::perturbation() const {
  const double e = epsilon;
  return [e](double x, double y) {
    return fem::Vec2{e / M_PI * -std::cos(M_PI * x) * std::sin(M_PI * y / 2),
                     e / M_PI * std::cos(M_PI * y / 2) * std::sin(M_PI * x) / 2};
  };
}

fem::AnalyticState Island::initial() const {
  auto s = equilibrium();
  const auto b0 = s.B;
  const auto db = perturbation();
  s.B = [b0, db](double x, double y) {
    const auto a = b0(x, y), b = db(x, y);
    return fem::Vec2{a[0] + b[0], a[1] + b[1]};
  };
  return s;
}

fem::VectorFunction Island::forcing_g() const {
  const double kk = k, rm = Re_m;
  return [kk, rm](double x, double y) {
    const double d = denom(kk, x, y);
    const double c = -8 * M_PI * M_PI * (kk * kk - 1.0) / (rm * d * d * d);
    return fem::Vec2{c * std::sinh(2 * M_PI * y), c * kk * std::sin(2 * M_PI * x)};
  };
}

fem::ScalarFunction Island::equilibrium_curl_B() const {
  // B = (dPsi/dy, -dPsi/dx) with Psi = log(cosh(2 pi y) + k cos(2 pi x)) / (2 pi),
  // so curl B = -Laplace(Psi) = -2 pi (1 - k^2) / d^2
  const double kk = k;
  return [kk](double x, double y) {
    const double d = denom(kk, x, y);
    return -2 * M_PI * (1.0 - kk * kk) / (d * d);
  };
}

mesh::Mesh Island::mesh(int n) {
  if (n < 2 || n % 2) throw InvalidArgument("island meshes need an even size so the origin is a vertex");
  return mesh::apply_periodic_x(mesh::Mesh::build_structured({mesh::MeshKind::crossed, n, n, -1, 1, -1, 1}));
}

fem::BoundarySpec Island::boundary() const {
  fem::BoundarySpec s;
  s.u_sides = s.B_sides = s.r_sides = mesh::kBottom | mesh::kTop;
  s.data = initial();
  s.pressure_pin = mesh::Point{-1.0, -1.0};
  return s;
}

fem::Physics Island::physics() const {
  if (!(Re > 0.0) || !(Re_m > 0.0)) throw InvalidArgument("Reynolds numbers must be positive");
  fem::Physics p;
  p.Re = Re;
  p.Re_m = Re_m;
  p.g = forcing_g();
  return p;
}

}  // namespace mhdmg::bench

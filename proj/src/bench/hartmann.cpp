#include "mhdmg/bench/hartmann.hpp"

#include <cmath>

#include "mhdmg/error.hpp"

namespace mhdmg::bench {

double Hartmann::hartmann() const { return std::sqrt(Re * Re_m); }

double Hartmann::G() const {
  // 2 Ha sinh(Ha/2) / (Re (cosh(Ha/2) - 1)) = 2 Ha / (Re tanh(Ha/4))
  const double ha = hartmann();
  return 2.0 * ha / (Re * std::tanh(ha / 4.0));
}

double Hartmann::u1(double y) const {
  const double ha = hartmann();
  // cosh(y Ha) / cosh(Ha / 2) written to avoid overflow at large Ha
  const double ratio = std::exp(ha * (std::abs(y) - 0.5)) * (1.0 + std::exp(-2.0 * ha * std::abs(y))) /
                       (1.0 + std::exp(-ha));
  return G() * Re / (2.0 * ha * std::tanh(ha / 2.0)) * (1.0 - ratio);
}

double Hartmann::B1(double y) const {
  const double ha = hartmann();
  // sinh(y Ha) / sinh(Ha / 2), overflow-safe
  const double s = std::copysign(std::exp(ha * (std::abs(y) - 0.5)) * (1.0 - std::exp(-2.0 * ha * std::abs(y))) /
                                     (1.0 - std::exp(-ha)),
                                 y);
  return G() / 2.0 * (s - 2.0 * y);
}

double Hartmann::dB1(double y) const {
  const double ha = hartmann();
  const double c = std::exp(ha * (std::abs(y) - 0.5)) * (1.0 + std::exp(-2.0 * ha * std::abs(y))) / (1.0 - std::exp(-ha));
  return G() / 2.0 * (ha * c - 2.0);
}

fem::AnalyticState Hartmann::exact() const {
  const Hartmann h = *this;
  return {[h](double, double y) { return fem::Vec2{h.u1(y), 0.0}; },
          [h](double, double y) { return fem::Vec2{h.B1(y), 1.0}; },
          [h](double x, double y) {
            const double b = h.B1(y);
            return -h.G() * x - 0.5 * b * b;
          },
          [](double, double) { return 0.0; }};
}

fem::ScalarFunction Hartmann::exact_curl_B() const {
  const Hartmann h = *this;
  return [h](double, double y) { return -h.dB1(y); };
}

mesh::MeshFamily Hartmann::domain(int n, mesh::MeshKind kind) {
  if (n < 1) throw InvalidArgument("Hartmann mesh size must be positive");
  return {kind, n, n, -0.5, 0.5, -0.5, 0.5};
}

fem::BoundarySpec Hartmann::boundary() const {
  fem::BoundarySpec s;
  s.u_sides = s.B_sides = s.r_sides = mesh::kAllSides;
  s.data = exact();
  s.pressure_pin = mesh::Point{0.0, 0.0};
  return s;
}

fem::Physics Hartmann::physics() const {
  if (!(Re > 0.0) || !(Re_m > 0.0)) throw InvalidArgument("Reynolds numbers must be positive");
  fem::Physics p;
  p.Re = Re;
  p.Re_m = Re_m;
  return p;
}

fem::StateVector Hartmann::initial_guess(std::shared_ptr<const fem::SpaceLayout> layout) const {
  fem::StateVector x(layout);
  fem::impose(x, fem::make_bcs(*layout, boundary()));
  return x;
}

}  // namespace mhdmg::bench

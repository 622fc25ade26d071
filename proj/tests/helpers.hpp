#pragma once

#include <memory>
#include <random>
#include <vector>

#include "mhdmg/fem/assembly.hpp"
#include "mhdmg/fem/bcs.hpp"
#include "mhdmg/fem/layout.hpp"
#include "mhdmg/mesh.hpp"

namespace mhdmg::testing {

inline std::shared_ptr<const mesh::Mesh> square_mesh(int n, mesh::MeshKind kind = mesh::MeshKind::diagonal,
                                                     double lo = 0.0, double hi = 1.0) {
  return std::make_shared<const mesh::Mesh>(mesh::Mesh::build_structured({kind, n, n, lo, hi, lo, hi}));
}

inline std::shared_ptr<const fem::SpaceLayout> layout_for(std::shared_ptr<const mesh::Mesh> m) {
  return std::make_shared<const fem::SpaceLayout>(std::move(m));
}

inline std::vector<double> random_vector(std::size_t n, unsigned seed, double scale = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-scale, scale);
  std::vector<double> v(n);
  for (auto& x : v) x = dist(rng);
  return v;
}

/// Jacobian about a state with the given interior values, Dirichlet u, B, r
/// on every side and the pressure pinned at the centre, homogeneous data.
inline fem::BlockSystem bc_system(std::shared_ptr<const fem::SpaceLayout> L, const std::vector<double>& state,
                                  double Re = 4.0, double Re_m = 4.0) {
  fem::StateVector x(L);
  x.data = state;
  fem::Physics ph;
  ph.Re = Re;
  ph.Re_m = Re_m;
  auto sys = fem::Assembler(L).jacobian(x, ph);
  fem::BoundarySpec spec;
  spec.u_sides = spec.B_sides = spec.r_sides = mesh::kAllSides;
  spec.pressure_pin = mesh::Point{0.5, 0.5};
  fem::apply_bcs(sys, fem::make_bcs(*L, spec).homogeneous());
  return sys;
}

}  // namespace mhdmg::testing

#pragma once

#include <memory>

#include "mhdmg/fem/analytic.hpp"
#include "mhdmg/fem/assembly.hpp"
#include "mhdmg/fem/bcs.hpp"
#include "mhdmg/mesh.hpp"

namespace mhdmg::bench {

/// Island coalescence on [-1, 1]^2, periodic in x.
struct Island {
  double k = 0.2;
  double epsilon = -0.01;
  double Re = 5000.0;
  double Re_m = 5000.0;

  /// Steady equilibrium (u = 0, r = 0).
  fem::AnalyticState equilibrium() const;
  fem::VectorFunction perturbation() const;
  /// Equilibrium with the perturbed magnetic field.
  fem::AnalyticState initial() const;
  /// Forcing g that makes the equilibrium steady (f = 0).
  fem::VectorFunction forcing_g() const;
  fem::ScalarFunction equilibrium_curl_B() const;

  /// Crossed n x n mesh with the x-sides identified.
  static mesh::Mesh mesh(int n);
  /// u = 0, tangential B from the initial field and r = 0 on y = +-1;
  /// pressure pinned at the corner (-1, -1).
  fem::BoundarySpec boundary() const;
  fem::Physics physics() const;
};

}  // namespace mhdmg::bench

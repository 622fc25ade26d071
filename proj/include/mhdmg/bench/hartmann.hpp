#pragma once

#include <memory>

#include "mhdmg/fem/analytic.hpp"
#include "mhdmg/fem/assembly.hpp"
#include "mhdmg/fem/bcs.hpp"
#include "mhdmg/mesh.hpp"

namespace mhdmg::bench {

/// Steady Hartmann flow on [-1/2, 1/2]^2 with an applied field (0, 1).
struct Hartmann {
  double Re = 4.0;
  double Re_m = 4.0;

  double hartmann() const;
  /// Pressure-gradient constant of the closed-form solution.
  double G() const;
  double u1(double y) const;
  double B1(double y) const;
  double dB1(double y) const;

  /// Exact (u, B, p, r); p vanishes at the origin.
  fem::AnalyticState exact() const;
  /// Exact curl of B (= -B1'(y)).
  fem::ScalarFunction exact_curl_B() const;

  static mesh::MeshFamily domain(int n, mesh::MeshKind kind = mesh::MeshKind::diagonal);
  /// Dirichlet u, B and r on every side from the exact solution; pressure
  /// pinned at the vertex nearest the origin.
  fem::BoundarySpec boundary() const;
  /// The exact solution satisfies the steady equations with f = g = 0.
  fem::Physics physics() const;
  /// Zero state carrying the boundary values.
  fem::StateVector initial_guess(std::shared_ptr<const fem::SpaceLayout> layout) const;
};

}  // namespace mhdmg::bench

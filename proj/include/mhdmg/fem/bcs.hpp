#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "mhdmg/fem/analytic.hpp"
#include "mhdmg/fem/assembly.hpp"
#include "mhdmg/fem/layout.hpp"
#include "mhdmg/mesh.hpp"

namespace mhdmg::fem {

/// Prescribed values: Dirichlet (global DoF, value) pairs and optional pinned
/// constraint values at a vertex.
struct BcSet {
  std::vector<std::pair<int, double>> dirichlet;
  std::optional<std::pair<int, double>> pinned_pressure;    // (raw vertex, value)
  std::optional<std::pair<int, double>> pinned_multiplier;  // (raw vertex, value)

  /// Same constrained DoFs with all values zero (Newton corrections).
  BcSet homogeneous() const;
};

/// Dense per-DoF view of a BcSet.
struct ResolvedBcs {
  std::vector<char> mask;
  std::vector<double> values;
  int count = 0;
};

/// Validates the set (range, duplicates) against the layout.
ResolvedBcs resolve(const SpaceLayout& layout, const BcSet& bc);

/// Symmetric elimination: constrained rows and columns are cleared, the
/// diagonal set to one and the right-hand side lifted. Idempotent.
void apply_bcs(BlockSystem& system, const BcSet& bc);

/// Writes the prescribed values into x.
void impose(StateVector& x, const BcSet& bc);

/// Which boundary sides carry Dirichlet data for each field, and the data.
struct BoundarySpec {
  mesh::SideMask u_sides = mesh::kInterior;
  mesh::SideMask B_sides = mesh::kInterior;
  mesh::SideMask r_sides = mesh::kInterior;
  AnalyticState data;
  /// Pins the pressure at the vertex nearest this point to data.p there.
  std::optional<mesh::Point> pressure_pin;
};

BcSet make_bcs(const SpaceLayout& layout, const BoundarySpec& spec);

}  // namespace mhdmg::fem

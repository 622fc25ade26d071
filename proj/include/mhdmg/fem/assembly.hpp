#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "mhdmg/fem/analytic.hpp"
#include "mhdmg/fem/layout.hpp"
#include "mhdmg/linalg/block_operator.hpp"
#include "mhdmg/linalg/csr.hpp"

namespace mhdmg::fem {

struct BcSet;

/// Physical parameters and time-discretization weights.
///
/// The assembled residual is
///   theta * S(x) + alpha * M (x - mass_reference) + L(x) + explicit_load
/// where S holds the viscous, convective, Lorentz, resistive, induction and
/// forcing terms (with discrete_load), M the u/B mass, and L the pressure, multiplier and
/// constraint terms (always implicit). Steady problems use theta = 1 and
/// alpha = 0.
struct Physics {
  double Re = 1.0;
  double Re_m = 1.0;
  VectorFunction f;
  VectorFunction g;
  double theta = 1.0;
  double alpha = 0.0;
  std::vector<double> mass_reference;  // empty: zero
  std::vector<double> explicit_load;   // empty: zero
  std::vector<double> discrete_load;   // fixed load inside S (theta-weighted); empty: zero
};

/// Monolithic Jacobian with the block layout
///   [F  Z  B^T 0  ]
///   [Y  D  0   C^T]
///   [B  0  0   0  ]
///   [0  C  0   0  ]
/// over x = (u, B, p, r), plus a right-hand side.
struct BlockSystem {
  std::shared_ptr<const SpaceLayout> layout;
  linalg::CsrMatrix matrix;
  std::vector<double> rhs;
  std::vector<char> constrained;  // empty until boundary conditions are applied
  std::uint64_t revision = 0;

  bool bc_applied() const { return !constrained.empty(); }
  /// Copy of one block (rows of `row`, columns of `col`).
  linalg::CsrMatrix block(Field row, Field col) const;
};

/// Process-wide monotone counter; every modification of a BlockSystem takes a
/// fresh value so cached factorizations can detect staleness.
std::uint64_t next_revision();

/// Cell-wise assembly over a fixed sparsity pattern for one layout.
class Assembler {
 public:
  explicit Assembler(std::shared_ptr<const SpaceLayout> layout, int quadrature_degree = 6);

  const SpaceLayout& layout() const { return *layout_; }
  const std::shared_ptr<const SpaceLayout>& layout_ptr() const { return layout_; }
  const linalg::CsrMatrix& pattern() const { return pattern_; }

  /// Nonlinear residual R(x). Constrained rows are zeroed when `bc` is given.
  std::vector<double> residual(const StateVector& x, const Physics& phys, const BcSet* bc = nullptr) const;
  /// The theta-weighted part S(x) alone (with theta = 1), used as an explicit load.
  std::vector<double> spatial_terms(const StateVector& x, const Physics& phys) const;
  /// Newton system J(x) dx = -R(x), without boundary conditions.
  BlockSystem jacobian(const StateVector& x, const Physics& phys) const;

  /// Lowest-order Nedelec mass matrix (n_B x n_B).
  linalg::CsrMatrix nedelec_mass() const;
  /// P1 mass matrix over vertex nodes.
  linalg::CsrMatrix p1_mass() const;

 private:
  enum class Mode { residual, spatial, jacobian };
  void assemble(const StateVector& x, const Physics& phys, Mode mode, std::vector<double>* vec,
                linalg::CsrMatrix* mat) const;

  std::shared_ptr<const SpaceLayout> layout_;
  int degree_;
  linalg::CsrMatrix pattern_;
};

/// Block form of a system: the six coupling blocks plus the (p, r) diagonal.
linalg::BlockOperator make_block_operator(const BlockSystem& system);

/// Whether a (row field, column field) block of the Jacobian is structurally nonzero.
bool block_is_coupled(Field row, Field col);

}  // namespace mhdmg::fem
